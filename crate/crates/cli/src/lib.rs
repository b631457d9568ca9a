//! File formats, CSV reports and the parallel benchmark driver used by the
//! `nakagami` binary.

pub mod bench;
pub mod config;
pub mod error;
pub mod matrix;
pub mod pgm;
pub mod report;
pub mod samples;

use std::path::Path;

use nakagami_core::hmrf::ImageGrid;

pub use error::CliError;

/// Loads a grayscale image. `.pgm` files are read as binary PGM, anything
/// else as a text matrix.
pub fn load_image(path: &Path) -> Result<ImageGrid, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let is_pgm = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
    let (width, height, pixels) = if is_pgm {
        let img = pgm::parse_pgm(&bytes).map_err(|r| CliError::format(path, r))?;
        let pixels = img.pixels.iter().map(|&p| f64::from(p)).collect();
        (img.width, img.height, pixels)
    } else {
        let text = String::from_utf8(bytes).map_err(|_| CliError::format(path, "not UTF-8 text"))?;
        let m = matrix::parse_matrix(&text).map_err(|r| CliError::format(path, r))?;
        (m.cols, m.rows, m.values)
    };
    ImageGrid::new(width, height, pixels).map_err(|e| CliError::format(path, e.to_string()))
}
