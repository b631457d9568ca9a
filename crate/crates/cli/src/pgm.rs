//! Binary PGM (P5) images.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub pixels: Vec<u16>,
}

/// Parses a P5 image. Samples are one byte for maxval < 256 and two
/// big-endian bytes otherwise.
pub fn parse_pgm(bytes: &[u8]) -> Result<Pgm, String> {
    if !bytes.starts_with(b"P5") {
        return Err("not a binary PGM (missing P5 magic)".into());
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for (i, name) in ["width", "height", "maxval"].iter().enumerate() {
        fields[i] = header_field(bytes, &mut pos).ok_or_else(|| format!("bad or missing {name} in header"))?;
    }
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err("zero image dimension".into());
    }
    if maxval == 0 || maxval > 65535 {
        return Err(format!("maxval {maxval} outside 1..=65535"));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err("missing whitespace after maxval".into());
    }
    pos += 1;
    let wide = maxval > 255;
    let n = width * height;
    let need = if wide { 2 * n } else { n };
    let raster = &bytes[pos..];
    if raster.len() < need {
        return Err(format!("raster truncated: expected {need} bytes, found {}", raster.len()));
    }
    let pixels: Vec<u16> = if wide {
        raster[..need].chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect()
    } else {
        raster[..need].iter().map(|&b| u16::from(b)).collect()
    };
    if let Some(p) = pixels.iter().find(|&&p| usize::from(p) > maxval) {
        return Err(format!("sample {p} exceeds maxval {maxval}"));
    }
    Ok(Pgm { width, height, maxval: maxval as u16, pixels })
}

fn header_field(bytes: &[u8], pos: &mut usize) -> Option<usize> {
    loop {
        match bytes.get(*pos)? {
            b'#' => {
                while *bytes.get(*pos)? != b'\n' {
                    *pos += 1;
                }
            }
            c if c.is_ascii_whitespace() => *pos += 1,
            _ => break,
        }
    }
    let start = *pos;
    while bytes.get(*pos).is_some_and(u8::is_ascii_digit) {
        *pos += 1;
    }
    std::str::from_utf8(&bytes[start..*pos]).ok()?.parse().ok()
}

/// Encodes an 8-bit P5 image.
pub fn encode_pgm(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    assert_eq!(pixels.len(), width * height, "pixel count does not match dimensions");
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

/// Gray level for each label: `label · ⌊255 / (K − 1)⌋`.
pub fn label_levels(labels: &[usize], classes: usize) -> Vec<u8> {
    let step = if classes > 1 { 255 / (classes - 1) } else { 0 };
    labels.iter().map(|&l| (l * step).min(255) as u8).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let px = [0u8, 17, 255, 128, 3, 9];
        let enc = encode_pgm(3, 2, &px);
        let dec = parse_pgm(&enc).unwrap();
        assert_eq!((dec.width, dec.height, dec.maxval), (3, 2, 255));
        assert_eq!(dec.pixels, px.iter().map(|&p| p as u16).collect::<Vec<_>>());
    }

    #[test]
    fn header_comments_and_wide_samples() {
        let mut bytes = b"P5 # made by hand\n2 1\n# depth\n1000\n".to_vec();
        bytes.extend_from_slice(&[0x03, 0xE8, 0x00, 0x07]);
        let img = parse_pgm(&bytes).unwrap();
        assert_eq!(img.pixels, vec![1000, 7]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_pgm(b"P2\n1 1\n255\n0").is_err());
        assert!(parse_pgm(b"P5\n2 2\n255\n\x01\x02").unwrap_err().contains("truncated"));
        assert!(parse_pgm(b"P5\n0 2\n255\n").is_err());
        assert!(parse_pgm(b"P5\n1 1\n100\n\xC8").unwrap_err().contains("exceeds"));
        assert!(parse_pgm(b"P5\n1 1\n").is_err());
    }

    #[test]
    fn levels() {
        assert_eq!(label_levels(&[0, 1], 2), vec![0, 255]);
        assert_eq!(label_levels(&[0, 1, 2], 3), vec![0, 127, 254]);
        assert_eq!(label_levels(&[0, 1, 2, 3], 4), vec![0, 85, 170, 255]);
    }
}
