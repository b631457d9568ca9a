//! Whitespace-separated text matrices with a `rows cols` header line.

use std::fmt::Display;
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    pub values: Vec<f64>,
}

pub fn parse_matrix(text: &str) -> Result<Matrix, String> {
    let mut tokens = text.split_whitespace();
    let mut dim = |name: &str| -> Result<usize, String> {
        let tok = tokens.next().ok_or_else(|| format!("missing {name} in header"))?;
        tok.parse().map_err(|_| format!("bad {name} {tok:?} in header"))
    };
    let rows = dim("rows")?;
    let cols = dim("cols")?;
    let values = tokens
        .enumerate()
        .map(|(i, t)| t.parse::<f64>().map_err(|_| format!("entry {} is not a number: {t:?}", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != rows * cols {
        return Err(format!("expected {} entries for {rows}x{cols}, found {}", rows * cols, values.len()));
    }
    Ok(Matrix { rows, cols, values })
}

pub fn format_matrix<T: Display>(rows: usize, cols: usize, values: &[T]) -> String {
    assert_eq!(values.len(), rows * cols, "entry count does not match dimensions");
    let mut out = format!("{rows} {cols}\n");
    for row in values.chunks(cols.max(1)) {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let m = parse_matrix("2 3\n1 2 3\n4.5 0 1e2\n").unwrap();
        assert_eq!((m.rows, m.cols), (2, 3));
        assert_eq!(m.values, vec![1.0, 2.0, 3.0, 4.5, 0.0, 100.0]);
        assert_eq!(format_matrix(2, 2, &[0, 1, 1, 0]), "2 2\n0 1\n1 0\n");
        let again = parse_matrix(&format_matrix(2, 3, &m.values)).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn errors() {
        assert!(parse_matrix("").unwrap_err().contains("rows"));
        assert!(parse_matrix("2 x").unwrap_err().contains("cols"));
        assert!(parse_matrix("1 2\n1").unwrap_err().contains("expected 2"));
        assert!(parse_matrix("1 1\nfoo").unwrap_err().contains("entry 1"));
    }
}
