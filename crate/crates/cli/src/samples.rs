//! Sample files: one value per line.

use std::fmt::Write;

/// Parses one value per line. Blank lines and `#` comments are ignored.
pub fn parse_samples(text: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| format!("line {}: not a number: {line:?}", i + 1))?;
        out.push(v);
    }
    Ok(out)
}

/// Writes values with 17 significant digits so they read back exactly.
pub fn format_samples(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 24);
    for v in values {
        writeln!(out, "{v:.16e}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let xs = [0.1, 1.0 / 3.0, 2.5e-8, 123456.789, f64::MIN_POSITIVE];
        assert_eq!(parse_samples(&format_samples(&xs)).unwrap(), xs);
    }

    #[test]
    fn comments_and_errors() {
        assert_eq!(parse_samples("# header\n1.5\n\n  2 # tail\n").unwrap(), vec![1.5, 2.0]);
        assert!(parse_samples("1\nabc\n").unwrap_err().starts_with("line 2"));
    }
}
