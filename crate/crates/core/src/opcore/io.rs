//! Plain-text matrix exchange format.
//!
//! ```text
//! dim 2
//! 1.0000000000000000e0+0.0000000000000000e0i 0.0000000000000000e0-2.5000000000000000e-1i
//! 0.0000000000000000e0+2.5000000000000000e-1i 1.0000000000000000e0+0.0000000000000000e0i
//! ```
//!
//! Entries are written with 17 significant digits, which round-trips every
//! `f64` exactly.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::{c64, CMatrix};
use crate::error::{Error, Result};

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}i", z.re, sign, z.im.abs())
}

pub fn parse_complex(token: &str) -> Option<Complex64> {
    let t = token.trim();
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().ok().map(|re| c64(re, 0.0));
    };
    // split at the last sign that does not follow an exponent marker
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().ok()?;
            let im = body[k..].strip_prefix('+').unwrap_or(&body[k..]).parse::<f64>().ok()?;
            Some(c64(re, im))
        }
        None => {
            // pure imaginary, e.g. "2.5e-1i"
            let im = body.parse::<f64>().ok()?;
            Some(c64(0.0, im))
        }
    }
}

pub fn format_matrix(m: &CMatrix) -> String {
    let mut out = String::new();
    writeln!(out, "dim {}", m.nrows()).unwrap();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format_complex(m[(i, j)])).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `dim n` header"))?;
    let mut words = header.split_whitespace();
    let n = match (words.next(), words.next(), words.next()) {
        (Some("dim"), Some(n), None) => n
            .parse::<usize>()
            .map_err(|_| Error::parse(hline + 1, format!("bad dimension {n:?}")))?,
        _ => return Err(Error::parse(hline + 1, "expected `dim n`")),
    };
    if n == 0 {
        return Err(Error::parse(hline + 1, "dimension must be positive"));
    }
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        let (lno, line) = lines
            .next()
            .ok_or_else(|| Error::parse(hline + 2 + i, format!("expected {n} rows, found {i}")))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != n {
            return Err(Error::parse(
                lno + 1,
                format!("expected {n} entries, found {}", tokens.len()),
            ));
        }
        for (j, tok) in tokens.iter().enumerate() {
            m[(i, j)] = parse_complex(tok).ok_or_else(|| Error::parse(lno + 1, format!("bad entry {tok:?}")))?;
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(Error::parse(lno + 1, "trailing data after matrix rows"));
    }
    Ok(m)
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(path: &Path, m: &CMatrix) -> Result<()> {
    std::fs::write(path, format_matrix(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_complex("1.5+2i"), Some(c64(1.5, 2.0)));
        assert_eq!(parse_complex("-1e-3-2.5e+2i"), Some(c64(-1e-3, -250.0)));
        assert_eq!(parse_complex("3"), Some(c64(3.0, 0.0)));
        assert_eq!(parse_complex("-2i"), Some(c64(0.0, -2.0)));
        assert_eq!(parse_complex("abc"), None);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_matrix(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_matrix("dim 2\n1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_matrix("dim 2\n1 2 3\n4 5\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_matrix("dim 1\nx\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_matrix("size 1\n1\n"), Err(Error::Parse { .. })));
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(vals in proptest::collection::vec(-1e6f64..1e6, 18)) {
            let m = CMatrix::from_fn(3, 3, |i, j| c64(vals[2 * (3 * i + j)], vals[2 * (3 * i + j) + 1]));
            let back = parse_matrix(&format_matrix(&m)).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
