//! Text format for trigonometric polynomials:
//!
//! ```text
//! d 2 degree 3
//! 1 -2 1.0000000000000000e0 0.0000000000000000e0
//! 3 0 -2.5000000000000000e-1 5.0000000000000000e-1
//! ```
//!
//! One line per nonzero coefficient: the `d` integer indices followed by the
//! real and imaginary parts at 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::TrigPoly;
use crate::error::{Error, Result};

pub fn format_trig_poly(f: &TrigPoly) -> String {
    let mut out = String::new();
    writeln!(out, "d {} degree {}", f.dim(), f.degree()).unwrap();
    for (j, c) in f.coeffs() {
        for x in &j[..f.dim()] {
            write!(out, "{x} ").unwrap();
        }
        writeln!(out, "{:.16e} {:.16e}", c.re, c.im).unwrap();
    }
    out
}

pub fn parse_trig_poly(text: &str) -> Result<TrigPoly> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `d <dim> degree <box>` header"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let (dim, degree) = match words.as_slice() {
        ["d", d, "degree", b] => (
            d.parse::<usize>()
                .map_err(|_| Error::parse(hline + 1, format!("bad dimension {d:?}")))?,
            b.parse::<u32>()
                .map_err(|_| Error::parse(hline + 1, format!("bad degree {b:?}")))?,
        ),
        _ => return Err(Error::parse(hline + 1, "expected `d <dim> degree <box>`")),
    };
    if !(1..=3).contains(&dim) {
        return Err(Error::parse(
            hline + 1,
            format!("dimension must be 1, 2 or 3, got {dim}"),
        ));
    }
    let mut f = TrigPoly::new(dim, degree)?;
    for (lno, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != dim + 2 {
            return Err(Error::parse(
                lno + 1,
                format!("expected {} fields, found {}", dim + 2, tokens.len()),
            ));
        }
        let index = tokens[..dim]
            .iter()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::parse(lno + 1, format!("bad index {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let re: f64 = tokens[dim]
            .parse()
            .map_err(|_| Error::parse(lno + 1, "bad real part"))?;
        let im: f64 = tokens[dim + 1]
            .parse()
            .map_err(|_| Error::parse(lno + 1, "bad imaginary part"))?;
        let existing = f.get(&index);
        f.set(&index, existing + Complex64::new(re, im))
            .map_err(|e| Error::parse(lno + 1, e.to_string()))?;
    }
    Ok(f)
}

pub fn read_trig_poly(path: &Path) -> Result<TrigPoly> {
    parse_trig_poly(&std::fs::read_to_string(path)?)
}

pub fn write_trig_poly(path: &Path, f: &TrigPoly) -> Result<()> {
    std::fs::write(path, format_trig_poly(f))?;
    Ok(())
}
