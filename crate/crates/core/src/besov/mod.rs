//! Littlewood–Paley decomposition of trigonometric polynomials on `T^d`,
//! Besov norms `B^s_{∞,1}` (s = 1, 2), the Fourier ℓ¹ norm and the
//! projective tensor-norm bound.

pub mod io;
mod trig;
mod window;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use trig::{MultiIndex, TrigPoly, GRID_OVERSAMPLING};
pub use window::{make_window, WindowFunction};

/// Constant in `sum |c_j| <= FOURIER_L1_CONSTANT * ||f||_{B^1}` for d = 2.
///
/// Cauchy–Schwarz on piece `n` costs the square root of its frequency count,
/// at most `2^{n+2} + 1 <= 5 * 2^n`, and the grid sup dominates the `L^2`
/// norm.
pub const FOURIER_L1_CONSTANT: f64 = 5.0;

/// Euclidean norm of the first `dim` components.
pub fn index_radius(j: &MultiIndex, dim: usize) -> f64 {
    j[..dim].iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt()
}

/// Dyadic pieces `f_n = f * W_n`, keeping only nonzero pieces.
#[derive(Clone, Debug)]
pub struct LPDecomposition {
    pieces: Vec<(u32, TrigPoly)>,
}

impl LPDecomposition {
    pub fn pieces(&self) -> &[(u32, TrigPoly)] {
        &self.pieces
    }

    pub fn piece(&self, n: u32) -> Option<&TrigPoly> {
        self.pieces.iter().find(|(k, _)| *k == n).map(|(_, f)| f)
    }

    /// `sum_n f_n` as a coefficient map.
    pub fn reconstruct(&self, dim: usize) -> Result<TrigPoly> {
        self.pieces
            .iter()
            .try_fold(TrigPoly::zero(dim)?, |acc, (_, f)| acc.add(f))
    }

    /// `sum_n weight(n) * grid_sup(f_n)`.
    pub fn weighted_sup_sum<F: Fn(u32) -> f64>(&self, weight: F) -> f64 {
        self.pieces.iter().map(|(n, f)| weight(*n) * f.grid_sup()).sum()
    }
}

/// Splits `f` into dyadic frequency pieces.
///
/// Piece `n >= 1` carries `c_j w(|j| / 2^n)`; piece 0 carries the remainder
/// `c_j (1 - sum_{n>=1} w(|j|/2^n))`, which is `c_j` on `|j| <= 1` and
/// `c_j w(|j|)` on `1 < |j| < 2`. The pieces sum to `f` coefficientwise.
pub fn lp_decompose(f: &TrigPoly) -> LPDecomposition {
    let w = make_window();
    let dim = f.dim();
    let max_radius = f.coeffs().map(|(j, _)| index_radius(j, dim)).fold(0.0_f64, f64::max);
    let mut pieces = Vec::new();
    let mut n = 0u32;
    loop {
        // piece n only sees radii below 2^{n+1}; none beyond 2^{n-1} < max
        if n >= 1 && f64::powi(2.0, n as i32 - 1) >= max_radius {
            break;
        }
        let piece = f
            .map_coeffs(|j, c| c * w.piece_weight(n, index_radius(j, dim)))
            .with_degree(0);
        if !piece.is_zero() {
            pieces.push((n, piece));
        }
        n += 1;
    }
    LPDecomposition { pieces }
}

/// `sum_n 2^{s n} sup |f_n|` with sup-norms taken on the oversampled grid.
pub fn besov_norm(f: &TrigPoly, s: u32) -> Result<f64> {
    if s != 1 && s != 2 {
        return Err(Error::InvalidArgument(format!(
            "Besov smoothness must be 1 or 2, got {s}"
        )));
    }
    Ok(lp_decompose(f).weighted_sup_sum(|n| f64::powi(2.0, (s * n) as i32)))
}

/// `sum_j |c_j|`.
pub fn fourier_l1(f: &TrigPoly) -> f64 {
    f.l1_norm()
}

/// `sum_{n>=1} (2^{n+1} + 1)^{d-1} sup |f_{n-1}|`, the bound on the
/// projective tensor norm in `C(T) ⊗ ... ⊗ C(T)` (d = 2 or 3).
pub fn tensor_norm_bound(f: &TrigPoly) -> Result<f64> {
    let d = f.dim();
    if d != 2 && d != 3 {
        return Err(Error::InvalidPolyDimension(d));
    }
    Ok(lp_decompose(f).weighted_sup_sum(|m| {
        let n = m + 1;
        (f64::powi(2.0, n as i32 + 1) + 1.0).powi(d as i32 - 1)
    }))
}

/// Drops every coefficient with a negative index component.
pub fn analytic_restrict(f: &TrigPoly) -> Result<TrigPoly> {
    if f.dim() < 2 {
        return Err(Error::InvalidPolyDimension(f.dim()));
    }
    Ok(f.map_coeffs(|j, c| {
        if j.iter().all(|&x| x >= 0) {
            c
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_is_single_base_piece() {
        let f = TrigPoly::constant(2, c(2.0, -1.0)).unwrap();
        let lp = lp_decompose(&f);
        assert_eq!(lp.pieces().len(), 1);
        assert_eq!(lp.pieces()[0].0, 0);
        assert_eq!(lp.pieces()[0].1.get(&[0, 0]), c(2.0, -1.0));
        assert!((besov_norm(&f, 1).unwrap() - 5f64.sqrt()).abs() < 1e-15);
        assert!((tensor_norm_bound(&f).unwrap() - 5.0 * 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn zero_polynomial() {
        let f = TrigPoly::zero(2).unwrap();
        assert!(lp_decompose(&f).pieces().is_empty());
        assert_eq!(besov_norm(&f, 1).unwrap(), 0.0);
        assert_eq!(tensor_norm_bound(&f).unwrap(), 0.0);
        assert_eq!(fourier_l1(&f), 0.0);
    }

    #[test]
    fn cube_of_first_variable() {
        let w = make_window();
        let f = TrigPoly::monomial(&[3, 0]).unwrap();
        let lp = lp_decompose(&f);
        let ns: Vec<u32> = lp.pieces().iter().map(|(n, _)| *n).collect();
        assert_eq!(ns, vec![1, 2]);
        let w1 = lp.piece(1).unwrap().get(&[3, 0]).re;
        let w2 = lp.piece(2).unwrap().get(&[3, 0]).re;
        assert_eq!(w1, w.eval(1.5));
        assert_eq!(w2, w.eval(0.75));
        assert!((w1 + w2 - 1.0).abs() < 1e-15);
        let expected = 2.0 * w.eval(1.5) + 4.0 * w.eval(0.75);
        assert!((besov_norm(&f, 1).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn first_variable_has_unit_norm() {
        let f = TrigPoly::monomial(&[1, 0]).unwrap();
        assert_eq!(lp_decompose(&f).pieces().len(), 1);
        assert!((besov_norm(&f, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((besov_norm(&f, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!(besov_norm(&f, 3).is_err());
    }

    #[test]
    fn diagonal_frequency_reconstructs() {
        // |(1,1)| = sqrt 2 lies strictly between 1 and 2
        let f = TrigPoly::monomial(&[1, 1]).unwrap();
        let back = lp_decompose(&f).reconstruct(2).unwrap();
        assert!((back.get(&[1, 1]) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn fourier_l1_examples() {
        assert_eq!(fourier_l1(&TrigPoly::monomial(&[1, 1]).unwrap()), 1.0);
        let mut coeffs = Vec::new();
        for j in 0..4i64 {
            for k in 0..4i64 {
                coeffs.push(([j, k], c(1.0, 0.0)));
            }
        }
        assert_eq!(fourier_l1(&TrigPoly::from_coeffs(2, coeffs).unwrap()), 16.0);
    }

    #[test]
    fn analytic_restriction() {
        let f = TrigPoly::from_coeffs(2, [([1i64, -1], c(1.0, 0.0)), ([1, 1], c(1.0, 0.0))]).unwrap();
        let g = analytic_restrict(&f).unwrap();
        assert_eq!(g.num_terms(), 1);
        assert_eq!(g.get(&[1, 1]), c(1.0, 0.0));
        assert!(g.is_analytic());
        assert_eq!(analytic_restrict(&g).unwrap(), g);
        assert!(analytic_restrict(&TrigPoly::monomial(&[1]).unwrap()).is_err());
    }

    #[test]
    fn tensor_bound_needs_two_or_three_variables() {
        assert!(tensor_norm_bound(&TrigPoly::monomial(&[2]).unwrap()).is_err());
        let f = TrigPoly::constant(3, c(1.0, 0.0)).unwrap();
        assert!((tensor_norm_bound(&f).unwrap() - 25.0).abs() < 1e-14);
    }
}
