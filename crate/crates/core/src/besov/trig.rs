use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Multi-index padded with zeros beyond the polynomial's dimension.
pub type MultiIndex = [i64; 3];

/// Samples per unit degree per dimension used for grid sup-norms.
pub const GRID_OVERSAMPLING: usize = 8;

fn pad(index: &[i64], dim: usize) -> Result<MultiIndex> {
    if index.len() != dim {
        return Err(Error::InvalidArgument(format!(
            "index {index:?} has length {}, polynomial dimension is {dim}",
            index.len()
        )));
    }
    let mut out = [0; 3];
    out[..dim].copy_from_slice(index);
    Ok(out)
}

/// Trigonometric polynomial `f(ζ) = sum_j c_j ζ^j` on the torus `T^d`,
/// `d ∈ {1, 2, 3}`.
///
/// Coefficients live in the box `[-degree, degree]^d`; only nonzero
/// coefficients are stored. An optional support mask `Λ` restricts which
/// indices may carry coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    dim: usize,
    degree: u32,
    coeffs: BTreeMap<MultiIndex, Complex64>,
    mask: Option<BTreeSet<MultiIndex>>,
}

impl TrigPoly {
    pub fn new(dim: usize, degree: u32) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidPolyDimension(dim));
        }
        Ok(Self {
            dim,
            degree,
            coeffs: BTreeMap::new(),
            mask: None,
        })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(dim, 0)
    }

    pub fn constant(dim: usize, c: Complex64) -> Result<Self> {
        let mut f = Self::new(dim, 0)?;
        f.set(&vec![0; dim], c)?;
        Ok(f)
    }

    /// Monomial `ζ^index`.
    pub fn monomial(index: &[i64]) -> Result<Self> {
        Self::from_coeffs(index.len(), [(index.to_vec(), Complex64::new(1.0, 0.0))])
    }

    /// Builds a polynomial whose degree box is the smallest one containing
    /// every given index.
    pub fn from_coeffs<I, J>(dim: usize, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (J, Complex64)>,
        J: AsRef<[i64]>,
    {
        let mut f = Self::new(dim, 0)?;
        for (idx, c) in coeffs {
            let idx = pad(idx.as_ref(), dim)?;
            let reach = idx.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as u32;
            f.degree = f.degree.max(reach);
            if c != Complex64::new(0.0, 0.0) {
                *f.coeffs.entry(idx).or_default() += c;
            }
        }
        f.coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(f)
    }

    /// Attaches a support mask; fails if a stored coefficient lies outside it.
    pub fn with_mask<I, J>(mut self, mask: I) -> Result<Self>
    where
        I: IntoIterator<Item = J>,
        J: AsRef<[i64]>,
    {
        let set = mask
            .into_iter()
            .map(|j| pad(j.as_ref(), self.dim))
            .collect::<Result<BTreeSet<_>>>()?;
        if let Some(bad) = self.coeffs.keys().find(|k| !set.contains(*k)) {
            return Err(Error::IndexOutOfSupport {
                index: bad[..self.dim].to_vec(),
                region: "support mask".into(),
            });
        }
        self.mask = Some(set);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Half-width of the coefficient box.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn mask(&self) -> Option<&BTreeSet<MultiIndex>> {
        self.mask.as_ref()
    }

    /// Enlarges the coefficient box.
    pub fn with_degree(mut self, degree: u32) -> Self {
        self.degree = self.degree.max(degree);
        self
    }

    pub fn set(&mut self, index: &[i64], value: Complex64) -> Result<()> {
        let idx = pad(index, self.dim)?;
        if idx.iter().any(|x| x.unsigned_abs() > self.degree as u64) {
            return Err(Error::IndexOutOfSupport {
                index: index.to_vec(),
                region: format!("degree box [-{0}, {0}]^{1}", self.degree, self.dim),
            });
        }
        if let Some(mask) = &self.mask {
            if !mask.contains(&idx) {
                return Err(Error::IndexOutOfSupport {
                    index: index.to_vec(),
                    region: "support mask".into(),
                });
            }
        }
        if value == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, value);
        }
        Ok(())
    }

    pub fn get(&self, index: &[i64]) -> Complex64 {
        pad(index, self.dim)
            .ok()
            .and_then(|i| self.coeffs.get(&i).copied())
            .unwrap_or_default()
    }

    /// Nonzero coefficients in index order; indices are zero-padded to 3.
    pub fn coeffs(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest |j| per coordinate over stored coefficients (at most the
    /// declared degree).
    pub fn effective_degree(&self) -> u32 {
        self.coeffs
            .keys()
            .flat_map(|k| k.iter().map(|x| x.unsigned_abs() as u32))
            .max()
            .unwrap_or(0)
    }

    /// `f(ζ) = conj f(ζ)` on the torus, i.e. `c_{-j} = conj c_j`.
    pub fn is_real_valued(&self) -> bool {
        let scale = self.coeffs.values().fold(0.0_f64, |a, c| a.max(c.norm()));
        self.coeffs.iter().all(|(j, c)| {
            let neg = [-j[0], -j[1], -j[2]];
            let partner = self.coeffs.get(&neg).copied().unwrap_or_default();
            (partner - c.conj()).norm() <= 1e-14 * scale
        })
    }

    /// No coefficient has a negative index component.
    pub fn is_analytic(&self) -> bool {
        self.coeffs.keys().all(|j| j.iter().all(|&x| x >= 0))
    }

    /// `sum_j |c_j|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| (*k, c * alpha))
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .collect();
        out
    }

    /// Sum of two polynomials of the same dimension; the mask is dropped.
    pub fn add(&self, other: &TrigPoly) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        let mut out = Self::new(self.dim, self.degree.max(other.degree))?;
        out.coeffs = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            let e = out.coeffs.entry(*k).or_default();
            *e += c;
            if *e == Complex64::new(0.0, 0.0) {
                out.coeffs.remove(k);
            }
        }
        Ok(out)
    }

    /// Coefficientwise multiplier `c_j -> m(j) c_j`, dropping zeros.
    pub fn map_coeffs<F: Fn(&MultiIndex, Complex64) -> Complex64>(&self, m: F) -> Self {
        let mut out = self.clone();
        out.coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| (*k, m(k, *c)))
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .collect();
        out
    }

    /// Multiplication by the monomial `ζ^shift`: every index moves by
    /// `shift`. The degree box grows to contain the shifted support and the
    /// mask is dropped.
    pub fn shift(&self, shift: &[i64]) -> Result<Self> {
        let s = pad(shift, self.dim)?;
        Self::from_coeffs(
            self.dim,
            self.coeffs
                .iter()
                .map(|(k, c)| ([k[0] + s[0], k[1] + s[1], k[2] + s[2]][..self.dim].to_vec(), *c)),
        )
    }

    /// `g(x) = f(sigma x)` for a positive integer `sigma`: index `j` moves
    /// to `sigma j`.
    pub fn dilate(&self, sigma: u32) -> Result<Self> {
        if sigma == 0 {
            return Err(Error::InvalidArgument("dilation factor must be positive".into()));
        }
        let s = sigma as i64;
        let mut out = Self::new(self.dim, self.degree * sigma)?;
        out.coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| ([k[0] * s, k[1] * s, k[2] * s], *c))
            .collect();
        Ok(out)
    }

    /// Evaluation at angles `x`: `sum_j c_j e^{i j·x}`.
    pub fn eval_angles(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.dim, "point dimension");
        self.coeffs
            .iter()
            .map(|(j, c)| {
                let phase: f64 = (0..self.dim).map(|k| j[k] as f64 * x[k]).sum();
                c * Complex64::from_polar(1.0, phase)
            })
            .sum()
    }

    /// Evaluation at points of `C^d`; negative powers use `1/ζ`.
    pub fn eval_torus(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.dim, "point dimension");
        self.coeffs
            .iter()
            .map(|(j, c)| {
                let mut term = *c;
                for k in 0..self.dim {
                    term *= z[k].powi(j[k] as i32);
                }
                term
            })
            .sum()
    }

    /// Values on the product grid `xs × ys` (angles), row-major in `xs`.
    pub fn eval_grid2(&self, xs: &[f64], ys: &[f64]) -> Vec<Complex64> {
        assert_eq!(self.dim, 2, "eval_grid2 needs d = 2");
        let d = self.degree as i64;
        let width = (2 * d + 1) as usize;
        // inner[j][b] = sum_k c_{j,k} e^{i k y_b}
        let mut inner = vec![Complex64::default(); width * ys.len()];
        for (idx, c) in &self.coeffs {
            let row = (idx[0] + d) as usize;
            for (b, &y) in ys.iter().enumerate() {
                inner[row * ys.len() + b] += c * Complex64::from_polar(1.0, idx[1] as f64 * y);
            }
        }
        let active: Vec<usize> = (0..width)
            .filter(|&r| {
                inner[r * ys.len()..(r + 1) * ys.len()]
                    .iter()
                    .any(|z| z.norm_sqr() > 0.0)
            })
            .collect();
        let mut out = vec![Complex64::default(); xs.len() * ys.len()];
        for (a, &x) in xs.iter().enumerate() {
            for &r in &active {
                let e = Complex64::from_polar(1.0, (r as i64 - d) as f64 * x);
                let src = &inner[r * ys.len()..(r + 1) * ys.len()];
                for (o, v) in out[a * ys.len()..(a + 1) * ys.len()].iter_mut().zip(src) {
                    *o += e * v;
                }
            }
        }
        out
    }

    /// Values on `xs × ys × zs`, index `(a * ny + b) * nz + c`.
    pub fn eval_grid3(&self, xs: &[f64], ys: &[f64], zs: &[f64]) -> Vec<Complex64> {
        assert_eq!(self.dim, 3, "eval_grid3 needs d = 3");
        let (ny, nz) = (ys.len(), zs.len());
        let mut out = vec![Complex64::default(); xs.len() * ny * nz];
        // group by (j, k) and contract the last variable first
        let mut by_jk: BTreeMap<(i64, i64), Vec<Complex64>> = BTreeMap::new();
        for (idx, c) in &self.coeffs {
            let row = by_jk
                .entry((idx[0], idx[1]))
                .or_insert_with(|| vec![Complex64::default(); nz]);
            for (cc, &z) in zs.iter().enumerate() {
                row[cc] += c * Complex64::from_polar(1.0, idx[2] as f64 * z);
            }
        }
        for ((j, k), row) in &by_jk {
            for (a, &x) in xs.iter().enumerate() {
                for (b, &y) in ys.iter().enumerate() {
                    let e = Complex64::from_polar(1.0, *j as f64 * x + *k as f64 * y);
                    let base = (a * ny + b) * nz;
                    for (o, v) in out[base..base + nz].iter_mut().zip(row) {
                        *o += e * v;
                    }
                }
            }
        }
        out
    }

    /// Grid points per dimension used by [`Self::grid_sup`].
    pub fn grid_size(&self) -> usize {
        (GRID_OVERSAMPLING * self.effective_degree().max(1) as usize).next_power_of_two()
    }

    /// `max |f|` over the uniform grid of [`Self::grid_size`] points per
    /// dimension, evaluated by inverse FFT. This under-estimates the true
    /// sup-norm by a bounded factor and dominates the `L^2` norm exactly.
    pub fn grid_sup(&self) -> f64 {
        if self.coeffs.is_empty() {
            return 0.0;
        }
        let g = self.grid_size();
        let dim = self.dim;
        let total = g.pow(dim as u32);
        let mut buf = vec![Complex64::default(); total];
        for (idx, c) in &self.coeffs {
            let mut flat = 0usize;
            for &x in &idx[..dim] {
                flat = flat * g + x.rem_euclid(g as i64) as usize;
            }
            buf[flat] += c;
        }
        let fft = FftPlanner::<f64>::new().plan_fft_inverse(g);
        let mut line = vec![Complex64::default(); g];
        for axis in 0..dim {
            let stride = g.pow((dim - 1 - axis) as u32);
            let block = stride * g;
            for outer in 0..total / block {
                for inner in 0..stride {
                    let base = outer * block + inner;
                    if stride == 1 {
                        fft.process(&mut buf[base..base + g]);
                        continue;
                    }
                    for (t, v) in line.iter_mut().enumerate() {
                        *v = buf[base + t * stride];
                    }
                    fft.process(&mut line);
                    for (t, v) in line.iter().enumerate() {
                        buf[base + t * stride] = *v;
                    }
                }
            }
        }
        buf.iter().fold(0.0_f64, |a, z| a.max(z.norm()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn construction_and_box() {
        let mut f = TrigPoly::new(2, 2).unwrap();
        f.set(&[1, -2], c(1.0, 0.0)).unwrap();
        assert!(matches!(
            f.set(&[3, 0], c(1.0, 0.0)),
            Err(Error::IndexOutOfSupport { .. })
        ));
        assert!(f.set(&[1], c(1.0, 0.0)).is_err());
        assert!(matches!(TrigPoly::new(4, 1), Err(Error::InvalidPolyDimension(4))));
        let g = TrigPoly::from_coeffs(2, [([3i64, -1], c(2.0, 0.0))]).unwrap();
        assert_eq!(g.degree(), 3);
    }

    #[test]
    fn mask_enforced() {
        let f = TrigPoly::monomial(&[1, 1]).unwrap();
        assert!(f.clone().with_mask([[0i64, 0]]).is_err());
        let mut g = f.with_degree(2).with_mask([[1i64, 1], [2, 2]]).unwrap();
        g.set(&[2, 2], c(1.0, 0.0)).unwrap();
        assert!(g.set(&[0, 1], c(1.0, 0.0)).is_err());
    }

    #[test]
    fn real_valued_flag() {
        let f = TrigPoly::from_coeffs(1, [([1i64], c(1.0, 2.0)), ([-1], c(1.0, -2.0))]).unwrap();
        assert!(f.is_real_valued());
        let g = TrigPoly::monomial(&[1]).unwrap();
        assert!(!g.is_real_valued());
        assert!(TrigPoly::constant(2, c(3.0, 0.0)).unwrap().is_real_valued());
    }

    #[test]
    fn evaluation_paths_agree() {
        let f = TrigPoly::from_coeffs(
            2,
            [
                ([1i64, 2], c(0.5, -1.0)),
                ([-3, 0], c(2.0, 0.25)),
                ([0, -1], c(-1.0, 1.0)),
            ],
        )
        .unwrap();
        let (x, y) = (0.7, -2.1);
        let direct = f.eval_angles(&[x, y]);
        let torus = f.eval_torus(&[Complex64::from_polar(1.0, x), Complex64::from_polar(1.0, y)]);
        let grid = f.eval_grid2(&[x], &[y])[0];
        assert!((direct - torus).norm() < 1e-13);
        assert!((direct - grid).norm() < 1e-13);
    }

    #[test]
    fn grid3_matches_pointwise() {
        let f = TrigPoly::from_coeffs(3, [([1i64, -1, 2], c(1.0, 0.5)), ([0, 2, -1], c(-0.3, 0.0))]).unwrap();
        let (xs, ys, zs) = ([0.1, 0.4], [-0.2], [0.9, 1.3, -2.0]);
        let vals = f.eval_grid3(&xs, &ys, &zs);
        for (a, &x) in xs.iter().enumerate() {
            for (cc, &z) in zs.iter().enumerate() {
                let expect = f.eval_angles(&[x, ys[0], z]);
                assert!((vals[a * 3 + cc] - expect).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn grid_sup_examples() {
        assert_eq!(TrigPoly::constant(2, c(-3.0, 4.0)).unwrap().grid_sup(), 5.0);
        assert!((TrigPoly::monomial(&[0, 5]).unwrap().grid_sup() - 1.0).abs() < 1e-12);
        // 1 + ζ peaks at ζ = 1, which is a grid point
        let f = TrigPoly::from_coeffs(1, [([0i64], c(1.0, 0.0)), ([1], c(1.0, 0.0))]).unwrap();
        assert!((f.grid_sup() - 2.0).abs() < 1e-12);
        // brute-force comparison on the same grid
        let g = TrigPoly::from_coeffs(
            2,
            [([2i64, -1], c(1.0, 0.0)), ([0, 3], c(0.0, -2.0)), ([1, 1], c(0.5, 0.5))],
        )
        .unwrap();
        let n = g.grid_size();
        let pts: Vec<f64> = (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();
        let brute = g.eval_grid2(&pts, &pts).iter().fold(0.0_f64, |a, z| a.max(z.norm()));
        assert!((g.grid_sup() - brute).abs() < 1e-12);
    }

    #[test]
    fn grid_sup_three_dimensional() {
        let g = TrigPoly::from_coeffs(3, [([1i64, 0, -1], c(1.0, 0.0)), ([0, 1, 1], c(1.0, 0.0))]).unwrap();
        assert!((g.grid_sup() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn shift_and_dilate() {
        let f = TrigPoly::monomial(&[0, 1]).unwrap();
        let g = f.shift(&[1, 0]).unwrap();
        assert_eq!(g.get(&[1, 1]), c(1.0, 0.0));
        assert_eq!(g.num_terms(), 1);
        let h = TrigPoly::monomial(&[1, -2]).unwrap().dilate(3).unwrap();
        assert_eq!(h.get(&[3, -6]), c(1.0, 0.0));
        assert_eq!(h.degree(), 6);
    }
}
