//! Functions of pairs and triples of noncommuting operators.
//!
//! Two independent definitions are provided:
//!
//! * spectral: `f(A,B) = sum_{λ,μ} f(λ,μ) P_λ Q_μ` over the spectral
//!   projections, always in the order `P` then `Q` (then `R` for triples);
//! * Fourier: `f(A,B) = sum_{j,k} c_{jk} e^{ijA} e^{ikB}` for trigonometric
//!   polynomials, and `f(U,V) = sum c_{jk} U^j V^k` for unitaries.
//!
//! The spectral path runs in the eigenbases: with `A = V_A Λ V_A^*` and
//! `B = V_B M V_B^*`, `f(A,B) = V_A (F ∘ V_A^* V_B) V_B^*` where
//! `F[a,b] = f(λ_a, μ_b)` is constant on clusters.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::besov::TrigPoly;
use crate::error::{Error, Result};
use crate::opcore::{
    eig_hermitian, exp_i_from, CMatrix, HermitianOperator, SpectralDecomposition, SpectrumKind, UnitaryOperator,
};

fn key_matches(key: Complex64, z: Complex64) -> bool {
    (key - z).norm() <= 1e-9 * (1.0 + z.norm())
}

fn find_key(keys: &[Complex64], z: Complex64) -> Option<usize> {
    keys.iter().position(|k| key_matches(*k, z))
}

fn describe(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}", z)
    }
}

/// Function tabulated on a finite product set `X × Y`, keyed by spectral
/// values. Lookups match keys within `1e-9 (1 + |z|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction2 {
    x_keys: Vec<Complex64>,
    y_keys: Vec<Complex64>,
    values: Vec<Option<Complex64>>,
}

impl GridFunction2 {
    /// Empty table over the given keys.
    pub fn new(x_keys: Vec<Complex64>, y_keys: Vec<Complex64>) -> Self {
        let len = x_keys.len() * y_keys.len();
        Self {
            x_keys,
            y_keys,
            values: vec![None; len],
        }
    }

    pub fn tabulate<F: Fn(Complex64, Complex64) -> Complex64>(
        x_keys: Vec<Complex64>,
        y_keys: Vec<Complex64>,
        f: F,
    ) -> Self {
        let mut values = Vec::with_capacity(x_keys.len() * y_keys.len());
        for x in &x_keys {
            for y in &y_keys {
                values.push(Some(f(*x, *y)));
            }
        }
        Self { x_keys, y_keys, values }
    }

    /// Table over real keys.
    pub fn from_real<F: Fn(f64, f64) -> Complex64>(xs: &[f64], ys: &[f64], f: F) -> Self {
        let re = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::tabulate(re(xs), re(ys), |x, y| f(x.re, y.re))
    }

    /// Table over the cluster values of two decompositions.
    pub fn on_spectra<F: Fn(Complex64, Complex64) -> Complex64>(
        a: &SpectralDecomposition,
        b: &SpectralDecomposition,
        f: F,
    ) -> Self {
        Self::tabulate(a.cluster_values().to_vec(), b.cluster_values().to_vec(), f)
    }

    pub fn insert(&mut self, x: Complex64, y: Complex64, value: Complex64) -> Result<()> {
        let i = find_key(&self.x_keys, x).ok_or_else(|| Error::MissingGridValue(format!("x key {}", describe(x))))?;
        let j = find_key(&self.y_keys, y).ok_or_else(|| Error::MissingGridValue(format!("y key {}", describe(y))))?;
        self.values[i * self.y_keys.len() + j] = Some(value);
        Ok(())
    }

    pub fn get(&self, x: Complex64, y: Complex64) -> Option<Complex64> {
        let i = find_key(&self.x_keys, x)?;
        let j = find_key(&self.y_keys, y)?;
        self.values[i * self.y_keys.len() + j]
    }

    /// Keys divided by `sigma`, values unchanged: the table of `f(σx, σy)`.
    pub fn dilated(&self, sigma: f64) -> Self {
        Self {
            x_keys: self.x_keys.iter().map(|z| z / sigma).collect(),
            y_keys: self.y_keys.iter().map(|z| z / sigma).collect(),
            values: self.values.clone(),
        }
    }

    pub fn x_keys(&self) -> &[Complex64] {
        &self.x_keys
    }

    pub fn y_keys(&self) -> &[Complex64] {
        &self.y_keys
    }

    /// Row-major values, `None` where undefined.
    pub fn values(&self) -> &[Option<Complex64>] {
        &self.values
    }

    /// Table from keys and row-major values.
    pub fn from_parts(x_keys: Vec<Complex64>, y_keys: Vec<Complex64>, values: Vec<Option<Complex64>>) -> Result<Self> {
        if values.len() != x_keys.len() * y_keys.len() {
            return Err(Error::DimensionMismatch {
                expected: x_keys.len() * y_keys.len(),
                actual: values.len(),
            });
        }
        Ok(Self { x_keys, y_keys, values })
    }

    /// Largest modulus among defined values.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |a, z| a.max(z.norm()))
    }

    fn cluster_table(&self, a: &SpectralDecomposition, b: &SpectralDecomposition) -> Result<Vec<Complex64>> {
        let mut table = Vec::with_capacity(a.num_clusters() * b.num_clusters());
        for &x in a.cluster_values() {
            for &y in b.cluster_values() {
                let v = self
                    .get(x, y)
                    .ok_or_else(|| Error::MissingGridValue(format!("(λ, μ) = ({}, {})", describe(x), describe(y))))?;
                table.push(v);
            }
        }
        Ok(table)
    }
}

/// Function tabulated on `X × Y × Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction3 {
    keys: [Vec<Complex64>; 3],
    values: Vec<Option<Complex64>>,
}

impl GridFunction3 {
    pub fn tabulate<F: Fn(Complex64, Complex64, Complex64) -> Complex64>(keys: [Vec<Complex64>; 3], f: F) -> Self {
        let mut values = Vec::with_capacity(keys.iter().map(Vec::len).product());
        for x in &keys[0] {
            for y in &keys[1] {
                for z in &keys[2] {
                    values.push(Some(f(*x, *y, *z)));
                }
            }
        }
        Self { keys, values }
    }

    pub fn new(keys: [Vec<Complex64>; 3]) -> Self {
        let len = keys.iter().map(Vec::len).product();
        Self {
            keys,
            values: vec![None; len],
        }
    }

    fn slot(&self, x: Complex64, y: Complex64, z: Complex64) -> Option<usize> {
        let i = find_key(&self.keys[0], x)?;
        let j = find_key(&self.keys[1], y)?;
        let k = find_key(&self.keys[2], z)?;
        Some((i * self.keys[1].len() + j) * self.keys[2].len() + k)
    }

    pub fn insert(&mut self, x: Complex64, y: Complex64, z: Complex64, value: Complex64) -> Result<()> {
        let s = self.slot(x, y, z).ok_or_else(|| {
            Error::MissingGridValue(format!("key ({}, {}, {})", describe(x), describe(y), describe(z)))
        })?;
        self.values[s] = Some(value);
        Ok(())
    }

    pub fn get(&self, x: Complex64, y: Complex64, z: Complex64) -> Option<Complex64> {
        self.slot(x, y, z).and_then(|s| self.values[s])
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |a, z| a.max(z.norm()))
    }
}

/// `V_A (F ∘ V_A^* V_B) V_B^*` with `F` indexed by cluster pairs
/// (`table[ca * nb + cb]`).
fn spectral_pair_from_table(a: &SpectralDecomposition, b: &SpectralDecomposition, table: &[Complex64]) -> CMatrix {
    let nb = b.num_clusters();
    let va = a.eigenvectors();
    let vb = b.eigenvectors();
    let mut inner = va.adjoint() * vb;
    for (col, &cb) in b.cluster_of().iter().enumerate() {
        for (row, &ca) in a.cluster_of().iter().enumerate() {
            inner[(row, col)] *= table[ca * nb + cb];
        }
    }
    va * inner * vb.adjoint()
}

fn spectral_triple_from_table(
    a: &SpectralDecomposition,
    b: &SpectralDecomposition,
    c: &SpectralDecomposition,
    table: &[Complex64],
) -> CMatrix {
    let (nb, nc) = (b.num_clusters(), c.num_clusters());
    let n = a.dim();
    let m1 = a.eigenvectors().adjoint() * b.eigenvectors();
    let m2 = b.eigenvectors().adjoint() * c.eigenvectors();
    let mut g = CMatrix::zeros(n, n);
    for (ia, &ca) in a.cluster_of().iter().enumerate() {
        for (ic, &cc) in c.cluster_of().iter().enumerate() {
            let mut acc = Complex64::default();
            for (ib, &cb) in b.cluster_of().iter().enumerate() {
                acc += table[(ca * nb + cb) * nc + cc] * m1[(ia, ib)] * m2[(ib, ic)];
            }
            g[(ia, ic)] = acc;
        }
    }
    a.eigenvectors() * g * c.eigenvectors().adjoint()
}

/// Angles at which a trigonometric polynomial is evaluated on a spectrum:
/// the eigenvalues themselves for Hermitian input, their arguments for
/// unitary input.
fn spectral_angles(d: &SpectralDecomposition) -> Vec<f64> {
    match d.kind() {
        SpectrumKind::Hermitian => d.cluster_values().iter().map(|z| z.re).collect(),
        SpectrumKind::Unitary => d.cluster_values().iter().map(|z| z.arg()).collect(),
    }
}

/// `sum f(λ,μ) P_λ Q_μ` for a closure evaluated once per cluster pair.
pub fn pair_calculus<F: Fn(Complex64, Complex64) -> Complex64>(
    a: &SpectralDecomposition,
    b: &SpectralDecomposition,
    f: F,
) -> CMatrix {
    let mut table = Vec::with_capacity(a.num_clusters() * b.num_clusters());
    for &x in a.cluster_values() {
        for &y in b.cluster_values() {
            table.push(f(x, y));
        }
    }
    spectral_pair_from_table(a, b, &table)
}

/// `sum f(λ,μ,ν) P_λ Q_μ R_ν` for a closure evaluated once per cluster triple.
pub fn triple_calculus<F: Fn(Complex64, Complex64, Complex64) -> Complex64>(
    a: &SpectralDecomposition,
    b: &SpectralDecomposition,
    c: &SpectralDecomposition,
    f: F,
) -> CMatrix {
    let mut table = Vec::with_capacity(a.num_clusters() * b.num_clusters() * c.num_clusters());
    for &x in a.cluster_values() {
        for &y in b.cluster_values() {
            for &z in c.cluster_values() {
                table.push(f(x, y, z));
            }
        }
    }
    spectral_triple_from_table(a, b, c, &table)
}

/// Spectral definition for a tabulated function; every cluster pair of the
/// two spectra must be present in the table.
pub fn eval_pair_spectral(f: &GridFunction2, a: &HermitianOperator, b: &HermitianOperator) -> Result<CMatrix> {
    check_same_dim(a.dim(), b.dim())?;
    let da = eig_hermitian(a, None)?;
    let db = eig_hermitian(b, None)?;
    eval_pair_spectral_with(f, &da, &db)
}

pub fn eval_pair_spectral_with(
    f: &GridFunction2,
    a: &SpectralDecomposition,
    b: &SpectralDecomposition,
) -> Result<CMatrix> {
    check_same_dim(a.dim(), b.dim())?;
    let table = f.cluster_table(a, b)?;
    Ok(spectral_pair_from_table(a, b, &table))
}

/// Spectral definition with a trigonometric polynomial restricted to the
/// joint spectrum (angles for unitary decompositions).
pub fn trig_pair_spectral(f: &TrigPoly, a: &SpectralDecomposition, b: &SpectralDecomposition) -> Result<CMatrix> {
    check_poly_dim(f, 2)?;
    check_same_dim(a.dim(), b.dim())?;
    let table = f.eval_grid2(&spectral_angles(a), &spectral_angles(b));
    Ok(spectral_pair_from_table(a, b, &table))
}

pub fn eval_triple_spectral(
    f: &GridFunction3,
    a: &HermitianOperator,
    b: &HermitianOperator,
    c: &HermitianOperator,
) -> Result<CMatrix> {
    check_same_dim(a.dim(), b.dim())?;
    check_same_dim(a.dim(), c.dim())?;
    let (da, db, dc) = (
        eig_hermitian(a, None)?,
        eig_hermitian(b, None)?,
        eig_hermitian(c, None)?,
    );
    eval_triple_spectral_with(f, &da, &db, &dc)
}

pub fn eval_triple_spectral_with(
    f: &GridFunction3,
    a: &SpectralDecomposition,
    b: &SpectralDecomposition,
    c: &SpectralDecomposition,
) -> Result<CMatrix> {
    let mut table = Vec::with_capacity(a.num_clusters() * b.num_clusters() * c.num_clusters());
    for &x in a.cluster_values() {
        for &y in b.cluster_values() {
            for &z in c.cluster_values() {
                table.push(f.get(x, y, z).ok_or_else(|| {
                    Error::MissingGridValue(format!(
                        "(λ, μ, ν) = ({}, {}, {})",
                        describe(x),
                        describe(y),
                        describe(z)
                    ))
                })?);
            }
        }
    }
    Ok(spectral_triple_from_table(a, b, c, &table))
}

pub fn trig_triple_spectral(
    f: &TrigPoly,
    a: &SpectralDecomposition,
    b: &SpectralDecomposition,
    c: &SpectralDecomposition,
) -> Result<CMatrix> {
    check_poly_dim(f, 3)?;
    check_same_dim(a.dim(), b.dim())?;
    check_same_dim(a.dim(), c.dim())?;
    let table = f.eval_grid3(&spectral_angles(a), &spectral_angles(b), &spectral_angles(c));
    Ok(spectral_triple_from_table(a, b, c, &table))
}

fn check_same_dim(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

fn check_poly_dim(f: &TrigPoly, d: usize) -> Result<()> {
    if f.dim() != d {
        return Err(Error::InvalidPolyDimension(f.dim()));
    }
    Ok(())
}

/// Integer powers `U^k` for `k` in `[lo, hi]`, built by repeated
/// multiplication; negative powers use `U^*`.
struct PowerTable {
    lo: i64,
    powers: Vec<CMatrix>,
}

impl PowerTable {
    fn new(u: &CMatrix, lo: i64, hi: i64) -> Self {
        let lo = lo.min(0);
        let hi = hi.max(0);
        let n = u.nrows();
        let mut pos = vec![CMatrix::identity(n, n)];
        for k in 1..=hi {
            let next = &pos[k as usize - 1] * u;
            pos.push(next);
        }
        let ua = u.adjoint();
        let mut neg = Vec::new();
        let mut cur = CMatrix::identity(n, n);
        for _ in 0..(-lo) {
            cur = &cur * &ua;
            neg.push(cur.clone());
        }
        neg.reverse();
        neg.extend(pos);
        Self { lo, powers: neg }
    }

    fn get(&self, k: i64) -> &CMatrix {
        &self.powers[(k - self.lo) as usize]
    }
}

/// `sum_j U^j C_j` by Horner's scheme in `U` (non-negative `j`) and in
/// `U^*` (negative `j`).
fn horner(u: &CMatrix, coeffs: &BTreeMap<i64, CMatrix>) -> CMatrix {
    let n = u.nrows();
    let zero = CMatrix::zeros(n, n);
    let Some((&lo, _)) = coeffs.first_key_value() else {
        return zero;
    };
    let hi = *coeffs.last_key_value().unwrap().0;
    let mut total = zero.clone();
    if hi >= 0 {
        let mut acc = zero.clone();
        for j in (0..=hi).rev() {
            if j < hi {
                acc = u * acc;
            }
            if let Some(c) = coeffs.get(&j) {
                acc += c;
            }
        }
        total += acc;
    }
    if lo < 0 {
        let ua = u.adjoint();
        let mut acc = zero;
        for m in (1..=(-lo)).rev() {
            if let Some(c) = coeffs.get(&(-m)) {
                acc += c;
            }
            acc = &ua * acc;
        }
        total += acc;
    }
    total
}

/// `sum_k c_k V^k` for each row of a coefficient map grouped by leading
/// index.
fn combine_rows(table: &PowerTable, rows: &BTreeMap<i64, Vec<(i64, Complex64)>>, n: usize) -> BTreeMap<i64, CMatrix> {
    rows.iter()
        .map(|(j, terms)| {
            let mut acc = CMatrix::zeros(n, n);
            for (k, c) in terms {
                acc += table.get(*k) * *c;
            }
            (*j, acc)
        })
        .collect()
}

/// Cached evaluation of `f(U, V) = sum c_{jk} U^j V^k` for fixed `f` and
/// `V`: the inner sums `C_j = sum_k c_{jk} V^k` are computed once.
#[derive(Clone, Debug)]
pub struct UnitaryPairEvaluator {
    inner: BTreeMap<i64, CMatrix>,
}

impl UnitaryPairEvaluator {
    pub fn new(f: &TrigPoly, v: &CMatrix) -> Result<Self> {
        check_poly_dim(f, 2)?;
        let mut rows: BTreeMap<i64, Vec<(i64, Complex64)>> = BTreeMap::new();
        let (mut lo, mut hi) = (0, 0);
        for (idx, c) in f.coeffs() {
            rows.entry(idx[0]).or_default().push((idx[1], *c));
            lo = lo.min(idx[1]);
            hi = hi.max(idx[1]);
        }
        let table = PowerTable::new(v, lo, hi);
        Ok(Self {
            inner: combine_rows(&table, &rows, v.nrows()),
        })
    }

    pub fn eval(&self, u: &CMatrix) -> CMatrix {
        horner(u, &self.inner)
    }
}

/// `sum c_{jk} U^j V^k`, powers of `U` to the left.
pub fn eval_unitary_pair(f: &TrigPoly, u: &UnitaryOperator, v: &UnitaryOperator) -> Result<CMatrix> {
    check_same_dim(u.dim(), v.dim())?;
    Ok(UnitaryPairEvaluator::new(f, v.entries())?.eval(u.entries()))
}

/// Spectral definition of `f(U, V)`: `sum f(λ, μ) P_λ Q_μ` over the
/// unitary spectral projections, with `f` read on the torus.
pub fn eval_unitary_pair_spectral(f: &TrigPoly, u: &UnitaryOperator, v: &UnitaryOperator) -> Result<CMatrix> {
    let du = crate::opcore::eig_unitary(u, None)?;
    let dv = crate::opcore::eig_unitary(v, None)?;
    trig_pair_spectral(f, &du, &dv)
}

fn check_fourier_norm(d: &SpectralDecomposition) -> Result<()> {
    let norm = d.spectral_radius();
    if norm >= std::f64::consts::PI {
        return Err(Error::NormPrecondition { norm });
    }
    Ok(())
}

/// `sum c_{jk} e^{ijA} e^{ikB}`, requiring `||A||, ||B|| < pi`.
pub fn eval_pair_fourier(f: &TrigPoly, a: &HermitianOperator, b: &HermitianOperator) -> Result<CMatrix> {
    check_poly_dim(f, 2)?;
    check_same_dim(a.dim(), b.dim())?;
    let (da, db) = (eig_hermitian(a, None)?, eig_hermitian(b, None)?);
    check_fourier_norm(&da)?;
    check_fourier_norm(&db)?;
    let ea = exp_i_from(&da, 1.0);
    let eb = exp_i_from(&db, 1.0);
    Ok(UnitaryPairEvaluator::new(f, eb.entries())?.eval(ea.entries()))
}

/// `sum c_{jkl} e^{ijA} e^{ikB} e^{ilC}`, requiring all norms below `pi`.
pub fn eval_triple_fourier(
    f: &TrigPoly,
    a: &HermitianOperator,
    b: &HermitianOperator,
    c: &HermitianOperator,
) -> Result<CMatrix> {
    check_poly_dim(f, 3)?;
    check_same_dim(a.dim(), b.dim())?;
    check_same_dim(a.dim(), c.dim())?;
    let decs = [
        eig_hermitian(a, None)?,
        eig_hermitian(b, None)?,
        eig_hermitian(c, None)?,
    ];
    for d in &decs {
        check_fourier_norm(d)?;
    }
    let [ea, eb, ec] = [0, 1, 2].map(|i| exp_i_from(&decs[i], 1.0).into_inner());
    let n = a.dim();

    let mut by_jk: BTreeMap<(i64, i64), Vec<(i64, Complex64)>> = BTreeMap::new();
    let (mut lo, mut hi) = (0, 0);
    for (idx, coef) in f.coeffs() {
        by_jk.entry((idx[0], idx[1])).or_default().push((idx[2], *coef));
        lo = lo.min(idx[2]);
        hi = hi.max(idx[2]);
    }
    let table_c = PowerTable::new(&ec, lo, hi);
    // D_{jk} = sum_l c_{jkl} C^l, then C_j = sum_k B^k D_{jk}
    let mut per_j: BTreeMap<i64, BTreeMap<i64, CMatrix>> = BTreeMap::new();
    for ((j, k), terms) in &by_jk {
        let mut acc = CMatrix::zeros(n, n);
        for (l, coef) in terms {
            acc += table_c.get(*l) * *coef;
        }
        per_j.entry(*j).or_default().insert(*k, acc);
    }
    let outer: BTreeMap<i64, CMatrix> = per_j.iter().map(|(j, inner)| (*j, horner(&eb, inner))).collect();
    Ok(horner(&ea, &outer))
}

/// A function of two real variables as used by the spectral calculus:
/// a trigonometric polynomial, a dilated one `x -> f(σx)`, or a table.
#[derive(Clone, Debug, PartialEq)]
pub enum PairFunction {
    Trig(TrigPoly),
    Dilated { base: TrigPoly, sigma: f64 },
    Grid(GridFunction2),
}

impl PairFunction {
    /// `f(A,B)` through the spectral definition.
    pub fn eval_spectral(&self, a: &SpectralDecomposition, b: &SpectralDecomposition) -> Result<CMatrix> {
        match self {
            PairFunction::Trig(f) => trig_pair_spectral(f, a, b),
            PairFunction::Dilated { base, sigma } => {
                trig_pair_spectral(base, &a.scaled(1.0 / sigma), &b.scaled(1.0 / sigma))
            }
            PairFunction::Grid(g) => eval_pair_spectral_with(g, a, b),
        }
    }

    /// The function `(x, y) -> f(σx, σy)`.
    pub fn dilate(&self, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dilation must be positive, got {sigma}"
            )));
        }
        Ok(match self {
            PairFunction::Trig(f) => PairFunction::Dilated { base: f.clone(), sigma },
            PairFunction::Dilated { base, sigma: s } => PairFunction::Dilated {
                base: base.clone(),
                sigma: s * sigma,
            },
            PairFunction::Grid(g) => PairFunction::Grid(g.dilated(sigma)),
        })
    }

    /// Multiplies the function by a scalar.
    pub fn scale(&self, alpha: f64) -> Self {
        let a = Complex64::new(alpha, 0.0);
        match self {
            PairFunction::Trig(f) => PairFunction::Trig(f.scale(a)),
            PairFunction::Dilated { base, sigma } => PairFunction::Dilated {
                base: base.scale(a),
                sigma: *sigma,
            },
            PairFunction::Grid(g) => {
                let mut out = g.clone();
                for v in out.values.iter_mut().flatten() {
                    *v *= a;
                }
                PairFunction::Grid(out)
            }
        }
    }
}

/// Rescaled pair from [`scale_pair`].
#[derive(Clone, Debug)]
pub struct ScaledPair {
    pub f: PairFunction,
    pub a: HermitianOperator,
    pub b: HermitianOperator,
}

/// `A = A0/σ`, `B = B0/σ`, `f(x,y) = f0(σx, σy)`, so that
/// `f(A, B) = f0(A0, B0)` by spectral mapping.
pub fn scale_pair(f0: &PairFunction, a0: &HermitianOperator, b0: &HermitianOperator, sigma: f64) -> Result<ScaledPair> {
    let f = f0.dilate(sigma)?;
    Ok(ScaledPair {
        f,
        a: a0.scale(1.0 / sigma),
        b: b0.scale(1.0 / sigma),
    })
}

/// `g(z1, z2) = z1^{n1} z2^{n2} f(z1, z2)`, so that
/// `g(U, V) = U^{n1} f(U, V) V^{n2}`.
pub fn modulate(f: &TrigPoly, n1: i64, n2: i64) -> Result<TrigPoly> {
    check_poly_dim(f, 2)?;
    f.shift(&[n1, n2])
}
