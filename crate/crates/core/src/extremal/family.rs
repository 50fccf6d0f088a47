use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::instance::{InstanceFunction, Mode, NormMode, Operators, RatioInstance};
use super::mask::SupportMask;
use crate::besov::{MultiIndex, TrigPoly};
use crate::error::{Error, Result};
use crate::funcalc::PairFunction;
use crate::opcore::{HermitianOperator, SchattenExponent, UnitaryOperator};

/// Heuristic starting families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// Gaussian coefficients from the given seed.
    Random(u64),
    /// Discrete Hilbert kernel `1 / (j - k + 1/2)` on the degree box.
    Triangular,
    /// `(1 - z1^m) g` with `g` a Hilbert kernel of degree `m - 1`, so that
    /// `f(U2, V) = 0` for the shift `U2`.
    Optimized,
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyKind::Random(s) => write!(f, "random({s})"),
            FamilyKind::Triangular => f.write_str("triangular"),
            FamilyKind::Optimized => f.write_str("optimized"),
        }
    }
}

/// Largest degree per variable of the unitary family in dimension `m`.
pub fn unitary_degree(m: usize) -> i64 {
    4 * m as i64 - 2
}

/// Degree box `[-D, D]` per variable of the Hermitian family.
pub fn hermitian_degree(m: usize) -> i64 {
    (2 * m as i64).min(8)
}

/// Degree box `[-D, D]` per variable of the triple family.
pub fn triple_degree(m: usize) -> i64 {
    (m as i64).min(4)
}

fn hilbert(j: i64, k: i64) -> f64 {
    1.0 / ((j - k) as f64 + 0.5)
}

/// Coefficient indices a search may use in `mode` at dimension `m`:
/// the analytic box `[0, 4m-2]^2` for unitaries (intersected with the
/// mask), and symmetric boxes for Hermitian pairs and triples.
pub fn support_indices(mode: Mode, m: usize, mask: Option<&SupportMask>) -> Vec<MultiIndex> {
    match mode {
        Mode::Unitary => {
            let d = unitary_degree(m);
            let mut out = Vec::new();
            for j in 0..=d {
                for k in 0..=d {
                    if mask.is_none_or(|mk| mk.contains(j, k)) {
                        out.push([j, k, 0]);
                    }
                }
            }
            out
        }
        Mode::Hermitian => {
            let d = hermitian_degree(m);
            let mut out = Vec::new();
            for j in -d..=d {
                for k in -d..=d {
                    if mask.is_none_or(|mk| mk.contains(j, k)) {
                        out.push([j, k, 0]);
                    }
                }
            }
            out
        }
        Mode::Triple => {
            let d = triple_degree(m);
            let mut out = Vec::new();
            for j in -d..=d {
                for k in -d..=d {
                    for l in -d..=d {
                        out.push([j, k, l]);
                    }
                }
            }
            out
        }
    }
}

fn poly_dim(mode: Mode) -> usize {
    if mode == Mode::Triple {
        3
    } else {
        2
    }
}

/// The family function for `mode`, dimension `m` and `kind`.
pub fn family_function(mode: Mode, m: usize, kind: FamilyKind, mask: Option<&SupportMask>) -> Result<TrigPoly> {
    let dim = poly_dim(mode);
    let support = support_indices(mode, m, mask);
    let f = match kind {
        FamilyKind::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let scale = 1.0 / (support.len().max(1) as f64).sqrt();
            TrigPoly::from_coeffs(
                dim,
                support.iter().map(|j| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    (j[..dim].to_vec(), Complex64::new(re, im) * scale)
                }),
            )?
        }
        FamilyKind::Triangular => TrigPoly::from_coeffs(
            dim,
            support.iter().map(|j| {
                let w = if dim == 3 { 1.0 / (1.0 + j[2].abs() as f64) } else { 1.0 };
                (j[..dim].to_vec(), Complex64::new(w * hilbert(j[0], j[1]), 0.0))
            }),
        )?,
        FamilyKind::Optimized => {
            if mode != Mode::Unitary {
                return Err(Error::Unsupported(
                    "the optimized family is defined in unitary mode".into(),
                ));
            }
            let m = m as i64;
            let mut coeffs = Vec::new();
            for j in 0..2 * m {
                for k in 0..m {
                    let g = |jj: i64| if (0..m).contains(&jj) { hilbert(jj, k) } else { 0.0 };
                    let c = g(j) - g(j - m);
                    if mask.is_none_or(|mk| mk.contains(j, k)) {
                        coeffs.push((vec![j, k], Complex64::new(c, 0.0)));
                    }
                }
            }
            TrigPoly::from_coeffs(2, coeffs)?
        }
    };
    if f.is_zero() {
        return Err(Error::InvalidArgument(
            "the support mask excludes every coefficient of the family".into(),
        ));
    }
    Ok(f)
}

/// `V = diag(ω^k)`, `U2` the cyclic shift, `U1 = e^{iπ/m} U2`.
pub fn unitary_family_operators(m: usize) -> Result<Operators> {
    let omega = 2.0 * std::f64::consts::PI / m as f64;
    let phases: Vec<f64> = (0..m).map(|k| omega * k as f64).collect();
    let v = UnitaryOperator::from_phases(&phases)?;
    let u2 = UnitaryOperator::cyclic_shift(m)?;
    let u1 = u2.phase(std::f64::consts::PI / m as f64);
    Ok(Operators::Unitary { u1, u2, v })
}

fn shift_parts(m: usize) -> Result<(HermitianOperator, HermitianOperator)> {
    let s = UnitaryOperator::cyclic_shift(m)?;
    let se = s.entries();
    let re = HermitianOperator::hermitian_part(se)?;
    let zeta = Complex64::from_polar(1.0, std::f64::consts::PI / (2 * m) as f64);
    let im = HermitianOperator::hermitian_part(&(se * (zeta * Complex64::new(0.0, -1.0))))?;
    Ok((re, im))
}

fn diag_of<F: Fn(f64) -> f64>(m: usize, g: F) -> Result<HermitianOperator> {
    let d: Vec<f64> = (0..m)
        .map(|k| g(2.0 * std::f64::consts::PI * k as f64 / m as f64))
        .collect();
    HermitianOperator::from_real_diagonal(&d)
}

/// `B = diag(cos 2πk/m)`, `A2 = Re S`, `A1 = A2 + D / m` with
/// `D = diag(sin(2πk/m + π/2m))`, rescaled to a contraction.
pub fn hermitian_family_operators(m: usize) -> Result<Operators> {
    let (re, _) = shift_parts(m)?;
    let b = diag_of(m, f64::cos)?;
    let d = diag_of(m, |t| (t + std::f64::consts::PI / (2 * m) as f64).sin())?;
    let a1 = re.add_scaled(&d, 1.0 / m as f64).project_to_contraction();
    Ok(Operators::Hermitian { a1, a2: re, b })
}

/// `A = Re S`, `B = diag(cos 2πk/m)`, `C2 = diag(sin 2πk/m)`,
/// `C1 = C2 + Im(ζS) / m` rescaled to a contraction.
pub fn triple_family_operators(m: usize) -> Result<Operators> {
    let (re, im) = shift_parts(m)?;
    let c2 = diag_of(m, f64::sin)?;
    let c1 = c2.add_scaled(&im, 1.0 / m as f64).project_to_contraction();
    Ok(Operators::Triple {
        a: re,
        b: diag_of(m, f64::cos)?,
        c1,
        c2,
    })
}

/// Deterministic unitary-mode candidate of dimension `m >= 2`.
pub fn seeded_family(
    m: usize,
    kind: FamilyKind,
    mask: Option<&SupportMask>,
    p: SchattenExponent,
    norm_mode: NormMode,
) -> Result<RatioInstance> {
    family_instance(Mode::Unitary, m, kind, mask, p, norm_mode)
}

/// Seeded candidate in any mode. Hermitian and triple families support the
/// random and triangular kinds.
pub fn family_instance(
    mode: Mode,
    m: usize,
    kind: FamilyKind,
    mask: Option<&SupportMask>,
    p: SchattenExponent,
    norm_mode: NormMode,
) -> Result<RatioInstance> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("seeded families need m >= 2, got {m}")));
    }
    let f = family_function(mode, m, kind, mask)?;
    let ops = family_operators(mode, m)?;
    let f = match mode {
        Mode::Triple => InstanceFunction::Triple(f),
        _ => InstanceFunction::Pair(PairFunction::Trig(f)),
    };
    RatioInstance::new(f, ops, p, norm_mode)
}

pub fn family_operators(mode: Mode, m: usize) -> Result<Operators> {
    match mode {
        Mode::Unitary => unitary_family_operators(m),
        Mode::Hermitian => hermitian_family_operators(m),
        Mode::Triple => triple_family_operators(m),
    }
}

/// Kinds tried before any search move, per mode.
pub fn seeded_kinds(mode: Mode, seed: u64) -> Vec<FamilyKind> {
    match mode {
        Mode::Unitary => vec![FamilyKind::Triangular, FamilyKind::Optimized, FamilyKind::Random(seed)],
        Mode::Hermitian | Mode::Triple => vec![FamilyKind::Triangular, FamilyKind::Random(seed)],
    }
}
