use serde::{Deserialize, Serialize};

use crate::besov::{besov_norm, TrigPoly};
use crate::error::{Error, Result};
use crate::funcalc::{
    eval_triple_spectral_with, trig_triple_spectral, GridFunction3, PairFunction, UnitaryPairEvaluator,
};
use crate::opcore::{
    eig_hermitian, eig_unitary, exp_i_from, schatten_norm, unitary_log, CMatrix, HermitianOperator, SchattenExponent,
    UnitaryOperator,
};

/// Denominator normalization of the Lipschitz ratio.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormMode {
    #[serde(alias = "BESOV")]
    Besov,
    #[serde(alias = "SUP")]
    Sup,
}

impl std::fmt::Display for NormMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NormMode::Besov => "besov",
            NormMode::Sup => "sup",
        })
    }
}

impl std::str::FromStr for NormMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "besov" => Ok(NormMode::Besov),
            "sup" => Ok(NormMode::Sup),
            _ => Err(Error::InvalidArgument(format!(
                "unknown norm mode {s:?} (expected besov or sup)"
            ))),
        }
    }
}

/// Which operator tuple an instance carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Hermitian,
    Unitary,
    Triple,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Hermitian => "hermitian",
            Mode::Unitary => "unitary",
            Mode::Triple => "triple",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hermitian" => Ok(Mode::Hermitian),
            "unitary" => Ok(Mode::Unitary),
            "triple" => Ok(Mode::Triple),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s:?}"))),
        }
    }
}

/// Operator tuples; only the operators with index 1/2 differ between the
/// two evaluations.
#[derive(Clone, Debug)]
pub enum Operators {
    /// `f(A1, B) - f(A2, B)`.
    Hermitian {
        a1: HermitianOperator,
        a2: HermitianOperator,
        b: HermitianOperator,
    },
    /// `f(A1, B1) - f(A2, B2)`, perturbation `||A1-A2|| + ||B1-B2||`.
    HermitianTwoSided {
        a1: HermitianOperator,
        a2: HermitianOperator,
        b1: HermitianOperator,
        b2: HermitianOperator,
    },
    /// `f(U1, V) - f(U2, V)`.
    Unitary {
        u1: UnitaryOperator,
        u2: UnitaryOperator,
        v: UnitaryOperator,
    },
    /// `f(A, B, C1) - f(A, B, C2)`.
    Triple {
        a: HermitianOperator,
        b: HermitianOperator,
        c1: HermitianOperator,
        c2: HermitianOperator,
    },
}

impl Operators {
    pub fn mode(&self) -> Mode {
        match self {
            Operators::Hermitian { .. } | Operators::HermitianTwoSided { .. } => Mode::Hermitian,
            Operators::Unitary { .. } => Mode::Unitary,
            Operators::Triple { .. } => Mode::Triple,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Operators::Hermitian { b, .. } | Operators::HermitianTwoSided { b1: b, .. } => b.dim(),
            Operators::Unitary { v, .. } => v.dim(),
            Operators::Triple { a, .. } => a.dim(),
        }
    }

    fn dims(&self) -> Vec<usize> {
        match self {
            Operators::Hermitian { a1, a2, b } => vec![a1.dim(), a2.dim(), b.dim()],
            Operators::HermitianTwoSided { a1, a2, b1, b2 } => vec![a1.dim(), a2.dim(), b1.dim(), b2.dim()],
            Operators::Unitary { u1, u2, v } => vec![u1.dim(), u2.dim(), v.dim()],
            Operators::Triple { a, b, c1, c2 } => vec![a.dim(), b.dim(), c1.dim(), c2.dim()],
        }
    }

    fn hermitians(&self) -> Vec<&HermitianOperator> {
        match self {
            Operators::Hermitian { a1, a2, b } => vec![a1, a2, b],
            Operators::HermitianTwoSided { a1, a2, b1, b2 } => vec![a1, a2, b1, b2],
            Operators::Unitary { .. } => Vec::new(),
            Operators::Triple { a, b, c1, c2 } => vec![a, b, c1, c2],
        }
    }

    /// Simultaneous conjugation `X -> W X W^*` of every operator.
    pub fn conjugate_by(&self, w: &UnitaryOperator) -> Self {
        match self {
            Operators::Hermitian { a1, a2, b } => Operators::Hermitian {
                a1: a1.conjugate_by(w),
                a2: a2.conjugate_by(w),
                b: b.conjugate_by(w),
            },
            Operators::HermitianTwoSided { a1, a2, b1, b2 } => Operators::HermitianTwoSided {
                a1: a1.conjugate_by(w),
                a2: a2.conjugate_by(w),
                b1: b1.conjugate_by(w),
                b2: b2.conjugate_by(w),
            },
            Operators::Unitary { u1, u2, v } => Operators::Unitary {
                u1: u1.conjugate_by(w),
                u2: u2.conjugate_by(w),
                v: v.conjugate_by(w),
            },
            Operators::Triple { a, b, c1, c2 } => Operators::Triple {
                a: a.conjugate_by(w),
                b: b.conjugate_by(w),
                c1: c1.conjugate_by(w),
                c2: c2.conjugate_by(w),
            },
        }
    }
}

/// The function part of an instance.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceFunction {
    /// Two-variable function for Hermitian or unitary pairs.
    Pair(PairFunction),
    /// Trigonometric polynomial in three variables.
    Triple(TrigPoly),
    /// Tabulated three-variable function.
    TripleGrid(GridFunction3),
}

impl InstanceFunction {
    /// `||f||` in the requested normalization.
    ///
    /// Besov norms are `B^1_{∞,1}` for two variables and `B^2_{∞,1}` for
    /// three. A dilated `x -> f(σx)` is assigned `σ ||f||`, the homogeneous
    /// scaling that makes the ratio exactly invariant under rescaling.
    /// Tabulated functions only carry a sup norm.
    pub fn norm(&self, mode: NormMode) -> Result<f64> {
        match (self, mode) {
            (InstanceFunction::Pair(PairFunction::Trig(f)), NormMode::Besov) => besov_norm(f, 1),
            (InstanceFunction::Pair(PairFunction::Trig(f)), NormMode::Sup) => Ok(f.grid_sup()),
            (InstanceFunction::Pair(PairFunction::Dilated { base, sigma }), NormMode::Besov) => {
                Ok(sigma * besov_norm(base, 1)?)
            }
            (InstanceFunction::Pair(PairFunction::Dilated { base, .. }), NormMode::Sup) => Ok(base.grid_sup()),
            (InstanceFunction::Pair(PairFunction::Grid(g)), NormMode::Sup) => Ok(g.sup_norm()),
            (InstanceFunction::Triple(f), NormMode::Besov) => besov_norm(f, 2),
            (InstanceFunction::Triple(f), NormMode::Sup) => Ok(f.grid_sup()),
            (InstanceFunction::TripleGrid(g), NormMode::Sup) => Ok(g.sup_norm()),
            (_, NormMode::Besov) => Err(Error::Unsupported(
                "tabulated functions have no Besov norm; use the sup normalization".into(),
            )),
        }
    }

    /// The underlying trigonometric polynomial, when there is one.
    pub fn trig(&self) -> Option<&TrigPoly> {
        match self {
            InstanceFunction::Pair(PairFunction::Trig(f)) | InstanceFunction::Triple(f) => Some(f),
            InstanceFunction::Pair(PairFunction::Dilated { base, .. }) => Some(base),
            _ => None,
        }
    }

    fn arity(&self) -> usize {
        match self {
            InstanceFunction::Pair(_) => 2,
            _ => 3,
        }
    }
}

/// A Lipschitz-ratio instance: function, operators, exponent and
/// normalization.
#[derive(Clone, Debug)]
pub struct RatioInstance {
    f: InstanceFunction,
    ops: Operators,
    p: SchattenExponent,
    norm_mode: NormMode,
}

impl RatioInstance {
    /// Validates operator dimensions and the function arity for the mode.
    pub fn new(f: InstanceFunction, ops: Operators, p: SchattenExponent, norm_mode: NormMode) -> Result<Self> {
        let dims = ops.dims();
        if let Some(&bad) = dims.iter().find(|&&d| d != dims[0]) {
            return Err(Error::DimensionMismatch {
                expected: dims[0],
                actual: bad,
            });
        }
        let want = if ops.mode() == Mode::Triple { 3 } else { 2 };
        if f.arity() != want {
            return Err(Error::InvalidArgument(format!(
                "{} mode needs a function of {want} variables",
                ops.mode()
            )));
        }
        if let Some(t) = f.trig() {
            if t.dim() != want {
                return Err(Error::InvalidPolyDimension(t.dim()));
            }
        }
        if ops.mode() == Mode::Unitary
            && !matches!(
                f,
                InstanceFunction::Pair(PairFunction::Trig(_)) | InstanceFunction::Pair(PairFunction::Grid(_))
            )
        {
            return Err(Error::Unsupported(
                "unitary mode takes a trigonometric polynomial or a table".into(),
            ));
        }
        Ok(Self { f, ops, p, norm_mode })
    }

    /// Rejects Hermitian operators with operator norm above `1 + 1e-12`.
    pub fn require_contractions(self) -> Result<Self> {
        for h in self.ops.hermitians() {
            let norm = h.op_norm();
            if norm > 1.0 + 1e-12 {
                return Err(Error::InvalidArgument(format!("operator norm {norm} exceeds 1")));
            }
        }
        Ok(self)
    }

    pub fn function(&self) -> &InstanceFunction {
        &self.f
    }

    pub fn operators(&self) -> &Operators {
        &self.ops
    }

    pub fn p(&self) -> SchattenExponent {
        self.p
    }

    pub fn norm_mode(&self) -> NormMode {
        self.norm_mode
    }

    pub fn mode(&self) -> Mode {
        self.ops.mode()
    }

    pub fn dim(&self) -> usize {
        self.ops.dim()
    }

    pub fn with_p(&self, p: SchattenExponent) -> Self {
        Self { p, ..self.clone() }
    }

    pub fn with_norm_mode(&self, norm_mode: NormMode) -> Self {
        Self {
            norm_mode,
            ..self.clone()
        }
    }

    pub fn with_function(&self, f: InstanceFunction) -> Result<Self> {
        Self::new(f, self.ops.clone(), self.p, self.norm_mode)
    }

    pub fn with_operators(&self, ops: Operators) -> Result<Self> {
        Self::new(self.f.clone(), ops, self.p, self.norm_mode)
    }

    /// `||f||` in the instance normalization.
    pub fn function_norm(&self) -> Result<f64> {
        self.f.norm(self.norm_mode)
    }

    /// Schatten norm of the operator perturbation.
    pub fn perturbation_norm(&self) -> f64 {
        match &self.ops {
            Operators::Hermitian { a1, a2, .. } => schatten_norm(&(a1.entries() - a2.entries()), self.p),
            Operators::HermitianTwoSided { a1, a2, b1, b2 } => {
                schatten_norm(&(a1.entries() - a2.entries()), self.p)
                    + schatten_norm(&(b1.entries() - b2.entries()), self.p)
            }
            Operators::Unitary { u1, u2, .. } => schatten_norm(&(u1.entries() - u2.entries()), self.p),
            Operators::Triple { c1, c2, .. } => schatten_norm(&(c1.entries() - c2.entries()), self.p),
        }
    }

    /// The matrix `f(X1, ...) - f(X2, ...)`.
    pub fn increment(&self) -> Result<CMatrix> {
        match (&self.ops, &self.f) {
            (Operators::Hermitian { a1, a2, b }, InstanceFunction::Pair(f)) => {
                let db = eig_hermitian(b, None)?;
                let v1 = f.eval_spectral(&eig_hermitian(a1, None)?, &db)?;
                let v2 = f.eval_spectral(&eig_hermitian(a2, None)?, &db)?;
                Ok(v1 - v2)
            }
            (Operators::HermitianTwoSided { a1, a2, b1, b2 }, InstanceFunction::Pair(f)) => {
                let v1 = f.eval_spectral(&eig_hermitian(a1, None)?, &eig_hermitian(b1, None)?)?;
                let v2 = f.eval_spectral(&eig_hermitian(a2, None)?, &eig_hermitian(b2, None)?)?;
                Ok(v1 - v2)
            }
            (Operators::Unitary { u1, u2, v }, InstanceFunction::Pair(PairFunction::Trig(f))) => {
                let ev = UnitaryPairEvaluator::new(f, v.entries())?;
                Ok(ev.eval(u1.entries()) - ev.eval(u2.entries()))
            }
            (Operators::Unitary { u1, u2, v }, InstanceFunction::Pair(f)) => {
                let dv = eig_unitary(v, None)?;
                Ok(f.eval_spectral(&eig_unitary(u1, None)?, &dv)? - f.eval_spectral(&eig_unitary(u2, None)?, &dv)?)
            }
            (Operators::Triple { a, b, c1, c2 }, f) => {
                let (da, db) = (eig_hermitian(a, None)?, eig_hermitian(b, None)?);
                let (dc1, dc2) = (eig_hermitian(c1, None)?, eig_hermitian(c2, None)?);
                match f {
                    InstanceFunction::Triple(t) => {
                        Ok(trig_triple_spectral(t, &da, &db, &dc1)? - trig_triple_spectral(t, &da, &db, &dc2)?)
                    }
                    InstanceFunction::TripleGrid(g) => {
                        Ok(eval_triple_spectral_with(g, &da, &db, &dc1)?
                            - eval_triple_spectral_with(g, &da, &db, &dc2)?)
                    }
                    InstanceFunction::Pair(_) => unreachable!("arity checked on construction"),
                }
            }
            _ => unreachable!("arity checked on construction"),
        }
    }
}

/// `||f(X1, ...) - f(X2, ...)||_{S_p}`.
pub fn increment_norm(inst: &RatioInstance) -> Result<f64> {
    Ok(schatten_norm(&inst.increment()?, inst.p))
}

/// `increment_norm / (||f|| * perturbation_norm)`.
pub fn lipschitz_ratio(inst: &RatioInstance) -> Result<f64> {
    let pert = inst.perturbation_norm();
    if pert <= 1e-14 {
        return Err(Error::ZeroDenominator(format!("perturbation norm {pert:e}")));
    }
    let fnorm = inst.function_norm()?;
    if fnorm <= 1e-14 {
        return Err(Error::ZeroDenominator(format!("function norm {fnorm:e}")));
    }
    Ok(increment_norm(inst)? / (fnorm * pert))
}

/// Result of [`subdivide_select`].
#[derive(Clone, Debug)]
pub struct SubdivisionStep {
    /// Index `j` of the selected pair `(A^{(j)}, A^{(j+1)})`.
    pub index: usize,
    pub instance: RatioInstance,
    pub ratio: f64,
    /// Ratio of every consecutive pair, in order.
    pub step_ratios: Vec<f64>,
}

/// Splits `A1 -> A2` into `N` equal steps `A^{(j)} = A1 + (j/N)(A2 - A1)`
/// and returns the step with the largest ratio.
pub fn subdivide_select(inst: &RatioInstance, n: usize) -> Result<SubdivisionStep> {
    if n == 0 {
        return Err(Error::InvalidArgument("subdivision count must be positive".into()));
    }
    let Operators::Hermitian { a1, a2, b } = &inst.ops else {
        return Err(Error::Unsupported("subdivision is defined for Hermitian pairs".into()));
    };
    if n == 1 {
        let ratio = lipschitz_ratio(inst)?;
        return Ok(SubdivisionStep {
            index: 0,
            instance: inst.clone(),
            ratio,
            step_ratios: vec![ratio],
        });
    }
    let point = |j: usize| {
        if j == 0 {
            a1.clone()
        } else if j == n {
            a2.clone()
        } else {
            a1.add_scaled(&a2.add_scaled(a1, -1.0), j as f64 / n as f64)
        }
    };
    let mut steps = Vec::with_capacity(n);
    let mut ratios = Vec::with_capacity(n);
    for j in 0..n {
        let step = inst.with_operators(Operators::Hermitian {
            a1: point(j),
            a2: point(j + 1),
            b: b.clone(),
        })?;
        ratios.push(lipschitz_ratio(&step)?);
        steps.push(step);
    }
    let index = (0..n).fold(0, |best, j| if ratios[j] > ratios[best] { j } else { best });
    Ok(SubdivisionStep {
        index,
        instance: steps.swap_remove(index),
        ratio: ratios[index],
        step_ratios: ratios,
    })
}

/// `U^{[k]} = U1 e^{i k A / N}`, `k = 0..=N`, with `e^{iA} = U1^* U2` and
/// `spec A ⊂ (-π, π]`.
pub fn unitary_path(u1: &UnitaryOperator, u2: &UnitaryOperator, n: usize) -> Result<Vec<UnitaryOperator>> {
    if n == 0 {
        return Err(Error::InvalidArgument("path length must be positive".into()));
    }
    if u1.dim() != u2.dim() {
        return Err(Error::DimensionMismatch {
            expected: u1.dim(),
            actual: u2.dim(),
        });
    }
    let a = unitary_log(&u1.adjoint().mul(u2));
    let dec = eig_hermitian(&a, None)?;
    let mut path = Vec::with_capacity(n + 1);
    path.push(u1.clone());
    for k in 1..=n {
        path.push(u1.mul(&exp_i_from(&dec, k as f64 / n as f64)));
    }
    Ok(path)
}
