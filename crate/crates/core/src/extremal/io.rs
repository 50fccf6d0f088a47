//! JSON form of ratio instances.
//!
//! ```json
//! {
//!   "p": 2, "norm_mode": "besov",
//!   "function": {"kind": "trig", "dim": 2, "coeffs": [[[1, 0], 1.0, 0.0]]},
//!   "operators": {"mode": "hermitian", "a1": [[[0.0, 0.0]]], "a2": [[[0.5, 0.0]]], "b": [[[0.0, 0.0]]]}
//! }
//! ```
//!
//! Matrices are row-major arrays of `[re, im]` pairs.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::instance::{InstanceFunction, NormMode, Operators, RatioInstance};
use crate::besov::TrigPoly;
use crate::error::{Error, Result};
use crate::funcalc::{GridFunction2, PairFunction};
use crate::opcore::{CMatrix, HermitianOperator, SchattenExponent, UnitaryOperator};

type MatrixSpec = Vec<Vec<[f64; 2]>>;
type CoeffSpec = Vec<(Vec<i64>, f64, f64)>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctionSpec {
    Trig {
        dim: usize,
        coeffs: CoeffSpec,
    },
    Dilated {
        coeffs: CoeffSpec,
        sigma: f64,
    },
    Grid {
        x_keys: Vec<[f64; 2]>,
        y_keys: Vec<[f64; 2]>,
        values: Vec<Option<[f64; 2]>>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    Hermitian {
        a1: MatrixSpec,
        a2: MatrixSpec,
        b: MatrixSpec,
    },
    HermitianTwoSided {
        a1: MatrixSpec,
        a2: MatrixSpec,
        b1: MatrixSpec,
        b2: MatrixSpec,
    },
    Unitary {
        u1: MatrixSpec,
        u2: MatrixSpec,
        v: MatrixSpec,
    },
    Triple {
        a: MatrixSpec,
        b: MatrixSpec,
        c1: MatrixSpec,
        c2: MatrixSpec,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub p: SchattenExponent,
    pub norm_mode: NormMode,
    pub function: FunctionSpec,
    pub operators: OperatorSpec,
}

fn c(z: [f64; 2]) -> Complex64 {
    Complex64::new(z[0], z[1])
}

fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn matrix_to_spec(m: &CMatrix) -> MatrixSpec {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| pair(&m[(i, j)])).collect())
        .collect()
}

fn matrix_from_spec(rows: &MatrixSpec) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: bad.len(),
        });
    }
    Ok(CMatrix::from_fn(n, n, |i, j| c(rows[i][j])))
}

fn herm(m: &MatrixSpec) -> Result<HermitianOperator> {
    HermitianOperator::new(matrix_from_spec(m)?)
}

fn unit(m: &MatrixSpec) -> Result<UnitaryOperator> {
    UnitaryOperator::new(matrix_from_spec(m)?)
}

fn coeffs_to_spec(f: &TrigPoly) -> CoeffSpec {
    f.coeffs().map(|(j, z)| (j[..f.dim()].to_vec(), z.re, z.im)).collect()
}

fn coeffs_from_spec(dim: usize, coeffs: &CoeffSpec) -> Result<TrigPoly> {
    if let Some((j, _, _)) = coeffs.iter().find(|(j, _, _)| j.len() != dim) {
        return Err(Error::InvalidArgument(format!(
            "coefficient index {j:?} does not have {dim} components"
        )));
    }
    TrigPoly::from_coeffs(
        dim,
        coeffs.iter().map(|(j, re, im)| (j.clone(), Complex64::new(*re, *im))),
    )
}

impl InstanceFile {
    pub fn from_instance(inst: &RatioInstance) -> Result<Self> {
        let function = match inst.function() {
            InstanceFunction::Pair(PairFunction::Trig(f)) | InstanceFunction::Triple(f) => FunctionSpec::Trig {
                dim: f.dim(),
                coeffs: coeffs_to_spec(f),
            },
            InstanceFunction::Pair(PairFunction::Dilated { base, sigma }) => FunctionSpec::Dilated {
                coeffs: coeffs_to_spec(base),
                sigma: *sigma,
            },
            InstanceFunction::Pair(PairFunction::Grid(g)) => FunctionSpec::Grid {
                x_keys: g.x_keys().iter().map(pair).collect(),
                y_keys: g.y_keys().iter().map(pair).collect(),
                values: g.values().iter().map(|v| v.as_ref().map(pair)).collect(),
            },
            InstanceFunction::TripleGrid(_) => {
                return Err(Error::Unsupported(
                    "tabulated three-variable functions have no file form".into(),
                ))
            }
        };
        let operators = match inst.operators() {
            Operators::Hermitian { a1, a2, b } => OperatorSpec::Hermitian {
                a1: matrix_to_spec(a1.entries()),
                a2: matrix_to_spec(a2.entries()),
                b: matrix_to_spec(b.entries()),
            },
            Operators::HermitianTwoSided { a1, a2, b1, b2 } => OperatorSpec::HermitianTwoSided {
                a1: matrix_to_spec(a1.entries()),
                a2: matrix_to_spec(a2.entries()),
                b1: matrix_to_spec(b1.entries()),
                b2: matrix_to_spec(b2.entries()),
            },
            Operators::Unitary { u1, u2, v } => OperatorSpec::Unitary {
                u1: matrix_to_spec(u1.entries()),
                u2: matrix_to_spec(u2.entries()),
                v: matrix_to_spec(v.entries()),
            },
            Operators::Triple { a, b, c1, c2 } => OperatorSpec::Triple {
                a: matrix_to_spec(a.entries()),
                b: matrix_to_spec(b.entries()),
                c1: matrix_to_spec(c1.entries()),
                c2: matrix_to_spec(c2.entries()),
            },
        };
        Ok(Self {
            p: inst.p(),
            norm_mode: inst.norm_mode(),
            function,
            operators,
        })
    }

    pub fn to_instance(&self) -> Result<RatioInstance> {
        let ops = match &self.operators {
            OperatorSpec::Hermitian { a1, a2, b } => Operators::Hermitian {
                a1: herm(a1)?,
                a2: herm(a2)?,
                b: herm(b)?,
            },
            OperatorSpec::HermitianTwoSided { a1, a2, b1, b2 } => Operators::HermitianTwoSided {
                a1: herm(a1)?,
                a2: herm(a2)?,
                b1: herm(b1)?,
                b2: herm(b2)?,
            },
            OperatorSpec::Unitary { u1, u2, v } => Operators::Unitary {
                u1: unit(u1)?,
                u2: unit(u2)?,
                v: unit(v)?,
            },
            OperatorSpec::Triple { a, b, c1, c2 } => Operators::Triple {
                a: herm(a)?,
                b: herm(b)?,
                c1: herm(c1)?,
                c2: herm(c2)?,
            },
        };
        let f = match &self.function {
            FunctionSpec::Trig { dim: 3, coeffs } => InstanceFunction::Triple(coeffs_from_spec(3, coeffs)?),
            FunctionSpec::Trig { dim, coeffs } => {
                InstanceFunction::Pair(PairFunction::Trig(coeffs_from_spec(*dim, coeffs)?))
            }
            FunctionSpec::Dilated { coeffs, sigma } => {
                InstanceFunction::Pair(PairFunction::Trig(coeffs_from_spec(2, coeffs)?).dilate(*sigma)?)
            }
            FunctionSpec::Grid { x_keys, y_keys, values } => {
                InstanceFunction::Pair(PairFunction::Grid(GridFunction2::from_parts(
                    x_keys.iter().copied().map(c).collect(),
                    y_keys.iter().copied().map(c).collect(),
                    values.iter().map(|v| v.map(c)).collect(),
                )?))
            }
        };
        RatioInstance::new(f, ops, self.p, self.norm_mode)
    }
}

pub fn instance_to_json(inst: &RatioInstance) -> Result<String> {
    Ok(serde_json::to_string_pretty(&InstanceFile::from_instance(inst)?)?)
}

pub fn instance_from_json(text: &str) -> Result<RatioInstance> {
    serde_json::from_str::<InstanceFile>(text)?.to_instance()
}

pub fn read_instance(path: &Path) -> Result<RatioInstance> {
    instance_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_instance(path: &Path, inst: &RatioInstance) -> Result<()> {
    std::fs::write(path, instance_to_json(inst)?)?;
    Ok(())
}
