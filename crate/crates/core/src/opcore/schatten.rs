use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::jacobi::joint_diagonalize;
use super::{max_abs, CMatrix};
use crate::error::{Error, Result};

/// Exponent `p` of a Schatten–von Neumann norm; `Inf` is the operator norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SchattenExponent {
    Finite(f64),
    Inf,
}

impl SchattenExponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            Ok(Self::Inf)
        } else {
            Ok(Self::Finite(p))
        }
    }

    /// `p` as a float, `f64::INFINITY` for the operator norm.
    pub fn value(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Inf => f64::INFINITY,
        }
    }

    /// `1/p`, zero for the operator norm.
    pub fn reciprocal(self) -> f64 {
        match self {
            Self::Finite(p) => 1.0 / p,
            Self::Inf => 0.0,
        }
    }

    /// The quantity `sum_k x_k^p` for finite `p` and `max_k x_k` for `Inf`,
    /// i.e. what direct-sum additivity is stated for.
    pub fn power(self, x: f64) -> f64 {
        match self {
            Self::Finite(p) => x.powf(p),
            Self::Inf => x,
        }
    }
}

impl fmt::Display for SchattenExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Inf => write!(f, "inf"),
        }
    }
}

impl FromStr for SchattenExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Self::Inf);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("not a Schatten exponent: {s:?}")))?;
        Self::new(p)
    }
}

impl Serialize for SchattenExponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(p) => serializer.serialize_f64(*p),
            Self::Inf => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for SchattenExponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(p) => SchattenExponent::new(p).map_err(serde::de::Error::custom),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Singular values in descending order.
///
/// The Gram matrix `M^* M` (or `M M^*`, whichever is smaller) is
/// diagonalized by Jacobi; each singular value is then read off as
/// `||M v_k||` for the eigenvector `v_k`, which keeps small singular values
/// accurate to `eps * s_max` instead of `sqrt(eps) * s_max`.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let scale = max_abs(m);
    if scale == 0.0 || m.nrows() == 0 || m.ncols() == 0 {
        return vec![0.0; m.nrows().min(m.ncols())];
    }
    let work = if m.nrows() < m.ncols() {
        m.adjoint().unscale(scale)
    } else {
        m.unscale(scale)
    };
    let gram = work.adjoint() * &work;
    let (v, _) = joint_diagonalize(std::slice::from_ref(&gram));
    let mv = &work * v;
    let mut s: Vec<f64> = mv.column_iter().map(|c| c.norm() * scale).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `(sum s_k^p)^{1/p}` over singular values; the largest one for `Inf`.
pub fn schatten_norm(m: &CMatrix, p: SchattenExponent) -> f64 {
    let s = singular_values(m);
    norm_of_singular_values(&s, p)
}

pub(crate) fn norm_of_singular_values(s: &[f64], p: SchattenExponent) -> f64 {
    let top = s.iter().fold(0.0_f64, |acc, &x| acc.max(x));
    if top == 0.0 {
        return 0.0;
    }
    match p {
        SchattenExponent::Inf => top,
        SchattenExponent::Finite(p) => {
            let sum: f64 = s.iter().map(|&x| (x / top).powf(p)).sum();
            top * sum.powf(1.0 / p)
        }
    }
}
