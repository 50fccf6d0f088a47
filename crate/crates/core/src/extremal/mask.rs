use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// Fourier support constraint `Λ ⊂ Z^2`.
#[derive(Clone, Debug, PartialEq)]
pub enum SupportMask {
    /// Explicit finite set of integer pairs.
    Finite(BTreeSet<(i64, i64)>),
    /// All of `Z^2`.
    Full,
    /// `j >= 0` and `k >= 0`.
    FirstQuadrant,
    /// Points whose polar angle lies in `[lo, hi]` (radians, measured in
    /// `(-π, π]`), together with the origin.
    Angle { lo: f64, hi: f64 },
}

impl SupportMask {
    pub fn finite<I: IntoIterator<Item = (i64, i64)>>(points: I) -> Self {
        SupportMask::Finite(points.into_iter().collect())
    }

    pub fn contains(&self, j: i64, k: i64) -> bool {
        match self {
            SupportMask::Finite(set) => set.contains(&(j, k)),
            SupportMask::Full => true,
            SupportMask::FirstQuadrant => j >= 0 && k >= 0,
            SupportMask::Angle { lo, hi } => {
                if j == 0 && k == 0 {
                    return true;
                }
                let t = (k as f64).atan2(j as f64);
                (*lo..=*hi).contains(&t)
            }
        }
    }

    /// Members of `[lo, hi]^2`, row-major.
    pub fn points_in_box(&self, lo: i64, hi: i64) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for j in lo..=hi {
            for k in lo..=hi {
                if self.contains(j, k) {
                    out.push((j, k));
                }
            }
        }
        out
    }

    /// Whether `([n1, n1+m] × [n2, n2+m]) ∩ Z^2 ⊂ Λ`.
    pub fn contains_square(&self, n1: i64, n2: i64, m: i64) -> bool {
        (n1..=n1 + m).all(|j| (n2..=n2 + m).all(|k| self.contains(j, k)))
    }
}

/// Value of `ϰ_Λ(m)`: a positive integer or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kappa {
    Finite(u64),
    Infinite,
}

impl std::fmt::Display for Kappa {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kappa::Finite(n) => write!(f, "{n}"),
            Kappa::Infinite => f.write_str("inf"),
        }
    }
}

/// Least `N` such that some `m`-square `[n1, n1+m] × [n2, n2+m]` with
/// `-N <= n1, n2 <= N - m` lies in `Λ`, scanning `N <= n_max`.
pub fn kappa_lambda(mask: &SupportMask, m: u64, n_max: u64) -> Kappa {
    let m = m.max(1) as i64;
    let start = ((m + 1) / 2).max(1);
    for n in start..=n_max as i64 {
        for n1 in -n..=n - m {
            for n2 in -n..=n - m {
                if mask.contains_square(n1, n2, m) {
                    return Kappa::Finite(n as u64);
                }
            }
        }
    }
    Kappa::Infinite
}
