use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::instance::{increment_norm, subdivide_select, InstanceFunction, NormMode, Operators, RatioInstance};
use crate::error::{Error, Result};
use crate::funcalc::{scale_pair, GridFunction2, PairFunction};
use crate::opcore::{direct_sum, schatten_norm, CMatrix, HermitianOperator, SchattenExponent};

/// Per-block figures of a witness, with running sums.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub k: usize,
    pub dim: usize,
    pub pert_norm: f64,
    pub increment_norm: f64,
    /// `||f_k||` in the block's normalization, when defined.
    pub function_norm: Option<f64>,
    /// `sum_{i<=k} ||ΔA_i||^p`.
    pub pert_partial_sum: f64,
    /// `sum_{i<=k} ||Δf_i||^p`.
    pub increment_partial_sum: f64,
}

/// Finite truncation of the direct-sum construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub p: f64,
    pub blocks: Vec<BlockSummary>,
    pub pert_sum: f64,
    /// `sum_{k<=K} 2^{-kp}`, the bound the perturbation sum stays under.
    pub pert_bound: f64,
    pub increment_sum: f64,
    /// `||⊕ΔA_k||_p^p` and `||⊕Δf_k||_p^p` computed on the dense direct sums.
    pub direct_sum_pert: f64,
    pub direct_sum_increment: f64,
    /// Largest relative disagreement between block sums and dense sums.
    pub consistency_residual: f64,
    pub perturbation_bounded: bool,
    pub increment_divergent: bool,
}

impl WitnessReport {
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn consistent(&self) -> bool {
        self.consistency_residual <= 1e-10
    }
}

fn perturbation_matrix(ops: &Operators) -> Result<CMatrix> {
    match ops {
        Operators::Hermitian { a1, a2, .. } => Ok(a1.entries() - a2.entries()),
        Operators::Unitary { u1, u2, .. } => Ok(u1.entries() - u2.entries()),
        Operators::Triple { c1, c2, .. } => Ok(c1.entries() - c2.entries()),
        Operators::HermitianTwoSided { .. } => {
            Err(Error::Unsupported("witness blocks perturb a single operator".into()))
        }
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Validates `||Δf_k||_{S_p} > 1` and `||ΔA_k||_{S_p} < 2^{-k}` for each
/// block (`k` from 1) and reports the partial sums of the truncated direct
/// sum, cross-checked against dense direct sums.
pub fn block_witness(blocks: &[RatioInstance], p: SchattenExponent) -> Result<WitnessReport> {
    let SchattenExponent::Finite(pv) = p else {
        return Err(Error::InvalidArgument("the witness sums need a finite exponent".into()));
    };
    if blocks.is_empty() {
        return Err(Error::EmptyBlockList);
    }
    let mut summaries = Vec::with_capacity(blocks.len());
    let mut perts = Vec::with_capacity(blocks.len());
    let mut incs = Vec::with_capacity(blocks.len());
    let (mut pert_sum, mut inc_sum, mut pert_bound) = (0.0, 0.0, 0.0);
    for (i, block) in blocks.iter().enumerate() {
        let k = i + 1;
        let block = block.with_p(p);
        let dp = perturbation_matrix(block.operators()).map_err(|e| Error::InvalidBlock {
            k,
            reason: e.to_string(),
        })?;
        let df = block.increment()?;
        let pert = schatten_norm(&dp, p);
        let inc = schatten_norm(&df, p);
        let limit = 0.5f64.powi(k as i32);
        if inc.is_nan() || inc <= 1.0 {
            return Err(Error::InvalidBlock {
                k,
                reason: format!("increment norm {inc} is not above 1"),
            });
        }
        if pert.is_nan() || pert >= limit {
            return Err(Error::InvalidBlock {
                k,
                reason: format!("perturbation norm {pert} is not below 2^-{k} = {limit}"),
            });
        }
        pert_sum += pert.powf(pv);
        inc_sum += inc.powf(pv);
        pert_bound += limit.powf(pv);
        summaries.push(BlockSummary {
            k,
            dim: block.dim(),
            pert_norm: pert,
            increment_norm: inc,
            function_norm: block.function_norm().ok(),
            pert_partial_sum: pert_sum,
            increment_partial_sum: inc_sum,
        });
        perts.push(dp);
        incs.push(df);
    }
    let dense_pert = schatten_norm(&direct_sum(perts)?.to_dense(), p).powf(pv);
    let dense_inc = schatten_norm(&direct_sum(incs)?.to_dense(), p).powf(pv);
    let residual = rel_diff(dense_pert, pert_sum).max(rel_diff(dense_inc, inc_sum));
    Ok(WitnessReport {
        p: pv,
        blocks: summaries,
        pert_sum,
        pert_bound,
        increment_sum: inc_sum,
        direct_sum_pert: dense_pert,
        direct_sum_increment: dense_inc,
        consistency_residual: residual,
        perturbation_bounded: pert_sum < 1.0 && pert_sum <= pert_bound,
        increment_divergent: inc_sum >= blocks.len() as f64,
    })
}

/// `K` blocks from one Hermitian instance: the best step of an `n`-fold
/// subdivision, rescaled so that block `k` has perturbation
/// `2^{-k} / 1.5` and multiplied so that its increment is `1.5`.
pub fn witness_blocks(base: &RatioInstance, count: usize, subdivisions: usize) -> Result<Vec<RatioInstance>> {
    let step = subdivide_select(base, subdivisions)?;
    let inst = step.instance;
    let Operators::Hermitian { a1, a2, b } = inst.operators() else {
        unreachable!("subdivision keeps the Hermitian shape")
    };
    let InstanceFunction::Pair(f) = inst.function() else {
        unreachable!("Hermitian instances carry two-variable functions")
    };
    let pert = inst.perturbation_norm();
    let inc = increment_norm(&inst)?;
    if pert <= 0.0 || inc <= 0.0 {
        return Err(Error::ZeroDenominator("degenerate base instance".into()));
    }
    let amplitude = 1.5 / inc;
    (1..=count)
        .map(|k| {
            let sigma = pert * 2f64.powi(k as i32) * 1.5;
            let scaled = scale_pair(f, a1, a2, sigma)?;
            let b_scaled = b.scale(1.0 / sigma);
            inst.with_operators(Operators::Hermitian {
                a1: scaled.a,
                a2: scaled.b,
                b: b_scaled,
            })?
            .with_function(InstanceFunction::Pair(scaled.f.scale(amplitude)))
        })
        .collect()
}

/// `K` one-dimensional blocks with `A1 = 0`, `A2 = 2^{-k-1}`, `B = 0` and a
/// table with `f(0, 0) = 0`, `f(2^{-k-1}, 0) = 1 + δ`.
pub fn synthetic_blocks(count: usize, delta: f64, p: SchattenExponent) -> Result<Vec<RatioInstance>> {
    (1..=count)
        .map(|k| {
            let x = 0.5f64.powi(k as i32 + 1);
            let g = GridFunction2::from_real(&[0.0, x], &[0.0], |a, _| {
                Complex64::new(if a == 0.0 { 0.0 } else { 1.0 + delta }, 0.0)
            });
            RatioInstance::new(
                InstanceFunction::Pair(PairFunction::Grid(g)),
                Operators::Hermitian {
                    a1: HermitianOperator::from_real_diagonal(&[0.0])?,
                    a2: HermitianOperator::from_real_diagonal(&[x])?,
                    b: HermitianOperator::from_real_diagonal(&[0.0])?,
                },
                p,
                NormMode::Sup,
            )
        })
        .collect()
}
