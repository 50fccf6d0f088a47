use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::family::{family_function, family_instance, seeded_kinds, support_indices, FamilyKind};
use super::instance::{InstanceFunction, Mode, NormMode, Operators, RatioInstance};
use super::mask::SupportMask;
use crate::besov::{besov_norm, MultiIndex, TrigPoly};
use crate::error::{Error, Result};
use crate::funcalc::{trig_pair_spectral, trig_triple_spectral, PairFunction, UnitaryPairEvaluator};
use crate::opcore::random::{haar_unitary_from_rng, hermitian_contraction_from_rng};
use crate::opcore::{
    eig_hermitian, matrix_exp_i, random_hermitian_direction, schatten_norm, CMatrix, HermitianOperator,
    SchattenExponent, SpectralDecomposition,
};

/// Upper bound on the p = 2 Besov-normalized ratio checked by the sweep.
pub const MONITOR_THRESHOLD: f64 = 10.0;

const MAX_HALVINGS: u32 = 10;
const FD_STEP: f64 = 1e-6;

/// Experiment configuration, read from JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub mode: Mode,
    pub dims: Vec<usize>,
    pub p_values: Vec<SchattenExponent>,
    pub budget: usize,
    pub seeds: Vec<u64>,
    pub norm_mode: NormMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<Vec<[i64; 2]>>,
    /// Hermitian mode only: perturb both operators.
    #[serde(default)]
    pub two_sided: bool,
    /// Wall-clock limit per cell; cells that hit it are flagged.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_limit_secs: Option<f64>,
    /// Keeps `f` fixed; only the operators are searched.
    #[serde(skip)]
    pub fixed_function: Option<TrigPoly>,
}

impl SearchConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: SearchConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::InvalidArgument(
                "dims must be a nonempty list of positive integers".into(),
            ));
        }
        if self.p_values.is_empty() {
            return Err(Error::InvalidArgument("p_values must not be empty".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidArgument("seeds must not be empty".into()));
        }
        if self.two_sided && self.mode != Mode::Hermitian {
            return Err(Error::InvalidArgument(
                "two_sided applies to hermitian mode only".into(),
            ));
        }
        if self.mask.is_some() && self.mode == Mode::Triple {
            return Err(Error::InvalidArgument(
                "support masks apply to two-variable modes".into(),
            ));
        }
        if let Some(t) = self.time_limit_secs {
            if t.is_nan() || t <= 0.0 {
                return Err(Error::InvalidArgument("time_limit_secs must be positive".into()));
            }
        }
        if let Some(f) = &self.fixed_function {
            let want = if self.mode == Mode::Triple { 3 } else { 2 };
            if f.dim() != want {
                return Err(Error::InvalidPolyDimension(f.dim()));
            }
        }
        Ok(())
    }

    pub fn support_mask(&self) -> Option<SupportMask> {
        self.mask
            .as_ref()
            .map(|pts| SupportMask::finite(pts.iter().map(|&[j, k]| (j, k))))
    }
}

/// Ratio of one seeded family member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeededRatio {
    pub kind: String,
    pub ratio: f64,
}

/// Outcome of one `(m, p, seed)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub mode: Mode,
    pub m: usize,
    pub p: SchattenExponent,
    pub norm_mode: NormMode,
    pub seed: u64,
    pub best_ratio: f64,
    pub f_degree: u32,
    pub besov_norm: f64,
    pub sup_norm: f64,
    pub pert_norm: f64,
    /// Evaluations spent beyond the seeded families.
    pub iters: usize,
    pub seeded: Vec<SeededRatio>,
    pub best_source: String,
    pub timed_out: bool,
}

/// Best ratio over seeds for one `(p, m)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestRow {
    pub p: SchattenExponent,
    pub m: usize,
    pub best_ratio: f64,
}

/// Least-squares fit of `ln(best ratio)` against `ln m` for one `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub p: SchattenExponent,
    pub slope: f64,
    pub intercept: f64,
    /// Exponent the measured slope is compared against (not asserted).
    pub reference_exponent: f64,
    /// Best ratio non-decreasing in `m`.
    pub monotone: bool,
}

/// Verdict of the p = 2 Besov boundedness monitor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonitorVerdict {
    pub max_ratio: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub config: SearchConfig,
    pub trials: Vec<TrialRecord>,
    pub best_per_m: Vec<BestRow>,
    pub slopes: Vec<SlopeFit>,
    pub monitor: Option<MonitorVerdict>,
}

/// Reference growth exponent for `mode`, normalization and `p`.
pub fn reference_exponent(mode: Mode, norm_mode: NormMode, p: SchattenExponent) -> f64 {
    match (mode, norm_mode) {
        (Mode::Triple, _) => 0.5,
        (_, NormMode::Besov) => 0.5 - p.reciprocal(),
        (_, NormMode::Sup) => 1.5 - p.reciprocal(),
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator seed of a cell: a mix of the config seed, `m`, the bits of
/// `p` and the trial index.
pub fn cell_seed(seed: u64, m: usize, p: SchattenExponent, trial: usize) -> u64 {
    [m as u64, p.value().to_bits(), trial as u64]
        .into_iter()
        .fold(splitmix(seed), |h, x| splitmix(h ^ x))
}

/// The operator being moved and the cached data of the fixed ones.
enum Cache {
    Hermitian {
        db: SpectralDecomposition,
        base: CMatrix,
    },
    TwoSided {
        base: CMatrix,
    },
    Unitary {
        ev: UnitaryPairEvaluator,
        base: CMatrix,
    },
    Triple {
        da: SpectralDecomposition,
        db: SpectralDecomposition,
        base: CMatrix,
    },
}

/// Fast ratio evaluation for a fixed function and fixed second point.
struct Scorer {
    f: TrigPoly,
    fnorm: f64,
    p: SchattenExponent,
    cache: Cache,
}

impl Scorer {
    fn new(f: TrigPoly, ops: &Operators, p: SchattenExponent, norm_mode: NormMode) -> Result<Self> {
        let fnorm = function_norm(&f, ops.mode(), norm_mode)?;
        let cache = match ops {
            Operators::Hermitian { a2, b, .. } => {
                let db = eig_hermitian(b, None)?;
                let base = trig_pair_spectral(&f, &eig_hermitian(a2, None)?, &db)?;
                Cache::Hermitian { db, base }
            }
            Operators::HermitianTwoSided { a2, b2, .. } => Cache::TwoSided {
                base: trig_pair_spectral(&f, &eig_hermitian(a2, None)?, &eig_hermitian(b2, None)?)?,
            },
            Operators::Unitary { u2, v, .. } => {
                let ev = UnitaryPairEvaluator::new(&f, v.entries())?;
                let base = ev.eval(u2.entries());
                Cache::Unitary { ev, base }
            }
            Operators::Triple { a, b, c2, .. } => {
                let da = eig_hermitian(a, None)?;
                let db = eig_hermitian(b, None)?;
                let base = trig_triple_spectral(&f, &da, &db, &eig_hermitian(c2, None)?)?;
                Cache::Triple { da, db, base }
            }
        };
        Ok(Self { f, fnorm, p, cache })
    }

    /// Ratio at `ops`, whose fixed operators must match the cache; 0 for
    /// degenerate denominators.
    fn score(&self, ops: &Operators) -> Result<f64> {
        let (inc, pert) = match (&self.cache, ops) {
            (Cache::Hermitian { db, base }, Operators::Hermitian { a1, a2, .. }) => (
                trig_pair_spectral(&self.f, &eig_hermitian(a1, None)?, db)? - base,
                schatten_norm(&(a1.entries() - a2.entries()), self.p),
            ),
            (Cache::TwoSided { base }, Operators::HermitianTwoSided { a1, a2, b1, b2 }) => (
                trig_pair_spectral(&self.f, &eig_hermitian(a1, None)?, &eig_hermitian(b1, None)?)? - base,
                schatten_norm(&(a1.entries() - a2.entries()), self.p)
                    + schatten_norm(&(b1.entries() - b2.entries()), self.p),
            ),
            (Cache::Unitary { ev, base }, Operators::Unitary { u1, u2, .. }) => (
                ev.eval(u1.entries()) - base,
                schatten_norm(&(u1.entries() - u2.entries()), self.p),
            ),
            (Cache::Triple { da, db, base }, Operators::Triple { c1, c2, .. }) => (
                trig_triple_spectral(&self.f, da, db, &eig_hermitian(c1, None)?)? - base,
                schatten_norm(&(c1.entries() - c2.entries()), self.p),
            ),
            _ => {
                return Err(Error::InvalidArgument(
                    "operator tuple does not match the scorer".into(),
                ))
            }
        };
        if pert <= 1e-14 || self.fnorm <= 1e-14 {
            return Ok(0.0);
        }
        Ok(schatten_norm(&inc, self.p) / (self.fnorm * pert))
    }
}

fn function_norm(f: &TrigPoly, mode: Mode, norm_mode: NormMode) -> Result<f64> {
    match norm_mode {
        NormMode::Besov => besov_norm(f, if mode == Mode::Triple { 2 } else { 1 }),
        NormMode::Sup => Ok(f.grid_sup()),
    }
}

fn wrap_function(f: TrigPoly, mode: Mode) -> InstanceFunction {
    match mode {
        Mode::Triple => InstanceFunction::Triple(f),
        _ => InstanceFunction::Pair(PairFunction::Trig(f)),
    }
}

/// Moves the perturbed operator(s) of `ops`.
fn perturb(ops: &Operators, dirs: &[HermitianOperator], eps: f64) -> Operators {
    let step = |x: &HermitianOperator, d: &HermitianOperator| x.add_scaled(d, eps).project_to_contraction();
    match ops {
        Operators::Hermitian { a1, a2, b } => Operators::Hermitian {
            a1: step(a1, &dirs[0]),
            a2: a2.clone(),
            b: b.clone(),
        },
        Operators::HermitianTwoSided { a1, a2, b1, b2 } => Operators::HermitianTwoSided {
            a1: step(a1, &dirs[0]),
            a2: a2.clone(),
            b1: step(b1, &dirs[1]),
            b2: b2.clone(),
        },
        Operators::Unitary { u1, u2, v } => Operators::Unitary {
            u1: u1.mul(&matrix_exp_i(&dirs[0].scale(eps))),
            u2: u2.clone(),
            v: v.clone(),
        },
        Operators::Triple { a, b, c1, c2 } => Operators::Triple {
            a: a.clone(),
            b: b.clone(),
            c1: step(c1, &dirs[0]),
            c2: c2.clone(),
        },
    }
}

fn directions<R: Rng>(ops: &Operators, rng: &mut R) -> Vec<HermitianOperator> {
    let n = ops.dim();
    let count = if matches!(ops, Operators::HermitianTwoSided { .. }) {
        2
    } else {
        1
    };
    (0..count).map(|_| random_hermitian_direction(n, rng)).collect()
}

fn random_operators<R: Rng>(mode: Mode, two_sided: bool, m: usize, rng: &mut R) -> Operators {
    let near = |x: &HermitianOperator, rng: &mut R| {
        let t = rng.random_range(0.01..0.5);
        x.add_scaled(&random_hermitian_direction(m, rng), t)
            .project_to_contraction()
    };
    match (mode, two_sided) {
        (Mode::Hermitian, false) => {
            let a2 = hermitian_contraction_from_rng(m, rng);
            let b = hermitian_contraction_from_rng(m, rng);
            let a1 = near(&a2, rng);
            Operators::Hermitian { a1, a2, b }
        }
        (Mode::Hermitian, true) => {
            let a2 = hermitian_contraction_from_rng(m, rng);
            let b2 = hermitian_contraction_from_rng(m, rng);
            let a1 = near(&a2, rng);
            let b1 = near(&b2, rng);
            Operators::HermitianTwoSided { a1, a2, b1, b2 }
        }
        (Mode::Unitary, _) => {
            let u2 = haar_unitary_from_rng(m, rng);
            let v = haar_unitary_from_rng(m, rng);
            let t = rng.random_range(0.01..1.0) * std::f64::consts::PI / m as f64;
            let u1 = u2.mul(&matrix_exp_i(&random_hermitian_direction(m, rng).scale(t)));
            Operators::Unitary { u1, u2, v }
        }
        (Mode::Triple, _) => {
            let a = hermitian_contraction_from_rng(m, rng);
            let b = hermitian_contraction_from_rng(m, rng);
            let c2 = hermitian_contraction_from_rng(m, rng);
            let c1 = near(&c2, rng);
            Operators::Triple { a, b, c1, c2 }
        }
    }
}

fn two_sided_of(ops: Operators) -> Operators {
    match ops {
        Operators::Hermitian { a1, a2, b } => Operators::HermitianTwoSided {
            a1,
            a2,
            b1: b.clone(),
            b2: b,
        },
        other => other,
    }
}

/// Current point of the ascent.
struct Point {
    ops: Operators,
    scorer: Scorer,
    ratio: f64,
}

struct CellContext<'a> {
    config: &'a SearchConfig,
    mask: Option<SupportMask>,
    support: Vec<MultiIndex>,
    m: usize,
    p: SchattenExponent,
}

impl CellContext<'_> {
    fn mode(&self) -> Mode {
        self.config.mode
    }

    fn random_function<R: Rng>(&self, rng: &mut R) -> Result<TrigPoly> {
        if let Some(f) = &self.config.fixed_function {
            return Ok(f.clone());
        }
        family_function(
            self.mode(),
            self.m,
            FamilyKind::Random(rng.random()),
            self.mask.as_ref(),
        )
    }

    fn point(&self, f: TrigPoly, ops: Operators) -> Result<Point> {
        let scorer = Scorer::new(f, &ops, self.p, self.config.norm_mode)?;
        let ratio = scorer.score(&ops)?;
        Ok(Point { ops, scorer, ratio })
    }

    /// One coefficient moved by `eps` times the largest coefficient
    /// modulus, in a random direction, then rescaled to unit max modulus.
    fn move_function<R: Rng>(&self, f: &TrigPoly, eps: f64, rng: &mut R) -> Result<TrigPoly> {
        let idx = self.support[rng.random_range(0..self.support.len())];
        let dim = f.dim();
        let scale = f.coeffs().fold(0.0_f64, |a, (_, c)| a.max(c.norm())).max(1e-300);
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let reach = idx[..dim].iter().map(|x| x.unsigned_abs() as u32).max().unwrap_or(0);
        let mut g = f.clone().with_degree(reach);
        let old = g.get(&idx[..dim]);
        g.set(&idx[..dim], old + Complex64::from_polar(eps * scale, theta))?;
        let top = g.coeffs().fold(0.0_f64, |a, (_, c)| a.max(c.norm()));
        if top == 0.0 {
            return Ok(f.clone());
        }
        Ok(g.scale(Complex64::new(1.0 / top, 0.0)))
    }
}

/// In-memory outcome of a cell: the record and the best instance found.
#[derive(Clone, Debug)]
pub struct CellOutcome {
    pub record: TrialRecord,
    pub best: Option<RatioInstance>,
}

fn run_cell(config: &SearchConfig, m: usize, p: SchattenExponent, seed: u64, trial: usize) -> Result<CellOutcome> {
    let mode = config.mode;
    let mask = config.support_mask();
    let ctx = CellContext {
        config,
        support: support_indices(mode, m, mask.as_ref()),
        mask,
        m,
        p,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(seed, m, p, trial));
    let start = Instant::now();
    let deadline = config.time_limit_secs;
    let timed_out = |start: &Instant| deadline.is_some_and(|t| start.elapsed().as_secs_f64() > t);

    let mut seeded = Vec::new();
    let mut best: Option<(Point, String)> = None;
    if m >= 2 {
        for kind in seeded_kinds(mode, seed) {
            let inst = family_instance(mode, m, kind, ctx.mask.as_ref(), p, config.norm_mode)?;
            let f = match &config.fixed_function {
                Some(f) => f.clone(),
                None => inst.function().trig().expect("families are polynomial").clone(),
            };
            let ops = if config.two_sided {
                two_sided_of(inst.operators().clone())
            } else {
                inst.operators().clone()
            };
            let pt = ctx.point(f, ops)?;
            seeded.push(SeededRatio {
                kind: kind.to_string(),
                ratio: pt.ratio,
            });
            if best.as_ref().is_none_or(|(b, _)| pt.ratio > b.ratio) {
                best = Some((pt, kind.to_string()));
            }
        }
    }

    let mut iters = 0usize;
    if best.is_none() {
        let f = ctx.random_function(&mut rng)?;
        let ops = random_operators(mode, config.two_sided, m, &mut rng);
        best = Some((ctx.point(f, ops)?, "restart".into()));
        iters += 1;
    }
    let (mut cur, mut source) = best.expect("initialized above");

    let f_moves = config.fixed_function.is_none() && !ctx.support.is_empty();
    let eps0_op = if mode == Mode::Unitary {
        std::f64::consts::PI / (2 * m) as f64
    } else {
        0.25
    };
    let eps0_f = 0.5;
    let (mut eps_op, mut halvings_op) = (eps0_op, 0u32);
    let (mut eps_f, mut halvings_f) = (eps0_f, 0u32);
    let mut hit_limit = false;

    while iters < config.budget {
        if timed_out(&start) {
            hit_limit = true;
            break;
        }
        let u: f64 = rng.random();
        let (op_share, f_share) = if f_moves { (0.6, 0.85) } else { (0.85, 0.85) };
        if u < op_share {
            let dirs = directions(&cur.ops, &mut rng);
            let candidate = if mode == Mode::Unitary {
                perturb(&cur.ops, &dirs, eps_op)
            } else {
                // finite-difference slope along the direction picks the sign
                let probe = perturb(&cur.ops, &dirs, FD_STEP);
                let slope = (cur.scorer.score(&probe)? - cur.ratio) / FD_STEP;
                iters += 1;
                let sign = if slope >= 0.0 { 1.0 } else { -1.0 };
                perturb(&cur.ops, &dirs, sign * eps_op)
            };
            if iters >= config.budget {
                break;
            }
            let r = cur.scorer.score(&candidate)?;
            iters += 1;
            if r > cur.ratio {
                cur.ops = candidate;
                cur.ratio = r;
                source = "ascent".into();
            } else {
                eps_op *= 0.5;
                halvings_op += 1;
                if halvings_op > MAX_HALVINGS {
                    eps_op = eps0_op;
                    halvings_op = 0;
                }
            }
        } else if u < f_share {
            let g = ctx.move_function(&cur.scorer.f, eps_f, &mut rng)?;
            let pt = ctx.point(g, cur.ops.clone())?;
            iters += 1;
            if pt.ratio > cur.ratio {
                cur = pt;
                source = "ascent".into();
            } else {
                eps_f *= 0.5;
                halvings_f += 1;
                if halvings_f > MAX_HALVINGS {
                    eps_f = eps0_f;
                    halvings_f = 0;
                }
            }
        } else {
            let f = ctx.random_function(&mut rng)?;
            let ops = random_operators(mode, config.two_sided, m, &mut rng);
            let pt = ctx.point(f, ops)?;
            iters += 1;
            if pt.ratio > cur.ratio {
                cur = pt;
                source = "restart".into();
                eps_op = eps0_op;
                eps_f = eps0_f;
            }
        }
    }

    let f = cur.scorer.f.clone();
    let instance = RatioInstance::new(wrap_function(f.clone(), mode), cur.ops.clone(), p, config.norm_mode)?;
    let besov = besov_norm(&f, if mode == Mode::Triple { 2 } else { 1 })?;
    let record = TrialRecord {
        mode,
        m,
        p,
        norm_mode: config.norm_mode,
        seed,
        best_ratio: cur.ratio,
        f_degree: f.effective_degree(),
        besov_norm: besov,
        sup_norm: f.grid_sup(),
        pert_norm: instance.perturbation_norm(),
        iters,
        seeded,
        best_source: source,
        timed_out: hit_limit,
    };
    Ok(CellOutcome {
        record,
        best: Some(instance),
    })
}

/// Runs every `(m, p, seed)` cell in parallel and returns the outcomes in
/// cell order (dims, then p values, then seeds).
pub fn search_cells(config: &SearchConfig) -> Result<Vec<CellOutcome>> {
    config.validate()?;
    let mut cells = Vec::new();
    for &m in &config.dims {
        for &p in &config.p_values {
            for (trial, &seed) in config.seeds.iter().enumerate() {
                cells.push((m, p, seed, trial));
            }
        }
    }
    cells
        .par_iter()
        .map(|&(m, p, seed, trial)| run_cell(config, m, p, seed, trial))
        .collect()
}

/// Best ratio per `(m, p)` over seeded families, random restarts and local
/// ascent, with aggregates.
pub fn search_extremal(config: &SearchConfig) -> Result<ExperimentRecord> {
    let outcomes = search_cells(config)?;
    Ok(assemble(config, outcomes.into_iter().map(|o| o.record).collect()))
}

/// [`search_extremal`] over at least three dimensions, reporting slope fits.
pub fn growth_sweep(config: &SearchConfig) -> Result<ExperimentRecord> {
    let mut dims = config.dims.clone();
    dims.sort_unstable();
    dims.dedup();
    if dims.len() < 3 {
        return Err(Error::InvalidArgument(
            "a sweep needs at least three distinct dimensions".into(),
        ));
    }
    search_extremal(config)
}

/// Least-squares slope and intercept of `ys` against `xs`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return (0.0, my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn p_key(p: SchattenExponent) -> u64 {
    p.value().to_bits()
}

/// Aggregates trial records into per-`m` bests, slope fits and the monitor.
pub fn assemble(config: &SearchConfig, trials: Vec<TrialRecord>) -> ExperimentRecord {
    let mut best: BTreeMap<(usize, u64), (SchattenExponent, f64)> = BTreeMap::new();
    for t in &trials {
        let e = best.entry((t.m, p_key(t.p))).or_insert((t.p, f64::NEG_INFINITY));
        e.1 = e.1.max(t.best_ratio);
    }
    let mut best_per_m = Vec::new();
    for &p in &config.p_values {
        for (&(m, key), &(_, r)) in &best {
            if key == p_key(p) && !best_per_m.iter().any(|b: &BestRow| b.m == m && p_key(b.p) == key) {
                best_per_m.push(BestRow { p, m, best_ratio: r });
            }
        }
    }
    let mut slopes = Vec::new();
    for &p in &config.p_values {
        if slopes.iter().any(|s: &SlopeFit| p_key(s.p) == p_key(p)) {
            continue;
        }
        let rows: Vec<&BestRow> = best_per_m.iter().filter(|b| p_key(b.p) == p_key(p)).collect();
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|b| b.best_ratio > 0.0)
            .map(|b| ((b.m as f64).ln(), b.best_ratio.ln()))
            .collect();
        if pts.len() < 2 {
            continue;
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        let (slope, intercept) = fit_line(&xs, &ys);
        let monotone = rows.windows(2).all(|w| w[1].best_ratio >= w[0].best_ratio);
        slopes.push(SlopeFit {
            p,
            slope,
            intercept,
            reference_exponent: reference_exponent(config.mode, config.norm_mode, p),
            monotone,
        });
    }
    let monitored: Vec<f64> = trials
        .iter()
        .filter(|t| t.norm_mode == NormMode::Besov && t.p == SchattenExponent::Finite(2.0))
        .map(|t| t.best_ratio)
        .collect();
    let monitor = (!monitored.is_empty()).then(|| {
        let max_ratio = monitored.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        MonitorVerdict {
            max_ratio,
            threshold: MONITOR_THRESHOLD,
            passed: max_ratio <= MONITOR_THRESHOLD,
        }
    });
    ExperimentRecord {
        config: config.clone(),
        trials,
        best_per_m,
        slopes,
        monitor,
    }
}

#[derive(Serialize)]
struct CsvRow {
    mode: Mode,
    m: usize,
    p: String,
    norm_mode: NormMode,
    best_ratio: f64,
    f_degree: u32,
    besov_norm: f64,
    sup_norm: f64,
    pert_norm: f64,
    seed: u64,
    iters: usize,
}

impl ExperimentRecord {
    /// One CSV row per trial.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for t in &self.trials {
            w.serialize(CsvRow {
                mode: t.mode,
                m: t.m,
                p: t.p.to_string(),
                norm_mode: t.norm_mode,
                best_ratio: t.best_ratio,
                f_degree: t.f_degree,
                besov_norm: t.besov_norm,
                sup_norm: t.sup_norm,
                pert_norm: t.pert_norm,
                seed: t.seed,
                iters: t.iters,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
