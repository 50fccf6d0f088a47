use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use opfunc::besov::{besov_norm, fourier_l1, io::read_trig_poly, tensor_norm_bound, TrigPoly, FOURIER_L1_CONSTANT};
use opfunc::extremal::{
    block_witness, growth_sweep, io::read_instance, io::write_instance, kappa_lambda, search_extremal,
    synthetic_blocks, witness_blocks, ExperimentRecord, Mode, NormMode, SearchConfig, SupportMask, WitnessReport,
};
use opfunc::funcalc::{
    eval_pair_fourier, eval_triple_fourier, eval_unitary_pair, eval_unitary_pair_spectral, trig_pair_spectral,
    trig_triple_spectral,
};
use opfunc::opcore::io::{read_matrix, write_matrix};
use opfunc::opcore::{
    eig_hermitian, max_abs_diff, schatten_norm, CMatrix, HermitianOperator, SchattenExponent, UnitaryOperator,
};
use opfunc::Error;

const DEFAULT_CHECK_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "opfunc",
    version,
    about = "Functions of noncommuting matrices and Schatten-Lipschitz experiments"
)]
struct Cli {
    /// Worker threads for search and sweep cells (default: logical cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate f(A, B), f(U, V) or f(A, B, C) and write the result matrix.
    Eval(EvalArgs),
    /// Schatten norm of a matrix, or Besov/Fourier norms of a polynomial.
    Norm(NormArgs),
    /// Run an extremal search from a JSON config.
    Search(RunArgs),
    /// Run a growth sweep (at least three dimensions) from a JSON config.
    Sweep(RunArgs),
    /// Check a direct-sum witness built from instance files.
    Witness(WitnessArgs),
    /// Compute the square-window quantity of a support mask.
    Kappa(KappaArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalMode {
    Spectral,
    Fourier,
    Unitary,
    Triple,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    mode: EvalMode,
    /// Trigonometric polynomial file.
    #[arg(long)]
    f: PathBuf,
    /// First operator (A or U).
    #[arg(long)]
    a: PathBuf,
    /// Second operator (B or V).
    #[arg(long)]
    b: PathBuf,
    /// Third operator, triple mode only.
    #[arg(long)]
    c: Option<PathBuf>,
    /// Also run the other definition and print the residual.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct NormArgs {
    /// Matrix file: print its Schatten norm.
    #[arg(long, conflicts_with = "poly")]
    matrix: Option<PathBuf>,
    /// Polynomial file: print its Besov, Fourier l1 and tensor norms.
    #[arg(long)]
    poly: Option<PathBuf>,
    #[arg(long, default_value = "2")]
    p: String,
    /// Besov smoothness (1 or 2).
    #[arg(long, default_value_t = 1)]
    s: u32,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output prefix: writes <out>.csv and <out>.json.
    #[arg(long)]
    out: PathBuf,
    /// Replaces the seed list with a single seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    norm_mode: Option<String>,
    /// Comma-separated exponents replacing the configured list.
    #[arg(long)]
    p: Option<String>,
    /// Keeps this polynomial fixed during the search.
    #[arg(long)]
    function: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    p: String,
    /// Instance files, one per block, in order k = 1, 2, ...
    instances: Vec<PathBuf>,
    /// Build blocks from this single Hermitian instance instead.
    #[arg(long, conflicts_with = "instances")]
    from: Option<PathBuf>,
    /// Number of blocks for --from or --synthetic.
    #[arg(long, default_value_t = 8)]
    blocks: usize,
    /// Subdivision count used with --from.
    #[arg(long, default_value_t = 4)]
    subdivisions: usize,
    /// Use synthetic one-dimensional blocks with increment 1 + delta.
    #[arg(long, conflicts_with_all = ["instances", "from"])]
    synthetic: Option<f64>,
    /// Directory receiving the block instance files and report.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KappaArgs {
    #[arg(long)]
    m: u64,
    /// "full", "quadrant", or a file of "j k" lines.
    #[arg(long)]
    mask: String,
    #[arg(long, default_value_t = 64)]
    n_max: u64,
}

/// Failure with its exit code: 2 for unreadable or malformed input, 3 for
/// violated mathematical preconditions, 1 otherwise.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NormPrecondition { .. } | Error::InvalidExponent(_) | Error::InvalidBlock { .. } => 3,
            Error::ZeroDenominator(_) => 3,
            Error::Parse { .. }
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_)
            | Error::NotSquare { .. }
            | Error::EmptyMatrix
            | Error::NotHermitian { .. }
            | Error::NotUnitary { .. }
            | Error::DimensionMismatch { .. }
            | Error::InvalidPolyDimension(_)
            | Error::IndexOutOfSupport { .. }
            | Error::MissingGridValue(_)
            | Error::InvalidArgument(_)
            | Error::InvalidTolerance(_)
            | Error::EmptyBlockList => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// 17 significant digits, fixed notation for moderate magnitudes.
fn sig17(x: f64) -> String {
    if x == 0.0 {
        return format!("{:.16}", 0.0);
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..17).contains(&mag) {
        return format!("{x:.16e}");
    }
    let decimals = (16 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

fn check_tolerance() -> CliResult<f64> {
    match std::env::var("OPFUNC_TOL") {
        Ok(v) => v
            .parse::<f64>()
            .ok()
            .filter(|t| *t > 0.0)
            .ok_or_else(|| input(format!("OPFUNC_TOL must be a positive number, got {v:?}"))),
        Err(_) => Ok(DEFAULT_CHECK_TOL),
    }
}

fn parse_p(s: &str) -> CliResult<SchattenExponent> {
    Ok(s.parse::<SchattenExponent>()?)
}

fn hermitian(path: &Path) -> CliResult<HermitianOperator> {
    Ok(HermitianOperator::new(read_matrix(path)?)?)
}

fn unitary(path: &Path) -> CliResult<UnitaryOperator> {
    Ok(UnitaryOperator::new(read_matrix(path)?)?)
}

fn cmd_eval(args: &EvalArgs) -> CliResult<()> {
    let f = read_trig_poly(&args.f)?;
    let (result, other) = match args.mode {
        EvalMode::Spectral | EvalMode::Fourier => {
            let (a, b) = (hermitian(&args.a)?, hermitian(&args.b)?);
            let spectral = || -> CliResult<CMatrix> {
                Ok(trig_pair_spectral(
                    &f,
                    &eig_hermitian(&a, None)?,
                    &eig_hermitian(&b, None)?,
                )?)
            };
            let fourier = || -> CliResult<CMatrix> { Ok(eval_pair_fourier(&f, &a, &b)?) };
            match args.mode {
                EvalMode::Spectral => (spectral()?, if args.check { Some(fourier()?) } else { None }),
                _ => (fourier()?, if args.check { Some(spectral()?) } else { None }),
            }
        }
        EvalMode::Unitary => {
            let (u, v) = (unitary(&args.a)?, unitary(&args.b)?);
            let series = eval_unitary_pair(&f, &u, &v)?;
            let check = if args.check {
                Some(eval_unitary_pair_spectral(&f, &u, &v)?)
            } else {
                None
            };
            (series, check)
        }
        EvalMode::Triple => {
            let c_path = args.c.as_ref().ok_or_else(|| input("triple mode needs --c"))?;
            let (a, b, c) = (hermitian(&args.a)?, hermitian(&args.b)?, hermitian(c_path)?);
            let spectral = trig_triple_spectral(
                &f,
                &eig_hermitian(&a, None)?,
                &eig_hermitian(&b, None)?,
                &eig_hermitian(&c, None)?,
            )?;
            let check = if args.check {
                Some(eval_triple_fourier(&f, &a, &b, &c)?)
            } else {
                None
            };
            (spectral, check)
        }
    };
    write_matrix(&args.out, &result)?;
    if let Some(other) = other {
        let tol = check_tolerance()?;
        let scale = 1.0 + f.l1_norm();
        let residual = max_abs_diff(&result, &other);
        let verdict = if residual <= tol * scale { "PASS" } else { "FAIL" };
        println!("residual {residual:.3e} <= {tol:e} * (1 + sum|c|) {verdict}");
        if verdict == "FAIL" {
            return Err(Failure {
                code: 1,
                message: "the two definitions disagree".into(),
            });
        }
    }
    Ok(())
}

fn print_poly_norms(f: &TrigPoly, s: u32) -> CliResult<()> {
    let besov = besov_norm(f, s)?;
    println!("besov_s{s} {}", sig17(besov));
    let l1 = fourier_l1(f);
    println!("fourier_l1 {}", sig17(l1));
    println!("sup {}", sig17(f.grid_sup()));
    if f.dim() == 2 || f.dim() == 3 {
        println!("tensor_bound {}", sig17(tensor_norm_bound(f)?));
    }
    if f.dim() == 2 && s == 1 {
        let verdict = if l1 <= FOURIER_L1_CONSTANT * besov * (1.0 + 1e-12) {
            "PASS"
        } else {
            "FAIL"
        };
        println!("fourier_l1 <= {FOURIER_L1_CONSTANT} * besov: {verdict}");
    }
    Ok(())
}

fn cmd_norm(args: &NormArgs) -> CliResult<()> {
    match (&args.matrix, &args.poly) {
        (Some(path), None) => {
            let p = parse_p(&args.p)?;
            let m = read_matrix(path)?;
            println!("{}", sig17(schatten_norm(&m, p)));
            Ok(())
        }
        (None, Some(path)) => print_poly_norms(&read_trig_poly(path)?, args.s),
        _ => Err(input("give exactly one of --matrix or --poly")),
    }
}

fn load_config(args: &RunArgs) -> CliResult<SearchConfig> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| input(format!("{}: {e}", args.config.display())))?;
    let mut config: SearchConfig =
        serde_json::from_str(&text).map_err(|e| input(format!("config {}: {e}", args.config.display())))?;
    if let Some(seed) = args.seed {
        config.seeds = vec![seed];
    }
    if let Some(mode) = &args.mode {
        config.mode = mode.parse::<Mode>().map_err(|e| input(e.to_string()))?;
    }
    if let Some(nm) = &args.norm_mode {
        config.norm_mode = nm.parse::<NormMode>().map_err(|e| input(e.to_string()))?;
    }
    if let Some(ps) = &args.p {
        config.p_values = ps.split(',').map(parse_p).collect::<CliResult<_>>()?;
    }
    if let Some(path) = &args.function {
        config.fixed_function = Some(read_trig_poly(path)?);
    }
    config.validate().map_err(|e| input(format!("config: {e}")))?;
    Ok(config)
}

fn write_outputs(record: &ExperimentRecord, prefix: &Path) -> CliResult<()> {
    if let Some(parent) = prefix.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(Error::from)?;
    }
    let csv_path = prefix.with_extension("csv");
    let json_path = prefix.with_extension("json");
    record.write_csv(std::fs::File::create(&csv_path).map_err(Error::from)?)?;
    std::fs::write(&json_path, record.to_json()?).map_err(Error::from)?;
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

fn print_summary(record: &ExperimentRecord) {
    for row in &record.best_per_m {
        println!("best m={} p={} ratio={}", row.m, row.p, sig17(row.best_ratio));
    }
    for s in &record.slopes {
        println!(
            "slope p={} measured={:.6} reference={:.6} monotone={}",
            s.p, s.slope, s.reference_exponent, s.monotone
        );
    }
    if let Some(m) = &record.monitor {
        let verdict = if m.passed { "PASS" } else { "FAIL" };
        println!(
            "monitor p=2 besov max_ratio={:.6} threshold={} {verdict}",
            m.max_ratio, m.threshold
        );
    }
    let timed_out = record.trials.iter().filter(|t| t.timed_out).count();
    if timed_out > 0 {
        println!("timed out cells: {timed_out}");
    }
}

fn cmd_run(args: &RunArgs, sweep: bool) -> CliResult<()> {
    let config = load_config(args)?;
    let record = if sweep {
        growth_sweep(&config).map_err(|e| match e {
            Error::InvalidArgument(m) => input(m),
            other => other.into(),
        })?
    } else {
        search_extremal(&config)?
    };
    print_summary(&record);
    write_outputs(&record, &args.out)?;
    if record.monitor.as_ref().is_some_and(|m| !m.passed) {
        return Err(Failure {
            code: 1,
            message: "boundedness monitor failed".into(),
        });
    }
    Ok(())
}

fn print_witness(report: &WitnessReport) {
    for b in &report.blocks {
        println!(
            "block {} dim={} pert={:.6e} increment={:.6e} sum_pert^p={:.6e} sum_increment^p={:.6e}",
            b.k, b.dim, b.pert_norm, b.increment_norm, b.pert_partial_sum, b.increment_partial_sum
        );
    }
    let k = report.num_blocks();
    let pass = |b: bool| if b { "PASS" } else { "FAIL" };
    println!(
        "perturbation sum bounded: {} ({:.6e} < 1)",
        pass(report.perturbation_bounded),
        report.pert_sum
    );
    println!(
        "increment sum >= K: {} ({:.6e} >= {k})",
        pass(report.increment_divergent),
        report.increment_sum
    );
    println!(
        "direct sum consistency: {} (residual {:.3e})",
        pass(report.consistent()),
        report.consistency_residual
    );
}

fn cmd_witness(args: &WitnessArgs) -> CliResult<()> {
    let p = parse_p(&args.p)?;
    let blocks = if let Some(delta) = args.synthetic {
        synthetic_blocks(args.blocks, delta, p)?
    } else if let Some(path) = &args.from {
        witness_blocks(&read_instance(path)?.with_p(p), args.blocks, args.subdivisions)?
    } else {
        if args.instances.is_empty() {
            return Err(input("give instance files, --from or --synthetic"));
        }
        args.instances
            .iter()
            .map(|path| read_instance(path))
            .collect::<Result<Vec<_>, _>>()?
    };
    let report = block_witness(&blocks, p)?;
    print_witness(&report);
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).map_err(Error::from)?;
        for (i, b) in blocks.iter().enumerate() {
            write_instance(&dir.join(format!("block_{}.json", i + 1)), b)?;
        }
        std::fs::write(
            dir.join("report.json"),
            serde_json::to_string_pretty(&report).map_err(Error::from)?,
        )
        .map_err(Error::from)?;
    }
    Ok(())
}

fn read_mask(spec: &str) -> CliResult<SupportMask> {
    match spec {
        "full" => Ok(SupportMask::Full),
        "quadrant" => Ok(SupportMask::FirstQuadrant),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| input(format!("{path}: {e}")))?;
            let mut pts = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let nums: Vec<i64> = line
                    .split_whitespace()
                    .map(|t| t.parse::<i64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| input(format!("{path}:{}: expected two integers", i + 1)))?;
                match nums.as_slice() {
                    [j, k] => pts.push((*j, *k)),
                    _ => return Err(input(format!("{path}:{}: expected two integers", i + 1))),
                }
            }
            Ok(SupportMask::finite(pts))
        }
    }
}

fn cmd_kappa(args: &KappaArgs) -> CliResult<()> {
    if args.m == 0 {
        return Err(Failure {
            code: 3,
            message: "m must be positive".into(),
        });
    }
    println!("{}", kappa_lambda(&read_mask(&args.mask)?, args.m, args.n_max));
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(input("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| input(e.to_string()))?;
    }
    match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Norm(a) => cmd_norm(a),
        Command::Search(a) => cmd_run(a, false),
        Command::Sweep(a) => cmd_run(a, true),
        Command::Witness(a) => cmd_witness(a),
        Command::Kappa(a) => cmd_kappa(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
