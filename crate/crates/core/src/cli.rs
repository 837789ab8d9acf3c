//! Batch front-end behind the `siegel-growth` binary.
//!
//! Exit codes: `0` pass, `1` violation or numerical failure, `2` malformed input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::catalog;
use crate::error::{Error, Result};
use crate::forms::{check_invariance, FormPackage, VectorForm};
use crate::formfile::{load_form, save_form};
use crate::growth::{
    adversarial_points, estimate_constant, phi_with_mode, random_group_elements, random_orthogonal,
    ray_elements, verify_growth_bound, verify_moderate_growth, BoundKind, EvalMode, GrowthReport,
    SamplePoint, SampleRow, SweepConfig,
};
use crate::linalg::SymMatrix;
use crate::symplectic::{act, fundamental_delta, reduce_to_fundamental, SiegelPoint};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "siegel-growth", version, about = "Evaluate nearly holomorphic Siegel modular forms and certify their growth bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print F(Z) and phi(Z) at the requested points.
    Eval(EvalArgs),
    /// Reduce points into the fundamental domain of Sp_2n(Z).
    Reduce(ReduceArgs),
    /// Test the transformation law against the form's gamma test set.
    Check(CheckArgs),
    /// Estimate C_F and verify the theorem or corollary bound.
    Bound(BoundArgs),
    /// Verify the moderate-growth bound of the lift to the group.
    Moderate(ModerateArgs),
    /// Write the bundled sample forms as JSON form files.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Theorem,
    Corollary,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Direct,
    Reduced,
}

impl From<ModeArg> for EvalMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Direct => EvalMode::Direct,
            ModeArg::Reduced => EvalMode::Reduced,
        }
    }
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Inline point "x11,x12,..;y11,y12,.." (upper triangles, row by row); repeatable.
    #[arg(long = "z", allow_hyphen_values = true)]
    pub z: Vec<String>,
    /// JSON file holding a list of {"x": [[..]], "y": [[..]]}.
    #[arg(long)]
    pub points: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub form: PathBuf,
    #[command(flatten)]
    pub points: PointArgs,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long, value_enum, default_value = "direct")]
    pub mode: ModeArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub points: PointArgs,
    /// Height that reduced points must reach; defaults to delta(n).
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub form: PathBuf,
    #[command(flatten)]
    pub points: PointArgs,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random samples have |x_ij| <= 1/2 and Y eigenvalues in [delta, delta + 1].
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub form: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Ratio tolerance: a sample violates when lhs > (1 + tol) C rhs.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Use this C_F instead of estimating it.
    #[arg(long)]
    pub constant: Option<f64>,
    #[arg(long, default_value_t = 1.25)]
    pub safety: f64,
    #[arg(long, value_enum, default_value = "direct")]
    pub mode: ModeArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long, value_enum, default_value = "theorem")]
    pub kind: KindArg,
}

#[derive(Debug, Args)]
pub struct ModerateArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Growth exponent; defaults to n * lambda_1 / 2.
    #[arg(long)]
    pub r: Option<f64>,
    /// Functional vector "re,im;re,im;.."; defaults to the highest weight vector.
    #[arg(long, allow_hyphen_values = true)]
    pub w0: Option<String>,
    /// Skip the ray sweep g = diag(t I, I/t), t = 2, 4, .., 64.
    #[arg(long)]
    pub no_rays: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long = "out-dir")]
    pub out_dir: PathBuf,
}

/// Parses arguments, runs the command, prints diagnostics to stderr and
/// returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_FAIL
            }
        }
    }
}

pub fn execute(command: &Command) -> Result<i32> {
    match command {
        Command::Eval(a) => cmd_eval(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Check(a) => cmd_check(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Moderate(a) => cmd_moderate(a),
        Command::Generate(a) => cmd_generate(a),
    }
}

fn input(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| input(format!("bad number {t:?}"))))
        .collect()
}

/// Parses `"x11,x12,..;y11,y12,.."` into a point.
pub fn parse_inline_point(s: &str) -> Result<SiegelPoint> {
    let (xs, ys) = s
        .split_once(';')
        .ok_or_else(|| input(format!("point {s:?} must look like \"x..;y..\"")))?;
    let (xs, ys) = (parse_floats(xs)?, parse_floats(ys)?);
    if xs.len() != ys.len() {
        return Err(input(format!("point {s:?}: X and Y have different sizes")));
    }
    let n = (1..=8)
        .find(|n| n * (n + 1) / 2 == xs.len())
        .ok_or_else(|| input(format!("point {s:?}: {} entries is not a triangle", xs.len())))?;
    let y = SymMatrix::from_upper(n, &ys)?;
    SiegelPoint::new(SymMatrix::from_upper(n, &xs)?, y)
        .map_err(|e| input(format!("point {s:?} is not in H_n: {e}")))
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct PointRecord {
    x: Vec<Vec<f64>>,
    y: Vec<Vec<f64>>,
}

fn collect_points(args: &PointArgs) -> Result<Vec<SiegelPoint>> {
    let mut out = Vec::new();
    for s in &args.z {
        out.push(parse_inline_point(s)?);
    }
    if let Some(path) = &args.points {
        let text = std::fs::read_to_string(path)
            .map_err(|e| input(format!("{}: {e}", path.display())))?;
        let records: Vec<PointRecord> = serde_json::from_str(&text)
            .map_err(|e| input(format!("{}: {e}", path.display())))?;
        for (i, r) in records.into_iter().enumerate() {
            let z = SymMatrix::from_rows(&r.x)
                .and_then(|x| SiegelPoint::new(x, SymMatrix::from_rows(&r.y)?))
                .map_err(|e| input(format!("{} point #{i}: {e}", path.display())))?;
            out.push(z);
        }
    }
    Ok(out)
}

fn load(path: &Path, tmax: Option<f64>) -> Result<FormPackage> {
    let form = load_form(path)?;
    match tmax {
        Some(t) => form.truncated(t),
        None => Ok(form),
    }
}

fn emit(output: &OutputArgs, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json<T: Serialize>(output: &OutputArgs, value: &T) -> Result<()> {
    emit(output, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn complex_pairs(coords: &[Complex64]) -> Vec<[f64; 2]> {
    coords.iter().map(|c| [c.re, c.im]).collect()
}

fn joined(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

fn point_csv(p: &SamplePoint) -> String {
    match p {
        SamplePoint::Siegel { x, y } => {
            let upper = |m: &Vec<Vec<f64>>| {
                joined((0..m.len()).flat_map(|i| (i..m.len()).map(move |j| m[i][j])))
            };
            format!("{},{}", upper(x), upper(y))
        }
        SamplePoint::Group { g } => format!("{},", joined(g.iter().flatten().copied())),
    }
}

fn rows_csv(rows: &[SampleRow]) -> String {
    let mut s = String::from("index,x_or_g,y,lhs,rhs,ratio\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{},{}", r.index, point_csv(&r.point), r.lhs, r.rhs, r.ratio);
    }
    s
}

fn emit_report(output: &OutputArgs, report: &GrowthReport) -> Result<()> {
    match output.format {
        Format::Json => emit_json(output, report),
        Format::Csv => emit(output, &rows_csv(&report.rows)),
    }
}

fn cmd_eval(a: &EvalArgs) -> Result<i32> {
    let form = load(&a.form, a.tmax)?;
    let points = collect_points(&a.points)?;
    if points.is_empty() {
        return Err(input("no points given (use --z or --points)"));
    }
    let mode = EvalMode::from(a.mode);
    let mut records = Vec::new();
    let mut csv = String::from("index,x,y,phi,value\n");
    for (i, z) in points.iter().enumerate() {
        let value = match mode {
            EvalMode::Direct => form.eval(z)?,
            EvalMode::Reduced => form.evaluate_reduced(z)?,
        };
        let phi = phi_with_mode(&form, z, mode)?;
        let _ = writeln!(
            csv,
            "{i},{},{phi},{}",
            point_csv(&SamplePoint::from(z)),
            value.coords().iter().map(|c| format!("{}{:+}i", c.re, c.im)).collect::<Vec<_>>().join(";")
        );
        records.push(json!({
            "z": SamplePoint::from(z),
            "value": complex_pairs(value.coords()),
            "phi": phi,
        }));
    }
    match a.output.format {
        Format::Json => emit_json(&a.output, &json!({ "points": records }))?,
        Format::Csv => emit(&a.output, &csv)?,
    }
    Ok(EXIT_OK)
}

fn cmd_reduce(a: &ReduceArgs) -> Result<i32> {
    let points = collect_points(&a.points)?;
    if points.is_empty() {
        return Err(input("no points given (use --z or --points)"));
    }
    let mut ok = true;
    let mut records = Vec::new();
    for z in &points {
        let red = reduce_to_fundamental(z)?;
        let residual = act(&red.gamma, z)?.distance(&red.point);
        let delta = a.delta.unwrap_or_else(|| fundamental_delta(z.degree()));
        let in_v_delta = red.point.imag().in_v_delta(delta)?;
        ok &= residual <= a.tol && in_v_delta;
        let gamma: Vec<Vec<i64>> = red
            .gamma
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.round() as i64).collect())
            .collect();
        records.push(json!({
            "input": SamplePoint::from(z),
            "gamma": gamma,
            "reduced": SamplePoint::from(&red.point),
            "steps": red.steps,
            "residual": residual,
            "delta": delta,
            "in_v_delta": in_v_delta,
        }));
    }
    emit_json(&a.output, &json!({ "reductions": records }))?;
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

fn check_samples(n: usize, count: usize, seed: u64, delta: f64) -> Result<Vec<SiegelPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mu: Vec<f64> = (0..n).map(|_| rng.random_range(delta..=delta + 1.0)).collect();
            let q = random_orthogonal(&mut rng, n);
            let upper: Vec<f64> =
                (0..n * (n + 1) / 2).map(|_| rng.random_range(-0.5..=0.5)).collect();
            SiegelPoint::new(
                SymMatrix::from_upper(n, &upper)?,
                SymMatrix::diagonal(&mu).congruence(&q),
            )
        })
        .collect()
}

fn cmd_check(a: &CheckArgs) -> Result<i32> {
    if !(a.delta > 0.0) {
        return Err(input("--delta must be positive"));
    }
    let form = load(&a.form, a.tmax)?;
    let mut points = collect_points(&a.points)?;
    if points.is_empty() {
        points = check_samples(form.degree(), a.samples, a.seed, a.delta)?;
    }
    let report = check_invariance(&form, &points)?;
    let worst = report
        .records
        .iter()
        .max_by(|x, y| x.deviation.total_cmp(&y.deviation));
    let failing: Vec<_> = report
        .records
        .iter()
        .filter(|r| r.deviation > r.threshold)
        .take(100)
        .map(|r| {
            json!({
                "gamma_index": r.gamma_index,
                "point": SamplePoint::from(&points[r.sample_index]),
                "deviation": r.deviation,
                "threshold": r.threshold,
            })
        })
        .collect();
    let body = json!({
        "kind": "invariance",
        "gammas": form.gamma_test_set().len(),
        "samples": points.len(),
        "checks": report.records.len(),
        "max_deviation": report.max_deviation,
        "max_threshold": report.max_threshold,
        "violations": report.failures,
        "worst_point": worst.map(|r| SamplePoint::from(&points[r.sample_index])),
        "failing": failing,
        "config": { "seed": a.seed, "delta": a.delta, "t_max": form.expansion().t_max() },
    });
    match a.output.format {
        Format::Json => emit_json(&a.output, &body)?,
        Format::Csv => {
            let mut s = String::from("gamma_index,sample_index,deviation,threshold\n");
            for r in &report.records {
                let _ = writeln!(s, "{},{},{},{}", r.gamma_index, r.sample_index, r.deviation, r.threshold);
            }
            emit(&a.output, &s)?;
        }
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

fn sweep_config(a: &SweepArgs) -> Result<SweepConfig> {
    if a.samples == 0 {
        return Err(input("--samples must be at least 1"));
    }
    if !(a.tol > 0.0) {
        return Err(input("--tol must be positive"));
    }
    Ok(SweepConfig {
        samples: a.samples,
        seed: a.seed,
        safety_factor: a.safety,
        tolerance: a.tol,
        mode: a.mode.into(),
        ..SweepConfig::default()
    })
}

/// `C_F`: taken from `--constant`, or estimated from the fundamental domain
/// with the sweep seed; verification samples use the next seed.
fn form_constant(form: &FormPackage, a: &SweepArgs, cfg: &SweepConfig) -> Result<f64> {
    match a.constant {
        Some(c) => Ok(c),
        None => {
            let est = estimate_constant(form, cfg)?;
            eprintln!(
                "estimated C_F = {} (sup ratio {} over {} fundamental-domain samples)",
                est.constant, est.raw_sup, est.samples
            );
            Ok(est.constant)
        }
    }
}

fn cmd_bound(a: &BoundArgs) -> Result<i32> {
    let cfg = sweep_config(&a.sweep)?;
    let form = load(&a.sweep.form, a.sweep.tmax)?;
    let c = form_constant(&form, &a.sweep, &cfg)?;
    let fresh = SweepConfig { seed: cfg.seed.wrapping_add(1), ..cfg.clone() };
    let points = adversarial_points(form.degree(), &fresh)?;
    let kind = match a.kind {
        KindArg::Theorem => BoundKind::Theorem,
        KindArg::Corollary => BoundKind::Corollary,
    };
    let report = verify_growth_bound(&form, c, kind, &points, &cfg)?;
    eprintln!(
        "{} violations over {} samples, worst ratio {}",
        report.violations, report.samples, report.worst_ratio
    );
    emit_report(&a.sweep.output, &report)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

fn parse_w0(form: &FormPackage, s: &str) -> Result<crate::rep::RepVector> {
    let coords = s
        .split(';')
        .map(|pair| {
            let v = parse_floats(pair)?;
            match v[..] {
                [re, im] => Ok(Complex64::new(re, im)),
                [re] => Ok(Complex64::new(re, 0.0)),
                _ => Err(input(format!("bad coordinate {pair:?}"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    form.rep().vector(coords)
}

fn cmd_moderate(a: &ModerateArgs) -> Result<i32> {
    let cfg = sweep_config(&a.sweep)?;
    let form = load(&a.sweep.form, a.sweep.tmax)?;
    let n = form.degree();
    let l1 = form.rep().highest_weight().lambda1();
    let r = a.r.unwrap_or(n as f64 * l1 as f64 / 2.0);
    let w0 = match &a.w0 {
        Some(s) => parse_w0(&form, s)?,
        None => form.rep().highest_weight_vector(),
    };
    let c = form_constant(&form, &a.sweep, &cfg)?;
    let fresh = SweepConfig { seed: cfg.seed.wrapping_add(1), ..cfg.clone() };
    let mut gs = random_group_elements(n, &fresh)?;
    if !a.no_rays {
        let ts: Vec<f64> = (1..=6).map(|e| 2f64.powi(e)).collect();
        gs.extend(ray_elements(n, &ts)?);
    }
    let report = verify_moderate_growth(&form, &w0, r, c, &gs, &cfg)?;
    eprintln!(
        "{} violations over {} samples, worst ratio {}",
        report.violations, report.samples, report.worst_ratio
    );
    emit_report(&a.sweep.output, &report)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_generate(a: &GenerateArgs) -> Result<i32> {
    std::fs::create_dir_all(&a.out_dir)?;
    for (name, form) in catalog::bundled()? {
        let path = a.out_dir.join(format!("{name}.json"));
        save_form(&form, Some(name), &path)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(EXIT_OK)
}
