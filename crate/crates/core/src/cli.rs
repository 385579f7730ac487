//! Command-line front end. `run` returns the process exit code:
//! 0 success, 2 usage or configuration error, 3 solver stall or
//! non-convergence, 1 anything else (I/O).

use std::ffi::OsString;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;
use serde_json::json;

use crate::analysis::{compare_to_limit, detect_defects, phi_csv, DEFAULT_PHI_THRESHOLD};
use crate::checks::{format_table, run_checks, CheckOptions, Suite, DEFAULT_RNG_SEED};
use crate::config::RunConfig;
use crate::energy::checkpoint::{meta_for, read_checkpoint, write_checkpoint, CheckpointMeta};
use crate::energy::{assemble_energy_unchecked, build_mesh, minimize, Field2D, SolverStatus};
use crate::error::{Error, Result};
use crate::limit::{critical_betas, hysteresis_sweep, landscape, stationary_angles, Branch};
use crate::profile::{quadrature_i, sample_profile, ProfileSpec};
use crate::seed::{build_seed, SeedSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "nematic-colloid", version, about = "Colloid in a nematic: limit model, profiles, relaxation")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Seed for every sampling-based routine.
    #[arg(long, global = true, default_value_t = DEFAULT_RNG_SEED, value_parser = parse_u64)]
    pub seed_rng: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Restrict output to one format; both are written by default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutFormat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Limit-model landscapes, stationary points and hysteresis sweeps.
    Limit(LimitArgs),
    /// Optimal radial profile and its energy.
    Profile(ProfileArgs),
    /// Build the constructed initial field from a config.
    Seed(ConfigArgs),
    /// Relax a seed and analyse the result.
    Minimize(ConfigArgs),
    /// Detect defects in a stored field.
    Analyze(AnalyzeArgs),
    /// Run the invariant suites.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
pub struct LimitArgs {
    /// Comma-separated β values for landscapes.
    #[arg(long, value_delimiter = ',', required_unless_present = "sweep")]
    pub beta: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub s_star: f64,
    /// Hysteresis sweep `from:to:steps`.
    #[arg(long)]
    pub sweep: Option<String>,
    /// Starting branch for the sweep.
    #[arg(long, default_value = "dp")]
    pub branch: String,
    /// Landscape resolution (intervals on [0, π]).
    #[arg(long, default_value_t = 720)]
    pub points: usize,
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    /// Boundary angle θ ∈ [0, π].
    #[arg(long, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub s_star: f64,
    /// +1 turns towards e3, −1 towards −e3.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub sign: i8,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct ConfigArgs {
    /// TOML run configuration.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Field checkpoint (CSV with its `.meta.json` sidecar).
    #[arg(long)]
    pub field: PathBuf,
    #[arg(long, default_value_t = DEFAULT_PHI_THRESHOLD)]
    pub threshold: f64,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Comma-separated suites to run.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    /// Corrupt one quantity per suite (test mode).
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

fn parse_u64(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|e| format!("invalid seed `{s}`: {e}"))
}

struct Output<'a> {
    dir: &'a Path,
    format: Option<OutFormat>,
    written: Vec<PathBuf>,
}

impl<'a> Output<'a> {
    fn new(common: &'a Common) -> Result<Self> {
        std::fs::create_dir_all(&common.out).map_err(|e| Error::io(common.out.display().to_string(), e))?;
        Ok(Output {
            dir: &common.out,
            format: common.format,
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, text).map_err(|e| Error::io(path.display().to_string(), e))?;
        self.written.push(path);
        Ok(())
    }

    fn csv(&mut self, stem: &str, text: &str) -> Result<()> {
        if self.format != Some(OutFormat::Json) {
            self.write(&format!("{stem}.csv"), text)?;
        }
        Ok(())
    }

    fn json<T: Serialize>(&mut self, stem: &str, value: &T) -> Result<()> {
        if self.format != Some(OutFormat::Csv) {
            let mut text = serde_json::to_string_pretty(value)?;
            text.push('\n');
            self.write(&format!("{stem}.json"), &text)?;
        }
        Ok(())
    }
}

fn beta_tag(beta: f64) -> String {
    format!("{beta}").replace('-', "m")
}

fn cmd_limit(common: &Common, args: &LimitArgs) -> Result<i32> {
    if !(args.s_star > 0.0) {
        return Err(Error::InvalidInput("--s-star must be positive".into()));
    }
    if args.points < 2 {
        return Err(Error::InvalidInput("--points must be at least 2".into()));
    }
    if args.beta.iter().any(|b| !(*b >= 0.0)) {
        return Err(Error::InvalidInput("β values must be non-negative".into()));
    }
    let mut out = Output::new(common)?;
    let (beta_equal, beta_spinodal) = critical_betas(args.s_star);
    let mut per_beta = Vec::new();
    for &beta in &args.beta {
        let rows = landscape(beta, args.s_star, args.points);
        let mut csv = String::from("theta_d,energy\n");
        for (t, e) in &rows {
            csv.push_str(&format!("{t:.12},{e:.12}\n"));
        }
        out.csv(&format!("landscape_beta_{}", beta_tag(beta)), &csv)?;
        per_beta.push(json!({ "beta": beta, "stationary": stationary_angles(beta, args.s_star) }));
        println!("β = {beta}: {} stationary points", stationary_angles(beta, args.s_star).len());
    }
    let mut summary = json!({
        "s_star": args.s_star,
        "beta_equal": beta_equal,
        "beta_spinodal": beta_spinodal,
        "landscapes": per_beta,
    });
    if let Some(sweep) = &args.sweep {
        let parts: Vec<&str> = sweep.split(':').collect();
        let bad = || Error::InvalidInput(format!("--sweep expects from:to:steps, got `{sweep}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let from: f64 = parts[0].parse().map_err(|_| bad())?;
        let to: f64 = parts[1].parse().map_err(|_| bad())?;
        let steps: usize = parts[2].parse().map_err(|_| bad())?;
        let branch: Branch = args.branch.parse()?;
        let trace = hysteresis_sweep(from, to, steps, args.s_star, branch)?;
        out.csv("hysteresis", &trace.to_csv())?;
        out.json("hysteresis", &trace)?;
        let jumps: Vec<_> = trace.jumps().map(|r| json!({"beta": r.beta, "theta_d": r.theta_d, "branch": r.branch})).collect();
        for j in &jumps {
            println!("jump at β = {}", j["beta"]);
        }
        summary["sweep"] = json!({ "from": from, "to": to, "steps": steps, "branch": branch, "jumps": jumps });
    }
    println!("β_equal = {beta_equal:.6}, β_spinodal = {beta_spinodal:.6}");
    out.json("summary", &summary)?;
    Ok(EXIT_OK)
}

fn cmd_profile(common: &Common, args: &ProfileArgs) -> Result<i32> {
    if !(0.0..=PI).contains(&args.theta) {
        return Err(Error::InvalidInput(format!("--theta must lie in [0, π], got {}", args.theta)));
    }
    let mut spec = ProfileSpec::new(args.theta, args.s_star, args.sign)?;
    spec = spec.with_grid(args.t_max.unwrap_or(spec.t_max), args.n)?;
    let q = quadrature_i(&spec)?;
    for w in &q.warnings {
        log::warn!("{w}");
    }
    let mut out = Output::new(common)?;
    let mut csv = String::from("t,n3,integrand\n");
    for (t, n3, i) in sample_profile(&spec) {
        csv.push_str(&format!("{t:.12},{n3:.12},{i:.12}\n"));
    }
    out.csv("profile", &csv)?;
    out.json(
        "profile",
        &json!({
            "theta": args.theta, "s_star": args.s_star, "sign": args.sign,
            "t_max": spec.t_max, "n": spec.n_points,
            "quadrature": q.value, "closed_form": q.closed_form,
            "abs_error": (q.value - q.closed_form).abs(), "warnings": q.warnings,
        }),
    )?;
    println!("I = {:.9} (closed form {:.9})", q.value, q.closed_form);
    Ok(EXIT_OK)
}

fn initial_field(cfg: &RunConfig) -> Result<Field2D> {
    let params = cfg.params()?;
    match cfg.theta_d()? {
        Some(theta_d) => {
            let mesh = Arc::new(build_mesh(cfg.mesh)?);
            let spec = SeedSpec::new(theta_d, params.eta, cfg.epsilon(&params), cfg.seed.orientation)?;
            build_seed(mesh, &spec, params)
        }
        None => {
            let path = cfg.seed.path.as_ref().expect("validated");
            let (field, meta) = read_checkpoint(path)?;
            if meta.mesh != cfg.mesh {
                return Err(Error::Config(format!(
                    "checkpoint mesh {:?} differs from the configured mesh {:?}",
                    meta.mesh, cfg.mesh
                )));
            }
            let mut field = Field2D {
                params,
                ..field
            };
            field.apply_boundary();
            Ok(field)
        }
    }
}

fn cmd_seed(common: &Common, args: &ConfigArgs) -> Result<i32> {
    let cfg = RunConfig::load(&args.config)?;
    let field = initial_field(&cfg)?;
    let mut out = Output::new(common)?;
    let energy = assemble_energy_unchecked(&field);
    let meta = CheckpointMeta {
        energy: Some(energy),
        ..meta_for(&field)
    };
    write_checkpoint(&field, &out.dir.join("seed.csv"), &meta)?;
    out.csv("seed_phi", &phi_csv(&field))?;
    out.json("seed_energy", &energy)?;
    println!("seed energy {:.9}", energy.total);
    Ok(EXIT_OK)
}

fn analyse_and_write(out: &mut Output, field: &Field2D, threshold: f64, stem: &str) -> Result<()> {
    let report = detect_defects(field, threshold)?;
    out.json(&format!("{stem}defects"), &report)?;
    out.csv(&format!("{stem}phi"), &phi_csv(field))?;
    match compare_to_limit(&report, &field.params) {
        Ok(rec) => out.json(&format!("{stem}comparison"), &rec)?,
        Err(e) => out.json(&format!("{stem}comparison"), &json!({ "error": e.to_string() }))?,
    }
    println!(
        "classification {} ({} defects, ring angle {:?})",
        report.classification,
        report.defects.len(),
        report.ring_angle
    );
    Ok(())
}

fn cmd_minimize(common: &Common, args: &ConfigArgs) -> Result<i32> {
    let cfg = RunConfig::load(&args.config)?;
    let seed = initial_field(&cfg)?;
    let (field, report) = match minimize(&seed, &cfg.solver) {
        Ok(v) => v,
        Err(Error::SolverStall(b)) => *b,
        Err(e) => return Err(e),
    };
    info!("{} in {:.1}s", report.message, report.seconds);
    let mut out = Output::new(common)?;
    let energy = assemble_energy_unchecked(&field);
    let meta = CheckpointMeta {
        energy: Some(energy),
        report: Some(report.clone()),
        ..meta_for(&field)
    };
    write_checkpoint(&field, &out.dir.join("field.csv"), &meta)?;
    out.json("energy", &json!({ "energy": energy, "report": report }))?;
    let mut trace = String::from("sample,energy\n");
    for (k, e) in report.energy_trace.iter().enumerate() {
        trace.push_str(&format!("{k},{e:.12}\n"));
    }
    out.csv("trace", &trace)?;
    analyse_and_write(&mut out, &field, DEFAULT_PHI_THRESHOLD, "")?;
    println!("{}", report.message);
    Ok(match report.status {
        SolverStatus::Converged => EXIT_OK,
        SolverStatus::MaxIterations | SolverStatus::Stalled => EXIT_SOLVER,
    })
}

fn cmd_analyze(common: &Common, args: &AnalyzeArgs) -> Result<i32> {
    let (field, _) = read_checkpoint(&args.field)?;
    let mut out = Output::new(common)?;
    analyse_and_write(&mut out, &field, args.threshold, "")?;
    Ok(EXIT_OK)
}

fn cmd_check(common: &Common, args: &CheckArgs) -> Result<i32> {
    let only = args.only.iter().map(|s| s.parse::<Suite>()).collect::<Result<Vec<_>>>()?;
    let opts = CheckOptions {
        only,
        rng_seed: common.seed_rng,
        samples: args.samples,
        inject_fault: args.inject_fault,
    };
    let outcomes = run_checks(&opts);
    print!("{}", format_table(&outcomes));
    if common.out != Path::new("out") || common.format.is_some() {
        let mut out = Output::new(common)?;
        out.json("checks", &outcomes)?;
    }
    Ok(if outcomes.iter().all(|o| o.passed) { EXIT_OK } else { EXIT_FAILURE })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::InvalidSpec(_) | Error::Config(_) => EXIT_USAGE,
        Error::SolverStall(_) | Error::ProfileNotConverged { .. } => EXIT_SOLVER,
        _ => EXIT_FAILURE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("thread pool already initialised: {e}");
        }
    }
    let res = match &cli.command {
        Command::Limit(a) => cmd_limit(&cli.common, a),
        Command::Profile(a) => cmd_profile(&cli.common, a),
        Command::Seed(a) => cmd_seed(&cli.common, a),
        Command::Minimize(a) => cmd_minimize(&cli.common, a),
        Command::Analyze(a) => cmd_analyze(&cli.common, a),
        Command::Check(a) => cmd_check(&cli.common, a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_flag_accepts_hex() {
        assert_eq!(parse_u64("0xC0FFEE").unwrap(), 0xC0FFEE);
        assert_eq!(parse_u64("42").unwrap(), 42);
        assert!(parse_u64("zz").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["nematic-colloid", "limit"]), EXIT_USAGE);
        assert_eq!(run(["nematic-colloid", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["nematic-colloid", "check", "--only", "nope"]), EXIT_USAGE);
    }

    #[test]
    fn file_seed_kind_requires_path() {
        let cfg = "[regime]\nbeta = 1.0\neta = 0.2\n[seed]\ntype = \"file\"\n";
        assert!(RunConfig::from_toml(cfg).is_err());
        let _ = crate::config::SeedKind::File;
    }
}
