//! Command-line front end.
//!
//! Every subcommand writes one report, CSV or JSON, to `--out` or stdout.
//! JSON reports share the envelope `{tool_version, master_seed, config_echo,
//! results}`. Failures print a single JSON error record on stderr; the exit
//! code is 2 for usage errors and 1 for everything else.

use std::ffi::OsString;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analytics::RuntimeFormulae;
use crate::dynamics::{self, ReducedState, RotorState, SystemSpec};
use crate::error::{Error, Result};
use crate::experiments::{self, ExperimentConfig};
use crate::integrator::{self, IntegratorConfig};
use crate::schedule::{Schedule, ScheduleKind};
use crate::verify;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "analog-search", version, about = "Classical rotor analog of adiabatic search")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
struct CommonArgs {
    /// Master seed for every random stream
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 1e-10)]
    rtol: f64,
    #[arg(long, global = true, default_value_t = 1e-12)]
    atol: f64,
    /// Annealing runs stop where s = 1 − s_clamp
    #[arg(long = "s-clamp", global = true, default_value_t = 1e-9)]
    s_clamp: f64,
    #[arg(long = "max-steps", global = true, default_value_t = 10_000_000)]
    max_steps: u64,
    /// Runtime scans succeed when cos θ(end) ≤ −1 + hit_tol
    #[arg(long = "hit-tol", global = true, default_value_t = 1e-4)]
    hit_tol: f64,
    /// Perturbed runs succeed when every cos θᵢ(end) ≤ −1 + success_tol
    #[arg(long = "success-tol", global = true, default_value_t = 0.01)]
    success_tol: f64,
    /// Perturbed runs last this multiple of the unperturbed first-passage time
    #[arg(long = "t-run-factor", global = true, default_value_t = 1.0)]
    t_run_factor: f64,
}

impl CommonArgs {
    fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig {
            rel_tol: self.rtol,
            abs_tol: self.atol,
            max_steps: self.max_steps,
            s_clamp: self.s_clamp,
            ..IntegratorConfig::default()
        }
    }

    fn experiment(&self) -> ExperimentConfig {
        ExperimentConfig {
            integrator: self.integrator(),
            hit_tol: self.hit_tol,
            success_tol: self.success_tol,
            t_run_factor: self.t_run_factor,
            ..ExperimentConfig::default()
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Oracle potential over an angle grid
    Potential(PotentialArgs),
    /// A single trajectory
    Simulate(SimulateArgs),
    /// Final-angle curve over runtimes and the minimal runtime
    Runtime(RuntimeArgs),
    /// Minimal runtime against problem size
    Scaling(ScalingArgs),
    /// Success probability under initial-angle errors
    Sensitivity(SensitivityArgs),
    /// Runtime formula table
    Analytic(AnalyticArgs),
    /// Self-check suite
    Verify(VerifyArgs),
    /// Classical sequential search
    Baseline(BaselineArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
struct PotentialArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Tabulate the two-rotor surface V(θ₁, θ₂) for this marked pair instead
    #[arg(long)]
    marked: Option<String>,
    #[arg(long, default_value_t = 101)]
    points: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
struct SimulateArgs {
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Marked bitstring (default: all ones)
    #[arg(long)]
    marked: Option<String>,
    #[arg(long, default_value = "constant", value_parser = parse_kind)]
    schedule: ScheduleKind,
    /// Total runtime (horizon for the constant schedule)
    #[arg(long = "T")]
    total_time: f64,
    #[arg(long, default_value_t = FRAC_PI_2)]
    theta0: f64,
    /// Integrate the single-angle reduced equation
    #[arg(long)]
    reduced: bool,
    #[arg(long = "stop-on-hit")]
    stop_on_hit: bool,
    #[arg(long, default_value_t = 512)]
    samples: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
struct RuntimeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "linear", value_parser = parse_kind)]
    schedule: ScheduleKind,
    #[arg(long = "t-min", default_value_t = 0.1)]
    t_min: f64,
    #[arg(long = "t-max", default_value_t = 100.0)]
    t_max: f64,
    #[arg(long = "t-points", default_value_t = 200)]
    t_points: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
struct ScalingArgs {
    #[arg(long = "n-min", default_value_t = 4)]
    n_min: usize,
    #[arg(long = "n-max", default_value_t = 20)]
    n_max: usize,
    #[arg(long, value_delimiter = ',', value_parser = parse_kind, default_value = "constant,linear,sine")]
    schedules: Vec<ScheduleKind>,
}

#[derive(Debug, Clone, Args, Serialize)]
struct SensitivityArgs {
    #[arg(long = "n-list", value_delimiter = ',', default_value = "6,8,10,12,14")]
    n_list: Vec<usize>,
    #[arg(long = "eps-min", default_value_t = 1e-6)]
    eps_min: f64,
    #[arg(long = "eps-max", default_value_t = 1.0)]
    eps_max: f64,
    #[arg(long = "eps-points", default_value_t = 25)]
    eps_points: usize,
    #[arg(long, default_value_t = 400)]
    trials: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
struct AnalyticArgs {
    #[arg(long = "n-min", default_value_t = 1)]
    n_min: usize,
    #[arg(long = "n-max", default_value_t = 24)]
    n_max: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
struct VerifyArgs {
    #[arg(long = "n-max", default_value_t = 12)]
    n_max: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
struct BaselineArgs {
    /// Search space size is 2^n
    #[arg(long, default_value_t = 10)]
    n: u32,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
}

fn parse_kind(s: &str) -> std::result::Result<ScheduleKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A finished report: CSV tables and the JSON payload.
struct Report {
    command: &'static str,
    args: Value,
    results: Value,
    /// Named CSV tables; the first goes to `--out`, later ones to `<stem>_<name>.csv`.
    tables: Vec<(&'static str, String)>,
    ok: bool,
}

/// Floating-point field with 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Numerical(format!("serialization failed: {e}")))
}

fn spec_for(n: usize, marked: Option<&str>) -> Result<SystemSpec> {
    match marked {
        Some(bits) => {
            let spec = SystemSpec::from_bitstring(bits)?;
            if spec.n() != n {
                return Err(Error::Shape { expected: n, actual: spec.n() });
            }
            Ok(spec)
        }
        None => SystemSpec::all_ones(n),
    }
}

fn potential(a: &PotentialArgs) -> Result<Report> {
    if a.points < 2 {
        return Err(Error::Config("--points must be at least 2".into()));
    }
    let grid: Vec<f64> = (0..a.points).map(|k| 2.0 * PI * k as f64 / (a.points - 1) as f64).collect();
    let mut csv = String::new();
    let results;
    if let Some(bits) = &a.marked {
        let spec = spec_for(2, Some(bits))?;
        csv.push_str("theta_1,theta_2,V\n");
        let mut rows = Vec::with_capacity(a.points * a.points);
        for &t1 in &grid {
            for &t2 in &grid {
                let v = dynamics::potential_product(&spec, &[t1, t2])?;
                writeln!(csv, "{},{},{}", num(t1), num(t2), num(v)).ok();
                rows.push([t1, t2, v]);
            }
        }
        results = json!({ "marked": spec.bitstring(), "surface": rows });
    } else {
        if a.n == 0 {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        csv.push_str("theta,V_n\n");
        let mut rows = Vec::with_capacity(a.points);
        for &th in &grid {
            let v = dynamics::effective_potential(a.n, th);
            writeln!(csv, "{},{}", num(th), num(v)).ok();
            rows.push([th, v]);
        }
        results = json!({ "n": a.n, "effective_potential": rows });
    }
    Ok(Report { command: "potential", args: to_value(a)?, results, tables: vec![("potential", csv)], ok: true })
}

fn simulate(a: &SimulateArgs, common: &CommonArgs) -> Result<Report> {
    let cfg = IntegratorConfig { sample_count: a.samples, ..common.integrator() };
    let sched = Schedule::new(a.schedule, a.total_time)?;
    let s_at = |t: f64| sched.value(t.min(sched.total_time));
    let mut csv = String::new();
    let summary;
    if a.reduced {
        if a.marked.is_some() {
            return Err(Error::Config("--marked has no effect with --reduced".into()));
        }
        let run = integrator::integrate_reduced(a.n, &sched, ReducedState::new(0.0, a.theta0, 0.0), &cfg, a.stop_on_hit)?;
        csv.push_str("t,s,theta,omega,energy\n");
        for st in &run.samples {
            let e = dynamics::conserved_energy(a.n, st);
            writeln!(csv, "{},{},{},{},{}", num(st.t), num(s_at(st.t)?), num(st.theta), num(st.omega), num(e)).ok();
        }
        summary = json!({
            "system": "reduced",
            "samples": run.samples.iter().map(|s| [s.t, s.theta, s.omega]).collect::<Vec<_>>(),
            "final_state": [run.final_state.t, run.final_state.theta, run.final_state.omega],
            "hit_time": run.hit_time,
            "relative_energy_drift": run.relative_energy_drift(),
            "steps_taken": run.steps_taken,
            "termination": run.termination,
            "max_schedule_value": run.max_schedule_value,
        });
    } else {
        let spec = spec_for(a.n, a.marked.as_deref())?;
        let init = RotorState::uniform(a.n, a.theta0, 0.0);
        let run = integrator::integrate_full(&spec, &sched, &init, &cfg, a.stop_on_hit)?;
        let mut header = vec!["t".to_string(), "s".to_string()];
        header.extend((1..=a.n).map(|i| format!("theta_{i}")));
        header.extend((1..=a.n).map(|i| format!("omega_{i}")));
        header.push("energy".into());
        csv.push_str(&header.join(","));
        csv.push('\n');
        let energy = |st: &RotorState| -> Result<f64> {
            let kinetic: f64 = st.omega.iter().map(|w| 0.5 * w * w).sum();
            Ok((kinetic + dynamics::potential_product(&spec, &st.theta)?) / a.n as f64)
        };
        for st in &run.samples {
            let mut row = vec![num(st.t), num(s_at(st.t)?)];
            row.extend(st.theta.iter().chain(&st.omega).map(|&x| num(x)));
            row.push(num(energy(st)?));
            csv.push_str(&row.join(","));
            csv.push('\n');
        }
        summary = json!({
            "system": "full",
            "marked": spec.bitstring(),
            "samples": run.samples.iter().map(|s| json!({"t": s.t, "theta": s.theta, "omega": s.omega})).collect::<Vec<_>>(),
            "final_state": {"t": run.final_state.t, "theta": run.final_state.theta, "omega": run.final_state.omega},
            "hit_time": run.hit_time,
            "relative_energy_drift": run.relative_energy_drift(),
            "steps_taken": run.steps_taken,
            "termination": run.termination,
            "max_schedule_value": run.max_schedule_value,
        });
    }
    Ok(Report { command: "simulate", args: to_value(a)?, results: summary, tables: vec![("trajectory", csv)], ok: true })
}

fn runtime(a: &RuntimeArgs, cfg: &ExperimentConfig) -> Result<Report> {
    let grid = experiments::log_grid(a.t_min, a.t_max, a.t_points)?;
    let scan = experiments::final_angle_curve(a.n, a.schedule, &grid, cfg)?;
    let mut csv = String::from("T,cos_theta_end\n");
    for p in &scan.grid {
        writeln!(csv, "{},{}", num(p.t_total), opt_num(p.cos_theta_end)).ok();
    }
    Ok(Report { command: "runtime", args: to_value(a)?, results: to_value(&scan)?, tables: vec![("runtime_scan", csv)], ok: true })
}

fn scaling(a: &ScalingArgs, cfg: &ExperimentConfig) -> Result<Report> {
    if a.n_min == 0 || a.n_max < a.n_min {
        return Err(Error::Config("need 1 ≤ n-min ≤ n-max".into()));
    }
    let ns: Vec<usize> = (a.n_min..=a.n_max).collect();
    let report = experiments::scaling_sweep(&ns, &a.schedules, cfg)?;
    let mut csv = String::from("kind,n,T_min,log2_T_min\n");
    for s in &report.schedules {
        for p in &s.points {
            writeln!(csv, "{},{},{},{}", s.kind, p.n, opt_num(p.t_min), opt_num(p.t_min.map(f64::log2))).ok();
        }
    }
    Ok(Report { command: "scaling", args: to_value(a)?, results: to_value(&report)?, tables: vec![("scaling", csv)], ok: true })
}

fn sensitivity(a: &SensitivityArgs, seed: u64, cfg: &ExperimentConfig) -> Result<Report> {
    let grid = experiments::log_grid(a.eps_min, a.eps_max, a.eps_points)?;
    let report = experiments::sensitivity_sweep(&a.n_list, &grid, a.trials, seed, cfg)?;
    let mut curves = String::from("n,eps,p_success,std_err\n");
    let mut fit = String::from("n,eps_star\n");
    for c in &report.curves {
        for p in &c.points {
            writeln!(curves, "{},{},{},{}", c.n, num(p.eps), num(p.p_success), num(p.std_err)).ok();
        }
        writeln!(fit, "{},{}", c.n, opt_num(c.eps_star)).ok();
    }
    Ok(Report {
        command: "sensitivity",
        args: to_value(a)?,
        results: to_value(&report)?,
        tables: vec![("sensitivity", curves), ("sensitivity_fit", fit)],
        ok: true,
    })
}

fn analytic(a: &AnalyticArgs) -> Result<Report> {
    if a.n_min == 0 || a.n_max < a.n_min {
        return Err(Error::Config("need 1 ≤ n-min ≤ n-max".into()));
    }
    let rows = (a.n_min..=a.n_max).map(RuntimeFormulae::compute).collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("n,quadrature_T,hypergeometric_T,asymptotic_T,hypergeometric_over_quadrature,asymptotic_over_quadrature\n");
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.n,
            num(r.quadrature_t),
            num(r.hypergeometric_t),
            num(r.asymptotic_t),
            num(r.hypergeometric_t / r.quadrature_t),
            num(r.asymptotic_t / r.quadrature_t)
        )
        .ok();
    }
    Ok(Report { command: "analytic", args: to_value(a)?, results: to_value(&rows)?, tables: vec![("analytic", csv)], ok: true })
}

fn verify_cmd(a: &VerifyArgs, seed: u64) -> Result<Report> {
    let report = verify::run_verify(a.n_max, seed)?;
    let mut csv = String::from("check,n_max,max_error,tolerance,passed\n");
    for c in &report.checks {
        writeln!(csv, "{},{},{},{},{}", c.name, c.n_max, num(c.max_error), num(c.tolerance), c.passed).ok();
    }
    Ok(Report {
        command: "verify",
        args: to_value(a)?,
        ok: report.all_passed,
        results: to_value(&report)?,
        tables: vec![("verify", csv)],
    })
}

fn baseline(a: &BaselineArgs, seed: u64) -> Result<Report> {
    if a.n > 40 {
        return Err(Error::Capacity { n: a.n as usize, max: 40 });
    }
    let r = experiments::digital_baseline(1u64 << a.n, seed, a.trials)?;
    let csv = format!("N,trials,mean_queries,std_err\n{},{},{},{}\n", r.big_n, r.trials, num(r.mean_queries), num(r.std_err));
    Ok(Report { command: "baseline", args: to_value(a)?, results: to_value(&r)?, tables: vec![("baseline", csv)], ok: true })
}

fn execute(cli: &Cli) -> Result<Report> {
    let common = &cli.common;
    let cfg = common.experiment();
    cfg.validate()?;
    match &cli.command {
        Command::Potential(a) => potential(a),
        Command::Simulate(a) => simulate(a, common),
        Command::Runtime(a) => runtime(a, &cfg),
        Command::Scaling(a) => scaling(a, &cfg),
        Command::Sensitivity(a) => sensitivity(a, common.seed, &cfg),
        Command::Analytic(a) => analytic(a),
        Command::Verify(a) => verify_cmd(a, common.seed),
        Command::Baseline(a) => baseline(a, common.seed),
    }
}

fn side_path(out: &Path, name: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    out.with_file_name(format!("{stem}_{name}.csv"))
}

fn render(report: &Report, cli: &Cli) -> Result<Vec<(Option<PathBuf>, String)>> {
    let common = &cli.common;
    match common.format {
        Format::Json => {
            let envelope = json!({
                "tool_version": TOOL_VERSION,
                "master_seed": common.seed,
                "config_echo": {
                    "command": report.command,
                    "args": report.args,
                    "common": to_value(common)?,
                    "experiment": to_value(&common.experiment())?,
                },
                "results": report.results,
            });
            let mut text = serde_json::to_string_pretty(&envelope)
                .map_err(|e| Error::Numerical(format!("serialization failed: {e}")))?;
            text.push('\n');
            Ok(vec![(common.out.clone(), text)])
        }
        Format::Csv => match &common.out {
            Some(out) => Ok(report
                .tables
                .iter()
                .enumerate()
                .map(|(i, (name, body))| (Some(if i == 0 { out.clone() } else { side_path(out, name) }), body.clone()))
                .collect()),
            None => {
                let joined = report.tables.iter().map(|(_, b)| b.as_str()).collect::<Vec<_>>().join("\n");
                Ok(vec![(None, joined)])
            }
        },
    }
}

fn error_record(kind: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "message": message } }).to_string()
}

/// Runs the tool with explicit output streams; returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let _ = writeln!(stderr, "{}", error_record("usage", &e.to_string()));
            return 2;
        }
    };
    let pool = match cli.common.threads {
        Some(0) => {
            let _ = writeln!(stderr, "{}", error_record("usage", "--threads must be positive"));
            return 2;
        }
        Some(t) => rayon::ThreadPoolBuilder::new().num_threads(t).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "{}", error_record("config", &e.to_string()));
            return 1;
        }
    };
    let outcome = pool.install(|| execute(&cli)).and_then(|r| Ok((r.ok, render(&r, &cli)?)));
    match outcome {
        Ok((ok, outputs)) => {
            for (path, body) in outputs {
                let written = match path {
                    Some(p) => std::fs::write(&p, body).map_err(|e| format!("{}: {e}", p.display())),
                    None => stdout.write_all(body.as_bytes()).map_err(|e| e.to_string()),
                };
                if let Err(msg) = written {
                    let _ = writeln!(stderr, "{}", error_record("io", &msg));
                    return 1;
                }
            }
            if ok {
                0
            } else {
                let _ = writeln!(stderr, "{}", error_record("check_failed", "one or more checks failed"));
                1
            }
        }
        Err(e) => {
            let code = if matches!(e, Error::Config(_)) { 2 } else { 1 };
            let _ = writeln!(stderr, "{}", error_record(e.kind(), &e.to_string()));
            code
        }
    }
}

/// Entry point used by the binary.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("analog-search").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = run(&["analytic", "--bogus"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["kind"], "usage");
    }

    #[test]
    fn analytic_csv_rows() {
        let (code, out, _) = run(&["analytic", "--n-min", "1", "--n-max", "24", "--format", "csv"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 25);
        assert!(lines[0].starts_with("n,quadrature_T,hypergeometric_T,asymptotic_T"));
        let asym: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
        assert!((asym[0] - 2.0).abs() < 1e-15);
        // √(2^{n+1}/n) is 2 at both n = 1 and n = 2
        assert!((asym[1] - 2.0).abs() < 1e-15);
        assert!(asym[2..].windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn json_envelope_keys() {
        let (code, out, _) = run(&["baseline", "--n", "4", "--trials", "10", "--seed", "5"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        for key in ["tool_version", "master_seed", "config_echo", "results"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["master_seed"], 5);
        assert_eq!(v["config_echo"]["command"], "baseline");
    }

    #[test]
    fn domain_error_exit_one() {
        let (code, _, err) = run(&["simulate", "--n", "3", "--marked", "10", "--T", "1"]);
        assert_eq!(code, 1);
        assert!(err.contains("\"shape\""));
        let (code, _, _) = run(&["analytic", "--n-min", "0"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn verify_small() {
        let (code, out, _) = run(&["verify", "--n-max", "4", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 7);
    }

    #[test]
    fn number_format_round_trips() {
        for x in [0.1, PI, 1e-300, 123456.789, -2.5e17] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(opt_num(None), "");
    }
}
