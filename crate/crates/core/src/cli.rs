//! Command-line front end: `run`, `sweep`, `compare` and `cdf`.
//!
//! Exit codes: 0 on success, 2 for usage errors, 3 when a request falls
//! outside the model's domain or the exact search's limits, 1 otherwise.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{cdf_k, cdf_k_given_h, prob_competitive_value, StatModelParams};
use crate::error::{invalid, Error, Result};
use crate::harness::presets::{cdf_preset, sweep_preset, KGrid};
use crate::harness::{
    analytical_histogram, fmt_g, histogram_csv, ratio_histogram, run_sweep, run_trial_traced, sweep_csv,
    SweepParameter, SweepRow, SweepSpec, SweepValue,
};
use crate::model::{dbm_to_watts, generate_scenario, Scenario, ScenarioConfig};
use crate::online::{write_trace_jsonl, AlgoConfig};

pub const OUT_DIR_ENV: &str = "EDGEALLOC_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "edgealloc-out";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "edgealloc", version, about = "Online task allocation for time-limited edge computing")]
pub struct Cli {
    /// Suppress progress messages on stderr.
    #[arg(short, long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one random scenario; writes the report JSON and a JSON-lines step trace.
    Run(RunArgs),
    /// Monte Carlo sweep over one parameter; writes the summary and ratio CSVs.
    Sweep(SweepArgs),
    /// Run one scenario and print the online and offline allocations side by side.
    Compare(RunArgs),
    /// Tabulate the fading-model distribution of K = 1/beta over a k grid.
    Cdf(CdfArgs),
}

/// Parameter overrides shared by the scenario-based subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Time budget t_tot in seconds.
    #[arg(long, value_name = "SECONDS")]
    pub t_tot: Option<f64>,
    /// Number of tasks I.
    #[arg(long, value_name = "COUNT")]
    pub tasks: Option<usize>,
    /// Number of neighbouring nodes J.
    #[arg(long, value_name = "COUNT")]
    pub nodes: Option<usize>,
    /// Channel bandwidth in Hz.
    #[arg(long, value_name = "HZ")]
    pub bandwidth_hz: Option<f64>,
    /// Transmit power in dBm.
    #[arg(long, value_name = "DBM")]
    pub tx_power_dbm: Option<f64>,
    /// Selection exponent alpha (>= 1, dimensionless).
    #[arg(long, value_name = "ALPHA")]
    pub alpha: Option<f64>,
    /// Dual step parameter delta in (0, 1] (dimensionless).
    #[arg(long, value_name = "DELTA")]
    pub delta: Option<f64>,
}

impl Overrides {
    fn apply(&self, scenario: &mut ScenarioConfig, algo: &mut AlgoConfig) {
        if let Some(t) = self.t_tot {
            scenario.t_tot_s = t;
        }
        if let Some(n) = self.tasks {
            scenario.task_count = n;
        }
        if let Some(n) = self.nodes {
            scenario.node_count = n;
        }
        if let Some(b) = self.bandwidth_hz {
            scenario.channel.bandwidth_hz = b;
        }
        if let Some(p) = self.tx_power_dbm {
            scenario.channel.tx_power_w = dbm_to_watts(p);
        }
        self.apply_algo(algo);
    }

    fn apply_algo(&self, algo: &mut AlgoConfig) {
        if let Some(a) = self.alpha {
            algo.alpha = a;
        }
        if let Some(d) = self.delta {
            algo.delta = d;
        }
    }

    fn touches_generator(&self) -> bool {
        self.tasks.is_some() || self.nodes.is_some() || self.bandwidth_hz.is_some() || self.tx_power_dbm.is_some()
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Preset supplying the base configuration (fig5 to fig10).
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    /// Series of the preset to take the configuration from (default: first).
    #[arg(long, value_name = "LABEL")]
    pub series: Option<String>,
    /// JSON file with a fixed instance: {"scenario": ..., "algo": ...}; units are bits, bits/s, s, Hz, W.
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Seed for the scenario generator (64-bit unsigned).
    #[arg(long, default_value_t = 1, value_name = "SEED")]
    pub seed: u64,
    /// Output directory for report files.
    #[arg(long, env = OUT_DIR_ENV, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Print the report as one JSON document on stdout instead of writing files
    /// (files are still written when --out is given).
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Preset supplying parameter, values, trials and seed (fig5 to fig10).
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    /// Only run this series of the preset.
    #[arg(long, value_name = "LABEL")]
    pub series: Option<String>,
    /// Swept parameter: t_tot (s), bandwidth (Hz), node_count, tx_power (dBm),
    /// cpu_speed_range (bits/s), task_size_range (bits), max_distance (m), alpha.
    #[arg(long, value_name = "NAME")]
    pub parameter: Option<String>,
    /// Comma-separated values in the parameter's unit; ranges as MIN:MAX.
    #[arg(long, value_name = "LIST")]
    pub values: Option<String>,
    /// Trials per value.
    #[arg(long, value_name = "COUNT")]
    pub trials: Option<usize>,
    /// Master seed from which every trial seed is derived (64-bit unsigned).
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Output directory for the CSV files.
    #[arg(long, env = OUT_DIR_ENV, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Print the summary tables as JSON on stdout instead of writing files
    /// (files are still written when --out is given).
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CdfQuantity {
    /// Pr(K <= k | K >= 1).
    Conditional,
    /// Pr(K <= k).
    Unconditional,
    /// Pr(K <= k | K >= 1) raised to the number of tasks.
    Competitive,
}

#[derive(Debug, Clone, Args)]
pub struct CdfArgs {
    /// Preset with model parameters and grid (fig4).
    #[arg(long, value_name = "NAME", default_value = "fig4")]
    pub preset: String,
    /// Time budget in seconds.
    #[arg(long, value_name = "SECONDS")]
    pub t_tot: Option<f64>,
    /// Compute speed f in bits/s.
    #[arg(long, value_name = "BITS_PER_S")]
    pub f: Option<f64>,
    /// Largest task size D_max in bits.
    #[arg(long, value_name = "BITS")]
    pub d_max: Option<f64>,
    /// Rate of the exponential received power, in 1/W.
    #[arg(long, value_name = "PER_WATT")]
    pub lambda: Option<f64>,
    /// First grid point (dimensionless).
    #[arg(long, value_name = "K")]
    pub k_start: Option<f64>,
    /// Last grid point (dimensionless).
    #[arg(long, value_name = "K")]
    pub k_stop: Option<f64>,
    /// Grid spacing (dimensionless).
    #[arg(long, value_name = "K")]
    pub k_step: Option<f64>,
    /// Number of tasks I for the competitive quantity.
    #[arg(long, value_name = "COUNT")]
    pub tasks: Option<usize>,
    /// Which distribution to tabulate.
    #[arg(long, value_enum, default_value_t = CdfQuantity::Conditional)]
    pub quantity: CdfQuantity,
    /// Output CSV file (default: stdout).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// Fixed instance accepted by `--config`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub scenario: Scenario,
    #[serde(default)]
    pub algo: AlgoConfig,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let mut ctx = Ctx {
        stdout,
        stderr,
        quiet: cli.quiet,
    };
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a, &mut ctx),
        Command::Sweep(a) => cmd_sweep(a, &mut ctx),
        Command::Compare(a) => cmd_compare(a, &mut ctx),
        Command::Cdf(a) => cmd_cdf(a, &mut ctx),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(ctx.stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => EXIT_USAGE,
        Error::Domain(_) | Error::ResourceLimit(_) => EXIT_DOMAIN,
        _ => EXIT_FAILURE,
    }
}

struct Ctx<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    quiet: bool,
}

impl Ctx<'_> {
    fn note(&mut self, msg: &str) {
        if !self.quiet {
            let _ = writeln!(self.stderr, "{msg}");
        }
    }
}

fn out_dir(out: &Option<PathBuf>) -> PathBuf {
    out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, text)?;
    Ok(())
}

fn build_instance(a: &RunArgs) -> Result<(Scenario, AlgoConfig)> {
    if let Some(path) = &a.config {
        let text = fs::read_to_string(path)?;
        let file: InstanceFile =
            serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        if a.overrides.touches_generator() {
            return Err(invalid(
                "--tasks, --nodes, --bandwidth-hz and --tx-power-dbm do not apply to a fixed --config instance",
            ));
        }
        file.scenario.validate()?;
        let mut scenario = file.scenario;
        if let Some(t) = a.overrides.t_tot {
            scenario = scenario.with_t_tot(t)?;
        }
        let mut algo = file.algo;
        a.overrides.apply_algo(&mut algo);
        algo.validate()?;
        return Ok((scenario, algo));
    }
    let (mut sc, mut algo) = match &a.preset {
        Some(name) => {
            let preset = sweep_preset(name)?;
            let spec = match &a.series {
                Some(label) => preset.series_spec(label)?,
                None => preset.specs()?.remove(0).1,
            };
            (spec.scenario, spec.algo)
        }
        None => (ScenarioConfig::default(), AlgoConfig::default()),
    };
    a.overrides.apply(&mut sc, &mut algo);
    algo.validate()?;
    Ok((generate_scenario(&sc, a.seed)?, algo))
}

fn cmd_run(a: &RunArgs, ctx: &mut Ctx) -> Result<()> {
    let (scenario, algo) = build_instance(a)?;
    let (report, steps) = run_trial_traced(&scenario, &algo)?;
    let json = serde_json::to_string_pretty(&report)?;
    if a.json {
        writeln!(ctx.stdout, "{json}")?;
    }
    if !a.json || a.out.is_some() {
        let dir = out_dir(&a.out);
        let report_path = dir.join(format!("run-{}.json", scenario.seed));
        let trace_path = dir.join(format!("run-{}.trace.jsonl", scenario.seed));
        write_file(&report_path, &(json + "\n"))?;
        let mut trace = Vec::new();
        write_trace_jsonl(&steps, &mut trace)?;
        fs::write(&trace_path, trace)?;
        ctx.note(&format!(
            "D_IP = {}, D_IP,OPT = {}; wrote {} and {}",
            report.d_ip,
            report.d_ip_opt,
            report_path.display(),
            trace_path.display()
        ));
    }
    Ok(())
}

fn cmd_compare(a: &RunArgs, ctx: &mut Ctx) -> Result<()> {
    let (scenario, algo) = build_instance(a)?;
    let (report, steps) = run_trial_traced(&scenario, &algo)?;
    if a.json {
        writeln!(ctx.stdout, "{}", serde_json::to_string_pretty(&report)?)?;
        return Ok(());
    }
    let out = &mut ctx.stdout;
    writeln!(out, "t_tot = {} s, {} tasks, {} nodes, seed {}", fmt_g(scenario.t_tot_s), scenario.task_count(), scenario.node_count(), scenario.seed)?;
    writeln!(out, "{:>5} {:>12} {:>8} {:>8}", "task", "size_bits", "online", "offline")?;
    for (i, (task, step)) in scenario.tasks.iter().zip(&steps).enumerate() {
        let online = step.accepted_node().map_or("-".to_string(), |n| n.to_string());
        let offline = report.offline.assignment.get(i).map_or("-".to_string(), |n| n.to_string());
        writeln!(out, "{:>5} {:>12} {:>8} {:>8}", task.index, fmt_g(task.size_bits), online, offline)?;
    }
    let ratio = |r: crate::analysis::Ratio| r.value().map_or("undefined".to_string(), fmt_g);
    writeln!(out, "D_IP = {}  D_IP,OPT = {}  P_LP = {}", report.d_ip, report.d_ip_opt, fmt_g(report.p_lp))?;
    writeln!(
        out,
        "empirical ratio = {}  analytical ratio = {}",
        ratio(report.ratios.empirical_ratio),
        ratio(report.ratios.analytical_ratio)
    )?;
    Ok(())
}

#[derive(Serialize)]
struct SeriesTable<'a> {
    series: &'a str,
    parameter: SweepParameter,
    rows: &'a [SweepRow],
}

fn sweep_specs(a: &SweepArgs) -> Result<(String, Vec<(String, SweepSpec)>)> {
    let (stem, mut specs) = match &a.preset {
        Some(name) => {
            let preset = sweep_preset(name)?;
            let specs = match &a.series {
                Some(label) => vec![(label.clone(), preset.series_spec(label)?)],
                None => preset.specs()?,
            };
            (name.clone(), specs)
        }
        None => {
            if a.series.is_some() {
                return Err(invalid("--series needs --preset"));
            }
            let spec = SweepSpec {
                parameter: SweepParameter::TTot,
                values: (0..=7).map(|t| SweepValue::Scalar(t as f64)).collect(),
                trials_per_value: crate::harness::DEFAULT_TRIALS,
                scenario: ScenarioConfig::default(),
                algo: AlgoConfig::default(),
                master_seed: 0,
            };
            ("sweep".to_string(), vec![(String::new(), spec)])
        }
    };
    let parameter = a.parameter.as_deref().map(SweepParameter::parse).transpose()?;
    let values = a
        .values
        .as_deref()
        .map(|v| v.split(',').map(SweepValue::parse).collect::<Result<Vec<_>>>())
        .transpose()?;
    if parameter.is_some() && values.is_none() {
        return Err(invalid("--parameter needs --values"));
    }
    for (_, spec) in &mut specs {
        if let Some(p) = parameter {
            spec.parameter = p;
        }
        if let Some(v) = &values {
            spec.values = v.clone();
        }
        if let Some(t) = a.trials {
            spec.trials_per_value = t;
        }
        if let Some(s) = a.seed {
            spec.master_seed = s;
        }
        a.overrides.apply(&mut spec.scenario, &mut spec.algo);
        spec.validate()?;
    }
    Ok((stem, specs))
}

fn cmd_sweep(a: &SweepArgs, ctx: &mut Ctx) -> Result<()> {
    let (stem, specs) = sweep_specs(a)?;
    let write_files = !a.json || a.out.is_some();
    let dir = out_dir(&a.out);
    let mut tables = Vec::new();
    for (label, spec) in &specs {
        let result = run_sweep(spec)?;
        let name = if label.is_empty() { stem.clone() } else { format!("{stem}-{label}") };
        if write_files {
            let reports: Vec<_> = result.all_reports().cloned().collect();
            let main = dir.join(format!("{name}.csv"));
            write_file(&main, &sweep_csv(&result.rows))?;
            write_file(&dir.join(format!("{name}-ratios.csv")), &histogram_csv(&ratio_histogram(&reports)))?;
            write_file(
                &dir.join(format!("{name}-analytical.csv")),
                &histogram_csv(&analytical_histogram(&reports)),
            )?;
            ctx.note(&format!("wrote {} ({} rows)", main.display(), result.rows.len()));
        }
        tables.push((label.clone(), spec.parameter, result.rows));
    }
    if a.json {
        let view: Vec<SeriesTable> = tables
            .iter()
            .map(|(l, p, rows)| SeriesTable {
                series: l,
                parameter: *p,
                rows,
            })
            .collect();
        writeln!(ctx.stdout, "{}", serde_json::to_string_pretty(&view)?)?;
    }
    Ok(())
}

fn cmd_cdf(a: &CdfArgs, ctx: &mut Ctx) -> Result<()> {
    let preset = cdf_preset(&a.preset)?;
    let stat = StatModelParams::new(
        a.t_tot.unwrap_or(preset.stat.t_tot),
        a.f.unwrap_or(preset.stat.f),
        a.d_max.unwrap_or(preset.stat.d_max),
        a.lambda.unwrap_or(preset.stat.lambda),
    )?;
    let grid = KGrid {
        start: a.k_start.unwrap_or(preset.grid.start),
        stop: a.k_stop.unwrap_or(preset.grid.stop),
        step: a.k_step.unwrap_or(preset.grid.step),
    };
    let tasks = a.tasks.unwrap_or(preset.task_count);
    let mut csv = String::from("k,probability\n");
    for k in grid.points()? {
        let v = match a.quantity {
            CdfQuantity::Conditional => cdf_k_given_h(k, &stat)?,
            CdfQuantity::Unconditional => cdf_k(k, &stat)?,
            CdfQuantity::Competitive => prob_competitive_value(k, &stat, tasks)?,
        };
        csv.push_str(&format!("{},{}\n", fmt_g(k), fmt_g(v)));
    }
    match &a.out {
        Some(path) => {
            write_file(path, &csv)?;
            ctx.note(&format!("wrote {}", path.display()));
        }
        None => write!(ctx.stdout, "{csv}")?,
    }
    Ok(())
}

/// Entry point for the binary.
pub fn main_entry() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
