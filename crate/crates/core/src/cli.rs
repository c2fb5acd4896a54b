//! `wslm` command-line front end.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::feasibility::is_proper;
use crate::harness::{
    emit_plot, run_convergence, sweep_nre, sweep_snr, trajectory_chart, trajectory_csv, write_csv,
    ExperimentSpec, Metric, Sweep, SweepResult,
};
use crate::io::write_atomic;
use crate::solver::Variant;

#[derive(Debug, Parser)]
#[command(name = "wslm", version, about = "Secure interference alignment simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Properness counts, eavesdropper bound and leakage onset for the base system.
    Feasibility(CommonArgs),
    /// Single-realization WSLM cost trajectory.
    Converge(CommonArgs),
    /// Average rates versus SNR.
    SweepSnr(CommonArgs),
    /// Average rates versus eavesdropper antenna count.
    SweepNre(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Feasibility(_) => "feasibility",
            Command::Converge(_) => "converge",
            Command::SweepSnr(_) => "sweep-snr",
            Command::SweepNre(_) => "sweep-nre",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Feasibility(a) | Command::Converge(a) | Command::SweepSnr(a) | Command::SweepNre(a) => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantChoice {
    Wslm,
    Conventional,
    Both,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Experiment JSON file.
    #[arg(long)]
    pub config: PathBuf,
    /// Master seed (default 1, or the file's `master_seed`).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantChoice>,
    #[arg(long)]
    pub kappa_max: Option<usize>,
    #[arg(long)]
    pub cost_eps: Option<f64>,
    /// Also write every per-trial record into the JSON output.
    #[arg(long)]
    pub dump_trials: bool,
}

impl CommonArgs {
    /// Load the experiment file and apply command-line overrides.
    pub fn experiment(&self) -> Result<ExperimentSpec> {
        let mut spec = ExperimentSpec::load(&self.config)?;
        if let Some(seed) = self.seed {
            spec.master_seed = seed;
        }
        if let Some(t) = self.trials {
            spec.trials = t;
        }
        if let Some(v) = self.variant {
            spec.variants = match v {
                VariantChoice::Wslm => vec![Variant::Wslm],
                VariantChoice::Conventional => vec![Variant::Conventional],
                VariantChoice::Both => Variant::ALL.to_vec(),
            };
        }
        if let Some(k) = self.kappa_max {
            spec.solver_opts.kappa_max = k;
        }
        if let Some(e) = self.cost_eps {
            spec.solver_opts.cost_epsilon = e;
        }
        spec.base_config.validate()?;
        Ok(spec)
    }
}

fn output(dir: &Path, command: &str, seed: u64, ext: &str) -> PathBuf {
    dir.join(format!("{command}_{seed}.{ext}"))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    write_atomic(path, text.as_bytes())
}

fn feasibility_text(spec: &ExperimentSpec) -> (String, serde_json::Value) {
    let cfg = spec.base_config;
    let rep = is_proper(&cfg);
    let max_nre = if rep.max_nre.is_finite() {
        format!("{:.3}", rep.max_nre)
    } else {
        "inf".to_string()
    };
    let text = format!(
        "system:          ({}x{},{},{})^{}\n\
         equations:       {}\n\
         variables:       {}\n\
         proper:          {}\n\
         max Nre:         {}\n\
         SILR onset Nre:  {}\n",
        cfg.nt, cfg.nr, cfg.nre, cfg.d, cfg.k, rep.n_eq, rep.n_v, rep.proper, max_nre, rep.silr_onset_nre
    );
    let value = json!({"config": cfg, "report": rep});
    (text, value)
}

fn sweep_outputs(result: &SweepResult, metrics: &[Metric], dir: &Path, name: &str, seed: u64, dump: bool) -> Result<()> {
    let mut meta = json!({"rows": result.rows, "warnings": result.warnings});
    if dump {
        meta["records"] = json!(result.records);
    }
    for w in &result.warnings {
        log::warn!("{w}");
    }
    write_csv(result, output(dir, name, seed, "csv"))?;
    emit_plot(result, metrics, output(dir, name, seed, "svg"))?;
    write_json(&output(dir, name, seed, "json"), &meta)
}

/// Execute a parsed invocation.
pub fn dispatch(cli: &Cli) -> Result<()> {
    let name = cli.command.name();
    let args = cli.command.args();
    let spec = args.experiment()?;
    let seed = spec.master_seed;
    let dir = &args.out;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    match &cli.command {
        Command::Feasibility(_) => {
            let (text, value) = feasibility_text(&spec);
            print!("{text}");
            println!("{}", serde_json::to_string(&value).expect("JSON values serialize"));
            write_json(&output(dir, name, seed, "json"), &value)?;
        }
        Command::Converge(_) => {
            let trace = run_convergence(&spec)?;
            for w in &trace.warnings {
                log::warn!("{w}");
            }
            write_atomic(&output(dir, name, seed, "csv"), trajectory_csv(&trace).as_bytes())?;
            write_atomic(&output(dir, name, seed, "svg"), trajectory_chart(&trace).to_svg().as_bytes())?;
            write_json(&output(dir, name, seed, "json"), &json!(trace))?;
            println!(
                "converged: {} after {} iterations, final cost {:e}",
                trace.converged,
                trace.iterations,
                trace.cost_trajectory.last().copied().unwrap_or(f64::NAN)
            );
        }
        Command::SweepSnr(_) => {
            require_sweep(matches!(spec.sweep, Sweep::Snr { .. }), "snr")?;
            let result = sweep_snr(&spec)?;
            sweep_outputs(&result, &[Metric::Ssr], dir, name, seed, args.dump_trials)?;
        }
        Command::SweepNre(_) => {
            require_sweep(matches!(spec.sweep, Sweep::Nre { .. }), "nre")?;
            let result = sweep_nre(&spec)?;
            sweep_outputs(
                &result,
                &[Metric::Smlr, Metric::Silr, Metric::Ssr],
                dir,
                name,
                seed,
                args.dump_trials,
            )?;
        }
    }
    Ok(())
}

fn require_sweep(ok: bool, kind: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidExperiment {
            field: "sweep",
            reason: format!("this subcommand needs an `{kind}` sweep in the config file"),
        })
    }
}

/// Parse `argv`, run, and map the outcome to a process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
