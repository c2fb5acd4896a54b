//! Monte Carlo experiment drivers: single-run convergence traces and
//! SNR / eavesdropper-antenna sweeps averaged over channel realizations.
//!
//! Each trial draws its channel from a seed derived only from
//! `(master_seed, sweep index, trial index)`, and both variants of a trial see
//! the same channel and the same random starting precoders. Trials run in
//! parallel but are aggregated in `(sweep value, trial)` order, so results do
//! not depend on scheduling.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{generate_channels, ChannelSet, SystemConfig};
use crate::error::{Error, Result};
use crate::feasibility::is_proper;
use crate::io::write_atomic;
use crate::plot::{LineChart, Series};
use crate::rates::rate_report;
use crate::solver::{solve, SolverOptions, Variant};

pub const CSV_HEADER: &str =
    "sweep_value,variant,mean_ssr,mean_smlr,mean_silr,mean_final_cost,mean_iterations,trials,failed";

fn default_trials() -> usize {
    200
}

fn default_master_seed() -> u64 {
    1
}

fn default_variants() -> Vec<Variant> {
    Variant::ALL.to_vec()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sweep {
    #[default]
    None,
    /// SNR points in dB; `Pt = 10^(snr/10)·σ²`.
    Snr { values_db: Vec<f64> },
    /// Eavesdropper antenna counts.
    Nre { values: Vec<usize> },
}

impl Sweep {
    fn len(&self) -> usize {
        match self {
            Sweep::None => 1,
            Sweep::Snr { values_db } => values_db.len(),
            Sweep::Nre { values } => values.len(),
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Sweep::None => "none",
            Sweep::Snr { .. } => "SNR (dB)",
            Sweep::Nre { .. } => "Nre",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub base_config: SystemConfig,
    #[serde(default)]
    pub sweep: Sweep,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_master_seed")]
    pub master_seed: u64,
    #[serde(default = "default_variants")]
    pub variants: Vec<Variant>,
    #[serde(default)]
    pub solver_opts: SolverOptions,
}

impl ExperimentSpec {
    pub fn new(base_config: SystemConfig, sweep: Sweep) -> Self {
        ExperimentSpec {
            base_config,
            sweep,
            trials: default_trials(),
            master_seed: default_master_seed(),
            variants: default_variants(),
            solver_opts: SolverOptions::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            field: "experiment".into(),
            reason: e.to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// Sweep coordinate and system configuration for sweep point `index`.
    pub fn point(&self, index: usize) -> (f64, SystemConfig) {
        let mut cfg = self.base_config;
        match &self.sweep {
            Sweep::None => (0.0, cfg),
            Sweep::Snr { values_db } => {
                let db = values_db[index];
                cfg.pt = 10f64.powf(db / 10.0) * cfg.sigma2;
                (db, cfg)
            }
            Sweep::Nre { values } => {
                cfg.nre = values[index];
                (values[index] as f64, cfg)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason: String| Err(Error::InvalidExperiment { field, reason });
        if self.trials == 0 {
            return bad("trials", "must be at least 1".into());
        }
        if self.variants.is_empty() {
            return bad("variants", "must name at least one variant".into());
        }
        for (i, v) in self.variants.iter().enumerate() {
            if self.variants[..i].contains(v) {
                return bad("variants", format!("`{v}` listed twice"));
            }
        }
        self.solver_opts.validate()?;
        let increasing = match &self.sweep {
            Sweep::None => true,
            Sweep::Snr { values_db } => {
                if values_db.iter().any(|v| !v.is_finite()) {
                    return bad("sweep", "SNR values must be finite".into());
                }
                values_db.windows(2).all(|w| w[0] < w[1])
            }
            Sweep::Nre { values } => values.windows(2).all(|w| w[0] < w[1]),
        };
        if self.sweep.len() == 0 {
            return bad("sweep", "sweep values must be non-empty".into());
        }
        if !increasing {
            return bad("sweep", "sweep values must be strictly increasing".into());
        }
        for i in 0..self.sweep.len() {
            self.point(i).1.validate()?;
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Channel seed of one trial.
pub fn trial_seed(master_seed: u64, sweep_index: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master_seed) ^ sweep_index as u64) ^ trial as u64)
}

/// Seed for the solver's random starting precoders, derived from the channel seed.
pub fn solver_seed(channel_seed: u64) -> u64 {
    splitmix64(channel_seed ^ 0x5EED_F00D_CAFE_D00D)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Serial,
    Parallel,
}

/// Outcome of one `(sweep point, trial, variant)` solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub sweep_index: usize,
    pub sweep_value: f64,
    pub trial: usize,
    pub variant: Variant,
    pub channel_seed: u64,
    pub ssr: f64,
    pub smlr: f64,
    pub silr: f64,
    pub final_cost: f64,
    pub iterations: usize,
    pub converged: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub variant: Variant,
    pub mean_ssr: f64,
    pub mean_smlr: f64,
    pub mean_silr: f64,
    pub mean_final_cost: f64,
    pub mean_iterations: f64,
    /// Trials that entered the means.
    pub trials: usize,
    /// Trials excluded because the solver or rate evaluation failed.
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub sweep_label: String,
    pub rows: Vec<SweepRow>,
    pub records: Vec<TrialRecord>,
    pub warnings: Vec<String>,
}

fn properness_warning(cfg: &SystemConfig) -> Option<String> {
    let rep = is_proper(cfg);
    (!rep.proper).then(|| {
        format!(
            "system ({}x{},{},{})^{} is improper (N_v = {} < N_eq = {})",
            cfg.nt, cfg.nr, cfg.nre, cfg.d, cfg.k, rep.n_v, rep.n_eq
        )
    })
}

fn run_trial(
    cfg: SystemConfig,
    spec: &ExperimentSpec,
    sweep_index: usize,
    sweep_value: f64,
    trial: usize,
) -> Vec<TrialRecord> {
    let seed = trial_seed(spec.master_seed, sweep_index, trial);
    let channels = generate_channels(cfg, seed);
    spec.variants
        .iter()
        .map(|&variant| {
            let mut rec = TrialRecord {
                sweep_index,
                sweep_value,
                trial,
                variant,
                channel_seed: seed,
                ssr: f64::NAN,
                smlr: f64::NAN,
                silr: f64::NAN,
                final_cost: f64::NAN,
                iterations: 0,
                converged: false,
                error: None,
            };
            let outcome = channels.as_ref().map_err(|e| e.to_string()).and_then(|cs| {
                let sol = solve(cs, solver_seed(seed), variant, &spec.solver_opts).map_err(|e| e.to_string())?;
                let rep = rate_report(cs, &sol.precoders).map_err(|e| e.to_string())?;
                Ok((sol, rep))
            });
            match outcome {
                Ok((sol, rep)) => {
                    rec.ssr = rep.ssr;
                    rec.smlr = rep.smlr;
                    rec.silr = rep.silr;
                    rec.final_cost = sol.final_cost();
                    rec.iterations = sol.iterations;
                    rec.converged = sol.converged;
                }
                Err(e) => rec.error = Some(e),
            }
            rec
        })
        .collect()
}

/// Arithmetic means over the successful records of each `(sweep point, variant)`.
pub fn aggregate(records: &[TrialRecord], variants: &[Variant], points: &[f64]) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(points.len() * variants.len());
    for (i, &value) in points.iter().enumerate() {
        for &variant in variants {
            let (mut n, mut failed) = (0usize, 0usize);
            let mut sums = [0.0f64; 5];
            for r in records.iter().filter(|r| r.sweep_index == i && r.variant == variant) {
                if r.error.is_some() {
                    failed += 1;
                    continue;
                }
                n += 1;
                for (s, v) in sums.iter_mut().zip([r.ssr, r.smlr, r.silr, r.final_cost, r.iterations as f64]) {
                    *s += v;
                }
            }
            let mean = |s: f64| if n == 0 { f64::NAN } else { s / n as f64 };
            rows.push(SweepRow {
                sweep_value: value,
                variant,
                mean_ssr: mean(sums[0]),
                mean_smlr: mean(sums[1]),
                mean_silr: mean(sums[2]),
                mean_final_cost: mean(sums[3]),
                mean_iterations: mean(sums[4]),
                trials: n,
                failed,
            });
        }
    }
    rows
}

/// Run every trial of every sweep point; `Sweep::None` is a single point.
pub fn run_sweep(spec: &ExperimentSpec, parallelism: Parallelism) -> Result<SweepResult> {
    spec.validate()?;
    let mut records = Vec::new();
    let mut points = Vec::new();
    let mut warnings = Vec::new();
    for i in 0..spec.sweep.len() {
        let (value, cfg) = spec.point(i);
        warnings.extend(properness_warning(&cfg));
        let batch: Vec<Vec<TrialRecord>> = match parallelism {
            Parallelism::Serial => (0..spec.trials).map(|t| run_trial(cfg, spec, i, value, t)).collect(),
            Parallelism::Parallel => (0..spec.trials)
                .into_par_iter()
                .map(|t| run_trial(cfg, spec, i, value, t))
                .collect(),
        };
        let batch: Vec<TrialRecord> = batch.into_iter().flatten().collect();
        let failed = batch.iter().filter(|r| r.error.is_some()).count();
        log::info!(
            "{} = {value}: {} solves, {failed} failed",
            spec.sweep.label(),
            batch.len()
        );
        records.extend(batch);
        points.push(value);
    }
    Ok(SweepResult {
        sweep_label: spec.sweep.label().to_string(),
        rows: aggregate(&records, &spec.variants, &points),
        records,
        warnings,
    })
}

pub fn sweep_snr(spec: &ExperimentSpec) -> Result<SweepResult> {
    if !matches!(spec.sweep, Sweep::Snr { .. }) {
        return Err(Error::InvalidExperiment {
            field: "sweep",
            reason: "sweep_snr requires an snr sweep".into(),
        });
    }
    run_sweep(spec, Parallelism::Parallel)
}

pub fn sweep_nre(spec: &ExperimentSpec) -> Result<SweepResult> {
    if !matches!(spec.sweep, Sweep::Nre { .. }) {
        return Err(Error::InvalidExperiment {
            field: "sweep",
            reason: "sweep_nre requires an nre sweep".into(),
        });
    }
    if let Sweep::Nre { values } = &spec.sweep {
        if let Some(&v) = values.iter().find(|&&v| v < spec.base_config.d) {
            return Err(Error::InvalidExperiment {
                field: "sweep",
                reason: format!("Nre = {v} is below d = {}", spec.base_config.d),
            });
        }
    }
    run_sweep(spec, Parallelism::Parallel)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTrace {
    pub channel_seed: u64,
    pub cost_trajectory: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub warnings: Vec<String>,
}

/// Cost trajectory of one WSLM solve on an explicit channel realization.
pub fn convergence_on(cs: &ChannelSet, solver_seed: u64, opts: &SolverOptions) -> Result<ConvergenceTrace> {
    let sol = solve(cs, solver_seed, Variant::Wslm, opts)?;
    Ok(ConvergenceTrace {
        channel_seed: cs.seed(),
        cost_trajectory: sol.cost_trajectory,
        iterations: sol.iterations,
        converged: sol.converged,
        warnings: properness_warning(cs.config()).into_iter().collect(),
    })
}

/// Single-realization WSLM convergence trace for the spec's base system.
pub fn run_convergence(spec: &ExperimentSpec) -> Result<ConvergenceTrace> {
    if !spec.variants.contains(&Variant::Wslm) {
        return Err(Error::InvalidExperiment {
            field: "variants",
            reason: "convergence runs require the wslm variant".into(),
        });
    }
    spec.base_config.validate()?;
    spec.solver_opts.validate()?;
    let seed = trial_seed(spec.master_seed, 0, 0);
    let cs = generate_channels(spec.base_config, seed)?;
    convergence_on(&cs, solver_seed(seed), &spec.solver_opts)
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn trajectory_csv(trace: &ConvergenceTrace) -> String {
    let mut out = String::from("iteration,cost\n");
    for (i, c) in trace.cost_trajectory.iter().enumerate() {
        let _ = writeln!(out, "{i},{}", fmt_num(*c));
    }
    out
}

pub fn sweep_csv(result: &SweepResult) -> Result<String> {
    if result.rows.is_empty() {
        return Err(Error::InvalidExperiment {
            field: "rows",
            reason: "cannot write an empty sweep result".into(),
        });
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &result.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_num(r.sweep_value),
            r.variant,
            fmt_num(r.mean_ssr),
            fmt_num(r.mean_smlr),
            fmt_num(r.mean_silr),
            fmt_num(r.mean_final_cost),
            fmt_num(r.mean_iterations),
            r.trials,
            r.failed
        );
    }
    Ok(out)
}

pub fn write_csv(result: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    let text = sweep_csv(result)?;
    write_atomic(path.as_ref(), text.as_bytes())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Ssr,
    Smlr,
    Silr,
}

impl Metric {
    fn name(self) -> &'static str {
        match self {
            Metric::Ssr => "SSR",
            Metric::Smlr => "SMLR",
            Metric::Silr => "SILR",
        }
    }

    fn of(self, row: &SweepRow) -> f64 {
        match self {
            Metric::Ssr => row.mean_ssr,
            Metric::Smlr => row.mean_smlr,
            Metric::Silr => row.mean_silr,
        }
    }
}

pub fn sweep_chart(result: &SweepResult, metrics: &[Metric]) -> LineChart {
    let mut variants: Vec<Variant> = Vec::new();
    for r in &result.rows {
        if !variants.contains(&r.variant) {
            variants.push(r.variant);
        }
    }
    let mut series = Vec::new();
    for &m in metrics {
        for &v in &variants {
            series.push(Series {
                name: format!("{} {v}", m.name()),
                points: result
                    .rows
                    .iter()
                    .filter(|r| r.variant == v)
                    .map(|r| (r.sweep_value, m.of(r)))
                    .collect(),
            });
        }
    }
    let names: Vec<&str> = metrics.iter().map(|m| m.name()).collect();
    LineChart {
        title: format!("Average {} versus {}", names.join(" / "), result.sweep_label),
        x_label: result.sweep_label.clone(),
        y_label: "bits/s/Hz".into(),
        log_y: false,
        series,
    }
}

pub fn emit_plot(result: &SweepResult, metrics: &[Metric], path: impl AsRef<Path>) -> Result<()> {
    if result.rows.is_empty() {
        return Err(Error::InvalidExperiment {
            field: "rows",
            reason: "cannot plot an empty sweep result".into(),
        });
    }
    write_atomic(path.as_ref(), sweep_chart(result, metrics).to_svg().as_bytes())
}

pub fn trajectory_chart(trace: &ConvergenceTrace) -> LineChart {
    LineChart {
        title: "WSLM cost versus iteration".into(),
        x_label: "iteration".into(),
        y_label: "cost".into(),
        log_y: true,
        series: vec![Series {
            name: "wslm".into(),
            points: trace
                .cost_trajectory
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as f64, c))
                .collect(),
        }],
    }
}
