use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::{theoretical_bounds, Bounds};
use crate::attacks::{
    full_key_attack, run_dedicated, run_grover_meets_simon, run_offline_dedicated, run_offline_simon, simon_attack,
    AttackConfig, AttackKind, AttackResult, Backend, IterationPolicy, Model,
};
use crate::constructions::{CipherInstance, InstanceDescriptor, Variant};
use crate::periodics::{family_for, KeyedFunction};
use crate::util::derive_seed;
use crate::{Error, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Declared in every report header.
pub const QUERY_CONVENTION: &str = "one U_F application costs 2^t encryption queries; the Simon test counts compute and uncompute; \
dedicated totals (2+2r)·c′·2^t including the final Simon pass; offline Q2 totals c′·2^t from preparation";

/// Output directory for reports written without an explicit path.
pub const OUT_DIR_ENV: &str = "QSYMLAB_OUT_DIR";

fn default_d() -> u32 {
    2
}

fn yes() -> bool {
    true
}

/// How each trial obtains its instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub variant: Variant,
    pub n: u32,
    #[serde(default = "default_d")]
    pub d: u32,
    /// Index width of the Even-Mansour family.
    #[serde(default)]
    pub kappa: Option<u32>,
    #[serde(default)]
    pub seed: u64,
    /// Fresh instance per trial, seeded from the trial seed.
    #[serde(default)]
    pub per_trial: bool,
    /// Resample keys until the truncated period is non-zero.
    #[serde(default = "yes")]
    pub guard: bool,
    /// Unredacted descriptor file; overrides the fields above.
    #[serde(default)]
    pub instance_file: Option<PathBuf>,
}

impl ConstructionSpec {
    pub fn new(variant: Variant, n: u32) -> Self {
        Self { variant, n, d: 2, kappa: None, seed: 0, per_trial: false, guard: true, instance_file: None }
    }

    pub fn build(&self, seed: u64, t: u32, p: Option<u32>) -> Result<CipherInstance> {
        if let Some(path) = &self.instance_file {
            let desc: InstanceDescriptor = serde_json::from_str(&fs::read_to_string(path)?)?;
            return CipherInstance::from_descriptor(&desc);
        }
        let mut b = CipherInstance::builder(self.variant, self.n).seed(seed).domain_bits(self.d);
        if let Some(k) = self.kappa {
            b = b.kappa(k);
        }
        if self.guard && (t > 0 || p.is_some()) && self.variant != Variant::EvenMansour {
            b = b.truncation_guard(t, p);
        }
        b.build()
    }
}

fn default_tau() -> u32 {
    2
}

fn default_retries() -> u32 {
    3
}

fn one() -> u32 {
    1
}

fn hybrid() -> Backend {
    Backend::Hybrid
}

fn closed_form() -> IterationPolicy {
    IterationPolicy::ClosedForm
}

fn q1() -> Model {
    Model::Q1
}

/// A complete, reproducible experiment; seeds included.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "schema")]
    pub schema_version: u32,
    pub construction: ConstructionSpec,
    pub attack: AttackKind,
    #[serde(default)]
    pub t: u32,
    #[serde(default = "default_tau")]
    pub tau: u32,
    #[serde(default)]
    pub c_override: Option<u32>,
    #[serde(default)]
    pub p_split: Option<u32>,
    #[serde(default)]
    pub m_trunc: Option<u32>,
    #[serde(default = "hybrid")]
    pub backend: Backend,
    /// Preparation model for `offline_simon`; the other kinds fix it.
    #[serde(default = "q1")]
    pub model: Model,
    #[serde(default = "closed_form")]
    pub iteration_policy: IterationPolicy,
    #[serde(default)]
    pub marked_hint: Option<u64>,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    #[serde(default = "one")]
    pub final_passes: u32,
    /// Run the tail recovery after a verified first stage.
    #[serde(default)]
    pub full_key: bool,
    #[serde(default)]
    pub trials: u32,
    #[serde(default)]
    pub seed_base: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn schema() -> u32 {
    REPORT_SCHEMA_VERSION
}

impl ExperimentConfig {
    pub fn new(construction: ConstructionSpec, attack: AttackKind) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            construction,
            attack,
            t: 0,
            tau: 2,
            c_override: None,
            p_split: None,
            m_trunc: None,
            backend: Backend::Hybrid,
            model: Model::Q1,
            iteration_policy: IterationPolicy::ClosedForm,
            marked_hint: None,
            max_retries: 3,
            final_passes: 1,
            full_key: false,
            trials: 0,
            seed_base: 0,
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn trial_seed(&self, trial: u32) -> u64 {
        derive_seed(self.seed_base, trial as u64)
    }

    pub fn instance(&self, trial: u32) -> Result<CipherInstance> {
        let seed = if self.construction.per_trial {
            derive_seed(self.trial_seed(trial), 0x1A57)
        } else {
            self.construction.seed
        };
        self.construction.build(seed, self.t, self.p_split)
    }

    pub fn model(&self) -> Model {
        match self.attack {
            AttackKind::OfflineDedicatedQ1 => Model::Q1,
            AttackKind::OfflineSimon => self.model,
            _ => Model::Q2,
        }
    }

    pub fn attack_config(&self, f: &KeyedFunction, rng_seed: u64) -> AttackConfig {
        let mut c = AttackConfig::for_family(f);
        c.t = self.t;
        c.tau = self.tau;
        c.c_override = self.c_override;
        c.p_split = self.p_split;
        c.m_trunc = self.m_trunc;
        c.backend = self.backend;
        c.model = self.model();
        c.iteration_policy = self.iteration_policy;
        c.marked_hint = self.marked_hint;
        c.rng_seed = rng_seed;
        c.max_retries = self.max_retries;
        c.final_passes = self.final_passes;
        c
    }

    /// Closed-form bounds for this configuration, when in their domain.
    pub fn bounds(&self) -> Option<Bounds> {
        let inst = self.instance(0).ok()?;
        let f = family_for(&inst).ok()?;
        theoretical_bounds(f.input_width, f.key_width, self.t, self.tau, self.p_split).ok()
    }
}

/// Runs the configured attack once on `f`; the result may be unverified.
pub fn run_attack(kind: AttackKind, f: &KeyedFunction, config: &AttackConfig) -> Result<AttackResult> {
    match kind {
        AttackKind::Simon => simon_attack(f, config),
        AttackKind::GroverMeetsSimon => run_grover_meets_simon(f, config),
        AttackKind::Dedicated => run_dedicated(f, config),
        AttackKind::OfflineSimon => run_offline_simon(f, config),
        AttackKind::OfflineDedicatedQ1 | AttackKind::OfflineDedicatedQ2 => run_offline_dedicated(f, config),
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u32,
    pub seed: u64,
    pub success: bool,
    pub first_stage_verified: bool,
    pub attempts: u32,
    pub iterations: u64,
    pub c_prime: u32,
    pub classical_queries: u64,
    pub quantum_queries: u64,
    pub public_evals: u64,
    pub distinct_classical_inputs: u64,
    pub recovered_index: String,
    pub recovered_period: String,
    pub full_index: String,
    pub full_period: String,
}

impl TrialRecord {
    fn new(trial: u32, seed: u64, r: &AttackResult) -> Self {
        let tail = r.second_stage.as_ref();
        Self {
            trial,
            seed,
            success: r.full_success(),
            first_stage_verified: r.verified,
            attempts: r.attempts,
            iterations: r.iterations,
            c_prime: r.c_prime,
            classical_queries: r.ledger.classical_queries(),
            quantum_queries: r.ledger.quantum_queries(),
            public_evals: r.ledger.public_evals(),
            distinct_classical_inputs: r.ledger.distinct_classical_inputs(),
            recovered_index: r.recovered_index.to_string(),
            recovered_period: r.recovered_period.to_string(),
            full_index: tail.map(|s| s.index.to_string()).unwrap_or_default(),
            full_period: tail.map(|s| s.period.to_string()).unwrap_or_default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: u32,
    pub successes: u32,
    pub success_rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

/// Wilson score interval at 95%.
pub fn wilson_interval(successes: u32, trials: u32) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let (k, n) = (successes as f64, trials as f64);
    let p = k / n;
    let denom = 1.0 + Z * Z / n;
    let centre = (p + Z * Z / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + Z * Z / (4.0 * n * n)).sqrt() / denom;
    let low = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (low, high)
}

impl Summary {
    pub fn of(records: &[TrialRecord]) -> Self {
        let trials = records.len() as u32;
        let successes = records.iter().filter(|r| r.success).count() as u32;
        let (wilson_low, wilson_high) = wilson_interval(successes, trials);
        let success_rate = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        Self { trials, successes, success_rate, wilson_low, wilson_high }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: f64,
    pub mean_trial_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub convention: String,
    pub config: ExperimentConfig,
    pub bounds: Option<Bounds>,
    pub summary: Summary,
    pub trials: Vec<TrialRecord>,
    /// The only field that varies between identical runs.
    pub timing: Option<Timing>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// JSON without the timing section.
    pub fn reproducible_json(&self) -> Result<String> {
        let mut copy = self.clone();
        copy.timing = None;
        copy.to_json()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.trials {
            w.serialize(r)?;
        }
        if self.trials.is_empty() {
            w.write_record(CSV_HEADER)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

const CSV_HEADER: [&str; 15] = [
    "trial",
    "seed",
    "success",
    "first_stage_verified",
    "attempts",
    "iterations",
    "c_prime",
    "classical_queries",
    "quantum_queries",
    "public_evals",
    "distinct_classical_inputs",
    "recovered_index",
    "recovered_period",
    "full_index",
    "full_period",
];

/// One seeded trial; configuration errors name the trial seed.
pub fn run_trial(config: &ExperimentConfig, trial: u32) -> Result<(TrialRecord, AttackResult)> {
    let seed = config.trial_seed(trial);
    let wrap = |e: Error| Error::Config(format!("trial {trial} (seed {seed}): {e}"));
    let inst = config.instance(trial).map_err(wrap)?;
    let f = family_for(&inst).map_err(wrap)?;
    let ac = config.attack_config(&f, seed);
    let mut result = run_attack(config.attack, &f, &ac).map_err(wrap)?;
    if config.full_key {
        result = full_key_attack(&f, Some(&inst), result, &ac).map_err(wrap)?;
    }
    Ok((TrialRecord::new(trial, seed, &result), result))
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let trials: Vec<TrialRecord> =
        (0..config.trials).into_par_iter().map(|i| run_trial(config, i).map(|(r, _)| r)).collect::<Result<_>>()?;
    let total_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(ExperimentReport {
        schema_version: REPORT_SCHEMA_VERSION,
        convention: QUERY_CONVENTION.into(),
        config: config.clone(),
        bounds: config.bounds(),
        summary: Summary::of(&trials),
        timing: Some(Timing { total_ms, mean_trial_ms: if trials.is_empty() { 0.0 } else { total_ms / trials.len() as f64 } }),
        trials,
    })
}

/// Where a report goes: the config path, else the output directory.
pub fn report_path(config: &ExperimentConfig) -> PathBuf {
    config.output.clone().unwrap_or_else(|| {
        let dir = std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from);
        dir.join(format!("{}-{}-n{}-t{}.json", config.attack, config.construction.variant.name(), config.construction.n, config.t))
    })
}

/// Writes the JSON report and a CSV with one row per trial next to it.
pub fn write_report(report: &ExperimentReport, path: &Path) -> Result<PathBuf> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, report.to_json()?)?;
    let csv_path = path.with_extension("csv");
    fs::write(&csv_path, report.to_csv()?)?;
    Ok(csv_path)
}
