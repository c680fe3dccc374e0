use serde::{Deserialize, Serialize};

use super::experiment::{run_trial, ExperimentConfig};
use crate::attacks::{AttackKind, AttackSetup, Model};
use crate::periodics::family_for;
use crate::{Error, Result};

/// One attack run, costed from its ledger.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub attack: AttackKind,
    pub model: Model,
    pub iterations: u64,
    pub c_prime: u32,
    pub classical_queries: u64,
    pub quantum_queries: u64,
    /// Quantum encryption queries charged before the index search.
    pub prep_quantum_queries: u64,
    pub public_evals: u64,
    /// `r · ((n−t)³ + 2c′ · public terms)` cost units.
    pub time_proxy: u64,
    /// `(κ−t) + (n−t)c′ + mc′ + 1`, the register convention.
    pub qubits_convention: u32,
    /// Index, copy and flag registers actually simulated.
    pub qubits_layout: u32,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

/// Runs trial 0 of every config on one shared instance.
pub fn compare_attacks(configs: &[ExperimentConfig]) -> Result<ComparisonTable> {
    let first = configs.first().ok_or_else(|| Error::Config("no configurations to compare".into()))?;
    let reference = first.instance(0)?.descriptor(false);
    let mut rows = Vec::with_capacity(configs.len());
    for config in configs {
        let inst = config.instance(0)?;
        if inst.descriptor(false) != reference {
            return Err(Error::InstanceMismatch(format!(
                "{} targets a different instance than {}",
                config.attack, first.attack
            )));
        }
        let f = family_for(&inst)?;
        let (_, result) = run_trial(config, 0)?;
        let ac = config.attack_config(&f, config.trial_seed(0));
        let setup = AttackSetup::new(&f, &ac)?;
        let (k, n, m, c) = (setup.key_width, setup.input_width, ac.m, setup.copies);
        let per_iteration = (n as u64).pow(3) + 2 * c as u64 * setup.family.public_cost;
        rows.push(ComparisonRow {
            attack: config.attack,
            model: config.model(),
            iterations: result.iterations,
            c_prime: c,
            classical_queries: result.ledger.classical_queries(),
            quantum_queries: result.ledger.quantum_queries(),
            prep_quantum_queries: result.prep_snapshot.as_ref().map_or(0, |s| s.quantum_queries()),
            public_evals: result.ledger.public_evals(),
            time_proxy: result.iterations * per_iteration,
            qubits_convention: k + n * c + m * c + 1,
            qubits_layout: k + c * (n + setup.output_width) + 1,
            verified: result.verified,
        });
    }
    Ok(ComparisonTable { rows })
}

const HEADER: [&str; 12] = [
    "attack",
    "model",
    "iterations",
    "c′",
    "classical",
    "quantum",
    "prep quantum",
    "public evals",
    "time proxy",
    "qubits (register convention)",
    "qubits (layout)",
    "verified",
];

impl ComparisonRow {
    fn cells(&self) -> [String; 12] {
        [
            self.attack.to_string(),
            format!("{:?}", self.model),
            self.iterations.to_string(),
            self.c_prime.to_string(),
            self.classical_queries.to_string(),
            self.quantum_queries.to_string(),
            self.prep_quantum_queries.to_string(),
            self.public_evals.to_string(),
            self.time_proxy.to_string(),
            self.qubits_convention.to_string(),
            self.qubits_layout.to_string(),
            self.verified.to_string(),
        ]
    }
}

impl ComparisonTable {
    pub fn to_markdown(&self) -> String {
        let mut out = format!("| {} |\n|{}\n", HEADER.join(" | "), "---|".repeat(HEADER.len()));
        for row in &self.rows {
            out.push_str(&format!("| {} |\n", row.cells().join(" | ")));
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(HEADER)?;
        for row in &self.rows {
            w.write_record(row.cells())?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
