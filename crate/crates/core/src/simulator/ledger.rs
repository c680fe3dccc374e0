use std::collections::BTreeSet;

use serde::{Serialize, Serializer};

/// Which counter an oracle invocation is charged to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LedgerTag {
    EncryptionClassical,
    EncryptionQuantum,
    PublicFn,
    /// State synthesis from data already paid for.
    Internal,
}

/// Monotone per-run query counters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QueryLedger {
    classical_queries: u64,
    quantum_queries: u64,
    public_evals: u64,
    internal_evals: u64,
    grover_iterations: u64,
    simon_samples: u64,
    #[serde(serialize_with = "count_only")]
    distinct_classical_inputs: BTreeSet<u32>,
}

fn count_only<S: Serializer>(set: &BTreeSet<u32>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(set.len() as u64)
}

/// Counter differences between two snapshots of one ledger.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LedgerDelta {
    pub classical_queries: u64,
    pub quantum_queries: u64,
    pub public_evals: u64,
    pub internal_evals: u64,
    pub grover_iterations: u64,
    pub simon_samples: u64,
    pub distinct_classical_inputs: u64,
}

impl LedgerDelta {
    pub fn encryption_queries(&self) -> u64 {
        self.classical_queries + self.quantum_queries
    }
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&mut self, tag: LedgerTag, count: u64) {
        match tag {
            LedgerTag::EncryptionClassical => self.classical_queries += count,
            LedgerTag::EncryptionQuantum => self.quantum_queries += count,
            LedgerTag::PublicFn => self.public_evals += count,
            LedgerTag::Internal => self.internal_evals += count,
        }
    }

    /// One classical encryption query on `input`.
    pub fn record_classical(&mut self, input: u32) {
        self.classical_queries += 1;
        self.distinct_classical_inputs.insert(input);
    }

    pub fn add_grover_iterations(&mut self, r: u64) {
        self.grover_iterations += r;
    }

    pub fn add_simon_samples(&mut self, c: u64) {
        self.simon_samples += c;
    }

    pub fn classical_queries(&self) -> u64 {
        self.classical_queries
    }

    pub fn quantum_queries(&self) -> u64 {
        self.quantum_queries
    }

    pub fn public_evals(&self) -> u64 {
        self.public_evals
    }

    pub fn internal_evals(&self) -> u64 {
        self.internal_evals
    }

    pub fn grover_iterations(&self) -> u64 {
        self.grover_iterations
    }

    pub fn simon_samples(&self) -> u64 {
        self.simon_samples
    }

    pub fn distinct_classical_inputs(&self) -> u64 {
        self.distinct_classical_inputs.len() as u64
    }

    pub fn distinct_inputs(&self) -> &BTreeSet<u32> {
        &self.distinct_classical_inputs
    }

    /// `self - earlier`; `earlier` must be a snapshot of this ledger.
    pub fn since(&self, earlier: &QueryLedger) -> LedgerDelta {
        LedgerDelta {
            classical_queries: self.classical_queries - earlier.classical_queries,
            quantum_queries: self.quantum_queries - earlier.quantum_queries,
            public_evals: self.public_evals - earlier.public_evals,
            internal_evals: self.internal_evals - earlier.internal_evals,
            grover_iterations: self.grover_iterations - earlier.grover_iterations,
            simon_samples: self.simon_samples - earlier.simon_samples,
            distinct_classical_inputs: self.distinct_classical_inputs() - earlier.distinct_classical_inputs(),
        }
    }

    /// Adds every counter of `other`; distinct inputs are unioned.
    pub fn absorb(&mut self, other: &QueryLedger) {
        self.classical_queries += other.classical_queries;
        self.quantum_queries += other.quantum_queries;
        self.public_evals += other.public_evals;
        self.internal_evals += other.internal_evals;
        self.grover_iterations += other.grover_iterations;
        self.simon_samples += other.simon_samples;
        self.distinct_classical_inputs.extend(other.distinct_classical_inputs.iter().copied());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charges_route_to_tags() {
        let mut l = QueryLedger::new();
        l.charge(LedgerTag::EncryptionQuantum, 4);
        l.charge(LedgerTag::PublicFn, 8);
        let snap = l.clone();
        l.record_classical(3);
        l.record_classical(3);
        l.charge(LedgerTag::Internal, 1);
        let d = l.since(&snap);
        assert_eq!(d.classical_queries, 2);
        assert_eq!(d.distinct_classical_inputs, 1);
        assert_eq!(d.quantum_queries, 0);
        assert_eq!(l.quantum_queries(), 4);
        assert_eq!(l.public_evals(), 8);
        let json = serde_json::to_value(&l).unwrap();
        assert_eq!(json["distinct_classical_inputs"], 1);
    }
}
