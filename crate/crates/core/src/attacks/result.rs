use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitmath::BitVec;
use crate::simulator::{LedgerDelta, QueryLedger};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    Simon,
    GroverMeetsSimon,
    OfflineSimon,
    Dedicated,
    OfflineDedicatedQ1,
    OfflineDedicatedQ2,
}

impl AttackKind {
    pub const ALL: [AttackKind; 6] = [
        AttackKind::Simon,
        AttackKind::GroverMeetsSimon,
        AttackKind::OfflineSimon,
        AttackKind::Dedicated,
        AttackKind::OfflineDedicatedQ1,
        AttackKind::OfflineDedicatedQ2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttackKind::Simon => "simon",
            AttackKind::GroverMeetsSimon => "grover_meets_simon",
            AttackKind::OfflineSimon => "offline_simon",
            AttackKind::Dedicated => "dedicated",
            AttackKind::OfflineDedicatedQ1 => "offline_dedicated_q1",
            AttackKind::OfflineDedicatedQ2 => "offline_dedicated_q2",
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttackKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.replace('-', "_").to_ascii_lowercase();
        AttackKind::ALL
            .into_iter()
            .find(|k| k.name() == s || (s == "gms" && *k == AttackKind::GroverMeetsSimon))
            .ok_or_else(|| Error::Parse(format!("unknown attack `{s}`")))
    }
}

/// Full index and period after the tail bits are recovered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FullRecovery {
    pub index: BitVec,
    pub period: BitVec,
    /// Equivalent cipher key `(period, base)`; absent for PolyMAC.
    pub equivalent_key: Option<(BitVec, BitVec)>,
    /// Equivalent key reproduces the cipher on every input.
    pub reencrypts: bool,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AttackResult {
    pub attack: AttackKind,
    pub recovered_index: BitVec,
    pub recovered_period: BitVec,
    pub verified: bool,
    pub second_stage: Option<FullRecovery>,
    pub ledger: QueryLedger,
    /// Ledger at the end of the last preparation, when one exists.
    pub prep_snapshot: Option<QueryLedger>,
    /// Counter change between preparation end and the index measurement.
    pub offline_delta: Option<LedgerDelta>,
    pub attempt_deltas: Vec<LedgerDelta>,
    pub attempts: u32,
    pub iterations: u64,
    pub c_prime: u32,
    pub marked_hint: u64,
    pub warnings: Vec<String>,
    /// Excluded from reproducibility comparisons.
    #[serde(skip)]
    pub wall_time: std::time::Duration,
}

impl AttackResult {
    /// Success for end-to-end runs: the second stage when present.
    pub fn full_success(&self) -> bool {
        self.verified && self.second_stage.as_ref().is_none_or(|s| s.verified && (s.equivalent_key.is_none() || s.reencrypts))
    }
}
