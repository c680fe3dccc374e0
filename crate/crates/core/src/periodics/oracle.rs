use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{KeyedFunction, Prediction};
use crate::bitmath::BitVec;
use crate::{Error, Result};

/// Cap on `key_width + input_width` for exhaustive enumeration.
pub const ENUMERATION_LIMIT: u32 = 24;

/// Ground truth for one index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KeyPeriods {
    /// Every non-zero period, ascending.
    Periodic(Vec<u32>),
    /// `f(i, ·)` is constant; listed apart from genuine periods.
    Constant,
    Aperiodic,
}

/// Exhaustive period map of a keyed family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodReport {
    pub key_width: u32,
    pub input_width: u32,
    pub periodic: BTreeMap<u32, Vec<u32>>,
    pub constant_keys: Vec<u32>,
}

/// Disagreement between a report and a prediction; empty when exact.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PredictionDiff {
    pub missing: Vec<u32>,
    pub unexpected: Vec<u32>,
    pub wrong_period: Vec<(u32, Vec<u32>)>,
}

impl PredictionDiff {
    pub fn is_exact(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty() && self.wrong_period.is_empty()
    }
}

fn classify(table: &[u32]) -> KeyPeriods {
    let y0 = table[0];
    if table.iter().all(|&y| y == y0) {
        return KeyPeriods::Constant;
    }
    // any period s must satisfy f(s) = f(0)
    let periods: Vec<u32> = (1..table.len())
        .filter(|&s| table[s] == y0)
        .filter(|&s| (0..table.len()).all(|x| table[x] == table[x ^ s]))
        .map(|s| s as u32)
        .collect();
    if periods.is_empty() {
        KeyPeriods::Aperiodic
    } else {
        KeyPeriods::Periodic(periods)
    }
}

/// Every non-zero `s` with `f(i, x) = f(i, x ⊕ s)` for all `x`, per index.
pub fn brute_force_periods(f: &KeyedFunction) -> Result<PeriodReport> {
    let bits = f.key_width + f.input_width;
    if bits > ENUMERATION_LIMIT {
        return Err(Error::EnumerationBudget { bits, limit: ENUMERATION_LIMIT });
    }
    let rows: Vec<(u32, KeyPeriods)> =
        (0..1u32 << f.key_width).into_par_iter().map(|i| (i, classify(&f.table(i)))).collect();
    let mut periodic = BTreeMap::new();
    let mut constant_keys = Vec::new();
    for (i, k) in rows {
        match k {
            KeyPeriods::Periodic(s) => {
                periodic.insert(i, s);
            }
            KeyPeriods::Constant => constant_keys.push(i),
            KeyPeriods::Aperiodic => {}
        }
    }
    Ok(PeriodReport { key_width: f.key_width, input_width: f.input_width, periodic, constant_keys })
}

impl PeriodReport {
    pub fn periodic_keys(&self) -> Vec<u32> {
        self.periodic.keys().copied().collect()
    }

    pub fn periods_of(&self, i: u32) -> KeyPeriods {
        if let Some(s) = self.periodic.get(&i) {
            KeyPeriods::Periodic(s.clone())
        } else if self.constant_keys.binary_search(&i).is_ok() {
            KeyPeriods::Constant
        } else {
            KeyPeriods::Aperiodic
        }
    }

    /// `s ≠ 0` is a period of `f(i, ·)`.
    pub fn confirms(&self, i: u32, s: u32) -> bool {
        self.periodic.get(&i).is_some_and(|ps| ps.binary_search(&s).is_ok())
    }

    pub fn diff(&self, pred: &Prediction) -> PredictionDiff {
        let mut d = PredictionDiff::default();
        for &g in &pred.good_indices {
            match self.periodic.get(&g) {
                None => d.missing.push(g),
                Some(ps) if ps != &[pred.period] => d.wrong_period.push((g, ps.clone())),
                Some(_) => {}
            }
        }
        d.unexpected = self.periodic.keys().filter(|k| !pred.good_indices.contains(k)).copied().collect();
        d
    }

    pub fn to_json(&self, pred: Option<&Prediction>) -> Value {
        let kb = |k: u32| BitVec::masked(self.key_width, k).to_string();
        let xb = |s: u32| BitVec::masked(self.input_width, s).to_string();
        let periodic: serde_json::Map<String, Value> = self
            .periodic
            .iter()
            .map(|(k, ps)| (kb(*k), Value::from(ps.iter().map(|&s| xb(s)).collect::<Vec<_>>())))
            .collect();
        let mut out = json!({
            "key_width": self.key_width,
            "input_width": self.input_width,
            "periodic": periodic,
            "constant_keys": self.constant_keys.iter().map(|&k| kb(k)).collect::<Vec<_>>(),
        });
        if let Some(p) = pred {
            let d = self.diff(p);
            out["prediction"] = json!({
                "good_indices": p.good_indices.iter().map(|&k| kb(k)).collect::<Vec<_>>(),
                "period": xb(p.period),
            });
            out["diff"] = json!({
                "exact": d.is_exact(),
                "missing": d.missing.iter().map(|&k| kb(k)).collect::<Vec<_>>(),
                "unexpected": d.unexpected.iter().map(|&k| kb(k)).collect::<Vec<_>>(),
                "wrong_period": d.wrong_period.iter().map(|(k, ps)| json!({
                    "index": kb(*k),
                    "periods": ps.iter().map(|&s| xb(s)).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
        }
        out
    }
}
