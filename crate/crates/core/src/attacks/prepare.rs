use std::collections::HashMap;

use serde::Serialize;

use super::{AttackConfig, Backend};
use crate::periodics::{Func1, KeyedFunction};
use crate::simulator::{LedgerTag, OracleSpec, QState, QueryLedger, RegisterLayout};
use crate::util::mask;
use crate::{Error, Result};

/// Transcript of classical encryption queries; repeated inputs are free.
#[derive(Clone)]
pub struct ClassicalCache {
    oracle: Func1,
    values: HashMap<u32, u32>,
}

impl ClassicalCache {
    pub fn new(oracle: Func1) -> Self {
        Self { oracle, values: HashMap::new() }
    }

    /// Treats `known` as already queried, e.g. the transcript of an earlier stage.
    pub fn with_known(oracle: Func1, known: impl IntoIterator<Item = u32>) -> Self {
        let values = known.into_iter().map(|x| (x, oracle(x))).collect();
        Self { oracle, values }
    }

    pub fn query(&mut self, x: u32, ledger: &mut QueryLedger) -> u32 {
        let oracle = &self.oracle;
        *self.values.entry(x).or_insert_with(|| {
            ledger.record_classical(x);
            oracle(x)
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Known `(x, y)` pairs in increasing `x`.
    pub fn known_pairs(&self) -> Vec<(u32, u32)> {
        let mut v: Vec<_> = self.values.iter().map(|(&x, &y)| (x, y)).collect();
        v.sort_unstable();
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Q1Classical,
    Q2Superposition,
}

pub enum Representation {
    /// `⊗_j Σ_x |x⟩_j |G(x)⟩_j` over registers `x0.., y0..`.
    Statevector(QState),
    /// Lazy: amplitudes follow from the `G` table on demand.
    Table,
}

/// `c` copies of the superposition of the secret-oracle term of a decoupled family.
pub struct PreparedState {
    representation: Option<Representation>,
    table: Vec<u32>,
    pub provenance: Provenance,
    pub copies: u32,
    pub input_width: u32,
    pub output_width: u32,
    /// Ledger at the end of preparation.
    pub snapshot: QueryLedger,
}

impl PreparedState {
    /// Takes the statevector; a second take fails with `StaleState`.
    pub fn take_state(&mut self) -> Result<QState> {
        match self.representation.take() {
            Some(Representation::Statevector(s)) => Ok(s),
            Some(table @ Representation::Table) => {
                self.representation = Some(table);
                Err(Error::Config("prepared state is a table".into()))
            }
            None => Err(Error::StaleState),
        }
    }

    pub fn is_consumed(&self) -> bool {
        self.representation.is_none()
    }

    /// `G(x)` for every family input, masked to the kept output width.
    /// Tables are reusable.
    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn is_statevector(&self) -> bool {
        matches!(self.representation, Some(Representation::Statevector(_)))
    }
}

pub fn copy_names(c: u32) -> (Vec<String>, Vec<String>) {
    ((0..c).map(|j| format!("x{j}")).collect(), (0..c).map(|j| format!("y{j}")).collect())
}

/// Layout `x0, y0, x1, y1, ..` followed by `extra`.
pub fn copies_layout(c: u32, n: u32, m: u32, extra: &[(&str, u32)]) -> Result<RegisterLayout> {
    let (xs, ys) = copy_names(c);
    let mut spec: Vec<(String, u32)> = Vec::new();
    for j in 0..c as usize {
        spec.push((xs[j].clone(), n));
        spec.push((ys[j].clone(), m));
    }
    spec.extend(extra.iter().map(|(s, w)| (s.to_string(), *w)));
    RegisterLayout::new(&spec)
}

/// `⊗_j Σ_x |x⟩|table[x]⟩` with `extra` registers set to basis values.
pub fn synthesize(table: &[u32], c: u32, n: u32, m: u32, extra: &[(&str, u32, u32)]) -> Result<QState> {
    let widths: Vec<(&str, u32)> = extra.iter().map(|(s, w, _)| (*s, *w)).collect();
    let values: Vec<(&str, u32)> = extra.iter().map(|(s, _, v)| (*s, *v)).collect();
    let mut s = QState::basis(copies_layout(c, n, m, &widths)?, &values)?;
    let oracle = OracleSpec::from_table(n, m, LedgerTag::Internal, 0, table.to_vec()).with_charges(vec![]);
    let (xs, ys) = copy_names(c);
    for j in 0..c as usize {
        s.hadamard(&xs[j])?;
        s.apply_oracle(&oracle, &[&xs[j]], &ys[j], &mut QueryLedger::new())?;
    }
    Ok(s)
}

fn require_base(f: &KeyedFunction) -> Result<Func1> {
    if !f.is_decoupled() {
        return Err(Error::Config(format!("{} has no decoupled secret term to prepare", f.label)));
    }
    f.base_oracle.clone().ok_or_else(|| Error::Config(format!("{} has no base oracle", f.label)))
}

/// Q1 preparation: classical queries on every coset point, then synthesis.
pub fn prepare_psi_g_q1(
    f: &KeyedFunction,
    config: &AttackConfig,
    cache: &mut ClassicalCache,
    ledger: &mut QueryLedger,
) -> Result<PreparedState> {
    require_base(f)?;
    let (c, n, m) = (config.c_prime(), f.input_width, config.m_out());
    let table: Vec<u32> = (0..1u32 << n)
        .map(|x| f.coset.points(x).fold(0, |acc, p| acc ^ cache.query(p, ledger)) & mask(m))
        .collect();
    let representation = match config.backend {
        Backend::Statevector => {
            let s = synthesize(&table, c, n, m, &[])?;
            ledger.charge(LedgerTag::Internal, c as u64);
            Representation::Statevector(s)
        }
        Backend::Hybrid => Representation::Table,
    };
    Ok(PreparedState {
        representation: Some(representation),
        table,
        provenance: Provenance::Q1Classical,
        copies: c,
        input_width: n,
        output_width: m,
        snapshot: ledger.clone(),
    })
}

/// Q2 preparation: per copy, one superposition query for each of the `2^t` coset offsets.
pub fn prepare_psi_g_q2(f: &KeyedFunction, config: &AttackConfig, ledger: &mut QueryLedger) -> Result<PreparedState> {
    let base = require_base(f)?;
    let (c, n, m) = (config.c_prime(), f.input_width, config.m_out());
    let coset = f.coset;
    let table: Vec<u32> =
        (0..1u32 << n).map(|x| coset.points(x).fold(0, |acc, p| acc ^ base(p)) & mask(m)).collect();
    let representation = match config.backend {
        Backend::Statevector => {
            let mut s = QState::init(copies_layout(c, n, m, &[])?);
            let (xs, ys) = copy_names(c);
            for j in 0..c as usize {
                s.hadamard(&xs[j])?;
                for u in 0..1u32 << coset.t {
                    let b = base.clone();
                    let oracle = OracleSpec::new(n, m, LedgerTag::EncryptionQuantum, 1, move |x| b(coset.lift(x) | u) & mask(m));
                    s.apply_oracle(&oracle, &[&xs[j]], &ys[j], ledger)?;
                }
            }
            Representation::Statevector(s)
        }
        Backend::Hybrid => {
            ledger.charge(LedgerTag::EncryptionQuantum, (c as u64) << coset.t);
            Representation::Table
        }
    };
    Ok(PreparedState {
        representation: Some(representation),
        table,
        provenance: Provenance::Q2Superposition,
        copies: c,
        input_width: n,
        output_width: m,
        snapshot: ledger.clone(),
    })
}
