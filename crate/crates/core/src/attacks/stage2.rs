use std::sync::Arc;

use super::offline::run_offline;
use super::online::run_grover_meets_simon;
use super::prepare::ClassicalCache;
use super::{AttackConfig, AttackKind, AttackResult, Backend, FullRecovery};
use crate::bitmath::BitVec;
use crate::constructions::{CipherInstance, Variant};
use crate::periodics::{Coset, Func1, Func2, KeyedFunction, Lift, Structure};
use crate::simulator::QueryLedger;
use crate::util::{derive_seed, mask};
use crate::{Error, Result};

/// Qubit budget for the statevector tail search.
const STAGE2_QUBITS: u32 = 20;
/// Known plaintext pairs used to pick the equivalent key.
const KEY_CHECK_PAIRS: usize = 8;

/// Recovers the low `t` bits of the index and period after a verified first
/// stage on the truncated family.
///
/// The search restricts `f` to the `(t+1)`-dimensional space spanned by the
/// recovered high period bits and the low `t` bits, where the full period
/// lives, and searches the `t` unknown index bits. A composite split adds one
/// index bit choosing between the two completions of the high index.
pub fn recover_remaining_bits(
    f: &KeyedFunction,
    instance: Option<&CipherInstance>,
    first: &AttackResult,
    config: &AttackConfig,
) -> Result<AttackResult> {
    let t = config.t;
    if t == 0 && config.p_split.is_none() {
        return Ok(first.clone());
    }
    if !first.verified {
        return Err(Error::FirstStageUnverified);
    }
    let n = f.input_width;
    let (idx, s) = (first.recovered_index.bits(), first.recovered_period.bits());
    let (cands, s_high) = match config.p_split {
        Some(p) => {
            let jw = n - t - p;
            let (i, j) = (idx >> jw, idx & mask(jw));
            (vec![i, i ^ j], (s << jw) | j)
        }
        None => (vec![idx], s),
    };
    let additive = f.key_additive || config.p_split.is_some();
    let key_width = if additive { t + (cands.len() as u32 - 1) } else { 0 };
    let full_index: Arc<dyn Fn(u32) -> u32 + Send + Sync> = if additive {
        Arc::new(move |k| (cands[(k >> t) as usize] << t) | (k & mask(t)))
    } else {
        Arc::new(move |_| idx)
    };
    let coset = Coset { t: 0, lift: Lift::Line { dir: s_high << t, low: t } };
    let restricted = restrict(f, key_width, t + 1, full_index.clone(), coset);

    let mut sub = AttackConfig::for_family(&restricted);
    sub.tau = config.tau;
    sub.backend = config.backend;
    sub.model = config.model;
    sub.iteration_policy = config.iteration_policy;
    sub.marked_hint = Some(1);
    sub.rng_seed = derive_seed(config.rng_seed, 0x0005_7472);
    sub.max_retries = config.max_retries;
    if config.backend == Backend::Statevector {
        let per_copy = 2 * (t + 1);
        sub.c_override = Some(sub.c_prime().min((STAGE2_QUBITS - key_width) / per_copy).max(t + 2));
    }

    let known = first.ledger.distinct_inputs().iter().copied().collect::<Vec<_>>();
    let mut cache = f.base_oracle.clone().map(|b| ClassicalCache::with_known(b, known));
    let tail = match (&restricted.structure, cache.as_mut()) {
        (Structure::Decoupled { .. }, Some(cache)) => run_offline(first.attack, &restricted, &sub, cache)?.0,
        _ => run_grover_meets_simon(&restricted, &sub)?,
    };

    let index = full_index(tail.recovered_index.bits());
    let period = coset.lift(tail.recovered_period.bits());
    let periodic = period != 0 && (0..1u32 << n).all(|x| f.eval(index, x) == f.eval(index, x ^ period));
    let mut extra = QueryLedger::new();
    let (equivalent_key, reencrypts) = match instance {
        Some(inst) if inst.variant() != Variant::PolyMAC && tail.verified => {
            let base = f.base_oracle.clone().unwrap_or_else(|| {
                let e = inst.clone();
                Arc::new(move |x| e.eval(x)) as Func1
            });
            let cache = cache.get_or_insert_with(|| ClassicalCache::new(base));
            equivalent_key(inst, index, period, additive, cache, &mut extra)
        }
        _ => (None, false),
    };

    let mut out = first.clone();
    out.ledger.absorb(&tail.ledger);
    out.ledger.absorb(&extra);
    out.warnings.extend(tail.warnings.iter().map(|w| format!("tail: {w}")));
    out.wall_time += tail.wall_time;
    out.second_stage = Some(FullRecovery {
        index: BitVec::masked(f.key_width, index),
        period: BitVec::masked(n, period),
        equivalent_key: equivalent_key.map(|(a, b)| (BitVec::masked(n, a), BitVec::masked(f.key_width, b))),
        reencrypts,
        verified: tail.verified && periodic,
    });
    Ok(out)
}

/// `f'(k, y) = f(full_index(k), lift(y))`, keeping the decoupled split.
fn restrict(
    f: &KeyedFunction,
    key_width: u32,
    input_width: u32,
    full_index: Arc<dyn Fn(u32) -> u32 + Send + Sync>,
    coset: Coset,
) -> KeyedFunction {
    let inner = f.eval_fn();
    let fi = full_index.clone();
    let mut out = KeyedFunction::from_fn(key_width, input_width, f.output_width, move |k, y| inner(fi(k), coset.lift(y)));
    if let Structure::Decoupled { g1, p, .. } = &f.structure {
        let (g, pp) = (g1.clone(), p.clone());
        let g1r: Func1 = Arc::new(move |y| g(coset.lift(y)));
        let pr: Func2 = Arc::new(move |k, y| pp(full_index(k), coset.lift(y)));
        out.structure = Structure::Decoupled { g1: g1r, p: pr, sum: None };
    }
    out.oracle_cost = f.oracle_cost;
    out.public_cost = f.public_cost;
    out.base_oracle = f.base_oracle.clone();
    out.coset = coset;
    out.label = format!("{}|tail", f.label);
    out
}

/// Picks the base key consistent with known plaintext pairs; `reencrypts`
/// checks it on every input.
fn equivalent_key(
    inst: &CipherInstance,
    index: u32,
    period: u32,
    additive: bool,
    cache: &mut ClassicalCache,
    ledger: &mut QueryLedger,
) -> (Option<(u32, u32)>, bool) {
    let width = inst.input_width();
    if cache.len() < KEY_CHECK_PAIRS {
        for x in 0..(KEY_CHECK_PAIRS as u32).min(1 << width) {
            cache.query(x, ledger);
        }
    }
    let pairs: Vec<(u32, u32)> = cache.known_pairs().into_iter().take(KEY_CHECK_PAIRS).collect();
    let (x0, y0) = pairs[0];
    let bases = if additive { vec![index, index ^ period] } else { vec![index] };
    for b in bases {
        let Some(eq) = inst.equivalent_cipher(period, b, x0, y0) else { continue };
        if pairs.iter().all(|&(x, y)| eq(x) == y) {
            let all = (0..1u32 << width).all(|x| eq(x) == inst.eval(x));
            return (Some((period, b)), all);
        }
    }
    (None, false)
}

/// First stage plus tail recovery for the attack kinds with a truncated stage.
pub fn full_key_attack(
    f: &KeyedFunction,
    instance: Option<&CipherInstance>,
    first: AttackResult,
    config: &AttackConfig,
) -> Result<AttackResult> {
    if !first.verified {
        return Ok(first);
    }
    if matches!(first.attack, AttackKind::Simon) {
        return Ok(first);
    }
    recover_remaining_bits(f, instance, &first, config)
}
