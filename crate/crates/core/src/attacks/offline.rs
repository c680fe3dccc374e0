use super::engine::{extend_final, hybrid, require_backend_fit, seeded, statevector_offline, AttackSetup, Mode, Run};
use super::online::verified_or_exhausted;
use super::prepare::{prepare_psi_g_q1, prepare_psi_g_q2, ClassicalCache, PreparedState};
use super::{AttackConfig, AttackKind, AttackResult, Backend, Model};
use crate::periodics::KeyedFunction;
use crate::{Error, Result};

/// Offline attack on a decoupled family: prepare the secret term once, then
/// search the index with public evaluations only.
///
/// Statevector preparations are consumed by an attempt and rebuilt for the
/// next one; Q1 rebuilds reuse the classical transcript.
pub fn run_offline(kind: AttackKind, f: &KeyedFunction, config: &AttackConfig, cache: &mut ClassicalCache) -> Result<(AttackResult, PreparedState)> {
    let setup = AttackSetup::new(f, config)?;
    require_backend_fit(&setup, config.backend)?;
    let mut run = Run::new(kind, config);
    let mut prepared: Option<PreparedState> = None;
    for attempt in 1..=config.max_retries {
        let before = run.ledger.clone();
        if prepared.as_ref().is_none_or(|p| p.is_consumed()) {
            let fresh = match config.model {
                Model::Q1 => prepare_psi_g_q1(&setup.family, config, cache, &mut run.ledger)?,
                Model::Q2 => prepare_psi_g_q2(&setup.family, config, &mut run.ledger)?,
            };
            run.prep_snapshot = Some(fresh.snapshot.clone());
            prepared = Some(fresh);
        }
        let state = prepared.as_mut().expect("prepared above");
        let at_prep = run.ledger.clone();
        let (seed, mut rng) = seeded(&run, attempt);
        let mut a = match config.backend {
            Backend::Statevector => statevector_offline(&setup, state, &mut rng, &mut run.ledger)?,
            Backend::Hybrid => hybrid(&setup, Mode::Offline, Some(state), seed, &mut rng, &mut run.ledger)?,
        };
        run.offline_delta = Some(run.ledger.since(&at_prep));
        let table = state.table().to_vec();
        extend_final(&setup, Mode::Offline, config.backend, Some(&table), &mut a, &mut rng, &mut run.ledger)?;
        if let Some(result) = run.conclude(&setup, attempt, a, &before) {
            return Ok((result, prepared.expect("prepared above")));
        }
    }
    unreachable!("the last attempt always concludes")
}

fn base_cache(f: &KeyedFunction) -> Result<ClassicalCache> {
    let base = f.base_oracle.clone().ok_or_else(|| Error::Config(format!("{} has no secret oracle term", f.label)))?;
    Ok(ClassicalCache::new(base))
}

/// Result may be unverified; see [`offline_dedicated_attack`].
pub fn run_offline_dedicated(f: &KeyedFunction, config: &AttackConfig) -> Result<AttackResult> {
    let kind = match config.model {
        Model::Q1 => AttackKind::OfflineDedicatedQ1,
        Model::Q2 => AttackKind::OfflineDedicatedQ2,
    };
    Ok(run_offline(kind, f, config, &mut base_cache(f)?)?.0)
}

pub fn offline_dedicated_attack(f: &KeyedFunction, config: &AttackConfig) -> Result<AttackResult> {
    verified_or_exhausted(run_offline_dedicated(f, config)?)
}

/// The untruncated offline search: `t = 0`.
pub fn run_offline_simon(f: &KeyedFunction, config: &AttackConfig) -> Result<AttackResult> {
    if config.t != 0 || config.p_split.is_some() {
        return Err(Error::Config("offline Simon runs without truncation".into()));
    }
    Ok(run_offline(AttackKind::OfflineSimon, f, config, &mut base_cache(f)?)?.0)
}

pub fn offline_simon(f: &KeyedFunction, config: &AttackConfig) -> Result<AttackResult> {
    verified_or_exhausted(run_offline_simon(f, config)?)
}
