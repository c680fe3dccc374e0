use super::engine::{extend_final, first_batch, hybrid, Attempt, require_backend_fit, seeded, statevector_online, AttackSetup, Mode, Run};
use super::{AttackConfig, AttackKind, AttackResult, Backend};
use crate::periodics::KeyedFunction;
use crate::{Error, Result};

fn online(kind: AttackKind, mode: Mode, f: &KeyedFunction, config: &AttackConfig) -> Result<AttackResult> {
    let setup = AttackSetup::new(f, config)?;
    require_backend_fit(&setup, config.backend)?;
    let mut run = Run::new(kind, config);
    for attempt in 1..=config.max_retries {
        let before = run.ledger.clone();
        let (seed, mut rng) = seeded(&run, attempt);
        let mut a = match config.backend {
            Backend::Statevector => statevector_online(&setup, mode, &mut rng, &mut run.ledger)?,
            Backend::Hybrid => hybrid(&setup, mode, None, seed, &mut rng, &mut run.ledger)?,
        };
        extend_final(&setup, mode, config.backend, None, &mut a, &mut rng, &mut run.ledger)?;
        if let Some(result) = run.conclude(&setup, attempt, a, &before) {
            return Ok(result);
        }
    }
    unreachable!("the last attempt always concludes")
}

/// Grover over the index with a Simon rank test and its uncompute per round.
/// The result may be unverified; see [`grover_meets_simon`].
pub fn run_grover_meets_simon(f: &KeyedFunction, config: &AttackConfig) -> Result<AttackResult> {
    online(AttackKind::GroverMeetsSimon, Mode::Gms, f, config)
}

/// Amplitude amplification of the `c′`-fold Simon state of `F`; the test
/// reflects about the prepared state.
pub fn run_dedicated(f: &KeyedFunction, config: &AttackConfig) -> Result<AttackResult> {
    online(AttackKind::Dedicated, Mode::Dedicated, f, config)
}

pub fn grover_meets_simon(f: &KeyedFunction, config: &AttackConfig) -> Result<AttackResult> {
    verified_or_exhausted(run_grover_meets_simon(f, config)?)
}

pub fn dedicated_attack(f: &KeyedFunction, config: &AttackConfig) -> Result<AttackResult> {
    verified_or_exhausted(run_dedicated(f, config)?)
}

pub(crate) fn verified_or_exhausted(r: AttackResult) -> Result<AttackResult> {
    if r.verified {
        Ok(r)
    } else {
        Err(Error::RetriesExhausted { attempts: r.attempts })
    }
}

/// Simon's algorithm on `F(i, ·)` at the smallest periodic index of the
/// report: the superposition-query baseline with the index given.
pub fn simon_attack(f: &KeyedFunction, config: &AttackConfig) -> Result<AttackResult> {
    let setup = AttackSetup::new(f, config)?;
    let index = *setup
        .report
        .periodic_keys()
        .first()
        .ok_or_else(|| Error::Config(format!("{} has no periodic index", f.label)))?;
    let mut run = Run::new(AttackKind::Simon, config);
    let mut setup = setup;
    setup.iterations = 0;
    for attempt in 1..=config.max_retries {
        let before = run.ledger.clone();
        let (_, mut rng) = seeded(&run, attempt);
        let mut a = Attempt { index, vectors: Vec::new() };
        a.vectors = first_batch(&setup, index, config.backend, &mut rng, &mut run.ledger)?;
        extend_final(&setup, Mode::Gms, config.backend, None, &mut a, &mut rng, &mut run.ledger)?;
        if let Some(result) = run.conclude(&setup, attempt, a, &before) {
            return Ok(result);
        }
    }
    unreachable!("the last attempt always concludes")
}
