//! Grover-meets-Simon on a toy FX-style Even-Mansour family.
//!
//! `cargo run --release --example grover_meets_simon`

use qsymlab::attacks::{run_grover_meets_simon, AttackConfig, Backend};
use qsymlab::constructions::{CipherInstance, Variant};
use qsymlab::periodics::family_for;

fn main() -> qsymlab::Result<()> {
    // the statevector run keeps 3 copies of a 3+2 qubit Simon register
    for (backend, n, c, m) in [(Backend::Hybrid, 4, None, None), (Backend::Statevector, 3, Some(3), Some(2))] {
        let inst = CipherInstance::builder(Variant::EvenMansour, n).kappa(3).seed(5).build()?;
        let f = family_for(&inst)?;
        let secret = inst.secret_state();
        let mut cfg = AttackConfig::for_family(&f);
        cfg.backend = backend;
        cfg.c_override = c;
        cfg.m_trunc = m;
        cfg.rng_seed = 1;
        let r = run_grover_meets_simon(&f, &cfg)?;
        println!(
            "{backend:>11} n={n}: secret ({:03b}, {:0w$b}), found ({}, {}) verified {} in {} attempt(s), {} quantum queries, c′={}",
            secret.base,
            secret.period,
            r.recovered_index,
            r.recovered_period,
            r.verified,
            r.attempts,
            r.ledger.quantum_queries(),
            r.c_prime,
            w = n as usize
        );
        for w in &r.warnings {
            println!("             note: {w}");
        }
    }
    Ok(())
}
