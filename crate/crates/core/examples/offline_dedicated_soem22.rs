//! Full-key recovery on SoEM22 in the classical-query model: truncated offline
//! search for the high key bits, then the tail search and an equivalent key.
//!
//! `cargo run --release --example offline_dedicated_soem22`

use qsymlab::attacks::{full_key_attack, offline_dedicated_attack, AttackConfig};
use qsymlab::constructions::{CipherInstance, Variant};
use qsymlab::periodics::family_for;

fn main() -> qsymlab::Result<()> {
    let (n, t) = (8, 2);
    let inst = CipherInstance::builder(Variant::SoEM22, n).seed(21).truncation_guard(t, None).build()?;
    let f = family_for(&inst)?;
    let mut cfg = AttackConfig::for_family(&f);
    cfg.t = t;
    cfg.rng_seed = 4;

    let first = offline_dedicated_attack(&f, &cfg)?;
    println!(
        "high bits: index {} period {} (r={}, c′={}, {} classical queries)",
        first.recovered_index,
        first.recovered_period,
        first.iterations,
        first.c_prime,
        first.ledger.classical_queries()
    );
    let full = full_key_attack(&f, Some(&inst), first, &cfg)?;
    let tail = full.second_stage.as_ref().expect("t > 0 runs a second stage");
    println!("full: index {} period {} verified {}", tail.index, tail.period, tail.verified);
    if let Some((a, b)) = tail.equivalent_key {
        println!("equivalent key ({a}, {b}) reencrypts every input: {}", tail.reencrypts);
    }
    let secret = inst.secret_state();
    println!("secret period {:08b}", secret.period);
    Ok(())
}
