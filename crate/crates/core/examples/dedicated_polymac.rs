//! Truncated attack on PolyMAC with superposition queries.
//!
//! `cargo run --release --example dedicated_polymac`

use qsymlab::attacks::{run_dedicated, AttackConfig};
use qsymlab::constructions::{CipherInstance, Variant};
use qsymlab::periodics::family_for;

fn main() -> qsymlab::Result<()> {
    let t = 1;
    let trials = 40;
    let mut verified = 0;
    let mut queries = 0;
    for seed in 0..trials {
        let inst = CipherInstance::builder(Variant::PolyMAC, 5).seed(seed).truncation_guard(t, None).build()?;
        let f = family_for(&inst)?;
        let mut cfg = AttackConfig::for_family(&f);
        cfg.t = t;
        cfg.rng_seed = seed;
        let r = run_dedicated(&f, &cfg)?;
        verified += r.verified as u32;
        queries += r.ledger.quantum_queries();
    }
    println!("PolyMAC w=5 t={t}: {verified}/{trials} verified, mean {} quantum queries", queries / trials);
    Ok(())
}
