//! Offline Simon in both query models: classical or superposition preparation,
//! then a search that touches only the public permutation.
//!
//! `cargo run --example offline_simon`

use qsymlab::attacks::{run_offline_simon, AttackConfig, Model};
use qsymlab::constructions::{CipherInstance, Variant};
use qsymlab::periodics::family_for;

fn main() -> qsymlab::Result<()> {
    let inst = CipherInstance::builder(Variant::EvenMansour, 5).kappa(4).seed(2).build()?;
    let f = family_for(&inst)?;
    for model in [Model::Q1, Model::Q2] {
        let mut cfg = AttackConfig::for_family(&f);
        cfg.model = model;
        cfg.rng_seed = 3;
        let r = run_offline_simon(&f, &cfg)?;
        let offline = r.offline_delta.expect("offline runs record their search delta");
        println!(
            "{model:?}: index {} period {} verified {} after {} attempt(s); preparation {} classical / {} quantum; search used {} encryption queries",
            r.recovered_index,
            r.recovered_period,
            r.verified,
            r.attempts,
            r.prep_snapshot.as_ref().map_or(0, |s| s.classical_queries()),
            r.prep_snapshot.as_ref().map_or(0, |s| s.quantum_queries()),
            offline.encryption_queries()
        );
    }
    Ok(())
}
