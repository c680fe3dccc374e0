//! Ledger-derived cost table for the truncated attacks on one SoEM22 instance.
//!
//! `cargo run --release --example compare_table`

use qsymlab::attacks::AttackKind;
use qsymlab::constructions::Variant;
use qsymlab::harness::{compare_attacks, run_experiment, ConstructionSpec, ExperimentConfig};

fn main() -> qsymlab::Result<()> {
    let base = {
        let mut c = ExperimentConfig::new(ConstructionSpec::new(Variant::SoEM22, 8), AttackKind::OfflineDedicatedQ1);
        c.t = 2;
        c.trials = 50;
        c.seed_base = 8;
        c
    };
    let kinds = [AttackKind::OfflineDedicatedQ1, AttackKind::OfflineDedicatedQ2, AttackKind::Dedicated];
    let configs: Vec<_> = kinds.iter().map(|&attack| ExperimentConfig { attack, ..base.clone() }).collect();
    print!("{}", compare_attacks(&configs)?.to_markdown());

    let report = run_experiment(&base)?;
    let s = report.summary;
    println!("\n{} over {} trials: {:.3} [{:.3}, {:.3}]", base.attack, s.trials, s.success_rate, s.wilson_low, s.wilson_high);
    Ok(())
}
