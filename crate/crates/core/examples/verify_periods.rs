//! Exhaustive period check of every construction against its analytic prediction.
//!
//! `cargo run --example verify_periods`

use qsymlab::constructions::{CipherInstance, Variant};
use qsymlab::periodics::{brute_force_periods, build_truncated_fl, family_for, predict, TruncationParams};

fn main() -> qsymlab::Result<()> {
    let variants = [
        (Variant::EvenMansour, 5),
        (Variant::SoEM22, 6),
        (Variant::XopEM, 6),
        (Variant::SUMPIP, 6),
        (Variant::DSSoEM, 6),
        (Variant::TPPPRF, 6),
        (Variant::PolyMAC, 4),
    ];
    for (variant, n) in variants {
        let inst = CipherInstance::builder(variant, n).seed(1).truncation_guard(1, None).build()?;
        let f = family_for(&inst)?;
        let plain = brute_force_periods(&f)?;
        let exact = plain.diff(&predict(&inst, None)).is_exact();
        let tp = TruncationParams::new(1);
        let truncated = brute_force_periods(&build_truncated_fl(&f, tp)?)?;
        let diff = truncated.diff(&predict(&inst, Some(tp)));
        println!(
            "{:>12}: periodic indices {:?}; prediction exact {exact}; truncated t=1 {:?}, unexpected {:?}",
            variant.name(),
            plain.periodic_keys(),
            truncated.periodic_keys(),
            diff.unexpected
        );
    }
    Ok(())
}
