//! Time/data tradeoff of the TPP-PRF split attack.
//!
//! `cargo run --release --example tpp_tradeoff`

use qsymlab::attacks::{offline_dedicated_attack, AttackConfig};
use qsymlab::constructions::{CipherInstance, Variant};
use qsymlab::harness::{theoretical_bounds, TradeoffExponents};
use qsymlab::periodics::family_for;

fn main() -> qsymlab::Result<()> {
    let (n, t) = (8, 1);
    let e = TradeoffExponents::balanced(n, t);
    println!("balanced point: p = {}, data 2^{}, time 2^{}, 2·time + data = {}", e.balanced_p, e.data, e.time, e.identity);
    println!(" p | data exp | time exp | classical queries | iterations | verified");
    // p = 1 leaves a one-bit input, where a period-1 row is a constant row
    for p in 2..=n - t - 1 {
        let inst = CipherInstance::builder(Variant::TPPPRF, n).seed(p as u64).truncation_guard(t, Some(p)).build()?;
        let f = family_for(&inst)?;
        let mut cfg = AttackConfig::for_family(&f);
        cfg.t = t;
        cfg.p_split = Some(p);
        cfg.rng_seed = 2;
        let b = theoretical_bounds(n, f.key_width, t, cfg.tau, Some(p))?;
        let e = b.tradeoff.expect("split bounds carry exponents");
        let (queries, r, ok) = match offline_dedicated_attack(&f, &cfg) {
            Ok(res) => (res.ledger.distinct_classical_inputs(), res.iterations, true),
            Err(_) => (b.q1_classical_queries, 0, false),
        };
        println!("{p:>2} | {:>8} | {:>8} | {queries:>17} | {r:>10} | {ok}", e.data, e.time);
    }
    Ok(())
}
