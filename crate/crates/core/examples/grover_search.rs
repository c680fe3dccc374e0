//! Grover search over 8 bits with two marked items.
//!
//! `cargo run --example grover_search`

use qsymlab::attacks::{grover_search, iterations, success_probability, Backend, IterationPolicy};
use qsymlab::simulator::QueryLedger;
use qsymlab::util::rng_from_seed;

fn main() -> qsymlab::Result<()> {
    let bits = 8;
    let marked = [0x3a, 0xc5];
    let r = iterations(IterationPolicy::ClosedForm, bits, 2);
    println!("r = {r}, predicted success {:.4}", success_probability(bits, 2, r));

    for backend in [Backend::Statevector, Backend::Hybrid] {
        let mut rng = rng_from_seed(7);
        let mut ledger = QueryLedger::new();
        let trials = 200;
        let hits = (0..trials)
            .filter(|_| {
                let got = grover_search(&|k| marked.contains(&k), bits, 2, IterationPolicy::ClosedForm, backend, &mut rng, &mut ledger)
                    .expect("search runs");
                marked.contains(&got.bits())
            })
            .count();
        println!("{backend:>11}: {hits}/{trials} marked, {} iterations charged", ledger.grover_iterations());
    }
    Ok(())
}
