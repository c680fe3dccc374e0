//! Recovers a planted period with Simon's algorithm on both backends.
//!
//! `cargo run --example simon_period`

use rand::seq::SliceRandom;
use rand::Rng;

use qsymlab::attacks::{simon_recover, Backend, SimonProblem};
use qsymlab::simulator::{LedgerTag, QueryLedger};
use qsymlab::util::rng_from_seed;

fn main() -> qsymlab::Result<()> {
    let n = 6;
    let mut rng = rng_from_seed(42);
    let s = rng.gen_range(1..1u32 << n);
    let mut g: Vec<u32> = (0..1 << n).collect();
    g.shuffle(&mut rng);
    // two-to-one with hidden period s
    let f = move |x: u32| g[x.min(x ^ s) as usize];
    let problem = SimonProblem { input_width: n, output_width: n, eval: &f, charges: vec![(LedgerTag::EncryptionQuantum, 1)] };

    println!("planted s = {s:06b}");
    for backend in [Backend::Statevector, Backend::Hybrid] {
        let mut ledger = QueryLedger::new();
        match simon_recover(&problem, n + 4, backend, &mut rng, &mut ledger) {
            Ok(found) => println!("{backend:>11}: s = {found} after {} quantum queries", ledger.quantum_queries()),
            Err(e) => println!("{backend:>11}: {e}"),
        }
    }
    Ok(())
}
