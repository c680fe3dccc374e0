//! Closed-form parameters of the truncated attacks.
//!
//! `cargo run --example bounds`

use qsymlab::harness::theoretical_bounds;

fn main() -> qsymlab::Result<()> {
    println!(" n  κ  t  τ | c′ | r (floor form) | r (closed) | success ≥ | Q1 data | Q2 queries");
    for (n, kappa, t, tau) in [(6, 6, 2, 2), (8, 8, 2, 2), (10, 10, 2, 4), (16, 16, 4, 6), (32, 32, 8, 8)] {
        let b = theoretical_bounds(n, kappa, t, tau, None)?;
        println!(
            "{n:>2} {kappa:>2} {t:>2} {tau:>2} | {:>2} | {:>14} | {:>10} | {:>9.4} | {:>7} | {:>10}",
            b.c_prime, b.iterations_floor, b.iterations_closed_form, b.success_lower_bound, b.q1_classical_queries, b.q2_quantum_queries
        );
    }
    Ok(())
}
