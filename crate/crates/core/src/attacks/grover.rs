use std::f64::consts::PI;

use rand::Rng as _;

use super::{Backend, IterationPolicy};
use crate::bitmath::BitVec;
use crate::simulator::{QState, QueryLedger, Reference, RegisterLayout};
use crate::util::Rng;
use crate::Result;

/// Grover round count for a domain of `2^bits` with `marked` solutions.
///
/// The closed form is `⌊π/(4θ)⌋` with `sin²θ = marked/2^bits`, the
/// round-half-up of the optimum `π/(4θ) − 1/2`; zero once more than half the
/// domain is marked.
pub fn iterations(policy: IterationPolicy, bits: u32, marked: u64) -> u64 {
    match policy {
        IterationPolicy::SqrtFloor => (2f64.powf(bits as f64 / 2.0)).floor() as u64,
        IterationPolicy::ClosedForm => {
            let size = (1u64 << bits) as f64;
            let theta = (marked.max(1) as f64 / size).min(1.0).sqrt().asin();
            (PI / (4.0 * theta)).floor() as u64
        }
        IterationPolicy::Fixed(r) => r,
    }
}

/// `sin²((2r+1)θ)`: probability of measuring a marked item after `r` rounds.
pub fn success_probability(bits: u32, marked: u64, r: u64) -> f64 {
    let size = (1u64 << bits) as f64;
    let theta = (marked as f64 / size).min(1.0).sqrt().asin();
    ((2 * r + 1) as f64 * theta).sin().powi(2)
}

/// Samples a Grover measurement given the exact marked set.
pub(crate) fn sample_outcome(bits: u32, marked: &[u32], r: u64, rng: &mut Rng) -> u32 {
    let size = 1u64 << bits;
    if marked.is_empty() || marked.len() as u64 == size {
        return rng.gen_range(0..size) as u32;
    }
    if rng.gen::<f64>() < success_probability(bits, marked.len() as u64, r) {
        return marked[rng.gen_range(0..marked.len())];
    }
    // uniform over the complement
    let mut k = rng.gen_range(0..size - marked.len() as u64) as u32;
    let mut sorted = marked.to_vec();
    sorted.sort_unstable();
    for m in sorted {
        if m <= k {
            k += 1;
        }
    }
    k
}

/// Grover search over `2^bits` items for `pred`.
///
/// The hint sets the iteration count only; the hybrid backend uses the true
/// marked set for the outcome distribution.
pub fn grover_search(
    pred: &(dyn Fn(u32) -> bool + Sync),
    bits: u32,
    marked_hint: u64,
    policy: IterationPolicy,
    backend: Backend,
    rng: &mut Rng,
    ledger: &mut QueryLedger,
) -> Result<BitVec> {
    let r = iterations(policy, bits, marked_hint);
    ledger.add_grover_iterations(r);
    let outcome = match backend {
        Backend::Statevector => {
            let mut s = QState::init(RegisterLayout::new(&[("k", bits)])?);
            s.hadamard("k")?;
            let reg = s.layout().register("k")?.clone();
            for _ in 0..r {
                s.phase_flip_where(|i| pred(reg.extract(i)));
                s.grover_diffusion("k", &Reference::Uniform)?;
            }
            return s.measure("k", rng);
        }
        Backend::Hybrid => {
            let marked: Vec<u32> = (0..1u32 << bits).filter(|&k| pred(k)).collect();
            sample_outcome(bits, &marked, r, rng)
        }
    };
    Ok(BitVec::masked(bits, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rng_from_seed;

    #[test]
    fn closed_form_counts() {
        assert_eq!(iterations(IterationPolicy::ClosedForm, 2, 1), 1);
        assert_eq!(iterations(IterationPolicy::ClosedForm, 8, 2), 8);
        assert_eq!(iterations(IterationPolicy::ClosedForm, 6, 2), 4);
        assert_eq!(iterations(IterationPolicy::ClosedForm, 1, 2), 0);
        assert_eq!(iterations(IterationPolicy::ClosedForm, 2, 3), 0);
        assert_eq!(iterations(IterationPolicy::SqrtFloor, 5, 2), 5);
        assert_eq!(iterations(IterationPolicy::Fixed(7), 5, 2), 7);
        // the closed form never does worse than its neighbours
        for bits in 2..=12 {
            for m in [1u64, 2, 3] {
                let r = iterations(IterationPolicy::ClosedForm, bits, m);
                let p = success_probability(bits, m, r);
                assert!(p >= success_probability(bits, m, r + 1) - 1e-12, "{bits} {m}");
            }
        }
    }

    #[test]
    fn two_bits_one_marked_is_exact() {
        let pred = |k: u32| k == 2;
        for seed in 0..20 {
            let mut rng = rng_from_seed(seed);
            let mut ledger = QueryLedger::new();
            let v = grover_search(&pred, 2, 1, IterationPolicy::ClosedForm, Backend::Statevector, &mut rng, &mut ledger).unwrap();
            assert_eq!(v.bits(), 2);
            assert_eq!(ledger.grover_iterations(), 1);
        }
        assert!((success_probability(2, 1, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_marked_set_is_uniform() {
        let pred = |_: u32| false;
        let mut counts = [0u32; 8];
        let mut rng = rng_from_seed(3);
        for _ in 0..4000 {
            let v = grover_search(&pred, 3, 1, IterationPolicy::ClosedForm, Backend::Statevector, &mut rng, &mut QueryLedger::new())
                .unwrap();
            counts[v.bits() as usize] += 1;
        }
        assert!(counts.iter().all(|&c| (400..600).contains(&c)), "{counts:?}");
    }

    #[test]
    fn eight_bits_two_marked_hybrid() {
        let pred = |k: u32| k == 17 || k == 200;
        let mut hits = 0;
        for seed in 0..200 {
            let mut rng = rng_from_seed(seed);
            let v = grover_search(&pred, 8, 2, IterationPolicy::ClosedForm, Backend::Hybrid, &mut rng, &mut QueryLedger::new()).unwrap();
            hits += pred(v.bits()) as u32;
        }
        assert!(hits >= 180, "{hits}");
    }

    #[test]
    fn backends_agree_on_outcome_probability() {
        let pred = |k: u32| k % 5 == 1;
        let r = iterations(IterationPolicy::ClosedForm, 5, 7);
        let mut s = QState::init(RegisterLayout::new(&[("k", 5)]).unwrap());
        s.hadamard("k").unwrap();
        for _ in 0..r {
            s.phase_flip_where(|i| pred(i as u32));
            s.grover_diffusion("k", &Reference::Uniform).unwrap();
        }
        let p: f64 = s.marginal("k").unwrap().iter().enumerate().filter(|(k, _)| pred(*k as u32)).map(|(_, p)| p).sum();
        assert!((p - success_probability(5, 7, r)).abs() < 1e-9);
    }

    #[test]
    fn complement_sampling_avoids_marked() {
        let mut rng = rng_from_seed(9);
        for _ in 0..500 {
            // r = 0 leaves marked mass at 2/16
            let v = sample_outcome(4, &[3, 9], 0, &mut rng);
            assert!(v < 16);
        }
    }
}
