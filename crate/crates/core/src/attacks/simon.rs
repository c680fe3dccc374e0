use std::collections::HashMap;

use rand::Rng as _;
use rayon::prelude::*;

use super::Backend;
use crate::bitmath::{gf2_solve_period, rank_of_words, span_basis, BitMatrix, BitVec, PeriodSolution};
use crate::simulator::{LedgerTag, OracleSpec, QState, QueryLedger, RegisterLayout};
use crate::util::{mask, parity, Rng};
use crate::{Error, Result};

/// Exact classical sampler of Simon measurement vectors for one function table.
///
/// A sample draws `x` uniformly, takes the preimage class `S` of `f(x)`, and
/// returns `v` with probability `W_S(v)² / (|S| 2^n)` where
/// `W_S(v) = Σ_{y∈S} (−1)^{v·y}`. That is the Born distribution of
/// `H·U_f·H|0⟩|0⟩` measured on the input register.
#[derive(Clone, Debug)]
pub struct SimonSampler {
    width: u32,
    table: Vec<u32>,
    classes: HashMap<u32, Vec<u32>>,
}

impl SimonSampler {
    pub fn new(width: u32, table: Vec<u32>) -> Self {
        assert_eq!(table.len(), 1usize << width);
        let mut classes: HashMap<u32, Vec<u32>> = HashMap::new();
        for (x, &y) in table.iter().enumerate() {
            classes.entry(y).or_default().push(x as u32);
        }
        Self { width, table, classes }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn sample(&self, rng: &mut Rng) -> u32 {
        let x = rng.gen_range(0..self.table.len());
        let class = &self.classes[&self.table[x]];
        if class.len() == 1 {
            return rng.gen_range(0..=mask(self.width));
        }
        let size = class.len() as f64;
        loop {
            // rejection from the uniform proposal; acceptance W²/|S|² ≤ 1
            let v = rng.gen_range(0..=mask(self.width));
            let w: i64 = class.iter().map(|&y| 1 - 2 * parity(v & y) as i64).sum();
            if rng.gen::<f64>() * size * size < (w * w) as f64 {
                return v;
            }
        }
    }

    /// Exact single-sample distribution over `v`.
    pub fn distribution(&self) -> Vec<f64> {
        let n = self.table.len();
        let mut p = vec![0.0; n];
        for class in self.classes.values() {
            let mut w = vec![0.0f64; n];
            for &y in class {
                w[y as usize] = 1.0;
            }
            walsh_hadamard(&mut w);
            for (acc, wv) in p.iter_mut().zip(&w) {
                *acc += wv * wv;
            }
        }
        let norm = (n * n) as f64;
        p.iter_mut().for_each(|x| *x /= norm);
        p
    }
}

fn walsh_hadamard(a: &mut [f64]) {
    let mut h = 1;
    while h < a.len() {
        for chunk in a.chunks_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi) {
                let (s, d) = (*x + *y, *x - *y);
                *x = s;
                *y = d;
            }
        }
        h *= 2;
    }
}

/// The attack's rank test: fewer than `threshold` independent vectors.
#[inline]
pub fn rank_flags(vectors: &[u32], threshold: u32) -> bool {
    rank_of_words(vectors) < threshold
}

/// Exact probability that `c` independent samples from `dist` have rank
/// below `threshold`, by dynamic programming over spanned subspaces.
pub fn flag_probability(dist: &[f64], width: u32, c: u32, threshold: u32) -> f64 {
    let mut states: HashMap<Vec<u32>, f64> = HashMap::from([(Vec::new(), 1.0)]);
    for _ in 0..c {
        let next: HashMap<Vec<u32>, f64> = states
            .par_iter()
            .fold(HashMap::new, |mut acc: HashMap<Vec<u32>, f64>, (basis, &pb)| {
                let mut inside = 0.0;
                for (v, &pv) in dist.iter().enumerate() {
                    if pv == 0.0 {
                        continue;
                    }
                    let mut rows = basis.clone();
                    rows.push(v as u32);
                    let new_basis = span_basis(&rows, width);
                    if new_basis.len() == basis.len() {
                        inside += pv;
                    } else {
                        *acc.entry(new_basis).or_default() += pb * pv;
                    }
                }
                *acc.entry(basis.clone()).or_default() += pb * inside;
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            });
        states = next;
    }
    states.iter().filter(|(b, _)| (b.len() as u32) < threshold).map(|(_, p)| p).sum()
}

/// A single-index function given to Simon's algorithm.
pub struct SimonProblem<'a> {
    pub input_width: u32,
    pub output_width: u32,
    pub eval: &'a (dyn Fn(u32) -> u32 + Sync),
    /// Charged once per oracle application.
    pub charges: Vec<(LedgerTag, u64)>,
}

impl SimonProblem<'_> {
    fn table(&self) -> Vec<u32> {
        (0..1u32 << self.input_width).map(|x| (self.eval)(x) & mask(self.output_width)).collect()
    }
}

/// `count` measurement vectors, one oracle application each.
pub fn simon_samples(
    problem: &SimonProblem<'_>,
    count: u32,
    backend: Backend,
    rng: &mut Rng,
    ledger: &mut QueryLedger,
) -> Result<Vec<u32>> {
    let table = problem.table();
    let mut out = Vec::with_capacity(count as usize);
    match backend {
        Backend::Statevector => {
            let layout = RegisterLayout::new(&[("x", problem.input_width), ("y", problem.output_width)])?;
            let oracle = OracleSpec::from_table(problem.input_width, problem.output_width, LedgerTag::Internal, 0, table)
                .with_charges(problem.charges.clone());
            for _ in 0..count {
                let mut s = QState::init(layout.clone());
                s.hadamard("x")?;
                s.apply_oracle(&oracle, &["x"], "y", ledger)?;
                s.hadamard("x")?;
                out.push(s.measure("x", rng)?.bits());
            }
        }
        Backend::Hybrid => {
            let sampler = SimonSampler::new(problem.input_width, table);
            for _ in 0..count {
                out.push(sampler.sample(rng));
                for (tag, cost) in &problem.charges {
                    ledger.charge(*tag, *cost);
                }
            }
        }
    }
    ledger.add_simon_samples(count as u64);
    Ok(out)
}

/// The unique non-zero `s` orthogonal to every vector.
pub fn solve_period(vectors: &[u32], width: u32) -> Result<BitVec> {
    if vectors.is_empty() {
        return Err(Error::IndeterminateRank { nullspace_dim: width });
    }
    match gf2_solve_period(&BitMatrix::from_words(width, vectors)?) {
        PeriodSolution::Unique(s) => Ok(s),
        PeriodSolution::Indeterminate { nullspace_dim } => Err(Error::IndeterminateRank { nullspace_dim }),
    }
}

/// Simon's algorithm: `samples` vectors, then the orthogonal complement.
pub fn simon_recover(
    problem: &SimonProblem<'_>,
    samples: u32,
    backend: Backend,
    rng: &mut Rng,
    ledger: &mut QueryLedger,
) -> Result<BitVec> {
    let vs = simon_samples(problem, samples, backend, rng, ledger)?;
    solve_period(&vs, problem.input_width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rng_from_seed;

    fn planted(n: u32, s: u32) -> impl Fn(u32) -> u32 + Sync {
        move |x: u32| {
            let r = x.min(x ^ s);
            r.wrapping_mul(0x2545_F491) >> 3 & mask(n + 2)
        }
    }

    #[test]
    fn sampler_matches_exact_distribution() {
        let f = planted(4, 0b1010);
        let table: Vec<u32> = (0..16).map(&f).collect();
        let sampler = SimonSampler::new(4, table);
        let exact = sampler.distribution();
        assert!((exact.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let mut rng = rng_from_seed(1);
        let mut counts = [0u32; 16];
        let trials = 40_000;
        for _ in 0..trials {
            counts[sampler.sample(&mut rng) as usize] += 1;
        }
        for v in 0..16 {
            let expect = exact[v] * trials as f64;
            if exact[v] == 0.0 {
                assert_eq!(counts[v], 0, "v={v:04b} must be orthogonal to s");
            } else {
                // 5σ of a binomial count
                assert!((counts[v] as f64 - expect).abs() < 5.0 * expect.sqrt(), "v={v}");
            }
        }
    }

    #[test]
    fn statevector_and_exact_distributions_agree() {
        let f = |x: u32| [3, 1, 3, 0, 2, 2, 1, 0][x as usize];
        let table: Vec<u32> = (0..8).map(f).collect();
        let exact = SimonSampler::new(3, table.clone()).distribution();
        let layout = RegisterLayout::new(&[("x", 3), ("y", 2)]).unwrap();
        let mut s = QState::init(layout);
        let oracle = OracleSpec::from_table(3, 2, LedgerTag::Internal, 1, table);
        s.hadamard("x").unwrap();
        s.apply_oracle(&oracle, &["x"], "y", &mut QueryLedger::new()).unwrap();
        s.hadamard("x").unwrap();
        let marginal = s.marginal("x").unwrap();
        for v in 0..8 {
            assert!((marginal[v] - exact[v]).abs() < 1e-12);
        }
    }

    #[test]
    fn flag_probability_matches_enumeration() {
        let dist = SimonSampler::new(3, vec![0, 1, 2, 3, 0, 1, 2, 3]).distribution();
        let mut brute = 0.0;
        for a in 0..8u32 {
            for b in 0..8u32 {
                for c in 0..8u32 {
                    if rank_flags(&[a, b, c], 2) {
                        brute += dist[a as usize] * dist[b as usize] * dist[c as usize];
                    }
                }
            }
        }
        assert!((flag_probability(&dist, 3, 3, 2) - brute).abs() < 1e-12);
        let uniform = vec![1.0 / 8.0; 8];
        // P(3 uniform vectors span GF(2)^3) = (7/8)(6/8)(4/8)
        assert!((flag_probability(&uniform, 3, 3, 3) - (1.0 - 7.0 * 6.0 * 4.0 / 512.0)).abs() < 1e-12);
    }

    #[test]
    fn one_bit_constant_gives_period_one() {
        let f = |_: u32| 0u32;
        let p = SimonProblem { input_width: 1, output_width: 1, eval: &f, charges: vec![] };
        for backend in [Backend::Statevector, Backend::Hybrid] {
            let mut rng = rng_from_seed(0);
            let s = simon_recover(&p, 3, backend, &mut rng, &mut QueryLedger::new()).unwrap();
            assert_eq!(s.bits(), 1);
        }
    }

    #[test]
    fn planted_period_and_injective_function() {
        let s = 0b101101;
        let f = planted(6, s);
        let p = SimonProblem { input_width: 6, output_width: 8, eval: &f, charges: vec![(LedgerTag::EncryptionQuantum, 1)] };
        let mut hits = 0;
        let mut ledger = QueryLedger::new();
        for seed in 0..200 {
            let mut rng = rng_from_seed(seed);
            if simon_recover(&p, 10, Backend::Hybrid, &mut rng, &mut ledger).ok().map(|v| v.bits()) == Some(s) {
                hits += 1;
            }
        }
        assert!(hits >= 190, "{hits}");
        assert_eq!(ledger.quantum_queries(), 2000);
        let inj = |x: u32| x;
        let p = SimonProblem { input_width: 6, output_width: 6, eval: &inj, charges: vec![] };
        let mut zero_dim = 0;
        for seed in 0..200 {
            let mut rng = rng_from_seed(seed);
            if let Err(Error::IndeterminateRank { nullspace_dim: 0 }) =
                simon_recover(&p, 10, Backend::Hybrid, &mut rng, &mut QueryLedger::new())
            {
                zero_dim += 1;
            }
        }
        assert!(zero_dim >= 190, "{zero_dim}");
    }
}
