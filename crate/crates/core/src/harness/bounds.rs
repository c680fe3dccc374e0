use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::attacks::{iterations, IterationPolicy};
use crate::{Error, Result};

/// Exponents of the time/data tradeoff for the composite split:
/// `T = 2^{(2n−2t−p)/2}` iterations and `D = 2^{p+t}` classical queries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TradeoffExponents {
    #[serde(with = "ratio")]
    pub time: Ratio<i64>,
    #[serde(with = "ratio")]
    pub data: Ratio<i64>,
    /// `2·time + data`; equals `2n − t` for every `p`.
    #[serde(with = "ratio")]
    pub identity: Ratio<i64>,
    /// `p` where `time = data = (2n−t)/3`.
    #[serde(with = "ratio")]
    pub balanced_p: Ratio<i64>,
}

/// Ratios as `"a"` or `"a/b"` strings.
mod ratio {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Ratio<i64>, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl TradeoffExponents {
    pub fn new(n: u32, t: u32, p: u32) -> Self {
        let (n, t, p) = (n as i64, t as i64, p as i64);
        let time = Ratio::new(2 * n - 2 * t - p, 2);
        let data = Ratio::from_integer(p + t);
        Self { time, data, identity: time * 2 + data, balanced_p: Ratio::new(2 * n - 4 * t, 3) }
    }

    /// The exponents at the balanced split, which need not be an integer `p`.
    pub fn balanced(n: u32, t: u32) -> Self {
        let (ni, ti) = (n as i64, t as i64);
        let p = Ratio::new(2 * ni - 4 * ti, 3);
        let time = (Ratio::from_integer(2 * ni - 2 * ti) - p) / 2;
        let data = p + ti;
        Self { time, data, identity: time * 2 + data, balanced_p: p }
    }
}

/// Closed-form quantities of the truncated attacks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub n: u32,
    pub kappa: u32,
    pub t: u32,
    pub tau: u32,
    pub p: Option<u32>,
    /// `n + κ − 2t + τ + 1`.
    pub c_prime: u32,
    /// `2^{(κ−t)/2}`.
    pub iterations_floor: f64,
    /// Closed-form rounds for two marked indices among `2^{κ−t}`.
    pub iterations_closed_form: u64,
    /// `1 − 2^{−τ} − (2^{−τ/2−1} + 2^{−τ} + 2^{−(κ−t)/2+1})²`; may be negative.
    pub success_lower_bound: f64,
    /// `log2` of the mass bound on false rank-test passes.
    pub failure_mass_log2: f64,
    /// `2^{n+κ−2t−2^{n−t}/(4c′)}`.
    pub failure_mass_bound: f64,
    /// `2^n`, or `2^{p+t}` with a split.
    pub q1_classical_queries: u64,
    /// `c′·2^t`.
    pub q2_quantum_queries: u64,
    pub tradeoff: Option<TradeoffExponents>,
}

pub fn theoretical_bounds(n: u32, kappa: u32, t: u32, tau: u32, p: Option<u32>) -> Result<Bounds> {
    if t >= n.min(kappa) {
        return Err(Error::Config(format!("t={t} must be below min(n, κ) = {}", n.min(kappa))));
    }
    if tau == 0 {
        return Err(Error::Config("τ must be at least 1".into()));
    }
    if n > 32 || kappa > 32 {
        return Err(Error::Config("n and κ are limited to 32".into()));
    }
    if let Some(p) = p {
        if p == 0 || p > n - t {
            return Err(Error::Config(format!("split p={p} not in 1..={}", n - t)));
        }
    }
    let c_prime = n + kappa + tau + 1 - 2 * t;
    let k = kappa - t;
    let (tau_f, k_f) = (tau as f64, k as f64);
    let inner = 2f64.powf(-tau_f / 2.0 - 1.0) + 2f64.powf(-tau_f) + 2f64.powf(-k_f / 2.0 + 1.0);
    let success_lower_bound = 1.0 - 2f64.powf(-tau_f) - inner * inner;
    let failure_mass_log2 = (n + kappa - 2 * t) as f64 - 2f64.powi((n - t) as i32) / (4.0 * c_prime as f64);
    Ok(Bounds {
        n,
        kappa,
        t,
        tau,
        p,
        c_prime,
        iterations_floor: 2f64.powf(k_f / 2.0),
        iterations_closed_form: iterations(IterationPolicy::ClosedForm, k, 2),
        success_lower_bound,
        failure_mass_log2,
        failure_mass_bound: 2f64.powf(failure_mass_log2),
        q1_classical_queries: 1u64 << p.map_or(n, |p| p + t),
        q2_quantum_queries: (c_prime as u64) << t,
        tradeoff: p.map(|p| TradeoffExponents::new(n, t, p)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_values() {
        let b = theoretical_bounds(6, 6, 2, 2, None).unwrap();
        assert_eq!(b.c_prime, 11);
        assert_eq!(b.iterations_floor, 4.0);
        assert_eq!(b.q2_quantum_queries, 44);
        assert_eq!(b.q1_classical_queries, 64);
        let b = theoretical_bounds(10, 10, 2, 4, None).unwrap();
        assert_eq!(b.success_lower_bound, 0.83984375);
        let b0 = theoretical_bounds(5, 7, 0, 3, None).unwrap();
        assert_eq!(b0.c_prime, 5 + 7 + 3 + 1);
        let split = theoretical_bounds(6, 6, 1, 2, Some(3)).unwrap();
        assert_eq!(split.q1_classical_queries, 16);
    }

    #[test]
    fn tradeoff_identity() {
        for n in 3..20 {
            for t in 0..n / 2 {
                for p in 1..=n - t {
                    assert_eq!(TradeoffExponents::new(n, t, p).identity, Ratio::from_integer(2 * n as i64 - t as i64));
                }
                let b = TradeoffExponents::balanced(n, t);
                assert_eq!(b.time, b.data);
                assert_eq!(b.data, Ratio::new(2 * n as i64 - t as i64, 3));
                assert_eq!(b.identity, Ratio::from_integer(2 * n as i64 - t as i64));
            }
        }
    }

    #[test]
    fn domain_errors_and_purity() {
        assert!(theoretical_bounds(4, 4, 4, 2, None).is_err());
        assert!(theoretical_bounds(4, 4, 1, 0, None).is_err());
        assert!(theoretical_bounds(6, 6, 1, 2, Some(6)).is_err());
        let first = serde_json::to_string(&theoretical_bounds(8, 8, 2, 3, Some(2)).unwrap()).unwrap();
        for _ in 0..10_000 {
            assert_eq!(serde_json::to_string(&theoretical_bounds(8, 8, 2, 3, Some(2)).unwrap()).unwrap(), first);
        }
    }
}
