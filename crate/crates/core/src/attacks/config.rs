use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::periodics::{KeyedFunction, TruncationParams};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Dense statevector; every gate is applied.
    Statevector,
    /// Exact classical sampling of the Simon statistics plus closed-form Grover.
    Hybrid,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "statevector" | "sv" | "full" => Ok(Backend::Statevector),
            "hybrid" => Ok(Backend::Hybrid),
            _ => Err(Error::Parse(format!("unknown backend `{s}`"))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Statevector => "statevector",
            Backend::Hybrid => "hybrid",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IterationPolicy {
    /// `⌊2^{K/2}⌋`.
    SqrtFloor,
    /// `⌊π/(4θ)⌋` with `sin²θ = M/2^K`.
    ClosedForm,
    Fixed(u64),
}

/// Query model of the preparation phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    /// Classical encryption queries only.
    Q1,
    /// Superposition encryption queries.
    Q2,
}

/// Parameters shared by every attack. `n`, `kappa`, `m` describe the
/// untruncated family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    pub n: u32,
    pub kappa: u32,
    pub m: u32,
    pub t: u32,
    pub tau: u32,
    pub c_override: Option<u32>,
    pub p_split: Option<u32>,
    /// Output qubits kept per copy; statevector default `n − t`.
    pub m_trunc: Option<u32>,
    pub backend: Backend,
    pub model: Model,
    pub iteration_policy: IterationPolicy,
    /// Marked-set size assumed by the closed form; default 2 for additive families.
    pub marked_hint: Option<u64>,
    pub rng_seed: u64,
    pub max_retries: u32,
    /// Most Simon batches of `c′` vectors on the measured index; batches after
    /// the first run only while the period system is indeterminate and the
    /// previous batch raised the rank.
    pub final_passes: u32,
}

impl AttackConfig {
    pub fn new(n: u32, kappa: u32, m: u32) -> Self {
        Self {
            n,
            kappa,
            m,
            t: 0,
            tau: 2,
            c_override: None,
            p_split: None,
            m_trunc: None,
            backend: Backend::Hybrid,
            model: Model::Q1,
            iteration_policy: IterationPolicy::ClosedForm,
            marked_hint: None,
            rng_seed: 0,
            max_retries: 3,
            final_passes: 1,
        }
    }

    /// Widths taken from an untruncated family.
    pub fn for_family(f: &KeyedFunction) -> Self {
        Self::new(f.input_width, f.key_width, f.output_width)
    }

    pub fn truncation(&self) -> TruncationParams {
        TruncationParams { t: self.t, p_split: self.p_split }
    }

    /// `c′ = n + κ − 2t + τ + 1` unless overridden.
    pub fn c_prime(&self) -> u32 {
        self.c_override.unwrap_or((self.n + self.kappa + self.tau + 1).saturating_sub(2 * self.t))
    }

    pub fn m_out(&self) -> u32 {
        let default = match self.backend {
            Backend::Statevector => self.n - self.t,
            Backend::Hybrid => self.m,
        };
        self.m_trunc.unwrap_or(default).min(self.m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t >= self.n {
            return Err(Error::Config(format!("t={} must be below n={}", self.t, self.n)));
        }
        if self.c_prime() == 0 || self.m_out() == 0 {
            return Err(Error::Config("c′ and the kept output width must be positive".into()));
        }
        if self.max_retries == 0 || self.final_passes == 0 {
            return Err(Error::Config("max_retries and final_passes must be at least 1".into()));
        }
        Ok(())
    }

    /// Non-fatal parameter notes carried into results.
    pub fn warnings(&self, input_width: u32) -> Vec<String> {
        let mut w = Vec::new();
        let c = self.c_prime();
        if c < input_width {
            w.push(format!("c′={c} below the input width {input_width}: every index passes the rank test"));
        } else if c < input_width + 1 {
            w.push(format!("c′={c} below input width + 1: the rank test has a high false-positive rate"));
        }
        w
    }
}
