use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Coset, Func1, Func2, KeyedFunction, Structure, SumTerms};
use crate::util::mask;
use crate::{Error, Result};

/// Aggregate over the low `t` input bits; with `p_split`, keep only the top
/// `p` bits of the input and move the rest of the truncated input into the
/// index as `i ∥ j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TruncationParams {
    pub t: u32,
    pub p_split: Option<u32>,
}

impl TruncationParams {
    pub fn new(t: u32) -> Self {
        Self { t, p_split: None }
    }

    pub fn split(t: u32, p: u32) -> Self {
        Self { t, p_split: Some(p) }
    }
}

fn aggregate1(g: &Func1, t: u32, shift: u32) -> Func1 {
    let g = g.clone();
    Arc::new(move |x| {
        let base = x << shift;
        (0..1u32 << t).fold(0, |acc, u| acc ^ g(base | u))
    })
}

/// `F(i, x) = ⊕_u f(i', (x << t) | u)` with the split of `f` propagated.
pub fn build_truncated_fl(f: &KeyedFunction, params: TruncationParams) -> Result<KeyedFunction> {
    let (n, t) = (f.input_width, params.t);
    if t >= n {
        return Err(Error::OutOfRange(format!("truncation t={t} must be below the input width {n}")));
    }
    if f.coset.t > 0 {
        return Err(Error::Config("family is already truncated".into()));
    }
    let nl = n - t;
    if let Some(p) = params.p_split {
        if p == 0 || p > nl {
            return Err(Error::OutOfRange(format!("split p={p} not in 1..={nl}")));
        }
        return split(f, t, p);
    }
    let additive = f.key_additive;
    if additive && f.key_width != n {
        return Err(Error::WidthMismatch { expected: n, actual: f.key_width });
    }
    let key_width = if additive { f.key_width - t } else { f.key_width };
    let key_shift = if additive { t } else { 0 };
    let inner = f.eval_fn();
    let eval: Func2 = Arc::new(move |i, x| {
        let (k, base) = (i << key_shift, x << t);
        (0..1u32 << t).fold(0, |acc, u| acc ^ inner(k, base | u))
    });
    let structure = match &f.structure {
        Structure::Plain => Structure::Plain,
        Structure::Coupled { g1, g2 } => Structure::Coupled { g1: aggregate1(g1, t, t), g2: aggregate1(g2, t, t) },
        Structure::Decoupled { g1, p, sum } => {
            let pp = p.clone();
            let p_l: Func2 = Arc::new(move |i, x| {
                let (k, base) = (i << key_shift, x << t);
                (0..1u32 << t).fold(0, |acc, u| acc ^ pp(k, base | u))
            });
            let sum_l = match sum {
                Some(s) if additive => Some(SumTerms {
                    h: aggregate1(&s.h, t, t),
                    q1: aggregate1(&s.q1, t, t),
                    q2: aggregate1(&s.q2, t, t),
                }),
                _ => None,
            };
            Structure::Decoupled { g1: aggregate1(g1, t, t), p: p_l, sum: sum_l }
        }
    };
    let mut out = KeyedFunction::new(key_width, nl, f.output_width, eval);
    out.structure = structure;
    out.key_additive = additive;
    out.oracle_cost = f.oracle_cost << t;
    out.public_cost = f.public_cost << t;
    out.coset = Coset::shifted(t, t);
    out.base_oracle = f.base_oracle.clone();
    out.label = format!("{}^L(t={t})", f.label);
    Ok(out)
}

/// Composite index `i ∥ j` with `|i| = n−t`, `|j| = n−t−p`, input `p` bits;
/// base input `X = x ∥ 0^{n−t−p} ∥ u`.
fn split(f: &KeyedFunction, t: u32, p: u32) -> Result<KeyedFunction> {
    let (g1, sum) = match (&f.structure, f.key_additive) {
        (Structure::Decoupled { g1, sum: Some(sum), .. }, true) => (g1.clone(), sum.clone()),
        _ => return Err(Error::Config("composite split needs an additive sum-type decoupled family".into())),
    };
    let n = f.input_width;
    let nl = n - t;
    let jw = nl - p;
    let shift = n - p;
    let public: Func2 = Arc::new(move |key, x| {
        let (i, j) = (key >> jw, key & mask(jw));
        let hi = x << shift;
        (0..1u32 << t).fold(0, |acc, u| {
            let xx = hi | u;
            acc ^ (sum.h)(xx) ^ (sum.q1)(hi | (j << t) | u) ^ (sum.q2)(xx ^ (i << t))
        })
    });
    let g1_l = aggregate1(&g1, t, shift);
    let (a, b) = (g1_l.clone(), public.clone());
    let mut out = KeyedFunction::from_fn(nl + jw, p, f.output_width, move |key, x| a(x) ^ b(key, x));
    out.structure = Structure::Decoupled { g1: g1_l, p: public, sum: None };
    out.key_additive = false;
    out.oracle_cost = f.oracle_cost << t;
    out.public_cost = f.public_cost << t;
    out.coset = Coset::shifted(t, shift);
    out.base_oracle = f.base_oracle.clone();
    out.label = format!("{}^L(t={t},p={p})", f.label);
    Ok(out)
}
