use serde::Serialize;

use super::TruncationParams;
use crate::constructions::CipherInstance;
use crate::util::mask;

/// Indices expected to be periodic, all with the same expected period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub index_width: u32,
    pub input_width: u32,
    pub good_indices: Vec<u32>,
    pub period: u32,
}

/// Analytic good indices and period of `family_for(inst)`, optionally truncated.
pub fn predict(inst: &CipherInstance, trunc: Option<TruncationParams>) -> Prediction {
    let s = inst.secret_state();
    let n = s.input_width;
    let trunc = trunc.unwrap_or_default();
    let t = trunc.t;
    let nl = n - t;
    let mut good: Vec<u32>;
    let (index_width, input_width, period);
    if !s.additive {
        good = vec![s.base];
        index_width = s.index_width;
        input_width = nl;
        period = s.period >> t;
    } else {
        let (a, b) = (s.period >> t, s.base >> t);
        match trunc.p_split {
            Some(p) if p < nl => {
                let jw = nl - p;
                let (a1, a2) = (a >> jw, a & mask(jw));
                // the input only spans the top p bits, so the partner index
                // moves i by a^{l1} ∥ 0 rather than by all of a^l
                good = vec![(b << jw) | a2, ((b ^ (a1 << jw)) << jw) | a2];
                index_width = nl + jw;
                input_width = p;
                period = a1;
            }
            _ => {
                good = vec![b, a ^ b];
                index_width = nl;
                input_width = nl;
                period = a;
            }
        }
    }
    good.sort_unstable();
    good.dedup();
    Prediction { index_width, input_width, good_indices: good, period }
}
