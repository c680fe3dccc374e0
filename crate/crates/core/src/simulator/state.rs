use std::io::Write;

use num_complex::Complex64;
use rand::Rng as _;
use rayon::prelude::*;

use super::{OracleSpec, QueryLedger, Register, RegisterLayout};
use crate::bitmath::BitVec;
use crate::util::{mask, Rng};
use crate::{Error, Result};

/// Below this many amplitudes kernels stay sequential.
const PAR_MIN: usize = 1 << 14;
/// Oracles on inputs up to this width are tabulated before application.
const TABULATE_MAX: u32 = 22;

type C = Complex64;

/// Reference state of a register-local reflection `2|φ⟩⟨φ| − I`.
#[derive(Clone, Debug)]
pub enum Reference {
    /// `H^{⊗w}|0⟩`.
    Uniform,
    /// Normalized amplitudes over the register's `2^w` basis states.
    Amplitudes(Vec<C>),
}

#[derive(Clone, Debug)]
pub struct QState {
    layout: RegisterLayout,
    amps: Vec<C>,
}

impl QState {
    /// `|0…0⟩` over `layout`.
    pub fn init(layout: RegisterLayout) -> Self {
        let mut amps = vec![C::new(0.0, 0.0); layout.dim()];
        amps[0] = C::new(1.0, 0.0);
        Self { layout, amps }
    }

    /// Basis state with each listed register set to the given value.
    pub fn basis(layout: RegisterLayout, values: &[(&str, u32)]) -> Result<Self> {
        let mut idx = 0usize;
        for (name, v) in values {
            idx = layout.register(name)?.insert(idx, *v);
        }
        let mut s = Self::init(layout);
        s.amps.swap(0, idx);
        Ok(s)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.par_iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QState) -> Result<C> {
        self.same_layout(other)?;
        Ok(self.amps.par_iter().zip(other.amps.par_iter()).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &QState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    fn same_layout(&self, other: &QState) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::Config("states have different register layouts".into()));
        }
        Ok(())
    }

    fn gather(&mut self, source: impl Fn(usize) -> usize + Sync) {
        let old = &self.amps;
        let new: Vec<C> = if old.len() >= PAR_MIN {
            (0..old.len()).into_par_iter().map(|i| old[source(i)]).collect()
        } else {
            (0..old.len()).map(|i| old[source(i)]).collect()
        };
        self.amps = new;
    }

    fn butterfly(&mut self, bit: u32) {
        let stride = 1usize << bit;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let kernel = |lo: &mut C, hi: &mut C| {
            let (a, b) = (*lo, *hi);
            *lo = (a + b) * h;
            *hi = (a - b) * h;
        };
        let n = self.amps.len();
        if n < PAR_MIN {
            for chunk in self.amps.chunks_mut(2 * stride) {
                let (lo, hi) = chunk.split_at_mut(stride);
                lo.iter_mut().zip(hi).for_each(|(a, b)| kernel(a, b));
            }
        } else if n / (2 * stride) >= 64 {
            self.amps.par_chunks_mut(2 * stride).for_each(|chunk| {
                let (lo, hi) = chunk.split_at_mut(stride);
                lo.iter_mut().zip(hi).for_each(|(a, b)| kernel(a, b));
            });
        } else {
            for chunk in self.amps.chunks_mut(2 * stride) {
                let (lo, hi) = chunk.split_at_mut(stride);
                lo.par_iter_mut().zip(hi.par_iter_mut()).for_each(|(a, b)| kernel(a, b));
            }
        }
    }

    /// `H` on every qubit of `reg`.
    pub fn hadamard(&mut self, reg: &str) -> Result<()> {
        let r = self.layout.register(reg)?.clone();
        for b in r.offset()..r.offset() + r.width() {
            self.butterfly(b);
        }
        Ok(())
    }

    /// `|x⟩|y⟩ → |x⟩|y ⊕ eval(x)⟩` with `x` the concatenation of `inputs`
    /// (first listed is most significant) and `y` the `output` register.
    pub fn apply_oracle(
        &mut self,
        oracle: &OracleSpec,
        inputs: &[&str],
        output: &str,
        ledger: &mut QueryLedger,
    ) -> Result<()> {
        let ins: Vec<Register> = inputs.iter().map(|n| self.layout.register(n).cloned()).collect::<Result<_>>()?;
        let out = self.layout.register(output)?.clone();
        let in_width: u32 = ins.iter().map(|r| r.width()).sum();
        if in_width != oracle.in_width {
            return Err(Error::WidthMismatch { expected: oracle.in_width, actual: in_width });
        }
        if out.width() != oracle.out_width {
            return Err(Error::WidthMismatch { expected: oracle.out_width, actual: out.width() });
        }
        if ins.iter().any(|r| r.name() == out.name()) {
            return Err(Error::Config(format!("oracle output `{}` is also an input", out.name())));
        }
        let read = |i: usize| ins.iter().fold(0u32, |acc, r| (acc << r.width()) | r.extract(i));
        let out_mask = mask(out.width());
        if in_width <= TABULATE_MAX {
            let size = 1usize << in_width;
            let table: Vec<u32> = if size >= PAR_MIN {
                (0..size as u32).into_par_iter().map(|x| oracle.eval(x) & out_mask).collect()
            } else {
                (0..size as u32).map(|x| oracle.eval(x) & out_mask).collect()
            };
            self.gather(|i| i ^ ((table[read(i) as usize] as usize) << out.offset()));
        } else {
            self.gather(|i| i ^ (((oracle.eval(read(i)) & out_mask) as usize) << out.offset()));
        }
        for (tag, cost) in &oracle.charges {
            ledger.charge(*tag, *cost);
        }
        Ok(())
    }

    /// Negates every amplitude whose basis index satisfies `pred`.
    pub fn phase_flip_where(&mut self, pred: impl Fn(usize) -> bool + Sync) {
        let f = |(i, a): (usize, &mut C)| {
            if pred(i) {
                *a = -*a;
            }
        };
        if self.amps.len() >= PAR_MIN {
            self.amps.par_iter_mut().enumerate().for_each(f);
        } else {
            self.amps.iter_mut().enumerate().for_each(f);
        }
    }

    /// Negates amplitudes where `pred` holds on the values of `regs`.
    pub fn phase_flip_if(&mut self, regs: &[&str], pred: impl Fn(&[u32]) -> bool + Sync) -> Result<()> {
        let rs: Vec<Register> = regs.iter().map(|n| self.layout.register(n).cloned()).collect::<Result<_>>()?;
        self.phase_flip_where(|i| {
            let vals: Vec<u32> = rs.iter().map(|r| r.extract(i)).collect();
            pred(&vals)
        });
        Ok(())
    }

    /// `X` on the single-qubit `flag` register where `pred` holds; `pred` sees
    /// the basis index with the flag cleared.
    pub fn flip_flag_if(&mut self, flag: &str, pred: impl Fn(usize) -> bool + Sync) -> Result<()> {
        let r = self.layout.register(flag)?.clone();
        if r.width() != 1 {
            return Err(Error::WidthMismatch { expected: 1, actual: r.width() });
        }
        let bit = 1usize << r.offset();
        self.gather(|i| if pred(i & !bit) { i ^ bit } else { i });
        Ok(())
    }

    /// `(2|φ⟩⟨φ| − I)` on `reg`, identity elsewhere.
    pub fn grover_diffusion(&mut self, reg: &str, about: &Reference) -> Result<()> {
        let r = self.layout.register(reg)?.clone();
        let w = r.width();
        let size = 1usize << w;
        let reference: Vec<C> = match about {
            Reference::Uniform => vec![C::new((size as f64).powf(-0.5), 0.0); size],
            Reference::Amplitudes(v) => {
                if v.len() != size {
                    return Err(Error::WidthMismatch { expected: w, actual: v.len().trailing_zeros() });
                }
                v.clone()
            }
        };
        let off = r.offset();
        let low = (1usize << off) - 1;
        let rest_count = self.amps.len() >> w;
        let compose = |rest: usize, v: usize| ((rest >> off) << (off + w)) | (v << off) | (rest & low);
        let amps = &self.amps;
        let proj = |rest: usize| (0..size).map(|v| reference[v].conj() * amps[compose(rest, v)]).sum::<C>();
        let overlaps: Vec<C> = if amps.len() >= PAR_MIN {
            (0..rest_count).into_par_iter().map(proj).collect()
        } else {
            (0..rest_count).map(proj).collect()
        };
        let update = |(i, a): (usize, &mut C)| {
            let v = (i >> off) & (size - 1);
            let rest = ((i >> (off + w)) << off) | (i & low);
            *a = overlaps[rest] * reference[v] * 2.0 - *a;
        };
        if self.amps.len() >= PAR_MIN {
            self.amps.par_iter_mut().enumerate().for_each(update);
        } else {
            self.amps.iter_mut().enumerate().for_each(update);
        }
        Ok(())
    }

    /// `(2|φ⟩⟨φ| − I)` over the whole state.
    pub fn reflect_about(&mut self, phi: &QState) -> Result<()> {
        let overlap = phi.inner(self)? * 2.0;
        let f = |(a, p): (&mut C, &C)| *a = overlap * p - *a;
        if self.amps.len() >= PAR_MIN {
            self.amps.par_iter_mut().zip(phi.amps.par_iter()).for_each(f);
        } else {
            self.amps.iter_mut().zip(phi.amps.iter()).for_each(f);
        }
        Ok(())
    }

    /// Born-rule distribution of `reg`'s value.
    pub fn marginal(&self, reg: &str) -> Result<Vec<f64>> {
        let r = self.layout.register(reg)?.clone();
        let size = 1usize << r.width();
        let fold = |mut acc: Vec<f64>, (i, a): (usize, &C)| {
            acc[r.extract(i) as usize] += a.norm_sqr();
            acc
        };
        let add = |mut a: Vec<f64>, b: Vec<f64>| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        };
        Ok(if self.amps.len() >= PAR_MIN {
            self.amps.par_iter().enumerate().fold(|| vec![0.0; size], fold).reduce(|| vec![0.0; size], add)
        } else {
            self.amps.iter().enumerate().fold(vec![0.0; size], fold)
        })
    }

    /// Samples `reg`, collapses and renormalizes the joint state.
    pub fn measure(&mut self, reg: &str, rng: &mut Rng) -> Result<BitVec> {
        let r = self.layout.register(reg)?.clone();
        let probs = self.marginal(reg)?;
        let total: f64 = probs.iter().sum();
        let mut u = rng.gen::<f64>() * total;
        let mut outcome = probs.len() - 1;
        for (v, p) in probs.iter().enumerate() {
            if u < *p {
                outcome = v;
                break;
            }
            u -= p;
        }
        while probs[outcome] == 0.0 {
            // only reachable through rounding at the tail
            outcome -= 1;
        }
        let scale = 1.0 / probs[outcome].sqrt();
        let m = r.field_mask();
        let want = (outcome << r.offset()) & m;
        let f = |(i, a): (usize, &mut C)| {
            if i & m == want {
                *a *= scale;
            } else {
                *a = C::new(0.0, 0.0);
            }
        };
        if self.amps.len() >= PAR_MIN {
            self.amps.par_iter_mut().enumerate().for_each(f);
        } else {
            self.amps.iter_mut().enumerate().for_each(f);
        }
        Ok(BitVec::masked(r.width(), outcome as u32))
    }

    /// Tensors on a fresh `|0⟩` register in the least significant position.
    pub fn append_register(&mut self, name: &str, width: u32) -> Result<()> {
        let layout = self.layout.appended(name, width)?;
        let mut amps = vec![C::new(0.0, 0.0); layout.dim()];
        for (i, a) in self.amps.iter().enumerate() {
            amps[i << width] = *a;
        }
        self.layout = layout;
        self.amps = amps;
        Ok(())
    }

    /// CSV rows `index,re,im` for amplitudes with modulus above 1e-12.
    pub fn dump_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "re", "im"])?;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() > 1e-12 {
                w.write_record(&[i.to_string(), a.re.to_string(), a.im.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::LedgerTag;
    use crate::util::rng_from_seed;

    fn close(a: C, b: C) -> bool {
        (a - b).norm() < 1e-9
    }

    fn layout(spec: &[(&str, u32)]) -> RegisterLayout {
        RegisterLayout::new(spec).unwrap()
    }

    #[test]
    fn init_and_hadamard() {
        let mut s = QState::init(layout(&[("a", 1)]));
        s.hadamard("a").unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(s.amps[0], C::new(h, 0.0)) && close(s.amps[1], C::new(h, 0.0)));
        let mut s = QState::init(layout(&[("a", 2)]));
        let before = s.clone();
        s.hadamard("a").unwrap();
        assert!(s.amps.iter().all(|a| close(*a, C::new(0.5, 0.0))));
        s.hadamard("a").unwrap();
        assert!((s.fidelity(&before).unwrap() - 1.0).abs() < 1e-9);
        assert!(s.hadamard("zz").is_err());
        assert_eq!(QState::init(layout(&[("a", 1), ("b", 1)])).amps.len(), 4);
    }

    #[test]
    fn oracle_xors_into_output() {
        let mut ledger = QueryLedger::new();
        let id = OracleSpec::new(2, 2, LedgerTag::PublicFn, 1, |x| x);
        for x in 0..4 {
            let mut s = QState::basis(layout(&[("x", 2), ("y", 2)]), &[("x", x)]).unwrap();
            s.apply_oracle(&id, &["x"], "y", &mut ledger).unwrap();
            let idx = (x as usize) << 2 | x as usize;
            assert!(close(s.amps[idx], C::new(1.0, 0.0)));
        }
        assert_eq!(ledger.public_evals(), 4);
        let zero = OracleSpec::new(2, 2, LedgerTag::Internal, 1, |_| 0);
        let mut s = QState::init(layout(&[("x", 2), ("y", 2)]));
        s.hadamard("x").unwrap();
        let before = s.clone();
        s.apply_oracle(&zero, &["x"], "y", &mut ledger).unwrap();
        assert!((s.fidelity(&before).unwrap() - 1.0).abs() < 1e-12);
        let wide = OracleSpec::new(3, 2, LedgerTag::Internal, 1, |x| x);
        assert!(matches!(s.apply_oracle(&wide, &["x"], "y", &mut ledger), Err(Error::WidthMismatch { .. })));
    }

    #[test]
    fn one_iteration_finds_one_of_four() {
        // sin θ = 1/2, so sin²(3θ) = 1
        let mut s = QState::init(layout(&[("a", 2)]));
        s.hadamard("a").unwrap();
        s.phase_flip_if(&["a"], |v| v[0] == 2).unwrap();
        s.grover_diffusion("a", &Reference::Uniform).unwrap();
        assert!((s.amps[2].norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn diffusion_fixed_point_and_involution() {
        let mut s = QState::init(layout(&[("a", 3), ("b", 2)]));
        s.hadamard("a").unwrap();
        let uniform = s.clone();
        s.grover_diffusion("a", &Reference::Uniform).unwrap();
        assert!((s.fidelity(&uniform).unwrap() - 1.0).abs() < 1e-12);
        s.hadamard("b").unwrap();
        s.phase_flip_where(|i| i % 3 == 0);
        let before = s.clone();
        s.grover_diffusion("b", &Reference::Uniform).unwrap();
        s.grover_diffusion("b", &Reference::Uniform).unwrap();
        assert!((s.fidelity(&before).unwrap() - 1.0).abs() < 1e-9);
        s.reflect_about(&uniform).unwrap();
        s.reflect_about(&uniform).unwrap();
        assert!((s.fidelity(&before).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn measurement_follows_born_rule_and_collapses() {
        let mut rng = rng_from_seed(3);
        let mut s = QState::basis(layout(&[("a", 2)]), &[("a", 0b01)]).unwrap();
        assert_eq!(s.measure("a", &mut rng).unwrap().bits(), 0b01);
        let mut ones = 0;
        for _ in 0..10_000 {
            let mut s = QState::init(layout(&[("a", 1)]));
            s.hadamard("a").unwrap();
            ones += s.measure("a", &mut rng).unwrap().bits();
        }
        // 3σ = 150
        assert!((ones as i64 - 5000).abs() < 150, "{ones}");
        let mut s = QState::init(layout(&[("a", 3), ("b", 1)]));
        s.hadamard("a").unwrap();
        let first = s.measure("a", &mut rng).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert_eq!(s.measure("a", &mut rng).unwrap(), first);
    }

    #[test]
    fn flag_flip_and_append() {
        let mut s = QState::init(layout(&[("a", 2)]));
        s.hadamard("a").unwrap();
        s.append_register("f", 1).unwrap();
        assert_eq!(s.layout().register("f").unwrap().offset(), 0);
        s.flip_flag_if("f", |i| (i >> 1) == 3).unwrap();
        assert!(close(s.amps[0b111], C::new(0.5, 0.0)));
        assert!(close(s.amps[0b110], C::new(0.0, 0.0)));
        let mut buf = Vec::new();
        s.dump_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 5);
    }
}
