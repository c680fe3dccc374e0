use std::fmt;
use std::sync::Arc;

use crate::constructions::{CipherInstance, Variant};
use crate::util::mask;
use crate::{Error, Result};

pub type Func1 = Arc<dyn Fn(u32) -> u32 + Send + Sync>;
pub type Func2 = Arc<dyn Fn(u32, u32) -> u32 + Send + Sync>;

/// Public part `p(i, x) = h(x) ⊕ q1(x) ⊕ q2(x ⊕ i)`.
#[derive(Clone)]
pub struct SumTerms {
    pub h: Func1,
    pub q1: Func1,
    pub q2: Func1,
}

#[derive(Clone)]
pub enum Structure {
    Plain,
    /// `f(i, x) = g1(x) ⊕ g2(x ⊕ i)`; both terms need the secret oracle.
    Coupled { g1: Func1, g2: Func1 },
    /// `f(i, x) = g1(x) ⊕ p(i, x)` with public `p`.
    Decoupled { g1: Func1, p: Func2, sum: Option<SumTerms> },
}

/// Where a family input sits inside the base input space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Lift {
    /// `x << s`.
    Shift(u32),
    /// `x = (c, u)` with `c` the bit above the low `low` bits: `c·dir ⊕ u`.
    Line { dir: u32, low: u32 },
}

impl Default for Lift {
    fn default() -> Self {
        Lift::Shift(0)
    }
}

/// Maps a family input `x` to the `2^t` base inputs `lift(x) | u`, `u < 2^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize)]
pub struct Coset {
    pub t: u32,
    pub lift: Lift,
}

impl Coset {
    pub fn shifted(t: u32, shift: u32) -> Self {
        Self { t, lift: Lift::Shift(shift) }
    }

    pub fn size(&self) -> u64 {
        1 << self.t
    }

    pub fn lift(&self, x: u32) -> u32 {
        match self.lift {
            Lift::Shift(s) => x << s,
            Lift::Line { dir, low } => (((x >> low) & 1) * dir) ^ (x & mask(low)),
        }
    }

    pub fn points(&self, x: u32) -> impl Iterator<Item = u32> {
        let base = self.lift(x);
        (0..1u32 << self.t).map(move |u| base | u)
    }
}

/// `f(i, x)` with widths, structure and per-call costs.
#[derive(Clone)]
pub struct KeyedFunction {
    pub key_width: u32,
    pub input_width: u32,
    pub output_width: u32,
    eval: Func2,
    pub structure: Structure,
    /// The index enters only through `x ⊕ i`.
    pub key_additive: bool,
    /// Secret-oracle evaluations per call.
    pub oracle_cost: u64,
    /// Public-function evaluations per call.
    pub public_cost: u64,
    /// How truncated inputs expand to inputs of `base_oracle`.
    pub coset: Coset,
    /// Untruncated secret oracle for decoupled families.
    pub base_oracle: Option<Func1>,
    pub label: String,
}

impl fmt::Debug for KeyedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.structure {
            Structure::Plain => "plain",
            Structure::Coupled { .. } => "coupled",
            Structure::Decoupled { .. } => "decoupled",
        };
        f.debug_struct("KeyedFunction")
            .field("label", &self.label)
            .field("kind", &kind)
            .field("key_width", &self.key_width)
            .field("input_width", &self.input_width)
            .field("output_width", &self.output_width)
            .field("coset", &self.coset)
            .finish_non_exhaustive()
    }
}

impl KeyedFunction {
    pub fn new(key_width: u32, input_width: u32, output_width: u32, eval: Func2) -> Self {
        Self {
            key_width,
            input_width,
            output_width,
            eval,
            structure: Structure::Plain,
            key_additive: false,
            oracle_cost: 1,
            public_cost: 0,
            coset: Coset::default(),
            base_oracle: None,
            label: String::from("f"),
        }
    }

    pub fn from_fn(
        key_width: u32,
        input_width: u32,
        output_width: u32,
        eval: impl Fn(u32, u32) -> u32 + Send + Sync + 'static,
    ) -> Self {
        Self::new(key_width, input_width, output_width, Arc::new(eval))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn eval(&self, i: u32, x: u32) -> u32 {
        (self.eval)(i, x) & mask(self.output_width)
    }

    pub fn eval_fn(&self) -> Func2 {
        self.eval.clone()
    }

    /// Row `f(i, ·)` over every input.
    pub fn table(&self, i: u32) -> Vec<u32> {
        (0..1u32 << self.input_width).map(|x| self.eval(i, x)).collect()
    }

    /// The secret-oracle term `g1` of a decoupled family.
    pub fn g1(&self) -> Option<&Func1> {
        match &self.structure {
            Structure::Decoupled { g1, .. } => Some(g1),
            _ => None,
        }
    }

    /// The public term `p` of a decoupled family.
    pub fn public_part(&self) -> Option<&Func2> {
        match &self.structure {
            Structure::Decoupled { p, .. } => Some(p),
            _ => None,
        }
    }

    pub fn is_decoupled(&self) -> bool {
        matches!(self.structure, Structure::Decoupled { .. })
    }
}

/// `f(i, x) = g1(x) ⊕ g2(x ⊕ i)`.
pub fn build_xor_type(g1: Func1, g2: Func1, key_width: u32, input_width: u32, output_width: u32) -> Result<KeyedFunction> {
    if key_width != input_width {
        return Err(Error::WidthMismatch { expected: input_width, actual: key_width });
    }
    let (a, b) = (g1.clone(), g2.clone());
    let mut f = KeyedFunction::from_fn(key_width, input_width, output_width, move |i, x| a(x) ^ b(x ^ i));
    f.structure = Structure::Coupled { g1, g2 };
    f.key_additive = true;
    f.label = "xor-type".into();
    Ok(f)
}

/// `f(α, x) = PolyMAC(β0, x) ⊕ PolyMAC(β1, x ⊕ α)` over the instance field.
pub fn polymac_family(inst: &CipherInstance) -> Result<KeyedFunction> {
    if inst.variant() != Variant::PolyMAC {
        return Err(Error::UnsupportedVariant(inst.variant().to_string()));
    }
    let n = inst.n();
    let (b0, b1) = inst.betas();
    let (i0, i1) = (inst.clone(), inst.clone());
    let g1: Func1 = Arc::new(move |x| i0.eval((b0 << n) | x));
    let g2: Func1 = Arc::new(move |y| i1.eval((b1 << n) | y));
    Ok(build_xor_type(g1, g2, n, n, n)?.with_label("polymac"))
}

/// `f(i, x) = E(x) ⊕ P_i(x)`: period `k1` at `i = k0`.
pub fn even_mansour_family(inst: &CipherInstance) -> Result<KeyedFunction> {
    if inst.variant() != Variant::EvenMansour {
        return Err(Error::UnsupportedVariant(inst.variant().to_string()));
    }
    let n = inst.n();
    let e = inst.clone();
    let g1: Func1 = Arc::new(move |x| e.eval(x));
    let perms = inst.permutations().to_vec();
    let p: Func2 = Arc::new(move |i, x| perms[i as usize].apply(x));
    Ok(decoupled(inst.kappa(), n, n, g1, p, None, 1, false, "even-mansour"))
}

/// Decoupled family `f(i, x) = E(x) ⊕ h(x) ⊕ q1(x) ⊕ q2(x ⊕ i)` for the
/// sum constructions.
pub fn build_p_xor_type(inst: &CipherInstance) -> Result<KeyedFunction> {
    let n = inst.n();
    let perms = inst.permutations().to_vec();
    let zero: Func1 = Arc::new(|_| 0);
    let (h, q1, q2): (Func1, Func1, Func1) = match inst.variant() {
        Variant::XopEM | Variant::SoEM22 | Variant::SUMPIP => {
            let (p1, p2) = (perms[0].clone(), perms[1].clone());
            (zero, Arc::new(move |x| p1.apply(x)), Arc::new(move |y| p2.apply(y)))
        }
        Variant::DSSoEM => {
            let d = inst.d();
            let (p, q) = (perms[0].clone(), perms[0].clone());
            (zero, Arc::new(move |x| p.apply(x << d)), Arc::new(move |y| q.apply((y << d) | mask(d))))
        }
        Variant::TPPPRF => {
            let field = inst.field().expect("TPP field");
            let m = inst.tpp_maps().expect("TPP maps");
            let (p1, p2) = (perms[0].clone(), perms[1].clone());
            let e = inst.clone();
            (
                Arc::new(move |x| e.tpp_e(x)),
                Arc::new(move |x| field.mul(m.l33, p1.apply(field.mul(m.l13, x)))),
                Arc::new(move |y| field.mul(m.l34, p2.apply(field.mul(m.l23, y)))),
            )
        }
        v => return Err(Error::UnsupportedVariant(v.to_string())),
    };
    let w = inst.family_input_width();
    let e = inst.clone();
    let g1: Func1 = Arc::new(move |x| e.eval(x));
    let sum = SumTerms { h: h.clone(), q1: q1.clone(), q2: q2.clone() };
    let p: Func2 = Arc::new(move |i, x| h(x) ^ q1(x) ^ q2(x ^ i));
    Ok(decoupled(w, w, n, g1, p, Some(sum), 2, true, inst.variant().name()))
}

/// The natural periodic family of any instance.
pub fn family_for(inst: &CipherInstance) -> Result<KeyedFunction> {
    match inst.variant() {
        Variant::EvenMansour => even_mansour_family(inst),
        Variant::PolyMAC => polymac_family(inst),
        _ => build_p_xor_type(inst),
    }
}

#[allow(clippy::too_many_arguments)]
fn decoupled(
    key_width: u32,
    input_width: u32,
    output_width: u32,
    g1: Func1,
    p: Func2,
    sum: Option<SumTerms>,
    public_terms: u64,
    key_additive: bool,
    label: &str,
) -> KeyedFunction {
    let (a, b) = (g1.clone(), p.clone());
    let mut f = KeyedFunction::from_fn(key_width, input_width, output_width, move |i, x| a(x) ^ b(i, x));
    f.base_oracle = Some(g1.clone());
    f.structure = Structure::Decoupled { g1, p, sum };
    f.public_cost = public_terms;
    f.key_additive = key_additive;
    f.label = label.into();
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoupling_identity_holds_exhaustively() {
        for v in [Variant::XopEM, Variant::SoEM22, Variant::SUMPIP, Variant::DSSoEM, Variant::TPPPRF, Variant::EvenMansour] {
            let inst = CipherInstance::builder(v, 5).seed(12).kappa(3).domain_bits(1).build().unwrap();
            let f = family_for(&inst).unwrap();
            let (g1, p) = (f.g1().unwrap().clone(), f.public_part().unwrap().clone());
            for i in 0..1u32 << f.key_width {
                for x in 0..1u32 << f.input_width {
                    assert_eq!(f.eval(i, x), (g1(x) ^ p(i, x)) & mask(f.output_width), "{v}");
                }
            }
        }
    }

    #[test]
    fn xor_type_with_equal_terms_and_zero_alpha_is_zero() {
        let g: Func1 = Arc::new(|x| x.wrapping_mul(2654435761) >> 7);
        let f = build_xor_type(g.clone(), g, 4, 4, 8).unwrap();
        assert!((0..16).all(|x| f.eval(0, x) == 0));
        assert!(build_xor_type(Arc::new(|x| x), Arc::new(|x| x), 3, 4, 4).is_err());
    }

    #[test]
    fn unsupported_variants_are_rejected() {
        let pm = CipherInstance::builder(Variant::PolyMAC, 4).seed(1).build().unwrap();
        assert!(matches!(build_p_xor_type(&pm), Err(Error::UnsupportedVariant(_))));
        let em = CipherInstance::builder(Variant::EvenMansour, 4).seed(1).kappa(2).build().unwrap();
        assert!(matches!(build_p_xor_type(&em), Err(Error::UnsupportedVariant(_))));
        assert!(family_for(&pm).is_ok() && family_for(&em).is_ok());
    }
}
