use std::sync::Arc;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{Permutation, Variant};
use crate::bitmath::{BitVec, Field, LinMap};
use crate::util::{derive_seed, mask, rng_from_seed, Rng};
use crate::{Error, Result};

pub const DESCRIPTOR_SCHEMA_VERSION: u32 = 1;

const MAX_KEY_DRAWS: u32 = 10_000;
const POLYMAC_E_SALT: u64 = 0x504f_4c59_4d41_4345;
const PUBLIC_SALT: u64 = 0x7075_626c_6963;

/// TPP-PRF linear-map constants, each a multiplier in GF(2^n).
///
/// `l13, l14, l23, l24, l33, l34` must be non-zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TppMaps {
    pub l11: u32,
    pub l12: u32,
    pub l13: u32,
    pub l14: u32,
    pub l21: u32,
    pub l22: u32,
    pub l23: u32,
    pub l24: u32,
    pub l31: u32,
    pub l32: u32,
    pub l33: u32,
    pub l34: u32,
    pub l35: u32,
    pub l36: u32,
}

impl TppMaps {
    /// Every map the identity: the construction collapses to a sum of two
    /// Even-Mansour ciphers plus a linear term.
    pub fn identity() -> Self {
        Self {
            l11: 1, l12: 1, l13: 1, l14: 1, l21: 1, l22: 1, l23: 1, l24: 1,
            l31: 1, l32: 1, l33: 1, l34: 1, l35: 1, l36: 1,
        }
    }

    /// Random non-zero constants.
    pub fn random(field: &Field, rng: &mut Rng) -> Self {
        let mut nz = || rng.gen_range(1..field.order());
        Self {
            l11: nz(), l12: nz(), l13: nz(), l14: nz(), l21: nz(), l22: nz(), l23: nz(), l24: nz(),
            l31: nz(), l32: nz(), l33: nz(), l34: nz(), l35: nz(), l36: nz(),
        }
    }
}

#[derive(Clone, Debug)]
struct TppLinear {
    maps: TppMaps,
    l13: LinMap,
    l14: LinMap,
    l23: LinMap,
    l24: LinMap,
    l33: LinMap,
    l34: LinMap,
}

impl TppLinear {
    fn new(field: &Field, maps: TppMaps) -> Result<Self> {
        let lin = |c: u32| LinMap::field_const(field.elem(c)?);
        Ok(Self {
            maps,
            l13: lin(maps.l13)?,
            l14: lin(maps.l14)?,
            l23: lin(maps.l23)?,
            l24: lin(maps.l24)?,
            l33: lin(maps.l33)?,
            l34: lin(maps.l34)?,
        })
    }
}

/// Requires the truncated period to stay non-zero after dropping `t` low
/// input bits (and keeping only `p` high bits when `p` is set).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationGuard {
    pub t: u32,
    pub p: Option<u32>,
}

/// The secret quantities a periodic family built from the instance exposes.
///
/// Additive families are periodic with `period` at indices `base` and
/// `base ⊕ period`; indexed families only at `base`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SecretState {
    pub index_width: u32,
    pub input_width: u32,
    pub period: u32,
    pub base: u32,
    pub additive: bool,
}

impl SecretState {
    pub fn good_indices(&self) -> Vec<u32> {
        let mut v = vec![self.base];
        if self.additive && self.period != 0 {
            v.push(self.base ^ self.period);
        }
        v.sort_unstable();
        v
    }
}

/// Serializable description sufficient to rebuild an instance bit-exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDescriptor {
    pub schema_version: u32,
    pub variant: Variant,
    pub n: u32,
    pub d: u32,
    pub kappa: u32,
    pub perm_seed: u64,
    pub field_modulus: Option<u32>,
    pub betas: Option<[BitVec; 2]>,
    pub tpp: Option<TppMaps>,
    pub keys: Option<Vec<BitVec>>,
    pub redacted: bool,
}

#[derive(Clone, Debug)]
pub struct CipherInstance {
    variant: Variant,
    n: u32,
    d: u32,
    kappa: u32,
    perm_seed: u64,
    field: Option<Field>,
    keys: Vec<u32>,
    betas: (u32, u32),
    tpp: Option<Arc<TppLinear>>,
    perms: Vec<Permutation>,
    /// `(E_{k2}, E_{k4})`, refreshed whenever keys change.
    polymac_e: Option<(Permutation, Permutation)>,
}

/// Fluent construction of [`CipherInstance`]s.
#[derive(Clone, Debug)]
pub struct InstanceBuilder {
    variant: Variant,
    n: u32,
    d: u32,
    kappa: Option<u32>,
    perm_seed: u64,
    key_seed: u64,
    keys: Option<Vec<u32>>,
    modulus: Option<u32>,
    tpp: Option<TppMaps>,
    betas: Option<(u32, u32)>,
    allow_degenerate: bool,
    guard: Option<TruncationGuard>,
}

impl InstanceBuilder {
    pub fn new(variant: Variant, n: u32) -> Self {
        Self {
            variant,
            n,
            d: 2,
            kappa: None,
            perm_seed: 0,
            key_seed: 1,
            keys: None,
            modulus: None,
            tpp: None,
            betas: None,
            allow_degenerate: false,
            guard: None,
        }
    }

    pub fn seeds(mut self, perm_seed: u64, key_seed: u64) -> Self {
        self.perm_seed = perm_seed;
        self.key_seed = key_seed;
        self
    }

    /// Same value for public and secret material.
    pub fn seed(self, seed: u64) -> Self {
        self.seeds(derive_seed(seed, PUBLIC_SALT), derive_seed(seed, !PUBLIC_SALT))
    }

    /// Domain-separation width for DS-SoEM.
    pub fn domain_bits(mut self, d: u32) -> Self {
        self.d = d;
        self
    }

    /// Index width of the Even-Mansour permutation family.
    pub fn kappa(mut self, kappa: u32) -> Self {
        self.kappa = Some(kappa);
        self
    }

    pub fn keys(mut self, keys: Vec<u32>) -> Self {
        self.keys = Some(keys);
        self
    }

    pub fn modulus(mut self, modulus: u32) -> Self {
        self.modulus = Some(modulus);
        self
    }

    pub fn tpp_maps(mut self, maps: TppMaps) -> Self {
        self.tpp = Some(maps);
        self
    }

    pub fn betas(mut self, beta0: u32, beta1: u32) -> Self {
        self.betas = Some((beta0, beta1));
        self
    }

    pub fn allow_degenerate(mut self, allow: bool) -> Self {
        self.allow_degenerate = allow;
        self
    }

    pub fn truncation_guard(mut self, t: u32, p: Option<u32>) -> Self {
        self.guard = Some(TruncationGuard { t, p });
        self
    }

    pub fn build(&self) -> Result<CipherInstance> {
        let mut inst = self.public_part()?;
        if let Some(keys) = &self.keys {
            inst.set_keys(keys)?;
            if let Some(reason) = self.rejection(&inst) {
                return Err(Error::Degenerate(reason));
            }
            return Ok(inst);
        }
        let mut rng = rng_from_seed(self.key_seed);
        for _ in 0..MAX_KEY_DRAWS {
            let keys = inst.random_keys(&mut rng);
            inst.set_keys(&keys)?;
            if self.rejection(&inst).is_none() {
                return Ok(inst);
            }
        }
        Err(Error::Degenerate(format!("no acceptable key in {MAX_KEY_DRAWS} draws")))
    }

    fn rejection(&self, inst: &CipherInstance) -> Option<String> {
        if !self.allow_degenerate {
            if let Some(reason) = inst.degeneracy() {
                return Some(reason);
            }
        }
        let guard = self.guard?;
        let s = inst.secret_state();
        let w = s.input_width;
        if guard.t >= w {
            return Some(format!("truncation t={} leaves no input bits", guard.t));
        }
        let keep = guard.p.unwrap_or(w - guard.t);
        if keep == 0 || keep > w - guard.t {
            return Some(format!("split p={keep} outside 1..={}", w - guard.t));
        }
        (s.period >> (w - keep) == 0).then(|| "truncated period is zero".to_string())
    }

    fn public_part(&self) -> Result<CipherInstance> {
        let (v, n) = (self.variant, self.n);
        let needs_field = matches!(v, Variant::PolyMAC | Variant::TPPPRF);
        let field = if needs_field {
            Some(match self.modulus {
                Some(m) => Field::new(n, m)?,
                None => Field::with_default_modulus(n)?,
            })
        } else {
            None
        };
        if v == Variant::DSSoEM && !(1..=n.saturating_sub(2)).contains(&self.d) {
            return Err(Error::OutOfRange(format!("DS-SoEM needs 1 <= d <= n-2, got d={} n={n}", self.d)));
        }
        let kappa = match v {
            Variant::EvenMansour => {
                let k = self.kappa.unwrap_or(n);
                if !(1..=10).contains(&k) {
                    return Err(Error::OutOfRange(format!("Even-Mansour family index width {k} not in 1..=10")));
                }
                k
            }
            Variant::DSSoEM => n - self.d,
            _ => n,
        };
        let s = self.perm_seed;
        let perm = |label: u64| Permutation::seeded(n, derive_seed(s, label));
        let perms = match v {
            Variant::EvenMansour => (0..1u64 << kappa).map(perm).collect::<Result<Vec<_>>>()?,
            Variant::XopEM | Variant::SoEM22 | Variant::TPPPRF => vec![perm(1)?, perm(2)?],
            Variant::SUMPIP => {
                let p = perm(1)?;
                let q = p.inverted();
                vec![p, q]
            }
            Variant::DSSoEM => vec![perm(1)?],
            Variant::PolyMAC => {
                if !(super::permutation::MIN_WIDTH..=super::permutation::MAX_WIDTH).contains(&n) {
                    return Err(Error::OutOfRange(format!("PolyMAC width {n} out of range")));
                }
                Vec::new()
            }
        };
        let mut public_rng = rng_from_seed(derive_seed(s, PUBLIC_SALT));
        let tpp = match (v, &field) {
            (Variant::TPPPRF, Some(f)) => {
                let maps = self.tpp.unwrap_or_else(|| TppMaps::random(f, &mut public_rng));
                Some(Arc::new(TppLinear::new(f, maps)?))
            }
            _ => None,
        };
        let betas = match v {
            Variant::PolyMAC => {
                let (b0, b1) = self.betas.unwrap_or_else(|| {
                    let b0 = public_rng.gen_range(0..1u32 << n);
                    let b1 = (b0 ^ public_rng.gen_range(1..1u32 << n)) & mask(n);
                    (b0, b1)
                });
                if b0 == b1 || b0 > mask(n) || b1 > mask(n) {
                    return Err(Error::Config("PolyMAC fixed blocks must be distinct n-bit values".into()));
                }
                (b0, b1)
            }
            _ => (0, 0),
        };
        Ok(CipherInstance {
            variant: v,
            n,
            d: if v == Variant::DSSoEM { self.d } else { 0 },
            kappa,
            perm_seed: s,
            field,
            keys: Vec::new(),
            betas,
            tpp,
            perms,
            polymac_e: None,
        })
    }
}

impl CipherInstance {
    pub fn builder(variant: Variant, n: u32) -> InstanceBuilder {
        InstanceBuilder::new(variant, n)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Block (or field) width.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Index width of the periodic family built from this instance.
    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn field(&self) -> Option<Field> {
        self.field
    }

    pub fn keys(&self) -> &[u32] {
        &self.keys
    }

    pub fn betas(&self) -> (u32, u32) {
        self.betas
    }

    pub fn tpp_maps(&self) -> Option<TppMaps> {
        self.tpp.as_ref().map(|t| t.maps)
    }

    /// Width of [`eval`](Self::eval)'s argument.
    pub fn input_width(&self) -> u32 {
        match self.variant {
            Variant::DSSoEM => self.n - self.d,
            Variant::PolyMAC => 2 * self.n,
            _ => self.n,
        }
    }

    pub fn output_width(&self) -> u32 {
        self.n
    }

    /// Width of the input of the periodic family.
    pub fn family_input_width(&self) -> u32 {
        match self.variant {
            Variant::DSSoEM => self.n - self.d,
            _ => self.n,
        }
    }

    pub fn permutations(&self) -> &[Permutation] {
        &self.perms
    }

    fn key_widths(&self) -> Vec<u32> {
        match self.variant {
            Variant::EvenMansour => vec![self.kappa, self.n, self.n],
            v => vec![self.n; v.key_count()],
        }
    }

    fn set_keys(&mut self, keys: &[u32]) -> Result<()> {
        let widths = self.key_widths();
        if keys.len() != widths.len() {
            return Err(Error::Config(format!("{} expects {} keys, got {}", self.variant, widths.len(), keys.len())));
        }
        for (&k, &w) in keys.iter().zip(&widths) {
            if k > mask(w) {
                return Err(Error::ValueOutOfRange { value: k as u64, width: w });
            }
        }
        self.keys = keys.to_vec();
        if self.variant == Variant::PolyMAC {
            self.polymac_e = Some((self.keyed_e(keys[1]), self.keyed_e(keys[3])));
        }
        Ok(())
    }

    fn random_keys(&self, rng: &mut Rng) -> Vec<u32> {
        self.key_widths().into_iter().map(|w| rng.gen_range(0..=mask(w))).collect()
    }

    /// Reason the current key is rejected by the default policy.
    pub fn degeneracy(&self) -> Option<String> {
        let k = &self.keys;
        let reason = match self.variant {
            Variant::EvenMansour if k[1] == 0 => "k1 = 0 gives a zero period",
            Variant::SoEM22 | Variant::SUMPIP if k[0] == 0 => "k1 = 0 gives a zero period",
            Variant::SoEM22 | Variant::SUMPIP if k[0] == k[1] => "k1 = k2",
            Variant::XopEM if k[0] == 0 => "k1 = 0 gives a zero period",
            Variant::XopEM if k[0] == k[2] => "k1 = k3",
            Variant::DSSoEM => {
                let (a, b) = (self.msb(k[0]), self.msb(k[1]));
                if a == 0 {
                    "msb(k1) = 0 gives a zero period"
                } else if a == b {
                    "msb(k1) = msb(k2)"
                } else {
                    return None;
                }
            }
            Variant::PolyMAC if k[0] == 0 || k[2] == 0 => "zero hashing key",
            Variant::PolyMAC if k[0] == k[2] => "k1 = k3 gives a zero period",
            Variant::TPPPRF => {
                let s = self.secret_state();
                if s.period == 0 {
                    "k1 = 0 gives a zero period"
                } else if s.period == s.base {
                    "the two good indices coincide with zero"
                } else {
                    return None;
                }
            }
            _ => return None,
        };
        Some(reason.to_string())
    }

    #[inline]
    fn msb(&self, k: u32) -> u32 {
        k >> self.d
    }

    #[inline]
    fn pair(&self) -> (&Permutation, &Permutation) {
        (&self.perms[0], &self.perms[1])
    }

    fn keyed_e(&self, key: u32) -> Permutation {
        Permutation::seeded(self.n, derive_seed(self.perm_seed ^ POLYMAC_E_SALT, key as u64))
            .expect("PolyMAC width validated at construction")
    }

    /// Linear part `e(x) = l31·l11·x ⊕ l32·l21·x`.
    #[inline]
    pub fn tpp_e(&self, x: u32) -> u32 {
        match (&self.tpp, &self.field) {
            (Some(t), Some(f)) => {
                let m = t.maps;
                f.mul(m.l31, f.mul(m.l11, x)) ^ f.mul(m.l32, f.mul(m.l21, x))
            }
            _ => 0,
        }
    }

    /// Constant `C = l31·l12·k1 ⊕ l32·l22·k2 ⊕ l35·k3 ⊕ l36·k4`.
    pub fn tpp_constant(&self) -> u32 {
        match (&self.tpp, &self.field) {
            (Some(t), Some(f)) => {
                let (m, k) = (t.maps, &self.keys);
                f.mul(m.l31, f.mul(m.l12, k[0]))
                    ^ f.mul(m.l32, f.mul(m.l22, k[1]))
                    ^ f.mul(m.l35, k[2])
                    ^ f.mul(m.l36, k[3])
            }
            _ => 0,
        }
    }

    /// Keyed output on a word of [`input_width`](Self::input_width) bits.
    /// PolyMAC takes `m1 ∥ m2`.
    pub fn eval(&self, x: u32) -> u32 {
        let k = &self.keys;
        match self.variant {
            Variant::EvenMansour => self.perms[k[0] as usize].apply(x ^ k[1]) ^ k[2],
            Variant::XopEM => {
                let (p1, p2) = self.pair();
                p1.apply(x ^ k[0]) ^ p2.apply(x ^ k[2]) ^ k[1] ^ k[3]
            }
            Variant::SoEM22 | Variant::SUMPIP => {
                let (p1, p2) = self.pair();
                p1.apply(x ^ k[0]) ^ p2.apply(x ^ k[1]) ^ k[0] ^ k[1]
            }
            Variant::DSSoEM => {
                let p = &self.perms[0];
                let ones = mask(self.d);
                p.apply((x ^ self.msb(k[0])) << self.d) ^ p.apply(((x ^ self.msb(k[1])) << self.d) | ones) ^ k[0] ^ k[1]
            }
            Variant::PolyMAC => {
                let m1 = x >> self.n;
                let m2 = x & mask(self.n);
                self.eval_polymac_words(m1, m2)
            }
            Variant::TPPPRF => {
                let t = self.tpp.as_ref().expect("TPP maps present");
                let (p1, p2) = self.pair();
                t.l33.apply_word(p1.apply(t.l13.apply_word(x) ^ t.l14.apply_word(k[0])))
                    ^ t.l34.apply_word(p2.apply(t.l23.apply_word(x) ^ t.l24.apply_word(k[1])))
                    ^ self.tpp_e(x)
                    ^ self.tpp_constant()
            }
        }
    }

    fn eval_polymac_words(&self, m1: u32, m2: u32) -> u32 {
        let f = self.field.expect("PolyMAC field present");
        let k = &self.keys;
        let h1 = f.mul(f.mul(k[0], k[0]), m1) ^ f.mul(k[0], m2);
        let h3 = f.mul(f.mul(k[2], k[2]), m1) ^ f.mul(k[2], m2);
        let (e2, e4) = self.polymac_e.as_ref().expect("PolyMAC keys set");
        e2.apply(h1) ^ e4.apply(h3)
    }

    /// Width-checked evaluation.
    pub fn encrypt(&self, x: BitVec) -> Result<BitVec> {
        if x.width() != self.input_width() {
            return Err(Error::WidthMismatch { expected: self.input_width(), actual: x.width() });
        }
        Ok(BitVec::masked(self.output_width(), self.eval(x.bits())))
    }

    /// Two-block PolyMAC tag.
    pub fn eval_polymac(&self, m1: crate::bitmath::FieldElem, m2: crate::bitmath::FieldElem) -> Result<BitVec> {
        let f = match (self.variant, self.field) {
            (Variant::PolyMAC, Some(f)) => f,
            _ => return Err(Error::UnsupportedVariant(self.variant.to_string())),
        };
        if m1.field() != f || m2.field() != f {
            return Err(Error::Config("message blocks are not in the instance field".into()));
        }
        Ok(BitVec::masked(self.n, self.eval_polymac_words(m1.value(), m2.value())))
    }

    /// Full table of PolyMAC's two keyed permutations, for reuse in tight loops.
    pub fn polymac_tables(&self) -> Option<(Permutation, Permutation)> {
        self.polymac_e.clone()
    }

    /// Secret period and base index of this instance's periodic family.
    pub fn secret_state(&self) -> SecretState {
        let k = &self.keys;
        let w = self.family_input_width();
        let (period, base, additive) = match self.variant {
            Variant::EvenMansour => (k[1], k[0], false),
            Variant::SoEM22 | Variant::SUMPIP => (k[0], k[1], true),
            Variant::XopEM => (k[0], k[2], true),
            Variant::DSSoEM => (self.msb(k[0]), self.msb(k[1]), true),
            Variant::PolyMAC => {
                let f = self.field.expect("PolyMAC field present");
                let beta = self.betas.0 ^ self.betas.1;
                (f.mul(k[0] ^ k[2], beta), f.mul(k[0], beta), true)
            }
            Variant::TPPPRF => {
                let t = self.tpp.as_ref().expect("TPP maps present");
                let a = t.l13.apply_inverse_word(t.l14.apply_word(k[0]));
                let b = t.l23.apply_inverse_word(t.l24.apply_word(k[1]));
                (a, b, true)
            }
        };
        SecretState { index_width: self.kappa, input_width: w, period, base, additive }
    }

    /// Key-free part of the cipher under secret state `(a, b)`; the cipher
    /// equals this plus a key-dependent constant. PolyMAC has no such split.
    pub fn keyless_part(&self, a: u32, b: u32, x: u32) -> Option<u32> {
        Some(match self.variant {
            Variant::EvenMansour => self.perms.get(b as usize)?.apply(x ^ a),
            Variant::XopEM | Variant::SoEM22 | Variant::SUMPIP => {
                let (p1, p2) = self.pair();
                p1.apply(x ^ a) ^ p2.apply(x ^ b)
            }
            Variant::DSSoEM => {
                let p = &self.perms[0];
                p.apply((x ^ a) << self.d) ^ p.apply(((x ^ b) << self.d) | mask(self.d))
            }
            Variant::TPPPRF => {
                let t = self.tpp.as_ref()?;
                let (p1, p2) = self.pair();
                t.l33.apply_word(p1.apply(t.l13.apply_word(x ^ a)))
                    ^ t.l34.apply_word(p2.apply(t.l23.apply_word(x ^ b)))
                    ^ self.tpp_e(x)
            }
            Variant::PolyMAC => return None,
        })
    }

    /// Evaluator for the equivalent key `(a, b, c)` with `c` fixed by one
    /// known pair `(x0, y0)`.
    pub fn equivalent_cipher(&self, a: u32, b: u32, x0: u32, y0: u32) -> Option<impl Fn(u32) -> u32 + '_> {
        let c = y0 ^ self.keyless_part(a, b, x0)?;
        Some(move |x| self.keyless_part(a, b, x).map_or(u32::MAX, |v| v ^ c))
    }

    pub fn descriptor(&self, redact: bool) -> InstanceDescriptor {
        let widths = self.key_widths();
        InstanceDescriptor {
            schema_version: DESCRIPTOR_SCHEMA_VERSION,
            variant: self.variant,
            n: self.n,
            d: self.d,
            kappa: self.kappa,
            perm_seed: self.perm_seed,
            field_modulus: self.field.map(|f| f.modulus()),
            betas: (self.variant == Variant::PolyMAC)
                .then(|| [BitVec::masked(self.n, self.betas.0), BitVec::masked(self.n, self.betas.1)]),
            tpp: self.tpp_maps(),
            keys: (!redact).then(|| self.keys.iter().zip(&widths).map(|(&k, &w)| BitVec::masked(w, k)).collect()),
            redacted: redact,
        }
    }

    pub fn from_descriptor(desc: &InstanceDescriptor) -> Result<Self> {
        if desc.schema_version != DESCRIPTOR_SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported descriptor schema {}", desc.schema_version)));
        }
        let keys = desc
            .keys
            .as_ref()
            .ok_or_else(|| Error::Config("descriptor has redacted keys".into()))?;
        let mut b = InstanceBuilder::new(desc.variant, desc.n)
            .seeds(desc.perm_seed, 0)
            .keys(keys.iter().map(|k| k.bits()).collect())
            .allow_degenerate(true);
        if desc.variant == Variant::DSSoEM {
            b = b.domain_bits(desc.d);
        }
        if desc.variant == Variant::EvenMansour {
            b = b.kappa(desc.kappa);
        }
        if let Some(m) = desc.field_modulus {
            b = b.modulus(m);
        }
        if let Some(t) = desc.tpp {
            b = b.tpp_maps(t);
        }
        if let Some([b0, b1]) = desc.betas {
            b = b.betas(b0.bits(), b1.bits());
        }
        b.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(inst: &CipherInstance) -> Vec<u32> {
        (0..1u32 << inst.input_width()).map(|x| inst.eval(x)).collect()
    }

    #[test]
    fn soem22_zero_key_and_cancellation() {
        let inst = CipherInstance::builder(Variant::SoEM22, 4).seed(5).keys(vec![0, 0]).allow_degenerate(true).build().unwrap();
        let (p1, p2) = (&inst.permutations()[0], &inst.permutations()[1]);
        for x in 0..16 {
            assert_eq!(inst.eval(x), p1.apply(x) ^ p2.apply(x));
        }
        // P1 = P2 with k1 = k2 cancels: rebuild a SoEM22 on identical permutations by hand
        let p = p1.clone();
        for x in 0..16u32 {
            let k = 0b1011;
            assert_eq!(p.apply(x ^ k) ^ p.apply(x ^ k) ^ k ^ k, 0);
        }
    }

    #[test]
    fn soem22_matches_independent_formula() {
        let inst = CipherInstance::builder(Variant::SoEM22, 4).seed(17).build().unwrap();
        let (k1, k2) = (inst.keys()[0], inst.keys()[1]);
        let p1 = Permutation::seeded(4, derive_seed(inst.perm_seed, 1)).unwrap();
        let p2 = Permutation::seeded(4, derive_seed(inst.perm_seed, 2)).unwrap();
        for x in 0..16 {
            assert_eq!(inst.eval(x), p1.table()[(x ^ k1) as usize] ^ p2.table()[(x ^ k2) as usize] ^ k1 ^ k2);
        }
    }

    #[test]
    fn sumpip_is_soem22_with_inverse() {
        let s = CipherInstance::builder(Variant::SUMPIP, 5).seed(3).build().unwrap();
        let p = &s.permutations()[0];
        let (k1, k2) = (s.keys()[0], s.keys()[1]);
        for x in 0..32 {
            assert_eq!(s.eval(x), p.apply(x ^ k1) ^ p.apply_inverse(x ^ k2) ^ k1 ^ k2);
        }
    }

    #[test]
    fn xopem_specializes_to_soem22() {
        let x = CipherInstance::builder(Variant::XopEM, 5).seed(8).build().unwrap();
        let (k1, k2) = (x.keys()[0], x.keys()[2]);
        let via_xop = CipherInstance::builder(Variant::XopEM, 5)
            .seeds(x.perm_seed, 0)
            .keys(vec![k1, k1, k2, k2])
            .build()
            .unwrap();
        let soem = CipherInstance::builder(Variant::SoEM22, 5).seeds(x.perm_seed, 0).keys(vec![k1, k2]).build().unwrap();
        assert_eq!(table(&via_xop), table(&soem));
    }

    #[test]
    fn ds_soem_matches_formula() {
        let inst = CipherInstance::builder(Variant::DSSoEM, 6).seed(2).build().unwrap();
        assert_eq!(inst.input_width(), 4);
        let p = Permutation::seeded(6, derive_seed(inst.perm_seed, 1)).unwrap();
        let (k1, k2) = (inst.keys()[0], inst.keys()[1]);
        for x in 0..16u32 {
            let want = p.apply(((x ^ (k1 >> 2)) << 2) | 0b00) ^ p.apply(((x ^ (k2 >> 2)) << 2) | 0b11) ^ k1 ^ k2;
            assert_eq!(inst.eval(x), want);
        }
        let zero = CipherInstance::builder(Variant::DSSoEM, 6).seeds(inst.perm_seed, 0).keys(vec![0, 0]).allow_degenerate(true).build().unwrap();
        for x in 0..16u32 {
            assert_eq!(zero.eval(x), p.apply(x << 2) ^ p.apply((x << 2) | 3));
        }
        assert!(CipherInstance::builder(Variant::DSSoEM, 6).keys(vec![0b1101_00, 0b1101_11]).build().is_err());
    }

    #[test]
    fn polymac_special_cases() {
        let f = Field::with_default_modulus(4).unwrap();
        let inst = CipherInstance::builder(Variant::PolyMAC, 4)
            .seed(4)
            .keys(vec![0x7, 0x3, 0x7, 0x9])
            .allow_degenerate(true)
            .build()
            .unwrap();
        let (e2, e4) = inst.polymac_tables().unwrap();
        for m1 in 0..16 {
            for m2 in 0..16 {
                let h = f.mul(f.mul(7, 7), m1) ^ f.mul(7, m2);
                let tag = inst.eval_polymac(f.elem(m1).unwrap(), f.elem(m2).unwrap()).unwrap();
                assert_eq!(tag.bits(), e2.apply(h) ^ e4.apply(h));
            }
        }
        let z = f.elem(0).unwrap();
        assert_eq!(inst.eval_polymac(z, z).unwrap().bits(), e2.apply(0) ^ e4.apply(0));
        let other = Field::new(4, 0b11001).unwrap();
        assert!(inst.eval_polymac(other.elem(1).unwrap(), z).is_err());
    }

    #[test]
    fn tpp_identity_maps_reduce_to_soem22_plus_linear() {
        let inst = CipherInstance::builder(Variant::TPPPRF, 5)
            .seed(6)
            .tpp_maps(TppMaps::identity())
            .build()
            .unwrap();
        let k = inst.keys();
        let (p1, p2) = (&inst.permutations()[0], &inst.permutations()[1]);
        let c = k[0] ^ k[1] ^ k[2] ^ k[3];
        for x in 0..32 {
            // e(x) = x ⊕ x = 0 with all maps the identity
            assert_eq!(inst.eval(x), p1.apply(x ^ k[0]) ^ p2.apply(x ^ k[1]) ^ c);
        }
    }

    #[test]
    fn degenerate_keys_are_policy_controlled() {
        let b = CipherInstance::builder(Variant::SoEM22, 4).keys(vec![5, 5]);
        assert!(matches!(b.build(), Err(Error::Degenerate(_))));
        assert!(b.clone().allow_degenerate(true).build().is_ok());
        let g = CipherInstance::builder(Variant::SoEM22, 6).truncation_guard(2, None).keys(vec![0b000011, 1]);
        assert!(g.build().is_err());
        for seed in 0..50 {
            let inst = CipherInstance::builder(Variant::SoEM22, 6).seed(seed).truncation_guard(2, None).build().unwrap();
            assert_ne!(inst.keys()[0] >> 2, 0);
        }
    }

    #[test]
    fn descriptor_round_trip_and_redaction() {
        for v in Variant::ALL {
            let inst = CipherInstance::builder(v, 6).seed(21).kappa(3).build().unwrap();
            let desc = inst.descriptor(false);
            let json = serde_json::to_string(&desc).unwrap();
            let back = CipherInstance::from_descriptor(&serde_json::from_str(&json).unwrap()).unwrap();
            assert_eq!(table(&inst), table(&back), "{v}");
            let red = inst.descriptor(true);
            assert!(red.keys.is_none() && red.redacted);
            assert!(CipherInstance::from_descriptor(&red).is_err());
        }
    }

    #[test]
    fn equivalent_key_reproduces_cipher() {
        for v in [Variant::SoEM22, Variant::XopEM, Variant::SUMPIP, Variant::DSSoEM, Variant::TPPPRF, Variant::EvenMansour] {
            let inst = CipherInstance::builder(v, 6).seed(31).kappa(3).build().unwrap();
            let s = inst.secret_state();
            let y0 = inst.eval(0);
            let eq = inst.equivalent_cipher(s.period, s.base, 0, y0).unwrap();
            for x in 0..1u32 << inst.input_width() {
                assert_eq!(eq(x), inst.eval(x), "{v}");
            }
        }
    }
}
