use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::util::mask;
use crate::{Error, Result};

/// GF(2^w) for 2 ≤ w ≤ 16, given by a reduction polynomial with bit `w` set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Field {
    width: u32,
    modulus: u32,
}

/// Reduction polynomials used when none is configured. w = 4 is x⁴+x+1 and
/// w = 8 is x⁸+x⁴+x³+x+1; the rest are low-weight irreducibles.
pub fn default_modulus(width: u32) -> Option<u32> {
    Some(match width {
        2 => 0x7,
        3 => 0xB,
        4 => 0x13,
        5 => 0x25,
        6 => 0x43,
        7 => 0x83,
        8 => 0x11B,
        9 => 0x211,
        10 => 0x409,
        11 => 0x805,
        12 => 0x1053,
        13 => 0x201B,
        14 => 0x4443,
        15 => 0x8003,
        16 => 0x1002B,
        _ => return None,
    })
}

/// Carry-less product of two polynomials below degree 32 each (result up to 63 bits).
#[inline]
fn clmul(a: u32, b: u32) -> u64 {
    let (a, mut b) = (a as u64, b);
    let mut acc = 0u64;
    let mut i = 0;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a << i;
        }
        b >>= 1;
        i += 1;
    }
    acc
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_mod(mut a: u64, m: u64) -> u64 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

/// Trial division by every polynomial of degree 1..=deg/2.
pub fn is_irreducible(poly: u32) -> bool {
    let p = poly as u64;
    let d = degree(p);
    if d < 1 {
        return false;
    }
    (2u64..(1u64 << (d / 2 + 1))).all(|q| poly_mod(p, q) != 0)
}

impl Field {
    pub fn new(width: u32, modulus: u32) -> Result<Self> {
        if !(2..=16).contains(&width) {
            return Err(Error::OutOfRange(format!("field width {width} not in 2..=16")));
        }
        if degree(modulus as u64) != width as i32 {
            return Err(Error::Config(format!(
                "modulus {modulus:#x} does not have degree {width}"
            )));
        }
        if !is_irreducible(modulus) {
            return Err(Error::Config(format!("modulus {modulus:#x} is reducible")));
        }
        Ok(Self { width, modulus })
    }

    pub fn with_default_modulus(width: u32) -> Result<Self> {
        let modulus = default_modulus(width)
            .ok_or_else(|| Error::OutOfRange(format!("field width {width} not in 2..=16")))?;
        Self::new(width, modulus)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        1 << self.width
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        poly_mod(clmul(a, b), self.modulus as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via a^(2^w - 2); `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, (1u64 << self.width) - 2))
    }

    pub fn elem(&self, value: u32) -> Result<FieldElem> {
        if value & !mask(self.width) != 0 {
            return Err(Error::ValueOutOfRange { value: value as u64, width: self.width });
        }
        Ok(FieldElem { field: *self, value })
    }
}

/// An element of a specific GF(2^w).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    field: Field,
    value: u32,
}

impl FieldElem {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        if self.field != rhs.field {
            return Err(Error::Config(format!(
                "field mismatch: GF(2^{})/{:#x} vs GF(2^{})/{:#x}",
                self.field.width, self.field.modulus, rhs.field.width, rhs.field.modulus
            )));
        }
        Ok(Self { field: self.field, value: self.field.mul(self.value, rhs.value) })
    }

    pub fn inverse(self) -> Option<Self> {
        self.field.inv(self.value).map(|value| Self { field: self.field, value })
    }
}

/// Product in GF(2^w). Operands from different fields are a contract violation.
pub fn gf2n_mul(a: FieldElem, b: FieldElem) -> FieldElem {
    a.checked_mul(b).expect("gf2n_mul operands from different fields")
}

impl Mul for FieldElem {
    type Output = FieldElem;

    fn mul(self, rhs: Self) -> Self {
        gf2n_mul(self, rhs)
    }
}

impl Add for FieldElem {
    type Output = FieldElem;

    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.field, rhs.field, "field addition across different fields");
        Self { field: self.field, value: self.value ^ rhs.value }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf16() -> Field {
        Field::with_default_modulus(4).unwrap()
    }

    /// Schoolbook shift-and-add multiply with reduction after every shift.
    fn schoolbook(a: u32, b: u32, w: u32, modulus: u32) -> u32 {
        let mut acc = 0;
        let mut a = a;
        for i in 0..w {
            if b & (1 << i) != 0 {
                acc ^= a;
            }
            a <<= 1;
            if a & (1 << w) != 0 {
                a ^= modulus;
            }
        }
        acc
    }

    #[test]
    fn multiplication_examples() {
        let f = gf16();
        let e = |v| f.elem(v).unwrap();
        assert_eq!(gf2n_mul(e(0x1), e(0xA)).value(), 0xA);
        assert_eq!(gf2n_mul(e(0x0), e(0x7)).value(), 0x0);
        assert_eq!(schoolbook(0x8, 0x2, 4, 0x13), 0x3);
        assert_eq!(gf2n_mul(e(0x8), e(0x2)).value(), 0x3);
    }

    #[test]
    fn matches_schoolbook_for_all_default_fields() {
        for w in 2..=10 {
            let f = Field::with_default_modulus(w).unwrap();
            for a in (0..f.order()).step_by(3) {
                for b in (0..f.order()).step_by(5) {
                    assert_eq!(f.mul(a, b), schoolbook(a, b, w, f.modulus()), "w={w} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn default_moduli_are_irreducible() {
        for w in 2..=16 {
            let m = default_modulus(w).unwrap();
            assert!(is_irreducible(m), "w={w} modulus {m:#x}");
            Field::new(w, m).unwrap();
        }
        assert!(!is_irreducible(0b10101)); // (x²+x+1)²
        assert!(Field::new(4, 0b10101).is_err());
    }

    #[test]
    fn gf16_axioms_exhaustive() {
        let f = gf16();
        for a in 0..16 {
            assert_eq!(f.mul(a, 1), a);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..16 {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..16 {
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
                }
            }
        }
    }

    #[test]
    fn sampled_axioms_gf256() {
        let f = Field::with_default_modulus(8).unwrap();
        for a in 1..256 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        for (a, b, c) in [(0x53, 0xCA, 0x11), (0xFF, 0x02, 0x80), (0x01, 0x9B, 0x3C)] {
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
        }
        // AES reference product
        assert_eq!(f.mul(0x57, 0x83), 0xC1);
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = gf16().elem(3).unwrap();
        let b = Field::with_default_modulus(5).unwrap().elem(3).unwrap();
        assert!(a.checked_mul(b).is_err());
        assert!(gf16().elem(16).is_err());
    }
}
