use std::fmt;
use std::ops::BitXor;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::util::{mask, parity};
use crate::{Error, Result};

/// A fixed-width vector over GF(2), at most 32 bits wide.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    width: u32,
    bits: u32,
}

impl BitVec {
    pub const MAX_WIDTH: u32 = 32;

    pub fn new(width: u32, bits: u32) -> Result<Self> {
        if width == 0 || width > Self::MAX_WIDTH {
            return Err(Error::OutOfRange(format!("BitVec width {width} not in 1..=32")));
        }
        if bits & !mask(width) != 0 {
            return Err(Error::ValueOutOfRange { value: bits as u64, width });
        }
        Ok(Self { width, bits })
    }

    /// Keeps only the low `width` bits of `bits`.
    pub fn masked(width: u32, bits: u32) -> Self {
        assert!((1..=Self::MAX_WIDTH).contains(&width), "BitVec width {width} not in 1..=32");
        Self { width, bits: bits & mask(width) }
    }

    pub fn zero(width: u32) -> Self {
        Self::masked(width, 0)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn checked_xor(self, other: Self) -> Result<Self> {
        if self.width != other.width {
            return Err(Error::WidthMismatch { expected: self.width, actual: other.width });
        }
        Ok(Self { width: self.width, bits: self.bits ^ other.bits })
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Self) -> u32 {
        assert_eq!(self.width, other.width, "dot product of mismatched widths");
        parity(self.bits & other.bits)
    }

    /// `self ∥ low`, with `self` in the high bits.
    pub fn concat(self, low: Self) -> Result<Self> {
        Self::new(self.width + low.width, (self.bits << low.width) | low.bits)
    }

    /// Splits into (high `width - low_width` bits, low `low_width` bits).
    pub fn split(self, low_width: u32) -> Result<(Self, Self)> {
        if low_width == 0 || low_width >= self.width {
            return Err(Error::OutOfRange(format!(
                "cannot split {} bits at {low_width}",
                self.width
            )));
        }
        let hi = Self::masked(self.width - low_width, self.bits >> low_width);
        let lo = Self::masked(low_width, self.bits);
        Ok((hi, lo))
    }

    /// The `k` most significant bits.
    pub fn msb(self, k: u32) -> Result<Self> {
        if k == 0 || k > self.width {
            return Err(Error::OutOfRange(format!("msb_{k} of a {}-bit vector", self.width)));
        }
        Ok(Self::masked(k, self.bits >> (self.width - k)))
    }

    /// Parses binary text, or hex with a `0x` prefix, into exactly `width` bits.
    pub fn parse_with_width(text: &str, width: u32) -> Result<Self> {
        let text = text.trim();
        let value = if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
            u64::from_str_radix(hex, 16).map_err(|e| Error::Parse(format!("{text}: {e}")))?
        } else {
            if text.len() as u32 != width {
                return Err(Error::Parse(format!("`{text}` is not a {width}-bit binary string")));
            }
            u64::from_str_radix(text, 2).map_err(|e| Error::Parse(format!("{text}: {e}")))?
        };
        if value > mask(width) as u64 {
            return Err(Error::ValueOutOfRange { value, width });
        }
        Self::new(width, value as u32)
    }
}

impl BitXor for BitVec {
    type Output = BitVec;

    fn bitxor(self, rhs: Self) -> Self {
        self.checked_xor(rhs).expect("XOR of BitVecs with different widths")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.bits, width = self.width as usize)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Error;

    /// Binary text takes its width from the string length; hex takes four bits per digit.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            Self::parse_with_width(s, 4 * hex.len() as u32)
        } else {
            Self::parse_with_width(s, s.len() as u32)
        }
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_is_big_endian() {
        let v = BitVec::new(4, 0b0110).unwrap();
        assert_eq!(v.to_string(), "0110");
        assert_eq!("0110".parse::<BitVec>().unwrap(), v);
        assert_eq!(BitVec::parse_with_width("0x6", 4).unwrap(), v);
        assert_eq!("0xA".parse::<BitVec>().unwrap().width(), 4);
    }

    #[test]
    fn rejects_out_of_range_bits() {
        assert!(BitVec::new(3, 8).is_err());
        assert!(BitVec::new(0, 0).is_err());
        assert!(BitVec::parse_with_width("0x10", 4).is_err());
        assert!(BitVec::parse_with_width("011", 4).is_err());
    }

    #[test]
    fn xor_requires_equal_widths() {
        let a = BitVec::new(3, 0b101).unwrap();
        let b = BitVec::new(4, 0b101).unwrap();
        assert!(a.checked_xor(b).is_err());
        assert_eq!((a ^ BitVec::new(3, 0b011).unwrap()).bits(), 0b110);
    }

    #[test]
    fn split_and_concat() {
        let v = BitVec::new(6, 0b101101).unwrap();
        let (hi, lo) = v.split(2).unwrap();
        assert_eq!(hi.to_string(), "1011");
        assert_eq!(lo.to_string(), "01");
        assert_eq!(hi.concat(lo).unwrap(), v);
        assert_eq!(v.msb(4).unwrap(), hi);
    }

    #[test]
    fn serde_uses_binary_strings() {
        let v = BitVec::new(5, 0b10011).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, "\"10011\"");
        let back: BitVec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }
}
