use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    /// FX-style Even-Mansour over a key-indexed public family: `P_{k0}(x ⊕ k1) ⊕ k2`.
    EvenMansour,
    XopEM,
    SoEM22,
    SUMPIP,
    DSSoEM,
    PolyMAC,
    TPPPRF,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::EvenMansour,
        Variant::XopEM,
        Variant::SoEM22,
        Variant::SUMPIP,
        Variant::DSSoEM,
        Variant::PolyMAC,
        Variant::TPPPRF,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::EvenMansour => "even-mansour",
            Variant::XopEM => "xopem",
            Variant::SoEM22 => "soem22",
            Variant::SUMPIP => "sumpip",
            Variant::DSSoEM => "ds-soem",
            Variant::PolyMAC => "polymac",
            Variant::TPPPRF => "tpp-prf",
        }
    }

    /// Whether the hidden period sits in a public term, enabling offline attacks.
    pub fn is_decoupled(self) -> bool {
        !matches!(self, Variant::PolyMAC)
    }

    /// Number of secret key words.
    pub fn key_count(self) -> usize {
        match self {
            Variant::EvenMansour => 3,
            Variant::SoEM22 | Variant::SUMPIP | Variant::DSSoEM => 2,
            Variant::XopEM | Variant::PolyMAC | Variant::TPPPRF => 4,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Ok(match key.as_str() {
            "em" | "evenmansour" | "fxem" => Variant::EvenMansour,
            "xopem" => Variant::XopEM,
            "soem22" | "soem" => Variant::SoEM22,
            "sumpip" => Variant::SUMPIP,
            "dssoem" => Variant::DSSoEM,
            "polymac" => Variant::PolyMAC,
            "tppprf" | "tpp" => Variant::TPPPRF,
            _ => return Err(Error::Parse(format!("unknown construction `{s}`"))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert_eq!("DS-SoEM".parse::<Variant>().unwrap(), Variant::DSSoEM);
        assert!("feistel".parse::<Variant>().is_err());
    }
}
