use serde::Serialize;

use crate::util::mask;
use crate::{Error, Result};

/// Full-backend cap on total qubits.
pub const MAX_QUBITS: u32 = 26;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Register {
    name: String,
    width: u32,
    offset: u32,
}

impl Register {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Index bit position of this register's least significant qubit.
    pub fn offset(&self) -> u32 {
        self.offset
    }

    #[inline]
    pub fn extract(&self, index: usize) -> u32 {
        ((index >> self.offset) as u32) & mask(self.width)
    }

    #[inline]
    pub fn insert(&self, index: usize, value: u32) -> usize {
        let m = (mask(self.width) as usize) << self.offset;
        (index & !m) | (((value & mask(self.width)) as usize) << self.offset)
    }

    #[inline]
    pub(crate) fn field_mask(&self) -> usize {
        (mask(self.width) as usize) << self.offset
    }
}

/// Ordered named registers; the first register holds the most significant bits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegisterLayout {
    registers: Vec<Register>,
    total: u32,
}

impl RegisterLayout {
    pub fn new<S: AsRef<str>>(spec: &[(S, u32)]) -> Result<Self> {
        let total: u32 = spec.iter().map(|(_, w)| *w).sum();
        if total > MAX_QUBITS {
            let widths: Vec<String> = spec.iter().map(|(n, w)| format!("{}={}", n.as_ref(), w)).collect();
            return Err(Error::Config(format!(
                "layout needs {total} qubits, cap is {MAX_QUBITS} ({}); use the hybrid backend",
                widths.join(", ")
            )));
        }
        let mut registers = Vec::with_capacity(spec.len());
        let mut offset = total;
        for (name, width) in spec {
            let name = name.as_ref();
            if *width == 0 {
                return Err(Error::Config(format!("register `{name}` has zero width")));
            }
            if registers.iter().any(|r: &Register| r.name == name) {
                return Err(Error::Config(format!("duplicate register name `{name}`")));
            }
            offset -= width;
            registers.push(Register { name: name.to_string(), width: *width, offset });
        }
        Ok(Self { registers, total })
    }

    pub fn total_qubits(&self) -> u32 {
        self.total
    }

    pub fn dim(&self) -> usize {
        1usize << self.total
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Result<&Register> {
        self.registers.iter().find(|r| r.name == name).ok_or_else(|| Error::UnknownRegister(name.to_string()))
    }

    pub fn width_of(&self, name: &str) -> Result<u32> {
        Ok(self.register(name)?.width)
    }

    /// Layout with `name` appended in the least significant position.
    pub fn appended(&self, name: &str, width: u32) -> Result<Self> {
        let mut spec: Vec<(String, u32)> = self.registers.iter().map(|r| (r.name.clone(), r.width)).collect();
        spec.push((name.to_string(), width));
        Self::new(&spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_are_big_endian() {
        let l = RegisterLayout::new(&[("a", 2), ("b", 3), ("c", 1)]).unwrap();
        assert_eq!(l.total_qubits(), 6);
        assert_eq!(l.register("a").unwrap().offset(), 4);
        assert_eq!(l.register("b").unwrap().offset(), 1);
        assert_eq!(l.register("c").unwrap().offset(), 0);
        let b = l.register("b").unwrap();
        let idx = b.insert(0b11_000_1, 0b101);
        assert_eq!(idx, 0b11_101_1);
        assert_eq!(b.extract(idx), 0b101);
    }

    #[test]
    fn rejects_bad_layouts() {
        assert!(RegisterLayout::new(&[("a", 14), ("b", 13)]).unwrap_err().to_string().contains("a=14"));
        assert!(RegisterLayout::new(&[("a", 0)]).is_err());
        assert!(RegisterLayout::new(&[("a", 1), ("a", 1)]).is_err());
        assert!(matches!(
            RegisterLayout::new(&[("a", 1)]).unwrap().register("z"),
            Err(Error::UnknownRegister(_))
        ));
        assert!(RegisterLayout::new(&[("a", 26)]).is_ok());
    }
}
