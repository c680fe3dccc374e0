use std::sync::Arc;

use rand::seq::SliceRandom;

use crate::util::rng_from_seed;
use crate::{Error, Result};

pub const MIN_WIDTH: u32 = 2;
pub const MAX_WIDTH: u32 = 20;

/// Uniform random permutation of `{0,1}^n` drawn by a seeded shuffle.
///
/// Tables are shared, so clones are cheap.
#[derive(Clone, Debug)]
pub struct Permutation {
    width: u32,
    seed: u64,
    forward: Arc<Vec<u32>>,
    inverse: Arc<Vec<u32>>,
}

impl PartialEq for Permutation {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width && self.forward == other.forward
    }
}

impl Eq for Permutation {}

impl Permutation {
    pub fn seeded(width: u32, seed: u64) -> Result<Self> {
        if !(MIN_WIDTH..=MAX_WIDTH).contains(&width) {
            return Err(Error::OutOfRange(format!("permutation width {width} not in {MIN_WIDTH}..={MAX_WIDTH}")));
        }
        let mut forward: Vec<u32> = (0..1u32 << width).collect();
        forward.shuffle(&mut rng_from_seed(seed));
        let mut inverse = vec![0u32; forward.len()];
        for (x, &y) in forward.iter().enumerate() {
            inverse[y as usize] = x as u32;
        }
        Ok(Self { width, seed, forward: Arc::new(forward), inverse: Arc::new(inverse) })
    }

    /// Same tables with the directions swapped.
    pub fn inverted(&self) -> Self {
        Self { width: self.width, seed: self.seed, forward: self.inverse.clone(), inverse: self.forward.clone() }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.forward[x as usize]
    }

    #[inline]
    pub fn apply_inverse(&self, y: u32) -> u32 {
        self.inverse[y as usize]
    }

    pub fn table(&self) -> &[u32] {
        &self.forward
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bijective_deterministic_and_invertible() {
        let p = Permutation::seeded(2, 9).unwrap();
        let mut image = p.table().to_vec();
        image.sort_unstable();
        assert_eq!(image, vec![0, 1, 2, 3]);
        let a = Permutation::seeded(8, 77).unwrap();
        let b = Permutation::seeded(8, 77).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, Permutation::seeded(8, 78).unwrap());
        for x in 0..256 {
            assert_eq!(a.apply_inverse(a.apply(x)), x);
            assert_eq!(a.inverted().apply(a.apply(x)), x);
        }
        assert!(Permutation::seeded(1, 0).is_err());
        assert!(Permutation::seeded(21, 0).is_err());
    }
}
