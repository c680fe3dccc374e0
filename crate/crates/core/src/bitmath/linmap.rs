use crate::util::mask;
use crate::{Error, Result};

use super::{BitMatrix, BitVec, Field, FieldElem};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    /// x ↦ c·x in GF(2^w), c ≠ 0.
    FieldConst { field: Field, c: u32 },
    /// columns[j] is the image of e_j.
    Columns(Vec<u32>),
}

impl Kind {
    #[inline]
    fn apply(&self, x: u32) -> u32 {
        match self {
            Kind::FieldConst { field, c } => field.mul(*c, x),
            Kind::Columns(cols) => {
                let mut acc = 0;
                let mut x = x;
                while x != 0 {
                    let j = x.trailing_zeros();
                    acc ^= cols[j as usize];
                    x &= x - 1;
                }
                acc
            }
        }
    }
}

/// An invertible GF(2)-linear map on `{0,1}^w` with its inverse cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    width: u32,
    forward: Kind,
    backward: Kind,
}

impl LinMap {
    pub fn identity(width: u32) -> Self {
        let cols: Vec<u32> = (0..width).map(|j| 1 << j).collect();
        Self { width, forward: Kind::Columns(cols.clone()), backward: Kind::Columns(cols) }
    }

    /// Multiplication by a non-zero field constant.
    pub fn field_const(c: FieldElem) -> Result<Self> {
        let field = c.field();
        let inv = c.inverse().ok_or(Error::ZeroMap)?;
        Ok(Self {
            width: field.width(),
            forward: Kind::FieldConst { field, c: c.value() },
            backward: Kind::FieldConst { field, c: inv.value() },
        })
    }

    /// Square matrix whose first row produces the most significant output bit.
    pub fn from_matrix(m: &BitMatrix) -> Result<Self> {
        let w = m.width();
        if m.row_count() != w as usize {
            return Err(Error::WidthMismatch { expected: w, actual: m.row_count() as u32 });
        }
        let rows = m.words();
        // output bit (w-1-i) comes from row i
        let cols: Vec<u32> = (0..w)
            .map(|j| {
                rows.iter()
                    .enumerate()
                    .filter(|(_, &r)| r & (1 << j) != 0)
                    .fold(0, |acc, (i, _)| acc | (1 << (w - 1 - i as u32)))
            })
            .collect();
        let inverse = invert_columns(&cols, w).ok_or(Error::SingularMatrix)?;
        Ok(Self { width: w, forward: Kind::Columns(cols), backward: Kind::Columns(inverse) })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn apply_word(&self, x: u32) -> u32 {
        self.forward.apply(x & mask(self.width))
    }

    #[inline]
    pub fn apply_inverse_word(&self, y: u32) -> u32 {
        self.backward.apply(y & mask(self.width))
    }

    pub fn apply(&self, x: BitVec) -> Result<BitVec> {
        if x.width() != self.width {
            return Err(Error::WidthMismatch { expected: self.width, actual: x.width() });
        }
        Ok(BitVec::masked(self.width, self.apply_word(x.bits())))
    }

    pub fn inverse(&self) -> LinMap {
        Self { width: self.width, forward: self.backward.clone(), backward: self.forward.clone() }
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &LinMap) -> Result<LinMap> {
        if self.width != inner.width {
            return Err(Error::WidthMismatch { expected: self.width, actual: inner.width });
        }
        if let (
            Kind::FieldConst { field: f1, c: a },
            Kind::FieldConst { field: f2, c: b },
            Kind::FieldConst { c: ai, .. },
            Kind::FieldConst { c: bi, .. },
        ) = (&self.forward, &inner.forward, &self.backward, &inner.backward)
        {
            if f1 == f2 {
                return Ok(Self {
                    width: self.width,
                    forward: Kind::FieldConst { field: *f1, c: f1.mul(*a, *b) },
                    backward: Kind::FieldConst { field: *f1, c: f1.mul(*ai, *bi) },
                });
            }
        }
        let cols: Vec<u32> = (0..self.width).map(|j| self.apply_word(inner.apply_word(1 << j))).collect();
        let inv: Vec<u32> =
            (0..self.width).map(|j| inner.apply_inverse_word(self.apply_inverse_word(1 << j))).collect();
        Ok(Self { width: self.width, forward: Kind::Columns(cols), backward: Kind::Columns(inv) })
    }
}

/// Gauss-Jordan on column images; `None` when singular.
fn invert_columns(cols: &[u32], w: u32) -> Option<Vec<u32>> {
    // Work with rows of the matrix A where A e_j = cols[j]: row i, column j = bit i of cols[j].
    let n = w as usize;
    let mut a: Vec<u32> =
        (0..n).map(|i| (0..n).fold(0, |acc, j| acc | (((cols[j] >> i) & 1) << j))).collect();
    let mut inv: Vec<u32> = (0..n).map(|i| 1 << i).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r] & (1 << col) != 0)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        for r in 0..n {
            if r != col && a[r] & (1 << col) != 0 {
                a[r] ^= a[col];
                inv[r] ^= inv[col];
            }
        }
    }
    // inv rows now describe A^{-1}; convert back to column images
    Some((0..n).map(|j| (0..n).fold(0, |acc, i| acc | (((inv[i] >> j) & 1) << i))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rng_from_seed;
    use rand::Rng;

    fn gf16() -> Field {
        Field::with_default_modulus(4).unwrap()
    }

    fn is_bijection(map: &LinMap) -> bool {
        let n = 1u32 << map.width();
        let mut seen = vec![false; n as usize];
        for x in 0..n {
            let y = map.apply_word(x) as usize;
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        true
    }

    #[test]
    fn identity_and_field_constant() {
        let id = LinMap::identity(4);
        for x in 0..16 {
            assert_eq!(id.apply_word(x), x);
        }
        let two = LinMap::field_const(gf16().elem(0x2).unwrap()).unwrap();
        assert_eq!(two.apply(BitVec::new(4, 0x8).unwrap()).unwrap().bits(), 0x3);
        assert!(LinMap::field_const(gf16().elem(0).unwrap()).is_err());
    }

    #[test]
    fn inverse_round_trips_exhaustively() {
        let f = gf16();
        for c in 1..16 {
            let l = LinMap::field_const(f.elem(c).unwrap()).unwrap();
            let li = l.inverse();
            let lii = li.inverse();
            for x in 0..16 {
                assert_eq!(li.apply_word(l.apply_word(x)), x);
                assert_eq!(lii.apply_word(x), l.apply_word(x));
            }
        }
    }

    #[test]
    fn matrix_maps_and_singularity() {
        let id = BitMatrix::from_words(3, &[0b100, 0b010, 0b001]).unwrap();
        let l = LinMap::from_matrix(&id).unwrap();
        for x in 0..8 {
            assert_eq!(l.apply_word(x), x);
        }
        let singular = BitMatrix::from_words(3, &[0b110, 0b011, 0b101]).unwrap();
        assert!(matches!(LinMap::from_matrix(&singular), Err(Error::SingularMatrix)));
    }

    #[test]
    fn random_invertible_matrices_are_bijective() {
        let mut rng = rng_from_seed(11);
        let mut tested = 0;
        while tested < 20 {
            let w = rng.gen_range(2..=12u32);
            let rows: Vec<u32> = (0..w).map(|_| rng.gen_range(0..(1u32 << w))).collect();
            let m = BitMatrix::from_words(w, &rows).unwrap();
            match LinMap::from_matrix(&m) {
                Ok(l) => {
                    assert!(is_bijection(&l));
                    for x in (0..(1u32 << w)).step_by(7) {
                        assert_eq!(l.apply_inverse_word(l.apply_word(x)), x);
                    }
                    tested += 1;
                }
                Err(Error::SingularMatrix) => assert!(m.rank() < w),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn composition_of_field_and_matrix_maps() {
        let f = Field::with_default_modulus(6).unwrap();
        let a = LinMap::field_const(f.elem(0x15).unwrap()).unwrap();
        let b = LinMap::field_const(f.elem(0x2A).unwrap()).unwrap();
        let m = LinMap::from_matrix(
            &BitMatrix::from_words(6, &[0b100000, 0b110000, 0b001000, 0b000101, 0b000010, 0b000001]).unwrap(),
        )
        .unwrap();
        let ab = a.compose(&b).unwrap();
        let am = a.compose(&m).unwrap();
        for x in 0..64 {
            assert_eq!(ab.apply_word(x), a.apply_word(b.apply_word(x)));
            assert_eq!(am.apply_word(x), a.apply_word(m.apply_word(x)));
            assert_eq!(am.apply_inverse_word(am.apply_word(x)), x);
        }
        assert!(is_bijection(&am));
    }
}
