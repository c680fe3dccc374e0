use crate::util::mask;
use crate::{Error, Result};

use super::BitVec;

/// Rows of equal width over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    width: u32,
    rows: Vec<u32>,
}

/// Outcome of solving for a hidden period from Simon vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodSolution {
    /// The orthogonal complement of the rows is one-dimensional.
    Unique(BitVec),
    /// Zero or several candidate periods remain.
    Indeterminate { nullspace_dim: u32 },
}

impl PeriodSolution {
    pub fn period(&self) -> Option<BitVec> {
        match self {
            PeriodSolution::Unique(s) => Some(*s),
            PeriodSolution::Indeterminate { .. } => None,
        }
    }
}

impl BitMatrix {
    pub fn new(rows: Vec<BitVec>) -> Result<Self> {
        let width = rows
            .first()
            .map(|r| r.width())
            .ok_or_else(|| Error::OutOfRange("BitMatrix needs at least one row".into()))?;
        if let Some(bad) = rows.iter().find(|r| r.width() != width) {
            return Err(Error::WidthMismatch { expected: width, actual: bad.width() });
        }
        Ok(Self { width, rows: rows.iter().map(|r| r.bits()).collect() })
    }

    /// Builds from raw row words, masking each to `width` bits.
    pub fn from_words(width: u32, rows: &[u32]) -> Result<Self> {
        if width == 0 || width > BitVec::MAX_WIDTH {
            return Err(Error::OutOfRange(format!("matrix width {width}")));
        }
        if rows.is_empty() {
            return Err(Error::OutOfRange("BitMatrix needs at least one row".into()));
        }
        Ok(Self { width, rows: rows.iter().map(|r| r & mask(width)).collect() })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = BitVec> + '_ {
        self.rows.iter().map(move |&r| BitVec::masked(self.width, r))
    }

    pub fn words(&self) -> &[u32] {
        &self.rows
    }

    pub fn rank(&self) -> u32 {
        rank_of_words(&self.rows)
    }

    /// Basis of `{ s : row · s = 0 for every row }`.
    pub fn nullspace(&self) -> Vec<BitVec> {
        let (reduced, pivots) = rref(&self.rows, self.width);
        let pivot_cols: u32 = pivots.iter().fold(0, |acc, &(_, c)| acc | (1 << c));
        (0..self.width)
            .rev()
            .filter(|c| pivot_cols & (1 << c) == 0)
            .map(|free| {
                let mut v = 1u32 << free;
                for &(row, col) in &pivots {
                    if reduced[row] & (1 << free) != 0 {
                        v |= 1 << col;
                    }
                }
                BitVec::masked(self.width, v)
            })
            .collect()
    }
}

/// Rank of a list of words over GF(2). Gaussian elimination on the fly.
pub fn rank_of_words(rows: &[u32]) -> u32 {
    // basis[b] holds a reduced vector whose leading bit is b
    let mut basis = [0u32; 32];
    let mut rank = 0;
    for &row in rows {
        let mut v = row;
        while v != 0 {
            let lead = 31 - v.leading_zeros();
            if basis[lead as usize] == 0 {
                basis[lead as usize] = v;
                rank += 1;
                break;
            }
            v ^= basis[lead as usize];
        }
    }
    rank
}

/// Reduced row echelon form; returns the reduced rows and (row, pivot column) pairs.
fn rref(rows: &[u32], width: u32) -> (Vec<u32>, Vec<(usize, u32)>) {
    let mut m = rows.to_vec();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in (0..width).rev() {
        let bit = 1u32 << col;
        let Some(found) = (next..m.len()).find(|&r| m[r] & bit != 0) else {
            continue;
        };
        m.swap(next, found);
        for r in 0..m.len() {
            if r != next && m[r] & bit != 0 {
                m[r] ^= m[next];
            }
        }
        pivots.push((next, col));
        next += 1;
        if next == m.len() {
            break;
        }
    }
    (m, pivots)
}

/// Canonical basis of the row span: the non-zero rows of the reduced echelon form.
pub fn span_basis(rows: &[u32], width: u32) -> Vec<u32> {
    let (m, pivots) = rref(rows, width);
    m.into_iter().take(pivots.len()).collect()
}

pub fn gf2_rank(m: &BitMatrix) -> u32 {
    m.rank()
}

pub fn gf2_nullspace(m: &BitMatrix) -> Vec<BitVec> {
    m.nullspace()
}

/// Solves `s · v = 0` for every Simon vector `v`; a unique non-zero `s` only
/// when the solution space is one-dimensional.
pub fn gf2_solve_period(vectors: &BitMatrix) -> PeriodSolution {
    let basis = vectors.nullspace();
    match basis.as_slice() {
        [s] => PeriodSolution::Unique(*s),
        _ => PeriodSolution::Indeterminate { nullspace_dim: basis.len() as u32 },
    }
}

/// True when `s` is orthogonal to every row.
#[cfg(test)]
fn orthogonal_to_all(rows: &[u32], s: u32) -> bool {
    rows.iter().all(|&r| crate::util::parity(r & s) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::{parity, rng_from_seed};
    use proptest::prelude::*;
    use rand::Rng;

    fn m(width: u32, rows: &[u32]) -> BitMatrix {
        BitMatrix::from_words(width, rows).unwrap()
    }

    /// Independent rank oracle: log2 of the number of distinct row combinations.
    fn span_size_rank(rows: &[u32]) -> u32 {
        let mut span = std::collections::BTreeSet::new();
        for subset in 0u32..(1 << rows.len()) {
            let v = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| subset & (1 << i) != 0)
                .fold(0, |acc, (_, &r)| acc ^ r);
            span.insert(v);
        }
        span.len().trailing_zeros()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(gf2_rank(&m(3, &[0b000, 0b000])), 0);
        assert_eq!(gf2_rank(&m(3, &[0b001, 0b010, 0b100])), 3);
        let rows = [0b011, 0b101, 0b110];
        assert_eq!(span_size_rank(&rows), 2);
        assert_eq!(gf2_rank(&m(3, &rows)), 2);
    }

    #[test]
    fn nullspace_examples() {
        assert!(gf2_nullspace(&m(3, &[0b100, 0b010, 0b001])).is_empty());
        assert_eq!(gf2_nullspace(&m(2, &[0b00])).len(), 2);

        let rows = [0b110, 0b011];
        let brute: Vec<u32> = (1..8).filter(|&s| orthogonal_to_all(&rows, s)).collect();
        assert_eq!(brute, vec![0b111]);
        let basis = gf2_nullspace(&m(3, &rows));
        assert_eq!(basis.iter().map(|b| b.bits()).collect::<Vec<_>>(), brute);
    }

    #[test]
    fn solve_period_examples() {
        assert_eq!(
            gf2_solve_period(&m(3, &[0b100, 0b010, 0b001])),
            PeriodSolution::Indeterminate { nullspace_dim: 0 }
        );
        assert_eq!(gf2_solve_period(&m(2, &[0])), PeriodSolution::Indeterminate { nullspace_dim: 2 });

        // plant s = 101 and draw orthogonal vectors until they span its complement
        let s = 0b101;
        let mut rng = rng_from_seed(7);
        let mut rows = Vec::new();
        while rank_of_words(&rows) < 2 {
            let v: u32 = rng.gen_range(0..8);
            if parity(v & s) == 0 {
                rows.push(v);
            }
        }
        assert_eq!(gf2_solve_period(&m(3, &rows)).period().unwrap().bits(), s);
    }

    #[test]
    fn planted_period_recovery_rate() {
        // w + 3 orthogonal samples recover s in at least 90% of seeded instances
        let w = 8;
        let mut ok = 0;
        for seed in 0..200u64 {
            let mut rng = rng_from_seed(1000 + seed);
            let s = rng.gen_range(1..(1u32 << w));
            let mut rows = Vec::new();
            while rows.len() < (w + 3) as usize {
                let v = rng.gen_range(0..(1u32 << w));
                if parity(v & s) == 0 {
                    rows.push(v);
                }
            }
            if gf2_solve_period(&m(w, &rows)).period().map(|p| p.bits()) == Some(s) {
                ok += 1;
            }
        }
        assert!(ok >= 180, "recovered {ok}/200");
    }

    proptest! {
        #[test]
        fn rank_plus_nullity_is_width(width in 1u32..=12, rows in prop::collection::vec(any::<u32>(), 1..16)) {
            let mat = m(width, &rows);
            let null = mat.nullspace();
            prop_assert_eq!(mat.rank() + null.len() as u32, width);
            for v in &null {
                prop_assert!(orthogonal_to_all(mat.words(), v.bits()));
            }
        }

        #[test]
        fn rank_matches_span_oracle(rows in prop::collection::vec(0u32..64, 1..8)) {
            prop_assert_eq!(rank_of_words(&rows), span_size_rank(&rows));
        }
    }
}
