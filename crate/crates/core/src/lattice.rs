//! Transforms over the subset lattice `2^[n]`, exact binomials, and GF(2)
//! elimination on characteristic vectors.

use std::ops::{AddAssign, SubAssign};

use crate::error::{Error, Result};
use crate::mask::{GroundSize, SetMask};

/// A value per subset of `[n]`, indexed by [`SetMask`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeVector<T> {
    n: GroundSize,
    values: Vec<T>,
}

impl<T: Copy + Default> LatticeVector<T> {
    pub fn zeros(n: GroundSize) -> Result<Self> {
        n.require_dense()?;
        Ok(LatticeVector { n, values: vec![T::default(); n.universe()] })
    }

    pub fn from_values(n: GroundSize, values: Vec<T>) -> Result<Self> {
        n.require_dense()?;
        if values.len() != n.universe() {
            return Err(Error::InvalidParameter(format!(
                "lattice vector for n={n} needs {} entries, got {}",
                n.universe(),
                values.len()
            )));
        }
        Ok(LatticeVector { n, values })
    }

    /// Indicator vector of a list of sets.
    pub fn indicator(n: GroundSize, sets: impl IntoIterator<Item = SetMask>, one: T) -> Result<Self> {
        let mut v = Self::zeros(n)?;
        for s in sets {
            s.check(n)?;
            v.values[s.index()] = one;
        }
        Ok(v)
    }
}

impl<T> LatticeVector<T> {
    pub fn n(&self) -> GroundSize {
        self.n
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn get(&self, a: SetMask) -> &T {
        &self.values[a.index()]
    }
}

/// Runs `step(lo, hi)` for every pair `(A, A ∪ {d})` with `d ∉ A`, one
/// dimension at a time.
fn per_dimension<T>(values: &mut [T], n: u32, mut step: impl FnMut(&mut T, &mut T)) {
    for d in 0..n {
        let half = 1usize << d;
        for block in values.chunks_exact_mut(half * 2) {
            let (lo, hi) = block.split_at_mut(half);
            for (l, h) in lo.iter_mut().zip(hi) {
                step(l, h);
            }
        }
    }
}

/// `out[A] = Σ_{B ⊆ A} v[B]`.
pub fn zeta_subset<T: Copy + AddAssign>(v: &LatticeVector<T>) -> LatticeVector<T> {
    let mut values = v.values.clone();
    per_dimension(&mut values, v.n.get(), |lo, hi| *hi += *lo);
    LatticeVector { n: v.n, values }
}

/// `out[A] = Σ_{B ⊇ A} v[B]`.
pub fn zeta_superset<T: Copy + AddAssign>(v: &LatticeVector<T>) -> LatticeVector<T> {
    let mut values = v.values.clone();
    per_dimension(&mut values, v.n.get(), |lo, hi| *lo += *hi);
    LatticeVector { n: v.n, values }
}

/// Inverse of [`zeta_subset`].
pub fn mobius_subset<T: Copy + SubAssign>(v: &LatticeVector<T>) -> LatticeVector<T> {
    let mut values = v.values.clone();
    per_dimension(&mut values, v.n.get(), |lo, hi| *hi -= *lo);
    LatticeVector { n: v.n, values }
}

/// Exact `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binomial(n: u32, k: i64) -> Result<u128> {
    if k < 0 || k > n as i64 {
        return Ok(0);
    }
    let k = (k as u32).min(n - k as u32);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul((n - i) as u128).ok_or(Error::Overflow { n, k: k as i64 })? / (i + 1) as u128;
    }
    Ok(acc)
}

/// `C(n, k)` for ground sizes where overflow cannot happen.
pub(crate) fn choose(n: u32, k: i64) -> u128 {
    debug_assert!(n <= 64);
    binomial(n, k).expect("C(n, k) fits in 128 bits for n <= 64")
}

/// One reduced row: a characteristic vector and the input indices whose XOR
/// produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisRow {
    pub mask: SetMask,
    /// Bit `i` set iff input vector `i` is part of the combination.
    pub combination: u128,
}

impl BasisRow {
    fn lead(&self) -> u32 {
        63 - self.mask.bits().leading_zeros()
    }
}

/// Row-reduced basis over GF(2), rows ordered by descending leading bit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Gf2Basis {
    rows: Vec<BasisRow>,
}

impl Gf2Basis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rows(&self) -> &[BasisRow] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `(mask, combination)` against the basis. Returns the residue.
    pub fn reduce(&self, mut mask: SetMask, mut combination: u128) -> (SetMask, u128) {
        for row in &self.rows {
            if mask.bits() >> row.lead() & 1 == 1 {
                mask = mask.symmetric_difference(row.mask);
                combination ^= row.combination;
            }
        }
        (mask, combination)
    }

    /// Inserts a nonzero residue, keeping leading bits distinct and descending.
    fn insert(&mut self, row: BasisRow) {
        debug_assert!(!row.mask.is_empty());
        let lead = row.lead();
        let at = self.rows.partition_point(|r| r.lead() > lead);
        debug_assert!(self.rows.get(at).is_none_or(|r| r.lead() != lead));
        self.rows.insert(at, row);
    }
}

fn combination_indices(combination: u128) -> Vec<usize> {
    (0..128).filter(|&i| combination >> i & 1 == 1).collect()
}

/// Finds a nonempty set of input indices whose masks XOR to zero, or `None`
/// when the vectors are linearly independent over GF(2).
///
/// Elimination is incremental in input order, so the certificate is the
/// first dependency closed by the earliest possible input.
pub fn gf2_dependency(vectors: &[SetMask]) -> Result<Option<Vec<usize>>> {
    if let Some(i) = vectors.iter().position(|v| v.is_empty()) {
        return Err(Error::Precondition(format!("vector {i} is the empty set")));
    }
    let mut basis = Gf2Basis::new();
    for (i, &v) in vectors.iter().enumerate() {
        // A dependency must appear among the first 65 vectors of a 64-bit space.
        debug_assert!(i < 128);
        let (residue, combination) = basis.reduce(v, 1u128 << i);
        if residue.is_empty() {
            let indices = combination_indices(combination);
            let xor = indices.iter().fold(0u64, |acc, &j| acc ^ vectors[j].bits());
            assert_eq!(xor, 0, "GF(2) certificate does not cancel");
            return Ok(Some(indices));
        }
        basis.insert(BasisRow { mask: residue, combination });
    }
    Ok(None)
}
