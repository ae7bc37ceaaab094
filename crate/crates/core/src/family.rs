//! Set families on `[n]`, the subset counter `μ_F`, and the per-family
//! predicates built on it.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{choose, zeta_subset, zeta_superset, LatticeVector};
use crate::mask::{GroundSize, SetMask};
use crate::perm::permute_mask;

/// A family of distinct subsets of `[n]` with a dense membership table.
///
/// Members are kept in ascending mask order; `layers[i]` counts members of
/// cardinality `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: GroundSize,
    membership: Vec<u64>,
    members: Vec<SetMask>,
    layers: Vec<u64>,
}

impl Family {
    pub fn empty(n: GroundSize) -> Result<Self> {
        n.require_dense()?;
        let words = n.universe().div_ceil(64);
        Ok(Family { n, membership: vec![0; words], members: Vec::new(), layers: vec![0; n.get() as usize + 1] })
    }

    /// Builds a family from an arbitrary list, rejecting duplicates and
    /// out-of-range sets.
    pub fn from_sets(n: GroundSize, sets: impl IntoIterator<Item = SetMask>) -> Result<Self> {
        let mut f = Family::empty(n)?;
        for s in sets {
            s.check(n)?;
            if f.contains(s) {
                return Err(Error::Duplicate(s));
            }
            f.set_bit(s);
        }
        f.rebuild_members();
        Ok(f)
    }

    /// All subsets of `[n]` satisfying `keep`.
    pub fn from_predicate(n: GroundSize, mut keep: impl FnMut(SetMask) -> bool) -> Result<Self> {
        let mut f = Family::empty(n)?;
        for bits in 0..n.universe() as u64 {
            if keep(SetMask(bits)) {
                f.set_bit(SetMask(bits));
            }
        }
        f.rebuild_members();
        Ok(f)
    }

    fn set_bit(&mut self, s: SetMask) {
        self.membership[s.index() / 64] |= 1 << (s.index() % 64);
    }

    fn rebuild_members(&mut self) {
        self.members.clear();
        self.layers.iter_mut().for_each(|l| *l = 0);
        for (w, &word) in self.membership.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let b = rest.trailing_zeros() as u64;
                rest &= rest - 1;
                let m = SetMask(w as u64 * 64 + b);
                self.layers[m.len() as usize] += 1;
                self.members.push(m);
            }
        }
    }

    pub fn n(&self) -> GroundSize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[SetMask] {
        &self.members
    }

    pub fn layers(&self) -> &[u64] {
        &self.layers
    }

    pub fn contains(&self, s: SetMask) -> bool {
        s.fits(self.n) && self.membership[s.index() / 64] >> (s.index() % 64) & 1 == 1
    }

    /// Membership as a 0/1 lattice vector.
    pub fn indicator<T: Copy + Default + From<u8>>(&self) -> LatticeVector<T> {
        LatticeVector::indicator(self.n, self.members.iter().copied(), T::from(1))
            .expect("family is within the dense cap")
    }

    /// Returns a copy with `add` inserted and `remove` taken out.
    pub fn with_changes(&self, add: &[SetMask], remove: &[SetMask]) -> Result<Self> {
        let mut f = self.clone();
        for &r in remove {
            if !f.contains(r) {
                return Err(Error::Precondition(format!("{r} is not a member")));
            }
            f.membership[r.index() / 64] &= !(1 << (r.index() % 64));
        }
        for &a in add {
            a.check(self.n)?;
            if f.contains(a) {
                return Err(Error::Duplicate(a));
            }
            f.set_bit(a);
        }
        f.rebuild_members();
        Ok(f)
    }

    /// Image of the family under a permutation of the ground set, where
    /// `perm[i]` is the image of element `i + 1` (0-based values).
    pub fn permuted(&self, perm: &[u32]) -> Family {
        let sets = self.members.iter().map(|&m| permute_mask(m, perm));
        Family::from_sets(self.n, sets).expect("a permutation maps distinct sets to distinct sets")
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family(n={}, ", self.n)?;
        f.debug_set().entries(self.members.iter().map(|m| m.to_string())).finish()?;
        f.write_str(")")
    }
}

/// Serialized as `{"n": .., "sets": [[elements], ..]}`.
impl Serialize for Family {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let sets: Vec<Vec<u32>> = self.members.iter().map(|m| m.elements().collect()).collect();
        let mut out = serializer.serialize_struct("Family", 2)?;
        out.serialize_field("n", &self.n)?;
        out.serialize_field("sets", &sets)?;
        out.end()
    }
}

impl PartialOrd for Family {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Family {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, &self.members).cmp(&(other.n, &other.members))
    }
}

/// `μ_F(A)` for every `A ⊆ [n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuTable {
    n: GroundSize,
    mu: Vec<u32>,
}

impl MuTable {
    pub fn n(&self) -> GroundSize {
        self.n
    }

    pub fn get(&self, a: SetMask) -> u32 {
        self.mu[a.index()]
    }

    pub fn values(&self) -> &[u32] {
        &self.mu
    }
}

/// Number of members of `f` contained in `a` (including `a` itself), by
/// direct submask enumeration.
pub fn mu_single(f: &Family, a: SetMask) -> u64 {
    a.submasks().filter(|&b| f.contains(b)).count() as u64
}

/// `μ_F` on the whole lattice via the subset-sum transform.
pub fn mu_all(f: &Family) -> MuTable {
    let mu = zeta_subset(&f.indicator::<u32>()).into_values();
    MuTable { n: f.n, mu }
}

/// `Σ_{j=0}^t C(size, j)`: the most members a set of this size may contain
/// in a t-saw family.
pub fn saw_capacity(size: u32, t: u32) -> u128 {
    (0..=t.min(size)).map(|j| choose(size, j as i64)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SawViolation {
    pub set: SetMask,
    pub mu: u64,
    pub capacity: u128,
}

/// First member (ascending mask order) whose `μ` exceeds the t-saw capacity.
pub fn saw_violation(f: &Family, t: u32) -> Option<SawViolation> {
    if f.is_empty() {
        return None;
    }
    let table = mu_all(f);
    f.members().iter().find_map(|&a| {
        let mu = table.get(a) as u64;
        let capacity = saw_capacity(a.len(), t);
        (mu as u128 > capacity).then_some(SawViolation { set: a, mu, capacity })
    })
}

pub fn is_t_saw(f: &Family, t: u32) -> bool {
    saw_violation(f, t).is_none()
}

/// Smallest `t` for which `f` is t-saw.
pub fn min_saw_t(f: &Family) -> u32 {
    if f.is_empty() {
        return 0;
    }
    let table = mu_all(f);
    let ok = |t: u32| f.members().iter().all(|&a| table.get(a) as u128 <= saw_capacity(a.len(), t));
    let (mut lo, mut hi) = (0u32, f.n().get());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// A pair of disjoint members, if any; `(∅, ∅)` when `∅ ∈ F`.
///
/// Counts, for every `A`, the members inside the complement of `A` with a
/// superset-sum over complemented members. The reported pair is the first
/// offending `A` in mask order together with the smallest member disjoint
/// from it.
pub fn disjoint_pair(f: &Family) -> Option<(SetMask, SetMask)> {
    if f.is_empty() {
        return None;
    }
    let n = f.n();
    let complements = f.members().iter().map(|m| m.complement(n));
    let v = LatticeVector::indicator(n, complements, 1u32).expect("dense cap");
    // disjoint[A] = |{B ∈ F : comp(B) ⊇ A}| = |{B ∈ F : B ∩ A = ∅}|
    let disjoint = zeta_superset(&v);
    let a = *f.members().iter().find(|&&a| *disjoint.get(a) > 0)?;
    let b = *f.members().iter().find(|b| b.is_disjoint(a))?;
    Some((a, b))
}

pub fn is_intersecting(f: &Family) -> bool {
    disjoint_pair(f).is_none()
}

/// No member is a proper subset of another.
pub fn is_antichain(f: &Family) -> bool {
    let table = mu_all(f);
    f.members().iter().all(|&a| table.get(a) == 1)
}

/// The bubbling-up move: returns `(F ∪ {B}) \ {C}` for a saw family `F`,
/// `C ⊂ B ⊂ A`, `|B| = |A| - 1`, `A, C ∈ F`, `B ∉ F`.
pub fn bubble_up(f: &Family, a: SetMask, b: SetMask, c: SetMask) -> Result<Family> {
    let n = f.n();
    for s in [a, b, c] {
        s.check(n)?;
    }
    let fail = |what: &str| Err(Error::Precondition(what.to_string()));
    if !c.is_proper_subset_of(b) {
        return fail("C must be a proper subset of B");
    }
    if !b.is_proper_subset_of(a) {
        return fail("B must be a proper subset of A");
    }
    if b.len() + 1 != a.len() {
        return fail("|B| must equal |A| - 1");
    }
    if !f.contains(a) {
        return fail("A must be a member of F");
    }
    if f.contains(b) {
        return fail("B must not be a member of F");
    }
    if !f.contains(c) {
        return fail("C must be a member of F");
    }
    if let Some(v) = saw_violation(f, 1) {
        return Err(Error::Precondition(format!("F must be saw, but {} has mu {} > {}", v.set, v.mu, v.capacity)));
    }
    f.with_changes(&[b], &[c])
}
