//! Subsets of a small ground set `[n] = {1, ..., n}` packed into machine words.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground size for operations that allocate a table of `2^n` entries.
pub const DENSE_CAP: u32 = 24;

/// Largest ground size a [`SetMask`] can address.
pub const MAX_GROUND: u32 = 63;

/// Number of ground elements `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct GroundSize(u32);

impl GroundSize {
    pub fn new(n: u32) -> Result<Self> {
        if (1..=MAX_GROUND).contains(&n) {
            Ok(GroundSize(n))
        } else {
            Err(Error::GroundSize(n))
        }
    }

    /// Like [`GroundSize::new`], additionally enforcing [`DENSE_CAP`].
    pub fn dense(n: u32) -> Result<Self> {
        let g = Self::new(n)?;
        g.require_dense()?;
        Ok(g)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn require_dense(self) -> Result<()> {
        if self.0 > DENSE_CAP {
            return Err(Error::DenseCap { n: self.0, cap: DENSE_CAP });
        }
        Ok(())
    }

    /// `2^n`, the number of subsets. Only meaningful under the dense cap.
    pub fn universe(self) -> usize {
        1usize << self.0
    }

    pub fn full(self) -> SetMask {
        SetMask((1u64 << self.0) - 1)
    }
}

impl TryFrom<u32> for GroundSize {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        GroundSize::new(n)
    }
}

impl From<GroundSize> for u32 {
    fn from(g: GroundSize) -> u32 {
        g.0
    }
}

impl fmt::Display for GroundSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A subset of `[n]`: bit `i - 1` is set iff element `i` is present.
/// Serialized as its ascending element list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct SetMask(pub u64);

impl TryFrom<Vec<u32>> for SetMask {
    type Error = Error;

    fn try_from(elements: Vec<u32>) -> Result<Self> {
        SetMask::from_elements(elements)
    }
}

impl From<SetMask> for Vec<u32> {
    fn from(m: SetMask) -> Vec<u32> {
        m.elements().collect()
    }
}

impl SetMask {
    pub const EMPTY: SetMask = SetMask(0);

    /// Builds a mask from 1-based elements.
    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Result<Self> {
        let mut bits = 0u64;
        for e in elements {
            if e == 0 || e > MAX_GROUND {
                return Err(Error::InvalidParameter(format!("element {e} is not in 1..=63")));
            }
            bits |= 1 << (e - 1);
        }
        Ok(SetMask(bits))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, element: u32) -> bool {
        (1..=64).contains(&element) && self.0 >> (element - 1) & 1 == 1
    }

    /// 1-based elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let bit = rest.trailing_zeros();
            rest &= rest - 1;
            Some(bit + 1)
        })
    }

    pub fn is_subset_of(self, other: SetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset_of(self, other: SetMask) -> bool {
        self != other && self.is_subset_of(other)
    }

    pub fn is_disjoint(self, other: SetMask) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: SetMask) -> SetMask {
        SetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: SetMask) -> SetMask {
        SetMask(self.0 & other.0)
    }

    pub fn symmetric_difference(self, other: SetMask) -> SetMask {
        SetMask(self.0 ^ other.0)
    }

    pub fn complement(self, n: GroundSize) -> SetMask {
        SetMask(!self.0 & n.full().0)
    }

    pub fn fits(self, n: GroundSize) -> bool {
        self.is_subset_of(n.full())
    }

    pub fn check(self, n: GroundSize) -> Result<()> {
        if self.fits(n) {
            Ok(())
        } else {
            Err(Error::OutOfRange { mask: self, n: n.get() })
        }
    }

    /// All submasks of `self`, in descending numeric order, ending with the empty set.
    pub fn submasks(self) -> Submasks {
        Submasks { full: self.0, next: Some(self.0) }
    }

    /// All supersets of `self` inside `[n]`, in ascending numeric order.
    pub fn supersets(self, n: GroundSize) -> impl Iterator<Item = SetMask> {
        let base = self.0;
        let free = self.complement(n).0;
        SetMask(free).submasks().map(move |s| SetMask(base | s.0)).collect::<Vec<_>>().into_iter().rev()
    }
}

impl fmt::Display for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Iterator over submasks produced by `s = (s - 1) & full`.
#[derive(Debug, Clone)]
pub struct Submasks {
    full: u64,
    next: Option<u64>,
}

impl Iterator for Submasks {
    type Item = SetMask;

    fn next(&mut self) -> Option<SetMask> {
        let cur = self.next?;
        self.next = if cur == 0 { None } else { Some((cur - 1) & self.full) };
        Some(SetMask(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_elements() {
        let m = SetMask::from_elements([3, 1]).unwrap();
        assert_eq!(m.bits(), 0b101);
        assert_eq!(m.to_string(), "{1,3}");
        assert_eq!(SetMask::EMPTY.to_string(), "{}");
        assert_eq!(m.elements().collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn submask_count() {
        let m = SetMask(0b1011);
        let subs: Vec<_> = m.submasks().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|s| s.is_subset_of(m)));
        assert_eq!(*subs.last().unwrap(), SetMask::EMPTY);
    }

    #[test]
    fn supersets_ascending() {
        let n = GroundSize::new(4).unwrap();
        let sup: Vec<_> = SetMask(0b0101).supersets(n).map(|s| s.0).collect();
        assert_eq!(sup, vec![0b0101, 0b0111, 0b1101, 0b1111]);
    }

    #[test]
    fn ground_size_bounds() {
        assert!(GroundSize::new(0).is_err());
        assert!(GroundSize::new(64).is_err());
        assert!(GroundSize::dense(25).is_err());
        assert!(GroundSize::dense(24).is_ok());
        assert!(SetMask(0b1000).check(GroundSize::new(3).unwrap()).is_err());
    }
}
