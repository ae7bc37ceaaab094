//! Sunflowers, even-sunflowers and odd-sunflowers inside set families.
//!
//! For distinct sets taken once each, every element has even degree iff the
//! XOR of the masks is zero, and every covered element has odd degree iff
//! the XOR equals the union. The searches use those identities; certificate
//! verification recounts degrees element by element.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::lattice::gf2_dependency;
use crate::mask::SetMask;

/// Default node budget for [`find_odd_sunflower`]; exhausts any family of
/// at most 20 sets.
pub const DEFAULT_ODD_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum SunflowerKind {
    Classical { r: usize },
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SunflowerCertificate {
    pub kind: SunflowerKind,
    pub members: Vec<SetMask>,
    /// Common intersection, for classical sunflowers only.
    pub core: Option<SetMask>,
}

impl SunflowerCertificate {
    /// Re-checks the certificate against its definition.
    pub fn verify(&self) -> bool {
        if !distinct(&self.members) {
            return false;
        }
        match self.kind {
            SunflowerKind::Classical { r } => {
                is_sunflower(&self.members, r).unwrap_or(false) && self.core == Some(core_of(&self.members))
            }
            SunflowerKind::Even => {
                !self.members.is_empty()
                    && self.members.iter().all(|m| !m.is_empty())
                    && degrees(&self.members).iter().all(|&d| d % 2 == 0)
            }
            SunflowerKind::Odd => {
                self.members.len() >= 2
                    && self.members.iter().all(|m| !m.is_empty())
                    && degrees(&self.members).iter().all(|&d| d == 0 || d % 2 == 1)
            }
        }
    }

    /// Whether every member belongs to `f`.
    pub fn drawn_from(&self, f: &Family) -> bool {
        self.members.iter().all(|&m| f.contains(m))
    }
}

fn distinct(sets: &[SetMask]) -> bool {
    let mut seen = HashSet::with_capacity(sets.len());
    sets.iter().all(|s| seen.insert(*s))
}

fn require_distinct(sets: &[SetMask]) -> Result<()> {
    if distinct(sets) {
        Ok(())
    } else {
        Err(Error::Precondition("sets must be distinct".into()))
    }
}

fn require_nonempty_sets(sets: &[SetMask]) -> Result<()> {
    if sets.iter().any(|m| m.is_empty()) {
        return Err(Error::Precondition("sets must be non-empty".into()));
    }
    Ok(())
}

/// Degree of every element 1..=64 among `sets`.
fn degrees(sets: &[SetMask]) -> [u32; 64] {
    let mut deg = [0u32; 64];
    for s in sets {
        for e in s.elements() {
            deg[e as usize - 1] += 1;
        }
    }
    deg
}

fn core_of(sets: &[SetMask]) -> SetMask {
    sets.iter().fold(SetMask(u64::MAX), |acc, &s| acc.intersection(s))
}

/// `r ≥ 3` distinct sets whose pairwise intersections all equal their
/// common intersection.
pub fn is_sunflower(sets: &[SetMask], r: usize) -> Result<bool> {
    if r < 3 {
        return Err(Error::Precondition(format!("a sunflower needs r >= 3 sets, got r={r}")));
    }
    if sets.len() != r {
        return Err(Error::Precondition(format!("expected {r} sets, got {}", sets.len())));
    }
    require_distinct(sets)?;
    let core = core_of(sets);
    Ok(sets.iter().enumerate().all(|(i, &a)| sets[i + 1..].iter().all(|&b| a.intersection(b) == core)))
}

/// Every element is covered an even number of times.
pub fn is_even_sunflower(sets: &[SetMask]) -> Result<bool> {
    if sets.is_empty() {
        return Err(Error::Precondition("an even-sunflower is a non-empty family".into()));
    }
    require_nonempty_sets(sets)?;
    require_distinct(sets)?;
    Ok(sets.iter().fold(0u64, |acc, s| acc ^ s.bits()) == 0)
}

/// At least two sets, every covered element covered an odd number of times.
pub fn is_odd_sunflower(sets: &[SetMask]) -> Result<bool> {
    if sets.len() < 2 {
        return Err(Error::Precondition("an odd-sunflower needs at least two sets".into()));
    }
    require_nonempty_sets(sets)?;
    require_distinct(sets)?;
    let xor = sets.iter().fold(0u64, |acc, s| acc ^ s.bits());
    let union = sets.iter().fold(0u64, |acc, s| acc | s.bits());
    Ok(xor == union)
}

fn require_no_empty_member(f: &Family) -> Result<()> {
    if f.contains(SetMask::EMPTY) {
        return Err(Error::Precondition("the family must not contain the empty set".into()));
    }
    Ok(())
}

/// An even-sunflower inside `f`, found as a GF(2) dependency among the
/// characteristic vectors. `None` is exact: the members are independent.
pub fn find_even_sunflower(f: &Family) -> Result<Option<SunflowerCertificate>> {
    require_no_empty_member(f)?;
    let Some(indices) = gf2_dependency(f.members())? else {
        return Ok(None);
    };
    let cert = SunflowerCertificate {
        kind: SunflowerKind::Even,
        members: indices.iter().map(|&i| f.members()[i]).collect(),
        core: None,
    };
    assert!(cert.verify(), "even-sunflower certificate failed verification");
    Ok(Some(cert))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "certificate")]
pub enum OddSunflowerSearch {
    Found(SunflowerCertificate),
    /// Every subfamily of at least two sets was checked.
    NoneExact,
    /// The budget ran out first.
    Unknown,
}

struct OddDfs<'a> {
    sets: &'a [SetMask],
    budget: u64,
    nodes: u64,
    chosen: Vec<usize>,
}

enum Step {
    Continue,
    Found,
    OutOfBudget,
}

impl OddDfs<'_> {
    fn combos(&mut self, start: usize, remaining: usize, xor: u64, union: u64) -> Step {
        if remaining == 0 {
            if self.nodes == self.budget {
                return Step::OutOfBudget;
            }
            self.nodes += 1;
            return if xor == union { Step::Found } else { Step::Continue };
        }
        for i in start..=self.sets.len() - remaining {
            self.chosen.push(i);
            let s = self.sets[i].bits();
            match self.combos(i + 1, remaining - 1, xor ^ s, union | s) {
                Step::Continue => {}
                other => return other,
            }
            self.chosen.pop();
        }
        Step::Continue
    }
}

/// Smallest odd-sunflower in `f` (by size, then lexicographically over the
/// members in mask order), checking at most `budget` subfamilies.
///
/// Returns the search verdict together with the number of subfamilies
/// tested.
pub fn find_odd_sunflower(f: &Family, budget: u64) -> Result<(OddSunflowerSearch, u64)> {
    require_no_empty_member(f)?;
    let sets = f.members();
    let mut dfs = OddDfs { sets, budget, nodes: 0, chosen: Vec::new() };
    for size in 2..=sets.len() {
        match dfs.combos(0, size, 0, 0) {
            Step::Continue => {}
            Step::Found => {
                let cert = SunflowerCertificate {
                    kind: SunflowerKind::Odd,
                    members: dfs.chosen.iter().map(|&i| sets[i]).collect(),
                    core: None,
                };
                assert!(cert.verify(), "odd-sunflower certificate failed verification");
                return Ok((OddSunflowerSearch::Found(cert), dfs.nodes));
            }
            Step::OutOfBudget => return Ok((OddSunflowerSearch::Unknown, dfs.nodes)),
        }
    }
    Ok((OddSunflowerSearch::NoneExact, dfs.nodes))
}

/// Classical sunflower certificate for `sets`, if they form one.
pub fn sunflower_certificate(sets: &[SetMask]) -> Result<Option<SunflowerCertificate>> {
    let r = sets.len();
    Ok(is_sunflower(sets, r)?.then(|| SunflowerCertificate {
        kind: SunflowerKind::Classical { r },
        members: sets.to_vec(),
        core: Some(core_of(sets)),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{is_intersecting, is_t_saw};
    use crate::mask::GroundSize;

    fn s(e: &[u32]) -> SetMask {
        SetMask::from_elements(e.iter().copied()).unwrap()
    }

    fn g(n: u32) -> GroundSize {
        GroundSize::new(n).unwrap()
    }

    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self) -> u64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            self.0 >> 33
        }
        fn family(&mut self, n: u32, size: usize) -> Family {
            let mut sets = Vec::new();
            while sets.len() < size {
                let m = SetMask(self.next() % ((1 << n) - 1) + 1);
                if !sets.contains(&m) {
                    sets.push(m);
                }
            }
            Family::from_sets(g(n), sets).unwrap()
        }
    }

    /// Any nonempty subfamily with XOR zero, by enumeration.
    fn even_brute(f: &Family) -> bool {
        let m = f.members();
        (1u64..1 << m.len())
            .any(|pick| (0..m.len()).filter(|&i| pick >> i & 1 == 1).fold(0, |a, i| a ^ m[i].bits()) == 0)
    }

    fn odd_brute(f: &Family) -> Option<Vec<SetMask>> {
        let m = f.members();
        let mut best: Option<Vec<SetMask>> = None;
        for pick in 1u64..1 << m.len() {
            if pick.count_ones() < 2 {
                continue;
            }
            let sets: Vec<SetMask> = (0..m.len()).filter(|&i| pick >> i & 1 == 1).map(|i| m[i]).collect();
            if is_odd_sunflower(&sets).unwrap() && best.as_ref().is_none_or(|b| sets.len() < b.len()) {
                best = Some(sets);
            }
        }
        best
    }

    #[test]
    fn classical_examples() {
        assert!(is_sunflower(&[s(&[1, 2]), s(&[1, 3]), s(&[1, 4])], 3).unwrap());
        let cert = sunflower_certificate(&[s(&[1, 2]), s(&[1, 3]), s(&[1, 4])]).unwrap().unwrap();
        assert_eq!(cert.core, Some(s(&[1])));
        assert!(cert.verify());
        assert!(!is_sunflower(&[s(&[1, 2]), s(&[1, 3]), s(&[2, 3])], 3).unwrap());
        assert!(is_sunflower(&[s(&[1]), s(&[2, 3]), s(&[4])], 3).unwrap());
        assert!(is_sunflower(&[s(&[1]), s(&[2])], 2).is_err());
        assert!(is_sunflower(&[s(&[1]), s(&[1]), s(&[2])], 3).is_err());
    }

    #[test]
    fn even_examples() {
        assert!(is_even_sunflower(&[s(&[1]), s(&[2]), s(&[1, 2])]).unwrap());
        assert!(!is_even_sunflower(&[s(&[1]), s(&[2])]).unwrap());
        assert!(!is_even_sunflower(&[s(&[1, 2]), s(&[3, 4])]).unwrap());
        assert!(is_even_sunflower(&[]).is_err());
        assert!(is_even_sunflower(&[SetMask::EMPTY, s(&[1])]).is_err());
    }

    #[test]
    fn odd_examples() {
        assert!(is_odd_sunflower(&[s(&[1]), s(&[2])]).unwrap());
        assert!(is_odd_sunflower(&[s(&[1, 2]), s(&[1, 3]), s(&[1, 4])]).unwrap());
        assert!(!is_odd_sunflower(&[s(&[1]), s(&[1, 2])]).unwrap());
        assert!(is_odd_sunflower(&[s(&[1])]).is_err());
    }

    #[test]
    fn three_sunflowers_are_odd() {
        let mut rng = Lcg(77);
        let mut hits = 0;
        for _ in 0..5000 {
            let f = rng.family(6, 3);
            let sets = f.members();
            if is_sunflower(sets, 3).unwrap() {
                hits += 1;
                assert!(is_odd_sunflower(sets).unwrap(), "{sets:?}");
            }
        }
        assert!(hits > 50);
    }

    #[test]
    fn find_even_examples() {
        let basis = Family::from_sets(g(4), (0..4).map(|i| SetMask(1 << i))).unwrap();
        assert_eq!(find_even_sunflower(&basis).unwrap(), None);
        let mut rng = Lcg(9);
        for n in 2..=8 {
            let f = rng.family(n, n as usize + 1);
            let cert = find_even_sunflower(&f).unwrap().expect("n+1 sets contain an even-sunflower");
            assert!(cert.verify() && cert.drawn_from(&f));
        }
        let with_empty = Family::from_sets(g(3), [SetMask::EMPTY]).unwrap();
        assert!(find_even_sunflower(&with_empty).is_err());
    }

    #[test]
    fn find_even_agrees_with_enumeration() {
        let mut rng = Lcg(1234);
        for _ in 0..300 {
            let n = 3 + (rng.next() % 6) as u32;
            let size = 1 + (rng.next() % 12) as usize;
            let size = size.min((1 << n) - 1);
            let f = rng.family(n, size);
            assert_eq!(find_even_sunflower(&f).unwrap().is_some(), even_brute(&f), "{f:?}");
        }
    }

    #[test]
    fn find_odd_examples() {
        let f = Family::from_sets(g(3), [s(&[1]), s(&[2]), s(&[1, 2])]).unwrap();
        let (res, _) = find_odd_sunflower(&f, DEFAULT_ODD_BUDGET).unwrap();
        assert_eq!(
            res,
            OddSunflowerSearch::Found(SunflowerCertificate {
                kind: SunflowerKind::Odd,
                members: vec![s(&[1]), s(&[2])],
                core: None
            })
        );
        let f = Family::from_sets(g(3), [s(&[1]), s(&[1, 2]), s(&[1, 3])]).unwrap();
        let (res, _) = find_odd_sunflower(&f, DEFAULT_ODD_BUDGET).unwrap();
        match res {
            OddSunflowerSearch::Found(c) => assert_eq!(c.members, vec![s(&[1]), s(&[1, 2]), s(&[1, 3])]),
            other => panic!("expected a certificate, got {other:?}"),
        }
        let single = Family::from_sets(g(3), [s(&[1, 2])]).unwrap();
        assert_eq!(find_odd_sunflower(&single, 10).unwrap().0, OddSunflowerSearch::NoneExact);
    }

    #[test]
    fn find_odd_respects_budget() {
        let f = Family::from_sets(g(6), (3..=6).map(|i| s(&[1, 2, i]))).unwrap();
        let (res, nodes) = find_odd_sunflower(&f, 3).unwrap();
        assert_eq!(res, OddSunflowerSearch::Unknown);
        assert!(nodes <= 3);
    }

    #[test]
    fn find_odd_agrees_with_enumeration() {
        let mut rng = Lcg(55);
        for _ in 0..200 {
            let n = 3 + (rng.next() % 4) as u32;
            // Sets through element 1 keep pairs intersecting, so certificates are not all pairs.
            let size = 1 + (rng.next() % 8) as usize;
            let mut sets = Vec::new();
            while sets.len() < size.min(1 << (n - 1)) {
                let m = SetMask((rng.next() % (1 << n)) | 1);
                if !sets.contains(&m) {
                    sets.push(m);
                }
            }
            let f = Family::from_sets(g(n), sets).unwrap();
            let (res, _) = find_odd_sunflower(&f, DEFAULT_ODD_BUDGET).unwrap();
            let brute = odd_brute(&f);
            match res {
                OddSunflowerSearch::Found(c) => {
                    assert!(c.verify() && c.drawn_from(&f));
                    assert_eq!(c.members.len(), brute.unwrap().len());
                }
                OddSunflowerSearch::NoneExact => {
                    assert!(brute.is_none());
                    assert!(is_t_saw(&f, 1) && is_intersecting(&f));
                }
                OddSunflowerSearch::Unknown => panic!("budget is ample"),
            }
        }
    }
}
