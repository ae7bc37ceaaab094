//! Slow, definitional reference computations. Each one avoids the fast path
//! it is used to check.

use crate::family::Family;
use crate::lattice::LatticeVector;
use crate::mask::{GroundSize, SetMask};
use crate::perm::all_permutations;

/// `Σ_{B ⊆ A} (-1)^{|A \ B|} v[B]` evaluated term by term.
pub fn mobius_brute(v: &LatticeVector<i64>) -> Vec<i64> {
    let len = v.values().len();
    (0..len as u64)
        .map(|a| {
            SetMask(a)
                .submasks()
                .map(|b| {
                    let sign = if (a ^ b.bits()).count_ones() % 2 == 0 { 1 } else { -1 };
                    sign * v.values()[b.index()]
                })
                .sum()
        })
        .collect()
}

/// Chain-maximal members found by walking all `n!` maximal chains.
pub fn chain_maximal_brute(f: &Family) -> Vec<SetMask> {
    let n = f.n().get();
    let mut hit = vec![false; f.n().universe()];
    for perm in all_permutations(n) {
        let mut acc = 0u64;
        let mut top = f.contains(SetMask::EMPTY).then_some(0u64);
        for &e in &perm {
            acc |= 1 << e;
            if f.contains(SetMask(acc)) {
                top = Some(acc);
            }
        }
        if let Some(t) = top {
            hit[t as usize] = true;
        }
    }
    f.members().iter().copied().filter(|m| hit[m.index()]).collect()
}

/// Every pair of members (including a member with itself) intersects.
pub fn intersecting_pairwise(f: &Family) -> bool {
    let m = f.members();
    m.iter().enumerate().all(|(i, a)| m[i..].iter().all(|b| !a.is_disjoint(*b)))
}

/// Some nonempty subfamily has every element covered an even number of
/// times; enumerates all `2^|F|` subfamilies with explicit degree counts.
pub fn even_sunflower_exists_brute(f: &Family) -> bool {
    let m = f.members();
    assert!(m.len() <= 24, "enumeration is limited to 24 members");
    (1u64..1 << m.len()).any(|pick| {
        let mut deg = [0u32; 64];
        for (i, s) in m.iter().enumerate() {
            if pick >> i & 1 == 1 {
                for e in s.elements() {
                    deg[e as usize - 1] += 1;
                }
            }
        }
        deg.iter().all(|d| d % 2 == 0)
    })
}

/// Largest family of nonempty subsets of `[n]` without an even-sunflower,
/// by exhaustive depth-first search. A set may join the family iff it is
/// not the XOR of a subfamily already chosen; the reachable XOR values are
/// tracked explicitly.
pub fn max_even_free_brute(n: GroundSize) -> usize {
    fn dfs(next: u64, universe: u64, reachable: &mut Vec<bool>, size: usize, best: &mut usize) {
        *best = (*best).max(size);
        for s in next..universe {
            if reachable[s as usize] {
                continue;
            }
            let before: Vec<usize> = (0..reachable.len()).filter(|&x| reachable[x]).collect();
            for &x in &before {
                reachable[x ^ s as usize] = true;
            }
            reachable[s as usize] = true;
            dfs(s + 1, universe, reachable, size + 1, best);
            reachable.iter_mut().for_each(|r| *r = false);
            for &x in &before {
                reachable[x] = true;
            }
        }
    }
    let universe = n.universe() as u64;
    // XORs of nonempty subfamilies; the empty subfamily is not an even-sunflower.
    let mut reachable = vec![false; universe as usize];
    let mut best = 0;
    dfs(1, universe, &mut reachable, 0, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_free_maximum_is_n() {
        for n in 1..=4 {
            assert_eq!(max_even_free_brute(GroundSize::new(n).unwrap()), n as usize);
        }
    }

    #[test]
    fn chain_brute_small() {
        let n = GroundSize::new(3).unwrap();
        let f = Family::from_sets(n, [SetMask(0b001), SetMask(0b011), SetMask(0b100)]).unwrap();
        // {1} sits below {1,2} on every chain through both, but the chain 1,3,2 avoids {1,2}.
        assert_eq!(chain_maximal_brute(&f), vec![SetMask(0b001), SetMask(0b011), SetMask(0b100)]);
    }
}
