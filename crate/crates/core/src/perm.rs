//! Permutations of the ground set acting on masks.

use crate::mask::SetMask;

/// Image of `m` when element `i + 1` is sent to `perm[i] + 1`.
pub fn permute_mask(m: SetMask, perm: &[u32]) -> SetMask {
    let mut out = 0u64;
    let mut rest = m.bits();
    while rest != 0 {
        let b = rest.trailing_zeros();
        rest &= rest - 1;
        out |= 1 << perm[b as usize];
    }
    SetMask(out)
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: u32) -> Vec<Vec<u32>> {
    let mut current: Vec<u32> = (0..n).collect();
    let mut out = vec![current.clone()];
    // Standard next-permutation step.
    loop {
        let Some(i) = (1..current.len()).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..current.len()).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// `perm^{-1}`.
pub fn inverse(perm: &[u32]) -> Vec<u32> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p as usize] = i as u32;
    }
    inv
}
