//! Named extremal families and the closed-form values they are measured
//! against. Every construction lists its sets in ascending mask order.

use crate::error::{Error, Result};
use crate::family::Family;
use crate::lattice::binomial;
use crate::mask::{GroundSize, SetMask};
use crate::rational::Rational;

fn ground(n: u32) -> Result<GroundSize> {
    GroundSize::dense(n)
}

/// All sets whose size lies in `lo..=hi`.
pub fn consecutive_layers(n: GroundSize, lo: u32, hi: u32) -> Result<Family> {
    if lo > hi || hi > n.get() {
        return Err(Error::InvalidParameter(format!("need 0 <= lo <= hi <= n, got lo={lo} hi={hi} n={n}")));
    }
    Family::from_predicate(n, |m| (lo..=hi).contains(&m.len()))
}

/// Lowest layer of the `t + 1` largest consecutive layers.
pub fn middle_window_start(n: u32, t: u32) -> u32 {
    (n - t) / 2
}

/// The `t + 1` middle layers, starting at `⌊(n - t)/2⌋`.
pub fn middle_layers(n: GroundSize, t: u32) -> Result<Family> {
    if t > n.get() {
        return Err(Error::InvalidParameter(format!("t={t} exceeds n={n}")));
    }
    let lo = middle_window_start(n.get(), t);
    consecutive_layers(n, lo, lo + t)
}

/// On `[2k]`: the k-sets containing 1, every (k+1)-set, and the (k+2)-sets
/// avoiding 1.
pub fn lightning(k: u32) -> Result<Family> {
    if k == 0 {
        return Err(Error::InvalidParameter("lightning needs k >= 1".into()));
    }
    let n = ground(2 * k)?;
    let f = Family::from_predicate(n, |m| {
        let size = m.len();
        (size == k && m.contains(1)) || size == k + 1 || (size == k + 2 && !m.contains(1))
    })?;
    debug_assert!(crate::family::is_intersecting(&f));
    debug_assert!(crate::family::is_t_saw(&f, 1));
    Ok(f)
}

/// Every set containing element `i`.
pub fn star(n: GroundSize, i: u32) -> Result<Family> {
    if i == 0 || i > n.get() {
        return Err(Error::InvalidParameter(format!("star centre {i} is not in [1, {n}]")));
    }
    Family::from_predicate(n, |m| m.contains(i))
}

/// Layers `k` and `k + 1` of `[2k - 1]`.
pub fn odd_intersecting_extremal(k: u32) -> Result<Family> {
    if k == 0 {
        return Err(Error::InvalidParameter("need k >= 1".into()));
    }
    let n = ground(2 * k - 1)?;
    consecutive_layers(n, k, (k + 1).min(n.get()))
}

/// `2^[n]` without `b`.
pub fn power_set_minus_one(n: GroundSize, b: SetMask) -> Result<Family> {
    b.check(n)?;
    Family::from_predicate(n, |m| m != b)
}

/// `Σ_{j=0}^t C(n, ⌊(n - t)/2⌋ + j)`.
pub fn theorem1_value(n: u32, t: u32) -> Result<u128> {
    if t > n {
        return Err(Error::InvalidParameter(format!("t={t} exceeds n={n}")));
    }
    let lo = middle_window_start(n, t) as i64;
    (0..=t as i64).map(|j| binomial(n, lo + j)).sum()
}

/// `½C(2k, k) + C(2k, k+1) + C(2k-1, k+2)`.
pub fn conjecture_value(k: u32) -> Result<u128> {
    if k == 0 {
        return Err(Error::InvalidParameter("need k >= 1".into()));
    }
    let k64 = k as i64;
    Ok(binomial(2 * k, k64)? / 2 + binomial(2 * k, k64 + 1)? + binomial(2 * k - 1, k64 + 2)?)
}

/// `½C(2k, k) + C(2k, k+1) + ½C(2k, k+2)`, exactly.
pub fn even_bound_value(k: u32) -> Result<Rational> {
    if k == 0 {
        return Err(Error::InvalidParameter("need k >= 1".into()));
    }
    let k64 = k as i64;
    let c = |j: i64| -> Result<i128> { Ok(binomial(2 * k, j)? as i128) };
    Ok(Rational::new(c(k64)?, 2) + Rational::integer(c(k64 + 1)?) + Rational::new(c(k64 + 2)?, 2))
}
