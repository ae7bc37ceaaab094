//! Statistics of a uniformly random maximal chain `∅ ⊂ S_1 ⊂ … ⊂ [n]`
//! against a family: exact expectations in rationals, Monte Carlo
//! estimates as a cross-check, and chain-maximal members.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{mu_all, saw_violation, Family};
use crate::lattice::choose;
use crate::mask::{GroundSize, SetMask};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStats {
    /// `Σ_i |F_i| / C(n,i)`, the expected number of members on the chain.
    pub lym_sum: Rational,
    /// Expected total weight `Σ C(n,|B|)` of the members on the chain.
    pub expected_weight: Rational,
    /// Probability that the chain meets `F` in layer `i`.
    pub hits_by_layer: Vec<Rational>,
}

fn layer_probabilities(f: &Family) -> Vec<Rational> {
    let n = f.n().get();
    f.layers().iter().enumerate().map(|(i, &count)| Rational::new(count as i128, choose(n, i as i64) as i128)).collect()
}

pub fn lym_sum(f: &Family) -> Rational {
    layer_probabilities(f).into_iter().sum()
}

/// `Σ_i w_i · P(chain meets F_i)` with `w_i = C(n,i)`.
pub fn expected_weight(f: &Family) -> Rational {
    let n = f.n().get();
    layer_probabilities(f)
        .into_iter()
        .enumerate()
        .map(|(i, p)| Rational::integer(choose(n, i as i64) as i128) * p)
        .sum()
}

pub fn chain_stats(f: &Family) -> ChainStats {
    ChainStats { lym_sum: lym_sum(f), expected_weight: expected_weight(f), hits_by_layer: layer_probabilities(f) }
}

/// A maximal chain given by the order in which elements are added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalChain {
    /// 1-based elements; `order[..i]` is the i-th prefix set.
    order: Vec<u32>,
}

impl MaximalChain {
    pub fn from_order(n: GroundSize, order: Vec<u32>) -> Result<Self> {
        let mut seen = 0u64;
        for &e in &order {
            if e == 0 || e > n.get() || seen >> (e - 1) & 1 == 1 {
                return Err(Error::InvalidParameter(format!("{order:?} is not a permutation of [{n}]")));
            }
            seen |= 1 << (e - 1);
        }
        if order.len() != n.get() as usize {
            return Err(Error::InvalidParameter(format!("{order:?} is not a permutation of [{n}]")));
        }
        Ok(MaximalChain { order })
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    /// The `n + 1` nested sets, from `∅` to `[n]`.
    pub fn sets(&self) -> Vec<SetMask> {
        let mut acc = SetMask::EMPTY;
        let mut out = Vec::with_capacity(self.order.len() + 1);
        out.push(acc);
        for &e in &self.order {
            acc = acc.union(SetMask(1 << (e - 1)));
            out.push(acc);
        }
        out
    }
}

/// Uniform maximal chain: a Fisher–Yates shuffle of `[n]`.
pub fn sample_chain<R: Rng + ?Sized>(n: GroundSize, rng: &mut R) -> MaximalChain {
    let mut order: Vec<u32> = (1..=n.get()).collect();
    order.shuffle(rng);
    MaximalChain { order }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloStats {
    pub trials: u64,
    pub mean_hits: f64,
    pub var_hits: f64,
    pub mean_weight: f64,
    pub var_weight: f64,
}

impl MonteCarloStats {
    /// Whether `exact_hits` and `exact_weight` both lie within three standard
    /// errors of the sample means.
    pub fn within_three_sigma(&self, exact_hits: f64, exact_weight: f64) -> bool {
        let ok = |mean: f64, var: f64, exact: f64| {
            let se = (var / self.trials as f64).sqrt();
            (mean - exact).abs() <= 3.0 * se + 1e-9 * exact.abs().max(1.0)
        };
        ok(self.mean_hits, self.var_hits, exact_hits) && ok(self.mean_weight, self.var_weight, exact_weight)
    }
}

/// Trials per seed stream. Stream `c` covers trials `c*CHUNK .. (c+1)*CHUNK`.
const CHUNK: u64 = 4096;

#[derive(Default, Clone, Copy)]
struct Sums {
    hits: u128,
    hits_sq: u128,
    weight: u128,
    weight_sq: u128,
}

fn run_chunk(f: &Family, seed: u64, chunk: u64, trials: u64) -> Sums {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let n = f.n();
    let mut sums = Sums::default();
    for _ in 0..trials {
        let chain = sample_chain(n, &mut rng);
        let (mut hits, mut weight) = (0u128, 0u128);
        for s in chain.sets() {
            if f.contains(s) {
                hits += 1;
                weight += choose(n.get(), s.len() as i64);
            }
        }
        sums.hits += hits;
        sums.hits_sq += hits * hits;
        sums.weight += weight;
        sums.weight_sq += weight * weight;
    }
    sums
}

/// Sample means and variances of the chain hit count and chain weight.
///
/// Trials are split into fixed seed streams and summed in integers, so the
/// result does not depend on `workers`.
pub fn monte_carlo_chain_stats(f: &Family, trials: u64, seed: u64, workers: usize) -> Result<MonteCarloStats> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let chunks: Vec<(u64, u64)> = (0..trials.div_ceil(CHUNK)).map(|c| (c, CHUNK.min(trials - c * CHUNK))).collect();
    let per_chunk: Vec<Sums> =
        crate::parallel::install(workers, || chunks.par_iter().map(|&(c, len)| run_chunk(f, seed, c, len)).collect());
    let total = per_chunk.iter().fold(Sums::default(), |a, b| Sums {
        hits: a.hits + b.hits,
        hits_sq: a.hits_sq + b.hits_sq,
        weight: a.weight + b.weight,
        weight_sq: a.weight_sq + b.weight_sq,
    });
    let t = trials as f64;
    let mean = |s: u128| s as f64 / t;
    let var = |s: u128, sq: u128| {
        if trials < 2 {
            0.0
        } else {
            let m = s as f64 / t;
            ((sq as f64 - t * m * m) / (t - 1.0)).max(0.0)
        }
    };
    Ok(MonteCarloStats {
        trials,
        mean_hits: mean(total.hits),
        var_hits: var(total.hits, total.hits_sq),
        mean_weight: mean(total.weight),
        var_weight: var(total.weight, total.weight_sq),
    })
}

/// Members `A` such that some maximal chain through `A` meets no member
/// strictly above `A`.
///
/// `open[S]` records whether `[n]` is reachable from `S` by adding one
/// element at a time without touching `F` (including at `S`).
pub fn chain_maximal_elements(f: &Family) -> Vec<SetMask> {
    let n = f.n();
    let full = n.full().index();
    let mut open = vec![false; n.universe()];
    for s in (0..=full).rev() {
        if f.contains(SetMask(s as u64)) {
            continue;
        }
        open[s] = s == full || (0..n.get()).any(|d| s >> d & 1 == 0 && open[s | 1 << d]);
    }
    f.members()
        .iter()
        .copied()
        .filter(|a| a.index() == full || (0..n.get()).any(|d| a.index() >> d & 1 == 0 && open[a.index() | 1 << d]))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainLemmaReport {
    pub lym_sum: Rational,
    /// `lym_sum <= 2`.
    pub bound_holds: bool,
    pub equality: bool,
    /// When `lym_sum == 2`: every chain-maximal `A` has `μ(A) = |A| + 1` and
    /// its other members below it have size 1 or `|A| - 1`.
    pub equality_structure_holds: Option<bool>,
    /// First chain-maximal member breaking the equality structure.
    pub structure_witness: Option<SetMask>,
}

impl ChainLemmaReport {
    pub fn holds(&self) -> bool {
        self.bound_holds && self.equality_structure_holds.unwrap_or(true)
    }
}

/// Checks the chain bound for a saw family without `∅`, and its equality
/// structure when the bound is tight.
pub fn check_chain_lemma(f: &Family) -> Result<ChainLemmaReport> {
    if f.contains(SetMask::EMPTY) {
        return Err(Error::Precondition("the family must not contain the empty set".into()));
    }
    if let Some(v) = saw_violation(f, 1) {
        return Err(Error::Precondition(format!("the family is not saw: mu({}) = {} > {}", v.set, v.mu, v.capacity)));
    }
    let lym = lym_sum(f);
    let two = Rational::integer(2);
    let equality = lym == two;
    let mut report = ChainLemmaReport {
        lym_sum: lym,
        bound_holds: lym <= two,
        equality,
        equality_structure_holds: None,
        structure_witness: None,
    };
    if equality {
        let mu = mu_all(f);
        let bad = chain_maximal_elements(f).into_iter().find(|&a| {
            let size = a.len();
            let below_ok =
                f.members().iter().filter(|b| b.is_proper_subset_of(a)).all(|b| b.len() == 1 || b.len() + 1 == size);
            mu.get(a) != size + 1 || !below_ok
        });
        report.equality_structure_holds = Some(bad.is_none());
        report.structure_witness = bad;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{middle_layers, star};
    use crate::oracles::chain_maximal_brute;

    fn g(n: u32) -> GroundSize {
        GroundSize::new(n).unwrap()
    }

    fn random_family(n: u32, density: u64, seed: &mut u64) -> Family {
        Family::from_predicate(g(n), |_| {
            *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (*seed >> 33) % 100 < density
        })
        .unwrap()
    }

    #[test]
    fn lym_examples() {
        for n in 1..=8 {
            let top = Family::from_sets(g(n), [g(n).full()]).unwrap();
            assert_eq!(lym_sum(&top), Rational::integer(1));
        }
        assert_eq!(lym_sum(&middle_layers(g(5), 1).unwrap()), Rational::integer(2));
        assert_eq!(lym_sum(&star(g(3), 1).unwrap()), Rational::integer(2));
    }

    #[test]
    fn expected_weight_is_size() {
        let mut seed = 8;
        for n in 1..=12 {
            let f = random_family(n, 25, &mut seed);
            assert_eq!(expected_weight(&f), Rational::integer(f.size() as i128));
        }
        assert_eq!(expected_weight(&Family::empty(g(4)).unwrap()), Rational::zero());
    }

    #[test]
    fn antichains_have_lym_at_most_one() {
        for n in 1..=10 {
            for k in 0..=n {
                let layer = Family::from_predicate(g(n), |m| m.len() == k).unwrap();
                assert_eq!(lym_sum(&layer), Rational::integer(1));
            }
        }
        let anti = Family::from_sets(g(4), [SetMask(0b0011), SetMask(0b1100), SetMask(0b0101)]).unwrap();
        assert!(lym_sum(&anti) <= Rational::integer(1));
    }

    #[test]
    fn sample_chain_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = sample_chain(g(1), &mut rng);
        assert_eq!(c.sets(), vec![SetMask(0), SetMask(1)]);
        let a = sample_chain(g(9), &mut ChaCha8Rng::seed_from_u64(5));
        let b = sample_chain(g(9), &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
        let sets = a.sets();
        assert!(sets.windows(2).all(|w| w[0].is_proper_subset_of(w[1]) && w[1].len() == w[0].len() + 1));
        assert!(MaximalChain::from_order(g(3), vec![1, 1, 2]).is_err());
        assert!(MaximalChain::from_order(g(3), vec![3, 1, 2]).is_ok());
    }

    #[test]
    fn first_element_is_uniform() {
        let n = 5u32;
        let trials = 100_000u64;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts = [0u64; 5];
        for _ in 0..trials {
            counts[sample_chain(g(n), &mut rng).order()[0] as usize - 1] += 1;
        }
        let p = 1.0 / n as f64;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - trials as f64 * p).abs() <= 3.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn monte_carlo_examples() {
        let top = Family::from_sets(g(6), [g(6).full()]).unwrap();
        let mc = monte_carlo_chain_stats(&top, 1000, 3, 1).unwrap();
        assert_eq!(mc.mean_hits, 1.0);
        let f = middle_layers(g(5), 1).unwrap();
        let mc = monte_carlo_chain_stats(&f, 100_000, 11, 2).unwrap();
        assert!(mc.within_three_sigma(2.0, 20.0), "{mc:?}");
        let star4 = star(g(4), 2).unwrap();
        let mc = monte_carlo_chain_stats(&star4, 100_000, 12, 4).unwrap();
        assert!(mc.within_three_sigma(lym_sum(&star4).to_f64(), 8.0), "{mc:?}");
        assert!(monte_carlo_chain_stats(&f, 0, 1, 1).is_err());
    }

    #[test]
    fn monte_carlo_independent_of_workers() {
        let f = middle_layers(g(6), 2).unwrap();
        let a = monte_carlo_chain_stats(&f, 20_000, 99, 1).unwrap();
        let b = monte_carlo_chain_stats(&f, 20_000, 99, 8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn chain_maximal_examples() {
        let anti = Family::from_predicate(g(5), |m| m.len() == 2).unwrap();
        assert_eq!(chain_maximal_elements(&anti), anti.members());
        let chain = Family::from_predicate(g(5), |m| (m.bits() + 1).is_power_of_two()).unwrap();
        assert_eq!(chain_maximal_elements(&chain), vec![g(5).full()]);
    }

    #[test]
    fn chain_maximal_matches_brute_force() {
        let mut seed = 31;
        for n in 1..=7 {
            for density in [5, 20, 50] {
                let f = random_family(n, density, &mut seed);
                assert_eq!(chain_maximal_elements(&f), chain_maximal_brute(&f), "{f:?}");
            }
        }
    }

    #[test]
    fn chain_lemma_on_odd_middle_layers() {
        // k = 1 would put ∅ in the family.
        for k in 2..=6 {
            let f = middle_layers(g(2 * k - 1), 1).unwrap();
            let r = check_chain_lemma(&f).unwrap();
            assert!(r.equality, "k={k}");
            assert_eq!(r.equality_structure_holds, Some(true), "k={k}");
        }
        let top = Family::from_sets(g(4), [g(4).full()]).unwrap();
        let r = check_chain_lemma(&top).unwrap();
        assert!(r.bound_holds && !r.equality);
        let with_empty = Family::from_sets(g(2), [SetMask::EMPTY]).unwrap();
        assert!(check_chain_lemma(&with_empty).is_err());
        assert!(check_chain_lemma(&Family::from_predicate(g(3), |m| !m.is_empty()).unwrap()).is_err());
    }
}
