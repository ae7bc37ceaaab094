//! The acceptance checks, runnable from the library, the CLI and the test
//! suite. Every check is deterministic for a fixed seed; worker count only
//! affects speed.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chains::{chain_maximal_elements, check_chain_lemma, expected_weight, lym_sum, monte_carlo_chain_stats};
use crate::constructions::{
    conjecture_value, consecutive_layers, lightning, middle_layers, odd_intersecting_extremal, star, theorem1_value,
};
use crate::family::{bubble_up, is_intersecting, is_t_saw, mu_all, mu_single, saw_capacity, Family};
use crate::lattice::{mobius_subset, zeta_subset, LatticeVector};
use crate::mask::{GroundSize, SetMask};
use crate::oracles::{chain_maximal_brute, even_sunflower_exists_brute, max_even_free_brute};
use crate::rational::Rational;
use crate::search::{
    conjecture_probe, exhaustive_oracle, search_max_parallel, verify_classification, ConjectureVerdict, SearchProblem,
    SearchStatus,
};
use crate::sunflowers::{find_even_sunflower, find_odd_sunflower, OddSunflowerSearch, DEFAULT_ODD_BUDGET};

pub const DEFAULT_SEED: u64 = 20240601;

/// Node budget of the `k = 3` probe in the full suite.
pub const FULL_PROBE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// Criteria 1 to 11 at their stated scale.
    Quick,
    /// Adds the budgeted intersecting probe on `[6]`.
    Full,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub level: Level,
    pub seed: u64,
    pub workers: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { level: Level::Quick, seed: DEFAULT_SEED, workers: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub level: Level,
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

impl VerifyReport {
    pub fn without_timing(mut self) -> Self {
        for c in &mut self.criteria {
            c.elapsed_ms = None;
        }
        self
    }
}

/// Ids of the checks run at `level`; the probe has id 13.
pub fn criterion_ids(level: Level) -> Vec<u32> {
    let mut ids: Vec<u32> = (1..=11).collect();
    if level == Level::Full {
        ids.push(13);
    }
    ids
}

pub fn run_verification(opts: VerifyOptions) -> VerifyReport {
    let criteria: Vec<CriterionResult> =
        criterion_ids(opts.level).into_iter().map(|id| run_criterion(id, opts)).collect();
    VerifyReport { level: opts.level, seed: opts.seed, passed: criteria.iter().all(|c| c.passed), criteria }
}

type Outcome = Result<String, String>;

pub fn run_criterion(id: u32, opts: VerifyOptions) -> CriterionResult {
    let start = Instant::now();
    // Each criterion gets its own stream so they can run in any order.
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(id as u64);
    let (name, outcome): (&str, Outcome) = match id {
        1 => ("construction/formula agreement", construction_formula()),
        2 => ("maximum and classification for n <= 4", classification_small(opts.workers)),
        3 => ("unique optimum at n = 5, t = 1", unique_middle_n5(opts.workers)),
        4 => ("intersecting maximum for odd n", intersecting_odd(opts.workers)),
        5 => ("intersecting maximum on [4]", intersecting_even_k2(opts.workers)),
        6 => ("expected chain weight equals size", chain_weight(&mut rng, opts)),
        7 => ("chain bound lym_sum <= 2", chain_lemma(&mut rng)),
        8 => ("bubbling up preserves saw", bubbling(&mut rng)),
        9 => ("even-sunflower-free maximum and finder", even_sunflowers(&mut rng)),
        10 => ("odd-sunflower-free implies saw and intersecting", odd_sunflowers(&mut rng)),
        11 => ("kernel oracles", kernels(&mut rng, opts.workers)),
        13 => ("intersecting probe on [6]", probe_k3(opts.workers)),
        _ => ("unknown", Err(format!("no criterion with id {id}"))),
    };
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult { id, name: name.to_string(), passed, detail, elapsed_ms: Some(start.elapsed().as_millis() as u64) }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn g(n: u32) -> GroundSize {
    GroundSize::new(n).expect("small ground size")
}

fn err(e: crate::error::Error) -> String {
    e.to_string()
}

fn construction_formula() -> Outcome {
    let mut checked = 0;
    for n in 1..=20 {
        for t in 0..=n {
            let f = middle_layers(g(n), t).map_err(err)?;
            let value = theorem1_value(n, t).map_err(err)?;
            ensure(f.size() as u128 == value, || format!("n={n} t={t}: size {} but formula {value}", f.size()))?;
            ensure(is_t_saw(&f, t), || format!("n={n} t={t}: middle layers are not {t}-saw"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (n, t) pairs agree"))
}

fn classification_small(workers: usize) -> Outcome {
    let expected_counts = [1usize, 2, 1, 16, 1];
    for n in 1..=4 {
        for t in 0..=n {
            let r = verify_classification(g(n), t, workers).map_err(err)?;
            ensure(r.agrees, || {
                format!(
                    "n={n} t={t}: optimum {} vs {}, {} missing, {} unexpected",
                    r.optimum,
                    r.predicted_optimum,
                    r.missing.len(),
                    r.unexpected.len()
                )
            })?;
            if n == 4 {
                let want = expected_counts[t as usize];
                ensure(r.found_count == want, || format!("n=4 t={t}: {} optima, expected {want}", r.found_count))?;
            }
        }
    }
    Ok("optimum and optima match for all n <= 4; n = 4 optima counts 1, 2, 1, 16, 1".into())
}

fn unique_middle_n5(workers: usize) -> Outcome {
    let p = SearchProblem::new(g(5), 1).symmetry(true).all_optima(true);
    let o = search_max_parallel(&p, workers).map_err(err)?;
    ensure(o.status == SearchStatus::Proved, || "search did not finish".into())?;
    ensure(o.optimum == 20, || format!("optimum {}", o.optimum))?;
    let labeled = o.labeled_optima();
    let expected = middle_layers(g(5), 1).map_err(err)?;
    ensure(labeled == vec![expected], || format!("{} labeled optima", labeled.len()))?;
    Ok(format!("optimum 20, unique optimum, {} nodes", o.nodes_explored))
}

fn intersecting_odd(workers: usize) -> Outcome {
    let o3 = exhaustive_oracle(g(3), 1, true).map_err(err)?;
    let mut expected: Vec<Family> = vec![consecutive_layers(g(3), 2, 3).map_err(err)?];
    for i in 1..=3 {
        expected.push(star(g(3), i).map_err(err)?);
    }
    expected.sort();
    ensure(o3.optimum == 4, || format!("n=3 optimum {}", o3.optimum))?;
    ensure(o3.optima == expected, || format!("n=3: {} optima do not match", o3.optima.len()))?;

    let p = SearchProblem::new(g(5), 1).intersecting(true).symmetry(true).all_optima(true);
    let o5 = search_max_parallel(&p, workers).map_err(err)?;
    ensure(o5.status == SearchStatus::Proved, || "n=5 search did not finish".into())?;
    ensure(o5.optimum == 15, || format!("n=5 optimum {}", o5.optimum))?;
    let labeled = o5.labeled_optima();
    ensure(labeled == vec![odd_intersecting_extremal(3).map_err(err)?], || {
        format!("n=5: {} labeled optima", labeled.len())
    })?;
    let oracle = exhaustive_oracle(g(5), 1, true).map_err(err)?;
    ensure(oracle.optimum == 15 && oracle.optima == labeled, || "n=5: complete enumeration disagrees".into())?;
    Ok(format!("n=3: 4 with 4 optima; n=5: 15, unique, {} nodes, confirmed by enumeration", o5.nodes_explored))
}

fn intersecting_even_k2(workers: usize) -> Outcome {
    let o = exhaustive_oracle(g(4), 1, true).map_err(err)?;
    let conj = conjecture_value(2).map_err(err)?;
    ensure(o.optimum as u128 == conj, || format!("optimum {} vs conjectured {conj}", o.optimum))?;
    ensure(o.optima.contains(&lightning(2).map_err(err)?), || "lightning(2) is not an optimum".into())?;
    let probe = conjecture_probe(2, None, workers).map_err(err)?;
    ensure(probe.verdict == ConjectureVerdict::Confirmed && probe.outcome.optimum == 7, || {
        format!("probe: {:?} with optimum {}", probe.verdict, probe.outcome.optimum)
    })?;
    Ok(format!("optimum 7 = conjectured value, {} optima, lightning among them", o.optima.len()))
}

/// Every set of `[n]` kept independently with a random probability.
fn random_family(rng: &mut ChaCha8Rng, n: u32) -> Family {
    let p: f64 = rng.gen();
    Family::from_predicate(g(n), |_| rng.gen_bool(p)).expect("small ground size")
}

/// A random saw family without `∅`: random nonempty sets are offered in
/// turn and kept when the family stays saw.
fn random_saw_family(rng: &mut ChaCha8Rng, n: u32) -> Family {
    let ground = g(n);
    let universe = ground.universe();
    let mut mu = vec![0u128; universe];
    let mut member = vec![false; universe];
    let attempts = rng.gen_range(0..=2 * universe);
    // Bias toward a random band of layers to reach large families.
    let lo = rng.gen_range(1..=n);
    let hi = rng.gen_range(lo..=n);
    for _ in 0..attempts {
        let c = if rng.gen_bool(0.7) {
            let size = rng.gen_range(lo..=hi);
            let mut elems: Vec<u32> = (1..=n).collect();
            elems.shuffle(rng);
            SetMask::from_elements(elems[..size as usize].iter().copied()).expect("in range")
        } else {
            SetMask(rng.gen_range(1..universe as u64))
        };
        if member[c.index()] || mu[c.index()] + 1 > saw_capacity(c.len(), 1) {
            continue;
        }
        let blocked =
            c.supersets(ground).any(|a| a != c && member[a.index()] && mu[a.index()] + 1 > saw_capacity(a.len(), 1));
        if blocked {
            continue;
        }
        member[c.index()] = true;
        for a in c.supersets(ground) {
            mu[a.index()] += 1;
        }
    }
    Family::from_predicate(ground, |m| member[m.index()]).expect("small ground size")
}

fn chain_weight(rng: &mut ChaCha8Rng, opts: VerifyOptions) -> Outcome {
    for i in 0..10_000 {
        let n = rng.gen_range(1..=12);
        let f = random_family(rng, n);
        let w = expected_weight(&f);
        ensure(w == Rational::integer(f.size() as i128), || {
            format!("family #{i} (n={n}): weight {w} vs size {}", f.size())
        })?;
    }
    let mut samples = Vec::new();
    for j in 0..3 {
        let n = rng.gen_range(4..=10);
        let f = random_family(rng, n);
        let stats = monte_carlo_chain_stats(&f, 100_000, opts.seed.wrapping_add(j), opts.workers).map_err(err)?;
        let hits = lym_sum(&f).to_f64();
        ensure(stats.within_three_sigma(hits, f.size() as f64), || {
            format!("Monte Carlo sample {j} (n={n}): mean weight {} vs {}", stats.mean_weight, f.size())
        })?;
        samples.push(format!("{:.3}/{}", stats.mean_weight, f.size()));
    }
    Ok(format!("10000 exact identities; Monte Carlo within 3 sigma ({})", samples.join(", ")))
}

fn chain_lemma(rng: &mut ChaCha8Rng) -> Outcome {
    let two = Rational::integer(2);
    let mut tight = 0;
    for i in 0..10_000 {
        let n = rng.gen_range(1..=10);
        let f = random_saw_family(rng, n);
        let r = check_chain_lemma(&f).map_err(err)?;
        ensure(r.bound_holds, || format!("family #{i} (n={n}): lym_sum {}", r.lym_sum))?;
        ensure(r.holds(), || format!("family #{i} (n={n}): equality structure fails at {:?}", r.structure_witness))?;
        tight += (r.lym_sum == two) as u32;
    }
    for k in 2..=6 {
        let f = middle_layers(g(2 * k - 1), 1).map_err(err)?;
        let r = check_chain_lemma(&f).map_err(err)?;
        ensure(r.equality && r.equality_structure_holds == Some(true), || format!("k={k}: {r:?}"))?;
    }
    Ok(format!("10000 random saw families within the bound ({tight} tight); equality structure for k = 2..6"))
}

/// All applicable bubbling moves `(A, B, C)` in `f`.
fn bubble_moves(f: &Family) -> Vec<(SetMask, SetMask, SetMask)> {
    let mut moves = Vec::new();
    for &a in f.members() {
        for e in a.elements() {
            let b = SetMask(a.bits() & !(1 << (e - 1)));
            if f.contains(b) {
                continue;
            }
            for &c in f.members() {
                if c.is_proper_subset_of(b) {
                    moves.push((a, b, c));
                }
            }
        }
    }
    moves
}

fn bubbling(rng: &mut ChaCha8Rng) -> Outcome {
    let mut done = 0;
    let mut families = 0;
    while done < 10_000 {
        let n = rng.gen_range(2..=8);
        let f = random_saw_family(rng, n);
        families += 1;
        let moves = bubble_moves(&f);
        for _ in 0..moves.len().min(5).min(10_000 - done) {
            let &(a, b, c) = moves.choose(rng).expect("nonempty");
            let h = bubble_up(&f, a, b, c).map_err(err)?;
            ensure(is_t_saw(&h, 1), || format!("move ({a}, {b}, {c}) on {f:?} breaks saw"))?;
            ensure(h.size() == f.size(), || "bubbling changed the family size".into())?;
            done += 1;
        }
    }
    Ok(format!("{done} moves over {families} families, no failures"))
}

/// `size` distinct nonempty subsets of `[n]`.
fn random_sets(rng: &mut ChaCha8Rng, n: u32, size: usize) -> Family {
    let mut pool: Vec<SetMask> = (1..1u64 << n).map(SetMask).collect();
    pool.shuffle(rng);
    pool.truncate(size);
    Family::from_sets(g(n), pool).expect("distinct sets")
}

fn even_sunflowers(rng: &mut ChaCha8Rng) -> Outcome {
    for n in 1..=4 {
        let best = max_even_free_brute(g(n));
        ensure(best == n as usize, || format!("n={n}: maximum even-sunflower-free family has {best} sets"))?;
    }
    let mut found = 0;
    for i in 0..1_000 {
        let n = rng.gen_range(2..=8);
        let size = rng.gen_range(1..=15usize.min((1 << n) - 1));
        let f = random_sets(rng, n, size);
        let cert = find_even_sunflower(&f).map_err(err)?;
        ensure(cert.is_some() == even_sunflower_exists_brute(&f), || {
            format!("family #{i}: finder disagrees on {f:?}")
        })?;
        if let Some(c) = cert {
            ensure(c.verify() && c.drawn_from(&f), || format!("family #{i}: certificate fails"))?;
            found += 1;
        }
    }
    Ok(format!("maximum is n for n <= 4; 1000 families agree ({found} with certificates)"))
}

fn odd_sunflowers(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut none, mut largest) = (0, 0);
    for i in 0..1_000 {
        let n = rng.gen_range(2..=7);
        let size = rng.gen_range(1..=15usize.min((1 << n) - 1));
        let f = if i % 2 == 0 {
            random_sets(rng, n, size)
        } else {
            // Sets through element 1 avoid the cheap disjoint-pair witnesses.
            let through: BTreeSet<SetMask> =
                random_sets(rng, n, size).members().iter().map(|m| SetMask(m.bits() | 1)).collect();
            Family::from_sets(g(n), through).map_err(err)?
        };
        let (res, _) = find_odd_sunflower(&f, DEFAULT_ODD_BUDGET).map_err(err)?;
        if res == OddSunflowerSearch::NoneExact {
            none += 1;
            largest = largest.max(f.size());
            ensure(is_t_saw(&f, 1), || format!("family #{i} has no odd-sunflower but is not saw: {f:?}"))?;
            ensure(is_intersecting(&f), || format!("family #{i} has no odd-sunflower but is not intersecting: {f:?}"))?;
        }
    }
    ensure(none > 0, || "no family without an odd-sunflower was sampled".into())?;
    Ok(format!("1000 families, {none} without an odd-sunflower (up to {largest} sets), all saw and intersecting"))
}

fn kernels(rng: &mut ChaCha8Rng, workers: usize) -> Outcome {
    for n in 1..=12 {
        let f = random_family(rng, n);
        let table = mu_all(&f);
        for a in 0..g(n).universe() as u64 {
            let a = SetMask(a);
            ensure(table.get(a) as u64 == mu_single(&f, a), || format!("n={n}: mu({a}) differs"))?;
        }
        let values: Vec<i64> = (0..g(n).universe()).map(|_| rng.gen_range(-1000..=1000)).collect();
        let v = LatticeVector::from_values(g(n), values).map_err(err)?;
        ensure(mobius_subset(&zeta_subset(&v)) == v, || format!("n={n}: transform round trip fails"))?;
    }
    for n in 1..=8 {
        for _ in 0..3 {
            let f = random_family(rng, n);
            ensure(chain_maximal_elements(&f) == chain_maximal_brute(&f), || {
                format!("n={n}: chain-maximal sets differ on {f:?}")
            })?;
        }
    }
    let mut instances = 0;
    for n in 1..=4 {
        for t in 0..=n {
            for intersecting in [false, true] {
                let oracle = exhaustive_oracle(g(n), t, intersecting).map_err(err)?;
                for symmetry in [false, true] {
                    let p = SearchProblem::new(g(n), t).intersecting(intersecting).symmetry(symmetry).all_optima(true);
                    let o = search_max_parallel(&p, workers).map_err(err)?;
                    let agrees = o.status == SearchStatus::Proved
                        && o.optimum == oracle.optimum
                        && o.labeled_optima() == oracle.optima;
                    ensure(agrees, || {
                        format!(
                            "n={n} t={t} intersecting={intersecting} symmetry={symmetry}: branch and bound disagrees"
                        )
                    })?;
                    instances += 1;
                }
            }
        }
    }
    Ok(format!("mu, transforms and chain-maximal sets match; {instances} search instances agree"))
}

fn probe_k3(workers: usize) -> Outcome {
    let probe = conjecture_probe(3, Some(FULL_PROBE_BUDGET), workers).map_err(err)?;
    let seeded = lightning(3).map_err(err)?.size();
    ensure(probe.outcome.optimum >= seeded, || "probe lost the lightning incumbent".into())?;
    let detail = format!(
        "verdict {:?}, best {} (conjectured {}), status {:?}, {} nodes",
        probe.verdict, probe.outcome.optimum, probe.conjectured, probe.outcome.status, probe.outcome.nodes_explored
    );
    Ok(detail)
}
