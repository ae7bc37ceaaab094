//! Maximum t-saw families (optionally intersecting, optionally restricted
//! to a window of layers) by complete enumeration or branch and bound.

mod bnb;
mod classify;
mod exhaustive;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{is_intersecting, is_t_saw, Family};
use crate::lattice::choose;
use crate::mask::{GroundSize, SetMask};
use crate::perm::all_permutations;

pub use classify::{
    conjecture_probe, predicted_optima, verify_classification, ClassificationCase, ClassificationReport,
    ConjectureProbe, ConjectureVerdict,
};

/// Largest ground size accepted by the branch-and-bound engine.
pub const MAX_SEARCH_N: u32 = 8;

/// Depth at which the search tree is cut into independently searched shards.
const SHARD_DEPTH: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    BranchAndBound,
}

#[derive(Debug, Clone)]
pub struct SearchProblem {
    pub n: GroundSize,
    pub t: u32,
    pub require_intersecting: bool,
    /// Only sets with size in `lo..=hi` may be used.
    pub layer_window: Option<(u32, u32)>,
    pub mode: SearchMode,
    /// Lex-leader pruning under permutations of `[n]`; optima are reported
    /// as orbit representatives.
    pub symmetry: bool,
    /// Symmetry checks apply while at most this many candidates are decided.
    pub symmetry_depth: usize,
    /// Node limit; `None` is unlimited.
    pub budget: Option<u64>,
    pub enumerate_all_optima: bool,
    /// Known feasible families used as the starting incumbent.
    pub seeds: Vec<Family>,
    /// A known upper bound on the optimum: the search ends as soon as a
    /// family of this size is found, and the result counts as proved.
    pub stop_at: Option<usize>,
}

impl SearchProblem {
    pub fn new(n: GroundSize, t: u32) -> Self {
        SearchProblem {
            n,
            t,
            require_intersecting: false,
            layer_window: None,
            mode: SearchMode::BranchAndBound,
            symmetry: false,
            symmetry_depth: 3,
            budget: None,
            enumerate_all_optima: false,
            seeds: Vec::new(),
            stop_at: None,
        }
    }

    pub fn intersecting(mut self, yes: bool) -> Self {
        self.require_intersecting = yes;
        self
    }

    pub fn mode(mut self, mode: SearchMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn symmetry(mut self, yes: bool) -> Self {
        self.symmetry = yes;
        self
    }

    pub fn all_optima(mut self, yes: bool) -> Self {
        self.enumerate_all_optima = yes;
        self
    }

    pub fn budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    pub fn window(mut self, window: Option<(u32, u32)>) -> Self {
        self.layer_window = window;
        self
    }

    pub fn seeds(mut self, seeds: Vec<Family>) -> Self {
        self.seeds = seeds;
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.n.get();
        if self.t > n {
            return Err(Error::InvalidParameter(format!("t={} exceeds n={n}", self.t)));
        }
        if let Some((lo, hi)) = self.layer_window {
            if lo > hi || hi > n {
                return Err(Error::InvalidParameter(format!("layer window {lo}..={hi} is not inside 0..={n}")));
            }
        }
        match self.mode {
            SearchMode::Exhaustive => {
                let limit = if self.require_intersecting { 5 } else { 4 };
                if n > limit {
                    return Err(Error::InvalidParameter(format!(
                        "exhaustive search is limited to n <= {limit} for this problem, got n={n}"
                    )));
                }
            }
            SearchMode::BranchAndBound => {
                if n > MAX_SEARCH_N {
                    return Err(Error::InvalidParameter(format!(
                        "branch and bound is limited to n <= {MAX_SEARCH_N}, got n={n}"
                    )));
                }
            }
        }
        for seed in &self.seeds {
            self.check_family(seed).map_err(|why| Error::InvalidParameter(format!("seed {seed:?}: {why}")))?;
        }
        Ok(())
    }

    /// Sets allowed by the window and the intersecting requirement.
    fn universe(&self) -> Vec<SetMask> {
        let (lo, hi) = self.layer_window.unwrap_or((0, self.n.get()));
        (0..self.n.universe() as u64)
            .map(SetMask)
            .filter(|m| (lo..=hi).contains(&m.len()))
            .filter(|m| !(self.require_intersecting && m.is_empty()))
            .collect()
    }

    /// Whether `f` satisfies every constraint of the problem.
    pub fn check_family(&self, f: &Family) -> std::result::Result<(), String> {
        if f.n() != self.n {
            return Err(format!("ground size {} differs from {}", f.n(), self.n));
        }
        if !is_t_saw(f, self.t) {
            return Err(format!("not {}-saw", self.t));
        }
        if self.require_intersecting && !is_intersecting(f) {
            return Err("not intersecting".into());
        }
        if let Some((lo, hi)) = self.layer_window {
            if f.members().iter().any(|m| !(lo..=hi).contains(&m.len())) {
                return Err(format!("uses a set outside layers {lo}..={hi}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Proved,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub optimum: usize,
    /// Labeled optima, or one representative per orbit when symmetry is on;
    /// sorted.
    pub optima: Vec<Family>,
    /// Orbit size of each entry of `optima`, when symmetry is on.
    pub orbit_sizes: Option<Vec<u64>>,
    pub nodes_explored: u64,
    pub status: SearchStatus,
}

impl SearchOutcome {
    /// All labeled optima, expanding orbit representatives if needed.
    pub fn labeled_optima(&self) -> Vec<Family> {
        if self.orbit_sizes.is_none() {
            return self.optima.clone();
        }
        let perms = all_permutations(self.optima.first().map_or(0, |f| f.n().get()));
        let mut all = BTreeSet::new();
        for rep in &self.optima {
            for p in &perms {
                all.insert(rep.permuted(p));
            }
        }
        all.into_iter().collect()
    }
}

/// Candidate order for branch and bound: descending `C(n,|A|)`, then
/// ascending mask.
fn branching_order(n: GroundSize, mut universe: Vec<SetMask>) -> Vec<SetMask> {
    let nn = n.get();
    universe.sort_by_key(|m| (std::cmp::Reverse(choose(nn, m.len() as i64)), *m));
    universe
}

/// Family built by adding candidates greedily in branching order.
fn greedy_seed(plan: &bnb::Plan) -> Vec<SetMask> {
    let mut first_leaf = bnb::Plan::new(plan.n, plan.t, plan.intersecting, plan.cands.clone(), false, false, 0, None);
    first_leaf.use_bounds = false;
    // The first leaf reached takes every feasible candidate in order.
    let run = bnb::Engine::new(&first_leaf, 0, plan.cands.len() as u64 + 1).run();
    run.found.into_iter().next().unwrap_or_default()
}

pub fn search_max(p: &SearchProblem) -> Result<SearchOutcome> {
    search_max_parallel(p, 1)
}

/// [`search_max`] with the shards spread over `workers` threads. The
/// outcome does not depend on `workers`.
pub fn search_max_parallel(p: &SearchProblem, workers: usize) -> Result<SearchOutcome> {
    p.validate()?;
    let outcome = match p.mode {
        SearchMode::Exhaustive => {
            let e = exhaustive::enumerate(&p.universe(), p.t, p.require_intersecting);
            let optima = to_families(p.n, e.optima);
            finish(p, e.best, optima, e.nodes, SearchStatus::Proved)
        }
        SearchMode::BranchAndBound => branch_and_bound(p, workers),
    };
    for f in &outcome.labeled_optima() {
        if let Err(why) = p.check_family(f) {
            panic!("search returned an infeasible family {f:?}: {why}");
        }
        assert_eq!(f.size(), outcome.optimum, "reported optimum family has the wrong size");
    }
    Ok(outcome)
}

fn to_families(n: GroundSize, sets: Vec<Vec<SetMask>>) -> Vec<Family> {
    sets.into_iter().map(|s| Family::from_sets(n, s).expect("search produces valid families")).collect()
}

fn branch_and_bound(p: &SearchProblem, workers: usize) -> SearchOutcome {
    let cands = branching_order(p.n, p.universe());
    let plan = bnb::Plan::new(
        p.n,
        p.t,
        p.require_intersecting,
        cands,
        p.enumerate_all_optima,
        p.symmetry,
        p.symmetry_depth,
        p.stop_at,
    );
    let budget = p.budget.unwrap_or(u64::MAX);

    let mut seeds: Vec<Vec<SetMask>> = p.seeds.iter().map(|f| f.members().to_vec()).collect();
    seeds.push(greedy_seed(&plan));
    let incumbent = seeds.iter().map(Vec::len).max().unwrap_or(0);
    let best_seed = seeds.iter().find(|s| s.len() == incumbent).cloned().unwrap_or_default();

    if p.stop_at.is_some_and(|s| incumbent >= s) {
        return finish(p, incumbent, to_families(p.n, vec![best_seed]), 0, SearchStatus::Proved);
    }

    let mut head = bnb::Engine::new(&plan, incumbent, budget);
    head.collect_frontier(SHARD_DEPTH);
    let head = head.run();
    let mut best = head.best;
    let mut found = head.found;
    let mut nodes = head.nodes;
    let mut status = if head.exhausted { SearchStatus::BudgetExhausted } else { SearchStatus::Proved };

    if !head.exhausted && !head.stopped {
        let remaining = budget - nodes;
        let run_shard = |prefix: &Vec<bool>, cap: u64| {
            let mut e = bnb::Engine::new(&plan, incumbent, cap);
            e.replay(prefix);
            e.run()
        };
        let runs: Vec<bnb::Run> = crate::parallel::install(workers, || {
            head.frontier.par_iter().map(|prefix| run_shard(prefix, remaining)).collect()
        });
        // Merge as if the shards had run one after another under one budget.
        let mut used = 0u64;
        for (prefix, run) in head.frontier.iter().zip(runs) {
            let run =
                if run.exhausted || used + run.nodes > remaining { run_shard(prefix, remaining - used) } else { run };
            used += run.nodes;
            if run.best > best {
                best = run.best;
                found.clear();
            }
            if run.best == best && (p.enumerate_all_optima || found.is_empty()) {
                found.extend(run.found);
            }
            if run.exhausted {
                status = SearchStatus::BudgetExhausted;
                break;
            }
            if run.stopped {
                break;
            }
        }
        nodes += used;
    }
    if found.is_empty() {
        // Nothing beat or matched the incumbent inside the search tree.
        found = vec![best_seed];
    }
    let mut optima = to_families(p.n, found);
    if !p.enumerate_all_optima {
        optima.sort();
        optima.truncate(1);
    }
    finish(p, best, optima, nodes, status)
}

/// Deduplicates optima, groups them into orbits when symmetry is on, and
/// sorts the result.
fn finish(p: &SearchProblem, best: usize, optima: Vec<Family>, nodes: u64, status: SearchStatus) -> SearchOutcome {
    let mut optima: Vec<Family> = optima.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let mut orbit_sizes = None;
    if p.symmetry {
        let perms = all_permutations(p.n.get());
        let mut reps: BTreeSet<(Family, u64)> = BTreeSet::new();
        for f in &optima {
            let images: BTreeSet<Family> = perms.iter().map(|q| f.permuted(q)).collect();
            let rep = canonical_rep(p.n, &images);
            reps.insert((rep, images.len() as u64));
        }
        optima = reps.iter().map(|(f, _)| f.clone()).collect();
        orbit_sizes = Some(reps.iter().map(|(_, s)| *s).collect());
    }
    SearchOutcome { optimum: best, optima, orbit_sizes, nodes_explored: nodes, status }
}

/// Orbit member whose indicator vector in branching order is lexicographically
/// largest.
fn canonical_rep(n: GroundSize, images: &BTreeSet<Family>) -> Family {
    let order = branching_order(n, (0..n.universe() as u64).map(SetMask).collect());
    images
        .iter()
        .max_by_key(|f| order.iter().map(|&m| f.contains(m)).collect::<Vec<bool>>())
        .expect("an orbit is nonempty")
        .clone()
}

/// Complete enumeration over `2^[n]` (minus `∅` when intersecting) with no
/// bounds and no symmetry, listing every optimum.
pub fn exhaustive_oracle(n: GroundSize, t: u32, require_intersecting: bool) -> Result<SearchOutcome> {
    let p = SearchProblem::new(n, t).intersecting(require_intersecting).mode(SearchMode::Exhaustive).all_optima(true);
    search_max(&p)
}

/// All images of `f` under permutations of the ground set, sorted.
pub fn orbit(f: &Family) -> Vec<Family> {
    let perms = all_permutations(f.n().get());
    let set: BTreeSet<Family> = perms.iter().map(|q| f.permuted(q)).collect();
    set.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{consecutive_layers, lightning, middle_layers, star, theorem1_value};

    fn g(n: u32) -> GroundSize {
        GroundSize::new(n).unwrap()
    }

    #[test]
    fn exhaustive_examples() {
        let o = exhaustive_oracle(g(4), 1, false).unwrap();
        assert_eq!(o.optimum, 10);
        assert_eq!(o.optima, vec![consecutive_layers(g(4), 1, 2).unwrap(), consecutive_layers(g(4), 2, 3).unwrap()]);

        let o = exhaustive_oracle(g(4), 3, false).unwrap();
        assert_eq!((o.optimum, o.optima.len()), (15, 16));

        assert_eq!(exhaustive_oracle(g(4), 0, false).unwrap().optimum, 6);

        let o = exhaustive_oracle(g(3), 1, true).unwrap();
        assert_eq!(o.optimum, 4);
        let mut expected = vec![consecutive_layers(g(3), 2, 3).unwrap()];
        expected.extend((1..=3).map(|i| star(g(3), i).unwrap()));
        expected.sort();
        assert_eq!(o.optima, expected);

        let o = exhaustive_oracle(g(4), 1, true).unwrap();
        assert_eq!(o.optimum, 7);
        assert!(o.optima.contains(&lightning(2).unwrap()));
    }

    #[test]
    fn branch_and_bound_matches_exhaustive() {
        for n in 1..=4 {
            for t in 0..=n {
                for intersecting in [false, true] {
                    let oracle = exhaustive_oracle(g(n), t, intersecting).unwrap();
                    if !intersecting {
                        assert_eq!(oracle.optimum as u128, theorem1_value(n, t).unwrap());
                    }
                    for symmetry in [false, true] {
                        let p =
                            SearchProblem::new(g(n), t).intersecting(intersecting).symmetry(symmetry).all_optima(true);
                        let o = search_max(&p).unwrap();
                        assert_eq!(o.status, SearchStatus::Proved);
                        assert_eq!(o.optimum, oracle.optimum, "n={n} t={t} int={intersecting} sym={symmetry}");
                        assert_eq!(o.labeled_optima(), oracle.optima, "n={n} t={t} int={intersecting} sym={symmetry}");
                    }
                    let single = search_max(&SearchProblem::new(g(n), t).intersecting(intersecting)).unwrap();
                    assert_eq!(single.optimum, oracle.optimum);
                    assert_eq!(single.optima.len(), 1);
                }
            }
        }
    }

    #[test]
    fn orbit_sizes_sum_to_labeled_count() {
        let p = SearchProblem::new(g(4), 3).symmetry(true).all_optima(true);
        let o = search_max(&p).unwrap();
        let sizes = o.orbit_sizes.clone().unwrap();
        assert_eq!(sizes.iter().sum::<u64>() as usize, o.labeled_optima().len());
        assert_eq!(sizes.len(), o.optima.len());
    }

    #[test]
    fn window_restricts_sets() {
        let p = SearchProblem::new(g(4), 1).window(Some((2, 3))).all_optima(true);
        let o = search_max(&p).unwrap();
        assert_eq!(o.optima, vec![consecutive_layers(g(4), 2, 3).unwrap()]);
    }

    #[test]
    fn budget_is_reported() {
        let p = SearchProblem::new(g(6), 1).intersecting(true).budget(Some(50));
        let o = search_max(&p).unwrap();
        assert_eq!(o.status, SearchStatus::BudgetExhausted);
        assert!(o.nodes_explored <= 50);
        assert!(o.optimum >= 1);
    }

    #[test]
    fn budget_accounting_is_independent_of_workers() {
        for budget in [1, 7, 100, 5000] {
            let p = SearchProblem::new(g(5), 1).intersecting(true).budget(Some(budget)).all_optima(true);
            assert_eq!(search_max_parallel(&p, 1).unwrap(), search_max_parallel(&p, 4).unwrap());
        }
    }

    #[test]
    fn guards() {
        assert!(search_max(&SearchProblem::new(g(5), 1).mode(SearchMode::Exhaustive)).is_err());
        assert!(search_max(&SearchProblem::new(g(9), 1)).is_err());
        assert!(search_max(&SearchProblem::new(g(3), 4)).is_err());
        let bad_seed = SearchProblem::new(g(3), 0).seeds(vec![middle_layers(g(3), 1).unwrap()]);
        assert!(search_max(&bad_seed).is_err());
    }

    #[test]
    fn classification_small() {
        for n in 1..=4 {
            for t in 0..=n {
                let r = verify_classification(g(n), t, 1).unwrap();
                assert!(r.agrees, "{r:?}");
            }
        }
    }

    #[test]
    fn probe_small() {
        let p = conjecture_probe(2, None, 2).unwrap();
        assert_eq!(p.verdict, ConjectureVerdict::Confirmed);
        assert_eq!(p.outcome.optimum, 7);
        let capped = conjecture_probe(3, Some(10), 1).unwrap();
        assert!(capped.outcome.optimum >= lightning(3).unwrap().size());
        assert_eq!(capped.verdict, ConjectureVerdict::Undecided);
    }
}
