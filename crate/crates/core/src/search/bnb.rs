//! Depth-first branch and bound over candidate sets.

use crate::family::saw_capacity;
use crate::lattice::choose;
use crate::mask::{GroundSize, SetMask};
use crate::perm::{all_permutations, inverse, permute_mask};

/// Problem data shared by every shard.
pub(crate) struct Plan {
    pub n: GroundSize,
    pub t: u32,
    pub intersecting: bool,
    /// Candidates in branching order.
    pub cands: Vec<SetMask>,
    pub enumerate_all: bool,
    pub use_bounds: bool,
    /// For each non-identity permutation `π`, `map[i]` is the candidate
    /// index of `π^{-1}(cands[i])`.
    pub sym_maps: Vec<Vec<usize>>,
    pub sym_depth: usize,
    /// Stop as soon as a family of this size is found.
    pub stop_at: Option<usize>,
    caps: Vec<u32>,
    /// `L / C(n, j)` where `L` is the lcm of the layer sizes.
    lym_cost: Vec<u128>,
    lym_budget: u128,
}

impl Plan {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: GroundSize,
        t: u32,
        intersecting: bool,
        cands: Vec<SetMask>,
        enumerate_all: bool,
        symmetry: bool,
        sym_depth: usize,
        stop_at: Option<usize>,
    ) -> Plan {
        let nn = n.get();
        let caps = (0..=nn).map(|s| saw_capacity(s, t).min(u32::MAX as u128) as u32).collect();
        let sizes: Vec<u128> = (0..=nn).map(|j| choose(nn, j as i64)).collect();
        let lcm = sizes.iter().fold(1u128, |acc, &c| acc / gcd(acc, c) * c);
        let lym_cost = sizes.iter().map(|&c| lcm / c).collect();
        let mut sym_maps = Vec::new();
        if symmetry {
            let mut pos = vec![usize::MAX; n.universe()];
            for (i, c) in cands.iter().enumerate() {
                pos[c.index()] = i;
            }
            for perm in all_permutations(nn).into_iter().skip(1) {
                let inv = inverse(&perm);
                let map: Vec<usize> = cands.iter().map(|&c| pos[permute_mask(c, &inv).index()]).collect();
                debug_assert!(map.iter().all(|&k| k != usize::MAX), "candidate set is not symmetric");
                sym_maps.push(map);
            }
        }
        Plan {
            n,
            t,
            intersecting,
            cands,
            enumerate_all,
            use_bounds: true,
            sym_maps,
            sym_depth,
            stop_at,
            caps,
            lym_cost,
            lym_budget: 2 * lcm,
        }
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Result of running one subtree.
#[derive(Debug, Clone)]
pub(crate) struct Run {
    pub best: usize,
    /// Families of size `best` found in this run, in discovery order.
    pub found: Vec<Vec<SetMask>>,
    pub nodes: u64,
    pub exhausted: bool,
    pub stopped: bool,
    /// Decision prefixes collected at the frontier depth.
    pub frontier: Vec<Vec<bool>>,
}

pub(crate) struct Engine<'a> {
    plan: &'a Plan,
    in_f: Vec<bool>,
    mu: Vec<u32>,
    /// Number of saturated members containing the mask.
    sat: Vec<u32>,
    /// Number of members disjoint from the mask.
    disj: Vec<u32>,
    layer_in: Vec<u64>,
    size: usize,
    decisions: Vec<bool>,
    members: Vec<SetMask>,
    budget: u64,
    frontier_depth: Option<usize>,
    run: Run,
    scratch: Vec<bool>,
}

impl<'a> Engine<'a> {
    pub fn new(plan: &'a Plan, incumbent: usize, budget: u64) -> Self {
        let u = plan.n.universe();
        Engine {
            plan,
            in_f: vec![false; u],
            mu: vec![0; u],
            sat: vec![0; u],
            disj: vec![0; u],
            layer_in: vec![0; plan.n.get() as usize + 1],
            size: 0,
            decisions: Vec::with_capacity(plan.cands.len()),
            members: Vec::new(),
            budget,
            frontier_depth: None,
            run: Run {
                best: incumbent,
                found: Vec::new(),
                nodes: 0,
                exhausted: false,
                stopped: false,
                frontier: Vec::new(),
            },
            scratch: vec![false; u],
        }
    }

    fn cap(&self, s: SetMask) -> u32 {
        self.plan.caps[s.len() as usize]
    }

    fn can_add(&self, c: SetMask) -> bool {
        let i = c.index();
        !self.in_f[i] && (!self.plan.intersecting || self.disj[i] == 0) && self.mu[i] < self.cap(c) && self.sat[i] == 0
    }

    fn add(&mut self, c: SetMask) {
        debug_assert!(self.can_add(c));
        let n = self.plan.n;
        self.in_f[c.index()] = true;
        self.size += 1;
        self.layer_in[c.len() as usize] += 1;
        self.members.push(c);
        for free in c.complement(n).submasks() {
            let s = c.union(free);
            self.mu[s.index()] += 1;
            if self.in_f[s.index()] && self.mu[s.index()] == self.cap(s) {
                for u in s.submasks() {
                    self.sat[u.index()] += 1;
                }
            }
        }
        if self.plan.intersecting {
            for u in c.complement(n).submasks() {
                self.disj[u.index()] += 1;
            }
        }
    }

    fn remove(&mut self, c: SetMask) {
        let n = self.plan.n;
        if self.plan.intersecting {
            for u in c.complement(n).submasks() {
                self.disj[u.index()] -= 1;
            }
        }
        for free in c.complement(n).submasks() {
            let s = c.union(free);
            if self.in_f[s.index()] && self.mu[s.index()] == self.cap(s) {
                for u in s.submasks() {
                    self.sat[u.index()] -= 1;
                }
            }
            self.mu[s.index()] -= 1;
        }
        self.members.pop();
        self.layer_in[c.len() as usize] -= 1;
        self.size -= 1;
        self.in_f[c.index()] = false;
    }

    /// Applies a decision prefix produced by a frontier run.
    pub fn replay(&mut self, prefix: &[bool]) {
        for (i, &take) in prefix.iter().enumerate() {
            if take {
                self.add(self.plan.cands[i]);
            }
            self.decisions.push(take);
        }
    }

    pub fn collect_frontier(&mut self, depth: usize) {
        self.frontier_depth = Some(depth);
    }

    pub fn run(mut self) -> Run {
        let start = self.decisions.len();
        self.dfs(start);
        self.run
    }

    /// Lex-leader test on the decided prefix: false if some permutation
    /// provably maps the assignment to a lexicographically larger one.
    fn symmetry_ok(&self) -> bool {
        let d = self.decisions.len();
        if self.plan.sym_maps.is_empty() || d > self.plan.sym_depth {
            return true;
        }
        let x = &self.decisions;
        'perm: for map in &self.plan.sym_maps {
            for i in 0..d {
                let k = map[i];
                if k >= d {
                    continue 'perm;
                }
                match (x[k], x[i]) {
                    (true, false) => return false,
                    (false, true) => continue 'perm,
                    _ => {}
                }
            }
        }
        true
    }

    fn upper_bound(&mut self, next: usize) -> usize {
        let plan = self.plan;
        let nn = plan.n.get() as usize;
        let mut avail = self.layer_in.clone();
        let mut open = std::mem::take(&mut self.scratch);
        open.iter_mut().for_each(|o| *o = false);
        let mut remaining = 0usize;
        for &c in &plan.cands[next..] {
            if self.can_add(c) {
                open[c.index()] = true;
                avail[c.len() as usize] += 1;
                remaining += 1;
            }
        }
        let mut bound = self.size + remaining;

        // Complement pairs: an intersecting family holds at most one of A, Ā.
        let mut pair_caps = vec![0u64; nn / 2 + 1];
        if plan.intersecting {
            let full = plan.n.full();
            let mut pairs = 0usize;
            for a in 0..plan.n.universe() as u64 {
                let b = a ^ full.bits();
                if a > b {
                    continue;
                }
                let live = |m: u64| self.in_f[m as usize] || open[m as usize];
                if live(a) || live(b) {
                    pairs += 1;
                    let g = (a.count_ones() as usize).min(nn - a.count_ones() as usize);
                    pair_caps[g] += 1;
                }
            }
            bound = bound.min(pairs);
        }
        self.scratch = open;

        bound = bound.min(self.window_bound(&avail));

        if plan.t == 1 {
            bound = bound.min(self.lym_bound(&avail, &pair_caps));
        }
        bound
    }

    /// `max_A Σ_{B ∈ F ∩ 2^A} C(n,|B|)/C(|A|,|B|)` over the sizes `A` could
    /// have, filling each layer below `A` as far as the t-saw capacity and
    /// the available sets allow.
    fn window_bound(&self, avail: &[u64]) -> usize {
        let nn = self.plan.n.get();
        let mut best = 0f64;
        for a in 0..=nn {
            if avail[a as usize] == 0 {
                continue;
            }
            let mut room = self.plan.caps[a as usize] as u128 - 1;
            let mut value = choose(nn, a as i64) as f64;
            for j in (0..a).rev() {
                if room == 0 {
                    break;
                }
                let q = choose(a, j as i64).min(avail[j as usize] as u128).min(room);
                room -= q;
                value += q as f64 * choose(nn, j as i64) as f64 / choose(a, j as i64) as f64;
            }
            best = best.max(value);
        }
        (best + 1e-6).floor() as usize
    }

    /// Fractional knapsack under `Σ |F_i| / C(n,i) <= 2` for saw families
    /// without `∅`; a present `∅` adds one.
    fn lym_bound(&self, avail: &[u64], pair_caps: &[u64]) -> usize {
        let plan = self.plan;
        let nn = plan.n.get() as usize;
        // (cost, count) groups; cheaper items first.
        let mut groups: Vec<(u128, u64)> = if plan.intersecting {
            pair_caps.iter().enumerate().map(|(g, &c)| (plan.lym_cost[g], c)).collect()
        } else {
            (1..=nn).map(|j| (plan.lym_cost[j], avail[j])).collect()
        };
        groups.sort();
        let mut budget = plan.lym_budget;
        let mut total = 0usize;
        for (cost, count) in groups {
            let take = (budget / cost).min(count as u128);
            total += take as usize;
            budget -= take * cost;
        }
        let empty_set = !plan.intersecting && avail[0] > 0;
        total + empty_set as usize
    }

    fn record(&mut self) {
        let size = self.size;
        if size > self.run.best {
            self.run.best = size;
            self.run.found.clear();
            self.run.found.push(self.members.clone());
        } else if size == self.run.best && (self.plan.enumerate_all || self.run.found.is_empty()) {
            self.run.found.push(self.members.clone());
        }
        if self.plan.stop_at.is_some_and(|s| self.run.best >= s) {
            self.run.stopped = true;
        }
    }

    fn dfs(&mut self, i: usize) {
        if self.run.exhausted || self.run.stopped {
            return;
        }
        if self.run.nodes >= self.budget {
            self.run.exhausted = true;
            return;
        }
        self.run.nodes += 1;
        if i == self.plan.cands.len() {
            self.record();
            return;
        }
        if self.plan.use_bounds {
            let ub = self.upper_bound(i);
            let prune = if self.plan.enumerate_all { ub < self.run.best } else { ub <= self.run.best };
            if prune {
                return;
            }
        }
        if self.frontier_depth == Some(i) {
            self.run.frontier.push(self.decisions.clone());
            return;
        }
        let c = self.plan.cands[i];
        if self.can_add(c) {
            self.add(c);
            self.decisions.push(true);
            if self.symmetry_ok() {
                self.dfs(i + 1);
            }
            self.decisions.pop();
            self.remove(c);
        }
        self.decisions.push(false);
        if self.symmetry_ok() {
            self.dfs(i + 1);
        }
        self.decisions.pop();
    }
}
