//! Complete enumeration with no bounds and no symmetry: every feasible
//! family over the candidate universe is visited once. Used as the
//! reference verdict for the branch-and-bound engine.

use crate::family::saw_capacity;
use crate::mask::SetMask;

pub(crate) struct Enumeration {
    pub best: usize,
    pub optima: Vec<Vec<SetMask>>,
    pub nodes: u64,
}

struct State<'a> {
    t: u32,
    intersecting: bool,
    universe: &'a [SetMask],
    members: Vec<SetMask>,
    /// `μ` of each member, parallel to `members`.
    mu: Vec<u128>,
    out: Enumeration,
}

impl State<'_> {
    fn fits(&self, c: SetMask) -> bool {
        if self.intersecting && self.members.iter().any(|m| m.is_disjoint(c)) {
            return false;
        }
        let below = 1 + self.members.iter().filter(|m| m.is_subset_of(c)).count() as u128;
        if below > saw_capacity(c.len(), self.t) {
            return false;
        }
        self.members.iter().zip(&self.mu).all(|(a, &mu)| !c.is_subset_of(*a) || mu < saw_capacity(a.len(), self.t))
    }

    fn visit(&mut self, i: usize) {
        self.out.nodes += 1;
        if i == self.universe.len() {
            let size = self.members.len();
            if size > self.out.best {
                self.out.best = size;
                self.out.optima.clear();
            }
            if size == self.out.best {
                self.out.optima.push(self.members.clone());
            }
            return;
        }
        let c = self.universe[i];
        if self.fits(c) {
            for (a, mu) in self.members.iter().zip(self.mu.iter_mut()) {
                if c.is_subset_of(*a) {
                    *mu += 1;
                }
            }
            let below = 1 + self.members.iter().filter(|m| m.is_subset_of(c)).count() as u128;
            self.members.push(c);
            self.mu.push(below);
            self.visit(i + 1);
            self.members.pop();
            self.mu.pop();
            for (a, mu) in self.members.iter().zip(self.mu.iter_mut()) {
                if c.is_subset_of(*a) {
                    *mu -= 1;
                }
            }
        }
        self.visit(i + 1);
    }
}

pub(crate) fn enumerate(universe: &[SetMask], t: u32, intersecting: bool) -> Enumeration {
    let mut state = State {
        t,
        intersecting,
        universe,
        members: Vec::new(),
        mu: Vec::new(),
        out: Enumeration { best: 0, optima: Vec::new(), nodes: 0 },
    };
    state.visit(0);
    state.out
}
