//! Comparing search results with the known classification of maximum
//! t-saw families, and probing the intersecting maximum on even ground sets.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{search_max_parallel, SearchMode, SearchOutcome, SearchProblem, SearchStatus};
use crate::constructions::{
    conjecture_value, consecutive_layers, even_bound_value, lightning, power_set_minus_one, theorem1_value,
};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::mask::{GroundSize, SetMask};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassificationCase {
    /// `t ≡ n (mod 2)`: the middle window is the only optimum.
    SameParity,
    /// `t = n - 1`: the power set minus any one set.
    AllButOne,
    /// Otherwise: the two windows on either side of the middle.
    TwoWindows,
}

impl ClassificationCase {
    pub fn of(n: u32, t: u32) -> Self {
        if (n - t).is_multiple_of(2) {
            ClassificationCase::SameParity
        } else if t + 1 == n {
            ClassificationCase::AllButOne
        } else {
            ClassificationCase::TwoWindows
        }
    }
}

/// The maximum t-saw families on `[n]` the classification predicts, sorted.
pub fn predicted_optima(n: GroundSize, t: u32) -> Result<Vec<Family>> {
    let nn = n.get();
    if t > nn {
        return Err(Error::InvalidParameter(format!("t={t} exceeds n={n}")));
    }
    let mut out = match ClassificationCase::of(nn, t) {
        ClassificationCase::SameParity => {
            let lo = (nn - t) / 2;
            vec![consecutive_layers(n, lo, lo + t)?]
        }
        ClassificationCase::AllButOne => {
            (0..n.universe() as u64).map(|b| power_set_minus_one(n, SetMask(b))).collect::<Result<_>>()?
        }
        ClassificationCase::TwoWindows => {
            let low = (nn - t - 1) / 2;
            vec![consecutive_layers(n, low, low + t)?, consecutive_layers(n, low + 1, low + 1 + t)?]
        }
    };
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub n: GroundSize,
    pub t: u32,
    pub case: ClassificationCase,
    pub mode: SearchMode,
    pub predicted_optimum: u128,
    pub optimum: usize,
    pub predicted_count: usize,
    pub found_count: usize,
    /// Predicted optima the search did not return.
    pub missing: Vec<Family>,
    /// Optima returned by the search that were not predicted.
    pub unexpected: Vec<Family>,
    pub status: SearchStatus,
    pub nodes_explored: u64,
    pub agrees: bool,
}

/// Finds every maximum t-saw family on `[n]` and compares the list with the
/// prediction. Uses complete enumeration for `n <= 4` and branch and bound
/// with symmetry above that.
pub fn verify_classification(n: GroundSize, t: u32, workers: usize) -> Result<ClassificationReport> {
    let nn = n.get();
    let mode = if nn <= 4 { SearchMode::Exhaustive } else { SearchMode::BranchAndBound };
    let problem = SearchProblem::new(n, t).mode(mode).symmetry(mode == SearchMode::BranchAndBound).all_optima(true);
    let outcome = search_max_parallel(&problem, workers)?;
    let found: BTreeSet<Family> = outcome.labeled_optima().into_iter().collect();
    let predicted: BTreeSet<Family> = predicted_optima(n, t)?.into_iter().collect();
    let predicted_optimum = theorem1_value(nn, t)?;
    let missing: Vec<Family> = predicted.difference(&found).cloned().collect();
    let unexpected: Vec<Family> = found.difference(&predicted).cloned().collect();
    let agrees = outcome.status == SearchStatus::Proved
        && outcome.optimum as u128 == predicted_optimum
        && missing.is_empty()
        && unexpected.is_empty();
    Ok(ClassificationReport {
        n,
        t,
        case: ClassificationCase::of(nn, t),
        mode,
        predicted_optimum,
        optimum: outcome.optimum,
        predicted_count: predicted.len(),
        found_count: found.len(),
        missing,
        unexpected,
        status: outcome.status,
        nodes_explored: outcome.nodes_explored,
        agrees,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjectureVerdict {
    /// The optimum was proved equal to the conjectured value.
    Confirmed,
    /// A family larger than the conjectured value was found.
    Counterexample,
    /// The budget ran out before the incumbent was proved optimal.
    Undecided,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureProbe {
    pub k: u32,
    pub conjectured: u128,
    pub upper_bound: Rational,
    pub outcome: SearchOutcome,
    pub verdict: ConjectureVerdict,
}

/// Maximum intersecting saw family on `[2k]`, starting from the lightning
/// family as incumbent and stopping early if the general upper bound is met.
pub fn conjecture_probe(k: u32, budget: Option<u64>, workers: usize) -> Result<ConjectureProbe> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("the probe needs k >= 2, got {k}")));
    }
    let seed = lightning(k)?;
    let conjectured = conjecture_value(k)?;
    let upper_bound = even_bound_value(k)?;
    let mut problem =
        SearchProblem::new(seed.n(), 1).intersecting(true).symmetry(true).budget(budget).seeds(vec![seed]);
    problem.stop_at = Some(upper_bound.floor() as usize);
    let outcome = search_max_parallel(&problem, workers)?;
    let verdict = if outcome.optimum as u128 > conjectured {
        ConjectureVerdict::Counterexample
    } else if outcome.status == SearchStatus::Proved {
        ConjectureVerdict::Confirmed
    } else {
        ConjectureVerdict::Undecided
    };
    Ok(ConjectureProbe { k, conjectured, upper_bound, outcome, verdict })
}
