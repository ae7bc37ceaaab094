//! Every checkable property of one family, gathered into a serializable
//! report.

use serde::Serialize;

use crate::chains::{check_chain_lemma, expected_weight, lym_sum, ChainLemmaReport};
use crate::error::Result;
use crate::family::{disjoint_pair, is_antichain, is_t_saw, min_saw_t, Family};
use crate::mask::{GroundSize, SetMask};
use crate::rational::Rational;
use crate::sunflowers::{
    find_even_sunflower, find_odd_sunflower, OddSunflowerSearch, SunflowerCertificate, DEFAULT_ODD_BUDGET,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    /// Subfamilies the odd-sunflower search may test.
    pub odd_budget: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { odd_budget: DEFAULT_ODD_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvenSunflowerField {
    pub present: bool,
    pub certificate: Option<SunflowerCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddSunflowerField {
    #[serde(flatten)]
    pub search: OddSunflowerSearch,
    pub subfamilies_tested: u64,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub n: GroundSize,
    pub size: usize,
    pub layers: Vec<u64>,
    pub min_saw_t: u32,
    pub saw: bool,
    pub intersecting: bool,
    /// Two disjoint members, when the family is not intersecting.
    pub disjoint_witness: Option<(SetMask, SetMask)>,
    pub antichain: bool,
    pub lym_sum: Rational,
    pub expected_weight: Rational,
    /// Sunflower fields consider the nonempty members only.
    pub even_sunflower: EvenSunflowerField,
    pub odd_sunflower: OddSunflowerField,
    /// Present when the family is saw and does not contain `∅`.
    pub chain_lemma: Option<ChainLemmaReport>,
}

impl PropertyReport {
    /// Re-checks every embedded certificate against the family.
    pub fn certificates_verify(&self, f: &Family) -> bool {
        let even_ok = match &self.even_sunflower.certificate {
            Some(c) => self.even_sunflower.present && c.verify() && c.drawn_from(f),
            None => !self.even_sunflower.present,
        };
        let odd_ok = match &self.odd_sunflower.search {
            OddSunflowerSearch::Found(c) => c.verify() && c.drawn_from(f),
            _ => true,
        };
        let witness_ok = match self.disjoint_witness {
            Some((a, b)) => f.contains(a) && f.contains(b) && a.is_disjoint(b),
            None => self.intersecting,
        };
        even_ok && odd_ok && witness_ok
    }
}

pub fn emit_report(f: &Family, options: ReportOptions) -> Result<PropertyReport> {
    let nonempty = if f.contains(SetMask::EMPTY) { f.with_changes(&[], &[SetMask::EMPTY])? } else { f.clone() };
    let even = find_even_sunflower(&nonempty)?;
    let (odd, tested) = find_odd_sunflower(&nonempty, options.odd_budget)?;
    let disjoint = disjoint_pair(f);
    let saw = is_t_saw(f, 1);
    let chain_lemma = if saw && !f.contains(SetMask::EMPTY) { Some(check_chain_lemma(f)?) } else { None };
    let report = PropertyReport {
        n: f.n(),
        size: f.size(),
        layers: f.layers().to_vec(),
        min_saw_t: min_saw_t(f),
        saw,
        intersecting: disjoint.is_none(),
        disjoint_witness: disjoint,
        antichain: is_antichain(f),
        lym_sum: lym_sum(f),
        expected_weight: expected_weight(f),
        even_sunflower: EvenSunflowerField { present: even.is_some(), certificate: even },
        odd_sunflower: OddSunflowerField { search: odd, subfamilies_tested: tested, budget: options.odd_budget },
        chain_lemma,
    };
    assert!(report.certificates_verify(f), "report certificate failed re-verification");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{lightning, middle_layers, star};

    #[test]
    fn report_examples() {
        let o = ReportOptions::default();
        let r = emit_report(&middle_layers(GroundSize::new(5).unwrap(), 1).unwrap(), o).unwrap();
        assert_eq!((r.size, r.min_saw_t, r.intersecting), (20, 1, false));
        assert_eq!(r.lym_sum.to_string(), "2/1");

        let r = emit_report(&lightning(2).unwrap(), o).unwrap();
        assert_eq!((r.size, r.intersecting, r.min_saw_t), (7, true, 1));

        let s = star(GroundSize::new(3).unwrap(), 1).unwrap();
        let r = emit_report(&s, o).unwrap();
        assert!(r.intersecting && r.even_sunflower.present);
        assert!(r.certificates_verify(&s));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"lym_sum\""));
    }
}
