use proptest::prelude::*;

use sawset::chains::{expected_weight, lym_sum};
use sawset::document::{parse_family, DocumentFormat, FamilyDocument};
use sawset::family::{is_intersecting, is_t_saw, min_saw_t, mu_all, mu_single, Family};
use sawset::lattice::{mobius_subset, zeta_subset, zeta_superset, LatticeVector};
use sawset::oracles::intersecting_pairwise;
use sawset::sunflowers::find_even_sunflower;
use sawset::{GroundSize, Rational, SetMask};

fn family(max_n: u32) -> impl Strategy<Value = Family> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::btree_set(0..1u64 << n, 0..=(1usize << n).min(40)).prop_map(move |sets| {
            Family::from_sets(GroundSize::new(n).unwrap(), sets.into_iter().map(SetMask)).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn documents_round_trip(f in family(8), json in any::<bool>(), shuffle in any::<u64>()) {
        let format = if json { DocumentFormat::Json } else { DocumentFormat::Text };
        let mut doc = FamilyDocument::from_family(&f, format);
        // Set order in a document is arbitrary and must survive.
        let len = doc.sets.len().max(1);
        doc.sets.rotate_left((shuffle as usize) % len);
        let parsed = parse_family(&doc.emit()).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(parsed.to_family().unwrap(), f);
    }

    #[test]
    fn mu_table_matches_direct_count(f in family(7)) {
        let table = mu_all(&f);
        for a in 0..f.n().universe() as u64 {
            prop_assert_eq!(table.get(SetMask(a)) as u64, mu_single(&f, SetMask(a)));
        }
    }

    #[test]
    fn zeta_round_trip(n in 1u32..=8, seed in any::<u64>()) {
        let g = GroundSize::new(n).unwrap();
        let values: Vec<i64> = (0..g.universe() as u64).map(|i| ((i ^ seed).wrapping_mul(0x9E37_79B9) % 201) as i64 - 100).collect();
        let v = LatticeVector::from_values(g, values).unwrap();
        prop_assert_eq!(&mobius_subset(&zeta_subset(&v)), &v);
        let total: i64 = v.values().iter().sum();
        prop_assert_eq!(*zeta_superset(&v).get(SetMask::EMPTY), total);
    }

    #[test]
    fn saw_threshold_is_monotone(f in family(6)) {
        let t0 = min_saw_t(&f);
        for t in 0..=f.n().get() {
            prop_assert_eq!(is_t_saw(&f, t), t >= t0);
        }
    }

    #[test]
    fn intersecting_agrees_with_pairs(f in family(7)) {
        prop_assert_eq!(is_intersecting(&f), intersecting_pairwise(&f));
    }

    #[test]
    fn chain_weight_is_size(f in family(9)) {
        prop_assert_eq!(expected_weight(&f), Rational::integer(f.size() as i128));
        prop_assert!(lym_sum(&f) <= Rational::integer(f.n().get() as i128 + 1));
    }

    #[test]
    fn even_certificates_verify(f in family(7)) {
        let f = if f.contains(SetMask::EMPTY) { f.with_changes(&[], &[SetMask::EMPTY]).unwrap() } else { f };
        match find_even_sunflower(&f).unwrap() {
            Some(c) => prop_assert!(c.verify() && c.drawn_from(&f)),
            None => prop_assert!(f.size() <= f.n().get() as usize),
        }
    }

    #[test]
    fn set_masks_serialize_as_elements(bits in any::<u64>()) {
        let m = SetMask(bits & ((1 << 63) - 1));
        let text = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(serde_json::from_str::<SetMask>(&text).unwrap(), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pruned_search_matches_enumeration(
        n in 1u32..=4,
        t_raw in 0u32..=4,
        intersecting in any::<bool>(),
        symmetry in any::<bool>(),
        lo_raw in 0u32..=4,
        span in 0u32..=4,
    ) {
        use sawset::search::{search_max, SearchMode, SearchProblem};
        let g = GroundSize::new(n).unwrap();
        let t = t_raw % (n + 1);
        let lo = lo_raw % (n + 1);
        let window = Some((lo, (lo + span).min(n)));
        let base = SearchProblem::new(g, t).intersecting(intersecting).window(window).all_optima(true);
        let oracle = search_max(&base.clone().mode(SearchMode::Exhaustive)).unwrap();
        let pruned = search_max(&base.clone().symmetry(symmetry)).unwrap();
        prop_assert_eq!(pruned.optimum, oracle.optimum);
        prop_assert_eq!(pruned.labeled_optima(), oracle.optima);
        prop_assert_eq!(search_max(&base.symmetry(symmetry)).unwrap(), pruned);
    }
}
