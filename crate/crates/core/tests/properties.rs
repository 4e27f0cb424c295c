mod support;

use std::collections::HashMap;

use proptest::prelude::*;
use tradekit::analysis::{derived, relabel, replication_in};
use tradekit::canon::{canonical_form, canonical_key};
use tradekit::catalog;
use tradekit::construct::{
    blow_up, fresh_ids, general_2_k_recipe, one_factors, steiner_2_3_recipe, steiner_2_4_recipe, transversal_classes, Recipe,
};
use tradekit::search::{search, SearchMode, SearchProblem, SearchStatus};
use tradekit::verify::{coverage, FailureKind};
use tradekit::{verify, TradeFamily};

fn catalog_family(i: usize) -> &'static TradeFamily {
    let all = catalog::entries().unwrap();
    &all[i % all.len()].family
}

/// Small random families, mostly invalid: `mu` collections of `m` random
/// `k`-subsets of `0..v`.
fn random_family() -> impl Strategy<Value = TradeFamily> {
    (2usize..=4, 2usize..=4, 1usize..=4, 0usize..=3).prop_flat_map(|(mu, k, m, extra)| {
        let v = k + 1 + extra;
        let block = proptest::sample::subsequence((0..v as u32).collect::<Vec<_>>(), k);
        let col = proptest::collection::vec(block, m);
        (Just(k), 1..k, proptest::collection::vec(col, mu))
            .prop_map(|(k, t, cols)| TradeFamily::from_raw(k, t, cols).unwrap())
    })
}

fn shuffled(family: &TradeFamily, seed: u64) -> TradeFamily {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let found: Vec<u32> = family.foundation().into_iter().collect();
    let mut image = found.clone();
    image.shuffle(&mut rng);
    let map: HashMap<u32, u32> = found.into_iter().zip(image.into_iter().map(|x| x + 1000)).collect();
    let f = relabel(family, &map).unwrap();
    let mut cols = f.collections().to_vec();
    cols.shuffle(&mut rng);
    TradeFamily::new(f.k(), f.t(), cols).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn verify_matches_oracle(f in random_family()) {
        let o = support::oracle(&f);
        let r = verify(&f);
        prop_assert_eq!(o.valid, r.valid);
        prop_assert_eq!(o.steiner, r.steiner);
        prop_assert_eq!(o.solely_balanced, r.solely_balanced);
        prop_assert_eq!(!o.coverage_ok, r.failures_of(FailureKind::CoverageMismatch).any(|x| x.witness.len() == f.t()));
    }

    #[test]
    fn canonical_form_is_idempotent(i in 0usize..64) {
        let f = catalog_family(i);
        let c = canonical_form(f);
        prop_assert_eq!(canonical_form(&c), c);
    }

    #[test]
    fn canonical_key_ignores_relabeling(i in 0usize..64, seed in any::<u64>()) {
        let f = catalog_family(i);
        prop_assert_eq!(canonical_key(&shuffled(f, seed)), canonical_key(f));
    }

    #[test]
    fn verified_families_balance_lower_strengths(i in 0usize..64) {
        let f = catalog_family(i);
        for s in 1..=f.t() {
            let first = coverage(f.collection(0), s).unwrap();
            for c in f.collections() {
                prop_assert_eq!(&coverage(c, s).unwrap(), &first);
            }
        }
        for x in f.foundation() {
            let r = replication_in(f.collection(0), x);
            prop_assert!(f.collections().iter().all(|c| replication_in(c, x) == r));
        }
    }

    #[test]
    fn derived_trades_verify(i in 0usize..64, pick in any::<prop::sample::Index>()) {
        let f = catalog_family(i);
        prop_assume!(f.t() >= 2);
        let found: Vec<u32> = f.foundation().into_iter().collect();
        let x = found[pick.index(found.len())];
        let d = derived(f, x).unwrap();
        let r = verify(&d);
        prop_assert!(r.valid);
        prop_assert_eq!((d.k(), d.t()), (f.k() - 1, f.t() - 1));
        prop_assert!(!verify(f).steiner || r.steiner);
    }

    #[test]
    fn blow_up_laws(m in 2usize..=8, mu in 2usize..=5) {
        prop_assume!(mu < 2 * m);
        let f = one_factors(m, mu).unwrap();
        let fresh = fresh_ids(&f, mu);
        let b = blow_up(&f, &fresh).unwrap();
        let r = verify(&b);
        prop_assert!(r.valid && r.steiner);
        prop_assert_eq!(b.volume(), mu * f.volume());
        let mut found = f.foundation();
        found.extend(&fresh);
        prop_assert_eq!(b.foundation(), found);
    }

    #[test]
    fn transversal_blow_up_is_steiner(n in 2usize..=13, width in 2usize..=5, mu in 2usize..=4) {
        let Ok(f) = transversal_classes(n, width, mu) else { return Ok(()) };
        let r = verify(&f);
        prop_assert!(r.valid && r.steiner && r.solely_balanced);
        let b = blow_up(&f, &fresh_ids(&f, mu)).unwrap();
        prop_assert!(verify(&b).steiner);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recipes_replay_deterministically(m in 6usize..=60, k in 4usize..=6) {
        prop_assume!(m != 7);
        for r in [steiner_2_3_recipe(m).ok(), steiner_2_4_recipe(m).ok(), general_2_k_recipe(m, k).ok()].into_iter().flatten() {
            let text = serde_json::to_string(&r).unwrap();
            let back: Recipe = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, &r);
            prop_assert_eq!(canonical_key(&back.build().unwrap()), canonical_key(&r.build().unwrap()));
        }
    }
}

#[test]
fn no_trade_of_volume_one() {
    for (k, t) in [(2, 1), (3, 1), (3, 2)] {
        assert!(support::brute_force_classes(3, k, t, 1, k + 2, false).is_empty(), "k={k} t={t}");
    }
}

#[test]
fn replication_one_occurs_at_strength_one() {
    let f = &catalog::get("ex3.5-k2").unwrap().family;
    assert!(f.foundation().iter().all(|&x| replication_in(f.collection(0), x) == 1));
}

#[test]
fn strength_two_toy_trades_have_replication_at_least_two() {
    for steiner in [true, false] {
        let p = SearchProblem::new(3, 3, 2, 6, steiner, SearchMode::CountClasses).with_max_foundation(8);
        let SearchStatus::ExhaustedClasses { classes } = search(&p).unwrap().status else { panic!() };
        assert!(!classes.is_empty());
        for f in &classes {
            assert!(f.foundation().iter().all(|&x| replication_in(f.collection(0), x) >= 2));
        }
    }
}

#[test]
fn search_is_deterministic_across_thread_counts() {
    let problems = [
        SearchProblem::new(3, 3, 2, 7, true, SearchMode::ExhaustiveNone).with_max_foundation(10),
        SearchProblem::new(3, 3, 2, 6, true, SearchMode::CountClasses).with_max_foundation(9),
        SearchProblem::new(3, 3, 2, 9, true, SearchMode::FirstWitness),
        SearchProblem::new(3, 2, 1, 3, false, SearchMode::CountClasses),
    ];
    for p in problems {
        let seq = search(&p.clone().with_threads(1)).unwrap();
        let par = search(&p).unwrap();
        let json = |o| serde_json::to_value(o).unwrap();
        assert_eq!(json(&seq), json(&par), "{p:?}");
    }
}

#[test]
fn witnesses_pass_the_oracle() {
    for m in [6, 8, 9] {
        let p = SearchProblem::new(3, 3, 2, m, true, SearchMode::FirstWitness);
        let SearchStatus::WitnessFound { witness } = search(&p).unwrap().status else { panic!() };
        let o = support::oracle(&witness);
        assert!(o.valid && o.steiner, "m={m}");
    }
}

#[test]
fn symmetry_breaking_keeps_witnesses() {
    use tradekit::search::SymmetryBreaking;
    for m in 1..=3 {
        for steiner in [false, true] {
            let brute = !support::brute_force_classes(3, 2, 1, m, 2 * m, steiner).is_empty();
            for sym in [SymmetryBreaking::ElementOrder, SymmetryBreaking::None] {
                let p = SearchProblem::new(3, 2, 1, m, steiner, SearchMode::FirstWitness).with_symmetry(sym);
                let found = matches!(search(&p).unwrap().status, SearchStatus::WitnessFound { .. });
                assert_eq!(found, brute, "m={m} steiner={steiner} {sym:?}");
            }
        }
    }
}
