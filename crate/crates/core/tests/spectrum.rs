use tradekit::canon::is_isomorphic;
use tradekit::catalog;
use tradekit::spectrum::{answers, query, replay, Query, SpectrumAnswer};
use tradekit::verify;

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
enum Expect {
    Yes,
    No,
    Unknown,
}

/// Known 3-way spectra for `k <= 4`, `t <= 2`, written out independently of
/// the fact table.
fn expected(t: usize, k: usize, m: usize, steiner: bool) -> Expect {
    use Expect::*;
    match (t, k, steiner) {
        (1, _, _) => if m >= 2 { Yes } else { No },
        (2, 3, _) => if m >= 6 && m != 7 { Yes } else { No },
        (2, 4, true) => if m >= 8 { Yes } else { No },
        (2, 4, false) => match m {
            1..=5 => No,
            7 => Unknown,
            _ => Yes,
        },
        _ => unreachable!(),
    }
}

fn kind(a: &SpectrumAnswer) -> Expect {
    match a {
        SpectrumAnswer::Yes { .. } => Expect::Yes,
        SpectrumAnswer::No { .. } => Expect::No,
        SpectrumAnswer::Unknown { .. } => Expect::Unknown,
    }
}

#[test]
fn three_way_table_for_small_k() {
    for k in 2..=4 {
        for t in 1..=2.min(k - 1) {
            for steiner in [false, true] {
                for m in 1..=60 {
                    let got = kind(&query(3, t, k, m, steiner).unwrap());
                    assert_eq!(got, expected(t, k, m, steiner), "t={t} k={k} m={m} steiner={steiner}");
                }
            }
        }
    }
}

#[test]
fn no_fact_says_both_yes_and_no() {
    for mu in 2..=4 {
        for k in 2..=7 {
            for t in 1..k.min(4) {
                for steiner in [false, true] {
                    for m in 1..=100 {
                        let all = answers(&Query { mu, t, k, m, steiner }).unwrap();
                        let yes = all.iter().any(|(_, a)| a.is_yes());
                        let no = all.iter().any(|(_, a)| a.is_no());
                        assert!(!(yes && no), "mu={mu} t={t} k={k} m={m} steiner={steiner}: {all:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn every_yes_replays() {
    for mu in 2..=4 {
        for k in 2..=6 {
            for t in 1..k.min(3) {
                for steiner in [false, true] {
                    for m in 1..=60 {
                        let a = query(mu, t, k, m, steiner).unwrap();
                        if !a.is_yes() {
                            continue;
                        }
                        let f = replay(&a).unwrap();
                        let r = verify(&f);
                        let ctx = format!("mu={mu} t={t} k={k} m={m} steiner={steiner}");
                        assert!(r.valid, "{ctx}");
                        assert_eq!((f.mu(), f.k(), f.t(), f.volume()), (mu, k, t, m), "{ctx}");
                        assert!(!steiner || r.steiner, "{ctx}");
                    }
                }
            }
        }
    }
}

#[test]
fn catalog_witnesses_are_never_excluded() {
    for e in catalog::entries().unwrap() {
        let f = &e.family;
        for steiner in [false, e.report.steiner] {
            let a = query(f.mu(), f.t(), f.k(), f.volume(), steiner).unwrap();
            assert!(!a.is_no(), "{} contradicts {a:?}", e.name);
        }
    }
}

#[test]
fn documented_examples() {
    assert!(query(3, 1, 5, 1, false).unwrap().is_no());
    let SpectrumAnswer::Yes { recipe } = query(3, 2, 4, 9, true).unwrap() else { panic!() };
    assert_eq!(recipe.to_string(), "blow_up(solely_balanced_triples(3))");
    let f = replay(&query(3, 1, 2, 2, true).unwrap()).unwrap();
    assert!(is_isomorphic(&f, &catalog::get("ex3.5-k2").unwrap().family));
    assert!(matches!(query(3, 2, 4, 7, false).unwrap(), SpectrumAnswer::Unknown { .. }));
    assert!(query(3, 2, 3, 7, false).unwrap().is_no());
}
