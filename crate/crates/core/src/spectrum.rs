//! Volume spectrum queries: does a μ-way `(v, k, t)` (Steiner) trade of
//! volume `m` exist?
//!
//! Answers come from a fixed table of facts. Each fact has a scope and
//! classifies volumes as Yes (with a [`Recipe`]), No, or Unknown, each No and
//! Unknown backed by a [`Citation`].

use serde::Serialize;

use crate::construct::{self, PadMode, Recipe};
use crate::error::{Citation, Error, Result};
use crate::model::TradeFamily;

/// Results backing No and Unknown answers.
pub mod cite {
    use crate::error::Citation;

    pub const NO_VOLUME_ONE: Citation = Citation {
        id: "no-volume-one",
        statement: "no trade of strength t >= 1 has volume 1: two distinct blocks never cover the same elements",
    };
    pub const T2_SMALL: Citation = Citation {
        id: "t2-volume-at-least-6",
        statement: "a 3-way (v,k,2) trade has volume at least 6: volumes 1, 2, 3, 5 are excluded for two-way trades, \
                    and the two-way trade of volume 4 is unique, so three pairwise volume-4 trades cannot coexist",
    };
    pub const T2_SMALL_MU2: Citation = Citation {
        id: "t2-two-way-small",
        statement: "two-way (v,k,2) trades of volumes 1, 2, 3 and 5 do not exist",
    };
    pub const K3_V7_STEINER: Citation = Citation {
        id: "k3-steiner-volume-7",
        statement: "no 3-way (v,3,2) Steiner trade of volume 7 exists (exhaustive search over every foundation \
                    of at most 10 points, which the replication bound makes complete)",
    };
    pub const K3_V7: Citation = Citation {
        id: "k3-volume-7",
        statement: "a 3-way (v,3,2) trade of volume 7 would have every pair frequency at most 1, hence be Steiner, \
                    and no Steiner one exists",
    };
    pub const STEINER_LOWER_BOUND: Citation = Citation {
        id: "steiner-volume-at-least-2k",
        statement: "a 3-way (v,k,2) Steiner trade with k >= 4 has volume at least 2k",
    };
    pub const V7_OPEN: Citation = Citation {
        id: "k-ge-4-volume-7-open",
        statement: "existence of a 3-way (v,k,2) trade of volume 7 is open for k >= 4",
    };
    pub const STEINER_K5_OPEN: Citation = Citation {
        id: "steiner-k-ge-5-open",
        statement: "for 3-way (v,k,2) Steiner trades with k >= 5 only the lower bound 2k is known, \
                    and the blow-up and sum constructions here do not reach this volume",
    };
    pub const NO_RESULT: Citation = Citation {
        id: "no-result",
        statement: "no existence or non-existence result covers these parameters",
    };
}

/// A spectrum query: μ-way `(v, k, t)` trades of volume `m`, optionally Steiner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Query {
    pub mu: usize,
    pub t: usize,
    pub k: usize,
    pub m: usize,
    pub steiner: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SpectrumAnswer {
    Yes { recipe: Recipe },
    No { citation: Citation },
    Unknown { citation: Citation },
}

impl SpectrumAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, SpectrumAnswer::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, SpectrumAnswer::No { .. })
    }
}

/// One known result: a scope predicate and a per-volume classification
/// (`None` when the fact says nothing about that volume).
pub struct SpectrumFact {
    pub id: &'static str,
    pub scope: fn(&Query) -> bool,
    pub classify: fn(&Query) -> Option<SpectrumAnswer>,
}

fn yes(recipe: Recipe) -> Option<SpectrumAnswer> {
    Some(SpectrumAnswer::Yes { recipe })
}

fn no(citation: Citation) -> Option<SpectrumAnswer> {
    Some(SpectrumAnswer::No { citation })
}

fn smallest_prime_factor(n: usize) -> usize {
    (2..).take_while(|p| p * p <= n).find(|p| n % p == 0).unwrap_or(n)
}

/// Writes `m` as a sum of volumes that `base` can build, preferring the
/// largest first summand; summands get disjoint foundations.
fn decompose(m: usize, base: &dyn Fn(usize) -> Option<Recipe>) -> Option<Recipe> {
    let has: Vec<bool> = (0..=m).map(|a| a > 0 && base(a).is_some()).collect();
    let mut ok = vec![false; m + 1];
    ok[0] = true;
    for x in 1..=m {
        ok[x] = (1..=x).any(|a| has[a] && ok[x - a]);
    }
    if !ok[m] {
        return None;
    }
    let a = (1..=m).rev().find(|&a| has[a] && ok[m - a])?;
    let head = base(a)?;
    if a == m {
        Some(head)
    } else {
        Some(Recipe::sum(head, decompose(m - a, base)?))
    }
}

/// Steiner `(v, k, 2)` trades of volume `μ·n` from blowing up a 1-solely
/// balanced `(v, k-1, 1)` family of volume `n`.
fn blown_up_base(mu: usize, k: usize, volume: usize) -> Option<Recipe> {
    if volume % mu != 0 {
        return None;
    }
    let n = volume / mu;
    if k == 3 {
        (n >= 2 && 2 * n > mu).then(|| Recipe::blow_up(Recipe::OneFactor { m: n, mu }))
    } else {
        (n >= mu.max(2) && smallest_prime_factor(n) >= k - 1)
            .then(|| Recipe::blow_up(Recipe::Transversal { n, width: k - 1, mu }))
    }
}

pub fn facts() -> Vec<SpectrumFact> {
    vec![
        SpectrumFact { id: "no-volume-one", scope: |q| q.t >= 1, classify: |q| (q.m == 1).then_some(()).and(no(cite::NO_VOLUME_ONE)) },
        SpectrumFact {
            id: "t2-small-volumes",
            scope: |q| q.t == 2 && q.k >= 3,
            classify: |q| match q.mu {
                2 if [1, 2, 3, 5].contains(&q.m) => no(cite::T2_SMALL_MU2),
                mu if mu >= 3 && q.m <= 5 => no(cite::T2_SMALL),
                _ => None,
            },
        },
        SpectrumFact {
            id: "t1-one-factors",
            scope: |q| q.t == 1 && q.k >= 2,
            classify: |q| {
                (q.m >= 2 && 2 * q.m > q.mu)
                    .then(|| Recipe::pad(Recipe::OneFactor { m: q.m, mu: q.mu }, PadMode::PerBlock, q.k - 2))
                    .and_then(yes)
            },
        },
        SpectrumFact {
            id: "k3-spectrum",
            scope: |q| q.mu == 3 && q.t == 2 && q.k == 3,
            classify: |q| match q.m {
                7 if q.steiner => no(cite::K3_V7_STEINER),
                7 => no(cite::K3_V7),
                m if m >= 6 => construct::steiner_2_3_recipe(m).ok().and_then(yes),
                _ => None,
            },
        },
        SpectrumFact {
            id: "steiner-lower-bound",
            scope: |q| q.mu == 3 && q.t == 2 && q.k >= 4 && q.steiner,
            classify: |q| (q.m < 2 * q.k).then_some(()).and(no(cite::STEINER_LOWER_BOUND)),
        },
        SpectrumFact {
            id: "k4-steiner-spectrum",
            scope: |q| q.mu == 3 && q.t == 2 && q.k == 4 && q.steiner,
            classify: |q| construct::steiner_2_4_recipe(q.m).ok().and_then(yes),
        },
        SpectrumFact {
            id: "steiner-k-ge-5-constructive",
            scope: |q| q.mu == 3 && q.t == 2 && q.k >= 5 && q.steiner,
            classify: |q| match decompose(q.m, &|a| blown_up_base(3, q.k, a)) {
                Some(r) => yes(r),
                None if q.m >= 2 * q.k => Some(SpectrumAnswer::Unknown { citation: cite::STEINER_K5_OPEN }),
                None => None,
            },
        },
        SpectrumFact {
            id: "general-k-padding",
            scope: |q| q.mu == 3 && q.t == 2 && q.k >= 4 && !q.steiner,
            classify: |q| match q.m {
                7 => Some(SpectrumAnswer::Unknown { citation: cite::V7_OPEN }),
                m if m >= 6 => construct::general_2_k_recipe(m, q.k).ok().and_then(yes),
                _ => None,
            },
        },
        SpectrumFact {
            id: "multiway-blow-up",
            scope: |q| q.mu != 3 && q.t == 2 && q.k >= 3,
            classify: |q| decompose(q.m, &|a| blown_up_base(q.mu, q.k, a)).and_then(yes),
        },
    ]
}

fn validate(q: &Query) -> Result<()> {
    if q.mu < 2 {
        return Err(Error::param(format!("mu must be at least 2, got {}", q.mu)));
    }
    if q.t == 0 || q.t >= q.k {
        return Err(Error::param(format!("need 1 <= t < k, got t = {}, k = {}", q.t, q.k)));
    }
    if q.m == 0 {
        return Err(Error::param("volume must be positive"));
    }
    Ok(())
}

/// All answers the fact table gives for `q`, tagged with the fact id.
pub fn answers(q: &Query) -> Result<Vec<(&'static str, SpectrumAnswer)>> {
    validate(q)?;
    Ok(facts()
        .into_iter()
        .filter(|f| (f.scope)(q))
        .filter_map(|f| (f.classify)(q).map(|a| (f.id, a)))
        .collect())
}

/// Answers a spectrum query. No beats Yes beats Unknown; the fact table is
/// tested never to hold both a Yes and a No.
pub fn query(mu: usize, t: usize, k: usize, m: usize, steiner: bool) -> Result<SpectrumAnswer> {
    let all = answers(&Query { mu, t, k, m, steiner })?;
    let pick = |pred: fn(&SpectrumAnswer) -> bool| all.iter().find(|(_, a)| pred(a)).map(|(_, a)| a.clone());
    Ok(pick(SpectrumAnswer::is_no)
        .or_else(|| pick(SpectrumAnswer::is_yes))
        .or_else(|| pick(|a| matches!(a, SpectrumAnswer::Unknown { .. })))
        .unwrap_or(SpectrumAnswer::Unknown { citation: cite::NO_RESULT }))
}

/// Builds the witness behind a Yes answer.
pub fn replay(answer: &SpectrumAnswer) -> Result<TradeFamily> {
    match answer {
        SpectrumAnswer::Yes { recipe } => recipe.build(),
        SpectrumAnswer::No { citation } | SpectrumAnswer::Unknown { citation } => {
            Err(Error::param(format!("only Yes answers carry a witness ({citation})")))
        }
    }
}
