use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    blow_up, fresh_ids, one_factors, pad, solely_balanced_triples, sum_disjointified, transversal_classes, PaddingSpec,
};
use crate::catalog;
use crate::error::{Error, Result};
use crate::model::{Element, TradeFamily};
use crate::spectrum::cite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PadMode {
    PerBlock,
    Universal,
}

/// How a witness is built. Building is deterministic: fresh elements are
/// always taken just above the current largest element, and the second
/// summand of a sum is shifted past the first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Recipe {
    Catalog { name: String },
    Literal { family: TradeFamily },
    OneFactor { m: usize, mu: usize },
    Transversal { n: usize, width: usize, mu: usize },
    SolelyBalancedTriples { m: usize },
    BlowUp {
        input: Box<Recipe>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fresh: Option<Vec<Element>>,
    },
    Sum { a: Box<Recipe>, b: Box<Recipe> },
    Pad { input: Box<Recipe>, mode: PadMode, width: usize },
}

impl Recipe {
    pub fn catalog(name: &str) -> Self {
        Recipe::Catalog { name: name.to_string() }
    }

    pub fn blow_up(input: Recipe) -> Self {
        Recipe::BlowUp { input: Box::new(input), fresh: None }
    }

    pub fn sum(a: Recipe, b: Recipe) -> Self {
        Recipe::Sum { a: Box::new(a), b: Box::new(b) }
    }

    pub fn pad(input: Recipe, mode: PadMode, width: usize) -> Self {
        if width == 0 {
            return input;
        }
        Recipe::Pad { input: Box::new(input), mode, width }
    }

    /// Executes the recipe.
    pub fn build(&self) -> Result<TradeFamily> {
        match self {
            Recipe::Catalog { name } => Ok(catalog::get(name)?.family.clone().without_labels()),
            Recipe::Literal { family } => Ok(family.clone()),
            Recipe::OneFactor { m, mu } => one_factors(*m, *mu),
            Recipe::Transversal { n, width, mu } => transversal_classes(*n, *width, *mu),
            Recipe::SolelyBalancedTriples { m } => solely_balanced_triples(*m),
            Recipe::BlowUp { input, fresh } => {
                let f = input.build()?;
                let fresh = fresh.clone().unwrap_or_else(|| fresh_ids(&f, f.mu()));
                blow_up(&f, &fresh)
            }
            Recipe::Sum { a, b } => sum_disjointified(&a.build()?, &b.build()?),
            Recipe::Pad { input, mode, width } => {
                let f = input.build()?;
                let spec = match mode {
                    PadMode::PerBlock => PaddingSpec::per_block_fresh(&f, *width),
                    PadMode::Universal => PaddingSpec::universal_fresh(&f, *width),
                };
                pad(&f, &spec)
            }
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Catalog { name } => write!(f, "catalog({name})"),
            Recipe::Literal { family } => write!(f, "literal(volume {})", family.volume()),
            Recipe::OneFactor { m, mu: 3 } => write!(f, "one_factor_family({m})"),
            Recipe::OneFactor { m, mu } => write!(f, "one_factors({m}, mu={mu})"),
            Recipe::Transversal { n, width, mu } => write!(f, "transversal({n}, width={width}, mu={mu})"),
            Recipe::SolelyBalancedTriples { m } => write!(f, "solely_balanced_triples({m})"),
            Recipe::BlowUp { input, .. } => write!(f, "blow_up({input})"),
            Recipe::Sum { a, b } => write!(f, "disjoint_sum({a}, {b})"),
            Recipe::Pad { input, mode, width } => {
                let m = match mode {
                    PadMode::PerBlock => "per-block",
                    PadMode::Universal => "universal",
                };
                write!(f, "pad({input}, {m}, {width})")
            }
        }
    }
}

fn no(volume: usize, citation: crate::error::Citation) -> Error {
    Error::NotInSpectrum { volume, citation }
}

/// Recipe for a 3-way `(v, 3, 2)` Steiner trade of volume `m`.
pub fn steiner_2_3(m: usize) -> Result<Recipe> {
    Ok(match m {
        0 => return Err(Error::param("volume must be positive")),
        1..=5 => return Err(no(m, cite::T2_SMALL)),
        7 => return Err(no(m, cite::K3_V7_STEINER)),
        m if m % 3 == 0 => Recipe::blow_up(Recipe::OneFactor { m: m / 3, mu: 3 }),
        8 => Recipe::catalog("ex1.3-v8"),
        10 => Recipe::catalog("mined-k3-v10"),
        11 => Recipe::catalog("mined-k3-v11"),
        13 => Recipe::catalog("ex1.3-v13"),
        m if m % 3 == 1 => Recipe::sum(steiner_2_3(m - 10)?, steiner_2_3(10)?),
        m => Recipe::sum(steiner_2_3(m - 8)?, steiner_2_3(8)?),
    })
}

/// Recipe for a 3-way `(v, 4, 2)` Steiner trade of volume `m`.
pub fn steiner_2_4(m: usize) -> Result<Recipe> {
    Ok(match m {
        0 => return Err(Error::param("volume must be positive")),
        1..=7 => return Err(no(m, cite::STEINER_LOWER_BOUND)),
        m if m % 3 == 0 => Recipe::blow_up(Recipe::SolelyBalancedTriples { m: m / 3 }),
        8 | 10 | 11 | 13 | 14 | 16 => Recipe::catalog(&format!("appendix-m{m}")),
        m if m % 3 == 1 => Recipe::sum(steiner_2_4(m - 10)?, steiner_2_4(10)?),
        m => Recipe::sum(steiner_2_4(m - 8)?, steiner_2_4(8)?),
    })
}

/// Recipe for a 3-way `(v, k, 2)` trade of volume `m`: a `(v, 3, 2)` Steiner
/// trade with `k - 3` universal pad elements.
pub fn general_2_k(m: usize, k: usize) -> Result<Recipe> {
    if k < 3 {
        return Err(Error::param(format!("general (v,k,2) trades need k >= 3, got {k}")));
    }
    match m {
        0 => Err(Error::param("volume must be positive")),
        1..=5 => Err(no(m, cite::T2_SMALL)),
        7 if k == 3 => Err(no(m, cite::K3_V7)),
        7 => Err(Error::UnknownSpectrum { volume: m, citation: cite::V7_OPEN }),
        _ => Ok(Recipe::pad(steiner_2_3(m)?, PadMode::Universal, k - 3)),
    }
}
