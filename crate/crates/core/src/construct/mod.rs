//! Constructions of multi-way trades.
//!
//! Every public constructor returns a family that passes
//! [`verify`](crate::verify::verify); the spectrum constructions are
//! expressed as [`Recipe`] trees so a witness can be stored and replayed.

mod recipe;

pub use recipe::{PadMode, Recipe};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::analysis::offset;
use crate::error::{Error, Result};
use crate::model::{Block, Collection, Element, TradeFamily};

/// The cyclic blow-up: a μ-way `(v, k, t)` trade of volume `m` becomes a
/// μ-way `(v + μ, k + 1, t + 1)` trade of volume `μ·m`.
///
/// Output collection `j` holds, for every `i`, the blocks of input collection
/// `(i + j) mod μ` each extended by `fresh[i]`.
pub fn blow_up(family: &TradeFamily, fresh: &[Element]) -> Result<TradeFamily> {
    let mu = family.mu();
    if fresh.len() != mu {
        return Err(Error::param(format!("blow-up needs {mu} fresh elements, got {}", fresh.len())));
    }
    let found = family.foundation();
    let mut seen = BTreeSet::new();
    for &x in fresh {
        if found.contains(&x) || !seen.insert(x) {
            return Err(Error::FreshCollision(x));
        }
    }
    let cols = (0..mu)
        .map(|j| {
            let mut blocks = Vec::with_capacity(mu * family.volume());
            for (i, &x) in fresh.iter().enumerate() {
                for b in family.collection((i + j) % mu).iter() {
                    blocks.push(b.extended(&[x])?);
                }
            }
            Ok(Collection::new(blocks))
        })
        .collect::<Result<Vec<_>>>()?;
    let out = TradeFamily::new(family.k() + 1, family.t() + 1, cols)?;
    Ok(out.with_labels(family.labels().clone()))
}

/// `count` ids just above the family's largest element.
pub fn fresh_ids(family: &TradeFamily, count: usize) -> Vec<Element> {
    let start = family.max_element().map_or(0, |m| m + 1);
    (start..start + count as Element).collect()
}

/// Collection-wise union `T + T*`.
pub fn disjoint_sum(a: &TradeFamily, b: &TradeFamily) -> Result<TradeFamily> {
    if (a.mu(), a.k(), a.t()) != (b.mu(), b.k(), b.t()) {
        return Err(Error::param(format!(
            "cannot add a (mu={}, k={}, t={}) family to a (mu={}, k={}, t={}) family",
            a.mu(),
            a.k(),
            a.t(),
            b.mu(),
            b.k(),
            b.t()
        )));
    }
    let cols = a
        .collections()
        .iter()
        .zip(b.collections())
        .map(|(x, y)| x.iter().chain(y.iter()).cloned().collect())
        .collect();
    let mut labels = b.labels().clone();
    labels.extend(a.labels().clone());
    Ok(TradeFamily::new(a.k(), a.t(), cols)?.with_labels(labels))
}

/// `a + b` after shifting `b` past the largest element of `a`, so the
/// foundations are disjoint.
pub fn sum_disjointified(a: &TradeFamily, b: &TradeFamily) -> Result<TradeFamily> {
    let base = a.max_element().map_or(0, |m| m + 1);
    let low = b.foundation().into_iter().next().unwrap_or(0);
    let shifted = if low >= base { b.clone() } else { offset(b, base - low)? };
    disjoint_sum(a, &shifted)
}

/// Fresh elements appended to the blocks of a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaddingSpec {
    /// Set `i` is appended to the `i`-th block of every collection. Sets are
    /// pairwise disjoint and all of the same size.
    PerBlock(Vec<Vec<Element>>),
    /// One set appended to every block.
    Universal(Vec<Element>),
}

impl PaddingSpec {
    pub fn per_block_fresh(family: &TradeFamily, width: usize) -> Self {
        let m = family.volume();
        let ids = fresh_ids(family, width * m);
        PaddingSpec::PerBlock((0..m).map(|i| ids[i * width..(i + 1) * width].to_vec()).collect())
    }

    pub fn universal_fresh(family: &TradeFamily, width: usize) -> Self {
        PaddingSpec::Universal(fresh_ids(family, width))
    }

    fn elements(&self) -> Vec<Element> {
        match self {
            PaddingSpec::PerBlock(sets) => sets.iter().flatten().copied().collect(),
            PaddingSpec::Universal(z) => z.clone(),
        }
    }
}

/// Pads every block with fresh elements.
///
/// Per-block padding keeps the trade property only at strength 1 and is
/// rejected otherwise; universal padding is sound for `t <= 2` (pairs inside
/// the pad occur `m` times per collection, a pad element with `y` occurs
/// `r_y` times) but destroys the Steiner property once `m >= 2`.
pub fn pad(family: &TradeFamily, spec: &PaddingSpec) -> Result<TradeFamily> {
    match spec {
        PaddingSpec::PerBlock(_) if family.t() != 1 => {
            Err(Error::param(format!("per-block padding needs t = 1, family has t = {}", family.t())))
        }
        PaddingSpec::Universal(_) if family.t() > 2 => {
            Err(Error::param(format!("universal padding needs t <= 2, family has t = {}", family.t())))
        }
        _ => pad_unchecked(family, spec),
    }
}

/// Applies a padding without the strength check. With per-block padding at
/// `t >= 2` the result is generally not a trade; this exists to exhibit
/// exactly that.
pub fn pad_unchecked(family: &TradeFamily, spec: &PaddingSpec) -> Result<TradeFamily> {
    let found = family.foundation();
    let mut seen = BTreeSet::new();
    for x in spec.elements() {
        if found.contains(&x) || !seen.insert(x) {
            return Err(Error::FreshCollision(x));
        }
    }
    let (width, cols) = match spec {
        PaddingSpec::PerBlock(sets) => {
            if sets.len() != family.volume() {
                return Err(Error::param(format!("need {} padding sets, got {}", family.volume(), sets.len())));
            }
            let width = sets.first().map_or(0, Vec::len);
            if sets.iter().any(|s| s.len() != width) {
                return Err(Error::param("padding sets differ in size"));
            }
            let cols = family
                .collections()
                .iter()
                .map(|c| c.iter().zip(sets).map(|(b, a)| b.extended(a)).collect::<Result<Collection>>())
                .collect::<Result<Vec<_>>>()?;
            (width, cols)
        }
        PaddingSpec::Universal(z) => {
            let cols = family
                .collections()
                .iter()
                .map(|c| c.iter().map(|b| b.extended(z)).collect::<Result<Collection>>())
                .collect::<Result<Vec<_>>>()?;
            (z.len(), cols)
        }
    };
    Ok(TradeFamily::new(family.k() + width, family.t(), cols)?.with_labels(family.labels().clone()))
}

/// The first `mu` one-factors of the round-robin (circle) factorization of
/// `K_{2m}`, as a μ-way `(2m, 2, 1)` Steiner trade of volume `m`.
pub fn one_factors(m: usize, mu: usize) -> Result<TradeFamily> {
    if m < 2 {
        return Err(Error::param("one-factor families need m >= 2 (no trade has volume 1)"));
    }
    if mu < 2 || mu > 2 * m - 1 {
        return Err(Error::param(format!("K_{} has {} one-factors, {mu} requested", 2 * m, 2 * m - 1)));
    }
    let n = (2 * m - 1) as Element;
    let inf = n;
    let cols = (0..mu as Element)
        .map(|r| {
            let mut blocks = vec![Block::new([r, inf])?];
            for i in 1..m as Element {
                blocks.push(Block::new([(r + i) % n, (r + n - i) % n])?);
            }
            Ok(Collection::new(blocks))
        })
        .collect::<Result<Vec<_>>>()?;
    TradeFamily::new(2, 1, cols)
}

/// Three one-factors of `K_{2m}`: a 1-solely balanced 3-way `(2m, 2, 1)` Steiner trade.
pub fn one_factor_family(m: usize) -> Result<TradeFamily> {
    one_factors(m, 3)
}

fn smallest_prime_factor(n: usize) -> usize {
    (2..).take_while(|p| p * p <= n).find(|p| n % p == 0).unwrap_or(n)
}

/// `mu` pairwise pair-disjoint parallel classes of `width`-sets on
/// `Z_n × {0, …, width-1}`: class `d` holds the blocks
/// `{(i, 0)} ∪ {(g·i + d, g) : 1 <= g < width}` for `i ∈ Z_n`.
///
/// Needs every `1..width` invertible mod `n` and `n >= mu`. The result is a
/// 1-solely balanced μ-way `(width·n, width, 1)` Steiner trade of volume `n`.
pub fn transversal_classes(n: usize, width: usize, mu: usize) -> Result<TradeFamily> {
    if width < 2 {
        return Err(Error::param("transversal classes need width >= 2"));
    }
    if n < mu.max(2) || smallest_prime_factor(n) < width {
        return Err(Error::param(format!(
            "transversal classes need n >= {mu} with no prime factor below {width}, got n = {n}"
        )));
    }
    let id = |i: usize, g: usize| (g * n + i % n) as Element;
    let cols = (0..mu)
        .map(|d| {
            (0..n)
                .map(|i| Block::new(std::iter::once(id(i, 0)).chain((1..width).map(|g| id(g * i + d, g)))))
                .collect::<Result<Collection>>()
        })
        .collect::<Result<Vec<_>>>()?;
    TradeFamily::new(width, 1, cols)
}

/// A 1-solely balanced 3-way `(v, 3, 1)` Steiner trade of volume `m >= 3`.
///
/// Odd `m`: three transversal parallel classes. `m = 4`: the explicit
/// 12-point table. Even `m >= 6`: the sum of the odd cases `3` and `m - 3`.
pub fn solely_balanced_triples(m: usize) -> Result<TradeFamily> {
    match m {
        0..=2 => Err(Error::param("solely balanced triple trades need m >= 3")),
        4 => Ok(crate::catalog::get("thm3.8-m4")?.family.clone().without_labels()),
        m if m % 2 == 1 => transversal_classes(m, 3, 3),
        m => sum_disjointified(&transversal_classes(3, 3, 3)?, &transversal_classes(m - 3, 3, 3)?),
    }
}

/// A 3-way `(v, 3, 2)` Steiner trade of volume `m`, for every `m >= 6`, `m != 7`.
pub fn steiner_2_3(m: usize) -> Result<TradeFamily> {
    recipe::steiner_2_3(m)?.build()
}

/// A 3-way `(v, 4, 2)` Steiner trade of volume `m`, for every `m >= 8`.
pub fn steiner_2_4(m: usize) -> Result<TradeFamily> {
    recipe::steiner_2_4(m)?.build()
}

/// A 3-way `(v, k, 2)` trade (not Steiner for `k > 3`) of volume `m`,
/// for every `m >= 6`, `m != 7`.
pub fn general_2_k(m: usize, k: usize) -> Result<TradeFamily> {
    recipe::general_2_k(m, k)?.build()
}

pub use recipe::{general_2_k as general_2_k_recipe, steiner_2_3 as steiner_2_3_recipe, steiner_2_4 as steiner_2_4_recipe};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify;

    #[test]
    fn blow_up_rejects_bad_fresh() {
        let f = one_factor_family(2).unwrap();
        assert!(matches!(blow_up(&f, &[0, 10, 11]), Err(Error::FreshCollision(0))));
        assert!(blow_up(&f, &[10, 11]).is_err());
        assert!(matches!(blow_up(&f, &[10, 10, 11]), Err(Error::FreshCollision(10))));
    }

    #[test]
    fn blow_up_of_void_is_void() {
        let v = TradeFamily::void(3, 2, 1).unwrap();
        let b = blow_up(&v, &[0, 1, 2]).unwrap();
        assert!(b.is_void());
        assert_eq!((b.k(), b.t()), (3, 2));
    }

    #[test]
    fn sum_rejects_mismatch_and_void_is_identity() {
        let a = one_factor_family(3).unwrap();
        assert!(disjoint_sum(&a, &one_factors(3, 4).unwrap()).is_err());
        assert_eq!(disjoint_sum(&a, &TradeFamily::void(3, 2, 1).unwrap()).unwrap(), a);
    }

    #[test]
    fn one_factor_small_cases() {
        assert!(one_factor_family(1).is_err());
        for m in 2..=12 {
            let r = verify(&one_factor_family(m).unwrap());
            assert!(r.valid && r.steiner && r.solely_balanced, "m = {m}");
        }
        assert!(one_factors(2, 4).is_err());
    }

    #[test]
    fn pad_mode_checks() {
        let f = steiner_2_3(6).unwrap();
        let spec = PaddingSpec::per_block_fresh(&f, 1);
        assert!(pad(&f, &spec).is_err());
        let g = one_factor_family(2).unwrap();
        let empty = PaddingSpec::Universal(vec![]);
        assert_eq!(pad(&g, &empty).unwrap(), g);
        assert_eq!(pad(&g, &PaddingSpec::per_block_fresh(&g, 0)).unwrap(), g);
        assert!(matches!(pad(&g, &PaddingSpec::Universal(vec![0])), Err(Error::FreshCollision(0))));
        let blown = blow_up(&f, &fresh_ids(&f, 3)).unwrap();
        assert!(pad(&blown, &PaddingSpec::universal_fresh(&blown, 1)).is_err());
    }

    #[test]
    fn transversal_preconditions() {
        assert!(transversal_classes(4, 3, 3).is_err());
        assert!(transversal_classes(9, 4, 3).is_err());
        assert!(transversal_classes(2, 2, 3).is_err());
        let r = verify(&transversal_classes(5, 4, 3).unwrap());
        assert!(r.valid && r.steiner && r.solely_balanced);
        assert!(solely_balanced_triples(2).is_err());
    }

    #[test]
    fn spectrum_exclusions() {
        for m in [1, 2, 3, 4, 5, 7] {
            assert!(matches!(steiner_2_3(m), Err(Error::NotInSpectrum { .. })), "m = {m}");
        }
        for m in 1..=7 {
            assert!(matches!(steiner_2_4(m), Err(Error::NotInSpectrum { .. })), "m = {m}");
        }
        assert!(matches!(general_2_k(7, 3), Err(Error::NotInSpectrum { .. })));
        assert!(matches!(general_2_k(7, 5), Err(Error::UnknownSpectrum { .. })));
        assert!(matches!(general_2_k(4, 5), Err(Error::NotInSpectrum { .. })));
    }
}
