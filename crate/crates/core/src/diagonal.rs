//! Diagonal products of marked groups, Goursat-type fullness checks, density
//! of diagonal products in the full product, prefix coherence, and recovery
//! of a finite marked group from a sequence of approximants.
//!
//! Fullness and density are certified by exact order equality. Recognized
//! composition factors are reported alongside as advisory metadata.

use crate::cayley::agreement_radius;
use crate::error::{Error, Result};
use crate::groups::{
    enumerate_subgroup, BigOrder, Caps, Closure, Element, Family, Group, MarkedGroup,
};
use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use std::collections::BTreeSet;

/// The marked subgroup of the direct product generated by the tuples of
/// matched generators.
pub fn diagonal_product(mgs: &[MarkedGroup]) -> Result<MarkedGroup> {
    let first = mgs
        .first()
        .ok_or_else(|| Error::InvalidInput("diagonal product of no groups".into()))?;
    let k = first.k();
    if let Some(bad) = mgs.iter().find(|m| m.k() != k) {
        return Err(Error::ColorMismatch(k, bad.k()));
    }
    let group = Group::Product(mgs.iter().map(|m| m.group.clone()).collect());
    let marking = (0..k)
        .map(|j| Element::Tuple(mgs.iter().map(|m| m.marking[j].clone()).collect()))
        .collect();
    let name = format!(
        "Delta({})",
        mgs.iter()
            .map(|m| m.name.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    );
    let mut out = MarkedGroup::new(group, marking, name)?;
    let bounds: Option<Vec<BigUint>> = mgs
        .iter()
        .map(|m| m.family.order().or_else(|| m.order_bound.clone()))
        .collect();
    if let Some(b) = bounds {
        out = out.with_order_bound(b.into_iter().product());
    }
    Ok(out)
}

/// Simple composition factors of a recognized family, as labels.
pub fn composition_factors(family: &Family) -> Option<BTreeSet<String>> {
    let primes = |n: u64| prime_factors(n).into_iter().map(|q| format!("Z/{q}"));
    Some(match family {
        Family::Unknown | Family::SpecialLinear { .. } => return None,
        Family::Cyclic { n } => primes(*n).collect(),
        Family::Alternating { n } if *n >= 5 => [format!("Alt({n})")].into(),
        Family::Alternating { n } => match n {
            0..=2 => BTreeSet::new(),
            3 => ["Z/3".to_string()].into(),
            _ => ["Z/2".to_string(), "Z/3".to_string()].into(),
        },
        Family::Symmetric { n } if *n >= 5 => [format!("Alt({n})"), "Z/2".to_string()].into(),
        Family::Symmetric { .. } => return None,
        Family::AltWreathCyclic { degree, p } => {
            let mut s = composition_factors(&Family::Alternating { n: *degree })?;
            s.extend(primes(*p));
            s
        }
    })
}

/// Simple quotients of a recognized family.
pub fn simple_quotients(family: &Family) -> Option<BTreeSet<String>> {
    let primes = |n: u64| {
        prime_factors(n)
            .into_iter()
            .map(|q| format!("Z/{q}"))
            .collect::<BTreeSet<_>>()
    };
    Some(match family {
        Family::Cyclic { n } => primes(*n),
        Family::Alternating { n } if *n >= 5 => [format!("Alt({n})")].into(),
        Family::Symmetric { n } if *n >= 5 => ["Z/2".to_string()].into(),
        Family::AltWreathCyclic { degree, p } if *degree >= 5 => primes(*p),
        _ => return None,
    })
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A family claim is used only when the computed order matches it.
fn verified_family(mg: &MarkedGroup, order: &BigOrder) -> Option<Family> {
    match (mg.family.order(), order.as_finite()) {
        (Some(f), Some(o)) if f == *o => Some(mg.family.clone()),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GoursatVerdict {
    Full,
    Proper,
    HypothesisViolated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoursatReport {
    pub verdict: GoursatVerdict,
    pub projections_surjective: bool,
    pub order_h0: BigOrder,
    pub order_h1: BigOrder,
    pub product_order: BigOrder,
    pub achieved: BigOrder,
    /// A simple quotient shared by both factors, when one was recognized.
    pub common_quotient: Option<String>,
}

/// Decides whether `gens` generate all of H0 × H1.
pub fn goursat_full_check(
    h0: &MarkedGroup,
    h1: &MarkedGroup,
    gens: &[Element],
    caps: &Caps,
) -> Result<GoursatReport> {
    let mut left = Vec::with_capacity(gens.len());
    let mut right = Vec::with_capacity(gens.len());
    for g in gens {
        match g.as_tuple() {
            Some([a, b]) if h0.group.contains(a) && h1.group.contains(b) => {
                left.push(a.clone());
                right.push(b.clone());
            }
            _ => {
                return Err(Error::BackendMismatch(format!(
                    "{g} is not in {} x {}",
                    h0.name, h1.name
                )))
            }
        }
    }
    let order_h0 = h0.order(caps)?;
    let order_h1 = h1.order(caps)?;
    let (Some(o0), Some(o1)) = (order_h0.as_finite().cloned(), order_h1.as_finite().cloned())
    else {
        return Err(Error::Unsupported(
            "Goursat check needs finite factors".into(),
        ));
    };
    let product_order = BigOrder::Finite(&o0 * &o1);
    let proj0 = MarkedGroup::new(h0.group.clone(), left, "proj0")?
        .with_order_bound(o0.clone())
        .order(caps)?;
    let proj1 = MarkedGroup::new(h1.group.clone(), right, "proj1")?
        .with_order_bound(o1.clone())
        .order(caps)?;
    let projections_surjective = proj0 == order_h0 && proj1 == order_h1;
    let sub = MarkedGroup::new(
        Group::Product(vec![h0.group.clone(), h1.group.clone()]),
        gens.to_vec(),
        "sub",
    )?
    .with_order_bound(&o0 * &o1);
    let achieved = sub.order(caps)?;
    let common_quotient = match (
        verified_family(h0, &order_h0)
            .as_ref()
            .and_then(simple_quotients),
        verified_family(h1, &order_h1)
            .as_ref()
            .and_then(simple_quotients),
    ) {
        (Some(a), Some(b)) => a.intersection(&b).next().cloned(),
        _ => None,
    };
    let verdict = if !projections_surjective {
        GoursatVerdict::Proper
    } else if common_quotient.is_some() {
        GoursatVerdict::HypothesisViolated
    } else if achieved == product_order {
        GoursatVerdict::Full
    } else {
        GoursatVerdict::Proper
    };
    Ok(GoursatReport {
        verdict,
        projections_surjective,
        order_h0,
        order_h1,
        product_order,
        achieved,
        common_quotient,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityMethod {
    OrderEquality,
    RecognizedFactors,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityVerdict {
    pub dense: bool,
    pub method: DensityMethod,
    pub factor_orders: Vec<BigOrder>,
    pub full_order: BigOrder,
    pub achieved: BigOrder,
    /// Composition factors of each factor, when every factor was recognized.
    pub recognized_factors: Option<Vec<Vec<String>>>,
    /// Whether the recognized factors are pairwise disjoint, which already
    /// forces density.
    pub recognized_dense: Option<bool>,
}

/// Density of the diagonal product in the full product, by exact order
/// equality.
pub fn density_check(mgs: &[MarkedGroup], caps: &Caps) -> Result<DensityVerdict> {
    let mut factor_orders = Vec::with_capacity(mgs.len());
    let mut full = BigUint::one();
    for (i, m) in mgs.iter().enumerate() {
        let o = m.order(caps).map_err(|e| Error::Stage {
            stage: i,
            reason: e.to_string(),
        })?;
        match o.as_finite() {
            Some(v) => full *= v,
            None => {
                return Err(Error::Stage {
                    stage: i,
                    reason: format!("factor order is {o}"),
                })
            }
        }
        factor_orders.push(o);
    }
    let delta = diagonal_product(mgs)?.with_order_bound(full.clone());
    if delta.perm_rep(caps).is_none() {
        return Err(Error::ResourceExhausted {
            what: format!("permutation representation of {}", delta.name),
            limit: caps.bsgs_points,
        });
    }
    // a single factor is its own diagonal product
    let achieved = if mgs.len() == 1 {
        factor_orders[0].clone()
    } else {
        delta.order(caps)?
    };
    let full_order = BigOrder::Finite(full);
    let recognized: Option<Vec<BTreeSet<String>>> = mgs
        .iter()
        .zip(&factor_orders)
        .map(|(m, o)| verified_family(m, o).as_ref().and_then(composition_factors))
        .collect();
    let recognized_dense = recognized.as_ref().map(|sets| {
        sets.iter()
            .enumerate()
            .all(|(i, a)| sets[i + 1..].iter().all(|b| a.is_disjoint(b)))
    });
    let dense = achieved == full_order;
    Ok(DensityVerdict {
        dense,
        method: DensityMethod::OrderEquality,
        factor_orders,
        full_order,
        achieved,
        recognized_factors: recognized
            .map(|v| v.into_iter().map(|s| s.into_iter().collect()).collect()),
        recognized_dense: recognized_dense.filter(|&d| d),
    })
}

/// All words of length `1..=len` over the generators and their inverses.
fn words(k: usize, len: usize) -> Vec<Vec<i64>> {
    let letters: Vec<i64> = (1..=k as i64).flat_map(|j| [j, -j]).collect();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last() == Some(&-l) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixConsistency {
    pub consistent: bool,
    /// |Δ_{M_n}| for n = 1, 2, … .
    pub prefix_orders: Vec<BigOrder>,
    pub relators_checked: usize,
}

/// Checks that deleting the last coordinate maps each prefix diagonal product
/// onto the previous one as a marked quotient: short relators of the longer
/// prefix hold in the shorter one and orders divide.
pub fn prefix_quotient_consistency(mgs: &[MarkedGroup], caps: &Caps) -> Result<PrefixConsistency> {
    const RELATOR_LENGTH: usize = 4;
    let mut prefix_orders = Vec::new();
    let mut consistent = true;
    let mut relators_checked = 0;
    let mut prev: Option<(MarkedGroup, BigOrder)> = None;
    for n in 1..=mgs.len() {
        let d = diagonal_product(&mgs[..n])?;
        let o = d.order(caps)?;
        if let Some((pd, po)) = &prev {
            if let (Some(a), Some(b)) = (po.as_finite(), o.as_finite()) {
                consistent &= (b % a) == BigUint::from(0u32);
            }
            for w in words(d.k(), RELATOR_LENGTH) {
                if d.group.is_identity(&d.eval_word(&w)?) {
                    relators_checked += 1;
                    consistent &= pd.group.is_identity(&pd.eval_word(&w)?);
                }
            }
        }
        prefix_orders.push(o.clone());
        prev = Some((d, o));
    }
    Ok(PrefixConsistency {
        consistent,
        prefix_orders,
        relators_checked,
    })
}

/// Kernel of the generator-matching map from a diagonal product onto a
/// limit marked group, computed by enumerating the graph of the map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub well_defined: bool,
    pub source_order: usize,
    pub image_order: usize,
    pub kernel_order: usize,
}

pub fn kernel_to_limit(
    source: &MarkedGroup,
    limit: &MarkedGroup,
    caps: &Caps,
) -> Result<KernelReport> {
    if source.k() != limit.k() {
        return Err(Error::ColorMismatch(source.k(), limit.k()));
    }
    let pair_group = Group::Product(vec![source.group.clone(), limit.group.clone()]);
    let gens: Vec<Element> = source
        .marking
        .iter()
        .zip(&limit.marking)
        .map(|(a, b)| Element::Tuple(vec![a.clone(), b.clone()]))
        .collect();
    let graph = match enumerate_subgroup(&pair_group, &gens, caps.closure)? {
        Closure::Complete(v) => v,
        Closure::CapExceeded { .. } => {
            return Err(Error::ResourceExhausted {
                what: "graph of the limit map".into(),
                limit: caps.closure,
            })
        }
    };
    let src = source.elements(caps)?.len();
    let img = limit.elements(caps)?.len();
    let kernel = graph
        .iter()
        .filter(|e| limit.group.is_identity(&e.as_tuple().expect("pair")[1]))
        .count();
    Ok(KernelReport {
        well_defined: graph.len() == src,
        source_order: src,
        image_order: img,
        kernel_order: kernel,
    })
}

/// A finite group given by a faithful marked group and defining relators.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: MarkedGroup,
    pub relators: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum FpRecovery {
    /// The diagonal product of the approximants after the first `deleted`
    /// is marked-isomorphic to the presented group.
    Recovered {
        deleted: usize,
    },
    Failed {
        reason: String,
    },
    Inconclusive {
        radius: u32,
    },
}

impl FpRecovery {
    pub fn holds(&self) -> Option<bool> {
        match self {
            FpRecovery::Recovered { .. } => Some(true),
            FpRecovery::Failed { .. } => Some(false),
            FpRecovery::Inconclusive { .. } => None,
        }
    }
}

fn relators_hold(mg: &MarkedGroup, relators: &[Vec<i64>]) -> Result<bool> {
    for r in relators {
        if !mg.group.is_identity(&mg.eval_word(r)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Deletes the shortest prefix of approximants whose balls of radius
/// R = (longest relator) disagree with H, then compares the diagonal product
/// of the rest with H.
pub fn fp_recovery_check(
    h: &Presentation,
    approximants: &[MarkedGroup],
    caps: &Caps,
) -> Result<FpRecovery> {
    let radius = h.relators.iter().map(Vec::len).max().unwrap_or(0) as u32;
    let mut agrees = Vec::with_capacity(approximants.len());
    for a in approximants {
        agrees.push(agreement_radius(&h.group, a, radius, caps)?.at_least(radius));
    }
    let start = (0..approximants.len()).find(|&s| agrees[s..].iter().all(|&x| x));
    let Some(deleted) = start else {
        return Ok(match approximants.last() {
            Some(last) if !relators_hold(last, &h.relators)? => FpRecovery::Failed {
                reason: format!("{} violates a relator", last.name),
            },
            _ => FpRecovery::Inconclusive { radius },
        });
    };
    let delta = diagonal_product(&approximants[deleted..])?;
    if !relators_hold(&delta, &h.relators)? {
        return Ok(FpRecovery::Failed {
            reason: "diagonal product violates a relator".into(),
        });
    }
    let (od, oh) = (delta.order(caps)?, h.group.order(caps)?);
    if od != oh {
        return Ok(FpRecovery::Failed {
            reason: format!("orders differ ({od} vs {oh})"),
        });
    }
    Ok(FpRecovery::Recovered { deleted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::std_groups::cyclic;

    fn z(n: u64) -> MarkedGroup {
        cyclic(Some(n)).unwrap()
    }

    #[test]
    fn chain_collapses() {
        let caps = Caps::default();
        let d = diagonal_product(&[z(2), z(4), z(8)]).unwrap();
        assert_eq!(d.order(&caps).unwrap(), BigOrder::finite(8u32));
        assert!(!density_check(&[z(2), z(4)], &caps).unwrap().dense);
        let v = density_check(&[z(4), z(9)], &caps).unwrap();
        assert!(v.dense);
        assert_eq!(v.recognized_dense, Some(true));
    }

    #[test]
    fn prefix_chain_is_consistent() {
        let r = prefix_quotient_consistency(&[z(2), z(4), z(8)], &Caps::default()).unwrap();
        assert!(r.consistent);
        assert!(r.relators_checked > 0);
    }

    #[test]
    fn empty_generators_are_proper() {
        let r = goursat_full_check(&z(2), &z(3), &[], &Caps::default()).unwrap();
        assert_eq!(r.verdict, GoursatVerdict::Proper);
        assert!(!r.projections_surjective);
    }

    #[test]
    fn kernel_of_chain_map() {
        let caps = Caps::default();
        let d = diagonal_product(&[z(2), z(4)]).unwrap();
        let r = kernel_to_limit(&d, &z(2), &caps).unwrap();
        assert!(r.well_defined);
        assert_eq!(r.kernel_order * r.image_order, r.source_order);
    }
}
