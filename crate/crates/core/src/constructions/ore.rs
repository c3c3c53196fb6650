//! Single-commutator witnesses in alternating groups.
//!
//! Up to degree 7 the search is exhaustive over pairs in lexicographic order
//! of image arrays, so the witness is the least pair. Above that, η runs
//! through Alt(n) in lexicographic order and ζ is the canonical conjugator
//! taking η to η·x (cycles matched in order of length), with its parity
//! fixed by an odd element of the centralizer of η.

use crate::error::{Error, Result};
use crate::groups::perm::{alternating_elements, Perm};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet, VecDeque};

const EXHAUSTIVE_MAX_DEGREE: usize = 7;
const CENTRALIZER_BUDGET: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderConstraint {
    /// η of order 2 and ζ of order 3.
    Respectively,
    /// η and ζ each of order 2 or 3.
    EachTwoOrThree,
}

impl OrderConstraint {
    fn admits(&self, eta: &Perm, zeta: &Perm) -> bool {
        let oe = eta.order();
        let oz = zeta.order();
        match self {
            OrderConstraint::Respectively => oe == 2u32.into() && oz == 3u32.into(),
            OrderConstraint::EachTwoOrThree => {
                (oe == 2u32.into() || oe == 3u32.into()) && (oz == 2u32.into() || oz == 3u32.into())
            }
        }
    }

    fn admits_eta(&self, eta: &Perm) -> bool {
        let o = eta.order();
        match self {
            OrderConstraint::Respectively => o == 2u32.into(),
            OrderConstraint::EachTwoOrThree => o == 2u32.into() || o == 3u32.into(),
        }
    }

    fn admits_zeta(&self, zeta: &Perm) -> bool {
        let o = zeta.order();
        match self {
            OrderConstraint::Respectively => o == 3u32.into(),
            OrderConstraint::EachTwoOrThree => o == 2u32.into() || o == 3u32.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OreOutcome {
    Found {
        eta: Perm,
        zeta: Perm,
    },
    /// The (possibly budgeted) search space held no admissible witness.
    Exhausted {
        searched: u64,
    },
}

impl OreOutcome {
    pub fn witness(&self) -> Option<(&Perm, &Perm)> {
        match self {
            OreOutcome::Found { eta, zeta } => Some((eta, zeta)),
            OreOutcome::Exhausted { .. } => None,
        }
    }
}

fn commutator(a: &Perm, b: &Perm) -> Perm {
    a.inv().mul(&b.inv()).mul(a).mul(b)
}

fn check_target(target: &Perm) -> Result<()> {
    if target.degree() < 5 {
        return Err(Error::Unsupported(format!(
            "Alt({}) is below degree 5",
            target.degree()
        )));
    }
    if target.sign() != 1 {
        return Err(Error::InvalidInput(format!("{target} is odd")));
    }
    Ok(())
}

/// Finds (η, ζ) in Alt(n) with [η, ζ] = target.
pub fn ore_commutator(target: &Perm, constraint: Option<OrderConstraint>) -> Result<OreOutcome> {
    check_target(target)?;
    let n = target.degree();
    if target.is_identity() && constraint.is_none() {
        return Ok(OreOutcome::Found {
            eta: Perm::identity(n),
            zeta: Perm::identity(n),
        });
    }
    if n <= EXHAUSTIVE_MAX_DEGREE {
        let alt = alternating_elements(n);
        let etas: Vec<&Perm> = alt
            .iter()
            .filter(|e| constraint.map_or(true, |c| c.admits_eta(e)))
            .collect();
        let zetas: Vec<&Perm> = alt
            .iter()
            .filter(|z| constraint.map_or(true, |c| c.admits_zeta(z)))
            .collect();
        let mut searched = 0u64;
        for eta in &etas {
            let ei = eta.inv();
            for zeta in &zetas {
                searched += 1;
                if ei.mul(&zeta.inv()).mul(eta).mul(zeta) == *target {
                    return Ok(OreOutcome::Found {
                        eta: (*eta).clone(),
                        zeta: (*zeta).clone(),
                    });
                }
            }
        }
        return Ok(OreOutcome::Exhausted { searched });
    }
    conjugacy_search(target, constraint)
}

/// Witnesses for every element of Alt(n) from one lexicographic pass over
/// pairs; each entry is the least witness for its target.
pub fn ore_table(n: usize) -> Result<HashMap<Perm, (Perm, Perm)>> {
    if !(5..=EXHAUSTIVE_MAX_DEGREE).contains(&n) {
        return Err(Error::Unsupported(format!("exhaustive table for Alt({n})")));
    }
    let alt = alternating_elements(n);
    let inv: Vec<Perm> = alt.iter().map(Perm::inv).collect();
    let mut out = HashMap::new();
    for (i, eta) in alt.iter().enumerate() {
        for (j, zeta) in alt.iter().enumerate() {
            let c = inv[i].mul(&inv[j]).mul(eta).mul(zeta);
            out.entry(c).or_insert_with(|| (eta.clone(), zeta.clone()));
        }
        if out.len() == alt.len() {
            break;
        }
    }
    Ok(out)
}

/// Cycles of `p` including fixed points, ordered by length then first point.
fn sorted_cycles(p: &Perm) -> Vec<Vec<u32>> {
    let n = p.degree();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut c = vec![s as u32];
        seen[s] = true;
        let mut x = p.apply(s as u32);
        while x as usize != s {
            seen[x as usize] = true;
            c.push(x);
            x = p.apply(x);
        }
        out.push(c);
    }
    out.sort_by_key(|c| c.len());
    out
}

/// ζ with ζ⁻¹ a ζ = b (cycle of a starting at u mapped to cycle of b starting at v).
fn conjugator(a: &Perm, b: &Perm) -> Option<Perm> {
    let ca = sorted_cycles(a);
    let cb = sorted_cycles(b);
    if ca.iter().map(Vec::len).ne(cb.iter().map(Vec::len)) {
        return None;
    }
    let mut img = vec![0u32; a.degree()];
    for (x, y) in ca.iter().zip(&cb) {
        for (u, v) in x.iter().zip(y) {
            img[*u as usize] = *v;
        }
    }
    Perm::from_images(img)
}

/// An odd permutation commuting with `eta`, if any.
fn odd_centralizer_element(eta: &Perm) -> Option<Perm> {
    let n = eta.degree();
    let cycles = sorted_cycles(eta);
    if let Some(c) = cycles.iter().find(|c| c.len() % 2 == 0) {
        return Perm::from_cycles(n, &[c]);
    }
    let fixed: Vec<u32> = cycles
        .iter()
        .filter(|c| c.len() == 1)
        .map(|c| c[0])
        .collect();
    if fixed.len() >= 2 {
        return Some(Perm::transposition(n, fixed[0], fixed[1]));
    }
    for w in cycles.windows(2) {
        if w[0].len() == w[1].len() && w[0].len() > 1 {
            let pairs: Vec<[u32; 2]> = w[0].iter().zip(&w[1]).map(|(a, b)| [*a, *b]).collect();
            let refs: Vec<&[u32]> = pairs.iter().map(|p| p.as_slice()).collect();
            return Perm::from_cycles(n, &refs);
        }
    }
    None
}

/// Generators of the centralizer of `eta` in Sym(n).
fn centralizer_generators(eta: &Perm) -> Vec<Perm> {
    let n = eta.degree();
    let cycles = sorted_cycles(eta);
    let mut gens = Vec::new();
    for c in cycles.iter().filter(|c| c.len() > 1) {
        gens.push(Perm::from_cycles(n, &[c]).expect("cycle"));
    }
    for w in cycles.windows(2) {
        if w[0].len() == w[1].len() {
            let pairs: Vec<[u32; 2]> = w[0].iter().zip(&w[1]).map(|(a, b)| [*a, *b]).collect();
            let refs: Vec<&[u32]> = pairs.iter().map(|p| p.as_slice()).collect();
            gens.push(Perm::from_cycles(n, &refs).expect("swap"));
        }
    }
    gens
}

fn lex_even_perms(n: usize) -> impl Iterator<Item = Perm> {
    let mut p = Perm::identity(n);
    let mut first = true;
    std::iter::from_fn(move || loop {
        if !first && !p.next_lex() {
            return None;
        }
        first = false;
        if p.sign() == 1 {
            return Some(p.clone());
        }
    })
}

fn conjugacy_search(target: &Perm, constraint: Option<OrderConstraint>) -> Result<OreOutcome> {
    let n = target.degree();
    let target_type = target.cycle_type();
    let _ = target_type;
    let mut searched = 0u64;
    let limit: u64 = 5_000_000;
    for eta in lex_even_perms(n) {
        if searched >= limit {
            break;
        }
        searched += 1;
        if let Some(c) = constraint {
            if !c.admits_eta(&eta) {
                continue;
            }
        }
        let b = eta.mul(target);
        if eta.cycle_type() != b.cycle_type() {
            continue;
        }
        let Some(z0) = conjugator(&eta, &b) else {
            continue;
        };
        match constraint {
            None => {
                let zeta = if z0.sign() == 1 {
                    z0
                } else {
                    match odd_centralizer_element(&eta) {
                        Some(c) => c.mul(&z0),
                        None => continue,
                    }
                };
                debug_assert_eq!(commutator(&eta, &zeta), *target);
                return Ok(OreOutcome::Found { eta, zeta });
            }
            Some(c) => {
                // scan the coset C(η)·z0 breadth-first within a budget
                let gens = centralizer_generators(&eta);
                let mut seen: HashSet<Perm> = HashSet::new();
                let mut queue = VecDeque::new();
                let id = Perm::identity(n);
                seen.insert(id.clone());
                queue.push_back(id);
                while let Some(cent) = queue.pop_front() {
                    let zeta = cent.mul(&z0);
                    if zeta.sign() == 1 && c.admits(&eta, &zeta) {
                        return Ok(OreOutcome::Found { eta, zeta });
                    }
                    if seen.len() >= CENTRALIZER_BUDGET {
                        continue;
                    }
                    for g in &gens {
                        let next = cent.mul(g);
                        if seen.insert(next.clone()) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }
    Ok(OreOutcome::Exhausted { searched })
}

/// Checks a witness.
pub fn is_witness(target: &Perm, eta: &Perm, zeta: &Perm) -> bool {
    eta.sign() == 1 && zeta.sign() == 1 && commutator(eta, zeta) == *target
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_maps_to_identity_pair() {
        let id = Perm::identity(5);
        assert_eq!(
            ore_commutator(&id, None).unwrap(),
            OreOutcome::Found {
                eta: id.clone(),
                zeta: id
            }
        );
    }

    #[test]
    fn large_degree_conjugacy_method() {
        let x = Perm::from_cycles(10, &[&[0, 1, 2, 3, 4, 5, 6, 7, 8], &[]]).unwrap();
        let OreOutcome::Found { eta, zeta } = ore_commutator(&x, None).unwrap() else {
            panic!()
        };
        assert!(is_witness(&x, &eta, &zeta));
        let y = Perm::from_cycles(12, &[&[0, 1], &[2, 3], &[4, 5, 6, 7, 8, 9, 10]]).unwrap();
        let OreOutcome::Found { eta, zeta } = ore_commutator(&y, None).unwrap() else {
            panic!()
        };
        assert!(is_witness(&y, &eta, &zeta));
    }

    #[test]
    fn rejects_small_or_odd() {
        assert!(ore_commutator(&Perm::identity(4), None).is_err());
        assert!(ore_commutator(&Perm::transposition(5, 0, 1), None).is_err());
    }
}
