use super::wreath::wreath_element;
use crate::error::{Error, Result};
use crate::groups::{Element, Group, MarkedGroup};
use serde::Serialize;
use std::collections::HashMap;

/// Rejects placements with a repeated non-zero difference, reporting the
/// colliding pairs.
pub fn check_sidon(placement: &[i64]) -> Result<()> {
    let mut seen: HashMap<i64, (i64, i64)> = HashMap::new();
    for (i, &a) in placement.iter().enumerate() {
        for (j, &b) in placement.iter().enumerate() {
            if i == j {
                continue;
            }
            if a == b {
                return Err(Error::InvalidInput(format!("placement repeats {a}")));
            }
            if let Some((c, d)) = seen.insert(a - b, (a, b)) {
                return Err(Error::NotSidon { a, b, c, d });
            }
        }
    }
    Ok(())
}

/// Sidon check for differences taken modulo `p`.
pub fn check_sidon_mod(placement: &[i64], p: u64) -> Result<()> {
    let p = p as i64;
    let mut seen: HashMap<i64, (i64, i64)> = HashMap::new();
    for (i, &a) in placement.iter().enumerate() {
        for (j, &b) in placement.iter().enumerate() {
            if i == j {
                continue;
            }
            let diff = (a - b).rem_euclid(p);
            if diff == 0 {
                return Err(Error::InvalidInput(format!("{a} and {b} coincide mod {p}")));
            }
            if let Some((c, d)) = seen.insert(diff, (a, b)) {
                return Err(Error::NotSidon { a, b, c, d });
            }
        }
    }
    Ok(())
}

/// The default placement 2^1, …, 2^k.
pub fn powers_of_two(k: usize) -> Vec<i64> {
    (1..=k as u32).map(|j| 1i64 << j).collect()
}

/// ⟨w, u⟩ inside G ≀ Z (or G ≀ Z/p) with w = (f, 0), f(a_j) = s_j, u = (𝐞, 1).
#[derive(Clone, Debug)]
pub struct HallMarking {
    pub marked: MarkedGroup,
    pub base: MarkedGroup,
    pub placement: Vec<i64>,
    pub w: Element,
    pub u: Element,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorWitness {
    pub i: usize,
    pub j: usize,
    /// Support of [w_i, w_j] as integers.
    pub support: Vec<i64>,
    /// Value at 0 (identity when the commutator is trivial).
    pub value: String,
    pub expected: String,
    pub exact: bool,
}

fn build(mg: &MarkedGroup, placement: &[i64], top: Group) -> Result<HallMarking> {
    if placement.len() != mg.k() {
        return Err(Error::InvalidInput(format!(
            "placement has {} entries for {} generators",
            placement.len(),
            mg.k()
        )));
    }
    check_sidon(placement)?;
    let reduce = |a: i64| match top {
        Group::Cyclic { order: Some(p) } => a.rem_euclid(p as i64),
        _ => a,
    };
    if let Group::Cyclic { order: Some(p) } = top {
        check_sidon_mod(placement, p)?;
    }
    let group = Group::Wreath {
        base: Box::new(mg.group.clone()),
        top: Box::new(top.clone()),
    };
    let w = wreath_element(
        &mg.group,
        placement
            .iter()
            .zip(&mg.marking)
            .map(|(&a, s)| (Element::Int(reduce(a)), s.clone())),
        Element::Int(0),
    );
    let u = wreath_element(&mg.group, [], Element::Int(1));
    let marked = MarkedGroup::new(
        group,
        vec![w.clone(), u.clone()],
        format!("Hall({}; w, u)", mg.name),
    )?;
    Ok(HallMarking {
        marked,
        base: mg.clone(),
        placement: placement.to_vec(),
        w,
        u,
    })
}

/// Hall-type marking of G ≀ Z.
pub fn hall_wreath_marking(mg: &MarkedGroup, placement: &[i64]) -> Result<HallMarking> {
    build(mg, placement, Group::integers())
}

/// Same marking inside G ≀ Z/p.
pub fn hall_wreath_marking_mod(mg: &MarkedGroup, placement: &[i64], p: u64) -> Result<HallMarking> {
    build(mg, placement, Group::cyclic(p))
}

impl HallMarking {
    /// w_i = u^{a_i} w u^{-a_i}, supported on {a_j - a_i}.
    pub fn conjugates(&self) -> Result<Vec<Element>> {
        let g = &self.marked.group;
        self.placement
            .iter()
            .map(|&a| {
                let ua = g.pow(&self.u, a)?;
                g.mul(&g.mul(&ua, &self.w)?, &g.inv(&ua)?)
            })
            .collect()
    }

    /// [w_i, w_j] for all ordered pairs, compared with ([s_i, s_j] δ_0, 0).
    pub fn commutator_table(&self) -> Result<Vec<CommutatorWitness>> {
        let g = &self.marked.group;
        let bg = &self.base.group;
        let ws = self.conjugates()?;
        let mut out = Vec::new();
        for i in 0..ws.len() {
            for j in 0..ws.len() {
                let c = g.commutator(&ws[i], &ws[j])?;
                let expected_val = bg.commutator(&self.base.marking[i], &self.base.marking[j])?;
                let expected = wreath_element(
                    bg,
                    [(Element::Int(0), expected_val.clone())],
                    Element::Int(0),
                );
                let Element::Wreath { support, .. } = &c else {
                    return Err(Error::Internal("wreath commutator".into()));
                };
                let value = support
                    .get(&Element::Int(0))
                    .cloned()
                    .unwrap_or_else(|| bg.identity());
                out.push(CommutatorWitness {
                    i: i + 1,
                    j: j + 1,
                    support: support.keys().filter_map(Element::as_int).collect(),
                    value: value.to_string(),
                    expected: expected_val.to_string(),
                    exact: c == expected,
                });
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidon_checks() {
        assert!(check_sidon(&[2, 4, 8, 16]).is_ok());
        assert!(matches!(
            check_sidon(&[1, 2, 3]),
            Err(Error::NotSidon { .. })
        ));
        assert!(check_sidon_mod(&[0, 1, 3], 7).is_ok());
        assert!(check_sidon_mod(&[0, 1, 3], 5).is_err());
        assert_eq!(powers_of_two(3), vec![2, 4, 8]);
    }
}
