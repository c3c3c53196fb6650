use super::wreath::{delta, wreath_element};
use crate::error::{Error, Result};
use crate::groups::{BigOrder, Element, Group, MarkedGroup};

/// The marking (z_1, …, z_k, t) of G ≀ Z with z_j = s_j δ_{2^m (j-1)} and t = (𝐞, 1).
pub fn absorption_marking(mg: &MarkedGroup, m: u32) -> Result<MarkedGroup> {
    if mg.k() == 0 {
        return Err(Error::InvalidInput(
            "absorption marking needs at least one generator".into(),
        ));
    }
    let step = 1i64
        .checked_shl(m)
        .filter(|&s| s > 0)
        .ok_or_else(|| Error::InvalidInput(format!("m = {m} is too large")))?;
    let top = Group::integers();
    let group = Group::Wreath {
        base: Box::new(mg.group.clone()),
        top: Box::new(top.clone()),
    };
    let mut marking: Vec<Element> = mg
        .marking
        .iter()
        .enumerate()
        .map(|(j, s)| delta(&mg.group, &top, s.clone(), Element::Int(step * j as i64)))
        .collect();
    marking.push(wreath_element(&mg.group, [], Element::Int(1)));
    MarkedGroup::new(group, marking, format!("({}) wr Z; S_{m}", mg.name))
}

/// The limit (C_1 × ⋯ × C_k) ≀ Z with C_j cyclic of the order of s_j, marked
/// by (c_j δ_0, 0) and (𝐞, 1).
pub fn absorption_limit(mg: &MarkedGroup) -> Result<MarkedGroup> {
    let mut orders = Vec::new();
    for s in &mg.marking {
        match mg.group.element_order(s)?.to_u64() {
            Some(o) => orders.push(o),
            None => {
                return Err(Error::Unsupported(format!(
                    "generator {s} without finite order"
                )))
            }
        }
    }
    let base = crate::groups::std_groups::cyclic_product(&orders)?;
    let top = Group::integers();
    let group = Group::Wreath {
        base: Box::new(base.group.clone()),
        top: Box::new(top.clone()),
    };
    let mut marking: Vec<Element> = base
        .marking
        .iter()
        .map(|c| delta(&base.group, &top, c.clone(), Element::Int(0)))
        .collect();
    marking.push(wreath_element(&base.group, [], Element::Int(1)));
    MarkedGroup::new(group, marking, format!("({}) wr Z", base.name))
}

/// True when all z_j pairwise commute.
pub fn markings_commute(mg: &MarkedGroup) -> Result<bool> {
    let k = mg.k().saturating_sub(1);
    for i in 0..k {
        for j in i + 1..k {
            let c = mg.group.commutator(&mg.marking[i], &mg.marking[j])?;
            if !mg.group.is_identity(&c) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Order of the cyclic group C of the limit, the lcm of the generator orders.
pub fn limit_cyclic_order(mg: &MarkedGroup) -> Result<BigOrder> {
    use num_integer::Integer;
    let mut acc = num_bigint::BigUint::from(1u32);
    for s in &mg.marking {
        match mg.group.element_order(s)? {
            BigOrder::Finite(o) => acc = acc.lcm(&o),
            other => return Ok(other),
        }
    }
    Ok(BigOrder::Finite(acc))
}
