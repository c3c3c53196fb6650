use crate::error::{Error, Result};
use crate::groups::{Element, Family, Group, MarkedGroup};
use std::collections::BTreeMap;

/// `(f, top)` with identity values dropped from `f`.
pub fn wreath_element(
    base: &Group,
    support: impl IntoIterator<Item = (Element, Element)>,
    top: Element,
) -> Element {
    let support: BTreeMap<Element, Element> = support
        .into_iter()
        .filter(|(_, v)| !base.is_identity(v))
        .collect();
    Element::Wreath {
        support,
        top: Box::new(top),
    }
}

/// `g δ_at` with trivial top component.
pub fn delta(base: &Group, top: &Group, g: Element, at: Element) -> Element {
    wreath_element(base, [(at, g)], top.identity())
}

fn supported_top(top: &Group) -> bool {
    match top {
        Group::Cyclic { .. } | Group::Dihedral { .. } => true,
        Group::FreeAbelian { rank } => *rank <= 2,
        Group::Product(gs) => gs.iter().all(|g| matches!(g, Group::Cyclic { .. })),
        _ => false,
    }
}

/// base ≀ top marked by (s_i δ_e, e) followed by (𝐞, t_j).
pub fn wreath(base: &MarkedGroup, top: &MarkedGroup) -> Result<MarkedGroup> {
    if !supported_top(&top.group) {
        return Err(Error::Unsupported(format!(
            "wreath products with top group {}",
            top.group
        )));
    }
    let group = Group::Wreath {
        base: Box::new(base.group.clone()),
        top: Box::new(top.group.clone()),
    };
    let mut marking: Vec<Element> = base
        .marking
        .iter()
        .map(|s| delta(&base.group, &top.group, s.clone(), top.group.identity()))
        .collect();
    marking.extend(
        top.marking
            .iter()
            .map(|t| wreath_element(&base.group, [], t.clone())),
    );
    let family = match (&base.family, &top.group) {
        (Family::Alternating { n }, Group::Cyclic { order: Some(p) }) => {
            Family::AltWreathCyclic { degree: *n, p: *p }
        }
        _ => Family::Unknown,
    };
    Ok(
        MarkedGroup::new(group, marking, format!("({}) wr ({})", base.name, top.name))?
            .with_family(family),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::std_groups::cyclic;
    use crate::groups::{BigOrder, Caps};

    #[test]
    fn lamplighter_over_z3_has_order_24() {
        let w = wreath(&cyclic(Some(2)).unwrap(), &cyclic(Some(3)).unwrap()).unwrap();
        assert_eq!(w.order(&Caps::default()).unwrap(), BigOrder::finite(24u32));
    }

    #[test]
    fn shift_power_is_identity() {
        let w = wreath(&cyclic(Some(2)).unwrap(), &cyclic(Some(5)).unwrap()).unwrap();
        let u = &w.marking[1];
        assert!(w.group.is_identity(&w.group.pow(u, 5).unwrap()));
    }
}
