use crate::error::{Error, Result};
use crate::groups::{Element, Group, MarkedGroup};

/// (D_n; c, d) with c: x -> -x and d: x -> 1 - x, so that c·d is the unit
/// rotation of order n. `None` gives the infinite dihedral group.
pub fn dihedral(n: Option<u64>) -> Result<MarkedGroup> {
    if let Some(n) = n {
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "dihedral group needs n >= 2, got {n}"
            )));
        }
    }
    let c = Element::Dihedral {
        flip: true,
        shift: 0,
    };
    let d = Element::Dihedral {
        flip: true,
        shift: 1 % n.unwrap_or(2) as i64,
    };
    let name = match n {
        Some(n) => format!("D[{n}]"),
        None => "D_inf".into(),
    };
    MarkedGroup::new(Group::Dihedral { n }, vec![c, d], name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{BigOrder, Caps};

    #[test]
    fn orders() {
        let d4 = dihedral(Some(4)).unwrap();
        assert_eq!(d4.order(&Caps::default()).unwrap(), BigOrder::finite(8u32));
        let cd = d4.group.mul(&d4.marking[0], &d4.marking[1]).unwrap();
        assert_eq!(d4.group.element_order(&cd).unwrap(), BigOrder::finite(4u32));
        assert!(dihedral(Some(1)).is_err());
    }
}
