//! Computable groups: element payloads, ambient groups, marked groups, and
//! the order and membership machinery.

pub mod bsgs;
pub mod element;
pub mod enumerate;
pub mod group;
pub mod marked;
pub mod matrix;
pub mod order;
pub mod perm;
pub mod permrep;
pub mod std_groups;

pub use bsgs::{Bsgs, BsgsMethod};
pub use element::Element;
pub use enumerate::{enumerate_subgroup, Closure};
pub use group::Group;
pub use marked::{Family, MarkedGroup};
pub use matrix::Matrix;
pub use order::BigOrder;
pub use perm::Perm;
pub use permrep::PermRep;

use serde::{Deserialize, Serialize};

/// Resource limits shared by every computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Caps {
    /// Maximum number of vertices in a ball.
    pub ball: usize,
    /// Maximum number of elements in a closure enumeration.
    pub closure: usize,
    /// Maximum degree of a permutation representation handed to BSGS.
    pub bsgs_points: usize,
    /// Seed for the bound-certified BSGS.
    pub seed: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            ball: 2_000_000,
            closure: 1_000_000,
            bsgs_points: 20_000,
            seed: 0x5eed,
        }
    }
}

impl Caps {
    pub fn validate(&self) -> crate::Result<()> {
        if self.ball == 0 || self.closure == 0 || self.bsgs_points == 0 {
            return Err(crate::Error::InvalidInput("caps must be positive".into()));
        }
        Ok(())
    }
}

/// Element order, commutator and power under one entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementOp {
    Multiply,
    Inverse,
    Commutator,
    Power(i64),
    Order,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpResult {
    Element(Element),
    Order(BigOrder),
}

pub fn element_arithmetic(
    group: &Group,
    a: &Element,
    b: Option<&Element>,
    op: ElementOp,
) -> crate::Result<OpResult> {
    let need_b = || {
        b.ok_or_else(|| crate::Error::InvalidInput("binary operation needs two operands".into()))
    };
    for x in std::iter::once(a).chain(b) {
        if !group.contains(x) {
            return Err(crate::Error::BackendMismatch(format!(
                "{} element in {group}",
                x.backend_tag()
            )));
        }
    }
    Ok(match op {
        ElementOp::Multiply => OpResult::Element(group.mul(a, need_b()?)?),
        ElementOp::Inverse => OpResult::Element(group.inv(a)?),
        ElementOp::Commutator => OpResult::Element(group.commutator(a, need_b()?)?),
        ElementOp::Power(n) => OpResult::Element(group.pow(a, n)?),
        ElementOp::Order => OpResult::Order(group.element_order(a)?),
    })
}

pub fn perm_sign(e: &Element) -> crate::Result<i8> {
    match e {
        Element::Perm(p) => Ok(p.sign()),
        other => Err(crate::Error::BackendMismatch(format!(
            "sign of a {} element",
            other.backend_tag()
        ))),
    }
}

/// Exact order of the group generated by permutations of a common degree.
pub fn bsgs_order(degree: usize, gens: &[Perm]) -> crate::Result<(BigOrder, Bsgs)> {
    if gens.iter().any(|g| g.degree() != degree) {
        return Err(crate::Error::BackendMismatch(
            "generators on different domains".into(),
        ));
    }
    let b = Bsgs::new(degree, gens);
    Ok((BigOrder::Finite(b.order()), b))
}
