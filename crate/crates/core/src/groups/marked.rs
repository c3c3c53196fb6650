use super::bsgs::Bsgs;
use super::element::Element;
use super::enumerate::{enumerate_subgroup, Closure};
use super::group::Group;
use super::order::{alternating_order, factorial, sl_order, BigOrder};
use super::perm::Perm;
use super::permrep::PermRep;
use super::Caps;
use crate::error::{Error, Result};
use num_bigint::BigUint;
use serde::Serialize;

/// Known isomorphism type of the generated subgroup, used for order bounds
/// and for recognizing simple quotients. Claims are always checked against a
/// computed order before they are trusted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Unknown,
    Cyclic {
        n: u64,
    },
    Alternating {
        n: usize,
    },
    Symmetric {
        n: usize,
    },
    SpecialLinear {
        n: usize,
        p: u64,
    },
    /// Alt(degree) ≀ Z/p.
    AltWreathCyclic {
        degree: usize,
        p: u64,
    },
}

impl Family {
    pub fn order(&self) -> Option<BigUint> {
        Some(match self {
            Family::Unknown => return None,
            Family::Cyclic { n } => BigUint::from(*n),
            Family::Alternating { n } => alternating_order(*n as u64),
            Family::Symmetric { n } => factorial(*n as u64),
            Family::SpecialLinear { n, p } => sl_order(*n as u32, *p),
            Family::AltWreathCyclic { degree, p } => {
                alternating_order(*degree as u64).pow(*p as u32) * BigUint::from(*p)
            }
        })
    }
}

/// A group together with an ordered generating tuple.
#[derive(Clone, Debug)]
pub struct MarkedGroup {
    pub group: Group,
    pub marking: Vec<Element>,
    pub name: String,
    pub family: Family,
    /// Known upper bound on the order, e.g. the order of an ambient product.
    pub order_bound: Option<BigUint>,
    /// Order already established by an exact computation.
    pub exact_order: Option<BigOrder>,
}

impl MarkedGroup {
    pub fn new(group: Group, marking: Vec<Element>, name: impl Into<String>) -> Result<Self> {
        group.validate()?;
        for (i, s) in marking.iter().enumerate() {
            if !group.contains(s) {
                return Err(Error::InvalidInput(format!(
                    "marking entry {} ({s}) is not in {group}",
                    i + 1
                )));
            }
        }
        Ok(MarkedGroup {
            group,
            marking,
            name: name.into(),
            family: Family::Unknown,
            order_bound: None,
            exact_order: None,
        })
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    pub fn with_order_bound(mut self, bound: BigUint) -> Self {
        self.order_bound = Some(bound);
        self
    }

    /// Records an order computed exactly elsewhere so later calls reuse it.
    pub fn with_exact_order(mut self, order: BigOrder) -> Self {
        self.exact_order = order.is_finite().then_some(order);
        self
    }

    pub fn k(&self) -> usize {
        self.marking.len()
    }

    pub fn perm_rep(&self, caps: &Caps) -> Option<PermRep> {
        PermRep::for_group(&self.group, caps.bsgs_points)
    }

    /// Marking in a faithful permutation representation.
    pub fn perm_marking(&self, caps: &Caps) -> Result<Option<(usize, Vec<Perm>)>> {
        let Some(rep) = self.perm_rep(caps) else {
            return Ok(None);
        };
        let gens = self
            .marking
            .iter()
            .map(|s| rep.image(&self.group, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some((rep.degree(), gens)))
    }

    /// BSGS of the marked subgroup, using the family order or the order bound
    /// when known.
    pub fn bsgs(&self, caps: &Caps) -> Result<Option<Bsgs>> {
        let Some((deg, gens)) = self.perm_marking(caps)? else {
            return Ok(None);
        };
        Ok(Some(
            match self.family.order().or_else(|| self.order_bound.clone()) {
                Some(bound) => Bsgs::with_order_bound(deg, &gens, &bound, caps.seed),
                None => Bsgs::new(deg, &gens),
            },
        ))
    }

    /// Order of the generated subgroup.
    pub fn order(&self, caps: &Caps) -> Result<BigOrder> {
        if let Some(o) = &self.exact_order {
            return Ok(o.clone());
        }
        for s in &self.marking {
            if self.group.element_order(s)? == BigOrder::Infinite {
                return Ok(BigOrder::Infinite);
            }
        }
        if let Some(b) = self.bsgs(caps)? {
            return Ok(BigOrder::Finite(b.order()));
        }
        match enumerate_subgroup(&self.group, &self.marking, caps.closure)? {
            Closure::Complete(v) => Ok(BigOrder::finite(v.len() as u64)),
            Closure::CapExceeded { .. } => Ok(BigOrder::Unknown),
        }
    }

    /// Elements of the generated subgroup in closure order.
    pub fn elements(&self, caps: &Caps) -> Result<Vec<Element>> {
        match enumerate_subgroup(&self.group, &self.marking, caps.closure)? {
            Closure::Complete(v) => Ok(v),
            Closure::CapExceeded { .. } => Err(Error::ResourceExhausted {
                what: format!("closure of {}", self.name),
                limit: caps.closure,
            }),
        }
    }

    /// Evaluates a word given as signed 1-based generator indices.
    pub fn eval_word(&self, word: &[i64]) -> Result<Element> {
        let mut acc = self.group.identity();
        for &l in word {
            let idx = l.unsigned_abs() as usize;
            if l == 0 || idx > self.k() {
                return Err(Error::LetterOutOfRange {
                    letter: l,
                    available: self.k(),
                });
            }
            let s = &self.marking[idx - 1];
            let s = if l < 0 { self.group.inv(s)? } else { s.clone() };
            acc = self.group.mul(&acc, &s)?;
        }
        Ok(acc)
    }
}
