use super::matrix::Matrix;
use super::perm::Perm;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

/// Canonical payload of a group element. Equality is structural, so every
/// backend keeps its values normalized (residues reduced, identity entries of
/// finitely supported maps dropped).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Perm(Perm),
    Matrix(Matrix),
    /// Residue of Z/n (in `0..n`) or an integer of Z.
    Int(i64),
    /// Element of Z^d.
    Vector(Vec<i64>),
    /// The affine map x -> ±x + shift.
    Dihedral {
        flip: bool,
        shift: i64,
    },
    Tuple(Vec<Element>),
    /// Finitely supported function top -> base together with a top element.
    Wreath {
        support: BTreeMap<Element, Element>,
        top: Box<Element>,
    },
    /// Finitary permutation (moved points only) followed by right multiplication.
    Finitary {
        perm: BTreeMap<Element, Element>,
        shift: Box<Element>,
    },
    /// `(I + N) · T_shift` with N stored sparsely.
    FinitaryMatrix {
        entries: BTreeMap<(Element, Element), u32>,
        shift: Box<Element>,
    },
    /// Amalgam normal form: head in the amalgamated subgroup, then coset
    /// representatives tagged with their factor (0 = A, 1 = B).
    Amalgam {
        head: Box<Element>,
        word: Vec<(u8, Element)>,
    },
}

impl Element {
    pub fn as_perm(&self) -> Option<&Perm> {
        match self {
            Element::Perm(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&Matrix> {
        match self {
            Element::Matrix(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Element::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[Element]> {
        match self {
            Element::Tuple(v) => Some(v),
            _ => None,
        }
    }

    pub fn backend_tag(&self) -> &'static str {
        match self {
            Element::Perm(_) => "perm",
            Element::Matrix(_) => "matrix",
            Element::Int(_) => "int",
            Element::Vector(_) => "vector",
            Element::Dihedral { .. } => "dihedral",
            Element::Tuple(_) => "tuple",
            Element::Wreath { .. } => "wreath",
            Element::Finitary { .. } => "finitary",
            Element::FinitaryMatrix { .. } => "finitary-matrix",
            Element::Amalgam { .. } => "amalgam",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Element::Perm(p) => json!({"perm": p.images()}),
            Element::Matrix(m) => {
                let rows: Vec<&[u32]> = m.data.chunks(m.n.max(1)).collect();
                json!({ "matrix": rows })
            }
            Element::Int(v) => json!(v),
            Element::Vector(v) => json!(v),
            Element::Dihedral { flip, shift } => json!({"flip": flip, "shift": shift}),
            Element::Tuple(v) => Value::Array(v.iter().map(Element::to_json).collect()),
            Element::Wreath { support, top } => json!({
                "support": support.iter().map(|(k, v)| json!([k.to_json(), v.to_json()])).collect::<Vec<_>>(),
                "top": top.to_json(),
            }),
            Element::Finitary { perm, shift } => json!({
                "moved": perm.iter().map(|(k, v)| json!([k.to_json(), v.to_json()])).collect::<Vec<_>>(),
                "shift": shift.to_json(),
            }),
            Element::FinitaryMatrix { entries, shift } => json!({
                "entries": entries.iter().map(|((a, b), v)| json!([a.to_json(), b.to_json(), v])).collect::<Vec<_>>(),
                "shift": shift.to_json(),
            }),
            Element::Amalgam { head, word } => json!({
                "head": head.to_json(),
                "word": word.iter().map(|(s, e)| json!([s, e.to_json()])).collect::<Vec<_>>(),
            }),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Perm(p) => write!(f, "{p}"),
            Element::Matrix(m) => write!(f, "{m:?}"),
            Element::Int(v) => write!(f, "{v}"),
            Element::Vector(v) => write!(f, "{v:?}"),
            Element::Dihedral { flip, shift } => {
                write!(f, "x -> {}x + {shift}", if *flip { "-" } else { "" })
            }
            Element::Tuple(v) => {
                write!(f, "(")?;
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            Element::Wreath { support, top } => {
                write!(f, "(")?;
                if support.is_empty() {
                    write!(f, "e")?;
                }
                for (i, (k, v)) in support.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{v}@{k}")?;
                }
                write!(f, "; {top})")
            }
            Element::Finitary { perm, shift } => {
                write!(f, "(")?;
                for (i, (k, v)) in perm.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k}->{v}")?;
                }
                write!(f, "; {shift})")
            }
            Element::FinitaryMatrix { entries, shift } => {
                write!(f, "(I")?;
                for ((a, b), v) in entries {
                    write!(f, " + {v}E[{a},{b}]")?;
                }
                write!(f, "; {shift})")
            }
            Element::Amalgam { head, word } => {
                write!(f, "{head}")?;
                for (s, e) in word {
                    write!(f, " {}:{e}", if *s == 0 { "A" } else { "B" })?;
                }
                Ok(())
            }
        }
    }
}
