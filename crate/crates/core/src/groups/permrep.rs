use super::element::Element;
use super::group::Group;
use super::perm::Perm;
use crate::error::{Error, Result};

/// Faithful permutation representation of an ambient group, used to run
/// BSGS on groups whose elements are not permutations themselves.
#[derive(Clone, Debug)]
pub struct PermRep {
    degree: usize,
    kind: Kind,
}

#[derive(Clone, Debug)]
enum Kind {
    Native,
    /// Right-regular action of a directly indexable group.
    Regular,
    /// Row vectors of F_p^n, indexed base p.
    Vectors {
        n: usize,
        p: u32,
    },
    /// Imprimitive action on (top index) × (base point).
    Wreath {
        base: Box<PermRep>,
        base_group: Group,
        top: Group,
    },
    Product(Vec<(PermRep, usize)>),
}

impl PermRep {
    /// `None` when the group has no supported finite representation within
    /// `max_degree` points.
    pub fn for_group(g: &Group, max_degree: usize) -> Option<PermRep> {
        let rep = match g {
            Group::Perm { degree } => PermRep {
                degree: *degree,
                kind: Kind::Native,
            },
            Group::Cyclic { order: Some(_) } | Group::Dihedral { n: Some(_) } => PermRep {
                degree: g.indexable_size()?,
                kind: Kind::Regular,
            },
            Group::Matrix { n, p } => {
                let d = (*p as usize).checked_pow(*n as u32)?;
                PermRep {
                    degree: d,
                    kind: Kind::Vectors { n: *n, p: *p },
                }
            }
            Group::Wreath { base, top } => {
                let b = PermRep::for_group(base, max_degree)?;
                let t = top.indexable_size()?;
                PermRep {
                    degree: b.degree.checked_mul(t)?,
                    kind: Kind::Wreath {
                        base: Box::new(b),
                        base_group: (**base).clone(),
                        top: (**top).clone(),
                    },
                }
            }
            Group::Product(gs) => {
                let mut parts = Vec::new();
                let mut off = 0usize;
                for c in gs {
                    let r = PermRep::for_group(c, max_degree)?;
                    let d = r.degree;
                    parts.push((r, off));
                    off = off.checked_add(d)?;
                }
                PermRep {
                    degree: off,
                    kind: Kind::Product(parts),
                }
            }
            _ => return None,
        };
        (rep.degree <= max_degree).then_some(rep)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn image(&self, g: &Group, e: &Element) -> Result<Perm> {
        let mut out = vec![0u32; self.degree];
        self.write_image(g, e, &mut out, 0)?;
        Perm::from_images(out)
            .ok_or_else(|| Error::Internal("representation is not a bijection".into()))
    }

    fn write_image(&self, g: &Group, e: &Element, out: &mut [u32], off: u32) -> Result<()> {
        match (&self.kind, g, e) {
            (Kind::Native, _, Element::Perm(p)) => {
                for (i, &x) in p.images().iter().enumerate() {
                    out[i] = x + off;
                }
            }
            (Kind::Regular, _, _) => {
                for i in 0..self.degree {
                    let x = g
                        .element_at(i)
                        .ok_or_else(|| Error::Internal("index".into()))?;
                    let y = g.mul(&x, e)?;
                    out[i] = g
                        .index_of(&y)
                        .ok_or_else(|| Error::Internal("index".into()))?
                        as u32
                        + off;
                }
            }
            (Kind::Vectors { n, p }, _, Element::Matrix(m)) => {
                let mut v = vec![0u32; *n];
                for i in 0..self.degree {
                    let mut r = i;
                    for c in v.iter_mut() {
                        *c = (r % *p as usize) as u32;
                        r /= *p as usize;
                    }
                    let w = m.act_on_vector(&v, *p);
                    let mut idx = 0usize;
                    for c in w.iter().rev() {
                        idx = idx * *p as usize + *c as usize;
                    }
                    out[i] = idx as u32 + off;
                }
            }
            (
                Kind::Wreath {
                    base,
                    base_group,
                    top,
                },
                _,
                Element::Wreath { support, top: h },
            ) => {
                let d = base.degree;
                let t = top.indexable_size().unwrap_or(0);
                let mut buf = vec![0u32; d];
                for xi in 0..t {
                    let x = top
                        .element_at(xi)
                        .ok_or_else(|| Error::Internal("top index".into()))?;
                    let y = top.mul(&x, h)?;
                    let yi = top
                        .index_of(&y)
                        .ok_or_else(|| Error::Internal("top index".into()))?;
                    match support.get(&x) {
                        Some(v) => {
                            base.write_image(base_group, v, &mut buf, 0)?;
                            for i in 0..d {
                                out[xi * d + i] = (yi * d) as u32 + buf[i] + off;
                            }
                        }
                        None => {
                            for i in 0..d {
                                out[xi * d + i] = (yi * d + i) as u32 + off;
                            }
                        }
                    }
                }
            }
            (Kind::Product(parts), Group::Product(gs), Element::Tuple(v)) => {
                for ((r, o), (cg, x)) in parts.iter().zip(gs.iter().zip(v)) {
                    r.write_image(cg, x, &mut out[*o..*o + r.degree], off + *o as u32)?;
                }
            }
            _ => {
                return Err(Error::BackendMismatch(format!(
                    "{} element for a permutation representation of {g}",
                    e.backend_tag()
                )))
            }
        }
        Ok(())
    }
}
