//! Amalgamated free products A *_C B of finite groups.
//!
//! Normal form: `c · r_1 ⋯ r_n` with `c` in C and `r_i` non-trivial right
//! coset representatives of C in A or B, alternating between the factors.
//! The representative of a coset is its least element; the trivial coset is
//! represented by the identity.

use crate::error::{Error, Result};
use crate::groups::{Caps, Element, Group, MarkedGroup};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone)]
pub struct Amalgam {
    factors: [Group; 2],
    c: Group,
    embed: [HashMap<Element, Element>; 2],
    /// x -> (c, r) with x = embed(c) · r
    decomp: [HashMap<Element, (Element, Element)>; 2],
    label: String,
    indices: [usize; 2],
}

impl fmt::Display for Amalgam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

/// Extends a generator assignment along the Cayley graph of C, rejecting it
/// if it is not a well-defined injective homomorphism.
fn extend_hom(
    c: &MarkedGroup,
    target: &Group,
    images: &[Element],
    caps: &Caps,
) -> Result<HashMap<Element, Element>> {
    if images.len() != c.k() {
        return Err(Error::InvalidInput(format!(
            "embedding gives {} images for {} generators",
            images.len(),
            c.k()
        )));
    }
    let mut map: HashMap<Element, Element> = HashMap::new();
    let mut order = vec![c.group.identity()];
    map.insert(c.group.identity(), target.identity());
    let mut head = 0;
    while head < order.len() {
        let x = order[head].clone();
        head += 1;
        let fx = map[&x].clone();
        for (s, fs) in c.marking.iter().zip(images) {
            let y = c.group.mul(&x, s)?;
            let fy = target.mul(&fx, fs)?;
            match map.get(&y) {
                Some(prev) if *prev != fy => {
                    return Err(Error::InvalidInput(format!(
                        "embedding is not a homomorphism: {y} maps to both {prev} and {fy}"
                    )))
                }
                Some(_) => {}
                None => {
                    if order.len() >= caps.closure {
                        return Err(Error::ResourceExhausted {
                            what: "amalgamated subgroup".into(),
                            limit: caps.closure,
                        });
                    }
                    map.insert(y.clone(), fy);
                    order.push(y);
                }
            }
        }
    }
    let mut inv: HashMap<&Element, &Element> = HashMap::new();
    for (k, v) in &map {
        if let Some(other) = inv.insert(v, k) {
            return Err(Error::InvalidInput(format!(
                "embedding is not injective: {k} and {other} both map to {v}"
            )));
        }
    }
    Ok(map)
}

impl Amalgam {
    pub fn new(
        a: &MarkedGroup,
        b: &MarkedGroup,
        c: &MarkedGroup,
        embed_a: &[Element],
        embed_b: &[Element],
        caps: &Caps,
    ) -> Result<Arc<Amalgam>> {
        let embed = [
            extend_hom(c, &a.group, embed_a, caps)?,
            extend_hom(c, &b.group, embed_b, caps)?,
        ];
        let mut decomp: [HashMap<Element, (Element, Element)>; 2] =
            [HashMap::new(), HashMap::new()];
        let mut indices = [0usize; 2];
        for (s, f) in [a, b].into_iter().enumerate() {
            let mut elems = f.elements(caps)?;
            elems.sort();
            let inv_embed: HashMap<&Element, &Element> =
                embed[s].iter().map(|(k, v)| (v, k)).collect();
            let sub: Vec<&Element> = embed[s].values().collect();
            for x in &elems {
                if decomp[s].contains_key(x) {
                    continue;
                }
                let coset: Vec<Element> = sub
                    .iter()
                    .map(|h| f.group.mul(h, x))
                    .collect::<Result<_>>()?;
                let rep = coset.iter().min().expect("non-empty coset").clone();
                if coset.contains(&f.group.identity()) && rep != f.group.identity() {
                    return Err(Error::Internal(
                        "identity is not the least element of the trivial coset".into(),
                    ));
                }
                let rinv = f.group.inv(&rep)?;
                for y in coset {
                    let h = f.group.mul(&y, &rinv)?;
                    let cval = (*inv_embed
                        .get(&h)
                        .ok_or_else(|| Error::Internal("coset decomposition".into()))?)
                    .clone();
                    decomp[s].insert(y, (cval, rep.clone()));
                }
                indices[s] += 1;
            }
        }
        Ok(Arc::new(Amalgam {
            factors: [a.group.clone(), b.group.clone()],
            c: c.group.clone(),
            embed,
            decomp,
            label: format!("{} *_{} {}", a.name, c.name, b.name),
            indices,
        }))
    }

    pub fn identity(&self) -> Element {
        Element::Amalgam {
            head: Box::new(self.c.identity()),
            word: Vec::new(),
        }
    }

    /// Index of the amalgamated subgroup in each factor.
    pub fn indices(&self) -> [usize; 2] {
        self.indices
    }

    pub fn is_trivial_amalgam(&self) -> bool {
        self.indices.contains(&1)
    }

    pub fn factor(&self, side: usize) -> &Group {
        &self.factors[side]
    }

    pub fn amalgamated(&self) -> &Group {
        &self.c
    }

    /// Normal form of an element of factor `side` (0 = A, 1 = B).
    pub fn factor_element(&self, side: usize, x: &Element) -> Result<Element> {
        let mut head = self.c.identity();
        let mut word = Vec::new();
        self.push_factor(&mut head, &mut word, side as u8, x)?;
        Ok(Element::Amalgam {
            head: Box::new(head),
            word,
        })
    }

    pub fn contains(&self, e: &Element) -> bool {
        let Element::Amalgam { head, word } = e else {
            return false;
        };
        if !self.c.contains(head) {
            return false;
        }
        let mut prev: Option<u8> = None;
        for (s, r) in word {
            if *s > 1 || prev == Some(*s) {
                return false;
            }
            match self.decomp[*s as usize].get(r) {
                Some((_, rep)) if rep == r && *r != self.factors[*s as usize].identity() => {}
                _ => return false,
            }
            prev = Some(*s);
        }
        true
    }

    fn decompose(&self, side: u8, x: &Element) -> Result<&(Element, Element)> {
        self.decomp[side as usize]
            .get(x)
            .ok_or_else(|| Error::BackendMismatch(format!("{x} is not in factor {}", side)))
    }

    /// Moves `c` leftwards through `word[..upto]`, rewriting representatives,
    /// and returns what reaches the head.
    fn absorb_left(&self, word: &mut [(u8, Element)], mut c: Element) -> Result<Element> {
        for (s, r) in word.iter_mut().rev() {
            if self.c.is_identity(&c) {
                break;
            }
            let f = &self.factors[*s as usize];
            let y = f.mul(r, &self.embed[*s as usize][&c])?;
            let (c2, r2) = self.decompose(*s, &y)?.clone();
            *r = r2;
            c = c2;
        }
        Ok(c)
    }

    fn push_factor(
        &self,
        head: &mut Element,
        word: &mut Vec<(u8, Element)>,
        side: u8,
        x: &Element,
    ) -> Result<()> {
        let f = &self.factors[side as usize];
        let (cpart, rpart) = if word.last().map(|(s, _)| *s) == Some(side) {
            let (_, last) = word.pop().expect("non-empty word");
            self.decompose(side, &f.mul(&last, x)?)?.clone()
        } else {
            self.decompose(side, x)?.clone()
        };
        let c = self.absorb_left(word, cpart)?;
        *head = self.c.mul(head, &c)?;
        if rpart != f.identity() {
            word.push((side, rpart));
        }
        Ok(())
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        let (Element::Amalgam { head: ha, word: wa }, Element::Amalgam { head: hb, word: wb }) =
            (a, b)
        else {
            return Err(Error::BackendMismatch("amalgam operands".into()));
        };
        let mut head = (**ha).clone();
        let mut word = wa.clone();
        let hb_in_a = self.embed[0]
            .get(hb)
            .ok_or_else(|| Error::BackendMismatch("amalgam head".into()))?;
        self.push_factor(&mut head, &mut word, 0, hb_in_a)?;
        for (s, r) in wb {
            self.push_factor(&mut head, &mut word, *s, r)?;
        }
        Ok(Element::Amalgam {
            head: Box::new(head),
            word,
        })
    }

    /// Exact element order: conjugate until the normal form is cyclically
    /// reduced; a reduced word of length at least two has infinite order,
    /// anything else lies in a finite factor.
    pub fn element_order(&self, a: &Element) -> Result<crate::groups::BigOrder> {
        let len = |e: &Element| match e {
            Element::Amalgam { word, .. } => word.len(),
            _ => 0,
        };
        let mut x = a.clone();
        loop {
            let Element::Amalgam { word, .. } = &x else {
                return Err(Error::BackendMismatch("amalgam operand".into()));
            };
            if word.len() >= 2 && word[0].0 != word[word.len() - 1].0 {
                return Ok(crate::groups::BigOrder::Infinite);
            }
            if word.len() <= 1 {
                break;
            }
            let (s, r) = &word[word.len() - 1];
            let l = self.factor_element(*s as usize, r)?;
            let li = self.inv(&l)?;
            let y = self.mul(&self.mul(&l, &x)?, &li)?;
            let z = self.mul(&self.mul(&li, &x)?, &l)?;
            let next = if len(&y) <= len(&z) { y } else { z };
            if len(&next) >= word.len() {
                return Err(Error::Internal(
                    "cyclic reduction did not shorten the word".into(),
                ));
            }
            x = next;
        }
        // x lies in one factor, conjugate to a
        let id = self.identity();
        let mut p = x.clone();
        let bound = self
            .factors
            .iter()
            .filter_map(Group::indexable_size)
            .max()
            .unwrap_or(1 << 20) as u64;
        for k in 1..=bound {
            if p == id {
                return Ok(crate::groups::BigOrder::finite(k));
            }
            p = self.mul(&p, &x)?;
        }
        Ok(crate::groups::BigOrder::Unknown)
    }

    pub fn inv(&self, a: &Element) -> Result<Element> {
        let Element::Amalgam { head: ha, word: wa } = a else {
            return Err(Error::BackendMismatch("amalgam operand".into()));
        };
        let mut head = self.c.identity();
        let mut word = Vec::new();
        for (s, r) in wa.iter().rev() {
            let ri = self.factors[*s as usize].inv(r)?;
            self.push_factor(&mut head, &mut word, *s, &ri)?;
        }
        let hinv = self.c.inv(ha)?;
        self.push_factor(&mut head, &mut word, 0, &self.embed[0][&hinv])?;
        Ok(Element::Amalgam {
            head: Box::new(head),
            word,
        })
    }
}

/// Marked amalgam whose marking lists the given factor elements in order.
pub fn amalgam(
    a: &MarkedGroup,
    b: &MarkedGroup,
    c: &MarkedGroup,
    embed_a: &[Element],
    embed_b: &[Element],
    marking: &[(usize, Element)],
    caps: &Caps,
) -> Result<MarkedGroup> {
    let am = Amalgam::new(a, b, c, embed_a, embed_b, caps)?;
    let gens = marking
        .iter()
        .map(|(s, x)| am.factor_element(*s, x))
        .collect::<Result<Vec<_>>>()?;
    let name = am.label.clone();
    MarkedGroup::new(Group::Amalgam(am), gens, name)
}
