//! Encodings of a marked group G into Sym(G), Alt(G) and SL(G, F_p), in
//! the finite case and as finitary semidirect products for infinite G.

use crate::error::{Error, Result};
use crate::groups::matrix::{is_prime, mod_inv};
use crate::groups::{Caps, Element, Family, Group, MarkedGroup, Matrix, Perm};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Elements of a finite marked group in sorted order with their indices.
pub struct Indexed {
    pub elements: Vec<Element>,
    pub index: HashMap<Element, usize>,
}

impl Indexed {
    pub fn new(mg: &MarkedGroup, caps: &Caps) -> Result<Self> {
        let mut elements = mg.elements(caps)?;
        elements.sort();
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        Ok(Indexed { elements, index })
    }

    /// Right multiplication by `g` as a permutation of indices.
    pub fn right_mult(&self, group: &Group, g: &Element) -> Result<Perm> {
        let img = self
            .elements
            .iter()
            .map(|x| {
                let y = group.mul(x, g)?;
                self.index
                    .get(&y)
                    .map(|&i| i as u32)
                    .ok_or_else(|| Error::Internal("closure not closed".into()))
            })
            .collect::<Result<Vec<u32>>>()?;
        Perm::from_images(img)
            .ok_or_else(|| Error::Internal("right multiplication is not a bijection".into()))
    }
}

fn check_nontrivial(mg: &MarkedGroup) -> Result<()> {
    for (i, s) in mg.marking.iter().enumerate() {
        if mg.group.is_identity(s) {
            return Err(Error::IdentityGenerator { index: i + 1 });
        }
    }
    Ok(())
}

fn finitary_swap(base: &Group, g: &Element) -> Element {
    let id = base.identity();
    let mut m = BTreeMap::new();
    m.insert(id.clone(), g.clone());
    m.insert(g.clone(), id.clone());
    Element::Finitary {
        perm: m,
        shift: Box::new(id),
    }
}

fn finitary_shift(g: &Element) -> Element {
    Element::Finitary {
        perm: BTreeMap::new(),
        shift: Box::new(g.clone()),
    }
}

/// χ's and θ's in a common ambient group, plus that group.
fn chi_theta(
    mg: &MarkedGroup,
    caps: &Caps,
) -> Result<(Group, Vec<Element>, Vec<Element>, Option<usize>)> {
    check_nontrivial(mg)?;
    if mg.group.is_finite() {
        let idx = Indexed::new(mg, caps)?;
        let n = idx.elements.len();
        let e = idx.index[&mg.group.identity()] as u32;
        let chis = mg
            .marking
            .iter()
            .map(|s| Element::Perm(Perm::transposition(n, e, idx.index[s] as u32)))
            .collect();
        let thetas = mg
            .marking
            .iter()
            .map(|s| idx.right_mult(&mg.group, s).map(Element::Perm))
            .collect::<Result<_>>()?;
        Ok((Group::Perm { degree: n }, chis, thetas, Some(n)))
    } else {
        let chis = mg
            .marking
            .iter()
            .map(|s| finitary_swap(&mg.group, s))
            .collect();
        let thetas = mg.marking.iter().map(finitary_shift).collect();
        Ok((
            Group::SymLimit {
                base: Box::new(mg.group.clone()),
            },
            chis,
            thetas,
            None,
        ))
    }
}

/// (χ_{s_1}, …, χ_{s_k}, θ_{s_1}, …, θ_{s_k}) in Sym(G), or in Sym_fin(G) ⋊ G for infinite G.
pub fn sym_encode(mg: &MarkedGroup, caps: &Caps) -> Result<MarkedGroup> {
    let (group, chis, thetas, n) = chi_theta(mg, caps)?;
    let marking = chis.into_iter().chain(thetas).collect();
    let out = MarkedGroup::new(group, marking, format!("Sym({})", mg.name))?;
    Ok(match n {
        Some(n) => out.with_family(Family::Symmetric { n }),
        None => out,
    })
}

/// The (3k-1)-marking (χ_1χ_j for j ≥ 2, θ_j, χ_1θ_jχ_1) of Alt(G), or of
/// Alt_fin(G) ⋊ G for infinite G.
pub fn alt_encode(mg: &MarkedGroup, caps: &Caps) -> Result<MarkedGroup> {
    let (group, chis, thetas, n) = chi_theta(mg, caps)?;
    if n.is_some() {
        for (i, t) in thetas.iter().enumerate() {
            if t.as_perm().map(Perm::sign) != Some(1) {
                return Err(Error::NegativeSign { index: i + 1 });
            }
        }
    }
    let mut marking = Vec::with_capacity(3 * mg.k() - 1);
    for chi in &chis[1..] {
        marking.push(group.mul(&chis[0], chi)?);
    }
    marking.extend(thetas.iter().cloned());
    for t in &thetas {
        marking.push(group.mul(&group.mul(&chis[0], t)?, &chis[0])?);
    }
    let out = MarkedGroup::new(group, marking, format!("Alt({})", mg.name))?;
    Ok(match n {
        Some(n) => out.with_family(Family::Alternating { n }),
        None => out,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEntry {
    pub target: Matrix,
    pub word: Vec<i64>,
}

impl Serialize for CertificateEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rows: Vec<&[u32]> = self.target.data.chunks(self.target.n.max(1)).collect();
        let mut st = s.serialize_struct("CertificateEntry", 2)?;
        st.serialize_field("target", &rows)?;
        st.serialize_field("word", &self.word)?;
        st.end()
    }
}

/// (σ_{s_1}, …, σ_{s_k}, τ_{s_1}, …, τ_{s_k}) with σ_γ = I + E_{e,γ} and τ_γ
/// the permutation matrix of right multiplication by γ. For finite G the
/// second component lists words for every elementary matrix I + E_{x,y}.
pub fn sl_encode(
    mg: &MarkedGroup,
    p: u32,
    caps: &Caps,
) -> Result<(MarkedGroup, Option<Vec<CertificateEntry>>)> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    check_nontrivial(mg)?;
    if mg.group.is_finite() {
        let idx = Indexed::new(mg, caps)?;
        let n = idx.elements.len();
        let e = idx.index[&mg.group.identity()];
        let mut sigmas = Vec::new();
        let mut taus = Vec::new();
        for (i, s) in mg.marking.iter().enumerate() {
            sigmas.push(Element::Matrix(Matrix::elementary(
                n,
                e,
                idx.index[s],
                1,
                p,
            )));
            let perm = idx.right_mult(&mg.group, s)?;
            if perm.sign() != 1 {
                return Err(Error::NegativeSign { index: i + 1 });
            }
            taus.push(Element::Matrix(Matrix::permutation(perm.images())));
        }
        let out = MarkedGroup::new(
            Group::Matrix { n, p },
            sigmas.into_iter().chain(taus).collect(),
            format!("SL({},{p})", mg.name),
        )?
        .with_family(Family::SpecialLinear { n, p: p as u64 });
        let cert = elementary_certificate(&out)?;
        Ok((out, Some(cert)))
    } else {
        let id = mg.group.identity();
        let mut marking = Vec::new();
        for s in &mg.marking {
            let mut entries = BTreeMap::new();
            entries.insert((id.clone(), s.clone()), 1u32);
            marking.push(Element::FinitaryMatrix {
                entries,
                shift: Box::new(id.clone()),
            });
        }
        for s in &mg.marking {
            marking.push(Element::FinitaryMatrix {
                entries: BTreeMap::new(),
                shift: Box::new(s.clone()),
            });
        }
        let group = Group::SlLimit {
            base: Box::new(mg.group.clone()),
            p,
        };
        Ok((
            MarkedGroup::new(group, marking, format!("SL({},{p})", mg.name))?,
            None,
        ))
    }
}

/// `(i, j, c)` when `m = I + c E_{ij}` with i ≠ j and c ≠ 0.
fn classify(m: &Matrix) -> Option<(usize, usize, u32)> {
    let n = m.n;
    let mut found = None;
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j);
            let expect = u32::from(i == j);
            if v != expect {
                if i == j || found.is_some() {
                    return None;
                }
                found = Some((i, j, v));
            }
        }
    }
    found
}

fn invert_word(w: &[i64]) -> Vec<i64> {
    w.iter().rev().map(|x| -x).collect()
}

/// Words in the marking for every elementary matrix I + E_{ij}. Transvections
/// generate SL(n, F_p), so a complete certificate proves generation.
///
/// Known transvections are closed under conjugation by the generators and
/// under [I + E_ab, I + E_bc] = I + E_ac; the resulting words are verified
/// by evaluation before they are returned.
pub fn elementary_certificate(mg: &MarkedGroup) -> Result<Vec<CertificateEntry>> {
    let Group::Matrix { n, p } = mg.group else {
        return Err(Error::BackendMismatch(
            "certificates need a matrix group".into(),
        ));
    };
    let mut known: BTreeMap<(usize, usize), (Vec<i64>, Matrix)> = BTreeMap::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    let gens: Vec<(i64, Matrix, Matrix)> = mg
        .marking
        .iter()
        .enumerate()
        .flat_map(|(t, s)| {
            let m = s.as_matrix().expect("matrix marking").clone();
            let mi = m.inv(p).expect("invertible");
            [
                (t as i64 + 1, m.clone(), mi.clone()),
                (-(t as i64 + 1), mi, m),
            ]
        })
        .collect();
    // generators and their conjugates by short powers of generators
    let mut pool: Vec<(Vec<i64>, Matrix, Matrix)> = gens
        .iter()
        .map(|(t, m, mi)| (vec![*t], m.clone(), mi.clone()))
        .collect();
    for (t, _, _) in gens.iter().filter(|g| g.0 > 0) {
        let h = &gens.iter().find(|g| g.0 == *t).expect("generator").1;
        let hi = h.inv(p).expect("invertible");
        for (g, m, mi) in &gens {
            let (mut c, mut ci) = (m.clone(), mi.clone());
            for k in 1..=3usize {
                c = hi.mul(&c, p).mul(h, p);
                ci = hi.mul(&ci, p).mul(h, p);
                if c == *m {
                    break;
                }
                let mut w = vec![-t; k];
                w.push(*g);
                w.extend(std::iter::repeat(*t).take(k));
                pool.push((w, c.clone(), ci.clone()));
            }
        }
    }
    let add = |word: Vec<i64>,
               m: &Matrix,
               known: &mut BTreeMap<(usize, usize), (Vec<i64>, Matrix)>,
               order: &mut Vec<(usize, usize)>| {
        if let Some((i, j, c)) = classify(m) {
            if known.contains_key(&(i, j)) {
                return;
            }
            let reps = mod_inv(c, p) as usize;
            let w: Vec<i64> = std::iter::repeat(word).take(reps).flatten().collect();
            known.insert((i, j), (w, Matrix::elementary(n, i, j, 1, p)));
            order.push((i, j));
        }
    };
    for (t, s) in mg.marking.iter().enumerate() {
        add(
            vec![t as i64 + 1],
            s.as_matrix().expect("matrix marking"),
            &mut known,
            &mut order,
        );
    }
    let target = n * (n - 1);
    let mut head = 0;
    loop {
        while head < order.len() && known.len() < target {
            let key = order[head];
            head += 1;
            let (w, m) = known[&key].clone();
            for (t, g, gi) in &gens {
                let c = gi.mul(&m, p).mul(g, p);
                let mut cw = vec![-t];
                cw.extend(&w);
                cw.push(*t);
                add(cw, &c, &mut known, &mut order);
            }
        }
        if known.len() >= target {
            break;
        }
        let mut best: Option<((usize, usize), Vec<i64>)> = None;
        for (&(a, b), (wa, _)) in &known {
            for (&(b2, c), (wb, _)) in &known {
                if b2 != b || a == c || known.contains_key(&(a, c)) {
                    continue;
                }
                let len = 2 * (wa.len() + wb.len());
                if best.as_ref().map_or(true, |(_, w)| len < w.len()) {
                    let mut w = invert_word(wa);
                    w.extend(invert_word(wb));
                    w.extend(wa);
                    w.extend(wb);
                    best = Some(((a, c), w));
                }
            }
        }
        if best.is_none() {
            // [I + E_ab, I + N] = I + E_ab N when N E_ab = 0 and N² = 0, so
            // block-unipotent pool elements move known transvections around.
            for (wa, ma) in known.values() {
                let mai = ma.inv(p).expect("invertible");
                for (wb, mb, mbi) in &pool {
                    let len = 2 * (wa.len() + wb.len());
                    if best.as_ref().map_or(false, |(_, w)| len >= w.len()) {
                        continue;
                    }
                    for (first, c) in [
                        (true, mai.mul(mbi, p).mul(ma, p).mul(mb, p)),
                        (false, mbi.mul(&mai, p).mul(mb, p).mul(ma, p)),
                    ] {
                        match classify(&c) {
                            Some((i, j, _)) if !known.contains_key(&(i, j)) => {
                                let (x, y) = if first { (wa, wb) } else { (wb, wa) };
                                let mut w = invert_word(x);
                                w.extend(invert_word(y));
                                w.extend(x);
                                w.extend(y);
                                best = Some(((i, j), w));
                                break;
                            }
                            _ => {}
                        }
                    }
                }
            }
            if let Some((_, w)) = best.take() {
                let m = mg.eval_word(&w)?;
                add(w, m.as_matrix().expect("matrix"), &mut known, &mut order);
                continue;
            }
        }
        let Some(((a, c), w)) = best else {
            return Err(Error::Stage {
                stage: 0,
                reason: format!(
                    "only {} of {target} elementary matrices reachable",
                    known.len()
                ),
            });
        };
        add(
            w,
            &Matrix::elementary(n, a, c, 1, p),
            &mut known,
            &mut order,
        );
    }
    let mut out = Vec::new();
    for ((i, j), (w, m)) in known {
        let got = mg.eval_word(&w)?;
        if got.as_matrix() != Some(&m) {
            return Err(Error::Internal(format!(
                "certificate word for E[{i},{j}] does not evaluate correctly"
            )));
        }
        out.push(CertificateEntry { target: m, word: w });
    }
    Ok(out)
}

/// Re-evaluates every certificate word.
pub fn verify_certificate(mg: &MarkedGroup, cert: &[CertificateEntry]) -> Result<bool> {
    for entry in cert {
        if mg.eval_word(&entry.word)?.as_matrix() != Some(&entry.target) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::std_groups::{cyclic, cyclic_product};
    use crate::groups::BigOrder;

    #[test]
    fn sym_encode_small() {
        let caps = Caps::default();
        let s = sym_encode(&cyclic(Some(3)).unwrap(), &caps).unwrap();
        assert_eq!(s.order(&caps).unwrap(), BigOrder::finite(6u32));
        let s2 = sym_encode(&cyclic(Some(2)).unwrap(), &caps).unwrap();
        assert_eq!(s2.marking[0], s2.marking[1]);
    }

    #[test]
    fn alt_encode_klein_and_rejects_z4() {
        let caps = Caps::default();
        let a = alt_encode(&cyclic_product(&[2, 2]).unwrap(), &caps).unwrap();
        assert_eq!(a.k(), 5);
        assert_eq!(a.order(&caps).unwrap(), BigOrder::finite(12u32));
        assert_eq!(
            alt_encode(&cyclic(Some(4)).unwrap(), &caps).unwrap_err(),
            Error::NegativeSign { index: 1 }
        );
    }

    #[test]
    fn sl_encode_z3() {
        let caps = Caps::default();
        let (m, cert) = sl_encode(&cyclic(Some(3)).unwrap(), 2, &caps).unwrap();
        let cert = cert.unwrap();
        assert_eq!(cert.len(), 6);
        assert!(verify_certificate(&m, &cert).unwrap());
        for s in &m.marking {
            assert_eq!(s.as_matrix().unwrap().det(2), 1);
        }
    }
}
