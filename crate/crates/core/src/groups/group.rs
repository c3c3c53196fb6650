use super::element::Element;
use super::matrix::{is_prime, Matrix};
use super::order::{factorial, sl_order, BigOrder};
use super::perm::Perm;
use crate::constructions::amalgam::Amalgam;
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Ambient computable group. Marked groups pair one of these with a
/// generating tuple; the generated subgroup may be much smaller.
#[derive(Clone)]
pub enum Group {
    /// Sym(degree).
    Perm {
        degree: usize,
    },
    /// GL(n, F_p); special-linear markings stay inside SL.
    Matrix {
        n: usize,
        p: u32,
    },
    /// Z/order, or Z when `order` is `None`.
    Cyclic {
        order: Option<u64>,
    },
    FreeAbelian {
        rank: usize,
    },
    /// Dihedral group of order 2n, or D_inf when `n` is `None`.
    Dihedral {
        n: Option<u64>,
    },
    Product(Vec<Group>),
    /// Restricted wreath product base ≀ top.
    Wreath {
        base: Box<Group>,
        top: Box<Group>,
    },
    /// Sym_fin(base) ⋊ base.
    SymLimit {
        base: Box<Group>,
    },
    /// SL_fin(base, F_p) ⋊ base.
    SlLimit {
        base: Box<Group>,
        p: u32,
    },
    Amalgam(Arc<Amalgam>),
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Perm { degree } => write!(f, "Sym({degree})"),
            Group::Matrix { n, p } => write!(f, "GL({n},{p})"),
            Group::Cyclic { order: Some(n) } => write!(f, "Z/{n}"),
            Group::Cyclic { order: None } => write!(f, "Z"),
            Group::FreeAbelian { rank } => write!(f, "Z^{rank}"),
            Group::Dihedral { n: Some(n) } => write!(f, "D[{n}]"),
            Group::Dihedral { n: None } => write!(f, "D_inf"),
            Group::Product(gs) => {
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{g}")?;
                }
                Ok(())
            }
            Group::Wreath { base, top } => write!(f, "({base}) wr ({top})"),
            Group::SymLimit { base } => write!(f, "Sym_fin({base}) x| {base}"),
            Group::SlLimit { base, p } => write!(f, "SL_fin({base},{p}) x| {base}"),
            Group::Amalgam(a) => write!(f, "{a}"),
        }
    }
}

fn mismatch(g: &Group, a: &Element) -> Error {
    Error::BackendMismatch(format!("{} element in {g}", a.backend_tag()))
}

impl Group {
    pub fn integers() -> Self {
        Group::Cyclic { order: None }
    }

    pub fn cyclic(n: u64) -> Self {
        Group::Cyclic { order: Some(n) }
    }

    pub fn identity(&self) -> Element {
        match self {
            Group::Perm { degree } => Element::Perm(Perm::identity(*degree)),
            Group::Matrix { n, .. } => Element::Matrix(Matrix::identity(*n)),
            Group::Cyclic { .. } => Element::Int(0),
            Group::FreeAbelian { rank } => Element::Vector(vec![0; *rank]),
            Group::Dihedral { .. } => Element::Dihedral {
                flip: false,
                shift: 0,
            },
            Group::Product(gs) => Element::Tuple(gs.iter().map(Group::identity).collect()),
            Group::Wreath { top, .. } => Element::Wreath {
                support: BTreeMap::new(),
                top: Box::new(top.identity()),
            },
            Group::SymLimit { base } => Element::Finitary {
                perm: BTreeMap::new(),
                shift: Box::new(base.identity()),
            },
            Group::SlLimit { base, .. } => Element::FinitaryMatrix {
                entries: BTreeMap::new(),
                shift: Box::new(base.identity()),
            },
            Group::Amalgam(a) => a.identity(),
        }
    }

    pub fn is_identity(&self, a: &Element) -> bool {
        *a == self.identity()
    }

    /// Shape check: does the payload belong to this ambient group?
    pub fn contains(&self, a: &Element) -> bool {
        match (self, a) {
            (Group::Perm { degree }, Element::Perm(p)) => p.degree() == *degree,
            (Group::Matrix { n, p }, Element::Matrix(m)) => {
                m.n == *n && m.data.iter().all(|&x| x < *p) && m.det(*p) != 0
            }
            (Group::Cyclic { order: Some(n) }, Element::Int(v)) => *v >= 0 && (*v as u64) < *n,
            (Group::Cyclic { order: None }, Element::Int(_)) => true,
            (Group::FreeAbelian { rank }, Element::Vector(v)) => v.len() == *rank,
            (Group::Dihedral { n }, Element::Dihedral { shift, .. }) => match n {
                Some(n) => *shift >= 0 && (*shift as u64) < *n,
                None => true,
            },
            (Group::Product(gs), Element::Tuple(v)) => {
                gs.len() == v.len() && gs.iter().zip(v).all(|(g, x)| g.contains(x))
            }
            (Group::Wreath { base, top }, Element::Wreath { support, top: t }) => {
                top.contains(t)
                    && support
                        .iter()
                        .all(|(k, v)| top.contains(k) && base.contains(v) && !base.is_identity(v))
            }
            (Group::SymLimit { base }, Element::Finitary { perm, shift }) => {
                base.contains(shift)
                    && perm
                        .iter()
                        .all(|(k, v)| k != v && base.contains(k) && base.contains(v))
                    && {
                        let dom: BTreeSet<_> = perm.keys().collect();
                        let img: BTreeSet<_> = perm.values().collect();
                        dom == img
                    }
            }
            (Group::SlLimit { base, p }, Element::FinitaryMatrix { entries, shift }) => {
                base.contains(shift)
                    && entries.iter().all(|((a, b), v)| {
                        *v != 0 && *v < *p && base.contains(a) && base.contains(b)
                    })
            }
            (Group::Amalgam(am), Element::Amalgam { .. }) => am.contains(a),
            _ => false,
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        match (self, a, b) {
            (Group::Perm { degree }, Element::Perm(x), Element::Perm(y)) => {
                if x.degree() != *degree || y.degree() != *degree {
                    return Err(Error::BackendMismatch(format!(
                        "degrees {} and {} in Sym({degree})",
                        x.degree(),
                        y.degree()
                    )));
                }
                Ok(Element::Perm(x.mul(y)))
            }
            (Group::Matrix { n, p }, Element::Matrix(x), Element::Matrix(y)) => {
                if x.n != *n || y.n != *n {
                    return Err(Error::BackendMismatch("matrix size".into()));
                }
                Ok(Element::Matrix(x.mul(y, *p)))
            }
            (Group::Cyclic { order }, Element::Int(x), Element::Int(y)) => {
                Ok(Element::Int(match order {
                    Some(n) => ((*x as i128 + *y as i128).rem_euclid(*n as i128)) as i64,
                    None => x
                        .checked_add(*y)
                        .ok_or_else(|| Error::Internal("integer overflow".into()))?,
                }))
            }
            (Group::FreeAbelian { rank }, Element::Vector(x), Element::Vector(y)) => {
                if x.len() != *rank || y.len() != *rank {
                    return Err(Error::BackendMismatch("vector rank".into()));
                }
                Ok(Element::Vector(
                    x.iter().zip(y).map(|(a, b)| a + b).collect(),
                ))
            }
            (
                Group::Dihedral { n },
                Element::Dihedral {
                    flip: fa,
                    shift: sa,
                },
                Element::Dihedral {
                    flip: fb,
                    shift: sb,
                },
            ) => {
                // apply a, then b: x -> e_b(e_a x + s_a) + s_b
                let s = if *fb { -sa } else { *sa } + sb;
                Ok(Element::Dihedral {
                    flip: fa ^ fb,
                    shift: reduce_shift(s, *n),
                })
            }
            (Group::Product(gs), Element::Tuple(x), Element::Tuple(y)) => {
                if gs.len() != x.len() || gs.len() != y.len() {
                    return Err(Error::BackendMismatch("tuple length".into()));
                }
                let v = gs
                    .iter()
                    .zip(x.iter().zip(y))
                    .map(|(g, (a, b))| g.mul(a, b))
                    .collect::<Result<_>>()?;
                Ok(Element::Tuple(v))
            }
            (
                Group::Wreath { base, top },
                Element::Wreath {
                    support: f1,
                    top: h1,
                },
                Element::Wreath {
                    support: f2,
                    top: h2,
                },
            ) => {
                // (f1,h1)(f2,h2) = (f1 · (h1 ▷ f2), h1 h2), (h ▷ f)(x) = f(x h)
                let h1inv = top.inv(h1)?;
                let mut f = f1.clone();
                for (y, v) in f2 {
                    let x = top.mul(y, &h1inv)?;
                    match f.remove(&x) {
                        Some(u) => {
                            let w = base.mul(&u, v)?;
                            if !base.is_identity(&w) {
                                f.insert(x, w);
                            }
                        }
                        None => {
                            f.insert(x, v.clone());
                        }
                    }
                }
                Ok(Element::Wreath {
                    support: f,
                    top: Box::new(top.mul(h1, h2)?),
                })
            }
            (
                Group::SymLimit { base },
                Element::Finitary {
                    perm: s1,
                    shift: g1,
                },
                Element::Finitary {
                    perm: s2,
                    shift: g2,
                },
            ) => {
                let s2c = conj_finitary(base, s2, g1)?;
                Ok(Element::Finitary {
                    perm: compose_finitary(s1, &s2c),
                    shift: Box::new(base.mul(g1, g2)?),
                })
            }
            (
                Group::SlLimit { base, p },
                Element::FinitaryMatrix {
                    entries: m1,
                    shift: g1,
                },
                Element::FinitaryMatrix {
                    entries: m2,
                    shift: g2,
                },
            ) => {
                let g1inv = base.inv(g1)?;
                let mut m2c = BTreeMap::new();
                for ((a, b), v) in m2 {
                    m2c.insert((base.mul(a, &g1inv)?, base.mul(b, &g1inv)?), *v);
                }
                Ok(Element::FinitaryMatrix {
                    entries: sparse_unipotent_mul(m1, &m2c, *p),
                    shift: Box::new(base.mul(g1, g2)?),
                })
            }
            (Group::Amalgam(am), Element::Amalgam { .. }, Element::Amalgam { .. }) => am.mul(a, b),
            _ => Err(mismatch(self, if self.contains(a) { b } else { a })),
        }
    }

    pub fn inv(&self, a: &Element) -> Result<Element> {
        match (self, a) {
            (Group::Perm { .. }, Element::Perm(x)) => Ok(Element::Perm(x.inv())),
            (Group::Matrix { p, .. }, Element::Matrix(x)) => x
                .inv(*p)
                .map(Element::Matrix)
                .ok_or_else(|| Error::InvalidInput("singular matrix".into())),
            (Group::Cyclic { order }, Element::Int(x)) => Ok(Element::Int(match order {
                Some(n) => ((-(*x as i128)).rem_euclid(*n as i128)) as i64,
                None => -x,
            })),
            (Group::FreeAbelian { .. }, Element::Vector(x)) => {
                Ok(Element::Vector(x.iter().map(|v| -v).collect()))
            }
            (Group::Dihedral { n }, Element::Dihedral { flip, shift }) => Ok(Element::Dihedral {
                flip: *flip,
                shift: reduce_shift(if *flip { *shift } else { -shift }, *n),
            }),
            (Group::Product(gs), Element::Tuple(x)) => Ok(Element::Tuple(
                gs.iter()
                    .zip(x)
                    .map(|(g, a)| g.inv(a))
                    .collect::<Result<_>>()?,
            )),
            (Group::Wreath { base, top }, Element::Wreath { support, top: h }) => {
                // g(z) = f(z h^-1)^-1, supported on supp(f)·h
                let mut g = BTreeMap::new();
                for (x, v) in support {
                    g.insert(top.mul(x, h)?, base.inv(v)?);
                }
                Ok(Element::Wreath {
                    support: g,
                    top: Box::new(top.inv(h)?),
                })
            }
            (Group::SymLimit { base }, Element::Finitary { perm, shift }) => {
                let inv_perm: BTreeMap<Element, Element> =
                    perm.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
                let ginv = base.inv(shift)?;
                Ok(Element::Finitary {
                    perm: conj_finitary(base, &inv_perm, &ginv)?,
                    shift: Box::new(ginv),
                })
            }
            (Group::SlLimit { base, p }, Element::FinitaryMatrix { entries, shift }) => {
                let minv = sparse_unipotent_inv(entries, *p)?;
                let ginv = base.inv(shift)?;
                let mut out = BTreeMap::new();
                for ((a, b), v) in minv {
                    out.insert((base.mul(&a, shift)?, base.mul(&b, shift)?), v);
                }
                Ok(Element::FinitaryMatrix {
                    entries: out,
                    shift: Box::new(ginv),
                })
            }
            (Group::Amalgam(am), Element::Amalgam { .. }) => am.inv(a),
            _ => Err(mismatch(self, a)),
        }
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: &Element, b: &Element) -> Result<Element> {
        let ai = self.inv(a)?;
        let bi = self.inv(b)?;
        let x = self.mul(&ai, &bi)?;
        let x = self.mul(&x, a)?;
        self.mul(&x, b)
    }

    pub fn conjugate(&self, a: &Element, by: &Element) -> Result<Element> {
        let x = self.mul(&self.inv(by)?, a)?;
        self.mul(&x, by)
    }

    pub fn pow(&self, a: &Element, e: i64) -> Result<Element> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq)?;
            }
        }
        Ok(acc)
    }

    /// Element order; `Unknown` when a generic search gives up.
    pub fn element_order(&self, a: &Element) -> Result<BigOrder> {
        if !self.contains(a) {
            return Err(mismatch(self, a));
        }
        match (self, a) {
            (Group::Perm { .. }, Element::Perm(p)) => Ok(BigOrder::Finite(p.order())),
            (Group::Cyclic { order: Some(n) }, Element::Int(x)) => {
                Ok(BigOrder::finite(n / (*x as u64).gcd(n)))
            }
            (Group::Cyclic { order: None }, Element::Int(x)) => Ok(if *x == 0 {
                BigOrder::finite(1u32)
            } else {
                BigOrder::Infinite
            }),
            (Group::FreeAbelian { .. }, Element::Vector(v)) => Ok(if v.iter().all(|&x| x == 0) {
                BigOrder::finite(1u32)
            } else {
                BigOrder::Infinite
            }),
            (Group::Dihedral { n }, Element::Dihedral { flip, shift }) => Ok(if *flip {
                BigOrder::finite(2u32)
            } else if *shift == 0 {
                BigOrder::finite(1u32)
            } else {
                match n {
                    Some(n) => BigOrder::finite(n / (*shift as u64).gcd(n)),
                    None => BigOrder::Infinite,
                }
            }),
            (Group::Product(gs), Element::Tuple(v)) => {
                let mut acc = BigUint::one();
                for (g, x) in gs.iter().zip(v) {
                    match g.element_order(x)? {
                        BigOrder::Finite(o) => acc = acc.lcm(&o),
                        other => return Ok(other),
                    }
                }
                Ok(BigOrder::Finite(acc))
            }
            (Group::Wreath { base, top }, Element::Wreath { top: h, .. }) => {
                match top.element_order(h)? {
                    BigOrder::Finite(k) => {
                        let k = k
                            .to_i64()
                            .ok_or_else(|| Error::Internal("top order overflow".into()))?;
                        let ak = self.pow(a, k)?;
                        let Element::Wreath { support, .. } = &ak else {
                            return Err(Error::Internal("wreath power".into()));
                        };
                        let mut acc = BigUint::one();
                        for v in support.values() {
                            match base.element_order(v)? {
                                BigOrder::Finite(o) => acc = acc.lcm(&o),
                                other => return Ok(other),
                            }
                        }
                        Ok(BigOrder::Finite(acc * BigUint::from(k as u64)))
                    }
                    other => Ok(other),
                }
            }
            (Group::Amalgam(am), _) => am.element_order(a),
            _ => self.order_by_powers(a, 1 << 20),
        }
    }

    fn order_by_powers(&self, a: &Element, cap: u64) -> Result<BigOrder> {
        let id = self.identity();
        let mut x = a.clone();
        for k in 1..=cap {
            if x == id {
                return Ok(BigOrder::finite(k));
            }
            x = self.mul(&x, a)?;
        }
        Ok(BigOrder::Unknown)
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Group::Perm { .. } | Group::Matrix { .. } => true,
            Group::Cyclic { order } => order.is_some(),
            Group::FreeAbelian { rank } => *rank == 0,
            Group::Dihedral { n } => n.is_some(),
            Group::Product(gs) => gs.iter().all(Group::is_finite),
            Group::Wreath { base, top } => base.is_finite() && top.is_finite(),
            Group::SymLimit { base } | Group::SlLimit { base, .. } => base.is_finite(),
            Group::Amalgam(a) => a.is_trivial_amalgam(),
        }
    }

    /// Order of the ambient group (not of a marked subgroup).
    pub fn ambient_order(&self) -> BigOrder {
        match self {
            Group::Perm { degree } => BigOrder::Finite(factorial(*degree as u64)),
            Group::Matrix { n, p } => {
                // |GL| = |SL| (p - 1)
                BigOrder::Finite(sl_order(*n as u32, *p as u64) * BigUint::from(p - 1))
            }
            Group::Cyclic { order: Some(n) } => BigOrder::finite(*n),
            Group::Dihedral { n: Some(n) } => BigOrder::finite(2 * n),
            Group::Product(gs) => {
                let mut acc = BigUint::one();
                for g in gs {
                    match g.ambient_order() {
                        BigOrder::Finite(o) => acc *= o,
                        other => return other,
                    }
                }
                BigOrder::Finite(acc)
            }
            Group::Wreath { base, top } => match (base.ambient_order(), top.ambient_order()) {
                (BigOrder::Finite(b), BigOrder::Finite(t)) => {
                    let e = t.to_u32().unwrap_or(u32::MAX);
                    BigOrder::Finite(b.pow(e) * t)
                }
                (BigOrder::Finite(b), _) if b == BigUint::one() => top.ambient_order(),
                _ => BigOrder::Infinite,
            },
            Group::FreeAbelian { rank: 0 } => BigOrder::finite(1u32),
            _ => BigOrder::Infinite,
        }
    }

    /// Number of elements for groups whose elements can be indexed directly.
    pub fn indexable_size(&self) -> Option<usize> {
        match self {
            Group::Cyclic { order: Some(n) } => Some(*n as usize),
            Group::Dihedral { n: Some(n) } => Some(2 * *n as usize),
            Group::Product(gs) => gs
                .iter()
                .try_fold(1usize, |acc, g| g.indexable_size().map(|s| acc * s)),
            _ => None,
        }
    }

    pub fn index_of(&self, a: &Element) -> Option<usize> {
        match (self, a) {
            (Group::Cyclic { order: Some(_) }, Element::Int(x)) => Some(*x as usize),
            (Group::Dihedral { n: Some(n) }, Element::Dihedral { flip, shift }) => {
                Some(*flip as usize * *n as usize + *shift as usize)
            }
            (Group::Product(gs), Element::Tuple(v)) => {
                let mut idx = 0usize;
                for (g, x) in gs.iter().zip(v) {
                    idx = idx * g.indexable_size()? + g.index_of(x)?;
                }
                Some(idx)
            }
            _ => None,
        }
    }

    pub fn element_at(&self, i: usize) -> Option<Element> {
        match self {
            Group::Cyclic { order: Some(n) } => (i < *n as usize).then_some(Element::Int(i as i64)),
            Group::Dihedral { n: Some(n) } => {
                let n = *n as usize;
                (i < 2 * n).then_some(Element::Dihedral {
                    flip: i >= n,
                    shift: (i % n) as i64,
                })
            }
            Group::Product(gs) => {
                let mut rest = i;
                let mut parts = vec![Element::Int(0); gs.len()];
                for (k, g) in gs.iter().enumerate().rev() {
                    let s = g.indexable_size()?;
                    parts[k] = g.element_at(rest % s)?;
                    rest /= s;
                }
                (rest == 0).then_some(Element::Tuple(parts))
            }
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Group::Matrix { p, .. } | Group::SlLimit { p, .. } if !is_prime(*p as u64) => {
                Err(Error::InvalidInput(format!("modulus {p} is not prime")))
            }
            Group::Cyclic { order: Some(0) } => Err(Error::InvalidInput("Z/0".into())),
            Group::Dihedral { n: Some(n) } if *n < 2 => {
                Err(Error::InvalidInput(format!("D[{n}] needs n >= 2")))
            }
            _ => Ok(()),
        }
    }
}

fn reduce_shift(s: i64, n: Option<u64>) -> i64 {
    match n {
        Some(n) => s.rem_euclid(n as i64),
        None => s,
    }
}

/// conj(σ, h): z -> ((z h)^σ) h⁻¹, supported on supp(σ)·h⁻¹.
fn conj_finitary(
    base: &Group,
    perm: &BTreeMap<Element, Element>,
    h: &Element,
) -> Result<BTreeMap<Element, Element>> {
    if base.is_identity(h) {
        return Ok(perm.clone());
    }
    let hinv = base.inv(h)?;
    let mut out = BTreeMap::new();
    for (k, v) in perm {
        out.insert(base.mul(k, &hinv)?, base.mul(v, &hinv)?);
    }
    Ok(out)
}

/// Finitary composition: first `a`, then `b`.
fn compose_finitary(
    a: &BTreeMap<Element, Element>,
    b: &BTreeMap<Element, Element>,
) -> BTreeMap<Element, Element> {
    let mut out = BTreeMap::new();
    let dom: BTreeSet<&Element> = a.keys().chain(b.keys()).collect();
    for z in dom {
        let y = a.get(z).unwrap_or(z);
        let x = b.get(y).unwrap_or(y);
        if x != z {
            out.insert(z.clone(), x.clone());
        }
    }
    out
}

type Sparse = BTreeMap<(Element, Element), u32>;

/// (I + a)(I + b) - I.
fn sparse_unipotent_mul(a: &Sparse, b: &Sparse, p: u32) -> Sparse {
    let p64 = p as u64;
    let mut acc: BTreeMap<(Element, Element), u64> = BTreeMap::new();
    for (k, v) in a.iter().chain(b.iter()) {
        *acc.entry(k.clone()).or_insert(0) += *v as u64;
    }
    let mut rows: BTreeMap<&Element, Vec<(&Element, u32)>> = BTreeMap::new();
    for ((r, c), v) in b {
        rows.entry(r).or_default().push((c, *v));
    }
    for ((i, k), v) in a {
        if let Some(row) = rows.get(k) {
            for (j, w) in row {
                *acc.entry((i.clone(), (*j).clone())).or_insert(0) += *v as u64 * *w as u64 % p64;
            }
        }
    }
    acc.into_iter()
        .filter_map(|(k, v)| {
            let v = (v % p64) as u32;
            (v != 0).then_some((k, v))
        })
        .collect()
}

/// Inverse of I + a, computed densely on the support of a.
fn sparse_unipotent_inv(a: &Sparse, p: u32) -> Result<Sparse> {
    if a.is_empty() {
        return Ok(Sparse::new());
    }
    let idx: Vec<&Element> = a
        .keys()
        .flat_map(|(r, c)| [r, c])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let pos: BTreeMap<&Element, usize> = idx.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let n = idx.len();
    let mut m = Matrix::identity(n);
    for ((r, c), v) in a {
        let (i, j) = (pos[r], pos[c]);
        m.set(i, j, (m.get(i, j) + v) % p);
    }
    let inv = m
        .inv(p)
        .ok_or_else(|| Error::InvalidInput("singular finitary matrix".into()))?;
    let mut out = Sparse::new();
    for i in 0..n {
        for j in 0..n {
            let v = (inv.get(i, j) + p - u32::from(i == j)) % p;
            if v != 0 {
                out.insert((idx[i].clone(), idx[j].clone()), v);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(n: usize, cycles: &[&[u32]]) -> Element {
        Element::Perm(Perm::from_cycles(n, cycles).unwrap())
    }

    #[test]
    fn commutator_of_transposition_and_three_cycle() {
        let g = Group::Perm { degree: 3 };
        let c = g
            .commutator(&perm(3, &[&[0, 1]]), &perm(3, &[&[0, 1, 2]]))
            .unwrap();
        assert_eq!(g.element_order(&c).unwrap(), BigOrder::finite(3u32));
        let a = perm(3, &[&[0, 1, 2]]);
        assert!(g.is_identity(&g.commutator(&a, &a).unwrap()));
    }

    #[test]
    fn dihedral_relations() {
        let g = Group::Dihedral { n: Some(6) };
        let c = Element::Dihedral {
            flip: true,
            shift: 0,
        };
        let d = Element::Dihedral {
            flip: true,
            shift: 1,
        };
        let cd = g.mul(&c, &d).unwrap();
        assert_eq!(g.element_order(&cd).unwrap(), BigOrder::finite(6u32));
        assert!(g.is_identity(&g.mul(&c, &c).unwrap()));
        let inf = Group::Dihedral { n: None };
        assert_eq!(
            inf.element_order(&inf.mul(&c, &d).unwrap()).unwrap(),
            BigOrder::Infinite
        );
    }

    #[test]
    fn wreath_shift_moves_support() {
        let g = Group::Wreath {
            base: Box::new(Group::cyclic(2)),
            top: Box::new(Group::integers()),
        };
        let mut f = BTreeMap::new();
        f.insert(Element::Int(4), Element::Int(1));
        let w = Element::Wreath {
            support: f,
            top: Box::new(Element::Int(0)),
        };
        let u = Element::Wreath {
            support: BTreeMap::new(),
            top: Box::new(Element::Int(1)),
        };
        // u^3 w u^-3 is supported at 4 - 3
        let x = g
            .mul(
                &g.mul(&g.pow(&u, 3).unwrap(), &w).unwrap(),
                &g.pow(&u, -3).unwrap(),
            )
            .unwrap();
        let Element::Wreath { support, .. } = x else {
            panic!()
        };
        assert_eq!(
            support.keys().cloned().collect::<Vec<_>>(),
            vec![Element::Int(1)]
        );
    }

    #[test]
    fn finitary_inverse() {
        let base = Group::integers();
        let g = Group::SymLimit {
            base: Box::new(base),
        };
        let mut m = BTreeMap::new();
        m.insert(Element::Int(0), Element::Int(3));
        m.insert(Element::Int(3), Element::Int(0));
        let x = Element::Finitary {
            perm: m,
            shift: Box::new(Element::Int(2)),
        };
        let y = g.mul(&x, &g.inv(&x).unwrap()).unwrap();
        assert!(g.is_identity(&y));

        let sl = Group::SlLimit {
            base: Box::new(Group::integers()),
            p: 3,
        };
        let mut e = BTreeMap::new();
        e.insert((Element::Int(0), Element::Int(1)), 2);
        e.insert((Element::Int(1), Element::Int(5)), 1);
        let x = Element::FinitaryMatrix {
            entries: e,
            shift: Box::new(Element::Int(-1)),
        };
        assert!(sl.is_identity(&sl.mul(&sl.inv(&x).unwrap(), &x).unwrap()));
    }

    #[test]
    fn indexing_roundtrip() {
        let g = Group::Product(vec![Group::cyclic(3), Group::Dihedral { n: Some(4) }]);
        for i in 0..g.indexable_size().unwrap() {
            assert_eq!(g.index_of(&g.element_at(i).unwrap()), Some(i));
        }
    }
}
