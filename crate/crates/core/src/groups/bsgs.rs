//! Base and strong generating sets for permutation groups.
//!
//! Two construction paths share one data structure:
//! * `Bsgs::new` runs deterministic Schreier-Sims with incremental orbits.
//! * `Bsgs::with_order_bound` builds the chain from seeded pseudo-random
//!   elements and stops once the product of orbit lengths reaches a known
//!   upper bound for the group order. Every strong generator is a product of
//!   the input generators, so the product of orbit lengths is a lower bound
//!   and reaching the upper bound certifies the order exactly. If the bound is
//!   not reached the deterministic completion takes over.

use super::perm::Perm;
use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

#[derive(Default, Clone, Copy)]
pub(crate) struct FxHasher(u64);

impl Hasher for FxHasher {
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(5) ^ b as u64).wrapping_mul(0x517c_c1b7_2722_0a95);
        }
    }
    fn write_u32(&mut self, i: u32) {
        self.0 = (self.0.rotate_left(5) ^ i as u64).wrapping_mul(0x517c_c1b7_2722_0a95);
    }
    fn write_u64(&mut self, i: u64) {
        self.0 = (self.0.rotate_left(5) ^ i).wrapping_mul(0x517c_c1b7_2722_0a95);
    }
    fn write_usize(&mut self, i: usize) {
        self.write_u64(i as u64);
    }
    fn finish(&self) -> u64 {
        self.0
    }
}

pub(crate) type FxMap<K, V> = HashMap<K, V, BuildHasherDefault<FxHasher>>;

const ROOT: u32 = u32::MAX;
const POOL: usize = 8;
const PATIENCE: usize = 24;
const RESCUE: usize = 48;

#[derive(Clone, Debug)]
struct Level {
    point: u32,
    gens: Vec<u32>,
    orbit: Vec<u32>,
    /// orbit point -> index of the strong generator that reached it
    tree: FxMap<u32, u32>,
    /// per orbit position, how many level generators have been checked
    checked: Vec<u32>,
}

impl Level {
    fn new(point: u32) -> Self {
        let mut tree = FxMap::default();
        tree.insert(point, ROOT);
        Level {
            point,
            gens: Vec::new(),
            orbit: vec![point],
            tree,
            checked: vec![0],
        }
    }
}

/// How the chain was completed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BsgsMethod {
    Deterministic,
    BoundCertified,
    BoundFallback,
}

#[derive(Clone, Debug)]
pub struct Bsgs {
    degree: usize,
    gens: Vec<Vec<u32>>,
    gens_inv: Vec<Vec<u32>>,
    levels: Vec<Level>,
    method: BsgsMethod,
}

impl Bsgs {
    fn empty(degree: usize) -> Self {
        Bsgs {
            degree,
            gens: Vec::new(),
            gens_inv: Vec::new(),
            levels: Vec::new(),
            method: BsgsMethod::Deterministic,
        }
    }

    /// Deterministic Schreier-Sims. An empty generator list gives the trivial group.
    pub fn new(degree: usize, gens: &[Perm]) -> Self {
        let mut b = Bsgs::empty(degree);
        for g in gens {
            assert_eq!(g.degree(), degree, "generator degree");
            b.sift_and_add(g.images().to_vec(), 0);
        }
        b.complete();
        b
    }

    /// Builds the chain using seeded random elements until the order reaches
    /// `bound`, which must be an upper bound for the order of the group.
    pub fn with_order_bound(degree: usize, gens: &[Perm], bound: &BigUint, seed: u64) -> Self {
        let mut b = Bsgs::empty(degree);
        b.method = BsgsMethod::BoundCertified;
        let gens: Vec<Vec<u32>> = gens
            .iter()
            .map(|g| {
                assert_eq!(g.degree(), degree, "generator degree");
                g.images().to_vec()
            })
            .filter(|g| !is_identity(g))
            .collect();
        for g in &gens {
            b.sift_and_add(g.clone(), 0);
        }
        if gens.is_empty() || b.order() >= *bound {
            return b;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pr = ProductReplacement::new(degree, &gens, &mut rng);
        let mut pool: Vec<Vec<u32>> = (0..POOL).map(|_| pr.next(&mut rng)).collect();
        let mut acc = pr.next(&mut rng);
        let mut j = 0;
        let mut order = b.order();
        while order < *bound {
            if j == b.levels.len() {
                match pool
                    .iter()
                    .chain(std::iter::once(&acc))
                    .find(|p| !is_identity(p))
                {
                    Some(p) => {
                        let pt = first_moved(p).expect("non-identity");
                        b.levels.push(Level::new(pt));
                    }
                    None => break,
                }
            }
            let mut stale = 0;
            while stale < PATIENCE && order < *bound {
                let a = rng.gen_range(0..POOL);
                let mut c = rng.gen_range(0..POOL - 1);
                if c >= a {
                    c += 1;
                }
                pool[a] = if rng.gen::<bool>() {
                    mul(&pool[a], &pool[c])
                } else {
                    mul(&pool[c], &pool[a])
                };
                acc = mul(&acc, &pool[a]);
                if b.sift_and_add(acc.clone(), j) {
                    stale = 0;
                    order = b.order();
                } else {
                    stale += 1;
                }
            }
            for p in pool.iter_mut().chain(std::iter::once(&mut acc)) {
                b.strip_level(p, j);
            }
            j += 1;
        }
        let mut fails = 0;
        while order < *bound && fails < RESCUE {
            let g = pr.next(&mut rng);
            if b.sift_and_add(g, 0) {
                fails = 0;
                order = b.order();
            } else {
                fails += 1;
            }
        }
        if order < *bound {
            b.method = BsgsMethod::BoundFallback;
            b.normalize();
            b.complete();
        }
        b
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn method(&self) -> BsgsMethod {
        self.method
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * l.orbit.len())
    }

    pub fn contains(&self, p: &Perm) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let mut h = p.images().to_vec();
        self.sift(&mut h, 0, self.levels.len()) == self.levels.len() && is_identity(&h)
    }

    /// Sifts `h` in place through levels `start..end`; returns the level
    /// where it dropped out, or `end`.
    fn sift(&self, h: &mut [u32], start: usize, end: usize) -> usize {
        for l in start..end {
            let level = &self.levels[l];
            let b = level.point;
            let mut g = h[b as usize];
            if !level.tree.contains_key(&g) {
                return l;
            }
            while g != b {
                let s = level.tree[&g] as usize;
                let sinv = &self.gens_inv[s];
                for x in h.iter_mut() {
                    *x = sinv[*x as usize];
                }
                g = h[b as usize];
            }
        }
        end
    }

    /// Sifts from `start`; a non-trivial residue becomes a strong generator on
    /// levels `start..=drop`. Returns whether the chain grew.
    fn sift_and_add(&mut self, mut h: Vec<u32>, start: usize) -> bool {
        let drop = self.sift(&mut h, start, self.levels.len());
        if drop == self.levels.len() {
            match first_moved(&h) {
                None => return false,
                Some(pt) => self.levels.push(Level::new(pt)),
            }
        }
        self.add_strong(h, start, drop);
        true
    }

    fn strip_level(&mut self, h: &mut Vec<u32>, j: usize) {
        if j >= self.levels.len() {
            return;
        }
        if self.sift(h, j, j + 1) == j {
            self.add_strong(h.clone(), j, j);
            let r = self.sift(h, j, j + 1);
            debug_assert_eq!(r, j + 1);
        }
    }

    fn add_strong(&mut self, h: Vec<u32>, from: usize, to: usize) {
        let gi = self.gens.len() as u32;
        self.gens_inv.push(invert(&h));
        self.gens.push(h);
        for l in from..=to {
            self.extend_level(l, gi);
        }
    }

    fn extend_level(&mut self, l: usize, gi: u32) {
        let gens = &self.gens;
        let level = &mut self.levels[l];
        level.gens.push(gi);
        let g = &gens[gi as usize];
        let mut queue = Vec::new();
        let n0 = level.orbit.len();
        for idx in 0..n0 {
            let y = g[level.orbit[idx] as usize];
            if let std::collections::hash_map::Entry::Vacant(e) = level.tree.entry(y) {
                e.insert(gi);
                level.orbit.push(y);
                queue.push(y);
            }
        }
        let mut qi = 0;
        while qi < queue.len() {
            let x = queue[qi];
            qi += 1;
            for &gj in &level.gens {
                let y = gens[gj as usize][x as usize];
                if let std::collections::hash_map::Entry::Vacant(e) = level.tree.entry(y) {
                    e.insert(gj);
                    level.orbit.push(y);
                    queue.push(y);
                }
            }
        }
        level.checked.resize(level.orbit.len(), 0);
    }

    /// Transversal element mapping the level's base point to `pt`.
    fn transversal(&self, l: usize, pt: u32) -> Vec<u32> {
        let level = &self.levels[l];
        let mut path = Vec::new();
        let mut g = pt;
        while g != level.point {
            let s = level.tree[&g] as usize;
            path.push(s);
            g = self.gens_inv[s][g as usize];
        }
        let mut u: Vec<u32> = (0..self.degree as u32).collect();
        for &s in path.iter().rev() {
            let sg = &self.gens[s];
            for x in u.iter_mut() {
                *x = sg[*x as usize];
            }
        }
        u
    }

    /// Rebuilds level generator sets so that every strong generator belongs to
    /// every level whose earlier base points it fixes.
    fn normalize(&mut self) {
        let base = self.base();
        let mut levels: Vec<Level> = base.iter().map(|&b| Level::new(b)).collect();
        std::mem::swap(&mut self.levels, &mut levels);
        for gi in 0..self.gens.len() {
            let fixed = base
                .iter()
                .take_while(|&&b| self.gens[gi][b as usize] == b)
                .count();
            let top = fixed.min(base.len() - 1);
            for l in 0..=top {
                self.extend_level(l, gi as u32);
            }
        }
    }

    /// Deterministic Schreier-Sims completion.
    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            match self.check_level(i as usize) {
                None => i -= 1,
                Some(j) => i = j as isize,
            }
        }
    }

    fn check_level(&mut self, i: usize) -> Option<usize> {
        let mut a = 0;
        while a < self.levels[i].orbit.len() {
            while (self.levels[i].checked[a] as usize) < self.levels[i].gens.len() {
                let s = self.levels[i].gens[self.levels[i].checked[a] as usize] as usize;
                self.levels[i].checked[a] += 1;
                let pt = self.levels[i].orbit[a];
                let u = self.transversal(i, pt);
                let mut h = mul(&u, &self.gens[s]);
                let drop = self.sift(&mut h, i, self.levels.len());
                if drop < self.levels.len() || !is_identity(&h) {
                    if drop == self.levels.len() {
                        let p = first_moved(&h).expect("non-identity residue");
                        self.levels.push(Level::new(p));
                    }
                    self.add_strong(h, i + 1, drop);
                    return Some(drop);
                }
            }
            a += 1;
        }
        None
    }
}

struct ProductReplacement {
    slots: Vec<Vec<u32>>,
    acc: Vec<u32>,
}

impl ProductReplacement {
    fn new(degree: usize, gens: &[Vec<u32>], rng: &mut ChaCha8Rng) -> Self {
        let mut slots: Vec<Vec<u32>> = Vec::new();
        let r = gens.len().max(10);
        for i in 0..r {
            slots.push(gens[i % gens.len()].clone());
        }
        let mut pr = ProductReplacement {
            slots,
            acc: (0..degree as u32).collect(),
        };
        for _ in 0..60 {
            pr.next(rng);
        }
        pr
    }

    fn next(&mut self, rng: &mut ChaCha8Rng) -> Vec<u32> {
        let r = self.slots.len();
        let a = rng.gen_range(0..r);
        let mut c = rng.gen_range(0..r - 1);
        if c >= a {
            c += 1;
        }
        self.slots[a] = if rng.gen::<bool>() {
            mul(&self.slots[a], &self.slots[c])
        } else {
            mul(&self.slots[c], &self.slots[a])
        };
        self.acc = mul(&self.acc, &self.slots[a]);
        self.acc.clone()
    }
}

#[inline]
fn mul(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&x| b[x as usize]).collect()
}

fn invert(a: &[u32]) -> Vec<u32> {
    let mut r = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        r[x as usize] = i as u32;
    }
    r
}

fn is_identity(a: &[u32]) -> bool {
    a.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

fn first_moved(a: &[u32]) -> Option<u32> {
    a.iter()
        .enumerate()
        .find(|(i, &x)| *i as u32 != x)
        .map(|(i, _)| i as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, c: &[&[u32]]) -> Perm {
        Perm::from_cycles(n, c).unwrap()
    }

    #[test]
    fn alt5() {
        let gens = [cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[0, 1], &[2, 3]])];
        let b = Bsgs::new(5, &gens);
        assert_eq!(b.order(), 60u32.into());
        assert!(b.contains(&cyc(5, &[&[0, 1, 2]])));
        assert!(!b.contains(&cyc(5, &[&[0, 1]])));
    }

    #[test]
    fn trivial_and_symmetric() {
        assert_eq!(Bsgs::new(4, &[]).order(), 1u32.into());
        let gens = [cyc(7, &[&[0, 1]]), cyc(7, &[&[0, 1, 2, 3, 4, 5, 6]])];
        assert_eq!(Bsgs::new(7, &gens).order(), 5040u32.into());
    }

    #[test]
    fn bound_certified_matches_deterministic() {
        let gens = [cyc(9, &[&[0, 1, 2, 3, 4, 5, 6, 7, 8]]), cyc(9, &[&[0, 1]])];
        let bound = BigUint::from(362880u32);
        let b = Bsgs::with_order_bound(9, &gens, &bound, 7);
        assert_eq!(b.order(), bound);
        assert_eq!(b.method(), BsgsMethod::BoundCertified);
        // a loose bound forces the deterministic fallback, which still gets the exact order
        let alt = [cyc(6, &[&[0, 1, 2]]), cyc(6, &[&[1, 2, 3, 4, 5]])];
        let b = Bsgs::with_order_bound(6, &alt, &BigUint::from(720u32), 3);
        assert_eq!(b.order(), 360u32.into());
        assert_eq!(b.method(), BsgsMethod::BoundFallback);
    }
}
