use serde::{Deserialize, Serialize};
use std::fmt;

/// Permutation of `0..n` stored as an image array. Products compose left to
/// right: `a.mul(&b)` applies `a` first, then `b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    /// Builds a permutation from an image array, rejecting non-bijections.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Perm(images))
    }

    /// Builds a permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Option<Self> {
        let mut img: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for cyc in cycles {
            for (i, &x) in cyc.iter().enumerate() {
                let x = x as usize;
                if x >= n || touched[x] {
                    return None;
                }
                touched[x] = true;
                img[x] = cyc[(i + 1) % cyc.len()];
            }
        }
        Some(Perm(img))
    }

    pub fn transposition(n: usize, a: u32, b: u32) -> Self {
        let mut img: Vec<u32> = (0..n as u32).collect();
        img.swap(a as usize, b as usize);
        Perm(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn into_images(self) -> Vec<u32> {
        self.0
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn mul(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inv(&self) -> Perm {
        let mut r = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            r[x as usize] = i as u32;
        }
        Perm(r)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn first_moved(&self) -> Option<u32> {
        self.0
            .iter()
            .enumerate()
            .find(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i as u32)
    }

    /// Cycle decomposition, each cycle starting at its smallest point, fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start as u32];
            seen[start] = true;
            let mut x = self.0[start] as usize;
            while x != start {
                seen[x] = true;
                cyc.push(x as u32);
                x = self.0[x] as usize;
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    /// Sorted list of cycle lengths including fixed points.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.0[x] as usize;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    /// +1 for even, -1 for odd.
    pub fn sign(&self) -> i8 {
        let n = self.0.len();
        let cycles = self.cycle_type().len();
        if (n - cycles) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn order(&self) -> num_bigint::BigUint {
        use num_integer::Integer;
        self.cycle_type()
            .into_iter()
            .fold(num_bigint::BigUint::from(1u32), |acc, l| {
                acc.lcm(&num_bigint::BigUint::from(l))
            })
    }

    pub fn pow(&self, e: i64) -> Perm {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        acc
    }

    /// Advances to the next permutation in lexicographic order of image arrays.
    pub fn next_lex(&mut self) -> bool {
        let v = &mut self.0;
        let n = v.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// All even permutations of degree `n` in lexicographic order.
pub fn alternating_elements(n: usize) -> Vec<Perm> {
    let mut p = Perm::identity(n);
    let mut out = Vec::new();
    loop {
        if p.sign() == 1 {
            out.push(p.clone());
        }
        if !p.next_lex() {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_is_left_to_right() {
        let a = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.mul(&b).apply(0), 2);
    }

    #[test]
    fn sign_and_order() {
        assert_eq!(Perm::identity(4).sign(), 1);
        assert_eq!(Perm::transposition(4, 0, 1).sign(), -1);
        let c = Perm::from_cycles(5, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert_eq!(c.order(), 6u32.into());
        assert_eq!(c.pow(6), Perm::identity(5));
        assert_eq!(c.pow(-1), c.inv());
    }

    #[test]
    fn alternating_counts() {
        assert_eq!(alternating_elements(4).len(), 12);
        assert_eq!(alternating_elements(5).len(), 60);
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Perm::from_images(vec![0, 0]).is_none());
        assert!(Perm::from_cycles(3, &[&[0, 1], &[1, 2]]).is_none());
    }
}
