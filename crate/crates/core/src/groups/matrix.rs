use serde::{Deserialize, Serialize};
use std::fmt;

/// Square matrix with residues mod a prime, row-major. The modulus lives in
/// the owning group, not in the value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matrix {
    pub n: usize,
    pub data: Vec<u32>,
}

impl Matrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<u32>], p: u32) -> Self {
        let n = rows.len();
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| x % p)).collect();
        Matrix { n, data }
    }

    /// `I + c·E_{i,j}`.
    pub fn elementary(n: usize, i: usize, j: usize, c: u32, p: u32) -> Self {
        let mut m = Matrix::identity(n);
        m.data[i * n + j] = (m.data[i * n + j] + c) % p;
        m
    }

    /// Permutation matrix with a one at `(x, perm[x])`.
    pub fn permutation(perm: &[u32]) -> Self {
        let n = perm.len();
        let mut m = Matrix {
            n,
            data: vec![0; n * n],
        };
        for (x, &y) in perm.iter().enumerate() {
            m.data[x * n + y as usize] = 1;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Matrix, p: u32) -> Matrix {
        let n = self.n;
        let p64 = p as u64;
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let mut acc = vec![0u64; n];
            for (k, &a) in row.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * n..(k + 1) * n];
                for j in 0..n {
                    acc[j] += a as u64 * orow[j] as u64;
                }
                if k % 64 == 63 {
                    for v in acc.iter_mut() {
                        *v %= p64;
                    }
                }
            }
            for j in 0..n {
                out[i * n + j] = (acc[j] % p64) as u32;
            }
        }
        Matrix { n, data: out }
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inv(&self, p: u32) -> Option<Matrix> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut b = Matrix::identity(n).data;
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r * n + col] != 0)?;
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                    b.swap(piv * n + j, col * n + j);
                }
            }
            let inv = mod_inv(a[col * n + col], p);
            for j in 0..n {
                a[col * n + j] = mulm(a[col * n + j], inv, p);
                b[col * n + j] = mulm(b[col * n + j], inv, p);
            }
            for r in 0..n {
                if r == col || a[r * n + col] == 0 {
                    continue;
                }
                let f = a[r * n + col];
                for j in 0..n {
                    a[r * n + j] = subm(a[r * n + j], mulm(f, a[col * n + j], p), p);
                    b[r * n + j] = subm(b[r * n + j], mulm(f, b[col * n + j], p), p);
                }
            }
        }
        Some(Matrix { n, data: b })
    }

    pub fn det(&self, p: u32) -> u32 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1u32;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = (p - det) % p;
            }
            let d = a[col * n + col];
            det = mulm(det, d, p);
            let inv = mod_inv(d, p);
            for r in col + 1..n {
                if a[r * n + col] == 0 {
                    continue;
                }
                let f = mulm(a[r * n + col], inv, p);
                for j in col..n {
                    a[r * n + j] = subm(a[r * n + j], mulm(f, a[col * n + j], p), p);
                }
            }
        }
        det
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.n)
    }

    /// Row vector times matrix; vectors are encoded base p, entry 0 least significant.
    pub fn act_on_vector(&self, v: &[u32], p: u32) -> Vec<u32> {
        let n = self.n;
        (0..n)
            .map(|j| {
                let mut s = 0u64;
                for i in 0..n {
                    s += v[i] as u64 * self.data[i * n + j] as u64;
                }
                (s % p as u64) as u32
            })
            .collect()
    }

    /// Block diagonal sum.
    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut m = Matrix {
            n,
            data: vec![0; n * n],
        };
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m.data[(off + i) * n + off + j] = b.get(i, j);
                }
            }
            off += b.n;
        }
        m
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[inline]
pub fn mulm(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub fn subm(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + p as u64 - b as u64) % p as u64) as u32
}

pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

pub fn mod_inv(a: u32, p: u32) -> u32 {
    mod_pow(a as u64, p as u64 - 2, p as u64) as u32
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_rows(&[vec![1, 2, 0], vec![0, 1, 4], vec![3, 0, 2]], 5);
        let inv = m.inv(5).unwrap();
        assert!(m.mul(&inv, 5).is_identity());
    }

    #[test]
    fn determinants() {
        assert_eq!(Matrix::elementary(3, 0, 2, 1, 7).det(7), 1);
        let swap = Matrix::permutation(&[1, 0, 2]);
        assert_eq!(swap.det(7), 6);
        let cyc = Matrix::permutation(&[1, 2, 0]);
        assert_eq!(cyc.det(7), 1);
    }

    #[test]
    fn elementary_commutator() {
        let p = 3;
        let a = Matrix::elementary(3, 0, 1, 1, p);
        let b = Matrix::elementary(3, 1, 2, 1, p);
        let c = a
            .inv(p)
            .unwrap()
            .mul(&b.inv(p).unwrap(), p)
            .mul(&a, p)
            .mul(&b, p);
        assert_eq!(c, Matrix::elementary(3, 0, 2, 1, p));
    }
}
