//! Cayley graphs of finite marked groups as regular multigraphs, spectral
//! gaps of their normalized adjacency, block-elementary markings of
//! SL(4l', F_p), and expander tables.
//!
//! The symmetrized marking S ∪ S⁻¹ is a multiset: a self-inverse generator
//! contributes two edges, so the degree is always 2|S|.

use crate::constructions::encode::elementary_certificate;
use crate::constructions::CertificateEntry;
use crate::diagonal::diagonal_product;
use crate::error::{Error, Result};
use crate::groups::matrix::is_prime;
use crate::groups::{Caps, Element, Family, Group, MarkedGroup, Matrix};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{HashMap, VecDeque};
use std::time::Instant;

/// Largest vertex count handled by the dense eigensolver.
pub const DENSE_LIMIT: usize = 4000;
const LANCZOS_TOL: f64 = 1e-9;
const LANCZOS_MAX_ITER: usize = 1500;

pub const EPSILON_NOTE: &str = "sum over s in S~ of |sf - f|^2 = 2 deg (1 - <Af,f>/|f|^2) |f|^2 >= 2 deg gap |f|^2 on constants-orthogonal f, \
so max_s |sf - f| >= sqrt(2 gap) |f|; the reported epsilon_lower = sqrt(2 gap / deg) is the weaker per-edge form";

/// Regular multigraph in compressed sparse rows: the neighbors of v are
/// `targets[v*degree .. (v+1)*degree]`.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    pub n: usize,
    pub degree: usize,
    pub targets: Vec<u32>,
}

impl CayleyGraph {
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[v * self.degree..(v + 1) * self.degree]
    }

    /// Number of connected components.
    pub fn components(&self) -> usize {
        let mut comp = vec![false; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if comp[s] {
                continue;
            }
            count += 1;
            comp[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &t in self.neighbors(v) {
                    if !comp[t as usize] {
                        comp[t as usize] = true;
                        queue.push_back(t as usize);
                    }
                }
            }
        }
        count
    }

    /// y = (A / degree) x.
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let inv = 1.0 / self.degree as f64;
        for (v, out) in y.iter_mut().enumerate() {
            *out = self
                .neighbors(v)
                .iter()
                .map(|&t| x[t as usize])
                .sum::<f64>()
                * inv;
        }
    }
}

/// Cayley graph on the enumerated elements (sorted), edges g -- s·g for s in
/// S ∪ S⁻¹.
pub fn cayley_graph(mg: &MarkedGroup, caps: &Caps) -> Result<CayleyGraph> {
    if mg.k() == 0 {
        return Err(Error::InvalidInput(
            "Cayley graph of an empty marking".into(),
        ));
    }
    let mut elements = mg.elements(caps)?;
    elements.sort();
    let index: HashMap<&Element, u32> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e, i as u32))
        .collect();
    let mut sym = Vec::with_capacity(2 * mg.k());
    for s in &mg.marking {
        sym.push(s.clone());
        sym.push(mg.group.inv(s)?);
    }
    let mut targets = Vec::with_capacity(elements.len() * sym.len());
    for g in &elements {
        for s in &sym {
            let t = mg.group.mul(s, g)?;
            targets.push(
                *index
                    .get(&t)
                    .ok_or_else(|| Error::Internal("closure is not closed".into()))?,
            );
        }
    }
    Ok(CayleyGraph {
        n: elements.len(),
        degree: sym.len(),
        targets,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenMethod {
    Dense,
    Lanczos,
    Disconnected,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub n_vertices: usize,
    pub degree: usize,
    pub components: usize,
    pub lambda2: f64,
    pub gap: f64,
    pub epsilon_lower: f64,
    /// |A y - λ2 y| for the returned unit eigenvector.
    pub residual: f64,
    pub method: EigenMethod,
    pub iterations: usize,
}

fn report(
    g: &CayleyGraph,
    components: usize,
    lambda2: f64,
    residual: f64,
    method: EigenMethod,
    iterations: usize,
) -> SpectralReport {
    let gap = (1.0 - lambda2).max(0.0);
    SpectralReport {
        n_vertices: g.n,
        degree: g.degree,
        components,
        lambda2,
        gap,
        epsilon_lower: (2.0 * gap / g.degree as f64).sqrt(),
        residual,
        method,
        iterations,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn remove_mean(v: &mut [f64]) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= m);
}

fn residual_of(g: &CayleyGraph, y: &[f64], theta: f64) -> f64 {
    let mut ay = vec![0.0; g.n];
    g.apply(y, &mut ay);
    ay.iter()
        .zip(y)
        .map(|(a, b)| (a - theta * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Second-largest eigenvalue of the normalized adjacency.
pub fn spectral_gap(g: &CayleyGraph, seed: u64) -> Result<SpectralReport> {
    let components = g.components();
    if components > 1 {
        return Ok(report(
            g,
            components,
            1.0,
            0.0,
            EigenMethod::Disconnected,
            0,
        ));
    }
    if g.n == 1 {
        return Ok(report(g, 1, 0.0, 0.0, EigenMethod::Dense, 0));
    }
    if g.n <= DENSE_LIMIT {
        dense(g)
    } else {
        lanczos(g, seed)
    }
}

/// Same as [`spectral_gap`] with the eigensolver chosen by the caller.
pub fn spectral_gap_with(
    g: &CayleyGraph,
    method: EigenMethod,
    seed: u64,
) -> Result<SpectralReport> {
    match method {
        EigenMethod::Dense => dense(g),
        EigenMethod::Lanczos => lanczos(g, seed),
        EigenMethod::Disconnected => spectral_gap(g, seed),
    }
}

fn dense(g: &CayleyGraph) -> Result<SpectralReport> {
    let n = g.n;
    let inv = 1.0 / g.degree as f64;
    let mut a = DMatrix::<f64>::zeros(n, n);
    for v in 0..n {
        for &t in g.neighbors(v) {
            a[(v, t as usize)] += inv;
        }
    }
    let eig = SymmetricEigen::new(a);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let (l2, col) = (eig.eigenvalues[idx[1]], idx[1]);
    let y: Vec<f64> = eig.eigenvectors.column(col).iter().copied().collect();
    let r = residual_of(g, &y, l2) / norm(&y);
    Ok(report(g, 1, l2, r, EigenMethod::Dense, 0))
}

/// Lanczos with full reorthogonalization on the complement of the constants.
fn lanczos(g: &CayleyGraph, seed: u64) -> Result<SpectralReport> {
    let n = g.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    remove_mean(&mut q);
    let s = norm(&q);
    q.iter_mut().for_each(|x| *x /= s);
    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let max_iter = LANCZOS_MAX_ITER.min(n - 1);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut next_check = 10;
    for j in 0..max_iter {
        g.apply(&basis[j], &mut w);
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        remove_mean(&mut w);
        let b = norm(&w);
        let done = b < 1e-12 || j + 1 == max_iter;
        if done || j + 1 == next_check {
            next_check += 10.max(next_check / 4);
            let m = alpha.len();
            let t = DMatrix::from_fn(m, m, |r, c| {
                if r == c {
                    alpha[r]
                } else if r + 1 == c {
                    beta[r]
                } else if c + 1 == r {
                    beta[c]
                } else {
                    0.0
                }
            });
            let eig = SymmetricEigen::new(t);
            let top = (0..m)
                .max_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]))
                .expect("non-empty");
            let theta = eig.eigenvalues[top];
            let sv: Vec<f64> = eig.eigenvectors.column(top).iter().copied().collect();
            let estimate = b * sv[m - 1].abs();
            if estimate < LANCZOS_TOL / 10.0 || done {
                let mut y = vec![0.0; n];
                for (coef, qv) in sv.iter().zip(&basis) {
                    y.iter_mut().zip(qv).for_each(|(acc, x)| *acc += coef * x);
                }
                let yn = norm(&y);
                y.iter_mut().for_each(|x| *x /= yn);
                let r = residual_of(g, &y, theta);
                if r < LANCZOS_TOL {
                    return Ok(report(g, 1, theta, r, EigenMethod::Lanczos, j + 1));
                }
                best = Some((theta, y));
                if done {
                    break;
                }
            }
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    let (theta, y) = best.ok_or_else(|| Error::Internal("Lanczos produced no Ritz pair".into()))?;
    let r = residual_of(g, &y, theta);
    Err(Error::Stage {
        stage: 0,
        reason: format!("Lanczos did not converge: lambda2 ~ {theta}, residual {r:e}"),
    })
}

/// (e_12^1, e_12^x, e_12^y, τ) in SL(4l', F_p), where x is the matrix unit
/// E_12 of size l' (the scalar 1 when l' = 1), y the cyclic permutation
/// matrix of size l', and τ the block 4-cycle with one sign changed. The
/// second component is a list of words for every elementary matrix.
pub fn elementary_block_marking(
    l_prime: usize,
    p: u32,
) -> Result<(MarkedGroup, Vec<CertificateEntry>)> {
    if l_prime == 0 {
        return Err(Error::InvalidInput("block size must be at least 1".into()));
    }
    if !is_prime(p as u64) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let l = l_prime;
    let n = 4 * l;
    let mut x = Matrix {
        n: l,
        data: vec![0; l * l],
    };
    if l == 1 {
        x.set(0, 0, 1);
    } else {
        x.set(0, 1, 1);
    }
    let cyc: Vec<u32> = (0..l as u32).map(|i| (i + 1) % l as u32).collect();
    let y = Matrix::permutation(&cyc);
    let block_e12 = |r: &Matrix| {
        let mut m = Matrix::identity(n);
        for i in 0..l {
            for j in 0..l {
                m.set(i, l + j, r.get(i, j) % p);
            }
        }
        m
    };
    let mut tau = Matrix {
        n,
        data: vec![0; n * n],
    };
    for b in 0..4 {
        let sign = if b == 3 { p - 1 } else { 1 } % p;
        for i in 0..l {
            tau.set(b * l + i, ((b + 1) % 4) * l + i, sign);
        }
    }
    let marking = vec![
        Element::Matrix(block_e12(&Matrix::identity(l))),
        Element::Matrix(block_e12(&x)),
        Element::Matrix(block_e12(&y)),
        Element::Matrix(tau),
    ];
    let mg = MarkedGroup::new(Group::Matrix { n, p }, marking, format!("SL({n},{p}); T"))?
        .with_family(Family::SpecialLinear { n, p: p as u64 });
    let cert = elementary_certificate(&mg)?;
    Ok((mg, cert))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpanderRow {
    pub label: String,
    pub l_prime: Vec<usize>,
    pub p: Vec<u32>,
    pub n_vertices: Option<usize>,
    pub degree: Option<usize>,
    pub lambda2: Option<f64>,
    pub gap: Option<f64>,
    pub epsilon_lower: Option<f64>,
    pub residual: Option<f64>,
    pub runtime_ms: Option<u64>,
    pub error: Option<String>,
}

impl ExpanderRow {
    fn new(label: String, cfgs: &[(usize, u32)]) -> Self {
        ExpanderRow {
            label,
            l_prime: cfgs.iter().map(|c| c.0).collect(),
            p: cfgs.iter().map(|c| c.1).collect(),
            n_vertices: None,
            degree: None,
            lambda2: None,
            gap: None,
            epsilon_lower: None,
            residual: None,
            runtime_ms: None,
            error: None,
        }
    }

    fn fill(&mut self, r: Result<SpectralReport>, started: Instant, timings: bool) {
        match r {
            Ok(s) => {
                self.n_vertices = Some(s.n_vertices);
                self.degree = Some(s.degree);
                self.lambda2 = Some(s.lambda2);
                self.gap = Some(s.gap);
                self.epsilon_lower = Some(s.epsilon_lower);
                self.residual = Some(s.residual);
            }
            Err(e) => self.error = Some(e.to_string()),
        }
        if timings {
            self.runtime_ms = Some(started.elapsed().as_millis() as u64);
        }
    }
}

fn gap_of(mg: &MarkedGroup, caps: &Caps) -> Result<SpectralReport> {
    spectral_gap(&cayley_graph(mg, caps)?, caps.seed)
}

/// One row per (l', p) and one per diagonal prefix of length ≥ 2, all with
/// the shared 4-generator marking. Rows fail independently.
pub fn expander_table(configs: &[(usize, u32)], caps: &Caps, timings: bool) -> Vec<ExpanderRow> {
    let markings: Vec<Result<MarkedGroup>> = configs
        .iter()
        .map(|&(l, p)| elementary_block_marking(l, p).map(|(m, _)| m))
        .collect();
    let mut rows = Vec::new();
    for (i, &(l, p)) in configs.iter().enumerate() {
        let started = Instant::now();
        let mut row = ExpanderRow::new(format!("SL({},{p})", 4 * l), &configs[i..=i]);
        let r = markings[i].clone().and_then(|m| gap_of(&m, caps));
        row.fill(r, started, timings);
        rows.push(row);
    }
    for n in 2..=configs.len() {
        let started = Instant::now();
        let mut row = ExpanderRow::new(format!("prefix {n}"), &configs[..n]);
        let r = markings[..n]
            .iter()
            .cloned()
            .collect::<Result<Vec<_>>>()
            .and_then(|ms| diagonal_product(&ms))
            .and_then(|d| gap_of(&d, caps));
        row.fill(r, started, timings);
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::std_groups::{cyclic, symmetric};

    #[test]
    fn cycle_eigenvalue() {
        let caps = Caps::default();
        for n in [4u64, 7, 12] {
            let r = gap_of(&cyclic(Some(n)).unwrap(), &caps).unwrap();
            assert!((r.lambda2 - (2.0 * std::f64::consts::PI / n as f64).cos()).abs() < 1e-9);
        }
        let r = gap_of(&cyclic(Some(2)).unwrap(), &caps).unwrap();
        assert!((r.lambda2 + 1.0).abs() < 1e-12);
        assert!((r.gap - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sym3_graph_is_regular_of_degree_four() {
        let g = cayley_graph(&symmetric(3).unwrap(), &Caps::default()).unwrap();
        assert_eq!((g.n, g.degree), (6, 4));
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let g = cayley_graph(&symmetric(6).unwrap(), &Caps::default()).unwrap();
        let d = spectral_gap_with(&g, EigenMethod::Dense, 1).unwrap();
        let l = spectral_gap_with(&g, EigenMethod::Lanczos, 1).unwrap();
        assert_eq!(l.method, EigenMethod::Lanczos);
        assert!(l.residual < 1e-9);
        assert!(
            (d.lambda2 - l.lambda2).abs() < 1e-9,
            "{} vs {}",
            d.lambda2,
            l.lambda2
        );
    }

    #[test]
    fn disconnected_has_zero_gap() {
        let g = CayleyGraph {
            n: 2,
            degree: 2,
            targets: vec![0, 0, 1, 1],
        };
        let r = spectral_gap(&g, 0).unwrap();
        assert_eq!((r.gap, r.components), (0.0, 2));
    }

    #[test]
    fn block_marking_has_determinant_one() {
        for (l, p) in [(1, 3), (2, 2), (2, 5)] {
            let (mg, cert) = elementary_block_marking(l, p).unwrap();
            for s in &mg.marking {
                assert_eq!(s.as_matrix().unwrap().det(p), 1);
            }
            assert_eq!(cert.len(), 4 * l * (4 * l - 1));
        }
    }
}
