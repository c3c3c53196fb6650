//! Cayley diagrams: radius-R balls as rooted colored digraphs, their
//! isomorphism, agreement radii between marked groups, and induced markings.
//!
//! Edges run g -> s_j·g with color j. Balls are grown breadth-first over
//! s_j·g and s_j⁻¹·g; an edge belongs to the ball when both ends do.

use crate::error::{Error, Result};
use crate::groups::{Caps, Element, MarkedGroup};
use serde::{Serialize, Serializer};
use std::collections::{HashMap, VecDeque};

const NONE: u32 = u32::MAX;

fn display<S: Serializer>(e: &Element, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(e)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallVertex {
    pub dist: u32,
    #[serde(serialize_with = "display")]
    pub element: Element,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct BallEdge {
    pub src: u32,
    pub dst: u32,
    pub color: u32,
}

/// A ball in a Cayley diagram. Vertex 0 is the root; vertices are sorted by
/// (distance, element) so that equal balls serialize identically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootedBall {
    pub radius: u32,
    pub color_count: usize,
    pub vertices: Vec<BallVertex>,
    pub edges: Vec<BallEdge>,
}

/// Per-color adjacency of a rooted diagram.
struct Diagram<'a> {
    k: usize,
    dist: &'a [u32],
    out: &'a [u32],
    inn: &'a [u32],
    radius: u32,
}

impl Diagram<'_> {
    fn len(&self) -> usize {
        self.dist.iter().filter(|&&d| d <= self.radius).count()
    }

    fn neighbor(&self, v: u32, color: usize, forward: bool) -> Option<u32> {
        let t = if forward { self.out } else { self.inn }[v as usize * self.k + color];
        (t != NONE && self.dist[t as usize] <= self.radius).then_some(t)
    }
}

/// Why two balls are not isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    /// Distance from the root of the vertex where the diagrams diverge.
    pub distance: u32,
    pub color: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BallComparison {
    /// Vertex i of the first ball maps to `map[i]` of the second.
    Isomorphic {
        map: Vec<u32>,
    },
    Different(Mismatch),
}

impl BallComparison {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, BallComparison::Isomorphic { .. })
    }
}

fn match_diagrams(a: &Diagram, b: &Diagram) -> BallComparison {
    let n = a.dist.len();
    let mut fwd = vec![NONE; n];
    let mut back = vec![NONE; b.dist.len()];
    fwd[0] = 0;
    back[0] = 0;
    let mut queue = VecDeque::from([(0u32, 0u32)]);
    let mut matched = 1usize;
    while let Some((x, y)) = queue.pop_front() {
        for color in 0..a.k {
            for forward in [true, false] {
                let dir = if forward { "outgoing" } else { "incoming" };
                match (a.neighbor(x, color, forward), b.neighbor(y, color, forward)) {
                    (None, None) => {}
                    (Some(_), None) | (None, Some(_)) => {
                        return BallComparison::Different(Mismatch {
                            distance: a.dist[x as usize],
                            color,
                            reason: format!("{dir} edge present on one side only"),
                        })
                    }
                    (Some(s), Some(t)) => {
                        let (fs, bt) = (fwd[s as usize], back[t as usize]);
                        if fs == NONE && bt == NONE {
                            fwd[s as usize] = t;
                            back[t as usize] = s;
                            matched += 1;
                            queue.push_back((s, t));
                        } else if fs != t || bt != s {
                            return BallComparison::Different(Mismatch {
                                distance: a.dist[x as usize],
                                color,
                                reason: format!("{dir} edge closes a different cycle"),
                            });
                        }
                    }
                }
            }
        }
    }
    let (la, lb) = (a.len(), b.len());
    if matched != la || matched != lb {
        return BallComparison::Different(Mismatch {
            distance: a.radius,
            color: 0,
            reason: format!("vertex counts differ ({la} vs {lb})"),
        });
    }
    fwd.truncate(n);
    BallComparison::Isomorphic { map: fwd }
}

struct Adjacency {
    dist: Vec<u32>,
    out: Vec<u32>,
    inn: Vec<u32>,
}

impl RootedBall {
    fn adjacency(&self) -> Adjacency {
        let n = self.vertices.len();
        let k = self.color_count;
        let mut out = vec![NONE; n * k];
        let mut inn = vec![NONE; n * k];
        for e in &self.edges {
            out[e.src as usize * k + e.color as usize] = e.dst;
            inn[e.dst as usize * k + e.color as usize] = e.src;
        }
        Adjacency {
            dist: self.vertices.iter().map(|v| v.dist).collect(),
            out,
            inn,
        }
    }
}

/// Compares two balls. Radius or color-count mismatches are errors.
pub fn balls_isomorphic(a: &RootedBall, b: &RootedBall) -> Result<BallComparison> {
    if a.radius != b.radius {
        return Err(Error::RadiusMismatch(a.radius, b.radius));
    }
    if a.color_count != b.color_count {
        return Err(Error::ColorMismatch(a.color_count, b.color_count));
    }
    let (x, y) = (a.adjacency(), b.adjacency());
    let k = a.color_count;
    let da = Diagram {
        k,
        dist: &x.dist,
        out: &x.out,
        inn: &x.inn,
        radius: a.radius,
    };
    let db = Diagram {
        k,
        dist: &y.dist,
        out: &y.out,
        inn: &y.inn,
        radius: b.radius,
    };
    Ok(match_diagrams(&da, &db))
}

/// Breadth-first exploration of a Cayley diagram, one layer at a time.
struct Explorer<'a> {
    mg: &'a MarkedGroup,
    inverses: Vec<Element>,
    elements: Vec<Element>,
    index: HashMap<Element, u32>,
    adj: Adjacency,
    /// Layers 0..=expanded have all their edges recorded.
    expanded: Option<u32>,
    cap: usize,
}

impl<'a> Explorer<'a> {
    fn new(mg: &'a MarkedGroup, caps: &Caps) -> Result<Self> {
        let k = mg.k();
        let id = mg.group.identity();
        let inverses = mg
            .marking
            .iter()
            .map(|s| mg.group.inv(s))
            .collect::<Result<_>>()?;
        Ok(Explorer {
            mg,
            inverses,
            elements: vec![id.clone()],
            index: HashMap::from([(id, 0)]),
            adj: Adjacency {
                dist: vec![0],
                out: vec![NONE; k],
                inn: vec![NONE; k],
            },
            expanded: None,
            cap: caps.ball,
        })
    }

    fn add(&mut self, e: Element, dist: u32, insert: bool) -> Result<Option<u32>> {
        if let Some(&i) = self.index.get(&e) {
            return Ok(Some(i));
        }
        if !insert {
            return Ok(None);
        }
        if self.elements.len() >= self.cap {
            return Err(Error::ResourceExhausted {
                what: format!("ball in {}", self.mg.name),
                limit: self.cap,
            });
        }
        let i = self.elements.len() as u32;
        self.index.insert(e.clone(), i);
        self.elements.push(e);
        self.adj.dist.push(dist);
        let k = self.mg.k();
        self.adj.out.extend(std::iter::repeat(NONE).take(k));
        self.adj.inn.extend(std::iter::repeat(NONE).take(k));
        Ok(Some(i))
    }

    /// Records every edge at the next layer; with `insert`, also creates the
    /// layer beyond it.
    fn expand(&mut self, insert: bool) -> Result<()> {
        let r = self.expanded.map_or(0, |r| r + 1);
        let k = self.mg.k();
        let layer: Vec<u32> = (0..self.elements.len() as u32)
            .filter(|&v| self.adj.dist[v as usize] == r)
            .collect();
        for v in layer {
            for c in 0..k {
                let g = self.elements[v as usize].clone();
                let fwd = self.mg.group.mul(&self.mg.marking[c], &g)?;
                if let Some(t) = self.add(fwd, r + 1, insert)? {
                    self.adj.out[v as usize * k + c] = t;
                    self.adj.inn[t as usize * k + c] = v;
                }
                let bwd = self.mg.group.mul(&self.inverses[c], &g)?;
                if let Some(t) = self.add(bwd, r + 1, insert)? {
                    self.adj.out[t as usize * k + c] = v;
                    self.adj.inn[v as usize * k + c] = t;
                }
            }
        }
        self.expanded = Some(r);
        Ok(())
    }

    fn diagram(&self, radius: u32) -> Diagram<'_> {
        Diagram {
            k: self.mg.k(),
            dist: &self.adj.dist,
            out: &self.adj.out,
            inn: &self.adj.inn,
            radius,
        }
    }

    fn ball(&self, radius: u32) -> RootedBall {
        let k = self.mg.k();
        let mut order: Vec<u32> = (0..self.elements.len() as u32)
            .filter(|&v| self.adj.dist[v as usize] <= radius)
            .collect();
        order.sort_by(|&a, &b| {
            (self.adj.dist[a as usize], &self.elements[a as usize])
                .cmp(&(self.adj.dist[b as usize], &self.elements[b as usize]))
        });
        let mut pos = vec![NONE; self.elements.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let mut edges = Vec::new();
        for &v in &order {
            for c in 0..k {
                let t = self.adj.out[v as usize * k + c];
                if t != NONE && pos[t as usize] != NONE {
                    edges.push(BallEdge {
                        src: pos[v as usize],
                        dst: pos[t as usize],
                        color: c as u32,
                    });
                }
            }
        }
        edges.sort();
        RootedBall {
            radius,
            color_count: k,
            vertices: order
                .iter()
                .map(|&v| BallVertex {
                    dist: self.adj.dist[v as usize],
                    element: self.elements[v as usize].clone(),
                })
                .collect(),
            edges,
        }
    }
}

/// The ball of radius `radius` around the identity.
pub fn ball(mg: &MarkedGroup, radius: u32, caps: &Caps) -> Result<RootedBall> {
    let mut ex = Explorer::new(mg, caps)?;
    for r in 0..=radius {
        ex.expand(r < radius)?;
    }
    Ok(ex.ball(radius))
}

/// Largest radius at which two marked groups have isomorphic balls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgreementRadius {
    /// Even the radius-0 balls differ (a generator is trivial on one side only).
    Never,
    Exact(u32),
    AtLeast(u32),
}

impl AgreementRadius {
    /// A lower bound usable in comparisons; `Never` maps to -1.
    pub fn lower_bound(&self) -> i64 {
        match self {
            AgreementRadius::Never => -1,
            AgreementRadius::Exact(r) | AgreementRadius::AtLeast(r) => *r as i64,
        }
    }

    pub fn at_least(&self, r: u32) -> bool {
        self.lower_bound() >= r as i64
    }
}

impl std::fmt::Display for AgreementRadius {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AgreementRadius::Never => write!(f, "none"),
            AgreementRadius::Exact(r) => write!(f, "{r}"),
            AgreementRadius::AtLeast(r) => write!(f, "at least {r}"),
        }
    }
}

impl Serialize for AgreementRadius {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AgreementRadius::Exact(r) => s.serialize_u32(*r),
            other => s.collect_str(other),
        }
    }
}

/// Scans R = 0, 1, … until the balls differ or `rmax` is reached. Both
/// diagrams grow one layer per step, so the cost is that of the largest
/// ball actually needed.
pub fn agreement_radius(
    a: &MarkedGroup,
    b: &MarkedGroup,
    rmax: u32,
    caps: &Caps,
) -> Result<AgreementRadius> {
    if a.k() != b.k() {
        return Err(Error::ColorMismatch(a.k(), b.k()));
    }
    let mut xa = Explorer::new(a, caps)?;
    let mut xb = Explorer::new(b, caps)?;
    for r in 0..=rmax {
        let last = r == rmax;
        xa.expand(!last)?;
        xb.expand(!last)?;
        if !match_diagrams(&xa.diagram(r), &xb.diagram(r)).is_isomorphic() {
            return Ok(match r {
                0 => AgreementRadius::Never,
                r => AgreementRadius::Exact(r - 1),
            });
        }
    }
    Ok(AgreementRadius::AtLeast(rmax))
}

/// The marked subgroup generated by words in the marking, each word a list of
/// signed 1-based letters.
pub fn induce_marking(mg: &MarkedGroup, words: &[Vec<i64>]) -> Result<MarkedGroup> {
    let marking = words
        .iter()
        .map(|w| mg.eval_word(w))
        .collect::<Result<Vec<_>>>()?;
    MarkedGroup::new(mg.group.clone(), marking, format!("{} (induced)", mg.name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::std_groups::cyclic;

    #[test]
    fn cyclic_balls() {
        let caps = Caps::default();
        let z = cyclic(None).unwrap();
        let b = ball(&z, 2, &caps).unwrap();
        assert_eq!((b.vertices.len(), b.edges.len()), (5, 4));
        let z6 = ball(&cyclic(Some(6)).unwrap(), 2, &caps).unwrap();
        assert_eq!((z6.vertices.len(), z6.edges.len()), (5, 4));
        let z5 = ball(&cyclic(Some(5)).unwrap(), 2, &caps).unwrap();
        assert_eq!((z5.vertices.len(), z5.edges.len()), (5, 5));
        assert!(!balls_isomorphic(&b, &z5).unwrap().is_isomorphic());
        let z1 = ball(&z, 1, &caps).unwrap();
        let z51 = ball(&cyclic(Some(5)).unwrap(), 1, &caps).unwrap();
        assert!(balls_isomorphic(&z1, &z51).unwrap().is_isomorphic());
        assert_eq!(balls_isomorphic(&b, &z1), Err(Error::RadiusMismatch(2, 1)));
    }

    #[test]
    fn agreement_of_cyclic_groups() {
        let caps = Caps::default();
        let r =
            agreement_radius(&cyclic(Some(6)).unwrap(), &cyclic(None).unwrap(), 10, &caps).unwrap();
        assert_eq!(r, AgreementRadius::Exact(2));
        let z = cyclic(None).unwrap();
        assert_eq!(
            agreement_radius(&z, &z, 7, &caps).unwrap(),
            AgreementRadius::AtLeast(7)
        );
    }

    #[test]
    fn trivial_generator_disagrees_at_zero() {
        let caps = Caps::default();
        let r =
            agreement_radius(&cyclic(Some(1)).unwrap(), &cyclic(None).unwrap(), 3, &caps).unwrap();
        assert_eq!(r, AgreementRadius::Never);
    }
}
