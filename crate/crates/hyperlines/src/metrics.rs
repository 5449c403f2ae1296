//! Metric spaces, their betweenness hypergraphs, and instance generators.
//!
//! Distances are exact rationals and betweenness is exact equality:
//! `{a, b, c}` is a hedge of the betweenness hypergraph when some labeling
//! satisfies `dist(a,b) + dist(b,c) = dist(a,c)`. No floating tolerance is
//! involved anywhere, since a tolerance would silently change the line set.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bits::Bits;
use crate::hypergraph::{CoreError, Hypergraph3, Line, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("distance matrix must have {expected} entries, got {got}")]
    WrongShape { expected: usize, got: usize },
    #[error("dist({i},{i}) must be zero")]
    NonzeroDiagonal { i: u32 },
    #[error("dist({i},{j}) != dist({j},{i})")]
    Asymmetric { i: u32, j: u32 },
    #[error("dist({i},{j}) must be positive for distinct points")]
    NonpositiveDistance { i: u32, j: u32 },
    #[error("triangle inequality fails: dist({i},{k}) > dist({i},{j}) + dist({j},{k})")]
    TriangleViolation { i: u32, j: u32, k: u32 },
    #[error("graph is not connected: no path joins {u} and {v}")]
    NotConnected { u: u32, v: u32 },
    #[error("edge ({u},{v}) is not a valid simple edge on {n} vertices")]
    InvalidEdge { u: u32, v: u32, n: u32 },
    #[error("points {i} and {j} coincide, which would force a zero distance")]
    ZeroDistance { i: u32, j: u32 },
    #[error("family generation needs n >= 2, got {n}")]
    InvalidSize { n: u32 },
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// A finite metric space with exact rational distances.
#[derive(Clone, PartialEq, Eq)]
pub struct MetricSpace {
    n: u32,
    dist: Vec<BigRational>, // row-major n x n
}

impl MetricSpace {
    /// Builds and fully validates a metric space from a row-major matrix.
    pub fn new(n: u32, dist: Vec<BigRational>) -> Result<Self, MetricError> {
        let ms = MetricSpace::from_parts(n, dist)?;
        ms.validate()?;
        Ok(ms)
    }

    fn from_parts(n: u32, dist: Vec<BigRational>) -> Result<Self, MetricError> {
        let expected = (n as usize) * (n as usize);
        if dist.len() != expected {
            return Err(MetricError::WrongShape {
                expected,
                got: dist.len(),
            });
        }
        Ok(MetricSpace { n, dist })
    }

    /// Construction path for sources that are metrics by construction
    /// (shortest-path distances, L1 distances, {1,2}-matrices). Skips the
    /// cubic triangle sweep; `validate` can always re-check.
    pub(crate) fn from_validated(n: u32, dist: Vec<BigRational>) -> Self {
        MetricSpace::from_parts(n, dist).expect("caller supplies a full matrix")
    }

    /// Re-checks every invariant: zero diagonal, symmetry, positivity, and
    /// the triangle inequality over all ordered triples.
    pub fn validate(&self) -> Result<(), MetricError> {
        let n = self.n;
        for i in 0..n {
            if !self.dist(i, i).is_zero() {
                return Err(MetricError::NonzeroDiagonal { i });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.dist(i, j) != self.dist(j, i) {
                    return Err(MetricError::Asymmetric { i, j });
                }
                if !self.dist(i, j).is_positive() {
                    return Err(MetricError::NonpositiveDistance { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.dist(i, k) > &(self.dist(i, j) + self.dist(j, k)) {
                        return Err(MetricError::TriangleViolation { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dist(&self, i: u32, j: u32) -> &BigRational {
        &self.dist[i as usize * self.n as usize + j as usize]
    }

    fn between(&self, a: u32, b: u32, c: u32) -> bool {
        self.dist(a, b) + self.dist(b, c) == *self.dist(a, c)
    }

    /// The betweenness hypergraph: `{a,b,c}` is a hedge exactly when one of
    /// the three points lies between the other two.
    pub fn betweenness_hypergraph(&self) -> Hypergraph3 {
        let mut hedges = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                for c in b + 1..self.n {
                    if self.between(a, b, c) || self.between(b, a, c) || self.between(a, c, b) {
                        hedges.push([a, b, c]);
                    }
                }
            }
        }
        Hypergraph3::new(self.n, hedges).expect("triples are in range by construction")
    }

    /// The line of `(u, v)` straight from the three betweenness clauses.
    ///
    /// Equal to `betweenness_hypergraph().line_of_pair(u, v)` by definition;
    /// the two routes are kept separate so they can check each other.
    pub fn metric_line(&self, u: VertexId, v: VertexId) -> Result<Line, MetricError> {
        if u == v || u.0 >= self.n || v.0 >= self.n {
            return Err(CoreError::InvalidPair {
                u: u.0,
                v: v.0,
                n: self.n,
            }
            .into());
        }
        let mut members = Bits::empty(self.n as usize);
        members.insert(u.index());
        members.insert(v.index());
        for p in 0..self.n {
            if p == u.0 || p == v.0 {
                continue;
            }
            if self.between(p, u.0, v.0) || self.between(u.0, p, v.0) || self.between(u.0, v.0, p)
            {
                members.insert(p as usize);
            }
        }
        Ok(Line::from_bits(members))
    }
}

impl fmt::Debug for MetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MetricSpace(n={})", self.n)
    }
}

/// A simple undirected graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    n: u32,
    edges: Vec<(u32, u32)>,
    adj: Vec<Bits>,
}

impl Graph {
    pub fn new(n: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, MetricError> {
        let mut norm: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(MetricError::InvalidEdge { u, v, n });
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();
        let mut adj = vec![Bits::empty(n as usize); n as usize];
        for &(u, v) in &norm {
            adj[u as usize].insert(v as usize);
            adj[v as usize].insert(u as usize);
        }
        Ok(Graph {
            n,
            edges: norm,
            adj,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: u32) -> &Bits {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        u != v && self.adj[u as usize].contains(v as usize)
    }

    /// BFS distances from `src`; `None` marks unreachable vertices.
    fn bfs(&self, src: u32) -> Vec<Option<u64>> {
        let mut dist = vec![None; self.n as usize];
        dist[src as usize] = Some(0);
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize].expect("queued vertices have distances");
            for w in self.adj[u as usize].iter() {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w as u32);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.bfs(0).iter().all(|d| d.is_some())
    }

    /// Two-colorability check.
    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![None; self.n as usize];
        for start in 0..self.n as usize {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].expect("queued vertices are colored");
                for w in self.adj[u].iter() {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// Shortest-path metric of a connected graph; integer entries.
    pub fn metric(&self) -> Result<MetricSpace, MetricError> {
        let n = self.n as usize;
        let mut dist = vec![BigRational::zero(); n * n];
        for src in 0..self.n {
            let row = self.bfs(src);
            for (v, d) in row.into_iter().enumerate() {
                match d {
                    Some(d) => {
                        dist[src as usize * n + v] = BigRational::from_integer(BigInt::from(d));
                    }
                    None => {
                        return Err(MetricError::NotConnected { u: src, v: v as u32 });
                    }
                }
            }
        }
        Ok(MetricSpace::from_validated(self.n, dist))
    }
}

/// Shortest-path metric of a connected graph.
pub fn graph_metric(g: &Graph) -> Result<MetricSpace, MetricError> {
    g.metric()
}

/// An L1 point set together with its metric.
#[derive(Clone, Debug)]
pub struct L1Metric {
    pub space: MetricSpace,
    /// True when no two points share an x- or y-coordinate.
    pub general_position: bool,
}

/// Taxicab metric over integer plane points. Points must be pairwise
/// distinct, otherwise a zero off-diagonal distance would arise.
pub fn l1_metric(points: &[(i64, i64)]) -> Result<L1Metric, MetricError> {
    let n = points.len() as u32;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(MetricError::ZeroDistance {
                    i: i as u32,
                    j: j as u32,
                });
            }
        }
    }
    let mut general_position = true;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].0 == points[j].0 || points[i].1 == points[j].1 {
                general_position = false;
            }
        }
    }
    let nn = points.len();
    let mut dist = vec![BigRational::zero(); nn * nn];
    for i in 0..nn {
        for j in 0..nn {
            let d = (points[i].0 - points[j].0).abs() + (points[i].1 - points[j].1).abs();
            dist[i * nn + j] = BigRational::from_integer(BigInt::from(d));
        }
    }
    Ok(L1Metric {
        space: MetricSpace::from_validated(n, dist),
        general_position,
    })
}

/// Brute-force induced-cycle scan: true when no vertex subset of size >= 4
/// induces a cycle. Exponential in `n`; intended for desk-scale checks, and
/// kept independent of the simplicial-attachment generator so each can
/// catch the other out.
pub fn is_chordal_by_scan(g: &Graph) -> bool {
    let n = g.n() as usize;
    assert!(n <= 24, "induced-cycle scan is exponential; n must stay small");
    for subset in 0u32..(1 << n) {
        let size = subset.count_ones();
        if size < 4 {
            continue;
        }
        // induced subgraph is a cycle iff it is 2-regular and connected
        let verts: Vec<usize> = (0..n).filter(|&v| subset >> v & 1 == 1).collect();
        let degree_ok = verts.iter().all(|&v| {
            verts
                .iter()
                .filter(|&&w| w != v && g.has_edge(v as u32, w as u32))
                .count()
                == 2
        });
        if !degree_ok {
            continue;
        }
        // connectivity within the subset
        let mut seen = vec![false; n];
        let mut stack = vec![verts[0]];
        seen[verts[0]] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in &verts {
                if !seen[w] && g.has_edge(v as u32, w as u32) {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        if reached == verts.len() {
            return false;
        }
    }
    true
}

/// Instance families named after what they generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Bipartite,
    Chordal,
    OneTwoMetric,
    RandomGraph,
    RandomHypergraph,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generated {
    Graph(Graph),
    Metric(MetricSpace),
    Hypergraph(Hypergraph3),
}

/// Deterministic generator: fixed `(family, n, seed)` always yields the same
/// object. Bipartite and chordal outputs are connected; one-two matrices are
/// metrics automatically.
pub fn gen_family(family: Family, n: u32, seed: u64) -> Result<Generated, MetricError> {
    if n < 2 {
        return Err(MetricError::InvalidSize { n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        Family::Bipartite => Ok(Generated::Graph(gen_bipartite(n, &mut rng))),
        Family::Chordal => Ok(Generated::Graph(gen_chordal(n, &mut rng))),
        Family::OneTwoMetric => Ok(Generated::Metric(gen_one_two(n, &mut rng))),
        Family::RandomGraph => Ok(Generated::Graph(gen_connected_graph(n, &mut rng))),
        Family::RandomHypergraph => Ok(Generated::Hypergraph(gen_hypergraph(n, &mut rng, 0.5))),
    }
}

fn gen_bipartite(n: u32, rng: &mut ChaCha8Rng) -> Graph {
    let mut labels: Vec<u32> = (0..n).collect();
    labels.shuffle(rng);
    let a = rng.gen_range(1..n) as usize;
    let (left, right) = labels.split_at(a);

    let mut edges = Vec::new();
    for &u in left {
        for &v in right {
            if rng.gen_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    // stitch components together with cross edges only
    let mut comp: Vec<u32> = (0..n).collect();
    fn find(comp: &mut [u32], x: u32) -> u32 {
        let mut r = x;
        while comp[r as usize] != r {
            r = comp[r as usize];
        }
        let mut c = x;
        while comp[c as usize] != c {
            let next = comp[c as usize];
            comp[c as usize] = r;
            c = next;
        }
        r
    }
    for &(u, v) in &edges {
        let (ru, rv) = (find(&mut comp, u), find(&mut comp, v));
        if ru != rv {
            comp[ru as usize] = rv;
        }
    }
    loop {
        let roots: Vec<u32> = (0..n).filter(|&v| find(&mut comp, v) == v).collect();
        if roots.len() <= 1 {
            break;
        }
        // connect the component of `w` to the component of a vertex on the
        // other side of the bipartition
        let w = roots[rng.gen_range(0..roots.len())];
        let w_left = left.contains(&w);
        let others: Vec<u32> = if w_left {
            right
                .iter()
                .copied()
                .filter(|&v| find(&mut comp, v) != find(&mut comp, w))
                .collect()
        } else {
            left.iter()
                .copied()
                .filter(|&v| find(&mut comp, v) != find(&mut comp, w))
                .collect()
        };
        let v = if others.is_empty() {
            // the other side lives entirely in w's component; link any
            // same-side root through an opposite-side vertex
            let opp = if w_left { right } else { left };
            opp[rng.gen_range(0..opp.len())]
        } else {
            others[rng.gen_range(0..others.len())]
        };
        edges.push((w.min(v), w.max(v)));
        let (ru, rv) = (find(&mut comp, w), find(&mut comp, v));
        if ru != rv {
            comp[ru as usize] = rv;
        }
    }
    Graph::new(n, edges).expect("generated edges are valid")
}

fn gen_chordal(n: u32, rng: &mut ChaCha8Rng) -> Graph {
    // iterated simplicial-vertex attachment: each new vertex is glued onto a
    // nonempty subset of an existing clique, so the reverse insertion order
    // is a perfect elimination ordering
    let mut edges = Vec::new();
    let mut cliques: Vec<Vec<u32>> = vec![vec![0]];
    for v in 1..n {
        let base = cliques[rng.gen_range(0..cliques.len())].clone();
        let mut attach: Vec<u32> = base
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        if attach.is_empty() {
            attach.push(base[rng.gen_range(0..base.len())]);
        }
        for &u in &attach {
            edges.push((u.min(v), u.max(v)));
        }
        attach.push(v);
        cliques.push(attach);
    }
    Graph::new(n, edges).expect("generated edges are valid")
}

fn gen_one_two(n: u32, rng: &mut ChaCha8Rng) -> MetricSpace {
    let nn = n as usize;
    let mut dist = vec![BigRational::zero(); nn * nn];
    for i in 0..nn {
        for j in i + 1..nn {
            let d = if rng.gen_bool(0.5) {
                BigRational::one()
            } else {
                BigRational::from_integer(BigInt::from(2))
            };
            dist[i * nn + j] = d.clone();
            dist[j * nn + i] = d;
        }
    }
    MetricSpace::from_validated(n, dist)
}

fn gen_connected_graph(n: u32, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.5) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, edges).expect("generated edges are valid");
        if g.is_connected() {
            return g;
        }
    }
}

pub(crate) fn gen_hypergraph(n: u32, rng: &mut ChaCha8Rng, p: f64) -> Hypergraph3 {
    let mut hedges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if rng.gen_bool(p) {
                    hedges.push([a, b, c]);
                }
            }
        }
    }
    Hypergraph3::new(n, hedges).expect("generated hedges are valid")
}
