//! 3-uniform hypergraphs and their line calculus.
//!
//! A hypergraph here is a vertex count `n` together with a set of unordered
//! vertex triples, its *hedges*. The line of a pair `(u, v)` is
//! `{u, v} ∪ {p : {u, v, p} is a hedge}`; lines are identified by their
//! member sets, so two pairs that generate the same set yield one line.
//!
//! On top of the line set sit the per-vertex trace maps: `alpha(x)` is every
//! line containing `x`, `beta(x)` is every line generated by a pair at `x`,
//! and the span of a vertex set is the union of its betas. These are the
//! working objects of the bound checkers in [`crate::proofkit`].

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::bits::Bits;

/// Index of a vertex, valid for `[0, n)` of the owning structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for VertexId {
    fn from(i: u32) -> Self {
        VertexId(i)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoreError {
    #[error("invalid pair ({u}, {v}) for a structure on {n} vertices")]
    InvalidPair { u: u32, v: u32, n: u32 },
    #[error("vertex {v} out of range for a structure on {n} vertices")]
    InvalidVertex { v: u32, n: u32 },
    #[error("hedge {{{a}, {b}, {c}}} is not a 3-subset of [0, {n})")]
    InvalidHedge { a: u32, b: u32, c: u32, n: u32 },
}

/// Third-point lookup for pairs. Dense single-word grid while the vertex set
/// fits in a machine word, sparse map beyond that.
#[derive(Clone, PartialEq, Eq)]
enum PairThirds {
    Dense(Vec<u64>),
    Sparse(HashMap<(u32, u32), Bits>),
}

/// A 3-uniform hypergraph: `n` vertices and a set of hedges.
///
/// Immutable after construction; every operation is a pure function of the
/// structure, so values can be shared freely across threads.
#[derive(Clone)]
pub struct Hypergraph3 {
    n: u32,
    hedges: Vec<[u32; 3]>,
    thirds: PairThirds,
}

impl Hypergraph3 {
    /// Builds a hypergraph from `n` and an iterator of vertex triples.
    ///
    /// Triples may come in any order and with repeats; they are normalized
    /// to ascending order and deduplicated. A triple with a repeated or
    /// out-of-range vertex is rejected.
    pub fn new(
        n: u32,
        hedges: impl IntoIterator<Item = [u32; 3]>,
    ) -> Result<Self, CoreError> {
        let mut norm: Vec<[u32; 3]> = Vec::new();
        for h in hedges {
            let mut t = h;
            t.sort_unstable();
            let [a, b, c] = t;
            if a == b || b == c || c >= n {
                return Err(CoreError::InvalidHedge {
                    a: h[0],
                    b: h[1],
                    c: h[2],
                    n,
                });
            }
            norm.push(t);
        }
        norm.sort_unstable();
        norm.dedup();

        let thirds = if n <= 64 {
            let nn = n as usize;
            let mut grid = vec![0u64; nn * nn];
            for &[a, b, c] in &norm {
                for (u, v, p) in [(a, b, c), (a, c, b), (b, c, a)] {
                    grid[u as usize * nn + v as usize] |= 1 << p;
                    grid[v as usize * nn + u as usize] |= 1 << p;
                }
            }
            PairThirds::Dense(grid)
        } else {
            let mut map: HashMap<(u32, u32), Bits> = HashMap::new();
            for &[a, b, c] in &norm {
                for (u, v, p) in [(a, b, c), (a, c, b), (b, c, a)] {
                    map.entry((u.min(v), u.max(v)))
                        .or_insert_with(|| Bits::empty(n as usize))
                        .insert(p as usize);
                }
            }
            PairThirds::Sparse(map)
        };

        Ok(Hypergraph3 {
            n,
            hedges: norm,
            thirds,
        })
    }

    /// Hypergraph with no hedges.
    pub fn empty(n: u32) -> Self {
        Hypergraph3::new(n, []).expect("no hedges to validate")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n).map(VertexId)
    }

    /// Hedges in ascending triple order.
    pub fn hedges(&self) -> &[[u32; 3]] {
        &self.hedges
    }

    pub fn has_hedge(&self, a: u32, b: u32, c: u32) -> bool {
        if a == b || b == c || a == c {
            return false;
        }
        match &self.thirds {
            PairThirds::Dense(grid) => {
                grid[a as usize * self.n as usize + b as usize] >> c & 1 == 1
            }
            PairThirds::Sparse(map) => map
                .get(&(a.min(b), a.max(b)))
                .is_some_and(|t| t.contains(c as usize)),
        }
    }

    fn third_points(&self, u: u32, v: u32) -> Bits {
        match &self.thirds {
            PairThirds::Dense(grid) => {
                Bits::Word(grid[u as usize * self.n as usize + v as usize])
            }
            PairThirds::Sparse(map) => map
                .get(&(u.min(v), u.max(v)))
                .cloned()
                .unwrap_or_else(|| Bits::empty(self.n as usize)),
        }
    }

    /// The line of a pair: `{u, v}` plus every third point forming a hedge
    /// with it. Symmetric in `u` and `v`.
    pub fn line_of_pair(&self, u: VertexId, v: VertexId) -> Result<Line, CoreError> {
        if u == v || u.0 >= self.n || v.0 >= self.n {
            return Err(CoreError::InvalidPair {
                u: u.0,
                v: v.0,
                n: self.n,
            });
        }
        let mut members = self.third_points(u.0, v.0);
        members.insert(u.index());
        members.insert(v.index());
        Ok(Line { members })
    }

    /// All distinct lines. Degenerate `n < 2` yields the empty set.
    pub fn all_lines(&self) -> LineSet {
        let mut lines = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                let line = self
                    .line_of_pair(VertexId(u), VertexId(v))
                    .expect("in-range pair");
                lines.push(line);
            }
        }
        LineSet::from_lines(lines)
    }

    /// Whether some line contains every vertex.
    pub fn has_universal_line(&self) -> bool {
        let n = self.n as usize;
        if self.n < 2 {
            return false;
        }
        for u in 0..self.n {
            for v in u + 1..self.n {
                let mut m = self.third_points(u, v);
                m.insert(u as usize);
                m.insert(v as usize);
                if m.len() == n {
                    return true;
                }
            }
        }
        false
    }

    /// `alpha(x)`: every distinct line containing `x`.
    pub fn alpha(&self, x: VertexId) -> Result<LineSet, CoreError> {
        if x.0 >= self.n {
            return Err(CoreError::InvalidVertex { v: x.0, n: self.n });
        }
        let lines = self
            .all_lines()
            .into_iter()
            .filter(|l| l.contains(x))
            .collect();
        Ok(LineSet::from_lines(lines))
    }

    /// `beta(x)`: the distinct lines of pairs at `x`. Always a subset of
    /// `alpha(x)`.
    pub fn beta(&self, x: VertexId) -> Result<LineSet, CoreError> {
        if x.0 >= self.n {
            return Err(CoreError::InvalidVertex { v: x.0, n: self.n });
        }
        let mut lines = Vec::new();
        for w in 0..self.n {
            if w != x.0 {
                lines.push(self.line_of_pair(x, VertexId(w)).expect("in-range pair"));
            }
        }
        Ok(LineSet::from_lines(lines))
    }

    /// Span of a vertex set: the union of `beta(x)` over its members.
    /// Empty input spans the empty line set.
    pub fn span(&self, s: &[VertexId]) -> LineSet {
        let mut lines = Vec::new();
        for &x in s {
            assert!(x.0 < self.n, "span: vertex {x} out of range");
            for w in 0..self.n {
                if w != x.0 {
                    lines.push(self.line_of_pair(x, VertexId(w)).expect("in-range pair"));
                }
            }
        }
        LineSet::from_lines(lines)
    }
}

impl PartialEq for Hypergraph3 {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.hedges == other.hedges
    }
}

impl Eq for Hypergraph3 {}

impl fmt::Debug for Hypergraph3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph3(n={}, hedges={:?})", self.n, self.hedges)
    }
}

/// A line, identified by its member set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    members: Bits,
}

impl Line {
    pub fn contains(&self, v: VertexId) -> bool {
        self.members.contains(v.index())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member vertices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.members.iter().map(|i| VertexId(i as u32))
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.members.iter().map(|i| i as u32).collect()
    }

    pub fn members(&self) -> &Bits {
        &self.members
    }

    pub fn from_vertices(members: impl IntoIterator<Item = VertexId>) -> Self {
        Line {
            members: members.into_iter().map(|v| v.index()).collect(),
        }
    }

    pub(crate) fn from_bits(members: Bits) -> Self {
        Line { members }
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Line{:?}", self.members)
    }
}

/// A deduplicated set of lines, kept in the canonical order (each line is an
/// ascending vertex list; lines sort lexicographically by those lists).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LineSet {
    lines: Vec<Line>,
}

impl LineSet {
    pub fn from_lines(mut lines: Vec<Line>) -> Self {
        lines.sort_unstable();
        lines.dedup();
        LineSet { lines }
    }

    /// `m`, the number of distinct lines.
    pub fn m(&self) -> usize {
        self.lines.len()
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Line> {
        self.lines.iter()
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn get(&self, i: usize) -> Option<&Line> {
        self.lines.get(i)
    }

    /// Position of a line in canonical order, if present.
    pub fn position(&self, line: &Line) -> Option<usize> {
        self.lines.binary_search(line).ok()
    }

    pub fn contains(&self, line: &Line) -> bool {
        self.position(line).is_some()
    }

    pub fn intersection(&self, other: &LineSet) -> LineSet {
        let lines = self
            .lines
            .iter()
            .filter(|l| other.contains(l))
            .cloned()
            .collect();
        LineSet { lines }
    }

    pub fn union(&self, other: &LineSet) -> LineSet {
        let mut lines = self.lines.clone();
        lines.extend(other.lines.iter().cloned());
        LineSet::from_lines(lines)
    }

    pub fn is_subset(&self, other: &LineSet) -> bool {
        self.lines.iter().all(|l| other.contains(l))
    }
}

impl IntoIterator for LineSet {
    type Item = Line;
    type IntoIter = std::vec::IntoIter<Line>;

    fn into_iter(self) -> Self::IntoIter {
        self.lines.into_iter()
    }
}

impl<'a> IntoIterator for &'a LineSet {
    type Item = &'a Line;
    type IntoIter = std::slice::Iter<'a, Line>;

    fn into_iter(self) -> Self::IntoIter {
        self.lines.iter()
    }
}

/// The two per-vertex line sets of one vertex, `beta(x) ⊆ alpha(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceMap {
    pub vertex: VertexId,
    pub alpha: LineSet,
    pub beta: LineSet,
}

impl TraceMap {
    pub fn new(h: &Hypergraph3, x: VertexId) -> Result<Self, CoreError> {
        Ok(TraceMap {
            vertex: x,
            alpha: h.alpha(x)?,
            beta: h.beta(x)?,
        })
    }

    /// Both maps restricted to a span `t`.
    pub fn restricted(&self, t: &LineSet) -> TraceMap {
        TraceMap {
            vertex: self.vertex,
            alpha: self.alpha.intersection(t),
            beta: self.beta.intersection(t),
        }
    }
}

/// Reference line engine: plain sets of sets, no bit tricks, reading only
/// the raw hedge list. Kept deliberately independent of the optimized path
/// so the two can be checked against each other.
pub mod naive {
    use std::collections::BTreeSet;

    use super::Hypergraph3;

    pub fn line_of_pair(h: &Hypergraph3, u: u32, v: u32) -> BTreeSet<u32> {
        let mut line: BTreeSet<u32> = [u, v].into_iter().collect();
        for &[a, b, c] in h.hedges() {
            let triple: BTreeSet<u32> = [a, b, c].into_iter().collect();
            if triple.contains(&u) && triple.contains(&v) {
                line.extend(triple);
            }
        }
        line
    }

    pub fn all_lines(h: &Hypergraph3) -> BTreeSet<BTreeSet<u32>> {
        let mut lines = BTreeSet::new();
        for u in 0..h.n() {
            for v in u + 1..h.n() {
                lines.insert(line_of_pair(h, u, v));
            }
        }
        lines
    }

    pub fn line_count(h: &Hypergraph3) -> usize {
        all_lines(h).len()
    }

    pub fn has_universal_line(h: &Hypergraph3) -> bool {
        all_lines(h).iter().any(|l| l.len() == h.n() as usize)
    }
}
