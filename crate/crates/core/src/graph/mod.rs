//! Undirected simple graphs stored as dense adjacency bitrows.
//!
//! A [`Graph`] is immutable once built. Degrees and the edge count are cached
//! at construction, so every accessor is O(1) or a single pass over a row.

mod enumerate;
mod families;
mod graph6;

pub use enumerate::{
    enumerate_connected, enumerate_connected_range, pattern_count, ConnectedGraphs,
    MAX_ENUMERATION_ORDER,
};
pub use families::FamilySpec;
pub use graph6::{from_graph6, to_graph6, GRAPH6_MAX_ORDER};

use std::fmt;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph6: {kind} at byte {offset}")]
    Graph6 {
        offset: usize,
        kind: Graph6ErrorKind,
    },
    #[error("edge list line {line}: {message}")]
    EdgeList { line: usize, message: String },
    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("a graph needs at least one vertex")]
    Empty,
    #[error("invalid family parameters: {0}")]
    InvalidParameter(String),
    #[error("cannot parse family spec {spec:?}: {message}")]
    FamilySpec { spec: String, message: String },
    #[error("order {n} is outside the supported range {min}..={max}")]
    OrderOutOfRange { n: usize, min: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Graph6ErrorKind {
    MissingHeader,
    NonCanonicalHeader,
    OrderTooLarge,
    CharacterOutOfRange(u8),
    Truncated,
    TrailingData,
    NonZeroPadding,
}

impl fmt::Display for Graph6ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MissingHeader => f.write_str("missing size header"),
            Self::NonCanonicalHeader => f.write_str("non-canonical size header"),
            Self::OrderTooLarge => f.write_str("order exceeds the supported maximum"),
            Self::CharacterOutOfRange(b) => write!(f, "byte 0x{b:02x} outside 63..=126"),
            Self::Truncated => f.write_str("adjacency data truncated"),
            Self::TrailingData => f.write_str("unexpected trailing data"),
            Self::NonZeroPadding => f.write_str("padding bits are not zero"),
        }
    }
}

/// Undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    degrees: Vec<usize>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let words = n.div_ceil(WORD_BITS);
        Ok(Self {
            n,
            words,
            rows: vec![0; n * words],
            degrees: vec![0; n],
            m: 0,
        })
    }

    /// Builds a graph from an edge iterator. Duplicate edges collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n)?;
        for (u, v) in edges {
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    fn insert_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for vertex in [u, v] {
            if vertex >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u });
        }
        if !self.has_edge(u, v) {
            self.set_bit(u, v);
            self.set_bit(v, u);
            self.degrees[u] += 1;
            self.degrees[v] += 1;
            self.m += 1;
        }
        Ok(())
    }

    #[inline]
    fn set_bit(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / WORD_BITS] |= 1 << (v % WORD_BITS);
    }

    /// Parses the edge-list text format: the first token is `n`, then one
    /// `u v` pair per line. Blank lines are ignored.
    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (header_idx, header) = lines.next().ok_or(GraphError::EdgeList {
            line: 1,
            message: "missing vertex count".into(),
        })?;
        let n = parse_index(header.trim(), header_idx + 1)?;
        let mut g = Self::empty(n)?;
        for (idx, line) in lines {
            let line_no = idx + 1;
            let mut tokens = line.split_whitespace();
            let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
                return Err(GraphError::EdgeList {
                    line: line_no,
                    message: format!("expected two vertex indices, found {line:?}"),
                });
            };
            let u = parse_index(a, line_no)?;
            let v = parse_index(b, line_no)?;
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.degrees.iter().copied().min().unwrap_or(0)
    }

    pub fn is_regular(&self) -> bool {
        self.max_degree() == self.min_degree()
    }

    /// Average degree `2m/n`.
    pub fn average_degree(&self) -> f64 {
        2.0 * self.m as f64 / self.n as f64
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    /// Adjacency bitrow of `v`, `ceil(n/64)` words, bit `j % 64` of word
    /// `j / 64` set iff `v ~ j`.
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v)
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| BitIter {
                word,
                base: w * WORD_BITS,
            })
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Computes `out = A x`.
    pub fn adjacency_apply(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(out.len(), self.n);
        for (v, slot) in out.iter_mut().enumerate() {
            *slot = self.neighbors(v).map(|u| x[u]).sum();
        }
    }

    /// True iff a traversal from vertex 0 reaches every vertex.
    pub fn is_connected(&self) -> bool {
        self.component_of(0).len() == self.n
    }

    fn component_of(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        let mut out = Vec::new();
        seen[start] = true;
        while let Some(v) = stack.pop() {
            out.push(v);
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.n];
        let mut out = Vec::new();
        for v in 0..self.n {
            if !assigned[v] {
                let comp = self.component_of(v);
                for &u in &comp {
                    assigned[u] = true;
                }
                out.push(comp);
            }
        }
        out
    }

    /// Subgraph induced on `vertices`, relabelled `vertices[k] -> k`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Self, GraphError> {
        for &v in vertices {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v,
                    n: self.n,
                });
            }
        }
        let mut g = Self::empty(vertices.len())?;
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.insert_edge(a, b)?;
                }
            }
        }
        Ok(g)
    }

    /// Removes vertex `i`; the remaining vertices keep their relative order.
    pub fn delete_vertex(&self, i: usize) -> Result<Self, GraphError> {
        if i >= self.n {
            return Err(GraphError::VertexOutOfRange {
                vertex: i,
                n: self.n,
            });
        }
        if self.n == 1 {
            return Err(GraphError::Empty);
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| v != i).collect();
        self.induced_subgraph(&keep)
    }

    /// Relabels vertices: vertex `v` of `self` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self, GraphError> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n {
            return Err(GraphError::InvalidParameter(format!(
                "permutation of length {} for {} vertices",
                perm.len(),
                self.n
            )));
        }
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(GraphError::InvalidParameter("not a permutation".into()));
            }
        }
        Self::from_edges(self.n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Disjoint union; the vertices of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let shift = self.n;
        Self::from_edges(
            self.n + other.n,
            self.edges()
                .chain(other.edges().map(|(u, v)| (u + shift, v + shift))),
        )
        .expect("union of valid graphs is valid")
    }

    /// Vertices of degree `n - 1`.
    pub fn universal_vertices(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&v| self.degrees[v] == self.n - 1)
            .collect()
    }

    pub fn to_graph6(&self) -> String {
        to_graph6(self).expect("graph order within graph6 range")
    }

    // Generators.

    pub fn path(n: usize) -> Result<Self, GraphError> {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v)))
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::InvalidParameter(format!(
                "cycle needs n >= 3, got {n}"
            )));
        }
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    /// `K_{p,q}`; the part of size `p` is `0..p`.
    pub fn complete_bipartite(p: usize, q: usize) -> Result<Self, GraphError> {
        if p == 0 || q == 0 {
            return Err(GraphError::InvalidParameter(format!(
                "biclique parts must be non-empty, got ({p}, {q})"
            )));
        }
        Self::from_edges(p + q, (0..p).flat_map(|u| (p..p + q).map(move |v| (u, v))))
    }

    /// Clique on `0..q` plus pendant vertices `q..n`, all attached to vertex 0.
    pub fn pineapple(n: usize, q: usize) -> Result<Self, GraphError> {
        if q < 2 || q > n {
            return Err(GraphError::InvalidParameter(format!(
                "pineapple needs 2 <= q <= n, got n={n}, q={q}"
            )));
        }
        let clique = (0..q).flat_map(|u| (u + 1..q).map(move |v| (u, v)));
        Self::from_edges(n, clique.chain((q..n).map(|v| (0, v))))
    }

    /// `h ∨ K_1`: a new vertex 0 joined to every vertex of `h`, whose
    /// vertices shift up by one.
    pub fn cone(h: &Self) -> Self {
        let n = h.n + 1;
        let apex = (1..n).map(|v| (0, v));
        Self::from_edges(n, apex.chain(h.edges().map(|(u, v)| (u + 1, v + 1))))
            .expect("cone of a valid graph is valid")
    }

    /// The 3-harmonic graph `T_k`: a `k`-cycle on `0..k` with a triangle
    /// hung on each cycle vertex `i` through the pair `k+2i, k+2i+1`.
    pub fn harmonic_tk(k: usize) -> Result<Self, GraphError> {
        if k < 3 {
            return Err(GraphError::InvalidParameter(format!(
                "T_k needs k >= 3, got {k}"
            )));
        }
        let cycle = (0..k).map(|i| (i, (i + 1) % k));
        let triangles = (0..k).flat_map(|i| {
            let (a, b) = (k + 2 * i, k + 2 * i + 1);
            [(i, a), (i, b), (a, b)]
        });
        Self::from_edges(3 * k, cycle.chain(triangles))
    }
}

fn parse_index(token: &str, line: usize) -> Result<usize, GraphError> {
    token.parse().map_err(|_| GraphError::EdgeList {
        line,
        message: format!("unparsable token {token:?}"),
    })
}

struct BitIter {
    word: u64,
    base: usize,
}

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.word == 0 {
            return None;
        }
        let tz = self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        Some(self.base + tz)
    }
}
