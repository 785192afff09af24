//! Simple undirected graph with a bound-edge registry and per-vertex provenance.
//!
//! Edges live in an insertion-ordered hash set, which gives O(1) membership,
//! O(1) removal and uniform sampling by position. Degrees are kept as a dense
//! counter; adjacency lists are only materialised (as CSR) for traversals.

use std::fmt;

use indexmap::IndexSet;
use rayon::prelude::*;
use rustc_hash::FxBuildHasher;

pub(crate) type FxIndexSet<T> = IndexSet<T, FxBuildHasher>;

/// Dense vertex index, assigned in insertion order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unordered vertex pair stored with `lo < hi`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    lo: VertexId,
    hi: VertexId,
}

impl Edge {
    /// Returns `None` for a loop.
    pub fn new(u: VertexId, v: VertexId) -> Option<Edge> {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Some(Edge { lo: u, hi: v }),
            std::cmp::Ordering::Greater => Some(Edge { lo: v, hi: u }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn lo(&self) -> VertexId {
        self.lo
    }

    pub fn hi(&self) -> VertexId {
        self.hi
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.lo, self.hi)
    }
}

/// Where a vertex came from.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct VertexProvenance {
    /// Growth step that created the vertex; 0 for the initial graph.
    pub birth_step: u32,
    /// Whether the vertex was chosen as an end of the bound-edges created
    /// with it. Always true for initial vertices.
    pub is_bound_end: bool,
    /// Degree inside the seed copy it belongs to (or in the initial graph).
    pub seed_degree: u32,
    /// Index of the seed in the seed set, `None` for initial vertices.
    pub seed_index: Option<u32>,
}

impl VertexProvenance {
    pub fn initial(degree: u32) -> Self {
        VertexProvenance {
            birth_step: 0,
            is_bound_end: true,
            seed_degree: degree,
            seed_index: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("self-loop requested at vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {{{0}}} already present")]
    DuplicateEdge(Edge),
    #[error("edge {{{0}}} does not exist")]
    MissingEdge(Edge),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex id space exhausted")]
    TooManyVertices,
}

/// Shortest-path length, or `Infinite` when the graph is disconnected.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Distance {
    Finite(u32),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("infinite"),
        }
    }
}

/// Compressed adjacency for read-only traversals.
#[derive(Debug, Clone)]
pub struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// The evolving graph both growth algorithms mutate.
#[derive(Debug, Clone, Default)]
pub struct NetworkModel {
    edges: FxIndexSet<Edge>,
    bound: FxIndexSet<Edge>,
    degrees: Vec<u32>,
    provenance: Vec<VertexProvenance>,
    step: u32,
}

impl NetworkModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(vertices: usize, edges: usize) -> Self {
        NetworkModel {
            edges: FxIndexSet::with_capacity_and_hasher(edges, FxBuildHasher),
            bound: FxIndexSet::default(),
            degrees: Vec::with_capacity(vertices),
            provenance: Vec::with_capacity(vertices),
            step: 0,
        }
    }

    pub(crate) fn reserve(&mut self, vertices: usize, edges: usize, bound: usize) {
        self.degrees.reserve(vertices);
        self.provenance.reserve(vertices);
        self.edges.reserve(edges);
        self.bound.reserve(bound);
    }

    pub fn add_vertex(&mut self, provenance: VertexProvenance) -> Result<VertexId, GraphError> {
        let id = u32::try_from(self.degrees.len()).map_err(|_| GraphError::TooManyVertices)?;
        if id == u32::MAX {
            return Err(GraphError::TooManyVertices);
        }
        self.degrees.push(0);
        self.provenance.push(provenance);
        Ok(VertexId(id))
    }

    pub fn vertex_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn bound_count(&self) -> usize {
        self.bound.len()
    }

    /// Current growth step `t`.
    pub fn step(&self) -> u32 {
        self.step
    }

    pub(crate) fn set_step(&mut self, step: u32) {
        self.step = step;
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v.index() < self.degrees.len() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    fn edge_between(&self, u: VertexId, v: VertexId) -> Result<Edge, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Edge::new(u, v).ok_or(GraphError::SelfLoop(u))
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, bound: bool) -> Result<(), GraphError> {
        let e = self.edge_between(u, v)?;
        if !self.edges.insert(e) {
            return Err(GraphError::DuplicateEdge(e));
        }
        self.degrees[u.index()] += 1;
        self.degrees[v.index()] += 1;
        if bound {
            self.bound.insert(e);
        }
        Ok(())
    }

    /// Removes the edge and keeps both endpoints, even if they become isolated.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let e = self.edge_between(u, v)?;
        if !self.edges.swap_remove(&e) {
            return Err(GraphError::MissingEdge(e));
        }
        self.bound.swap_remove(&e);
        self.degrees[u.index()] -= 1;
        self.degrees[v.index()] -= 1;
        Ok(())
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        Edge::new(u, v).is_some_and(|e| self.edges.contains(&e))
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn is_bound(&self, e: &Edge) -> bool {
        self.bound.contains(e)
    }

    pub fn degree(&self, v: VertexId) -> Result<u32, GraphError> {
        self.check_vertex(v)?;
        Ok(self.degrees[v.index()])
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn provenance(&self, v: VertexId) -> Result<&VertexProvenance, GraphError> {
        self.check_vertex(v)?;
        Ok(&self.provenance[v.index()])
    }

    pub fn provenances(&self) -> &[VertexProvenance] {
        &self.provenance
    }

    /// Edges in storage order (stable for a given operation history).
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn bound_edges(&self) -> impl ExactSizeIterator<Item = &Edge> {
        self.bound.iter()
    }

    pub fn edge_at(&self, index: usize) -> Option<Edge> {
        self.edges.get_index(index).copied()
    }

    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self.edges.iter().copied().collect();
        out.sort_unstable();
        out
    }

    pub fn sorted_bound_edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self.bound.iter().copied().collect();
        out.sort_unstable();
        out
    }

    /// Strips bound status from every edge and returns the former bound-edges
    /// in canonical (sorted) order.
    pub(crate) fn take_bound_edges(&mut self) -> Vec<Edge> {
        let mut out: Vec<Edge> = std::mem::take(&mut self.bound).into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Number of bound-edges incident to each vertex.
    pub fn bound_incidence(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.vertex_count()];
        for e in &self.bound {
            out[e.lo.index()] += 1;
            out[e.hi.index()] += 1;
        }
        out
    }

    /// Full scan of the simple-graph and registry invariants.
    pub fn is_simple(&self) -> bool {
        let n = self.vertex_count();
        let mut deg = vec![0u32; n];
        for e in &self.edges {
            if e.lo >= e.hi || e.hi.index() >= n {
                return false;
            }
            deg[e.lo.index()] += 1;
            deg[e.hi.index()] += 1;
        }
        deg == self.degrees && self.bound.iter().all(|e| self.edges.contains(e))
    }

    /// True when every vertex and edge of `self` is present in `other`.
    pub fn is_subgraph_of(&self, other: &NetworkModel) -> bool {
        self.vertex_count() <= other.vertex_count()
            && self.edges.iter().all(|e| other.edges.contains(e))
    }

    pub fn csr(&self) -> Csr {
        let n = self.vertex_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for &d in &self.degrees {
            acc += d as usize;
            offsets.push(acc);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0u32; acc];
        for e in &self.edges {
            let (a, b) = (e.lo.index(), e.hi.index());
            targets[cursor[a]] = e.hi.0;
            cursor[a] += 1;
            targets[cursor[b]] = e.lo.0;
            cursor[b] += 1;
        }
        Csr { offsets, targets }
    }

    /// Exact diameter by breadth-first search from every vertex.
    ///
    /// Sources are processed 64 at a time with one bit lane per source. An
    /// empty or single-vertex graph has diameter 0.
    pub fn diameter(&self) -> Distance {
        let n = self.vertex_count();
        if n <= 1 {
            return Distance::Finite(0);
        }
        let csr = self.csr();
        let batches: Vec<usize> = (0..n).step_by(64).collect();
        batches
            .par_iter()
            .map(|&start| bfs_batch(&csr, start, (start + 64).min(n)))
            .reduce(|| Distance::Finite(0), Distance::max)
    }
}

/// Runs BFS from sources `start..end` simultaneously and returns the largest
/// eccentricity among them.
fn bfs_batch(csr: &Csr, start: usize, end: usize) -> Distance {
    let n = csr.vertex_count();
    let mut seen = vec![0u64; n];
    let mut frontier = vec![0u64; n];
    let mut next = vec![0u64; n];
    let mut active: Vec<u32> = Vec::with_capacity(end - start);
    for (lane, v) in (start..end).enumerate() {
        seen[v] = 1 << lane;
        frontier[v] = 1 << lane;
        active.push(v as u32);
    }
    let full: u64 = if end - start == 64 {
        u64::MAX
    } else {
        (1u64 << (end - start)) - 1
    };
    let mut level = 0u32;
    let mut touched: Vec<u32> = Vec::new();
    while !active.is_empty() {
        touched.clear();
        for &v in &active {
            let bits = frontier[v as usize];
            for &w in csr.neighbors(v as usize) {
                let w = w as usize;
                let fresh = bits & !seen[w] & !next[w];
                if fresh != 0 {
                    if next[w] == 0 {
                        touched.push(w as u32);
                    }
                    next[w] |= fresh;
                }
            }
            frontier[v as usize] = 0;
        }
        if touched.is_empty() {
            break;
        }
        level += 1;
        for &w in &touched {
            let w = w as usize;
            seen[w] |= next[w];
            frontier[w] = next[w];
            next[w] = 0;
        }
        std::mem::swap(&mut active, &mut touched);
    }
    if seen.iter().all(|&s| s & full == full) {
        Distance::Finite(level)
    } else {
        Distance::Infinite
    }
}
