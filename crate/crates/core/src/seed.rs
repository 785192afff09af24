//! Seed graphs (motifs attached to every bound-edge) and bound-vertex selection.

use std::collections::BTreeSet;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeedError {
    #[error("{0}: m_v must be at least 1")]
    Empty(String),
    #[error("{name}: edge [{u}, {v}] references a vertex outside [0, {m_v})")]
    OutOfRange { name: String, u: u32, v: u32, m_v: u32 },
    #[error("{name}: self-loop at vertex {v}")]
    SelfLoop { name: String, v: u32 },
    #[error("{name}: duplicate edge [{u}, {v}]")]
    DuplicateEdge { name: String, u: u32, v: u32 },
    #[error("{0}: graph is disconnected")]
    Disconnected(String),
    #[error("{0}: bound_order is not a permutation of the vertex indices")]
    BadBoundOrder(String),
    #[error("{name}: m_v = {m_v} is smaller than the bound thickness r = {r}")]
    TooSmall { name: String, m_v: u32, r: u32 },
    #[error("bound thickness r must be at least 1")]
    ZeroThickness,
    #[error("seed set is empty")]
    NoSeeds,
    #[error("malformed seed document: {0}")]
    Parse(String),
    #[error("unknown {kind} '{value}'")]
    UnknownPolicy { kind: &'static str, value: String },
}

/// On-disk schema shared by the initial graph and every seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub m_v: u32,
    #[serde(default)]
    pub edges: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_order: Option<Vec<u32>>,
}

/// A finite connected simple graph on vertices `0..m_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedGraph {
    m_v: u32,
    edges: Vec<(u32, u32)>,
    bound_order: Vec<u32>,
    degrees: Vec<u32>,
}

impl SeedGraph {
    /// Validates and builds a seed. `name` only labels error messages.
    pub fn new(
        name: &str,
        m_v: u32,
        edges: &[(u32, u32)],
        bound_order: Option<Vec<u32>>,
    ) -> Result<SeedGraph, SeedError> {
        let name = name.to_owned();
        if m_v == 0 {
            return Err(SeedError::Empty(name));
        }
        let mut seen = BTreeSet::new();
        let mut canonical = Vec::with_capacity(edges.len());
        let mut degrees = vec![0u32; m_v as usize];
        for &(u, v) in edges {
            if u >= m_v || v >= m_v {
                return Err(SeedError::OutOfRange { name, u, v, m_v });
            }
            if u == v {
                return Err(SeedError::SelfLoop { name, v: u });
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(SeedError::DuplicateEdge { name, u, v });
            }
            degrees[u as usize] += 1;
            degrees[v as usize] += 1;
            canonical.push(key);
        }
        if !connected(m_v, &canonical) {
            return Err(SeedError::Disconnected(name));
        }
        let bound_order = match bound_order {
            Some(order) => {
                let mut check = order.clone();
                check.sort_unstable();
                if check != (0..m_v).collect::<Vec<_>>() {
                    return Err(SeedError::BadBoundOrder(name));
                }
                order
            }
            None => (0..m_v).collect(),
        };
        Ok(SeedGraph {
            m_v,
            edges: canonical,
            bound_order,
            degrees,
        })
    }

    pub fn from_doc(name: &str, doc: &GraphDoc) -> Result<SeedGraph, SeedError> {
        let edges: Vec<(u32, u32)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
        SeedGraph::new(name, doc.m_v, &edges, doc.bound_order.clone())
    }

    pub fn to_doc(&self) -> GraphDoc {
        let identity: Vec<u32> = (0..self.m_v).collect();
        GraphDoc {
            m_v: self.m_v,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            bound_order: (self.bound_order != identity).then(|| self.bound_order.clone()),
        }
    }

    /// Path on `n` vertices.
    pub fn path(n: u32) -> SeedGraph {
        let edges: Vec<(u32, u32)> = (1..n).map(|i| (i - 1, i)).collect();
        SeedGraph::new("path", n, &edges, None).expect("paths are valid seeds")
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: u32) -> SeedGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        SeedGraph::new("complete", n, &edges, None).expect("complete graphs are valid seeds")
    }

    pub fn m_v(&self) -> u32 {
        self.m_v
    }

    pub fn m_e(&self) -> u32 {
        self.edges.len() as u32
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn bound_order(&self) -> &[u32] {
        &self.bound_order
    }

    pub fn degree(&self, v: u32) -> u32 {
        self.degrees[v as usize]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Vertices sorted by descending degree, ties broken by index.
    pub fn by_descending_degree(&self) -> Vec<u32> {
        let mut order: Vec<u32> = (0..self.m_v).collect();
        order.sort_by(|&a, &b| self.degrees[b as usize].cmp(&self.degrees[a as usize]).then(a.cmp(&b)));
        order
    }

    /// Sum of the `r` largest vertex degrees.
    pub fn top_degree_sum(&self, r: u32) -> u32 {
        self.by_descending_degree()
            .iter()
            .take(r as usize)
            .map(|&v| self.degrees[v as usize])
            .sum()
    }

    /// Largest shortest-path distance within the seed.
    pub fn diameter(&self) -> u32 {
        let n = self.m_v as usize;
        let adj = adjacency(self.m_v, &self.edges);
        let mut best = 0;
        for s in 0..n {
            let mut dist = vec![u32::MAX; n];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if dist[w] == u32::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            best = best.max(dist.into_iter().max().unwrap_or(0));
        }
        best
    }
}

fn adjacency(m_v: u32, edges: &[(u32, u32)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); m_v as usize];
    for &(u, v) in edges {
        adj[u as usize].push(v as usize);
        adj[v as usize].push(u as usize);
    }
    adj
}

fn connected(m_v: u32, edges: &[(u32, u32)]) -> bool {
    let adj = adjacency(m_v, edges);
    let mut seen = vec![false; m_v as usize];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == m_v as usize
}

/// How the `r` bound-ends are picked inside each seed copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionPolicy {
    /// First `r` entries of the seed's `bound_order`.
    ByBoundOrder,
    /// The `r` highest-degree seed vertices, ties broken by index.
    ByDescendingDegree,
    /// `r` distinct vertices drawn uniformly per copy.
    UniformRandom,
}

impl SelectionPolicy {
    pub fn is_deterministic(self) -> bool {
        !matches!(self, SelectionPolicy::UniformRandom)
    }

    pub fn name(self) -> &'static str {
        match self {
            SelectionPolicy::ByBoundOrder => "by_bound_order",
            SelectionPolicy::ByDescendingDegree => "by_descending_degree",
            SelectionPolicy::UniformRandom => "uniform_random",
        }
    }
}

impl FromStr for SelectionPolicy {
    type Err = SeedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "by_bound_order" => Ok(SelectionPolicy::ByBoundOrder),
            "by_descending_degree" => Ok(SelectionPolicy::ByDescendingDegree),
            "uniform_random" => Ok(SelectionPolicy::UniformRandom),
            other => Err(SeedError::UnknownPolicy {
                kind: "selection policy",
                value: other.to_owned(),
            }),
        }
    }
}

/// Which seed of the set is attached to a given bound-edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssignmentPolicy {
    /// Cycles through the seeds over bound-edges in canonical order.
    #[default]
    RoundRobin,
    UniformRandom,
}

impl AssignmentPolicy {
    pub fn name(self) -> &'static str {
        match self {
            AssignmentPolicy::RoundRobin => "round_robin",
            AssignmentPolicy::UniformRandom => "uniform_random",
        }
    }
}

impl FromStr for AssignmentPolicy {
    type Err = SeedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "round_robin" => Ok(AssignmentPolicy::RoundRobin),
            "uniform_random" => Ok(AssignmentPolicy::UniformRandom),
            other => Err(SeedError::UnknownPolicy {
                kind: "assignment policy",
                value: other.to_owned(),
            }),
        }
    }
}

/// Picks `r` distinct bound-end indices from `seed`.
pub fn select_bound_vertices<R: Rng + ?Sized>(
    seed: &SeedGraph,
    r: u32,
    policy: SelectionPolicy,
    rng: &mut R,
) -> Result<Vec<u32>, SeedError> {
    if r == 0 {
        return Err(SeedError::ZeroThickness);
    }
    if r > seed.m_v {
        return Err(SeedError::TooSmall {
            name: "seed".into(),
            m_v: seed.m_v,
            r,
        });
    }
    let picked = match policy {
        SelectionPolicy::ByBoundOrder => seed.bound_order[..r as usize].to_vec(),
        SelectionPolicy::ByDescendingDegree => {
            let mut order = seed.by_descending_degree();
            order.truncate(r as usize);
            order
        }
        SelectionPolicy::UniformRandom => rand::seq::index::sample(rng, seed.m_v as usize, r as usize)
            .into_iter()
            .map(|i| i as u32)
            .collect(),
    };
    Ok(picked)
}

/// The non-empty set of seeds plus the per-bound-edge assignment rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSet {
    seeds: Vec<SeedGraph>,
    assignment: AssignmentPolicy,
}

impl SeedSet {
    pub fn new(seeds: Vec<SeedGraph>, assignment: AssignmentPolicy, r: u32) -> Result<SeedSet, SeedError> {
        if r == 0 {
            return Err(SeedError::ZeroThickness);
        }
        if seeds.is_empty() {
            return Err(SeedError::NoSeeds);
        }
        for (i, s) in seeds.iter().enumerate() {
            if s.m_v < r {
                return Err(SeedError::TooSmall {
                    name: format!("seeds[{i}]"),
                    m_v: s.m_v,
                    r,
                });
            }
        }
        Ok(SeedSet { seeds, assignment })
    }

    pub fn single(seed: SeedGraph, r: u32) -> Result<SeedSet, SeedError> {
        SeedSet::new(vec![seed], AssignmentPolicy::RoundRobin, r)
    }

    pub fn seeds(&self) -> &[SeedGraph] {
        &self.seeds
    }

    pub fn assignment(&self) -> AssignmentPolicy {
        self.assignment
    }

    /// `(m_v, m_e)` shared by every seed, or `None` for heterogeneous sets.
    /// Closed-form verification needs a shared shape.
    pub fn uniform_shape(&self) -> Option<(u32, u32)> {
        let first = (self.seeds[0].m_v(), self.seeds[0].m_e());
        self.seeds
            .iter()
            .all(|s| (s.m_v(), s.m_e()) == first)
            .then_some(first)
    }
}

#[derive(Deserialize)]
struct SeedsOnly {
    seeds: Vec<GraphDoc>,
    #[serde(default)]
    assignment_policy: Option<String>,
}

/// Reads the `seeds` array (and optional `assignment_policy`) of a TOML
/// seed document and validates every seed against thickness `r`.
pub fn load_seed_set(source: &str, r: u32) -> Result<SeedSet, SeedError> {
    let doc: SeedsOnly = toml::from_str(source).map_err(|e| SeedError::Parse(e.to_string()))?;
    let assignment = doc
        .assignment_policy
        .as_deref()
        .map(AssignmentPolicy::from_str)
        .transpose()?
        .unwrap_or_default();
    let seeds = doc
        .seeds
        .iter()
        .enumerate()
        .map(|(i, d)| SeedGraph::from_doc(&format!("seeds[{i}]"), d))
        .collect::<Result<Vec<_>, _>>()?;
    SeedSet::new(seeds, assignment, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn loads_path_seed() {
        let set = load_seed_set("[[seeds]]\nm_v = 4\nedges = [[0,1],[1,2],[2,3]]\n", 2).unwrap();
        let s = &set.seeds()[0];
        assert_eq!((s.m_v(), s.m_e()), (4, 3));
        assert_eq!(s.bound_order(), &[0, 1, 2, 3]);
    }

    #[test]
    fn single_vertex_seed_is_valid() {
        let set = load_seed_set("[[seeds]]\nm_v = 1\nedges = []\n", 1).unwrap();
        assert_eq!((set.seeds()[0].m_v(), set.seeds()[0].m_e()), (1, 0));
    }

    #[test]
    fn load_errors() {
        let disconnected = "[[seeds]]\nm_v = 4\nedges = [[0,1],[2,3]]\n";
        assert!(matches!(load_seed_set(disconnected, 1), Err(SeedError::Disconnected(_))));
        let dup = "[[seeds]]\nm_v = 3\nedges = [[0,1],[1,0],[1,2]]\n";
        assert!(matches!(load_seed_set(dup, 1), Err(SeedError::DuplicateEdge { .. })));
        let order = "[[seeds]]\nm_v = 3\nedges = [[0,1],[1,2]]\nbound_order = [0,0,2]\n";
        assert!(matches!(load_seed_set(order, 1), Err(SeedError::BadBoundOrder(_))));
        let small = "[[seeds]]\nm_v = 2\nedges = [[0,1]]\n";
        assert!(matches!(load_seed_set(small, 3), Err(SeedError::TooSmall { .. })));
        assert!(matches!(load_seed_set("seeds = 3", 1), Err(SeedError::Parse(_))));
    }

    #[test]
    fn descending_degree_on_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = SeedGraph::path(4);
        let picked = select_bound_vertices(&p, 2, SelectionPolicy::ByDescendingDegree, &mut rng).unwrap();
        assert_eq!(picked, vec![1, 2]);
        assert_eq!(p.top_degree_sum(2), 4);
    }

    #[test]
    fn r_equal_m_v_selects_everything() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = SeedGraph::path(4);
        for policy in [
            SelectionPolicy::ByBoundOrder,
            SelectionPolicy::ByDescendingDegree,
            SelectionPolicy::UniformRandom,
        ] {
            let mut got = select_bound_vertices(&p, 4, policy, &mut rng).unwrap();
            got.sort_unstable();
            assert_eq!(got, vec![0, 1, 2, 3]);
        }
        assert!(select_bound_vertices(&p, 5, SelectionPolicy::ByBoundOrder, &mut rng).is_err());
    }

    #[test]
    fn uniform_selection_is_reproducible() {
        let p = SeedGraph::path(4);
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..8)
                .map(|_| select_bound_vertices(&p, 2, SelectionPolicy::UniformRandom, &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(11), draw(11));
    }

    #[test]
    fn bound_order_policy_uses_custom_order() {
        let s = SeedGraph::new("s", 3, &[(0, 1), (1, 2)], Some(vec![2, 0, 1])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            select_bound_vertices(&s, 2, SelectionPolicy::ByBoundOrder, &mut rng).unwrap(),
            vec![2, 0]
        );
    }

    #[test]
    fn heterogeneous_sets_have_no_shape() {
        let set = SeedSet::new(
            vec![SeedGraph::path(4), SeedGraph::complete(3)],
            AssignmentPolicy::RoundRobin,
            2,
        )
        .unwrap();
        assert_eq!(set.uniform_shape(), None);
        let twin = SeedSet::new(
            vec![SeedGraph::path(4), SeedGraph::new("star", 4, &[(0, 1), (0, 2), (0, 3)], None).unwrap()],
            AssignmentPolicy::RoundRobin,
            2,
        )
        .unwrap();
        assert_eq!(twin.uniform_shape(), Some((4, 3)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn selection_returns_r_distinct(n in 1u32..9, r_off in 0u32..9, seed in any::<u64>(), which in 0usize..3) {
                let r = 1 + r_off % n;
                let s = SeedGraph::path(n);
                let policy = [SelectionPolicy::ByBoundOrder, SelectionPolicy::ByDescendingDegree, SelectionPolicy::UniformRandom][which];
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let got = select_bound_vertices(&s, r, policy, &mut rng).unwrap();
                prop_assert_eq!(got.len(), r as usize);
                let set: BTreeSet<u32> = got.iter().copied().collect();
                prop_assert_eq!(set.len(), r as usize);
                prop_assert!(got.iter().all(|&v| v < n));
                if policy.is_deterministic() {
                    let mut rng2 = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
                    prop_assert_eq!(select_bound_vertices(&s, r, policy, &mut rng2).unwrap(), got);
                }
            }
        }
    }
}
