//! Measurements on generated models and their traces.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::graph::{GraphError, NetworkModel, VertexId};
use crate::growth::StepTrace;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalyticsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("model has no edges")]
    NoEdges,
    #[error("delta = {delta} outside [0, {t}]")]
    DeltaOutOfRange { delta: u32, t: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexClass {
    Initial,
    BoundSelected,
    Unselected,
}

impl VertexClass {
    pub fn name(self) -> &'static str {
        match self {
            VertexClass::Initial => "initial",
            VertexClass::BoundSelected => "bound_selected",
            VertexClass::Unselected => "unselected",
        }
    }
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for VertexClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "initial" => Ok(VertexClass::Initial),
            "bound_selected" => Ok(VertexClass::BoundSelected),
            "unselected" => Ok(VertexClass::Unselected),
            other => Err(format!("unknown vertex class '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassifiedVertex {
    pub degree: u32,
    pub class: VertexClass,
    pub birth_step: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DegreeCensus {
    /// degree -> number of vertices with that degree
    pub histogram: BTreeMap<u32, u64>,
    pub vertices: Vec<ClassifiedVertex>,
}

impl DegreeCensus {
    pub fn vertex_count(&self) -> u64 {
        self.histogram.values().sum()
    }

    /// Sum of all degrees (twice the edge count).
    pub fn degree_sum(&self) -> u64 {
        self.histogram.iter().map(|(&d, &c)| d as u64 * c).sum()
    }

    pub fn max_degree(&self) -> u32 {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }

    /// Builds a census from per-vertex records (e.g. read back from disk).
    pub fn from_vertices(vertices: Vec<ClassifiedVertex>) -> DegreeCensus {
        let mut histogram = BTreeMap::new();
        for v in &vertices {
            *histogram.entry(v.degree).or_insert(0) += 1;
        }
        DegreeCensus { histogram, vertices }
    }
}

pub fn classify(is_initial: bool, is_bound_end: bool) -> VertexClass {
    match (is_initial, is_bound_end) {
        (true, _) => VertexClass::Initial,
        (false, true) => VertexClass::BoundSelected,
        (false, false) => VertexClass::Unselected,
    }
}

pub fn degree_census(model: &NetworkModel) -> DegreeCensus {
    let vertices = model
        .degrees()
        .iter()
        .zip(model.provenances())
        .map(|(&degree, p)| ClassifiedVertex {
            degree,
            class: classify(p.birth_step == 0, p.is_bound_end),
            birth_step: p.birth_step,
        })
        .collect();
    DegreeCensus::from_vertices(vertices)
}

/// `deg(z) / 2 N_e`: the chance a new vertex attaching preferentially picks `z`.
pub fn attachment_probability(model: &NetworkModel, z: VertexId) -> Result<f64, AnalyticsError> {
    let d = model.degree(z)?;
    if model.edge_count() == 0 {
        return Err(AnalyticsError::NoEdges);
    }
    Ok(d as f64 / (2.0 * model.edge_count() as f64))
}

/// `sum_{s<=delta} n_e[s] / n_e[t]` over the recorded trace.
pub fn measured_ecum(trace: &StepTrace, delta: u32) -> Result<f64, AnalyticsError> {
    let t = trace.final_step();
    if delta > t {
        return Err(AnalyticsError::DeltaOutOfRange { delta, t });
    }
    let rows = trace.rows();
    let partial: u64 = rows[..=delta as usize].iter().map(|r| r.n_e).sum();
    Ok(partial as f64 / rows[t as usize].n_e as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThresholdStats {
    pub s_leq: u64,
    pub s_gt: u64,
    pub q_leq: u64,
    pub q_gt: u64,
}

/// Vertex counts and degree sums at or below / above degree `k`.
pub fn threshold_stats(census: &DegreeCensus, k: u32) -> ThresholdStats {
    let mut out = ThresholdStats {
        s_leq: 0,
        s_gt: 0,
        q_leq: 0,
        q_gt: 0,
    };
    for (&d, &c) in &census.histogram {
        if d <= k {
            out.s_leq += c;
            out.q_leq += d as u64 * c;
        } else {
            out.s_gt += c;
            out.q_gt += d as u64 * c;
        }
    }
    out
}

/// `(S_N(>k) / n_v, Q_N(>k) / 2 n_e)`.
pub fn measured_vk_ek(census: &DegreeCensus, k: u32, n_v: u64, n_e: u64) -> (f64, f64) {
    let s = threshold_stats(census, k);
    (s.s_gt as f64 / n_v as f64, s.q_gt as f64 / (2.0 * n_e as f64))
}

/// Degree cut separating the initial vertices and the bound-ends born at
/// steps `1..=tau` from everything else.
///
/// Returns the largest degree outside that set, provided every vertex inside
/// it has a strictly larger degree; `None` when the classes overlap.
pub fn class_threshold(census: &DegreeCensus, tau: u32) -> Option<u32> {
    let upper = |v: &ClassifiedVertex| match v.class {
        VertexClass::Initial => true,
        VertexClass::BoundSelected => v.birth_step <= tau,
        VertexClass::Unselected => false,
    };
    let cut = census.vertices.iter().filter(|v| !upper(v)).map(|v| v.degree).max()?;
    let min_upper = census.vertices.iter().filter(|v| upper(v)).map(|v| v.degree).min()?;
    (min_upper > cut).then_some(cut)
}
