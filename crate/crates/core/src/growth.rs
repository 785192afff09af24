//! The growth engine: seed attachment on bound-edges, followed by optional
//! edge churn (randomized mode) or rewiring (rewire mode).
//!
//! Each step is growth-first: every bound-edge of the previous model receives
//! a fresh seed copy, and only afterwards are old edges removed or added.
//! Churn starts at step 2; step 1 is pure growth in every mode.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{ConfigError, GrowthConfig, Mode};
use crate::graph::{Edge, GraphError, NetworkModel, VertexId, VertexProvenance};
use crate::seed::{select_bound_vertices, AssignmentPolicy, SeedError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GrowthError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("graph invariant violated: {0}")]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error("cannot add {needed} edges: only {available} non-adjacent pairs remain among old vertices")]
    Saturated { needed: u64, available: u64 },
    #[error("step {step} would exceed the 32-bit vertex id space")]
    TooLarge { step: u32 },
}

/// Counts recorded after a step completes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub step: u32,
    pub n_v: u64,
    pub n_e: u64,
    pub n_be: u64,
    pub removed: u64,
    pub added: u64,
    /// New vertices from growth (for step 0: the initial vertex count).
    pub x_size: u64,
    /// New edges from growth (for step 0: the initial edge count).
    pub y_size: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StepTrace {
    rows: Vec<TraceRow>,
}

impl StepTrace {
    pub fn from_rows(rows: Vec<TraceRow>) -> StepTrace {
        StepTrace { rows }
    }

    pub fn rows(&self) -> &[TraceRow] {
        &self.rows
    }

    pub fn row(&self, step: usize) -> Option<&TraceRow> {
        self.rows.get(step)
    }

    /// Last completed step `t`.
    pub fn final_step(&self) -> u32 {
        self.rows.len().saturating_sub(1) as u32
    }

    pub fn push(&mut self, row: TraceRow) {
        self.rows.push(row);
    }

    pub fn edge_counts(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.n_e).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GrowthStats {
    pub x_size: u64,
    pub y_size: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Churn {
    pub removed: u64,
    pub added: u64,
}

/// Half-up rounding of `p * n`.
pub fn churn_count(p: f64, n: usize) -> usize {
    (p * n as f64).round() as usize
}

/// Per-run random stream; `index` separates runs of a sweep.
pub fn rng_for_run(rng_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(index);
    rng
}

/// Builds `N(0)` with every edge marked bound.
pub fn init_model(config: &GrowthConfig) -> Result<(NetworkModel, StepTrace), GrowthError> {
    config.validate()?;
    let initial = &config.initial;
    let mut model = NetworkModel::with_capacity(initial.m_v() as usize, initial.m_e() as usize);
    for v in 0..initial.m_v() {
        model.add_vertex(VertexProvenance::initial(initial.degree(v)))?;
    }
    for &(u, v) in initial.edges() {
        model.add_edge(VertexId(u), VertexId(v), true)?;
    }
    let row = TraceRow {
        step: 0,
        n_v: model.vertex_count() as u64,
        n_e: model.edge_count() as u64,
        n_be: model.bound_count() as u64,
        removed: 0,
        added: 0,
        x_size: model.vertex_count() as u64,
        y_size: model.edge_count() as u64,
    };
    Ok((model, StepTrace::from_rows(vec![row])))
}

/// Attaches one seed copy to every bound-edge (in canonical order) and
/// moves bound status to the `2r` edges of the selected seed vertices.
pub fn grow_step<R: Rng + ?Sized>(
    model: &mut NetworkModel,
    config: &GrowthConfig,
    rng: &mut R,
) -> Result<GrowthStats, GrowthError> {
    let step = model.step() + 1;
    let seeds = config.seeds.seeds();
    let fixed: Vec<Vec<u32>> = if config.selection.is_deterministic() {
        seeds
            .iter()
            .map(|s| select_bound_vertices(s, config.r, config.selection, rng))
            .collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };

    let bound = model.take_bound_edges();
    let max_m_v = seeds.iter().map(|s| s.m_v()).max().unwrap_or(0) as u64;
    let max_cost = seeds.iter().map(|s| s.m_e() + 2 * s.m_v()).max().unwrap_or(0) as u64;
    let new_vertices = bound.len() as u64 * max_m_v;
    if model.vertex_count() as u64 + new_vertices >= u32::MAX as u64 {
        return Err(GrowthError::TooLarge { step });
    }
    model.reserve(
        new_vertices as usize,
        bound.len() * max_cost as usize,
        bound.len() * 2 * config.r as usize,
    );

    let mut stats = GrowthStats::default();
    let mut selected = vec![false; max_m_v as usize];
    for (i, e) in bound.iter().enumerate() {
        let seed_index = match config.seeds.assignment() {
            AssignmentPolicy::RoundRobin => i % seeds.len(),
            AssignmentPolicy::UniformRandom => rng.random_range(0..seeds.len()),
        };
        let seed = &seeds[seed_index];
        selected.iter_mut().for_each(|s| *s = false);
        if config.selection.is_deterministic() {
            for &x in &fixed[seed_index] {
                selected[x as usize] = true;
            }
        } else {
            for x in select_bound_vertices(seed, config.r, config.selection, rng)? {
                selected[x as usize] = true;
            }
        }

        let base = model.vertex_count() as u32;
        for x in 0..seed.m_v() {
            model.add_vertex(VertexProvenance {
                birth_step: step,
                is_bound_end: selected[x as usize],
                seed_degree: seed.degree(x),
                seed_index: Some(seed_index as u32),
            })?;
        }
        for &(a, b) in seed.edges() {
            model.add_edge(VertexId(base + a), VertexId(base + b), false)?;
        }
        for x in 0..seed.m_v() {
            let id = VertexId(base + x);
            let is_bound = selected[x as usize];
            model.add_edge(id, e.lo(), is_bound)?;
            model.add_edge(id, e.hi(), is_bound)?;
        }
        stats.x_size += seed.m_v() as u64;
        stats.y_size += (seed.m_e() + 2 * seed.m_v()) as u64;
    }
    model.set_step(step);
    Ok(stats)
}

/// Adds `count` uniformly drawn non-adjacent pairs among vertices
/// `0..old_vertices`. The caller passes how many edges currently join two
/// old vertices.
fn add_random_edges<R: Rng + ?Sized>(
    model: &mut NetworkModel,
    old_vertices: usize,
    old_edges: usize,
    count: usize,
    rng: &mut R,
) -> Result<(), GrowthError> {
    if count == 0 {
        return Ok(());
    }
    let n = old_vertices as u64;
    let pairs = n * n.saturating_sub(1) / 2;
    let available = pairs.saturating_sub(old_edges as u64);
    if (count as u64) > available {
        return Err(GrowthError::Saturated {
            needed: count as u64,
            available,
        });
    }
    if pairs <= 4_000_000 || 2 * count as u64 > available {
        let mut free = Vec::with_capacity(available as usize);
        for u in 0..old_vertices as u32 {
            for v in u + 1..old_vertices as u32 {
                if !model.has_edge(VertexId(u), VertexId(v)) {
                    free.push((u, v));
                }
            }
        }
        if free.len() < count {
            return Err(GrowthError::Saturated {
                needed: count as u64,
                available: free.len() as u64,
            });
        }
        for i in sample(rng, free.len(), count).into_iter() {
            let (u, v) = free[i];
            model.add_edge(VertexId(u), VertexId(v), false)?;
        }
    } else {
        let mut added = 0;
        while added < count {
            let u = VertexId(rng.random_range(0..old_vertices as u32));
            let v = VertexId(rng.random_range(0..old_vertices as u32));
            if u == v || model.has_edge(u, v) {
                continue;
            }
            model.add_edge(u, v, false)?;
            added += 1;
        }
    }
    Ok(())
}

fn remove_sampled<R: Rng + ?Sized>(
    model: &mut NetworkModel,
    pool: &[Edge],
    count: usize,
    rng: &mut R,
) -> Result<(), GrowthError> {
    let mut picks = sample(rng, pool.len(), count).into_vec();
    // removal order must not depend on the sampler's internal ordering
    picks.sort_unstable();
    for i in picks {
        let e = pool[i];
        model.remove_edge(e.lo(), e.hi())?;
    }
    Ok(())
}

/// Removes `round(p_r |pool|)` pool edges, then adds
/// `round(p_a (|pool| - removed))` random edges among the first
/// `old_vertices` vertices.
///
/// `pool` must be the edge set of the model before this step's growth; new
/// bound-edges are therefore never removed.
pub fn randomize_step<R: Rng + ?Sized>(
    model: &mut NetworkModel,
    pool: &[Edge],
    old_vertices: usize,
    p_r: f64,
    p_a: f64,
    rng: &mut R,
) -> Result<Churn, GrowthError> {
    let removed = churn_count(p_r, pool.len());
    remove_sampled(model, pool, removed, rng)?;
    let remaining = pool.len() - removed;
    let added = churn_count(p_a, remaining);
    add_random_edges(model, old_vertices, remaining, added, rng)?;
    Ok(Churn {
        removed: removed as u64,
        added: added as u64,
    })
}

/// Replaces `round(p_w |pool|)` pool edges with the same number of random
/// non-adjacent pairs among old vertices. Edge count is preserved.
pub fn rewire_step<R: Rng + ?Sized>(
    model: &mut NetworkModel,
    pool: &[Edge],
    old_vertices: usize,
    p_w: f64,
    rng: &mut R,
) -> Result<Churn, GrowthError> {
    let k = churn_count(p_w, pool.len());
    remove_sampled(model, pool, k, rng)?;
    add_random_edges(model, old_vertices, pool.len() - k, k, rng)?;
    Ok(Churn {
        removed: k as u64,
        added: k as u64,
    })
}

/// Step-by-step driver around one run.
#[derive(Debug, Clone)]
pub struct Growth {
    config: GrowthConfig,
    model: NetworkModel,
    trace: StepTrace,
    rng: ChaCha8Rng,
}

impl Growth {
    pub fn new(config: GrowthConfig) -> Result<Growth, GrowthError> {
        Growth::with_rng(config.clone(), rng_for_run(config.rng_seed, 0))
    }

    pub fn with_rng(config: GrowthConfig, rng: ChaCha8Rng) -> Result<Growth, GrowthError> {
        let (model, trace) = init_model(&config)?;
        Ok(Growth {
            config,
            model,
            trace,
            rng,
        })
    }

    pub fn config(&self) -> &GrowthConfig {
        &self.config
    }

    pub fn model(&self) -> &NetworkModel {
        &self.model
    }

    pub fn trace(&self) -> &StepTrace {
        &self.trace
    }

    /// Runs one full step (growth, then churn from step 2 on).
    pub fn step(&mut self) -> Result<TraceRow, GrowthError> {
        let old_vertices = self.model.vertex_count();
        let old_edges = self.model.edge_count();
        let stats = grow_step(&mut self.model, &self.config, &mut self.rng)?;
        let step = self.model.step();
        let churn = if step >= 2 && self.config.mode != Mode::Deterministic {
            // growth only appends, so the first `old_edges` slots are N(s-1)
            let pool: Vec<Edge> = (0..old_edges)
                .map(|i| self.model.edge_at(i).expect("pool edge present"))
                .collect();
            match self.config.mode {
                Mode::Randomized => randomize_step(
                    &mut self.model,
                    &pool,
                    old_vertices,
                    self.config.p_r,
                    self.config.p_a,
                    &mut self.rng,
                )?,
                Mode::Rewire => rewire_step(&mut self.model, &pool, old_vertices, self.config.p_w, &mut self.rng)?,
                Mode::Deterministic => unreachable!(),
            }
        } else {
            Churn::default()
        };
        let row = TraceRow {
            step,
            n_v: self.model.vertex_count() as u64,
            n_e: self.model.edge_count() as u64,
            n_be: self.model.bound_count() as u64,
            removed: churn.removed,
            added: churn.added,
            x_size: stats.x_size,
            y_size: stats.y_size,
        };
        self.trace.push(row);
        Ok(row)
    }

    pub fn run_to_end(mut self) -> Result<(NetworkModel, StepTrace), GrowthError> {
        while self.model.step() < self.config.steps {
            self.step()?;
        }
        Ok((self.model, self.trace))
    }
}

/// Runs the configured number of steps from a fresh initial model.
pub fn run(config: &GrowthConfig) -> Result<(NetworkModel, StepTrace), GrowthError> {
    Growth::new(config.clone())?.run_to_end()
}
