#![allow(dead_code)]

use motifgrow::analytics::degree_census;
use motifgrow::config::{GrowthConfig, Mode};
use motifgrow::growth::{run, GrowthError};
use motifgrow::predictor::{counts_deterministic, ModelParams};
use motifgrow::seed::{AssignmentPolicy, SeedGraph, SeedSet, SelectionPolicy};
use proptest::prelude::*;

pub fn single_vertex() -> SeedGraph {
    SeedGraph::new("single", 1, &[], None).unwrap()
}

pub fn k2() -> SeedGraph {
    SeedGraph::complete(2)
}

pub fn triangle() -> SeedGraph {
    SeedGraph::complete(3)
}

pub fn cycle4() -> SeedGraph {
    SeedGraph::new("cycle4", 4, &[(0, 1), (1, 2), (2, 3), (0, 3)], None).unwrap()
}

pub fn star4() -> SeedGraph {
    SeedGraph::new("star4", 4, &[(0, 1), (0, 2), (0, 3)], Some(vec![3, 2, 1, 0])).unwrap()
}

pub fn base(steps: u32) -> GrowthConfig {
    GrowthConfig::deterministic(triangle(), SeedGraph::path(4), 2, steps).unwrap()
}

/// Seeds of the count grid, by name.
pub fn grid_seeds() -> Vec<(&'static str, SeedGraph)> {
    vec![("path4", SeedGraph::path(4)), ("triangle", triangle()), ("single", single_vertex())]
}

pub fn grid_initials() -> Vec<(&'static str, SeedGraph)> {
    vec![("triangle", triangle()), ("K2", k2())]
}

pub const BASE_TOML: &str = "r = 2\nsteps = 1\n\
[initial]\nm_v = 3\nedges = [[0, 1], [1, 2], [0, 2]]\n\
[[seeds]]\nm_v = 4\nedges = [[0, 1], [1, 2], [2, 3]]\n";

fn seed_strategy() -> impl Strategy<Value = SeedGraph> {
    prop_oneof![
        Just(single_vertex()),
        Just(k2()),
        Just(SeedGraph::path(3)),
        Just(triangle()),
        Just(SeedGraph::path(4)),
        Just(cycle4()),
        Just(star4()),
        Just(SeedGraph::complete(4)),
    ]
}

fn initial_strategy() -> impl Strategy<Value = SeedGraph> {
    prop_oneof![
        Just(k2()),
        Just(triangle()),
        Just(SeedGraph::path(3)),
        Just(SeedGraph::path(4)),
        Just(cycle4()),
        Just(SeedGraph::complete(4)),
    ]
}

fn selection_strategy() -> impl Strategy<Value = SelectionPolicy> {
    prop_oneof![
        Just(SelectionPolicy::ByBoundOrder),
        Just(SelectionPolicy::ByDescendingDegree),
        Just(SelectionPolicy::UniformRandom),
    ]
}

/// Random valid configs, kept small enough to run in milliseconds.
pub fn config_strategy() -> impl Strategy<Value = GrowthConfig> {
    (
        initial_strategy(),
        prop::collection::vec(seed_strategy(), 1..=2),
        1u32..=3,
        0u32..=3,
        0u32..=4,
        (0.05f64..0.95, 0.05f64..0.95, 0.05f64..0.95),
        selection_strategy(),
        any::<bool>(),
        any::<u64>(),
    )
        .prop_map(|(initial, seeds, r, mode, steps, (p_r, p_a, p_w), selection, random_assign, rng_seed)| {
            let min_m_v = seeds.iter().map(SeedGraph::m_v).min().unwrap();
            let r = r.min(min_m_v);
            // keep r = 3 runs shallow
            let steps = if r == 3 { steps.min(3) } else { steps };
            let assignment = if random_assign {
                AssignmentPolicy::UniformRandom
            } else {
                AssignmentPolicy::RoundRobin
            };
            let mode = match mode {
                0 | 1 => Mode::Deterministic,
                2 => Mode::Randomized,
                _ => Mode::Rewire,
            };
            GrowthConfig {
                initial,
                seeds: SeedSet::new(seeds, assignment, r).unwrap(),
                r,
                mode,
                p_r,
                p_a,
                p_w,
                steps,
                rng_seed,
                selection,
            }
        })
}

/// Checks the structural invariants of one run. `Ok(false)` means the run
/// saturated (no room for the requested random edges) and was not checked.
pub fn check_invariants(config: &GrowthConfig) -> Result<bool, String> {
    let (model, trace) = match run(config) {
        Ok(x) => x,
        Err(GrowthError::Saturated { .. }) if config.mode != Mode::Deterministic => return Ok(false),
        Err(e) => return Err(format!("run failed: {e}")),
    };
    if !model.is_simple() {
        return Err("model is not simple".into());
    }
    if model.bound_edges().any(|e| !model.contains_edge(e)) {
        return Err("bound edge missing from edge set".into());
    }
    let n_e0 = config.initial.m_e() as u64;
    let q = 2 * config.r as u64;
    for row in trace.rows() {
        let law = q.pow(row.step) * n_e0;
        if row.n_be != law {
            return Err(format!("n_be[{}] = {} != (2r)^s N_e,0 = {law}", row.step, row.n_be));
        }
    }
    let last = trace.rows().last().unwrap();
    if (last.n_v, last.n_e, last.n_be)
        != (model.vertex_count() as u64, model.edge_count() as u64, model.bound_count() as u64)
    {
        return Err("final trace row disagrees with the model".into());
    }
    let census = degree_census(&model);
    if census.degree_sum() != 2 * model.edge_count() as u64 {
        return Err(format!("handshake: degree sum {} != 2 * {}", census.degree_sum(), model.edge_count()));
    }
    if census.vertex_count() != model.vertex_count() as u64 {
        return Err("census vertex count mismatch".into());
    }
    if let Ok(params) = ModelParams::from_config(config) {
        for row in trace.rows() {
            let det = counts_deterministic(&params, row.step).unwrap();
            if row.n_v != det.n_v {
                return Err(format!("n_v[{}] = {} != {}", row.step, row.n_v, det.n_v));
            }
            if config.mode != Mode::Randomized && row.n_e != det.n_e {
                return Err(format!("n_e[{}] = {} != {} in {:?} mode", row.step, row.n_e, det.n_e, config.mode));
            }
        }
    }
    match config.mode {
        Mode::Rewire => {
            if let Some(r) = trace.rows().iter().find(|r| r.removed != r.added) {
                return Err(format!("rewire step {} removed {} but added {}", r.step, r.removed, r.added));
            }
            if trace.rows().windows(2).any(|w| w[1].n_e != w[0].n_e + w[1].y_size) {
                return Err("rewire changed the edge count beyond growth".into());
            }
        }
        Mode::Deterministic if config.steps >= 1 => {
            let mut prev = config.clone();
            prev.steps -= 1;
            let (earlier, _) = run(&prev).map_err(|e| e.to_string())?;
            if !earlier.is_subgraph_of(&model) {
                return Err(format!("N({}) is not a subgraph of N({})", prev.steps, config.steps));
            }
        }
        _ => {}
    }
    Ok(true)
}
