//! Run configuration: the seed document extended with run keys.
//!
//! ```toml
//! r = 2
//! mode = "randomized"      # deterministic | randomized | rewire
//! p_r = 0.5
//! p_a = 0.5
//! steps = 2
//! rng_seed = 7
//!
//! [initial]
//! m_v = 3
//! edges = [[0, 1], [1, 2], [0, 2]]
//!
//! [[seeds]]
//! m_v = 4
//! edges = [[0, 1], [1, 2], [2, 3]]
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::seed::{AssignmentPolicy, GraphDoc, SeedError, SeedGraph, SeedSet, SelectionPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Pure seed growth; every step nests the previous model.
    Deterministic,
    /// Growth, then removal of old edges and addition of random ones.
    Randomized,
    /// Growth, then replacing a fraction of old edges with random ones.
    Rewire,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Deterministic => "deterministic",
            Mode::Randomized => "randomized",
            Mode::Rewire => "rewire",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "deterministic" => Ok(Mode::Deterministic),
            "randomized" => Ok(Mode::Randomized),
            "rewire" => Ok(Mode::Rewire),
            other => Err(ConfigError::Invalid {
                field: "mode",
                reason: format!("unknown mode '{other}'"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("missing field `{0}`")]
    Missing(&'static str),
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("invalid `{field}`: {source}")]
    Seed {
        field: &'static str,
        #[source]
        source: SeedError,
    },
}

/// Raw document; every run key is optional so flags can fill the gaps.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection_policy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment_policy: Option<String>,
    /// `(p_r, p_a)` pairs compared by the p-independence check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compare_pairs: Option<Vec<[f64; 2]>>,
    pub initial: Option<GraphDoc>,
    #[serde(default)]
    pub seeds: Vec<GraphDoc>,
}

/// Command-line values that take precedence over the document.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub r: Option<u32>,
    pub mode: Option<Mode>,
    pub p_r: Option<f64>,
    pub p_a: Option<f64>,
    pub p_w: Option<f64>,
    pub steps: Option<u32>,
    pub rng_seed: Option<u64>,
    pub selection_policy: Option<SelectionPolicy>,
}

impl ConfigDoc {
    pub fn parse(text: &str) -> Result<ConfigDoc, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(r) = o.r {
            self.r = Some(r);
        }
        if let Some(m) = o.mode {
            self.mode = Some(m.name().to_owned());
        }
        if let Some(p) = o.p_r {
            self.p_r = Some(p);
        }
        if let Some(p) = o.p_a {
            self.p_a = Some(p);
        }
        if let Some(p) = o.p_w {
            self.p_w = Some(p);
        }
        if let Some(s) = o.steps {
            self.steps = Some(s);
        }
        if let Some(s) = o.rng_seed {
            self.rng_seed = Some(s);
        }
        if let Some(p) = o.selection_policy {
            self.selection_policy = Some(p.name().to_owned());
        }
    }

    pub fn resolve(&self) -> Result<GrowthConfig, ConfigError> {
        let r = self.r.unwrap_or(1);
        let mode = self.mode.as_deref().map(Mode::from_str).transpose()?.unwrap_or(Mode::Deterministic);
        let initial_doc = self.initial.as_ref().ok_or(ConfigError::Missing("initial"))?;
        let initial = SeedGraph::from_doc("initial", initial_doc)
            .map_err(|source| ConfigError::Seed { field: "initial", source })?;
        if self.seeds.is_empty() {
            return Err(ConfigError::Missing("seeds"));
        }
        let seeds = self
            .seeds
            .iter()
            .enumerate()
            .map(|(i, d)| SeedGraph::from_doc(&format!("seeds[{i}]"), d))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|source| ConfigError::Seed { field: "seeds", source })?;
        let assignment = self
            .assignment_policy
            .as_deref()
            .map(AssignmentPolicy::from_str)
            .transpose()
            .map_err(|source| ConfigError::Seed {
                field: "assignment_policy",
                source,
            })?
            .unwrap_or_default();
        let seeds = SeedSet::new(seeds, assignment, r).map_err(|source| ConfigError::Seed { field: "seeds", source })?;
        let selection = match self.selection_policy.as_deref() {
            Some(s) => SelectionPolicy::from_str(s).map_err(|source| ConfigError::Seed {
                field: "selection_policy",
                source,
            })?,
            None => GrowthConfig::default_selection(mode),
        };
        let (p_r, p_a, p_w) = match mode {
            Mode::Deterministic => (self.p_r.unwrap_or(0.0), self.p_a.unwrap_or(0.0), self.p_w.unwrap_or(0.0)),
            Mode::Randomized => (
                self.p_r.ok_or(ConfigError::Missing("p_r"))?,
                self.p_a.ok_or(ConfigError::Missing("p_a"))?,
                self.p_w.unwrap_or(0.0),
            ),
            Mode::Rewire => (
                self.p_r.unwrap_or(0.0),
                self.p_a.unwrap_or(0.0),
                self.p_w.ok_or(ConfigError::Missing("p_w"))?,
            ),
        };
        let config = GrowthConfig {
            initial,
            seeds,
            r,
            mode,
            p_r,
            p_a,
            p_w,
            steps: self.steps.unwrap_or(1),
            rng_seed: self.rng_seed.unwrap_or(0),
            selection,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthConfig {
    pub initial: SeedGraph,
    pub seeds: SeedSet,
    pub r: u32,
    pub mode: Mode,
    pub p_r: f64,
    pub p_a: f64,
    pub p_w: f64,
    pub steps: u32,
    pub rng_seed: u64,
    pub selection: SelectionPolicy,
}

fn open_unit(field: &'static str, p: f64) -> Result<(), ConfigError> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(ConfigError::Invalid {
            field,
            reason: format!("{p} is not in the open interval (0, 1)"),
        })
    }
}

impl GrowthConfig {
    /// Deterministic single-seed config with the mode's default selection.
    pub fn deterministic(initial: SeedGraph, seed: SeedGraph, r: u32, steps: u32) -> Result<GrowthConfig, ConfigError> {
        let seeds = SeedSet::single(seed, r).map_err(|source| ConfigError::Seed { field: "seeds", source })?;
        let config = GrowthConfig {
            initial,
            seeds,
            r,
            mode: Mode::Deterministic,
            p_r: 0.0,
            p_a: 0.0,
            p_w: 0.0,
            steps,
            rng_seed: 0,
            selection: SelectionPolicy::ByDescendingDegree,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn randomized(mut self, p_r: f64, p_a: f64) -> Result<GrowthConfig, ConfigError> {
        self.mode = Mode::Randomized;
        self.p_r = p_r;
        self.p_a = p_a;
        self.validate()?;
        Ok(self)
    }

    pub fn rewire(mut self, p_w: f64) -> Result<GrowthConfig, ConfigError> {
        self.mode = Mode::Rewire;
        self.p_w = p_w;
        self.validate()?;
        Ok(self)
    }

    pub fn default_selection(mode: Mode) -> SelectionPolicy {
        match mode {
            Mode::Deterministic => SelectionPolicy::ByDescendingDegree,
            Mode::Randomized | Mode::Rewire => SelectionPolicy::UniformRandom,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.initial.m_v() < 2 {
            return Err(ConfigError::Invalid {
                field: "initial",
                reason: format!("needs at least 2 vertices, has {}", self.initial.m_v()),
            });
        }
        if self.initial.m_e() < 1 {
            return Err(ConfigError::Invalid {
                field: "initial",
                reason: "needs at least 1 edge".into(),
            });
        }
        if self.r == 0 {
            return Err(ConfigError::Invalid {
                field: "r",
                reason: "bound thickness must be at least 1".into(),
            });
        }
        for (i, s) in self.seeds.seeds().iter().enumerate() {
            if s.m_v() < self.r {
                return Err(ConfigError::Invalid {
                    field: "r",
                    reason: format!("seeds[{i}] has m_v = {} < r = {}", s.m_v(), self.r),
                });
            }
        }
        match self.mode {
            Mode::Deterministic => {}
            Mode::Randomized => {
                open_unit("p_r", self.p_r)?;
                open_unit("p_a", self.p_a)?;
            }
            Mode::Rewire => open_unit("p_w", self.p_w)?,
        }
        Ok(())
    }

    /// Soft warnings that do not stop generation.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.mode == Mode::Randomized {
            let limit = self.p_r / (1.0 - self.p_r);
            if self.p_a <= 0.5 && self.p_a < limit {
                out.push(format!(
                    "p_a = {} is below p_r/(1-p_r) = {limit:.4}; the stated existence condition does not hold",
                    self.p_a
                ));
            }
            if self.p_r > 0.5 && self.p_a >= limit {
                out.push(format!(
                    "p_a = {} is not below p_r/(1-p_r) = {limit:.4} with p_r > 1/2; the stated existence condition does not hold",
                    self.p_a
                ));
            }
        }
        if self.seeds.uniform_shape().is_none() {
            out.push("seeds differ in (m_v, m_e); closed-form verification is disabled".into());
        }
        out
    }

    /// `p = (1 - p_r)(1 + p_a)`, the expected old-edge retention factor.
    pub fn retention(&self) -> f64 {
        (1.0 - self.p_r) * (1.0 + self.p_a)
    }

    /// Round-trips to the document form (used for manifests).
    pub fn to_doc(&self) -> ConfigDoc {
        ConfigDoc {
            r: Some(self.r),
            mode: Some(self.mode.name().to_owned()),
            p_r: Some(self.p_r),
            p_a: Some(self.p_a),
            p_w: Some(self.p_w),
            steps: Some(self.steps),
            rng_seed: Some(self.rng_seed),
            selection_policy: Some(self.selection.name().to_owned()),
            assignment_policy: Some(self.seeds.assignment().name().to_owned()),
            compare_pairs: None,
            initial: Some(self.initial.to_doc()),
            seeds: self.seeds.seeds().iter().map(SeedGraph::to_doc).collect(),
        }
    }
}
