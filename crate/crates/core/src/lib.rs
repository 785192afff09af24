//! Growing network models built by attaching seed graphs (motifs) to
//! bound-edges, with closed-form predictions and a verification harness that
//! checks them against generated graphs.
//!
//! * [`graph`]: simple graph with a bound-edge registry and vertex provenance.
//! * [`seed`]: seed graphs and bound-vertex selection.
//! * [`config`]: run configuration document.
//! * [`growth`]: deterministic, randomized, and rewiring growth.
//! * [`predictor`]: closed forms for counts, degrees, tails, and exponents.
//! * [`analytics`]: measurements on generated models.
//! * [`verify`]: predicted-vs-measured reports.
//! * [`export`]: edge-list, trace, and CSV file formats.

pub mod analytics;
pub mod cli;
pub mod config;
pub mod export;
pub mod graph;
pub mod growth;
pub mod predictor;
pub mod seed;
pub mod verify;

pub use config::{GrowthConfig, Mode};
pub use graph::{Distance, Edge, NetworkModel, VertexId};
pub use growth::{run, StepTrace, TraceRow};
