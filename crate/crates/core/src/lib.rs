//! Deterministic Monte Carlo simulator of a contextual double-slit toy
//! model: point particles with definite trajectories scatter off a
//! stateful "atom" whose orbit spins remember previous passages. Which
//! slits are open — the context — changes the statistics, producing
//! interference fringes with both slits open and smooth single-slit
//! profiles, while per-context probabilities still add exactly.
//!
//! The crate is split along the pipeline:
//!
//! * [`model`] — geometry, spins, contexts, histograms, run records;
//! * [`numerics`] — the safeguarded solver for `y + sin y = x`;
//! * [`dynamics`] — per-particle displacement, scattering, screen binning;
//! * [`experiment`] — seeded emission streams and whole-run orchestration;
//! * [`analysis`] — fringe/symmetry/total-variation metrics and verdicts;
//! * [`config`], [`output`] — run configuration and CSV/JSON/SVG/ASCII
//!   persistence.
//!
//! Every run is a pure function of (parameters, context, particle count,
//! seed); replays are bit-identical, file outputs byte-identical.

pub mod analysis;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod model;
pub mod numerics;
pub mod output;

pub use analysis::{contextual_report, AnalysisReport, AnalysisThresholds};
pub use config::{parse_config_str, RunConfig};
pub use error::{Error, Result};
pub use experiment::{replay_check, run, run_observed};
pub use model::{ExperimentContext, ModelParams, RunRecord};
pub use numerics::{solve_displacement, SolverSettings};
