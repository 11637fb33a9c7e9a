//! Driver-node seed selection for influence maximization.
//!
//! Driver nodes come from a greedy minimum dominating set, either over the
//! whole graph or inside each Girvan–Newman community. They are ranked by
//! centrality (or singleton cascade size), cut to a seed budget, and
//! evaluated with a deterministic linear threshold model.

pub mod centrality;
pub mod community;
pub mod diffusion;
pub mod drivers;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod seeding;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId};
