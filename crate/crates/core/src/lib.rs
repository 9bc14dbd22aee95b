//! Constructive pure-pair extraction on small graphs.
//!
//! Every extraction returns a witness that [`certify`] re-checks with the
//! exact oracles in [`oracles`].

pub mod certify;
pub mod ctx;
pub mod error;
pub mod extract;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod io;
pub mod oracles;
pub mod rational;
pub mod trace;

pub use ctx::Ctx;
pub use error::{Error, Result};
pub use graph::{build_graph, Graph, Limits, PairStatus, VertexSet};
pub use harness::{run_campaign, CampaignConfig, CampaignReport, Lemma};
pub use rational::Q;
