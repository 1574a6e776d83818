//! Multi-pass semi-streaming approximate matching.
//!
//! Each round samples edges with probability proportional to an importance
//! that doubles (or grows by `1 + eta`) whenever the edge escapes a round's
//! dual cover, solves the sample exactly, and stores only the cover. After
//! `O(log(n) / eps)` rounds the best sampled matching is within `1 - eps` of
//! optimal.
//!
//! Types are generic over an unsigned integer weight; the aliases at the
//! crate root fix it to `u64`.

pub mod algo;
pub mod cover;
pub mod error;
pub mod exact;
pub mod generate;
pub mod graph;
pub mod metrics;
pub mod sampler;
pub mod scalar;
pub mod stream;

pub use algo::{run_mbm, run_mwm, MbmConfig, MwmConfig, RoundCover};
pub use error::{Error, Result};
pub use graph::VertexId;
pub use metrics::RunMetrics;
pub use scalar::Weight;

pub type Edge = graph::Edge<u64>;
pub type Graph = graph::Graph<u64>;
pub type Matching = graph::Matching<u64>;
pub type OddSetCover = cover::OddSetCover<u64>;
pub type EdgeStream = stream::EdgeStream<u64>;
pub type CoverHistory = sampler::CoverHistory<u64>;
pub type RunOutcome = algo::RunOutcome<u64>;
