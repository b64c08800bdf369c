//! Reinforced random walks for node embedding.
//!
//! The crate covers the full pipeline: edge-list ingestion and connected
//! hold-out splits ([`graph`], [`split`]), vertex- and distribution-reinforced
//! walks with epsilon-greedy or UCB exploration ([`walk`]), skip-gram
//! training with negative sampling ([`sgns`]), and link-prediction and
//! node-classification evaluation ([`eval`]).

pub mod error;
pub mod eval;
pub mod graph;
pub mod pipeline;
pub mod rng;
pub mod sgns;
pub mod split;
pub mod walk;

pub use error::{Error, Result};
pub use eval::{EdgeFeatureOp, LabeledNodes, LogRegConfig};
pub use graph::{parse_edge_list, Graph, Node};
pub use pipeline::{PipelineConfig, Variant};
pub use sgns::{NodeEmbeddings, SgnsConfig};
pub use split::{split_edges, EdgeSplit};
pub use walk::{Corpus, Exploitation, Exploration, WalkConfig};
