//! Skip-gram embedding training with negative sampling.

mod io;
mod model;
mod pairs;
mod train;

pub use io::{load_embeddings, save_embeddings};
pub use model::{
    log_sigmoid, sgns_gradient, sgns_loss, sigmoid, skipgram_distribution, skipgram_probability,
    EmbeddingMatrix, NodeEmbeddings,
};
pub use pairs::{extract_pairs, for_each_pair, pair_count};
pub use train::{noise_weights, train, train_with, LearningRate, SgnsConfig};
