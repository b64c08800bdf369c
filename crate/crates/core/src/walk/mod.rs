//! Reinforced random walks.
//!
//! Exploitation modes reward neighbors by visit history (vertex
//! reinforcement) or by how little a step perturbs the walk's occupation
//! distribution (distribution reinforcement, KL or JS). Exploration modes
//! add epsilon-greedy uniform steps or a UCB bonus, and candidate scores are
//! turned into probabilities with a softmax.

mod corpus;
mod diagnostic;
mod sampler;
mod score;
mod state;

pub use corpus::{generate_corpus, Corpus};
pub use diagnostic::{stuck_diagnostic, CheckpointReport, Diagnostic};
pub use sampler::{
    generate_walk, next_step_distribution, sample_next, Exploitation, Exploration, Walk,
    WalkConfig, Walker,
};
pub use score::{
    drrw_js_score, drrw_kl_score, js_append_divergence, js_divergence, kl_append_divergence,
    kl_divergence, local_time, transition_distribution, ucb_bonus, vrrw_transition,
};
pub use state::{Occupation, WalkState};
