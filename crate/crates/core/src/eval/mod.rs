//! Downstream evaluation: link prediction with edge-feature operators and
//! one-vs-rest multi-label node classification.

mod classify;
mod features;
mod labels;
mod link;
mod logreg;
mod metrics;

pub use classify::{node_classification_eval, NodeClassificationReport};
pub use features::{edge_feature, EdgeFeatureOp};
pub use labels::{parse_labels, LabeledNodes};
pub use link::{link_prediction_eval, LinkPredictionScore};
pub use logreg::{fit_logreg, gradient, objective, Features, LogRegConfig, LogRegModel};
pub use metrics::{auc, auc_pairwise, multilabel_f1, F1Scores};
