use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::walk::score::{js_append_divergence, kl_append_divergence, softmax_in_place};
use crate::walk::state::WalkState;

/// How historical visits reward a candidate neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exploitation {
    /// Uniform neighbor choice, ignoring history.
    FirstOrder,
    /// Probability proportional to local time.
    Vrrw,
    /// `1 - KL(w(n) || w^x(n))`.
    DrrwKl,
    /// `1 - JS(w(n), w^x(n))`.
    DrrwJs,
}

/// How the walk is pushed away from well-trodden nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum Exploration {
    None,
    /// With probability `epsilon` step to a uniform neighbor, otherwise
    /// follow the exploitation distribution.
    EpsilonGreedy {
        epsilon: f64,
    },
    /// Softmax over exploitation score plus the UCB bonus.
    Ucb,
}

impl Exploration {
    pub fn epsilon(&self) -> Option<f64> {
        match self {
            Exploration::EpsilonGreedy { epsilon } => Some(*epsilon),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Exploration::None => "none",
            Exploration::EpsilonGreedy { .. } => "epsilon-greedy",
            Exploration::Ucb => "ucb",
        }
    }

    /// Builds an exploration mode from its name and an optional epsilon.
    /// Epsilon must be supplied for, and only for, epsilon-greedy.
    pub fn from_parts(name: &str, epsilon: Option<f64>) -> Result<Self> {
        match (name, epsilon) {
            ("none", None) => Ok(Exploration::None),
            ("ucb", None) => Ok(Exploration::Ucb),
            ("epsilon-greedy", Some(epsilon)) => Ok(Exploration::EpsilonGreedy { epsilon }),
            ("epsilon-greedy", None) => Err(Error::Config(
                "epsilon-greedy exploration requires an epsilon".into(),
            )),
            ("none" | "ucb", Some(_)) => Err(Error::Config(format!(
                "epsilon only applies to epsilon-greedy exploration, not `{name}`"
            ))),
            _ => Err(Error::Config(format!("unknown exploration mode `{name}`"))),
        }
    }
}

impl fmt::Display for Exploitation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exploitation::FirstOrder => "first-order",
            Exploitation::Vrrw => "vrrw",
            Exploitation::DrrwKl => "drrw-kl",
            Exploitation::DrrwJs => "drrw-js",
        })
    }
}

impl FromStr for Exploitation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first-order" => Ok(Exploitation::FirstOrder),
            "vrrw" => Ok(Exploitation::Vrrw),
            "drrw-kl" => Ok(Exploitation::DrrwKl),
            "drrw-js" => Ok(Exploitation::DrrwJs),
            _ => Err(Error::Config(format!("unknown exploitation mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub exploitation: Exploitation,
    pub exploration: Exploration,
    /// R.
    pub walks_per_node: usize,
    /// L, the total number of nodes in a path including the start.
    pub walk_length: usize,
    pub seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            exploitation: Exploitation::DrrwJs,
            exploration: Exploration::Ucb,
            walks_per_node: 80,
            walk_length: 40,
            seed: 0,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.walk_length < 2 {
            return Err(Error::Config("walk length must be at least 2".into()));
        }
        if self.walks_per_node < 1 {
            return Err(Error::Config("walks per node must be at least 1".into()));
        }
        if let Some(eps) = self.exploration.epsilon() {
            if !(0.0..=1.0).contains(&eps) {
                return Err(Error::Config(format!(
                    "epsilon must lie in [0, 1], got {eps}"
                )));
            }
        }
        Ok(())
    }
}

/// Reusable per-worker sampling state.
#[derive(Debug, Clone)]
pub struct Walker {
    state: WalkState,
    scratch: Vec<f64>,
}

impl Walker {
    pub fn new(node_count: usize) -> Self {
        Walker {
            state: WalkState::new(node_count, 0),
            scratch: Vec::new(),
        }
    }

    pub fn state(&self) -> &WalkState {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut WalkState {
        &mut self.state
    }

    /// Runs one walk of up to `length` nodes from `start`. Returns `true` if
    /// the walk was cut short by a dead end.
    pub fn walk<R: Rng>(
        &mut self,
        graph: &Graph,
        start: Node,
        length: usize,
        config: &WalkConfig,
        rng: &mut R,
    ) -> bool {
        self.state.reset(start);
        while self.state.path().len() < length {
            match sample_with(&self.state, graph, config, rng, &mut self.scratch) {
                Some(next) => self.state.push(next),
                None => return true,
            }
        }
        false
    }
}

/// Draws `X(n + 1)`. `None` when the current node has no neighbors.
pub fn sample_next<R: Rng>(
    state: &WalkState,
    graph: &Graph,
    config: &WalkConfig,
    rng: &mut R,
) -> Option<Node> {
    sample_with(state, graph, config, rng, &mut Vec::new())
}

fn sample_with<R: Rng>(
    state: &WalkState,
    graph: &Graph,
    config: &WalkConfig,
    rng: &mut R,
    scratch: &mut Vec<f64>,
) -> Option<Node> {
    let nbrs = graph.neighbors(state.current());
    if nbrs.is_empty() {
        return None;
    }
    let uniform = |rng: &mut R| nbrs[rng.random_range(0..nbrs.len())];
    if config.exploitation == Exploitation::FirstOrder {
        return Some(uniform(rng));
    }
    let use_ucb = match config.exploration {
        Exploration::EpsilonGreedy { epsilon } => {
            if rng.random::<f64>() < epsilon {
                return Some(uniform(rng));
            }
            false
        }
        Exploration::Ucb => true,
        Exploration::None => false,
    };
    policy_weights(state, nbrs, config.exploitation, use_ucb, scratch);
    Some(nbrs[draw(scratch, rng)])
}

/// Fills `out` with the (possibly unnormalized) exploitation-policy weights
/// over `nbrs`.
///
/// Unvisited neighbors all have `Z = 1` and therefore share one score, which
/// is computed once per step.
fn policy_weights(
    state: &WalkState,
    nbrs: &[Node],
    exploitation: Exploitation,
    use_ucb: bool,
    out: &mut Vec<f64>,
) {
    out.clear();
    let denom = (state.step() + state.node_count()) as f64;
    let ln_zu = if use_ucb {
        (state.local_time(state.start()) as f64).ln()
    } else {
        0.0
    };
    let exploit = |z: f64| match exploitation {
        Exploitation::DrrwKl => 1.0 - kl_append_divergence(z, denom),
        Exploitation::DrrwJs => 1.0 - js_append_divergence(z, denom),
        Exploitation::Vrrw | Exploitation::FirstOrder => z,
    };
    let bonus = |z: f64| if use_ucb { (ln_zu / z).sqrt() } else { 0.0 };

    match exploitation {
        Exploitation::Vrrw if !use_ucb => {
            // Sample proportional to local time directly.
            out.extend(nbrs.iter().map(|&x| state.local_time(x) as f64));
        }
        Exploitation::Vrrw => {
            let total: f64 = nbrs.iter().map(|&x| state.local_time(x) as f64).sum();
            let fresh = 1.0 / total + bonus(1.0);
            out.extend(nbrs.iter().map(|&x| match state.local_time(x) {
                1 => fresh,
                z => z as f64 / total + bonus(z as f64),
            }));
            softmax_in_place(out);
        }
        _ => {
            let fresh = exploit(1.0) + bonus(1.0);
            out.extend(nbrs.iter().map(|&x| match state.local_time(x) {
                1 => fresh,
                z => exploit(z as f64) + bonus(z as f64),
            }));
            softmax_in_place(out);
        }
    }
}

/// Index drawn proportionally to nonnegative `weights`.
fn draw<R: Rng>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut target = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if target < w {
            return i;
        }
        target -= w;
    }
    // Floating-point residue: fall back to the last positive weight.
    weights
        .iter()
        .rposition(|&w| w > 0.0)
        .unwrap_or(weights.len() - 1)
}

/// Exact next-step distribution over the neighbors of the current node,
/// in neighbor order, including the epsilon-greedy mixture. `None` at a
/// dead end.
pub fn next_step_distribution(
    state: &WalkState,
    graph: &Graph,
    config: &WalkConfig,
) -> Option<Vec<f64>> {
    let nbrs = graph.neighbors(state.current());
    if nbrs.is_empty() {
        return None;
    }
    let k = nbrs.len() as f64;
    if config.exploitation == Exploitation::FirstOrder {
        return Some(vec![1.0 / k; nbrs.len()]);
    }
    let mut p = Vec::new();
    let use_ucb = config.exploration == Exploration::Ucb;
    policy_weights(state, nbrs, config.exploitation, use_ucb, &mut p);
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    if let Exploration::EpsilonGreedy { epsilon } = config.exploration {
        p.iter_mut()
            .for_each(|x| *x = epsilon / k + (1.0 - epsilon) * *x);
    }
    Some(p)
}

/// A single walk of `config.walk_length` nodes from `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub path: Vec<Node>,
    pub truncated: bool,
}

pub fn generate_walk<R: Rng>(graph: &Graph, start: Node, config: &WalkConfig, rng: &mut R) -> Walk {
    let mut walker = Walker::new(graph.node_count());
    let truncated = walker.walk(graph, start, config.walk_length, config, rng);
    Walk {
        path: walker.state.into_path(),
        truncated,
    }
}
