use crate::graph::Node;

/// One in-progress walk.
///
/// Local time follows the vertex-reinforcement convention: the start node
/// `X(0)` is not counted, so `Z(n, v) = 1 + #{1 <= s <= n : X(s) = v}` and
/// the smoothed occupation vector `Z(n, v) / (n + N)` sums to one.
///
/// Counts live in a dense buffer sized to the graph; only entries touched by
/// the current walk are cleared on [`WalkState::reset`], so one state can be
/// reused across many walks at `O(L)` reset cost.
#[derive(Debug, Clone)]
pub struct WalkState {
    path: Vec<Node>,
    counts: Vec<u32>,
    touched: Vec<Node>,
}

impl WalkState {
    pub fn new(node_count: usize, start: Node) -> Self {
        assert!((start as usize) < node_count, "start node out of range");
        WalkState {
            path: vec![start],
            counts: vec![0; node_count],
            touched: Vec::new(),
        }
    }

    /// Starts a fresh walk at `start`, discarding all visit history.
    pub fn reset(&mut self, start: Node) {
        for &v in &self.touched {
            self.counts[v as usize] = 0;
        }
        self.touched.clear();
        self.path.clear();
        self.path.push(start);
    }

    /// Appends `v` as `X(n + 1)`.
    #[inline]
    pub fn push(&mut self, v: Node) {
        let c = &mut self.counts[v as usize];
        if *c == 0 {
            self.touched.push(v);
        }
        *c += 1;
        self.path.push(v);
    }

    pub fn path(&self) -> &[Node] {
        &self.path
    }

    pub fn into_path(self) -> Vec<Node> {
        self.path
    }

    pub fn start(&self) -> Node {
        self.path[0]
    }

    #[inline]
    pub fn current(&self) -> Node {
        *self.path.last().unwrap()
    }

    /// Step index `n`, i.e. the number of appended nodes.
    #[inline]
    pub fn step(&self) -> usize {
        self.path.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.counts.len()
    }

    /// Visits to `v` at steps `1..=n`.
    #[inline]
    pub fn visits(&self, v: Node) -> u32 {
        self.counts[v as usize]
    }

    /// `Z(n, v)`: visits plus one.
    #[inline]
    pub fn local_time(&self, v: Node) -> u32 {
        self.counts[v as usize] + 1
    }

    /// Sparse view of the nonzero visit counts.
    pub fn visit_counts(&self) -> impl Iterator<Item = (Node, u32)> + '_ {
        self.touched
            .iter()
            .map(move |&v| (v, self.counts[v as usize]))
    }

    /// Occupation vector `w(n)` in its sparse representation.
    pub fn occupation(&self) -> Occupation<'_> {
        Occupation { state: self }
    }
}

/// Laplace-smoothed empirical visit distribution of a walk.
///
/// Unvisited nodes all share the implicit value `1 / (n + N)`.
#[derive(Debug, Clone, Copy)]
pub struct Occupation<'a> {
    state: &'a WalkState,
}

impl Occupation<'_> {
    /// Normalizer `n + N`.
    pub fn denominator(&self) -> f64 {
        (self.state.step() + self.state.node_count()) as f64
    }

    pub fn get(&self, v: Node) -> f64 {
        self.state.local_time(v) as f64 / self.denominator()
    }

    /// Value shared by every unvisited node.
    pub fn default_value(&self) -> f64 {
        1.0 / self.denominator()
    }

    /// Explicit entries for visited nodes.
    pub fn explicit(&self) -> impl Iterator<Item = (Node, f64)> + '_ {
        let denom = self.denominator();
        self.state
            .visit_counts()
            .map(move |(v, c)| (v, (c + 1) as f64 / denom))
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut w = vec![self.default_value(); self.state.node_count()];
        for (v, x) in self.explicit() {
            w[v as usize] = x;
        }
        w
    }
}
