//! Network graphs and their generators.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{NodeRng, Stream};

pub type NodeId = usize;

/// Generator families understood by [`build_topology`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Path,
    Cycle,
    Star,
    Complete,
    Grid,
    Layered,
    RandomDigraph,
    RandomUndirected,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Path,
        Family::Cycle,
        Family::Star,
        Family::Complete,
        Family::Grid,
        Family::Layered,
        Family::RandomDigraph,
        Family::RandomUndirected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Star => "star",
            Family::Complete => "complete",
            Family::Grid => "grid",
            Family::Layered => "layered",
            Family::RandomDigraph => "random-digraph",
            Family::RandomUndirected => "random-undirected",
        }
    }

    pub fn is_random(self) -> bool {
        matches!(self, Family::RandomDigraph | Family::RandomUndirected)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidTopology(format!("unknown family {s:?}")))
    }
}

/// Parameters for one generated graph.
#[derive(Debug, Clone, PartialEq)]
pub struct TopologySpec {
    pub family: Family,
    pub n: usize,
    /// Extra-arc probability for the random families.
    pub p: f64,
    /// Only meaningful for [`Family::Cycle`].
    pub directed: bool,
    /// Layer width for [`Family::Layered`]; `None` picks `ceil(sqrt(n))`.
    pub width: Option<usize>,
    pub seed: u64,
}

impl TopologySpec {
    pub fn new(family: Family, n: usize) -> Self {
        Self { family, n, p: 0.0, directed: false, width: None, seed: 0 }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn directed(mut self, directed: bool) -> Self {
        self.directed = directed;
        self
    }

    pub fn with_width(mut self, width: usize) -> Self {
        self.width = Some(width);
        self
    }
}

/// An immutable, connected network.
///
/// Undirected graphs store both arc directions. The eccentricity `D` (the
/// largest shortest-path distance over all ordered pairs) is computed once
/// at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    label: String,
    directed: bool,
    out: Vec<Vec<NodeId>>,
    inn: Vec<Vec<NodeId>>,
    eccentricity: usize,
}

impl Topology {
    /// Builds a topology from an arc list. For undirected graphs every arc is
    /// mirrored. Self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)], directed: bool) -> Result<Self> {
        Self::from_edges_labeled("custom", n, edges, directed)
    }

    fn from_edges_labeled(label: &str, n: usize, edges: &[(NodeId, NodeId)], directed: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyTopology);
        }
        let mut arcs = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidTopology(format!("arc ({u},{v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidTopology(format!("self-loop at {u}")));
            }
            arcs.insert((u, v));
            if !directed {
                arcs.insert((v, u));
            }
        }
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (u, v) in arcs {
            out[u].push(v);
            inn[v].push(u);
        }
        let mut topo = Topology { label: label.to_string(), directed, out, inn, eccentricity: 0 };
        topo.eccentricity = topo.compute_eccentricity().ok_or(Error::Disconnected { directed })?;
        Ok(topo)
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Cached eccentricity `D`.
    pub fn eccentricity(&self) -> usize {
        self.eccentricity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.inn[v]
    }

    pub fn has_arc(&self, u: NodeId, v: NodeId) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    /// All arcs in ascending order.
    pub fn arcs(&self) -> Vec<(NodeId, NodeId)> {
        self.out.iter().enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v))).collect()
    }

    /// Hop distances from `source` along arcs; `None` for unreachable nodes.
    pub fn distances_from(&self, source: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.out[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    fn compute_eccentricity(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.n() {
            for d in self.distances_from(s) {
                best = best.max(d?);
            }
        }
        Some(best)
    }
}

/// Number of bits in `log n` as used by every schedule: `ceil(log2 n)`,
/// clamped to at least 1.
pub fn log2_ceil(n: usize) -> usize {
    if n <= 2 {
        1
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Eccentricity of `t`.
pub fn eccentricity(t: &Topology) -> usize {
    t.eccentricity()
}

pub fn build_topology(spec: &TopologySpec) -> Result<Topology> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::EmptyTopology);
    }
    if !(0.0..=1.0).contains(&spec.p) || spec.p.is_nan() {
        return Err(Error::InvalidTopology(format!("probability {} outside [0, 1]", spec.p)));
    }
    let mut rng = NodeRng::detached(spec.seed, Stream::Topology);
    let mut edges = Vec::new();
    let mut directed = false;
    match spec.family {
        Family::Path => edges.extend((1..n).map(|v| (v - 1, v))),
        Family::Cycle => {
            directed = spec.directed;
            edges.extend((1..n).map(|v| (v - 1, v)));
            if n > 2 || (directed && n == 2) {
                edges.push((n - 1, 0));
            }
        }
        Family::Star => edges.extend((1..n).map(|v| (0, v))),
        Family::Complete => {
            for u in 0..n {
                edges.extend((u + 1..n).map(|v| (u, v)));
            }
        }
        Family::Grid => {
            let cols = (n as f64).sqrt().ceil() as usize;
            for v in 0..n {
                if v % cols + 1 < cols && v + 1 < n {
                    edges.push((v, v + 1));
                }
                if v + cols < n {
                    edges.push((v, v + cols));
                }
            }
        }
        Family::Layered => {
            // Node 0 alone in layer 0, then layers of `width` nodes with every
            // arc between consecutive layers.
            let width = spec.width.unwrap_or_else(|| (n as f64).sqrt().ceil() as usize);
            if width == 0 {
                return Err(Error::InvalidTopology("layer width must be positive".into()));
            }
            let layer_of = |v: usize| if v == 0 { 0 } else { 1 + (v - 1) / width };
            for u in 0..n {
                for v in u + 1..n {
                    if layer_of(v) == layer_of(u) + 1 {
                        edges.push((u, v));
                    }
                }
            }
        }
        Family::RandomDigraph => {
            directed = true;
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            if n > 1 {
                for i in 0..n {
                    edges.push((order[i], order[(i + 1) % n]));
                }
            }
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.random_bool(spec.p) {
                        edges.push((u, v));
                    }
                }
            }
        }
        Family::RandomUndirected => {
            // Random spanning tree: each node in a shuffled order attaches to
            // a uniformly chosen earlier node.
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            for i in 1..n {
                let parent = order[rng.random_range(0..i)];
                edges.push((parent, order[i]));
            }
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(spec.p) {
                        edges.push((u, v));
                    }
                }
            }
        }
    }
    Topology::from_edges_labeled(spec.family.name(), n, &edges, directed)
}
