//! Simple finite graphs with optional positive rational edge weights.

mod bipartite;
mod parse;
mod paths;

pub use bipartite::{is_bipartite, Bipartition};
pub use parse::{parse_edge_list, parse_weight};
pub use paths::{
    adjacency_power_entry, adjacency_power_rows, bfs_profile, walk_count, DistanceProfile,
};

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Why an edge was rejected by [`GraphBuilder::add_edge`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeRejection {
    SelfLoop,
    Duplicate,
    NonPositiveWeight,
}

/// An undirected simple graph. Immutable once built.
///
/// Vertices are dense indices `0..n` assigned in first-appearance order; the
/// original labels are kept for output.
#[derive(Debug, Clone)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// Endpoints with `u < v`, in insertion order.
    edges: Vec<(usize, usize)>,
    /// `(neighbor, edge id)` sorted by neighbor.
    adjacency: Vec<Vec<(usize, usize)>>,
    weights: Option<Vec<BigRational>>,
    weights_f64: Vec<f64>,
}

impl Graph {
    /// Unweighted graph on vertices labelled `"0"`, `"1"`, ...
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut b = GraphBuilder::with_vertices(n);
        for &(u, v) in edges {
            check_index(u, n)?;
            check_index(v, n)?;
            b.add_edge_indices(u, v, None)
                .map_err(|r| Error::InvalidArgument(format!("edge ({u}, {v}): {r:?}")))?;
        }
        Ok(b.build())
    }

    /// Weighted graph on vertices labelled `"0"`, `"1"`, ...
    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, BigRational)]) -> Result<Graph> {
        let mut b = GraphBuilder::with_vertices(n);
        for (u, v, w) in edges {
            check_index(*u, n)?;
            check_index(*v, n)?;
            b.add_edge_indices(*u, *v, Some(w.clone()))
                .map_err(|r| Error::InvalidArgument(format!("edge ({u}, {v}): {r:?}")))?;
        }
        Ok(b.build())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        check_index(v, self.vertex_count())
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `(neighbor, edge id)` pairs of `v`, sorted by neighbor.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// True when the input carried weights (even if every weight is 1).
    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn weight(&self, edge: usize) -> BigRational {
        match &self.weights {
            Some(w) => w[edge].clone(),
            None => BigRational::one(),
        }
    }

    pub fn weight_f64(&self, edge: usize) -> f64 {
        self.weights_f64[edge]
    }

    pub fn weighted_degree(&self, v: usize) -> BigRational {
        self.adjacency[v]
            .iter()
            .fold(BigRational::zero(), |acc, &(_, e)| acc + self.weight(e))
    }

    pub fn weighted_degree_f64(&self, v: usize) -> f64 {
        self.adjacency[v]
            .iter()
            .map(|&(_, e)| self.weights_f64[e])
            .sum()
    }

    pub fn max_weighted_degree_f64(&self) -> f64 {
        (0..self.vertex_count())
            .map(|v| self.weighted_degree_f64(v))
            .fold(0.0, f64::max)
    }

    /// Component id of every vertex; ids are assigned in order of lowest member.
    pub fn components(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &(w, _) in &self.adjacency[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }
}

fn check_index(v: usize, n: usize) -> Result<()> {
    if v < n {
        Ok(())
    } else {
        Err(Error::InvalidVertex { index: v, n })
    }
}

/// Incremental construction; enforces the simple-graph invariants.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    seen: HashSet<(usize, usize)>,
    weights: Vec<Option<BigRational>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        let mut b = Self::new();
        for i in 0..n {
            b.vertex(&i.to_string());
        }
        b
    }

    /// Index of `label`, registering it if unseen.
    pub fn vertex(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), i);
        i
    }

    pub fn add_edge(
        &mut self,
        u: &str,
        v: &str,
        weight: Option<BigRational>,
    ) -> std::result::Result<(), EdgeRejection> {
        if u == v {
            return Err(EdgeRejection::SelfLoop);
        }
        let (iu, iv) = (self.vertex(u), self.vertex(v));
        self.add_edge_indices(iu, iv, weight)
    }

    fn add_edge_indices(
        &mut self,
        u: usize,
        v: usize,
        weight: Option<BigRational>,
    ) -> std::result::Result<(), EdgeRejection> {
        if u == v {
            return Err(EdgeRejection::SelfLoop);
        }
        if weight.as_ref().is_some_and(|w| !w.is_positive()) {
            return Err(EdgeRejection::NonPositiveWeight);
        }
        let key = (u.min(v), u.max(v));
        if !self.seen.insert(key) {
            return Err(EdgeRejection::Duplicate);
        }
        self.edges.push(key);
        self.weights.push(weight);
        Ok(())
    }

    pub fn build(self) -> Graph {
        let n = self.labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let weights = if self.weights.iter().any(Option::is_some) {
            Some(
                self.weights
                    .into_iter()
                    .map(|w| w.unwrap_or_else(BigRational::one))
                    .collect::<Vec<_>>(),
            )
        } else {
            None
        };
        let weights_f64 = match &weights {
            Some(w) => w.iter().map(rational_to_f64).collect(),
            None => vec![1.0; self.edges.len()],
        };
        Graph {
            labels: self.labels,
            index: self.index,
            edges: self.edges,
            adjacency,
            weights,
            weights_f64,
        }
    }
}

/// Nearest-ish `f64` of a rational, robust to numerators and denominators beyond `f64` range.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
    let scale = BigInt::one() << shift;
    let n = (q.numer() / &scale).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() / &scale).to_f64().unwrap_or(f64::NAN);
    n / d
}
