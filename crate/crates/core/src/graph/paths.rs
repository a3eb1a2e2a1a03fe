use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Graph;

/// BFS distances from one source together with geodesic counts and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceProfile {
    pub source: usize,
    /// `None` for vertices in another component.
    pub dist: Vec<Option<usize>>,
    /// Number of shortest paths from `source`.
    pub geodesic_count: Vec<BigUint>,
    /// Sum over shortest paths of the product of their edge weights.
    pub geodesic_weight: Vec<BigRational>,
}

impl DistanceProfile {
    pub fn eccentricity(&self) -> usize {
        self.dist.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// Layered BFS: each vertex sums the counts (and weighted counts) of its
/// neighbours one layer closer to the source.
pub fn bfs_profile(g: &Graph, source: usize) -> DistanceProfile {
    let n = g.vertex_count();
    let mut dist = vec![None; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        let du = dist[u].unwrap_or(0);
        for &(w, _) in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }

    let mut geodesic_count = vec![BigUint::zero(); n];
    let mut geodesic_weight = vec![BigRational::zero(); n];
    geodesic_count[source] = BigUint::one();
    geodesic_weight[source] = BigRational::one();
    // BFS order visits every layer before the next one.
    for &v in order.iter().skip(1) {
        let dv = dist[v].unwrap_or(0);
        let mut count = BigUint::zero();
        let mut weight = BigRational::zero();
        for &(u, e) in g.neighbors(v) {
            if dist[u] == Some(dv - 1) {
                count += &geodesic_count[u];
                weight += &geodesic_weight[u] * g.weight(e);
            }
        }
        geodesic_count[v] = count;
        geodesic_weight[v] = weight;
    }

    DistanceProfile {
        source,
        dist,
        geodesic_count,
        geodesic_weight,
    }
}

/// Exact `(A^k)_{xy}` for the (weighted) adjacency matrix `A`.
///
/// For unweighted graphs this is the number of walks of length `k` from `x` to `y`.
pub fn adjacency_power_entry(g: &Graph, k: usize, x: usize, y: usize) -> BigRational {
    let mut rows = adjacency_power_rows(g, x, k);
    rows.swap_remove(k).swap_remove(y)
}

/// `rows[k][y] = (A^k)_{xy}` for `k <= max_k`, by exact vector recursion from `x`.
pub fn adjacency_power_rows(g: &Graph, x: usize, max_k: usize) -> Vec<Vec<BigRational>> {
    let n = g.vertex_count();
    let mut v = vec![BigRational::zero(); n];
    v[x] = BigRational::one();
    let mut rows = Vec::with_capacity(max_k + 1);
    for _ in 0..max_k {
        let next = (0..n)
            .map(|u| {
                g.neighbors(u)
                    .iter()
                    .filter(|&&(w, _)| !v[w].is_zero())
                    .fold(BigRational::zero(), |acc, &(w, e)| {
                        acc + &v[w] * g.weight(e)
                    })
            })
            .collect();
        rows.push(std::mem::replace(&mut v, next));
    }
    rows.push(v);
    rows
}

/// Number of walks of length `k` from `x` to `y`, ignoring edge weights.
pub fn walk_count(g: &Graph, k: usize, x: usize, y: usize) -> BigInt {
    let n = g.vertex_count();
    let mut v = vec![BigInt::zero(); n];
    v[x] = BigInt::one();
    for _ in 0..k {
        let next: Vec<BigInt> = (0..n)
            .map(|u| g.neighbors(u).iter().map(|&(w, _)| &v[w]).sum())
            .collect();
        v = next;
    }
    v.swap_remove(y)
}
