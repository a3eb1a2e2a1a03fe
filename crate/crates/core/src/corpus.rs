//! Deterministic graph families for tests and benchmarks.
//!
//! Vertices are labelled `"0"`, `"1"`, ...; random families take an explicit
//! seed so every corpus is reproducible.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, GraphBuilder};

fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
    Graph::from_edges(n, &edges.into_iter().collect::<Vec<_>>())
        .expect("generated edges are simple")
}

pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|i| (i - 1, i)))
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least 3 vertices");
    build(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn complete(n: usize) -> Graph {
    build(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
}

/// Star with centre 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, (1..=leaves).map(|i| (0, i)))
}

/// `rows x cols` grid; vertex `(r, c)` has index `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let idx = move |r: usize, c: usize| r * cols + c;
    let horizontal =
        (0..rows).flat_map(move |r| (1..cols).map(move |c| (idx(r, c - 1), idx(r, c))));
    let vertical = (1..rows).flat_map(move |r| (0..cols).map(move |c| (idx(r - 1, c), idx(r, c))));
    build(rows * cols, horizontal.chain(vertical))
}

/// The 2 x 3 grid with rows `a0 a1 a2` and `b0 b1 b2`.
pub fn labelled_grid() -> Graph {
    let mut b = GraphBuilder::new();
    for (u, v) in [
        ("a0", "a1"),
        ("a1", "a2"),
        ("b0", "b1"),
        ("b1", "b2"),
        ("a0", "b0"),
        ("a1", "b1"),
        ("a2", "b2"),
    ] {
        b.add_edge(u, v, None).expect("simple");
    }
    b.build()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random labelled tree (random Prüfer sequence).
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Graph {
    if n <= 1 {
        return build(n, []);
    }
    if n == 2 {
        return build(2, [(0, 1)]);
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = (0..n)
            .find(|&v| degree[v] == 1)
            .expect("a leaf always exists");
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    build(n, edges)
}

/// Connected random graph: a random spanning tree plus every other pair
/// independently with probability `p`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let tree = random_tree(rng, n);
    let mut edges: Vec<(usize, usize)> = tree.edges().to_vec();
    let in_tree: std::collections::HashSet<_> = edges.iter().copied().collect();
    for i in 0..n {
        for j in i + 1..n {
            if !in_tree.contains(&(i, j)) && rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    build(n, edges)
}

/// Connected random bipartite graph with classes of sizes `left` and `right`
/// (both at least 1): a random spanning tree across the classes plus every
/// other cross pair with probability `p`.
pub fn random_bipartite<R: Rng>(rng: &mut R, left: usize, right: usize, p: f64) -> Graph {
    assert!(left >= 1 && right >= 1, "both classes must be nonempty");
    let n = left + right;
    let is_left = |v: usize| v < left;
    let mut edges = std::collections::BTreeSet::new();
    // Seed with one cross edge, then attach the rest in random order to a
    // placed vertex of the other class.
    let mut placed = vec![0, left];
    edges.insert((0, left));
    let mut rest: Vec<usize> = (1..left).chain(left + 1..n).collect();
    rest.shuffle(rng);
    for v in rest {
        let partners: Vec<usize> = placed
            .iter()
            .copied()
            .filter(|&u| is_left(u) != is_left(v))
            .collect();
        let u = *partners.choose(rng).expect("both classes already placed");
        edges.insert((u.min(v), u.max(v)));
        placed.push(v);
    }
    for i in 0..left {
        for j in left..n {
            if !edges.contains(&(i, j)) && rng.gen_bool(p) {
                edges.insert((i, j));
            }
        }
    }
    build(n, edges)
}

/// Copy of `g` with each edge weight drawn uniformly from `choices`.
pub fn with_random_weights<R: Rng>(rng: &mut R, g: &Graph, choices: &[BigRational]) -> Graph {
    let edges: Vec<_> = g
        .edges()
        .iter()
        .map(|&(u, v)| (u, v, choices.choose(rng).expect("nonempty choices").clone()))
        .collect();
    Graph::from_weighted_edges(g.vertex_count(), &edges).expect("weights are positive")
}

/// Disjoint union; vertices of `b` are shifted by `a.vertex_count()`.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let shift = a.vertex_count();
    build(
        shift + b.vertex_count(),
        a.edges()
            .iter()
            .copied()
            .chain(b.edges().iter().map(|&(u, v)| (u + shift, v + shift))),
    )
}
