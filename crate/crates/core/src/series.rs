//! Exact Taylor coefficients of the heat kernel.
//!
//! `p_t(x, y) = sum_k c_k t^k` with `c_k = (L^k)_{xy} / k!`. The vectors
//! `L^k δ_x` are produced by exact sparse recursion, in big integers for
//! unweighted graphs and big rationals otherwise, so no rounding ever enters.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Coefficients `c_0..=c_K` of `p_t(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPrefix {
    pub x: usize,
    pub y: usize,
    pub coeffs: Vec<BigRational>,
}

impl SeriesPrefix {
    /// Highest order computed.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `sum_k c_k t^k` evaluated in `f64`.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + crate::graph::rational_to_f64(c))
    }
}

/// Iterator over the exact vectors `L^k δ_x`, `k = 0, 1, 2, ...`.
#[derive(Debug, Clone)]
pub struct LaplacianPowers<'g> {
    graph: &'g Graph,
    state: PowerState,
}

#[derive(Debug, Clone)]
enum PowerState {
    Integer(Vec<BigInt>),
    Rational(Vec<BigRational>),
}

impl<'g> LaplacianPowers<'g> {
    pub fn new(graph: &'g Graph, x: usize) -> Self {
        let n = graph.vertex_count();
        let state = if graph.is_weighted() {
            let mut u = vec![BigRational::zero(); n];
            u[x] = BigRational::one();
            PowerState::Rational(u)
        } else {
            let mut u = vec![BigInt::zero(); n];
            u[x] = BigInt::one();
            PowerState::Integer(u)
        };
        LaplacianPowers { graph, state }
    }

    fn current(&self) -> Vec<BigRational> {
        match &self.state {
            PowerState::Integer(u) => u.iter().cloned().map(BigRational::from_integer).collect(),
            PowerState::Rational(u) => u.clone(),
        }
    }

    fn advance(&mut self) {
        let g = self.graph;
        let n = g.vertex_count();
        self.state = match &self.state {
            PowerState::Integer(u) => PowerState::Integer(
                (0..n)
                    .map(|y| {
                        let mut acc: BigInt = g.neighbors(y).iter().map(|&(z, _)| &u[z]).sum();
                        acc -= &u[y] * BigInt::from(g.degree(y));
                        acc
                    })
                    .collect(),
            ),
            PowerState::Rational(u) => PowerState::Rational(
                (0..n)
                    .map(|y| {
                        let mut acc = BigRational::zero();
                        for &(z, e) in g.neighbors(y) {
                            let w = g.weight(e);
                            acc += (&u[z] - &u[y]) * w;
                        }
                        acc
                    })
                    .collect(),
            ),
        };
    }
}

impl Iterator for LaplacianPowers<'_> {
    type Item = Vec<BigRational>;

    fn next(&mut self) -> Option<Vec<BigRational>> {
        let out = self.current();
        self.advance();
        Some(out)
    }
}

pub fn factorial(k: usize) -> BigInt {
    (2..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `coeffs[k][y] = (L^k)_{xy} / k!` for every `y` and `k <= max_order`.
pub fn source_coefficients(g: &Graph, x: usize, max_order: usize) -> Vec<Vec<BigRational>> {
    let mut fact = BigInt::one();
    LaplacianPowers::new(g, x)
        .take(max_order + 1)
        .enumerate()
        .map(|(k, u)| {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            let f = BigRational::from_integer(fact.clone());
            u.into_iter().map(|v| v / &f).collect()
        })
        .collect()
}

/// Exact `(L^k)_{xy} / k!`.
pub fn kernel_taylor_coefficient(g: &Graph, x: usize, y: usize, k: usize) -> Result<BigRational> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    let u = LaplacianPowers::new(g, x)
        .nth(k)
        .expect("power iterator is unbounded");
    Ok(u[y].clone() / BigRational::from_integer(factorial(k)))
}

/// Coefficients of orders `0..=max_order`.
pub fn series_prefix(g: &Graph, x: usize, y: usize, max_order: usize) -> Result<SeriesPrefix> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    let mut fact = BigInt::one();
    let coeffs = LaplacianPowers::new(g, x)
        .take(max_order + 1)
        .enumerate()
        .map(|(k, u)| {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            u[y].clone() / BigRational::from_integer(fact.clone())
        })
        .collect();
    Ok(SeriesPrefix { x, y, coeffs })
}

/// First nonzero coefficient `(d, c_d)` of `p_t(x, y)`.
///
/// The search stops at `k = n`: a connected pair has distance at most `n - 1`,
/// so if nothing is nonzero by then the pair is disconnected.
pub fn leading_order(g: &Graph, x: usize, y: usize) -> Result<(usize, BigRational)> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    let n = g.vertex_count();
    let mut fact = BigInt::one();
    for (k, u) in LaplacianPowers::new(g, x).take(n + 1).enumerate() {
        if k > 0 {
            fact *= BigInt::from(k);
        }
        if !u[y].is_zero() {
            let c = u[y].clone() / BigRational::from_integer(fact);
            debug_assert!(
                c > BigRational::zero(),
                "leading coefficient must be positive"
            );
            return Ok((k, c));
        }
    }
    Err(Error::Unreachable { x, y })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn grid() -> (Graph, usize, usize, usize) {
        let g = parse_edge_list("a0 a1\na1 a2\nb0 b1\nb1 b2\na0 b0\na1 b1\na2 b2").unwrap();
        let (a, b, c) = (
            g.index_of("a0").unwrap(),
            g.index_of("b1").unwrap(),
            g.index_of("b2").unwrap(),
        );
        (g, a, b, c)
    }

    /// Dense integer `L^k` by repeated full matrix products; independent of the
    /// sparse recursion above.
    fn dense_power_entry(g: &Graph, k: usize, x: usize, y: usize) -> BigInt {
        let n = g.vertex_count();
        let mut l = vec![vec![BigInt::zero(); n]; n];
        for &(u, v) in g.edges() {
            l[u][v] += 1;
            l[v][u] += 1;
            l[u][u] -= 1;
            l[v][v] -= 1;
        }
        let mut p: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect();
        for _ in 0..k {
            p = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|m| &p[i][m] * &l[m][j]).sum())
                        .collect()
                })
                .collect();
        }
        p[x][y].clone()
    }

    #[test]
    fn grid_golden_coefficients() {
        let (g, a, b, c) = grid();
        assert_eq!(kernel_taylor_coefficient(&g, a, b, 3).unwrap(), q(-5, 2));
        assert_eq!(kernel_taylor_coefficient(&g, a, c, 4).unwrap(), q(-7, 6));
        assert_eq!(kernel_taylor_coefficient(&g, a, b, 1).unwrap(), q(0, 1));
        assert_eq!(kernel_taylor_coefficient(&g, a, b, 2).unwrap(), q(1, 1));
    }

    #[test]
    fn p3_third_order_end_to_end() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        // Dense integer oracle: (L^3)_{02} = -4, so c_3 = -4/6.
        assert_eq!(dense_power_entry(&g, 3, 0, 2), BigInt::from(-4));
        assert_eq!(kernel_taylor_coefficient(&g, 0, 2, 3).unwrap(), q(-2, 3));
        // Closed form 1/3 - e^{-t}/2 + e^{-3t}/6: t^3 coefficient is 1/12 - 27/36 = -2/3.
        let closed = q(1, 2) * q(1, 6) + q(1, 6) * q(-27, 6);
        assert_eq!(closed, q(-2, 3));
    }

    #[test]
    fn k2_prefixes() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        // Taylor expansion of (1 - e^{-2t})/2.
        assert_eq!(
            series_prefix(&g, 0, 1, 3).unwrap().coeffs,
            vec![q(0, 1), q(1, 1), q(-1, 1), q(2, 3)]
        );
        assert_eq!(
            series_prefix(&g, 0, 0, 1).unwrap().coeffs,
            vec![q(1, 1), q(-1, 1)]
        );
    }

    #[test]
    fn adjacent_bipartite_pair_second_order() {
        let (g, a, _, _) = grid();
        let a1 = g.index_of("a1").unwrap();
        let s = series_prefix(&g, a, a1, 2).unwrap();
        let degs = (g.degree(a) + g.degree(a1)) as i64;
        assert_eq!(s.coeffs, vec![q(0, 1), q(1, 1), q(-degs, 2)]);
    }

    #[test]
    fn leading_orders() {
        let (g, a, _, c) = grid();
        assert_eq!(leading_order(&g, a, c).unwrap(), (3, q(1, 2)));
        assert_eq!(leading_order(&g, c, c).unwrap(), (0, q(1, 1)));
        let w = parse_edge_list("0 1 3/2").unwrap();
        assert_eq!(leading_order(&w, 0, 1).unwrap(), (1, q(3, 2)));
    }

    #[test]
    fn leading_order_disconnected() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            leading_order(&g, 0, 3).unwrap_err(),
            Error::Unreachable { x: 0, y: 3 }
        );
    }

    #[test]
    fn sparse_recursion_matches_dense_powers() {
        let (g, ..) = grid();
        for x in 0..6 {
            let coeffs = source_coefficients(&g, x, 6);
            for (k, row) in coeffs.iter().enumerate() {
                for (y, c) in row.iter().enumerate() {
                    let dense = BigRational::new(dense_power_entry(&g, k, x, y), factorial(k));
                    assert_eq!(*c, dense, "x={x} y={y} k={k}");
                }
            }
        }
    }

    #[test]
    fn weighted_and_unweighted_paths_agree_on_unit_weights() {
        let plain = parse_edge_list("a b\nb c\nc a\nc d").unwrap();
        let unit = parse_edge_list("a b 1\nb c 1\nc a 1/1\nc d 1.0").unwrap();
        for x in 0..4 {
            assert_eq!(
                source_coefficients(&plain, x, 5),
                source_coefficients(&unit, x, 5)
            );
        }
    }

    #[test]
    fn eval_matches_closed_form_for_small_t() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let s = series_prefix(&g, 0, 1, 12).unwrap();
        let t = 0.05;
        assert!((s.eval(t) - (1.0 - (-2.0 * t).exp()) / 2.0).abs() < 1e-15);
    }
}
