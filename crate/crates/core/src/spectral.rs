//! The Kirchhoff matrix `L = A - D` and its symmetric eigendecomposition.
//!
//! Internally eigenvalues are those of `L` itself (`mu_k <= 0`). The
//! positive-Laplacian values `lambda_k = -mu_k` are only produced at the
//! reporting boundary, see [`SpectralDecomposition::laplacian_eigenvalues`].

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::Matrix;

/// Relative off-diagonal tolerance of the Jacobi iteration (times `||L||_F`).
pub const JACOBI_TOLERANCE: f64 = 1e-12;
/// Sweep cap of the Jacobi iteration.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense `L = A - D`, kept both exactly and as `f64`.
#[derive(Debug, Clone)]
pub struct KirchhoffMatrix {
    n: usize,
    exact: Vec<BigRational>,
    dense: Matrix,
}

impl KirchhoffMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn exact(&self, i: usize, j: usize) -> &BigRational {
        &self.exact[i * self.n + j]
    }

    pub fn dense(&self) -> &Matrix {
        &self.dense
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.dense.frobenius_norm()
    }
}

/// Off-diagonal `(x, y)` is the weight of edge `xy` (or 0); diagonal is minus the weighted degree.
pub fn kirchhoff_matrix(g: &Graph) -> KirchhoffMatrix {
    let n = g.vertex_count();
    let mut exact = vec![BigRational::zero(); n * n];
    let mut dense = Matrix::zeros(n);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let w = g.weight(e);
        let wf = g.weight_f64(e);
        exact[u * n + v] += &w;
        exact[v * n + u] += &w;
        exact[u * n + u] -= &w;
        exact[v * n + v] -= &w;
        dense[(u, v)] += wf;
        dense[(v, u)] += wf;
        dense[(u, u)] -= wf;
        dense[(v, v)] -= wf;
    }
    KirchhoffMatrix { n, exact, dense }
}

/// Eigenpairs of `L`: `mu` sorted descending, eigenvectors in the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub mu: Vec<f64>,
    pub vectors: Matrix,
    /// Jacobi sweeps performed.
    pub sweeps: usize,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// Eigenvalues of `D - A`, ascending.
    pub fn laplacian_eigenvalues(&self) -> Vec<f64> {
        self.mu.iter().map(|m| -m).collect()
    }

    /// Number of eigenvalues with `|mu| <= tol`.
    pub fn zero_multiplicity(&self, tol: f64) -> usize {
        self.mu.iter().filter(|m| m.abs() <= tol).count()
    }

    /// `V diag(f(mu)) V^T`, computed on the upper triangle and mirrored.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.n();
        let fm: Vec<f64> = self.mu.iter().map(|&m| f(m)).collect();
        let v = &self.vectors;
        let mut out = Matrix::zeros(n);
        for x in 0..n {
            for y in x..n {
                let mut acc = 0.0;
                for (k, &fk) in fm.iter().enumerate() {
                    acc += fk * (v[(x, k)] * v[(y, k)]);
                }
                out[(x, y)] = acc;
                out[(y, x)] = acc;
            }
        }
        out
    }
}

/// Cyclic Jacobi on the dense shadow of `l`.
///
/// Stops once the off-diagonal Frobenius norm drops to
/// `JACOBI_TOLERANCE * ||L||_F`. Rotations are skipped for exactly-zero
/// entries, so block structure (disconnected components) is preserved exactly.
/// Each eigenvector's largest-magnitude entry is made positive (lowest index on ties).
pub fn eigendecompose(l: &KirchhoffMatrix) -> Result<SpectralDecomposition> {
    jacobi(l.dense())
}

pub(crate) fn jacobi(input: &Matrix) -> Result<SpectralDecomposition> {
    let n = input.n();
    let mut a = input.clone();
    let mut v = Matrix::identity(n);
    let tol = JACOBI_TOLERANCE * input.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= tol {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Convergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable: equal eigenvalues keep their diagonal order.
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let mu = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::from_fn(n, |r, k| v[(r, order[k])]);
    fix_signs(&mut vectors);

    Ok(SpectralDecomposition {
        mu,
        vectors,
        sweeps,
    })
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.n();
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            s += a[(p, q)] * a[(p, q)];
        }
    }
    (2.0 * s).sqrt()
}

/// Annihilates `a[p][q]` with a plane rotation and accumulates it into `v`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = a.n();
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for r in 0..n {
        if r != p && r != q {
            let arp = a[(r, p)];
            let arq = a[(r, q)];
            let new_rp = c * arp - s * arq;
            let new_rq = s * arp + c * arq;
            a[(r, p)] = new_rp;
            a[(p, r)] = new_rp;
            a[(r, q)] = new_rq;
            a[(q, r)] = new_rq;
        }
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = c * vrp - s * vrq;
        v[(r, q)] = s * vrp + c * vrq;
    }
}

fn fix_signs(v: &mut Matrix) {
    let n = v.n();
    for k in 0..n {
        let max = (0..n).map(|r| v[(r, k)].abs()).fold(0.0, f64::max);
        let pivot = (0..n).find(|&r| v[(r, k)].abs() >= max * (1.0 - 1e-9));
        if let Some(r) = pivot {
            if v[(r, k)] < 0.0 {
                for i in 0..n {
                    v[(i, k)] = -v[(i, k)];
                }
            }
        }
    }
}

/// `sum_k mu_k^d V[x,k] V[y,k]`, i.e. `(L^d)_{xy}` through the spectrum.
///
/// At `d = dist(x, y)` this is the number of geodesics from `x` to `y`.
/// Symmetric in `x` and `y` bit for bit.
pub fn spectral_path_identity(dec: &SpectralDecomposition, x: usize, y: usize, d: u32) -> f64 {
    let v = &dec.vectors;
    dec.mu
        .iter()
        .enumerate()
        .map(|(k, &m)| pow_u32(m, d) * (v[(x, k)] * v[(y, k)]))
        .sum()
}

fn pow_u32(base: f64, exp: u32) -> f64 {
    match i32::try_from(exp) {
        Ok(e) => base.powi(e),
        Err(_) => base.powf(exp as f64),
    }
}
