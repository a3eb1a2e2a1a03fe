//! Numerical heat kernels `p_t(x, y) = (exp(t L) δ_x)(y)`.
//!
//! Two engines that share nothing but the graph:
//!
//! - spectral: `sum_k exp(mu_k t) V[x,k] V[y,k]` from the Jacobi decomposition;
//! - uniformization: with `c` the largest weighted degree and `P = L/c + I`
//!   (nonnegative, rows summing to 1), `exp(tL) = exp(-ct) sum_k (ct)^k/k! P^k`.
//!   Every term is nonnegative, so the truncated series is entrywise
//!   nonnegative and never loses small entries to cancellation.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::Matrix;
use crate::par::Execution;
use crate::spectral::{eigendecompose, kirchhoff_matrix, SpectralDecomposition};

/// Default absolute truncation tolerance of the uniformization series.
pub const DEFAULT_EPS: f64 = 1e-12;

/// Largest Poisson mean handled in one series; longer times are split into
/// equal steps and the step kernel is raised to a power.
const MAX_STEP_MEAN: f64 = 32.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Spectral,
    Uniformization,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Spectral => "spectral",
            Method::Uniformization => "uniformization",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Method::Spectral),
            "uniformization" => Ok(Method::Uniformization),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}

/// Kernel matrix at a single time.
#[derive(Debug, Clone)]
pub struct HeatKernel {
    pub t: f64,
    pub matrix: Matrix,
    pub method: Method,
}

impl HeatKernel {
    pub fn entry(&self, x: usize, y: usize) -> f64 {
        self.matrix[(x, y)]
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "time must be finite and >= 0, got {t}"
        )))
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "tolerance must be > 0, got {eps}"
        )))
    }
}

/// `V diag(exp(mu t)) V^T`; exactly the identity at `t = 0`.
pub fn kernel_spectral(dec: &SpectralDecomposition, t: f64) -> Result<HeatKernel> {
    check_time(t)?;
    let matrix = if t == 0.0 {
        Matrix::identity(dec.n())
    } else {
        dec.reconstruct_with(|m| (m * t).exp())
    };
    Ok(HeatKernel {
        t,
        matrix,
        method: Method::Spectral,
    })
}

/// Spectral kernel entry without forming the whole matrix.
pub fn spectral_entry(dec: &SpectralDecomposition, t: f64, x: usize, y: usize) -> f64 {
    if t == 0.0 {
        return if x == y { 1.0 } else { 0.0 };
    }
    let v = &dec.vectors;
    dec.mu
        .iter()
        .enumerate()
        .map(|(k, &m)| (m * t).exp() * (v[(x, k)] * v[(y, k)]))
        .sum()
}

/// Truncated Poisson(mean) probabilities `w_0..=w_K` whose discarded tail is below `eps`.
///
/// The tail after `K` is bounded by `w_{K+1} / (1 - mean/(K+2))`, valid once `K + 2 > mean`.
pub fn poisson_weights(mean: f64, eps: f64) -> Vec<f64> {
    let mut weights = vec![(-mean).exp()];
    loop {
        let k = weights.len() - 1;
        let next = weights[k] * mean / (k + 1) as f64;
        let denom = 1.0 - mean / (k + 2) as f64;
        if denom > 0.0 && next / denom < eps {
            return weights;
        }
        weights.push(next);
    }
}

/// Upper bound on the Poisson mass beyond the last weight in `weights`.
fn poisson_tail_bound(mean: f64, weights: &[f64]) -> f64 {
    let k = weights.len() - 1;
    let next = weights[k] * mean / (k + 1) as f64;
    let denom = 1.0 - mean / (k + 2) as f64;
    if denom > 0.0 {
        next / denom
    } else {
        f64::INFINITY
    }
}

/// The uniformized chain `P = L/c + I`.
fn uniformized_chain(g: &Graph, c: f64) -> Matrix {
    let n = g.vertex_count();
    let mut p = Matrix::identity(n);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let w = g.weight_f64(e) / c;
        p[(u, v)] += w;
        p[(v, u)] += w;
        p[(u, u)] -= w;
        p[(v, v)] -= w;
    }
    p
}

/// Uniformization kernel with absolute truncation tolerance `eps`.
///
/// Graphs without edges (`c = 0`) return the identity, which is `exp(t * 0)`.
pub fn kernel_uniformization(g: &Graph, t: f64, eps: f64) -> Result<HeatKernel> {
    kernel_uniformization_with(g, t, eps, Execution::default())
}

pub fn kernel_uniformization_with(
    g: &Graph,
    t: f64,
    eps: f64,
    exec: Execution,
) -> Result<HeatKernel> {
    check_time(t)?;
    check_eps(eps)?;
    let n = g.vertex_count();
    let c = g.max_weighted_degree_f64();
    if c == 0.0 || t == 0.0 {
        return Ok(HeatKernel {
            t,
            matrix: Matrix::identity(n),
            method: Method::Uniformization,
        });
    }
    let mean = c * t;
    let steps = (mean / MAX_STEP_MEAN).ceil().max(1.0) as u32;
    let step_mean = mean / f64::from(steps);
    let p = uniformized_chain(g, c);

    let weights = poisson_weights(step_mean, eps / f64::from(steps));
    let mut term = Matrix::identity(n);
    let mut sum = Matrix::zeros(n);
    sum.add_scaled(weights[0], &term);
    for &w in &weights[1..] {
        term = term.matmul_with(&p, exec);
        sum.add_scaled(w, &term);
    }

    let matrix = if steps == 1 {
        sum
    } else {
        matrix_power(&sum, steps, exec)
    };
    Ok(HeatKernel {
        t,
        matrix,
        method: Method::Uniformization,
    })
}

fn matrix_power(base: &Matrix, mut exp: u32, exec: Execution) -> Matrix {
    let mut result: Option<Matrix> = None;
    let mut acc = base.clone();
    loop {
        if exp & 1 == 1 {
            result = Some(match result {
                None => acc.clone(),
                Some(r) => r.matmul_with(&acc, exec),
            });
        }
        exp >>= 1;
        if exp == 0 {
            break;
        }
        acc = acc.matmul_with(&acc, exec);
    }
    result.unwrap_or_else(|| Matrix::identity(base.n()))
}

/// `v P` for the uniformized chain, using adjacency lists.
fn chain_step(g: &Graph, c: f64, v: &[f64]) -> Vec<f64> {
    (0..g.vertex_count())
        .map(|y| {
            let mut acc = v[y] * (1.0 - g.weighted_degree_f64(y) / c);
            for &(z, e) in g.neighbors(y) {
                acc += v[z] * g.weight_f64(e) / c;
            }
            acc
        })
        .collect()
}

/// Single uniformization entry `p_t(x, y)` with relative tolerance `rel`.
///
/// Entries of `P^k` are at most 1, so stopping once the Poisson tail is below
/// `rel` times the partial sum bounds the relative truncation error by `rel`.
/// This keeps tiny entries (far-apart pairs at small `t`) accurate, which an
/// absolute tolerance cannot. Pairs in different components return exactly 0.
pub fn uniformization_entry(g: &Graph, t: f64, x: usize, y: usize, rel: f64) -> Result<f64> {
    check_time(t)?;
    check_eps(rel)?;
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    let n = g.vertex_count();
    let c = g.max_weighted_degree_f64();
    if c == 0.0 || t == 0.0 {
        return Ok(if x == y { 1.0 } else { 0.0 });
    }
    let mean = c * t;
    if mean > MAX_STEP_MEAN {
        return Ok(kernel_uniformization(g, t, rel)?.entry(x, y));
    }
    let mut v = vec![0.0; n];
    v[x] = 1.0;
    let mut weights = vec![(-mean).exp()];
    let mut sum = weights[0] * v[y];
    loop {
        let k = weights.len() - 1;
        if sum == 0.0 && k >= n {
            return Ok(0.0);
        }
        if sum > 0.0 && poisson_tail_bound(mean, &weights) <= rel * sum {
            return Ok(sum);
        }
        v = chain_step(g, c, &v);
        let w = weights[k] * mean / (k + 1) as f64;
        weights.push(w);
        sum += w * v[y];
    }
}

/// One kernel entry through either engine (`DEFAULT_EPS` for uniformization).
pub fn kernel_entry(g: &Graph, t: f64, x: usize, y: usize, method: Method) -> Result<f64> {
    check_time(t)?;
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    match method {
        Method::Spectral => {
            let dec = eigendecompose(&kirchhoff_matrix(g))?;
            Ok(spectral_entry(&dec, t, x, y))
        }
        Method::Uniformization => {
            let c = g.max_weighted_degree_f64();
            if c == 0.0 || t == 0.0 {
                return Ok(if x == y { 1.0 } else { 0.0 });
            }
            if c * t > MAX_STEP_MEAN {
                return Ok(kernel_uniformization(g, t, DEFAULT_EPS)?.entry(x, y));
            }
            let weights = poisson_weights(c * t, DEFAULT_EPS);
            let mut v = vec![0.0; g.vertex_count()];
            v[x] = 1.0;
            let mut sum = weights[0] * v[y];
            for &w in &weights[1..] {
                v = chain_step(g, c, &v);
                sum += w * v[y];
            }
            Ok(sum)
        }
    }
}

/// Kernels at many times, one task per time; output order follows `times`.
pub fn kernels_at(
    g: &Graph,
    times: &[f64],
    method: Method,
    eps: f64,
    exec: Execution,
) -> Result<Vec<HeatKernel>> {
    match method {
        Method::Spectral => {
            let dec = eigendecompose(&kirchhoff_matrix(g))?;
            exec.map_range(times.len(), |i| kernel_spectral(&dec, times[i]))
                .into_iter()
                .collect()
        }
        // Parallelism goes to the time axis; each product runs on the calling task.
        Method::Uniformization => exec
            .map_range(times.len(), |i| {
                kernel_uniformization_with(g, times[i], eps, Execution::Sequential)
            })
            .into_iter()
            .collect(),
    }
}

/// Black-box source of kernel values `p_t(x, y)`.
pub trait KernelSampler {
    fn sample(&self, t: f64, x: usize, y: usize) -> f64;
}

impl<F: Fn(f64, usize, usize) -> f64> KernelSampler for F {
    fn sample(&self, t: f64, x: usize, y: usize) -> f64 {
        self(t, x, y)
    }
}

/// Samples from a precomputed eigendecomposition.
#[derive(Debug, Clone)]
pub struct SpectralSampler {
    pub decomposition: SpectralDecomposition,
}

impl SpectralSampler {
    pub fn new(g: &Graph) -> Result<Self> {
        Ok(SpectralSampler {
            decomposition: eigendecompose(&kirchhoff_matrix(g))?,
        })
    }
}

impl KernelSampler for SpectralSampler {
    fn sample(&self, t: f64, x: usize, y: usize) -> f64 {
        spectral_entry(&self.decomposition, t, x, y)
    }
}

/// Samples single uniformization entries to relative tolerance `rel`.
#[derive(Debug, Clone, Copy)]
pub struct UniformizationSampler<'g> {
    pub graph: &'g Graph,
    pub rel: f64,
}

impl<'g> UniformizationSampler<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        UniformizationSampler {
            graph,
            rel: DEFAULT_EPS,
        }
    }
}

impl KernelSampler for UniformizationSampler<'_> {
    fn sample(&self, t: f64, x: usize, y: usize) -> f64 {
        uniformization_entry(self.graph, t, x, y, self.rel).unwrap_or(f64::NAN)
    }
}
