//! Spectral kernel in extended precision.
//!
//! A double-precision eigendecomposition resolves `p_t(x, y)` only down to
//! about `1e-16`, because the spectral sum cancels terms of order one. Far
//! apart pairs at small `t` have kernel values many orders of magnitude below
//! that. Here the `f64` Jacobi result is re-orthonormalised and polished by
//! further Jacobi sweeps in binary fixed point with a few hundred bits, and
//! the spectral sum is evaluated at the same precision.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::asymptotics::EstimateOptions;
use crate::error::{Error, Result};
use crate::fixed::FixedPoint;
use crate::graph::Graph;
use crate::heat_kernel::KernelSampler;
use crate::spectral::{eigendecompose, kirchhoff_matrix, JACOBI_MAX_SWEEPS};

/// Eigenpairs of `L` in fixed point.
#[derive(Debug, Clone)]
pub struct ExtendedSpectrum {
    fx: FixedPoint,
    mu: Vec<BigInt>,
    /// Eigenvectors, one `Vec` per eigenvalue.
    columns: Vec<Vec<BigInt>>,
    sweeps: usize,
}

impl ExtendedSpectrum {
    /// Decomposes the Kirchhoff matrix of `g` with `bits` fractional bits.
    pub fn new(g: &Graph, bits: u32) -> Result<Self> {
        let n = g.vertex_count();
        let seed = eigendecompose(&kirchhoff_matrix(g))?;
        let fx = FixedPoint::new(bits);

        let mut columns: Vec<Vec<BigInt>> = (0..n)
            .map(|k| (0..n).map(|r| fx.encode(seed.vectors[(r, k)])).collect())
            .collect();
        orthonormalize(&fx, &mut columns);

        let weights: Vec<BigInt> = (0..g.edge_count())
            .map(|e| fx.encode_rational(&g.weight(e)))
            .collect();
        let applied: Vec<Vec<BigInt>> = columns
            .iter()
            .map(|v| apply_laplacian(g, &fx, &weights, v))
            .collect();
        let mut a = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let vij = fx.dot(&columns[i], &applied[j]);
                let vji = fx.dot(&columns[j], &applied[i]);
                let s: BigInt = (vij + vji) >> 1u32;
                a[i][j] = s.clone();
                a[j][i] = s;
            }
        }

        let tiny = BigInt::one() << 8u32;
        let mut sweeps = 0;
        loop {
            let off = max_off_diagonal(&a);
            if off <= tiny {
                break;
            }
            if sweeps == JACOBI_MAX_SWEEPS {
                return Err(Error::Convergence {
                    sweeps,
                    off_norm: fx.decode(&off),
                });
            }
            sweeps += 1;
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() > tiny {
                        rotate(&fx, &mut a, &mut columns, p, q);
                    }
                }
            }
        }
        let mu = (0..n).map(|k| a[k][k].clone()).collect();
        Ok(ExtendedSpectrum {
            fx,
            mu,
            columns,
            sweeps,
        })
    }

    /// Precision that keeps every kernel value the estimator can meet
    /// (distance at most `n - 1`, times down to `t0 / 2^levels`) far above
    /// the rounding level.
    pub fn bits_for(n: usize, opts: EstimateOptions) -> u32 {
        let t_min = opts.t0 / 2f64.powi(opts.levels as i32);
        let d = n.saturating_sub(1) as f64;
        let log_fact: f64 = (2..n).map(|i| (i as f64).log2()).sum();
        let needed = d * (-t_min.log2()).max(0.0) + log_fact + 2.0 * (n.max(2) as f64).log2();
        (needed.ceil() as u32 + 96).max(128)
    }

    pub fn bits(&self) -> u32 {
        self.fx.bits
    }

    /// Refinement sweeps performed after the `f64` start.
    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// Eigenvalues of `L` rounded to `f64`, in the order of the `f64` solver.
    pub fn mu_f64(&self) -> Vec<f64> {
        self.mu.iter().map(|m| self.fx.decode(m)).collect()
    }

    /// `exp(mu_k t)` for every `k`.
    fn exponentials(&self, t: f64) -> Vec<BigInt> {
        let t_fx = self.fx.encode(t);
        self.mu
            .iter()
            .map(|m| {
                let z = self.fx.mul(m, &t_fx);
                // mu_0 may sit a rounding unit above zero.
                let z = if z.is_positive() { BigInt::zero() } else { z };
                self.fx.exp_nonpositive(&z)
            })
            .collect()
    }

    fn entry_with(&self, exps: &[BigInt], x: usize, y: usize) -> f64 {
        let sum: BigInt = exps
            .iter()
            .zip(&self.columns)
            .map(|(e, v)| e * &v[x] * &v[y])
            .sum();
        self.fx.decode(&(sum >> (2 * self.fx.bits)))
    }

    /// `p_t(x, y)` rounded to `f64`.
    pub fn entry(&self, t: f64, x: usize, y: usize) -> f64 {
        if t == 0.0 {
            return if x == y { 1.0 } else { 0.0 };
        }
        self.entry_with(&self.exponentials(t), x, y)
    }

    /// `sum_k mu_k^d V[x,k] V[y,k]` rounded to `f64`.
    pub fn path_identity(&self, x: usize, y: usize, d: u32) -> f64 {
        let bits = self.fx.bits;
        let sum: BigInt = self
            .mu
            .iter()
            .zip(&self.columns)
            .map(|(m, v)| {
                let mut p = self.fx.one();
                for _ in 0..d {
                    p = self.fx.mul(&p, m);
                }
                p * &v[x] * &v[y]
            })
            .sum();
        self.fx.decode(&(sum >> (2 * bits)))
    }
}

fn orthonormalize(fx: &FixedPoint, columns: &mut [Vec<BigInt>]) {
    for k in 0..columns.len() {
        let (done, rest) = columns.split_at_mut(k);
        let v = &mut rest[0];
        for u in done.iter() {
            let r = fx.dot(u, v);
            if r.is_zero() {
                continue;
            }
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= fx.mul(&r, ui);
            }
        }
        let norm = fx.sqrt(&fx.dot(v, v));
        for vi in v.iter_mut() {
            *vi = fx.div(vi, &norm);
        }
    }
}

fn apply_laplacian(g: &Graph, fx: &FixedPoint, weights: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    (0..g.vertex_count())
        .map(|y| {
            let mut acc = BigInt::zero();
            for &(z, e) in g.neighbors(y) {
                let diff = &v[z] - &v[y];
                if !diff.is_zero() {
                    acc += fx.mul(&weights[e], &diff);
                }
            }
            acc
        })
        .collect()
}

fn max_off_diagonal(a: &[Vec<BigInt>]) -> BigInt {
    let mut best = BigInt::zero();
    for (p, row) in a.iter().enumerate() {
        for v in &row[p + 1..] {
            if v.abs() > best {
                best = v.abs();
            }
        }
    }
    best
}

#[allow(clippy::needless_range_loop)]
fn rotate(fx: &FixedPoint, a: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], p: usize, q: usize) {
    let one = fx.one();
    let apq = a[p][q].clone();
    let theta = fx.div(&(&a[q][q] - &a[p][p]), &(&apq << 1u32));
    let t = if theta.abs() > (&one << (fx.bits / 2)) {
        fx.div(&one, &(&theta << 1u32))
    } else {
        let denom = theta.abs() + fx.sqrt(&(fx.mul(&theta, &theta) + &one));
        let t = fx.div(&one, &denom);
        if theta.is_negative() {
            -t
        } else {
            t
        }
    };
    let c = fx.div(&one, &fx.sqrt(&(fx.mul(&t, &t) + &one)));
    let s = fx.mul(&t, &c);

    let shift = fx.mul(&t, &apq);
    a[p][p] -= &shift;
    a[q][q] += &shift;
    a[p][q] = BigInt::zero();
    a[q][p] = BigInt::zero();
    for r in 0..a.len() {
        if r == p || r == q {
            continue;
        }
        let (arp, arq) = (&a[r][p], &a[r][q]);
        if arp.is_zero() && arq.is_zero() {
            continue;
        }
        let new_rp = fx.mul(&c, arp) - fx.mul(&s, arq);
        let new_rq = fx.mul(&s, arp) + fx.mul(&c, arq);
        a[p][r] = new_rp.clone();
        a[r][p] = new_rp;
        a[q][r] = new_rq.clone();
        a[r][q] = new_rq;
    }
    let (vp, vq) = if p < q {
        let (lo, hi) = v.split_at_mut(q);
        (&mut lo[p], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(p);
        (&mut hi[0], &mut lo[q])
    };
    for (xp, xq) in vp.iter_mut().zip(vq.iter_mut()) {
        if xp.is_zero() && xq.is_zero() {
            continue;
        }
        let np = fx.mul(&c, xp) - fx.mul(&s, xq);
        let nq = fx.mul(&s, xp) + fx.mul(&c, xq);
        *xp = np;
        *xq = nq;
    }
}

/// Kernel sampler over an [`ExtendedSpectrum`], caching `exp(mu_k t)` per time.
#[derive(Debug)]
pub struct ExtendedSpectralSampler {
    spectrum: ExtendedSpectrum,
    cache: Mutex<HashMap<u64, Arc<Vec<BigInt>>>>,
}

impl ExtendedSpectralSampler {
    pub fn new(spectrum: ExtendedSpectrum) -> Self {
        ExtendedSpectralSampler {
            spectrum,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Sampler with enough precision for [`crate::asymptotics::estimate_pair`] under `opts`.
    pub fn for_estimate(g: &Graph, opts: EstimateOptions) -> Result<Self> {
        let bits = ExtendedSpectrum::bits_for(g.vertex_count(), opts);
        Ok(Self::new(ExtendedSpectrum::new(g, bits)?))
    }

    pub fn spectrum(&self) -> &ExtendedSpectrum {
        &self.spectrum
    }
}

impl KernelSampler for ExtendedSpectralSampler {
    fn sample(&self, t: f64, x: usize, y: usize) -> f64 {
        if t == 0.0 {
            return if x == y { 1.0 } else { 0.0 };
        }
        let key = t.to_bits();
        let cached = self
            .cache
            .lock()
            .map(|c| c.get(&key).cloned())
            .unwrap_or(None);
        let exps = match cached {
            Some(e) => e,
            None => {
                let e = Arc::new(self.spectrum.exponentials(t));
                if let Ok(mut c) = self.cache.lock() {
                    c.insert(key, Arc::clone(&e));
                }
                e
            }
        };
        self.spectrum.entry_with(&exps, x, y)
    }
}
