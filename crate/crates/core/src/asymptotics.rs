//! Short-time behaviour of the kernel: `p_t(x, y) = N t^d / d! + O(t^(d+1))`.
//!
//! [`verify_pair`] checks the three exact statements for one pair: the
//! coefficients below order `d` vanish, `d! c_d` equals the geodesic count (or
//! geodesic weight sum), and on bipartite graphs `c_{d+1} < 0`.
//! [`estimate_pair`] goes the other way and reads `d` and `N` off kernel
//! samples at shrinking times.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{adjacency_power_rows, bfs_profile, is_bipartite, DistanceProfile, Graph};
use crate::heat_kernel::KernelSampler;
use crate::par::Execution;
use crate::series::{factorial, source_coefficients};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
        })
    }
}

/// Exact check of the short-time law for one connected pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub x: usize,
    pub y: usize,
    pub d: usize,
    /// Geodesic count, or the geodesic weight sum on weighted graphs.
    pub geodesics: BigRational,
    /// `c_d`.
    pub leading: BigRational,
    /// `c_{d+1}`.
    pub next: BigRational,
    pub vanish_ok: Verdict,
    pub leading_ok: Verdict,
    pub bipartite_sign: Verdict,
}

impl PairReport {
    pub fn verdicts(&self) -> [Verdict; 3] {
        [self.vanish_ok, self.leading_ok, self.bipartite_sign]
    }

    pub fn any_fail(&self) -> bool {
        self.verdicts().contains(&Verdict::Fail)
    }
}

/// Per-source data shared by every pair with that source.
struct SourceData {
    profile: DistanceProfile,
    coeffs: Vec<Vec<BigRational>>,
    walks: Vec<Vec<BigRational>>,
}

impl SourceData {
    fn new(g: &Graph, x: usize) -> Self {
        let profile = bfs_profile(g, x);
        let ecc = profile.eccentricity();
        SourceData {
            coeffs: source_coefficients(g, x, ecc + 1),
            walks: adjacency_power_rows(g, x, ecc),
            profile,
        }
    }

    fn report(&self, g: &Graph, bipartite: bool, y: usize) -> Option<PairReport> {
        let x = self.profile.source;
        let d = self.profile.dist[y]?;
        let geodesics = if g.is_weighted() {
            self.profile.geodesic_weight[y].clone()
        } else {
            BigRational::from_integer(BigInt::from(self.profile.geodesic_count[y].clone()))
        };
        let leading = self.coeffs[d][y].clone();
        let next = self.coeffs[d + 1][y].clone();

        let vanish = (0..d).all(|k| self.coeffs[k][y].is_zero());
        let scaled = &leading * BigRational::from_integer(factorial(d));
        let leading_ok = scaled == geodesics && self.walks[d][y] == geodesics;
        // Only an isolated vertex paired with itself has a structurally zero c_{d+1}.
        let bipartite_sign = if !bipartite || (x == y && g.degree(x) == 0) {
            Verdict::NotApplicable
        } else {
            Verdict::from_bool(next.is_negative())
        };

        Some(PairReport {
            x,
            y,
            d,
            geodesics,
            leading,
            next,
            vanish_ok: Verdict::from_bool(vanish),
            leading_ok: Verdict::from_bool(leading_ok),
            bipartite_sign,
        })
    }
}

/// Verifies one pair exactly; disconnected pairs are an error.
pub fn verify_pair(g: &Graph, x: usize, y: usize) -> Result<PairReport> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    let bipartite = is_bipartite(g).is_some();
    SourceData::new(g, x)
        .report(g, bipartite, y)
        .ok_or(Error::Unreachable { x, y })
}

/// All-pairs verification result.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphVerification {
    /// Connected pairs `x < y` in lexicographic order.
    pub reports: Vec<PairReport>,
    /// Disconnected pairs `x < y`.
    pub skipped: Vec<(usize, usize)>,
}

impl GraphVerification {
    pub fn any_fail(&self) -> bool {
        self.reports.iter().any(PairReport::any_fail)
    }
}

pub fn verify_graph(g: &Graph) -> GraphVerification {
    verify_graph_with(g, Execution::default())
}

/// Sweeps every pair `x < y`, one task per source vertex.
pub fn verify_graph_with(g: &Graph, exec: Execution) -> GraphVerification {
    let n = g.vertex_count();
    let bipartite = is_bipartite(g).is_some();
    let per_source = exec.map_range(n, |x| {
        let data = SourceData::new(g, x);
        let mut reports = Vec::new();
        let mut skipped = Vec::new();
        for y in x + 1..n {
            match data.report(g, bipartite, y) {
                Some(r) => reports.push(r),
                None => skipped.push((x, y)),
            }
        }
        (reports, skipped)
    });
    let mut out = GraphVerification {
        reports: Vec::new(),
        skipped: Vec::new(),
    };
    for (r, s) in per_source {
        out.reports.extend(r);
        out.skipped.extend(s);
    }
    out
}

/// Sum over geodesics of the product of their edge weights.
pub fn weighted_leading(g: &Graph, x: usize, y: usize) -> Result<BigRational> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    let profile = bfs_profile(g, x);
    match profile.dist[y] {
        Some(_) => Ok(profile.geodesic_weight[y].clone()),
        None => Err(Error::Unreachable { x, y }),
    }
}

/// Kernel values below this are treated as zero.
pub const POSITIVITY_FLOOR: f64 = 1e-250;
/// Largest accepted distance of a raw exponent from its rounding.
pub const EXPONENT_TOLERANCE: f64 = 0.1;
/// Largest accepted distance of the scaled sample `d! p / t^d` from its rounding.
pub const COUNT_TOLERANCE: f64 = 0.25;
/// Consecutive levels whose rounded exponents must agree.
pub const STABLE_LEVELS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    pub t0: f64,
    /// Number of halvings of `t0`.
    pub levels: usize,
}

impl EstimateOptions {
    /// `t0 = min(0.1, 1 / (2 * max weighted degree))`, 12 levels.
    pub fn for_graph(g: &Graph) -> Self {
        let c = g.max_weighted_degree_f64();
        let t0 = if c > 0.0 { (0.5 / c).min(0.1) } else { 0.1 };
        EstimateOptions { t0, levels: 12 }
    }
}

/// Distance and geodesic count read off kernel samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceEstimate {
    pub x: usize,
    pub y: usize,
    /// `None` when every sample is below the positivity floor.
    pub d_hat: Option<usize>,
    pub n_hat: u64,
    pub t_used: f64,
    /// `log2(p(t_j) / p(t_{j+1}))` for each level.
    pub exponent_trace: Vec<f64>,
    pub converged: bool,
}

/// Recovers `(d, N)` from samples at `t_j = t0 / 2^j`.
///
/// The raw exponent `e_j = log2(p(t_j) / p(t_{j+1}))` tends to `d`. Once the
/// rounded exponent agrees on three consecutive levels and the latest one is
/// within [`EXPONENT_TOLERANCE`] of an integer, `N` is the rounding of
/// `d! p(t) / t^d` at the smallest time sampled, accepted only within
/// [`COUNT_TOLERANCE`]; otherwise the time is halved again.
pub fn estimate_pair<S: KernelSampler + ?Sized>(
    sampler: &S,
    x: usize,
    y: usize,
    opts: EstimateOptions,
) -> Result<DistanceEstimate> {
    if !(opts.t0.is_finite() && opts.t0 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t0 must be > 0, got {}",
            opts.t0
        )));
    }
    if opts.levels < 2 {
        return Err(Error::InvalidArgument(format!(
            "levels must be >= 2, got {}",
            opts.levels
        )));
    }
    let below_floor = |p: f64| p.is_nan() || p < POSITIVITY_FLOOR;

    let mut t = opts.t0;
    let mut p = sampler.sample(t, x, y);
    if below_floor(p) {
        for _ in 0..opts.levels {
            t /= 2.0;
            if !below_floor(sampler.sample(t, x, y)) {
                return Err(Error::PositivityFloor {
                    t: opts.t0,
                    trace: Vec::new(),
                });
            }
        }
        return Ok(DistanceEstimate {
            x,
            y,
            d_hat: None,
            n_hat: 0,
            t_used: t,
            exponent_trace: Vec::new(),
            converged: false,
        });
    }

    let mut trace = Vec::with_capacity(opts.levels);
    let mut stable = None;
    for _ in 0..opts.levels {
        let t_next = t / 2.0;
        let p_next = sampler.sample(t_next, x, y);
        if below_floor(p_next) {
            return Err(Error::PositivityFloor { t: t_next, trace });
        }
        let e = (p / p_next).log2();
        trace.push(e);
        (t, p) = (t_next, p_next);

        stable = stable_exponent(&trace);
        let Some(d) = stable else { continue };
        let scaled = (p.ln() - d as f64 * t.ln() + ln_factorial(d)).exp();
        let rounded = scaled.round();
        if rounded >= 1.0 && rounded < 2f64.powi(53) && (scaled - rounded).abs() < COUNT_TOLERANCE {
            return Ok(DistanceEstimate {
                x,
                y,
                d_hat: Some(d),
                n_hat: rounded as u64,
                t_used: t,
                exponent_trace: trace,
                converged: true,
            });
        }
    }
    Err(Error::NoConvergence {
        d_hat: stable,
        trace,
    })
}

fn stable_exponent(trace: &[f64]) -> Option<usize> {
    if trace.len() < STABLE_LEVELS {
        return None;
    }
    let tail = &trace[trace.len() - STABLE_LEVELS..];
    let last = tail[STABLE_LEVELS - 1];
    let r = last.round();
    let agree = tail.iter().all(|e| e.round() == r);
    (agree && r >= 0.0 && (last - r).abs() < EXPONENT_TOLERANCE).then_some(r as usize)
}

fn ln_factorial(d: usize) -> f64 {
    (2..=d).map(|i| (i as f64).ln()).sum()
}

/// Estimates for pairs in order; one task per pair.
pub fn estimate_pairs<S: KernelSampler + Sync + ?Sized>(
    sampler: &S,
    pairs: &[(usize, usize)],
    opts: EstimateOptions,
    exec: Execution,
) -> Vec<Result<DistanceEstimate>> {
    exec.map_range(pairs.len(), |i| {
        let (x, y) = pairs[i];
        estimate_pair(sampler, x, y, opts)
    })
}
