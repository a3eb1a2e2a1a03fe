use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;

use graphheat::asymptotics::{estimate_pair, EstimateOptions};
use graphheat::corpus;
use graphheat::extended::ExtendedSpectralSampler;
use graphheat::graph::{adjacency_power_entry, bfs_profile, is_bipartite, rational_to_f64};
use graphheat::heat_kernel::{
    kernel_spectral, kernel_uniformization, spectral_entry, UniformizationSampler, DEFAULT_EPS,
};
use graphheat::series::{factorial, series_prefix};
use graphheat::spectral::{eigendecompose, kirchhoff_matrix, spectral_path_identity};
use graphheat::{Error, Graph};

fn random_graph(seed: u64, n: usize, p: f64) -> Graph {
    corpus::random_connected(&mut corpus::rng(seed), n, p)
}

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let edges: Vec<_> = g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    Graph::from_edges(g.vertex_count(), &edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn geodesic_count_matches_adjacency_power(seed: u64, n in 2usize..30, p in 0.0f64..0.4) {
        let g = random_graph(seed, n, p);
        for x in 0..n {
            let prof = bfs_profile(&g, x);
            for y in 0..n {
                let d = prof.dist[y].unwrap();
                let count = BigRational::from_integer(BigInt::from(prof.geodesic_count[y].clone()));
                prop_assert_eq!(adjacency_power_entry(&g, d, x, y), count);
                if d > 0 {
                    prop_assert!(adjacency_power_entry(&g, d - 1, x, y).is_zero());
                }
            }
        }
    }

    #[test]
    fn relabelling_permutes_coefficients(seed: u64, n in 2usize..16, p in 0.0f64..0.5) {
        let g = random_graph(seed, n, p);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut corpus::rng(seed ^ 0x5eed));
        let h = relabel(&g, &perm);
        for x in 0..n {
            for y in x..n {
                let a = series_prefix(&g, x, y, 5).unwrap();
                let b = series_prefix(&h, perm[x], perm[y], 5).unwrap();
                prop_assert_eq!(a.coeffs, b.coeffs);
            }
        }
    }

    #[test]
    fn bipartite_parity(seed: u64, left in 1usize..8, right in 1usize..8, p in 0.0f64..0.7) {
        let g = corpus::random_bipartite(&mut corpus::rng(seed), left, right, p);
        let parts = is_bipartite(&g).expect("bipartite by construction");
        let n = g.vertex_count();
        for x in 0..n {
            let prof = bfs_profile(&g, x);
            for y in 0..n {
                let d = prof.dist[y].unwrap();
                prop_assert_eq!(d.is_multiple_of(2), parts.color[x] == parts.color[y]);
                // Walks between the classes have odd length only.
                let wrong_parity = if d.is_multiple_of(2) { 1 } else { 0 };
                prop_assert!(adjacency_power_entry(&g, wrong_parity, x, y).is_zero());
            }
        }
    }

    #[test]
    fn reconstruction_and_identity_symmetry(seed: u64, n in 2usize..=50, p in 0.0f64..0.5) {
        let g = random_graph(seed, n, p);
        let l = kirchhoff_matrix(&g);
        for i in 0..n {
            let sum: BigRational = (0..n).map(|j| l.exact(i, j).clone()).sum();
            prop_assert!(sum.is_zero());
        }
        let dec = eigendecompose(&l).unwrap();
        let back = dec.reconstruct_with(|m| m);
        prop_assert!(back.max_abs_diff(l.dense()) <= 1e-10 * l.frobenius_norm());
        prop_assert!(dec.mu.iter().all(|&m| m <= 1e-9));
        for x in 0..n.min(8) {
            for y in 0..n.min(8) {
                for d in 0..4 {
                    prop_assert_eq!(
                        spectral_path_identity(&dec, x, y, d),
                        spectral_path_identity(&dec, y, x, d)
                    );
                }
            }
        }
    }

    #[test]
    fn engines_agree_and_form_a_semigroup(seed: u64, n in 2usize..25, p in 0.0f64..0.5,
                                          s in 0.0f64..1.5, t in 0.0f64..1.5) {
        let g = random_graph(seed, n, p);
        let dec = eigendecompose(&kirchhoff_matrix(&g)).unwrap();
        let ks = kernel_spectral(&dec, s).unwrap().matrix;
        let kt = kernel_spectral(&dec, t).unwrap().matrix;
        let ust = kernel_uniformization(&g, s + t, DEFAULT_EPS).unwrap().matrix;
        let sst = kernel_spectral(&dec, s + t).unwrap().matrix;
        prop_assert!(ust.max_abs_diff(&sst) <= 1e-9);
        prop_assert!(ks.matmul(&kt).max_abs_diff(&sst) <= 1e-9);
        // Connected: strictly positive everywhere for t > 0.
        if s + t > 0.05 {
            prop_assert!(ust.as_slice().iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn kernel_solves_heat_equation(seed: u64, n in 2usize..15, p in 0.0f64..0.5, t in 0.2f64..2.0) {
        let g = random_graph(seed, n, p);
        let dec = eigendecompose(&kirchhoff_matrix(&g)).unwrap();
        let l = kirchhoff_matrix(&g);
        let k = kernel_spectral(&dec, t).unwrap().matrix;
        let lk = l.dense().matmul(&k);
        let central = |h: f64| {
            let up = kernel_spectral(&dec, t + h).unwrap().matrix;
            let down = kernel_spectral(&dec, t - h).unwrap().matrix;
            let mut diff = up;
            diff.add_scaled(-1.0, &down);
            let mut err = 0f64;
            for i in 0..n {
                for j in 0..n {
                    err = err.max((diff[(i, j)] / (2.0 * h) - lk[(i, j)]).abs());
                }
            }
            err
        };
        // Second-order difference: halving h cuts the error about fourfold.
        let (e1, e2) = (central(1e-2), central(5e-3));
        prop_assert!(e2 <= e1 / 3.0 || e2 < 1e-8, "{} {}", e1, e2);
    }

    #[test]
    fn series_matches_kernel_at_small_t(seed: u64, n in 2usize..12, p in 0.0f64..0.6) {
        let g = random_graph(seed, n, p);
        let dec = eigendecompose(&kirchhoff_matrix(&g)).unwrap();
        let c = g.max_degree() as f64;
        let t = 0.01;
        for x in 0..n {
            for y in 0..n {
                let prefix = series_prefix(&g, x, y, 6).unwrap();
                let bound = (2.0 * c * t).powi(7) / 5040.0 * 2.0 + 1e-14;
                prop_assert!((prefix.eval(t) - spectral_entry(&dec, t, x, y)).abs() <= bound);
            }
        }
    }

    #[test]
    fn estimate_is_scale_invariant_in_d(seed: u64, n in 3usize..12, p in 0.0f64..0.4) {
        let g = random_graph(seed, n, p);
        let sampler = UniformizationSampler::new(&g);
        let opts = EstimateOptions::for_graph(&g);
        let prof = bfs_profile(&g, 0);
        for y in 1..n {
            let d = prof.dist[y].unwrap();
            for s in [0.5, 2.0] {
                let scaled = |t: f64, x: usize, y: usize| {
                    use graphheat::heat_kernel::KernelSampler;
                    s * sampler.sample(t, x, y)
                };
                let d_hat = match estimate_pair(&scaled, 0, y, opts) {
                    Ok(e) => e.d_hat,
                    Err(Error::NoConvergence { d_hat, .. }) => d_hat,
                    Err(e) => panic!("{e}"),
                };
                prop_assert_eq!(d_hat, Some(d));
            }
        }
    }

    #[test]
    fn estimate_is_sampler_agnostic(seed: u64, n in 3usize..14) {
        let g = corpus::random_tree(&mut corpus::rng(seed), n);
        let opts = EstimateOptions { t0: 0.1, levels: 12 };
        let unif = UniformizationSampler::new(&g);
        let ext = ExtendedSpectralSampler::for_estimate(&g, opts).unwrap();
        for y in 1..n {
            let a = estimate_pair(&unif, 0, y, opts).unwrap();
            let b = estimate_pair(&ext, 0, y, opts).unwrap();
            prop_assert_eq!((a.d_hat, a.n_hat), (b.d_hat, b.n_hat));
        }
    }
}

#[test]
fn weighted_leading_coefficient_is_geodesic_weight() {
    let weights: Vec<BigRational> = [(1, 3), (1, 2), (1, 1), (3, 2), (2, 1)]
        .iter()
        .map(|&(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
        .collect();
    let mut rng = corpus::rng(11);
    let g = corpus::with_random_weights(&mut rng, &corpus::grid(3, 4), &weights);
    for x in 0..g.vertex_count() {
        let prof = bfs_profile(&g, x);
        for y in 0..g.vertex_count() {
            let d = prof.dist[y].unwrap();
            let p = series_prefix(&g, x, y, d + 1).unwrap();
            assert_eq!(
                &p.coeffs[d] * BigRational::from_integer(factorial(d)),
                prof.geodesic_weight[y]
            );
            assert!(p.coeffs[d + 1].is_negative());
            assert!(rational_to_f64(&p.coeffs[d]) > 0.0);
        }
    }
}
