use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use graphheat::asymptotics::{
    estimate_pairs, verify_graph, verify_pair, EstimateOptions, PairReport,
};
use graphheat::extended::ExtendedSpectralSampler;
use graphheat::graph::{bfs_profile, is_bipartite, parse_edge_list, Graph};
use graphheat::heat_kernel::{kernels_at, KernelSampler, Method, UniformizationSampler};
use graphheat::series::series_prefix;
use graphheat::spectral::{eigendecompose, kirchhoff_matrix};
use graphheat::{Error, Execution};

use crate::{Command, Input, Pairs};

type CsvOut = csv::Writer<Box<dyn Write>>;

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Kernel {
            input,
            pairs,
            t_values,
            method,
            eps,
        } => {
            let (g, mut out) = open(&input)?;
            let pairs = resolve_pairs(&g, &pairs)?.unwrap_or_else(|| all_ordered_pairs(&g));
            let kernels = kernels_at(&g, &t_values, method.into(), eps, Execution::default())?;
            out.write_record(["t", "x_label", "y_label", "p"])?;
            for k in &kernels {
                for &(x, y) in &pairs {
                    out.write_record([
                        k.t.to_string(),
                        g.label(x).to_owned(),
                        g.label(y).to_owned(),
                        k.entry(x, y).to_string(),
                    ])?;
                }
            }
            finish(out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Spectrum { input } => {
            let (g, mut out) = open(&input)?;
            let dec = eigendecompose(&kirchhoff_matrix(&g))?;
            out.write_record(["k", "lambda"])?;
            for (k, lambda) in dec.laplacian_eigenvalues().iter().enumerate() {
                out.write_record([(k + 1).to_string(), lambda.to_string()])?;
            }
            finish(out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Series {
            input,
            pairs,
            max_order,
        } => {
            let (g, mut out) = open(&input)?;
            let pairs = resolve_pairs(&g, &pairs)?.unwrap_or_else(|| upper_pairs(&g, true));
            out.write_record(["x_label", "y_label", "k", "numerator", "denominator"])?;
            for (x, y) in pairs {
                let prefix = series_prefix(&g, x, y, max_order)?;
                for (k, c) in prefix.coeffs.iter().enumerate() {
                    out.write_record([
                        g.label(x).to_owned(),
                        g.label(y).to_owned(),
                        k.to_string(),
                        c.numer().to_string(),
                        c.denom().to_string(),
                    ])?;
                }
            }
            finish(out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { input, pairs } => {
            let (g, mut out) = open(&input)?;
            let rows: Vec<Result<PairReport, (usize, usize)>> = match resolve_pairs(&g, &pairs)? {
                None => {
                    let v = verify_graph(&g);
                    let mut rows: Vec<_> = v.reports.into_iter().map(Ok).collect();
                    rows.extend(v.skipped.into_iter().map(Err));
                    rows.sort_by_key(|r| match r {
                        Ok(rep) => (rep.x, rep.y),
                        Err(p) => *p,
                    });
                    rows
                }
                Some(list) => list
                    .into_iter()
                    .map(|(x, y)| match verify_pair(&g, x, y) {
                        Ok(r) => Ok(Ok(r)),
                        Err(Error::Unreachable { .. }) => Ok(Err((x, y))),
                        Err(e) => Err(e),
                    })
                    .collect::<Result<_, _>>()?,
            };
            out.write_record([
                "x",
                "y",
                "d",
                "N",
                "leading_num",
                "leading_den",
                "next_num",
                "next_den",
                "vanish_ok",
                "leading_ok",
                "bipartite_sign",
            ])?;
            let mut failed = false;
            for row in rows {
                match row {
                    Ok(r) => {
                        failed |= r.any_fail();
                        out.write_record([
                            g.label(r.x).to_owned(),
                            g.label(r.y).to_owned(),
                            r.d.to_string(),
                            r.geodesics.to_string(),
                            r.leading.numer().to_string(),
                            r.leading.denom().to_string(),
                            r.next.numer().to_string(),
                            r.next.denom().to_string(),
                            r.vanish_ok.to_string(),
                            r.leading_ok.to_string(),
                            r.bipartite_sign.to_string(),
                        ])?;
                    }
                    Err((x, y)) => {
                        out.write_record([
                            g.label(x),
                            g.label(y),
                            "unreachable",
                            "0",
                            "",
                            "",
                            "",
                            "",
                            "skipped",
                            "skipped",
                            "skipped",
                        ])?;
                    }
                }
            }
            finish(out)?;
            Ok(exit_for(failed))
        }
        Command::Estimate {
            input,
            pairs,
            method,
            t0,
            levels,
        } => {
            let (g, mut out) = open(&input)?;
            let pairs = resolve_pairs(&g, &pairs)?.unwrap_or_else(|| upper_pairs(&g, false));
            let mut opts = EstimateOptions::for_graph(&g);
            opts.levels = levels;
            if let Some(t0) = t0 {
                opts.t0 = t0;
            }
            let results = match Method::from(method) {
                Method::Spectral => {
                    // f64 spectral sums bottom out near 1e-16, far above p_t for distant pairs.
                    let sampler = ExtendedSpectralSampler::for_estimate(&g, opts)?;
                    estimate_all(&sampler, &pairs, opts)
                }
                Method::Uniformization => {
                    estimate_all(&UniformizationSampler::new(&g), &pairs, opts)
                }
            };
            out.write_record(["x", "y", "d_hat", "N_hat", "t_used", "converged"])?;
            let mut failed = false;
            for ((x, y), res) in pairs.into_iter().zip(results) {
                let (d, n, t, conv) = match res {
                    Ok(est) => (
                        est.d_hat
                            .map_or_else(|| "unreachable".into(), |d| d.to_string()),
                        est.n_hat.to_string(),
                        est.t_used.to_string(),
                        est.converged,
                    ),
                    Err(Error::NoConvergence { d_hat, .. }) => {
                        failed = true;
                        (
                            d_hat.map(|d| d.to_string()).unwrap_or_default(),
                            String::new(),
                            String::new(),
                            false,
                        )
                    }
                    Err(Error::PositivityFloor { t, .. }) => {
                        failed = true;
                        (String::new(), String::new(), t.to_string(), false)
                    }
                    Err(e) => return Err(e.into()),
                };
                out.write_record([g.label(x), g.label(y), &d, &n, &t, &conv.to_string()])?;
            }
            finish(out)?;
            Ok(exit_for(failed))
        }
        Command::Paths { input, pairs } => {
            let (g, mut out) = open(&input)?;
            let pairs = resolve_pairs(&g, &pairs)?.unwrap_or_else(|| upper_pairs(&g, false));
            out.write_record(["x", "y", "d", "N"])?;
            let mut cache: Option<(usize, graphheat::graph::DistanceProfile)> = None;
            for (x, y) in pairs {
                if cache.as_ref().map(|(s, _)| *s) != Some(x) {
                    cache = Some((x, bfs_profile(&g, x)));
                }
                let profile = &cache.as_ref().expect("just filled").1;
                let (d, n) = match profile.dist[y] {
                    Some(d) => (d.to_string(), profile.geodesic_count[y].to_string()),
                    None => ("unreachable".to_owned(), "0".to_owned()),
                };
                out.write_record([g.label(x), g.label(y), &d, &n])?;
            }
            finish(out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bipartite { input } => {
            let (g, mut out) = open(&input)?;
            let part = is_bipartite(&g);
            out.write_record(["vertex", "class"])?;
            for v in 0..g.vertex_count() {
                let class = part
                    .as_ref()
                    .map_or_else(|| "none".to_owned(), |p| p.color[v].to_string());
                out.write_record([g.label(v), &class])?;
            }
            finish(out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn estimate_all<S: KernelSampler + Sync>(
    sampler: &S,
    pairs: &[(usize, usize)],
    opts: EstimateOptions,
) -> Vec<graphheat::Result<graphheat::asymptotics::DistanceEstimate>> {
    estimate_pairs(sampler, pairs, opts, Execution::default())
}

fn exit_for(failed: bool) -> ExitCode {
    if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_edge_list(&text).with_context(|| format!("{}", path.display()))
}

fn open(input: &Input) -> Result<(Graph, CsvOut)> {
    let g = load_graph(&input.graph)?;
    let sink: Box<dyn Write> = match &input.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    Ok((g, csv::Writer::from_writer(sink)))
}

fn finish(out: CsvOut) -> Result<()> {
    out.into_inner()
        .map_err(|e| anyhow::anyhow!("flushing output: {}", e.error()))?
        .flush()?;
    Ok(())
}

fn resolve_pairs(g: &Graph, pairs: &Pairs) -> Result<Option<Vec<(usize, usize)>>> {
    let mut list = Vec::new();
    for chunk in pairs.pair.chunks(2) {
        let [x, y] = chunk else {
            bail!("--pair takes two labels");
        };
        list.push((g.index_of(x)?, g.index_of(y)?));
    }
    if let (Some(x), Some(y)) = (&pairs.from, &pairs.to) {
        list.push((g.index_of(x)?, g.index_of(y)?));
    }
    Ok((!list.is_empty()).then_some(list))
}

fn upper_pairs(g: &Graph, include_diagonal: bool) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let offset = usize::from(!include_diagonal);
    (0..n)
        .flat_map(|x| (x + offset..n).map(move |y| (x, y)))
        .collect()
}

fn all_ordered_pairs(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect()
}
