//! Executes one configured run and renders its outputs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use hypersim_algos::{
    bounded_degree_enumerate, clique_enumerate, density_enumerate, light_triangle_enumerate,
    peel, EnumerationRun, Threshold,
};
use hypersim_core::combin::ceil_log2;
use hypersim_core::{Hypergraph, Triangle, TriangleClass, VertexId};
use hypersim_kernel::{Bandwidth, Metrics, ModelKind, RoundLog, SimError};
use hypersim_oracle::enumerate_bruteforce;

use crate::config::Algo;

/// Largest n the brute-force oracle is asked to handle.
pub const ORACLE_CAP: usize = 64;

pub struct RunResult {
    pub listing: String,
    pub metrics: Metrics,
    pub class: TriangleClass,
    pub per_vertex: Option<Vec<BTreeSet<Triangle>>>,
    pub logs: Vec<RoundLog>,
}

pub struct RunParams {
    pub algo: Algo,
    pub model: ModelKind,
    pub class: TriangleClass,
    pub bandwidth: Bandwidth,
    pub max_rounds: Option<u64>,
    pub alpha: Option<Threshold>,
    pub delta: Option<u64>,
    pub collect_log: bool,
}

pub fn execute(h: &Hypergraph, params: &RunParams) -> Result<RunResult, SimError> {
    if !params.algo.accepts(params.model) {
        return Err(SimError::Config(format!(
            "algorithm '{}' does not run under model {}",
            params.algo.name(),
            params.model
        )));
    }
    match params.algo {
        Algo::Clique => {
            let run = clique_enumerate(h, params.class, params.bandwidth, params.collect_log)?;
            let listing = render_listing(&run.per_vertex);
            Ok(RunResult {
                listing,
                metrics: run.metrics,
                class: run.class,
                per_vertex: Some(run.per_vertex),
                logs: run.logs,
            })
        }
        Algo::Peel => {
            let alpha = params
                .alpha
                .ok_or_else(|| SimError::Config("peel needs --alpha".into()))?;
            let model = params.algo.algo_model(params.model).expect("legality checked");
            let (outcomes, metrics) = peel(h, model, alpha, params.bandwidth)?;
            let mut listing = String::new();
            for (v, o) in outcomes.iter().enumerate() {
                let state = if o.inactive { "inactive" } else { "active" };
                let t = o.round.map_or("-".to_string(), |t| t.to_string());
                writeln!(listing, "{v} {t} {state}").expect("string write");
            }
            Ok(RunResult {
                listing,
                metrics,
                class: params.class,
                per_vertex: None,
                logs: Vec::new(),
            })
        }
        Algo::BoundedDegree | Algo::Light | Algo::Density => {
            let model = params.algo.algo_model(params.model).expect("legality checked");
            let run: EnumerationRun = match params.algo {
                Algo::BoundedDegree => {
                    if params.class == TriangleClass::General {
                        return Err(SimError::Config(
                            "bounded-degree supports --class simple|induced".into(),
                        ));
                    }
                    bounded_degree_enumerate(h, model, params.class, params.bandwidth)?
                }
                Algo::Light => light_triangle_enumerate(
                    h,
                    model,
                    params.delta,
                    params.class,
                    params.bandwidth,
                )?,
                Algo::Density => density_enumerate(h, model, params.class, params.bandwidth)?,
                _ => unreachable!(),
            };
            if let Some(cap) = params.max_rounds {
                if run.metrics.rounds > cap {
                    return Err(SimError::RoundLimit { max_rounds: cap });
                }
            }
            let listing = render_listing(&run.per_vertex);
            Ok(RunResult {
                listing,
                metrics: run.metrics,
                class: run.class,
                per_vertex: Some(run.per_vertex),
                logs: Vec::new(),
            })
        }
    }
}

/// One canonical triangle per line: `v0 v1 v2 | e0 e1 e2 | owner`.
pub fn render_listing(per_vertex: &[BTreeSet<Triangle>]) -> String {
    let mut out = String::new();
    for (owner, set) in per_vertex.iter().enumerate() {
        for t in set {
            writeln!(out, "{t} | {owner}").expect("string write");
        }
    }
    out
}

/// Parses a listing produced by [`render_listing`].
pub fn parse_listing(text: &str) -> Result<Vec<(Triangle, usize)>, String> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split('|').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("line {}: expected 'v v v | e e e | owner'", no + 1));
        }
        let vs: Vec<usize> = parts[0]
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| format!("line {}: bad vertex", no + 1)))
            .collect::<Result<_, _>>()?;
        let es: Vec<usize> = parts[1]
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| format!("line {}: bad edge", no + 1)))
            .collect::<Result<_, _>>()?;
        if vs.len() != 3 || es.len() != 3 {
            return Err(format!("line {}: need three vertices and edges", no + 1));
        }
        let owner: usize = parts[2]
            .parse()
            .map_err(|_| format!("line {}: bad owner", no + 1))?;
        let t = Triangle::new(
            [VertexId(vs[0]), VertexId(vs[1]), VertexId(vs[2])],
            [es[0], es[1], es[2]],
        )
        .map_err(|e| format!("line {}: {e}", no + 1))?;
        out.push((t, owner));
    }
    Ok(out)
}

pub enum VerifyReport {
    Pass { triangles: usize },
    Fail { detail: String },
}

/// Checks a listing against the brute-force oracle: the union must equal the
/// oracle set and no triangle may be claimed twice.
pub fn verify_listing(
    h: &Hypergraph,
    class: TriangleClass,
    entries: &[(Triangle, usize)],
) -> VerifyReport {
    let mut seen: BTreeSet<Triangle> = BTreeSet::new();
    for (t, owner) in entries {
        if !seen.insert(*t) {
            return VerifyReport::Fail {
                detail: format!("duplicate output: {t} (owner {owner})"),
            };
        }
    }
    let oracle = enumerate_bruteforce(h, class);
    if let Some(missing) = oracle.triangles.difference(&seen).next() {
        return VerifyReport::Fail {
            detail: format!("missing from outputs: {missing}"),
        };
    }
    if let Some(extra) = seen.difference(&oracle.triangles).next() {
        return VerifyReport::Fail {
            detail: format!("not an oracle triangle of class {class}: {extra}"),
        };
    }
    VerifyReport::Pass {
        triangles: seen.len(),
    }
}

/// The instance columns shared by the metrics and sweep CSV formats.
pub fn instance_columns(h: &Hypergraph) -> String {
    let mu = if h.n() <= hypersim_core::DEFAULT_DENSITY_CAP {
        match hypersim_core::max_density_exact(h) {
            Ok(mu) => format!("{:.6}", ratio_to_f64(&mu)),
            Err(_) => String::new(),
        }
    } else {
        String::new()
    };
    format!(
        "{},{},{},{},{}",
        h.m(),
        h.rank(),
        h.max_degree(),
        h.max_pair_degree(),
        mu
    )
}

pub fn ratio_to_f64(r: &hypersim_core::Rational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn log2f(n: usize) -> f64 {
    ceil_log2(n.max(2)) as f64
}
