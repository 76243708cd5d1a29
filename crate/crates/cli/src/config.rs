//! Run configuration shared by the subcommands: instance source, algorithm,
//! model, and the legality table between them.

use std::path::PathBuf;

use hypersim_algos::{AlgoModel, Threshold};
use hypersim_core::{
    sample_sparse_planted, sample_uniform_random, Hypergraph, TriangleClass,
};
use hypersim_kernel::{Bandwidth, ModelKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GenKind {
    Uniform,
    Sparse,
}

/// Instance source: an input file or a generator spec.
#[derive(Debug, Clone, clap::Args)]
pub struct SourceArgs {
    /// Read the hypergraph from a text file
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<GenKind>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl SourceArgs {
    pub fn load(&self) -> Result<Hypergraph, String> {
        if let Some(path) = &self.input {
            let file = std::fs::File::open(path)
                .map_err(|e| format!("cannot open {}: {e}", path.display()))?;
            return hypersim_core::io::read_text(std::io::BufReader::new(file))
                .map_err(|e| format!("{}: {e}", path.display()));
        }
        self.generate(self.seed.unwrap_or(0))
    }

    /// Generates with an explicit seed (used by sweeps).
    pub fn generate(&self, seed: u64) -> Result<Hypergraph, String> {
        let kind = self
            .kind
            .ok_or("need either --in or a generator spec (--kind ...)")?;
        match kind {
            GenKind::Uniform => {
                let n = self.n.ok_or("--kind uniform needs --n")?;
                let r = self.r.ok_or("--kind uniform needs --r")?;
                let p = self.p.ok_or("--kind uniform needs --p")?;
                sample_uniform_random(n, r, p, seed).map_err(|e| e.to_string())
            }
            GenKind::Sparse => {
                let n = self.n.ok_or("--kind sparse needs --n")?;
                let eps = self.eps.ok_or("--kind sparse needs --eps")?;
                sample_sparse_planted(n, eps, seed).map_err(|e| e.to_string())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Clique,
    BoundedDegree,
    Light,
    Peel,
    Density,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Clique => "clique",
            Algo::BoundedDegree => "bounded-degree",
            Algo::Light => "light",
            Algo::Peel => "peel",
            Algo::Density => "density",
        }
    }

    pub fn default_model(self) -> ModelKind {
        match self {
            Algo::Clique => ModelKind::Clique,
            _ => ModelKind::Eb,
        }
    }

    pub fn default_class(self) -> TriangleClass {
        match self {
            Algo::BoundedDegree => TriangleClass::Induced,
            _ => TriangleClass::Simple,
        }
    }

    /// The algorithm/model legality table.
    pub fn accepts(self, model: ModelKind) -> bool {
        match self {
            Algo::Clique => model == ModelKind::Clique,
            _ => matches!(model, ModelKind::Eb | ModelKind::Pc),
        }
    }

    pub fn algo_model(self, model: ModelKind) -> Option<AlgoModel> {
        match model {
            ModelKind::Eb => Some(AlgoModel::Eb),
            ModelKind::Pc => Some(AlgoModel::Pc),
            _ => None,
        }
    }
}

impl std::str::FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "clique" => Ok(Algo::Clique),
            "bounded-degree" | "bounded" => Ok(Algo::BoundedDegree),
            "light" => Ok(Algo::Light),
            "peel" => Ok(Algo::Peel),
            "density" => Ok(Algo::Density),
            other => Err(format!(
                "unknown algorithm '{other}' (clique, bounded-degree, light, peel, density)"
            )),
        }
    }
}

/// Parses a threshold given as an integer, a decimal, or `num/den`.
pub fn parse_threshold(s: &str) -> Result<Threshold, String> {
    if let Some((a, b)) = s.split_once('/') {
        let num: u64 = a.trim().parse().map_err(|_| format!("bad ratio '{s}'"))?;
        let den: u64 = b.trim().parse().map_err(|_| format!("bad ratio '{s}'"))?;
        if den == 0 {
            return Err("denominator must be positive".into());
        }
        return Ok(Threshold::ratio(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        if digits > 9 {
            return Err("at most 9 fractional digits".into());
        }
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| format!("bad decimal '{s}'"))?
        };
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| format!("bad decimal '{s}'"))?
        };
        let den = 10u64.pow(digits.max(1));
        return Ok(Threshold::ratio(int * den + frac, den));
    }
    let v: u64 = s.parse().map_err(|_| format!("bad threshold '{s}'"))?;
    Ok(Threshold::integer(v))
}

pub fn default_bandwidth(h: &Hypergraph, override_bits: Option<u64>) -> Bandwidth {
    match override_bits {
        Some(bits) => Bandwidth::new(bits),
        None => Bandwidth::default_for(h.n()),
    }
}
