use crate::error::{HarnessError, Result};
use agto_core::benchmarks::FunctionId;
use agto_core::OptimizerConfig;
use clap::Args;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Agto,
    Gto,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Agto, Algorithm::Gto];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Agto => "agto",
            Algorithm::Gto => "gto",
        }
    }

    /// Value mixed into the cell seed.
    pub fn tag(self) -> u64 {
        match self {
            Algorithm::Agto => 1,
            Algorithm::Gto => 2,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "agto" => Ok(Algorithm::Agto),
            "gto" => Ok(Algorithm::Gto),
            other => Err(HarnessError::Config(format!("unknown algorithm '{other}' (expected agto or gto)"))),
        }
    }
}

/// One benchmark campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Sorted, without duplicates.
    pub functions: Vec<FunctionId>,
    /// Sorted, without duplicates.
    pub algorithms: Vec<Algorithm>,
    pub runs: u32,
    pub pop_size: usize,
    pub max_evals: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    /// Opposition-based initialization for AGTO.
    pub obl: bool,
    /// Rotation gate mutation for AGTO.
    pub qrg: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            functions: FunctionId::all().collect(),
            algorithms: Algorithm::ALL.to_vec(),
            runs: 30,
            pop_size: 30,
            max_evals: 15_000,
            base_seed: 0,
            output_dir: PathBuf::from("results"),
            obl: true,
            qrg: true,
        }
    }
}

impl ExperimentConfig {
    /// Optimizer settings for one run of `algorithm`.
    pub fn optimizer_config(&self, algorithm: Algorithm, seed: u64) -> OptimizerConfig {
        let base = match algorithm {
            Algorithm::Agto => OptimizerConfig { enable_obl: self.obl, enable_qrg: self.qrg, ..Default::default() },
            Algorithm::Gto => OptimizerConfig::gto(),
        };
        OptimizerConfig { pop_size: self.pop_size, max_evals: self.max_evals, seed, ..base }
    }

    pub fn validate(&self) -> Result<()> {
        if self.functions.is_empty() {
            return Err(HarnessError::Config("no functions selected".into()));
        }
        if self.algorithms.is_empty() {
            return Err(HarnessError::Config("no algorithms selected".into()));
        }
        if self.runs == 0 {
            return Err(HarnessError::Config("runs must be positive".into()));
        }
        for &a in &self.algorithms {
            self.optimizer_config(a, 0).validate().map_err(|e| HarnessError::Config(format!("{a}: {e}")))?;
        }
        Ok(())
    }
}

/// Parses a function selection such as `F1..F23`, `F1,F5,F9` or `F1..F4,F10`.
pub fn parse_functions(s: &str) -> Result<Vec<FunctionId>> {
    let bad = |e: agto_core::benchmarks::BenchmarkError| HarnessError::Config(e.to_string());
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (a.parse::<FunctionId>().map_err(bad)?, b.parse::<FunctionId>().map_err(bad)?);
                if a > b {
                    return Err(HarnessError::Config(format!("empty function range {part}")));
                }
                out.extend(FunctionId::all().filter(|f| (a..=b).contains(f)));
            }
            None => out.push(part.parse().map_err(bad)?),
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn parse_algorithms(s: &str) -> Result<Vec<Algorithm>> {
    let mut out = s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Campaign settings from the command line or the `[bench]` table of a
/// config file. Unset fields fall through to the next source.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSettings {
    /// Functions to run: `F1..F23`, or a comma list such as `F1,F9`.
    #[arg(long)]
    pub functions: Option<String>,
    /// Comma list of algorithms: agto, gto.
    #[arg(long)]
    pub algo: Option<String>,
    #[arg(long)]
    pub runs: Option<u32>,
    /// Population size.
    #[arg(long)]
    pub pop: Option<usize>,
    /// Objective evaluations per run.
    #[arg(long)]
    pub max_evals: Option<usize>,
    /// Base seed all run seeds derive from.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Disable opposition-based initialization in AGTO.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub no_obl: Option<bool>,
    /// Disable the rotation gate mutation in AGTO.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub no_qrg: Option<bool>,
}

impl BenchSettings {
    /// Fields of `self` win over those of `fallback`.
    pub fn or(self, fallback: BenchSettings) -> BenchSettings {
        BenchSettings {
            functions: self.functions.or(fallback.functions),
            algo: self.algo.or(fallback.algo),
            runs: self.runs.or(fallback.runs),
            pop: self.pop.or(fallback.pop),
            max_evals: self.max_evals.or(fallback.max_evals),
            seed: self.seed.or(fallback.seed),
            out: self.out.or(fallback.out),
            no_obl: self.no_obl.or(fallback.no_obl),
            no_qrg: self.no_qrg.or(fallback.no_qrg),
        }
    }

    pub fn into_config(self) -> Result<ExperimentConfig> {
        let d = ExperimentConfig::default();
        let cfg = ExperimentConfig {
            functions: self.functions.as_deref().map(parse_functions).transpose()?.unwrap_or(d.functions),
            algorithms: self.algo.as_deref().map(parse_algorithms).transpose()?.unwrap_or(d.algorithms),
            runs: self.runs.unwrap_or(d.runs),
            pop_size: self.pop.unwrap_or(d.pop_size),
            max_evals: self.max_evals.unwrap_or(d.max_evals),
            base_seed: self.seed.unwrap_or(d.base_seed),
            output_dir: self.out.unwrap_or(d.output_dir),
            obl: !self.no_obl.unwrap_or(false),
            qrg: !self.no_qrg.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// HPO session settings from the command line or the `[hpo]` table.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HpoSettings {
    /// Command starting an external evaluator; the built-in surrogate is
    /// used when absent.
    #[arg(long)]
    pub evaluator_cmd: Option<String>,
    /// Optimizer evaluations.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Population size.
    #[arg(long)]
    pub pop: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-trial evaluator timeout in seconds.
    #[arg(long)]
    pub timeout: Option<u64>,
}

impl HpoSettings {
    pub fn or(self, fallback: HpoSettings) -> HpoSettings {
        HpoSettings {
            evaluator_cmd: self.evaluator_cmd.or(fallback.evaluator_cmd),
            budget: self.budget.or(fallback.budget),
            pop: self.pop.or(fallback.pop),
            seed: self.seed.or(fallback.seed),
            out: self.out.or(fallback.out),
            timeout: self.timeout.or(fallback.timeout),
        }
    }
}

/// Contents of a TOML config file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub bench: BenchSettings,
    #[serde(default)]
    pub hpo: HpoSettings,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path).map_err(HarnessError::io(path))?;
        toml::from_str(&text).map_err(|e| {
            let line = e.span().map_or(0, |s| line_of(&text, s.start));
            HarnessError::Parse { path: path.to_path_buf(), line, message: e.message().to_string() }
        })
    }
}

/// 1-based line holding byte `offset`.
fn line_of(text: &str, offset: usize) -> u64 {
    text.as_bytes()[..offset.min(text.len())].iter().filter(|&&b| b == b'\n').count() as u64 + 1
}
