//! Benchmark campaigns: every (algorithm, function, run) cell, resumable.

use crate::config::{Algorithm, ExperimentConfig};
use crate::error::{HarnessError, Result};
use crate::seed::cell_seed;
use crate::tables::{csv_writer, fmt_f64, write_file, write_runs, RunRow, Tables};
use agto_core::benchmarks::{descriptor, Benchmark, FunctionId};
use agto_core::optimizer::run_optimizer_with;
use agto_core::RunResult;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

pub const MANIFEST: &str = "manifest.json";

/// Identity of one run. Orders function-major, like every output table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey {
    pub function: FunctionId,
    pub algorithm: Algorithm,
    pub run: u32,
}

impl CellKey {
    /// Convergence file name, e.g. `agto_F1_0.csv`.
    pub fn conv_name(&self) -> String {
        format!("{}_{}_{}.csv", self.algorithm, self.function, self.run)
    }
}

impl std::fmt::Display for CellKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} on {} run {}", self.algorithm, self.function, self.run)
    }
}

/// Everything that determines campaign results; the output directory is
/// deliberately absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Fingerprint {
    functions: Vec<String>,
    algorithms: Vec<Algorithm>,
    runs: u32,
    pop_size: usize,
    max_evals: usize,
    base_seed: u64,
    obl: bool,
    qrg: bool,
}

impl Fingerprint {
    fn of(cfg: &ExperimentConfig) -> Self {
        Fingerprint {
            functions: cfg.functions.iter().map(ToString::to_string).collect(),
            algorithms: cfg.algorithms.clone(),
            runs: cfg.runs,
            pop_size: cfg.pop_size,
            max_evals: cfg.max_evals,
            base_seed: cfg.base_seed,
            obl: cfg.obl,
            qrg: cfg.qrg,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ManifestCell {
    function: String,
    algorithm: Algorithm,
    run: u32,
    seed: u64,
    /// Kept as text so the value survives the round trip exactly.
    best: String,
    evals_used: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestFile {
    config: Fingerprint,
    cells: Vec<ManifestCell>,
}

struct Manifest {
    path: PathBuf,
    config: Fingerprint,
    done: BTreeMap<CellKey, RunRow>,
}

impl Manifest {
    fn load_or_new(path: PathBuf, cfg: &ExperimentConfig) -> Result<Manifest> {
        let config = Fingerprint::of(cfg);
        let mut manifest = Manifest { path, config, done: BTreeMap::new() };
        let text = match std::fs::read_to_string(&manifest.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(manifest),
            Err(e) => return Err(HarnessError::io(&manifest.path)(e)),
        };
        let parse_err = |line: usize, message: String| HarnessError::Parse {
            path: manifest.path.clone(),
            line: line as u64,
            message,
        };
        let file: ManifestFile = serde_json::from_str(&text).map_err(|e| parse_err(e.line(), e.to_string()))?;
        if file.config != manifest.config {
            return Err(HarnessError::ManifestMismatch { path: manifest.path });
        }
        for c in file.cells {
            let function: FunctionId = c.function.parse().map_err(|e| parse_err(0, format!("{e}")))?;
            let best: f64 = c.best.parse().map_err(|e| parse_err(0, format!("best {:?}: {e}", c.best)))?;
            let key = CellKey { function, algorithm: c.algorithm, run: c.run };
            let expected = cell_seed(cfg.base_seed, key.algorithm, key.function, key.run);
            if c.seed != expected || !best.is_finite() {
                return Err(parse_err(0, format!("entry for {key} does not belong to this campaign")));
            }
            let row = RunRow { function, algorithm: key.algorithm, run: key.run, seed: c.seed, best, evals_used: c.evals_used };
            manifest.done.insert(key, row);
        }
        Ok(manifest)
    }

    fn save(&self) -> Result<()> {
        let cells = self
            .done
            .values()
            .map(|r| ManifestCell {
                function: r.function.to_string(),
                algorithm: r.algorithm,
                run: r.run,
                seed: r.seed,
                best: fmt_f64(r.best),
                evals_used: r.evals_used,
            })
            .collect();
        let file = ManifestFile { config: self.config.clone(), cells };
        let mut text = serde_json::to_string_pretty(&file).expect("manifest serializes");
        text.push('\n');
        write_file(&self.path, text.as_bytes())
    }
}

/// Outcome of [`run_campaign`].
#[derive(Debug, Clone)]
pub struct Campaign {
    /// Canonical order.
    pub runs: Vec<RunRow>,
    pub tables: Tables,
    /// Cells taken over from an earlier, interrupted invocation.
    pub resumed: usize,
}

/// Runs every cell of `cfg` not already recorded in the output directory's
/// manifest, then writes runs.csv, summary.csv, ranks.csv and pvalues.csv.
///
/// Cells run in parallel. Each finished cell writes its convergence file
/// and is then added to the manifest, so an interrupted campaign picks up
/// where it stopped and produces the same bytes as an uninterrupted one.
pub fn run_campaign(cfg: &ExperimentConfig) -> Result<Campaign> {
    cfg.validate()?;
    let out = &cfg.output_dir;
    let conv_dir = out.join("conv");
    std::fs::create_dir_all(&conv_dir).map_err(HarnessError::io(&conv_dir))?;
    let mut manifest = Manifest::load_or_new(out.join(MANIFEST), cfg)?;
    // a cell whose curve is gone is redone
    manifest.done.retain(|k, _| conv_dir.join(k.conv_name()).is_file());
    // also proves the directory is writable before any work starts
    manifest.save()?;

    let all: Vec<CellKey> = cfg
        .functions
        .iter()
        .flat_map(|&function| {
            cfg.algorithms
                .iter()
                .flat_map(move |&algorithm| (0..cfg.runs).map(move |run| CellKey { function, algorithm, run }))
        })
        .collect();
    let resumed = all.iter().filter(|k| manifest.done.contains_key(k)).count();
    let pending: Vec<CellKey> = all.iter().copied().filter(|k| !manifest.done.contains_key(k)).collect();

    let writer = Mutex::new(manifest);
    pending.par_iter().try_for_each(|&key| -> Result<()> {
        let seed = cell_seed(cfg.base_seed, key.algorithm, key.function, key.run);
        let result = run_cell(cfg, key, seed)?;
        if result.evals_used > cfg.max_evals {
            return Err(HarnessError::Budget { cell: key.to_string(), used: result.evals_used, budget: cfg.max_evals });
        }
        let row = RunRow {
            function: key.function,
            algorithm: key.algorithm,
            run: key.run,
            seed,
            best: result.best_fitness,
            evals_used: result.evals_used,
        };
        let mut m = writer.lock().expect("writer poisoned");
        write_convergence(&conv_dir.join(key.conv_name()), &result)?;
        m.done.insert(key, row);
        m.save()
    })?;

    let manifest = writer.into_inner().expect("writer poisoned");
    let runs: Vec<RunRow> = all.iter().map(|k| manifest.done[k].clone()).collect();
    write_runs(&out.join("runs.csv"), &runs)?;
    let tables = Tables::from_runs(&runs)?;
    tables.write(out)?;
    Ok(Campaign { runs, tables, resumed })
}

/// One optimizer run of `key` with its derived seed.
pub fn run_cell(cfg: &ExperimentConfig, key: CellKey, seed: u64) -> Result<RunResult> {
    let space = descriptor(key.function).search_space();
    let opt = cfg.optimizer_config(key.algorithm, seed);
    run_optimizer_with(&mut Benchmark(key.function), &space, &opt, &mut |_| {})
        .map_err(|source| HarnessError::Optimize { cell: key.to_string(), source })
}

/// Columns iter, evals, best, mean; row 0 is the initialized troop.
fn write_convergence(path: &Path, r: &RunResult) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let mut w = csv_writer(&tmp)?;
    let io = |e: csv::Error| HarnessError::io(&tmp)(e.into());
    w.write_record(["iter", "evals", "best", "mean"]).map_err(io)?;
    for (i, ((best, mean), evals)) in r.convergence.iter().zip(&r.mean_fitness).zip(&r.evals).enumerate() {
        w.write_record([i.to_string(), evals.to_string(), fmt_f64(*best), fmt_f64(*mean)]).map_err(io)?;
    }
    w.flush().map_err(HarnessError::io(&tmp))?;
    std::fs::rename(&tmp, path).map_err(HarnessError::io(path))
}
