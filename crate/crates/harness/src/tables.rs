//! Per-run results and the comparison tables derived from them.

use crate::config::Algorithm;
use crate::error::{HarnessError, Result};
use agto_core::benchmarks::FunctionId;
use agto_core::stats::{friedman_ranks, summarize, wilcoxon_rank_sum, RankTable};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

/// Floats are written in Rust's shortest round-trip scientific notation,
/// so reading a file back reproduces every value bit for bit.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}

pub const RUNS_HEADER: [&str; 6] = ["function", "algorithm", "run", "seed", "best", "evals_used"];

/// Best fitness of one completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub function: FunctionId,
    pub algorithm: Algorithm,
    pub run: u32,
    pub seed: u64,
    pub best: f64,
    pub evals_used: usize,
}

pub fn write_runs(path: &Path, rows: &[RunRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut put = |rec: &[String]| w.write_record(rec).map_err(|e| HarnessError::io(path)(e.into()));
    put(&RUNS_HEADER.map(String::from))?;
    for r in rows {
        put(&[
            r.function.to_string(),
            r.algorithm.to_string(),
            r.run.to_string(),
            r.seed.to_string(),
            fmt_f64(r.best),
            r.evals_used.to_string(),
        ])?;
    }
    w.flush().map_err(HarnessError::io(path))
}

pub fn read_runs(path: &Path) -> Result<Vec<RunRow>> {
    let parse_err = |line: u64, message: String| HarnessError::Parse { path: path.to_path_buf(), line, message };
    let csv_err = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line());
        match e.into_kind() {
            csv::ErrorKind::Io(source) => HarnessError::Io { path: path.to_path_buf(), source },
            kind => parse_err(line, format!("{kind:?}")),
        }
    };
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_path(path).map_err(csv_err)?;
    let header = reader.headers().map_err(csv_err)?.clone();
    if header.iter().ne(RUNS_HEADER) {
        return Err(parse_err(1, format!("expected header {}", RUNS_HEADER.join(","))));
    }
    let mut rows = Vec::new();
    let mut seen = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(i).unwrap_or_default();
        let row = (|| -> std::result::Result<RunRow, String> {
            let best: f64 = field(4).parse().map_err(|e| format!("best {:?}: {e}", field(4)))?;
            if !best.is_finite() {
                return Err(format!("best {best} is not finite"));
            }
            Ok(RunRow {
                function: field(0).parse().map_err(|e| format!("{e}"))?,
                algorithm: field(1).parse().map_err(|e| format!("{e}"))?,
                run: field(2).parse().map_err(|e| format!("run {:?}: {e}", field(2)))?,
                seed: field(3).parse().map_err(|e| format!("seed {:?}: {e}", field(3)))?,
                best,
                evals_used: field(5).parse().map_err(|e| format!("evals_used {:?}: {e}", field(5)))?,
            })
        })()
        .map_err(|m| parse_err(line, m))?;
        if let Some(first) = seen.insert((row.function, row.algorithm, row.run), line) {
            return Err(parse_err(line, format!("run {} of {} on {} already listed on line {first}", row.run, row.algorithm, row.function)));
        }
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub function: FunctionId,
    pub algorithm: Algorithm,
    pub avg: f64,
    pub std: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PValueRow {
    pub function: FunctionId,
    pub algorithm: Algorithm,
    /// Two-sided rank-sum p against the reference; NaN when undefined.
    pub p_value: f64,
}

/// Summary, rank and p-value tables of a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct Tables {
    pub functions: Vec<FunctionId>,
    pub algorithms: Vec<Algorithm>,
    /// Function-major, algorithms in order within each function.
    pub summary: Vec<SummaryRow>,
    pub ranks: RankTable,
    /// Algorithm every other one is tested against: AGTO when present.
    pub reference: Algorithm,
    pub pvalues: Vec<PValueRow>,
}

impl Tables {
    /// Builds the tables; every algorithm needs runs on every function.
    pub fn from_runs(rows: &[RunRow]) -> Result<Tables> {
        let mut samples: BTreeMap<(FunctionId, Algorithm), Vec<(u32, f64)>> = BTreeMap::new();
        for r in rows {
            samples.entry((r.function, r.algorithm)).or_default().push((r.run, r.best));
        }
        for s in samples.values_mut() {
            s.sort_by_key(|&(run, _)| run);
        }
        let mut functions: Vec<FunctionId> = rows.iter().map(|r| r.function).collect();
        functions.sort();
        functions.dedup();
        let mut algorithms: Vec<Algorithm> = rows.iter().map(|r| r.algorithm).collect();
        algorithms.sort();
        algorithms.dedup();
        if functions.is_empty() {
            return Err(HarnessError::Incomplete("no runs".into()));
        }

        let bests = |f: FunctionId, a: Algorithm| -> Result<Vec<f64>> {
            samples
                .get(&(f, a))
                .map(|s| s.iter().map(|&(_, b)| b).collect())
                .ok_or_else(|| HarnessError::Incomplete(format!("no runs of {a} on {f}")))
        };
        let mut summary = Vec::new();
        let (mut avg, mut std) = (Vec::new(), Vec::new());
        for &f in &functions {
            let (mut avg_row, mut std_row) = (Vec::new(), Vec::new());
            for &a in &algorithms {
                let b = bests(f, a)?;
                let s = summarize(&b).expect("samples are non-empty");
                summary.push(SummaryRow { function: f, algorithm: a, avg: s.avg, std: s.std, runs: b.len() });
                avg_row.push(s.avg);
                std_row.push(s.std);
            }
            avg.push(avg_row);
            std.push(std_row);
        }
        let ranks = friedman_ranks(&avg, &std).map_err(|e| HarnessError::Incomplete(e.to_string()))?;

        let reference = if algorithms.contains(&Algorithm::Agto) { Algorithm::Agto } else { algorithms[0] };
        let mut pvalues = Vec::new();
        for &f in &functions {
            let base = bests(f, reference)?;
            for &a in algorithms.iter().filter(|&&a| a != reference) {
                // too few runs to rank is as undefined as all-equal samples
                let p_value = wilcoxon_rank_sum(&base, &bests(f, a)?).unwrap_or(f64::NAN);
                pvalues.push(PValueRow { function: f, algorithm: a, p_value });
            }
        }
        Ok(Tables { functions, algorithms, summary, ranks, reference, pvalues })
    }

    pub fn summary_of(&self, function: FunctionId, algorithm: Algorithm) -> Option<&SummaryRow> {
        self.summary.iter().find(|r| r.function == function && r.algorithm == algorithm)
    }

    pub fn average_rank(&self, algorithm: Algorithm) -> Option<f64> {
        self.algorithms.iter().position(|&a| a == algorithm).map(|i| self.ranks.average_rank[i])
    }

    pub fn summary_csv(&self) -> String {
        let mut rows = vec![["function", "algorithm", "avg", "std", "runs"].map(String::from).to_vec()];
        for r in &self.summary {
            rows.push(vec![r.function.to_string(), r.algorithm.to_string(), fmt_f64(r.avg), fmt_f64(r.std), r.runs.to_string()]);
        }
        csv_text(&rows)
    }

    /// Per-function ranks followed by `rank_sum`, `average_rank` and
    /// `final_rank` rows, one per algorithm.
    pub fn ranks_csv(&self) -> String {
        let mut rows = vec![["function", "algorithm", "rank"].map(String::from).to_vec()];
        for (f, ranks) in self.functions.iter().zip(&self.ranks.per_function_ranks) {
            for (a, r) in self.algorithms.iter().zip(ranks) {
                rows.push(vec![f.to_string(), a.to_string(), r.to_string()]);
            }
        }
        let t = &self.ranks;
        for (i, a) in self.algorithms.iter().enumerate() {
            rows.push(vec!["rank_sum".into(), a.to_string(), t.rank_sum[i].to_string()]);
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            rows.push(vec!["average_rank".into(), a.to_string(), fmt_f64(t.average_rank[i])]);
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            rows.push(vec!["final_rank".into(), a.to_string(), t.final_rank[i].to_string()]);
        }
        csv_text(&rows)
    }

    pub fn pvalues_csv(&self) -> String {
        let mut rows = vec![["function", "algorithm", "p_value"].map(String::from).to_vec()];
        for r in &self.pvalues {
            rows.push(vec![r.function.to_string(), r.algorithm.to_string(), fmt_f64(r.p_value)]);
        }
        csv_text(&rows)
    }

    pub fn final_rank_line(&self) -> String {
        let mut order: Vec<usize> = (0..self.algorithms.len()).collect();
        order.sort_by_key(|&i| self.ranks.final_rank[i]);
        let parts: Vec<String> = order
            .iter()
            .map(|&i| {
                format!("{} {} (average rank {:.3})", self.algorithms[i], self.ranks.final_rank[i], self.ranks.average_rank[i])
            })
            .collect();
        format!("final rank: {}", parts.join(", "))
    }

    /// Writes summary.csv, ranks.csv and pvalues.csv into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        for (name, text) in
            [("summary.csv", self.summary_csv()), ("ranks.csv", self.ranks_csv()), ("pvalues.csv", self.pvalues_csv())]
        {
            write_file(&dir.join(name), text.as_bytes())?;
        }
        Ok(())
    }

    /// Human-facing report: the rank table, the p-values and the final ranks.
    pub fn render(&self) -> String {
        format!(
            "# ranks\n{}\n# p-values against {}\n{}\n{}\n",
            self.ranks_csv(),
            self.reference,
            self.pvalues_csv(),
            self.final_rank_line()
        )
    }
}

fn csv_text(rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("fields are utf-8")
}

pub(crate) fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let file = std::fs::File::create(path).map_err(HarnessError::io(path))?;
    Ok(csv::Writer::from_writer(file))
}

/// Replaces `path` atomically so readers never see a half-written file.
pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let mut f = std::fs::File::create(&tmp).map_err(HarnessError::io(&tmp))?;
    f.write_all(bytes).and_then(|()| f.sync_all()).map_err(HarnessError::io(&tmp))?;
    std::fs::rename(&tmp, path).map_err(HarnessError::io(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(f: u8, a: Algorithm, run: u32, best: f64) -> RunRow {
        RunRow { function: FunctionId::new(f).unwrap(), algorithm: a, run, seed: 0, best, evals_used: 10 }
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.0, -0.0, 1.5, 1e-300, -12569.486618173011, f64::MIN_POSITIVE, 0.1 + 0.2] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(fmt_f64(f64::NAN), "NaN");
        assert_eq!(fmt_f64(1500.0), "1.5e3");
    }

    #[test]
    fn tables_from_runs() {
        use Algorithm::*;
        let mut rows = Vec::new();
        for run in 0..5 {
            rows.push(row(1, Agto, run, 0.0));
            rows.push(row(1, Gto, run, 0.0));
            rows.push(row(2, Agto, run, f64::from(run)));
            rows.push(row(2, Gto, run, 10.0 + f64::from(run)));
        }
        let t = Tables::from_runs(&rows).unwrap();
        assert_eq!(t.ranks.per_function_ranks, vec![vec![1, 1], vec![1, 2]]);
        assert_eq!(t.ranks.rank_sum, vec![2, 3]);
        assert!(t.pvalues[0].p_value.is_nan());
        assert!(t.pvalues[1].p_value < 0.05);
        assert_eq!(t.reference, Agto);
        let ranks = t.ranks_csv();
        assert!(ranks.ends_with("rank_sum,agto,2\nrank_sum,gto,3\naverage_rank,agto,1e0\naverage_rank,gto,1.5e0\nfinal_rank,agto,1\nfinal_rank,gto,2\n"), "{ranks}");
        assert!(t.pvalues_csv().starts_with("function,algorithm,p_value\nF1,gto,NaN\n"));
        assert_eq!(t.summary_csv().lines().nth(3), Some("F2,agto,2e0,1.5811388300841898e0,5"));
    }

    #[test]
    fn missing_cells_are_reported() {
        let rows = vec![row(1, Algorithm::Agto, 0, 1.0), row(2, Algorithm::Gto, 0, 1.0)];
        assert!(matches!(Tables::from_runs(&rows), Err(HarnessError::Incomplete(_))));
    }

    #[test]
    fn single_runs_give_nan_p_values() {
        let rows = vec![row(1, Algorithm::Agto, 0, 1.0), row(1, Algorithm::Gto, 0, 2.0)];
        assert!(Tables::from_runs(&rows).unwrap().pvalues[0].p_value.is_nan());
    }
}
