//! Tables derived from run records, and their CSV forms.
//!
//! All CSV output is UTF-8 with `,` separators, `.` decimals and LF line
//! endings. Means are printed in shortest round-trip form so identical runs
//! give identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use mmga_core::strategy::{selection_report, SelectionStats};
use mmga_core::MutationKind;
use thiserror::Error;

use crate::experiment::{ExperimentResult, RunRecord};
use crate::optima::known_optimum;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{instance}: runs have {first} and {other} generations")]
    GenerationMismatch {
        instance: String,
        first: usize,
        other: usize,
    },
    #[error("no runs to report")]
    Empty,
    #[error("{file}: {message}")]
    Parse { file: String, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Values indexed by (row label, column label), for example mean final
/// length per (operator, instance).
#[derive(Debug, Clone, PartialEq)]
pub struct MeanGrid {
    pub columns: Vec<String>,
    pub rows: Vec<String>,
    /// `cells[row][column]`; `None` where no runs exist.
    pub cells: Vec<Vec<Option<f64>>>,
}

impl MeanGrid {
    pub fn get(&self, row: &str, column: &str) -> Option<f64> {
        let r = self.rows.iter().position(|x| x == row)?;
        let c = self.columns.iter().position(|x| x == column)?;
        self.cells[r][c]
    }

    /// Rows are operators and columns instances, both in first-seen order.
    fn from_records(records: &[RunRecord], value: impl Fn(&RunRecord) -> f64) -> Self {
        let columns = first_seen(records.iter().map(|r| r.instance.clone()));
        let rows = first_seen(records.iter().map(|r| r.operator.name().to_owned()));
        let mut sums = vec![vec![(0.0, 0usize); columns.len()]; rows.len()];
        for rec in records {
            let r = rows.iter().position(|x| x == rec.operator.name()).unwrap();
            let c = columns.iter().position(|x| *x == rec.instance).unwrap();
            sums[r][c].0 += value(rec);
            sums[r][c].1 += 1;
        }
        let cells = sums
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|(s, n)| (n > 0).then(|| s / n as f64))
                    .collect()
            })
            .collect();
        MeanGrid {
            columns,
            rows,
            cells,
        }
    }
}

fn first_seen(items: impl Iterator<Item = String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in items {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// Mean, best and worst final length per (instance, operator).
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub means: MeanGrid,
    pub rows: Vec<SummaryRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub instance: String,
    pub operator: MutationKind,
    pub replicates: usize,
    pub mean_final: f64,
    pub best_final: u64,
    pub worst_final: u64,
}

pub fn summarize(records: &[RunRecord]) -> Result<Summary, ReportError> {
    if records.is_empty() {
        return Err(ReportError::Empty);
    }
    let means = MeanGrid::from_records(records, |r| r.final_length as f64);
    let mut rows = Vec::new();
    for inst in &means.columns {
        for op_name in &means.rows {
            let finals: Vec<u64> = records
                .iter()
                .filter(|r| &r.instance == inst && r.operator.name() == op_name)
                .map(|r| r.final_length)
                .collect();
            if finals.is_empty() {
                continue;
            }
            rows.push(SummaryRow {
                instance: inst.clone(),
                operator: op_name.parse().expect("name came from a MutationKind"),
                replicates: finals.len(),
                mean_final: means.get(op_name, inst).unwrap(),
                best_final: *finals.iter().min().unwrap(),
                worst_final: *finals.iter().max().unwrap(),
            });
        }
    }
    Ok(Summary { means, rows })
}

pub fn summary_csv(summary: &Summary) -> String {
    let mut out = String::from("instance,operator,replicates,mean_final,best_final,worst_final\n");
    for r in &summary.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.instance, r.operator, r.replicates, r.mean_final, r.best_final, r.worst_final
        )
        .unwrap();
    }
    out
}

/// Mean best-so-far length per generation for each operator, over the
/// records of one instance. Columns follow first appearance in `records`.
pub fn convergence_csv(records: &[&RunRecord]) -> Result<String, ReportError> {
    let first = records.first().ok_or(ReportError::Empty)?;
    let generations = first.best_series.len();
    if let Some(bad) = records.iter().find(|r| r.best_series.len() != generations) {
        return Err(ReportError::GenerationMismatch {
            instance: bad.instance.clone(),
            first: generations,
            other: bad.best_series.len(),
        });
    }
    let mut columns: Vec<(MutationKind, Vec<&RunRecord>)> = Vec::new();
    for &r in records {
        match columns.iter_mut().find(|(k, _)| *k == r.operator) {
            Some((_, v)) => v.push(r),
            None => columns.push((r.operator, vec![r])),
        }
    }
    let mut out = String::from("generation");
    for (k, _) in &columns {
        write!(out, ",{k}").unwrap();
    }
    out.push('\n');
    for g in 0..generations {
        write!(out, "{}", g + 1).unwrap();
        for (_, runs) in &columns {
            let sum: f64 = runs.iter().map(|r| r.best_series[g] as f64).sum();
            write!(out, ",{}", sum / runs.len() as f64).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// Competition ranks ("1224"): equal values share a rank and the ranks
/// after them are skipped. `None` values are left unranked.
pub fn competition_ranks(values: &[Option<f64>]) -> Vec<Option<u32>> {
    values
        .iter()
        .map(|v| v.map(|x| 1 + values.iter().flatten().filter(|&&y| y < x).count() as u32))
        .collect()
}

pub const OPTIMAL_LABEL: &str = "Optimal";

#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub columns: Vec<String>,
    /// One row per operator, then the `Optimal` row.
    pub rows: Vec<RankRow>,
    /// Columns ranked without an optimum because none is known.
    pub unknown_optimum: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankRow {
    pub label: String,
    pub ranks: Vec<Option<u32>>,
    /// Mean of the row's ranks, rounded half away from zero.
    pub average: Option<u32>,
}

impl RankTable {
    pub fn row(&self, label: &str) -> Option<&RankRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

/// Ranks the rows of `means` within each column, ascending, with an
/// `Optimal` row holding the known optimum of each column.
pub fn rank_table(means: &MeanGrid) -> RankTable {
    rank_table_with(means, known_optimum)
}

pub fn rank_table_with(means: &MeanGrid, optimum: impl Fn(&str) -> Option<u64>) -> RankTable {
    let optima: Vec<Option<f64>> = means
        .columns
        .iter()
        .map(|c| optimum(c).map(|v| v as f64))
        .collect();
    let n_rows = means.rows.len() + 1;
    let mut ranks = vec![vec![None; means.columns.len()]; n_rows];
    for c in 0..means.columns.len() {
        let mut column: Vec<Option<f64>> = means.cells.iter().map(|row| row[c]).collect();
        column.push(optima[c]);
        for (r, rank) in competition_ranks(&column).into_iter().enumerate() {
            ranks[r][c] = rank;
        }
    }
    let labels = means
        .rows
        .iter()
        .cloned()
        .chain(std::iter::once(OPTIMAL_LABEL.to_owned()));
    let rows = labels
        .zip(ranks)
        .map(|(label, ranks)| {
            let present: Vec<u32> = ranks.iter().flatten().copied().collect();
            let average = (!present.is_empty()).then(|| {
                let mean = present.iter().sum::<u32>() as f64 / present.len() as f64;
                mean.round() as u32
            });
            RankRow {
                label,
                ranks,
                average,
            }
        })
        .collect();
    RankTable {
        columns: means.columns.clone(),
        rows,
        unknown_optimum: means
            .columns
            .iter()
            .zip(&optima)
            .filter(|(_, o)| o.is_none())
            .map(|(c, _)| c.clone())
            .collect(),
    }
}

/// Unranked cells are left empty, except the `Optimal` row which says
/// `unknown` where no optimum is on file.
pub fn rank_csv(table: &RankTable) -> String {
    let mut out = String::from("operator");
    for c in &table.columns {
        write!(out, ",{c}").unwrap();
    }
    out.push_str(",Average\n");
    for row in &table.rows {
        out.push_str(&row.label);
        for rank in &row.ranks {
            match rank {
                Some(r) => write!(out, ",{r}").unwrap(),
                None if row.label == OPTIMAL_LABEL => out.push_str(",unknown"),
                None => out.push(','),
            }
        }
        match row.average {
            Some(a) => writeln!(out, ",{a}").unwrap(),
            None => out.push_str(",\n"),
        }
    }
    out
}

/// Mean wall time per (operator, instance), plus the rounded SBM/SAM ratio
/// per instance when both strategies ran.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingTable {
    pub millis: MeanGrid,
    pub sbm_sam_ratio: Option<Vec<Option<u64>>>,
}

pub fn timing_report(records: &[RunRecord]) -> TimingTable {
    let millis = MeanGrid::from_records(records, |r| r.wall_ms);
    let has = |k: MutationKind| millis.rows.iter().any(|r| r == k.name());
    let sbm_sam_ratio = (has(MutationKind::Sbm) && has(MutationKind::Sam)).then(|| {
        millis
            .columns
            .iter()
            .map(|c| {
                let sbm = millis.get("SBM", c)?;
                let sam = millis.get("SAM", c)?;
                Some((sbm / sam).round() as u64)
            })
            .collect()
    });
    TimingTable {
        millis,
        sbm_sam_ratio,
    }
}

pub fn timing_csv(table: &TimingTable) -> String {
    let mut out = String::from("operator");
    for c in &table.millis.columns {
        write!(out, ",{c}").unwrap();
    }
    out.push('\n');
    for (label, row) in table.millis.rows.iter().zip(&table.millis.cells) {
        out.push_str(label);
        for cell in row {
            match cell {
                Some(ms) => write!(out, ",{ms:.3}").unwrap(),
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    if let Some(ratios) = &table.sbm_sam_ratio {
        out.push_str("SBM/SAM");
        for r in ratios {
            match r {
                Some(r) => write!(out, ",{r}").unwrap(),
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

/// Operator selection shares of each (instance, SBM/SAM) pair, summed over
/// replicates.
pub fn selection_csv(records: &[RunRecord]) -> String {
    let mut totals: Vec<(String, MutationKind, SelectionStats)> = Vec::new();
    for r in records {
        let Some(stats) = &r.selections else { continue };
        match totals
            .iter_mut()
            .find(|(i, k, _)| *i == r.instance && *k == r.operator)
        {
            Some((_, _, acc)) => acc.merge(stats),
            None => totals.push((r.instance.clone(), r.operator, *stats)),
        }
    }
    let mut out = String::from("instance,strategy,operator,count,percent\n");
    for (inst, strategy, stats) in &totals {
        let Ok(shares) = selection_report(stats) else {
            continue;
        };
        for ((kind, pct), (_, count)) in shares.into_iter().zip(stats.iter()) {
            writeln!(out, "{inst},{strategy},{kind},{count},{pct:.2}").unwrap();
        }
    }
    out
}

pub const RUNS_FILE: &str = "runs.csv";
pub const RUN_TIMES_FILE: &str = "run_times.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const RANKS_FILE: &str = "ranks.csv";
pub const TIMING_FILE: &str = "timing.csv";
pub const SELECTION_FILE: &str = "selection.csv";

/// Files whose content depends on wall-clock time.
pub const TIMING_FILES: [&str; 2] = [RUN_TIMES_FILE, TIMING_FILE];

pub fn convergence_file_name(instance: &str) -> String {
    format!("convergence_{instance}.csv")
}

/// Writes every artifact of `result` into `dir`, creating it if needed.
pub fn write_artifacts(result: &ExperimentResult, dir: &Path) -> Result<(), ReportError> {
    fs::create_dir_all(dir)?;
    for inst in &result.instances {
        let runs: Vec<&RunRecord> = result
            .records
            .iter()
            .filter(|r| &r.instance == inst)
            .collect();
        fs::write(
            dir.join(convergence_file_name(inst)),
            convergence_csv(&runs)?,
        )?;
    }
    write_runs(&result.records, dir)?;
    write_tables(&result.records, dir)?;
    Ok(())
}

/// Summary, rank, timing and selection tables.
pub fn write_tables(records: &[RunRecord], dir: &Path) -> Result<(), ReportError> {
    let summary = summarize(records)?;
    fs::write(dir.join(SUMMARY_FILE), summary_csv(&summary))?;
    fs::write(dir.join(RANKS_FILE), rank_csv(&rank_table(&summary.means)))?;
    fs::write(dir.join(TIMING_FILE), timing_csv(&timing_report(records)))?;
    fs::write(dir.join(SELECTION_FILE), selection_csv(records))?;
    Ok(())
}

const RUNS_HEADER: [&str; 7] = [
    "instance",
    "operator",
    "replicate",
    "seed",
    "initial_best",
    "final_best",
    "final_tour",
];

/// `runs.csv` holds one line per run with its selection tallies (empty for
/// concrete operators) and `run_times.csv` the matching wall times.
fn write_runs(records: &[RunRecord], dir: &Path) -> Result<(), ReportError> {
    let mut runs = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(dir.join(RUNS_FILE))?;
    let mut header: Vec<String> = RUNS_HEADER.iter().map(|s| s.to_string()).collect();
    header.extend(MutationKind::CONCRETE.iter().map(|k| format!("sel_{k}")));
    runs.write_record(&header)?;
    let mut times = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(dir.join(RUN_TIMES_FILE))?;
    times.write_record(["instance", "operator", "replicate", "wall_ms"])?;

    for r in records {
        let tour = r
            .final_tour
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let mut row = vec![
            r.instance.clone(),
            r.operator.to_string(),
            r.replicate.to_string(),
            r.seed.to_string(),
            r.initial_best.to_string(),
            r.final_length.to_string(),
            tour,
        ];
        match &r.selections {
            Some(s) => row.extend(s.iter().map(|(_, c)| c.to_string())),
            None => row.extend(std::iter::repeat_n(String::new(), 12)),
        }
        runs.write_record(&row)?;
        times.write_record([
            r.instance.clone(),
            r.operator.to_string(),
            r.replicate.to_string(),
            format!("{:.3}", r.wall_ms),
        ])?;
    }
    runs.flush()?;
    times.flush()?;
    Ok(())
}

/// Reads back the records written by [`write_artifacts`], without their
/// per-generation series.
pub fn load_runs(dir: &Path) -> Result<Vec<RunRecord>, ReportError> {
    let runs_path = dir.join(RUNS_FILE);
    let times_path = dir.join(RUN_TIMES_FILE);
    let bad = |path: &Path, message: String| ReportError::Parse {
        file: path.display().to_string(),
        message,
    };

    let mut times: BTreeMap<(String, String, usize), f64> = BTreeMap::new();
    if times_path.exists() {
        let mut rd =
            csv::Reader::from_path(&times_path).map_err(|e| bad(&times_path, e.to_string()))?;
        for (i, row) in rd.records().enumerate() {
            let row = row?;
            let field = |k: usize| row.get(k).unwrap_or("");
            let rep = field(2)
                .parse()
                .map_err(|_| bad(&times_path, format!("row {}: bad replicate", i + 1)))?;
            let ms = field(3)
                .parse()
                .map_err(|_| bad(&times_path, format!("row {}: bad wall_ms", i + 1)))?;
            times.insert((field(0).to_owned(), field(1).to_owned(), rep), ms);
        }
    }

    let mut rd = csv::Reader::from_path(&runs_path).map_err(|e| bad(&runs_path, e.to_string()))?;
    let mut records = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row?;
        let err = |what: &str| bad(&runs_path, format!("row {}: bad {what}", i + 1));
        let field = |k: usize| row.get(k).unwrap_or("");
        let num = |k: usize, what: &str| field(k).parse::<u64>().map_err(|_| err(what));
        let operator: MutationKind = field(1).parse().map_err(|_| err("operator"))?;
        let replicate = num(2, "replicate")? as usize;
        let final_tour = field(6)
            .split_whitespace()
            .map(|c| c.parse::<usize>().map_err(|_| err("final_tour")))
            .collect::<Result<_, _>>()?;
        let selections = if operator.is_meta() {
            let mut counts = [0; 12];
            for (j, c) in counts.iter_mut().enumerate() {
                *c = num(RUNS_HEADER.len() + j, "selection count")?;
            }
            Some(SelectionStats::from_counts(counts))
        } else {
            None
        };
        records.push(RunRecord {
            instance: field(0).to_owned(),
            operator,
            replicate,
            seed: num(3, "seed")?,
            initial_best: num(4, "initial_best")?,
            best_series: Vec::new(),
            final_length: num(5, "final_best")?,
            final_tour,
            wall_ms: times
                .get(&(field(0).to_owned(), field(1).to_owned(), replicate))
                .copied()
                .unwrap_or(f64::NAN),
            selections,
        });
    }
    Ok(records)
}
