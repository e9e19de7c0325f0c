//! CSV records and grouped summaries.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Serialize};

/// Column order of the results CSV.
pub const CSV_HEADER: [&str; 14] = [
    "dataset",
    "strategy",
    "k",
    "m",
    "gap_lo",
    "gap_hi",
    "block_size",
    "pattern_id",
    "micros",
    "endpoints",
    "cand_stage0",
    "cand_stage1",
    "cand_stage2",
    "verified",
];

/// One timed pattern. `block_size` is 0 for strategies without a filter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub dataset: String,
    pub strategy: String,
    pub k: usize,
    pub m: usize,
    pub gap_lo: u64,
    pub gap_hi: u64,
    pub block_size: u64,
    pub pattern_id: usize,
    /// Median wall time over the timed repetitions.
    pub micros: u64,
    pub endpoints: u64,
    /// Summed over adjacencies: raw partner occurrences.
    pub cand_stage0: u64,
    /// After filtering.
    pub cand_stage1: u64,
    /// After exact intersection.
    pub cand_stage2: u64,
    pub verified: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn write_csv<W: io::Write>(records: &[BenchRecord], out: W) -> Result<(), ReportError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<BenchRecord>, ReportError> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|rec| rec.map_err(ReportError::from)).collect()
}

/// Aggregate over the patterns of one cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSummary {
    pub dataset: String,
    pub strategy: String,
    pub k: usize,
    pub m: usize,
    pub gap_lo: u64,
    pub gap_hi: u64,
    pub block_size: u64,
    pub patterns: usize,
    pub median_micros: u64,
    pub total_micros: u64,
    pub all_verified: bool,
}

type CellKey = (String, usize, usize, String, u64, u64, u64);

pub fn summarize(records: &[BenchRecord]) -> Vec<CellSummary> {
    let mut cells: BTreeMap<CellKey, Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        let key = (r.dataset.clone(), r.m, r.k, r.strategy.clone(), r.block_size, r.gap_lo, r.gap_hi);
        cells.entry(key).or_default().push(r);
    }
    cells
        .into_iter()
        .map(|((dataset, m, k, strategy, block_size, gap_lo, gap_hi), rs)| {
            let mut times: Vec<u64> = rs.iter().map(|r| r.micros).collect();
            times.sort_unstable();
            CellSummary {
                dataset,
                strategy,
                k,
                m,
                gap_lo,
                gap_hi,
                block_size,
                patterns: rs.len(),
                median_micros: times[times.len() / 2],
                total_micros: times.iter().sum(),
                all_verified: rs.iter().all(|r| r.verified),
            }
        })
        .collect()
}

/// Table of total milliseconds per cell: one block per (dataset, m), one
/// row per (k, strategy, block size), one column per gap band.
pub fn render_summary(cells: &[CellSummary]) -> String {
    let mut out = String::new();
    let mut blocks: BTreeMap<(&str, usize), Vec<&CellSummary>> = BTreeMap::new();
    for c in cells {
        blocks.entry((&c.dataset, c.m)).or_default().push(c);
    }
    for ((dataset, m), cs) in blocks {
        let mut bands: Vec<(u64, u64)> = cs.iter().map(|c| (c.gap_lo, c.gap_hi)).collect();
        bands.sort_unstable();
        bands.dedup();
        let _ = writeln!(out, "dataset {dataset}, m = {m} (total ms over all patterns)");
        let _ = write!(out, "{:<4} {:<10} {:>6}", "k", "strategy", "b");
        for (lo, hi) in &bands {
            let _ = write!(out, " {:>14}", format!("<{lo},{hi}>"));
        }
        out.push('\n');
        let mut rows: BTreeMap<(usize, &str, u64), BTreeMap<(u64, u64), &CellSummary>> = BTreeMap::new();
        for c in &cs {
            rows.entry((c.k, &c.strategy, c.block_size))
                .or_default()
                .insert((c.gap_lo, c.gap_hi), c);
        }
        for ((k, strategy, b), row) in rows {
            let b = if b == 0 { "-".to_string() } else { b.to_string() };
            let _ = write!(out, "{k:<4} {strategy:<10} {b:>6}");
            for band in &bands {
                match row.get(band) {
                    Some(c) => {
                        let _ = write!(out, " {:>14.1}", c.total_micros as f64 / 1000.0);
                    }
                    None => {
                        let _ = write!(out, " {:>14}", "");
                    }
                }
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}
