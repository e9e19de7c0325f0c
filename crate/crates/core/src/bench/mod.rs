//! Benchmark harness: synthetic pattern sets, strategy sweeps, timing.

mod config;
mod corpus;
mod report;

use std::time::{Duration, Instant};

pub use config::{BenchConfig, ConfigError, GAP_BANDS};
pub use corpus::{generate_corpus, CorpusConfig, CorpusError};
pub use report::{read_csv, render_summary, summarize, write_csv, BenchRecord, CellSummary, ReportError, CSV_HEADER};

use crate::block_filter::default_block_size;
use crate::match_engine::{oracle_search_with, search, SearchError, SearchOptions, StrategyKind};
use crate::pattern::{generate_patterns_from_pool, top_frequent_substrings, GapConstraint, PatternError, VlgPattern, POOL_SIZE};
use crate::text_index::Index;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("text of {n} bytes is shorter than Δ + m = {needed}")]
    TextTooShort { n: usize, needed: u64 },
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the pattern set for one (k, m, band) cell.
pub fn cell_seed(seed: u64, k: usize, m: usize, gap: GapConstraint) -> u64 {
    [k as u64, m as u64, gap.min, gap.max]
        .into_iter()
        .fold(mix(seed), |acc, v| mix(acc ^ v))
}

/// The pattern set of one cell, drawn from the top substrings of `pool`.
pub fn cell_patterns(
    pool: &[Vec<u8>],
    cfg: &BenchConfig,
    k: usize,
    m: usize,
    gap: GapConstraint,
) -> Result<Vec<VlgPattern>, PatternError> {
    generate_patterns_from_pool(pool, k, gap, cfg.patterns_per_cell, cell_seed(cfg.seed, k, m, gap))
}

fn median(mut v: Vec<Duration>) -> Duration {
    v.sort_unstable();
    v[v.len() / 2]
}

/// Runs every configured cell against `index`.
///
/// Each pattern gets one untimed warm-up run followed by `reps` timed
/// runs; the median is recorded. Only the search itself is timed.
pub fn run_bench(cfg: &BenchConfig, index: &Index) -> Result<Vec<BenchRecord>, BenchError> {
    let n = index.len();
    for &m in &cfg.ms {
        for band in &cfg.bands {
            let needed = band.max + m as u64;
            if (n as u64) < needed {
                return Err(BenchError::TextTooShort { n, needed });
            }
        }
    }

    let mut records = Vec::new();
    for &m in &cfg.ms {
        let pool: Vec<Vec<u8>> = top_frequent_substrings(index.text(), m, POOL_SIZE)?
            .into_iter()
            .map(|(s, _)| s)
            .collect();
        for &k in &cfg.ks {
            for &band in &cfg.bands {
                let patterns = cell_patterns(&pool, cfg, k, m, band)?;
                let truth: Option<Vec<Vec<u64>>> = cfg.verify.then(|| {
                    patterns
                        .iter()
                        .map(|p| oracle_search_with(index.text().as_bytes(), p, None).endpoints)
                        .collect()
                });
                for &strategy in &cfg.strategies {
                    let blocks: Vec<Option<u64>> = if strategy.uses_filter() && !cfg.block_sizes.is_empty() {
                        cfg.block_sizes.iter().copied().map(Some).collect()
                    } else {
                        vec![None]
                    };
                    for block in blocks {
                        let opts = SearchOptions {
                            strategy,
                            block_size: block,
                            filter_budget: cfg.filter_budget,
                            sort_cost: cfg.sort_cost,
                            tuples: None,
                        };
                        let block_size = if strategy.uses_filter() {
                            block.unwrap_or_else(|| default_block_size(n as u64, band.width(), cfg.filter_budget))
                        } else {
                            0
                        };
                        for (pattern_id, p) in patterns.iter().enumerate() {
                            let mut result = search(index, p, &opts)?;
                            let mut times = Vec::with_capacity(cfg.reps);
                            for _ in 0..cfg.reps {
                                let start = Instant::now();
                                result = search(index, p, &opts)?;
                                times.push(start.elapsed());
                            }
                            let [s0, s1, s2] = result.stats.candidate_stages();
                            let verified = truth
                                .as_ref()
                                .is_some_and(|t| t[pattern_id] == result.endpoints);
                            records.push(BenchRecord {
                                dataset: cfg.dataset.clone(),
                                strategy: strategy.name().to_string(),
                                k,
                                m,
                                gap_lo: band.min,
                                gap_hi: band.max,
                                block_size,
                                pattern_id,
                                micros: median(times).as_micros() as u64,
                                endpoints: result.endpoints.len() as u64,
                                cand_stage0: s0,
                                cand_stage1: s1,
                                cand_stage2: s2,
                                verified,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(records)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    /// Suggested planner weight of one sorted element.
    pub sort_cost: f64,
    /// Per-pattern ratios the estimate is the median of.
    pub samples: Vec<f64>,
}

/// Estimates the planner's sort-cost constant on this host: the time per
/// element of the filtering path divided by the time per scanned byte of
/// forward text checking, over two-subpattern patterns drawn as in the
/// benchmark.
pub fn calibrate(index: &Index, seed: u64, patterns: usize) -> Result<Calibration, BenchError> {
    let gap = GAP_BANDS[0];
    let m = 3;
    if (index.len() as u64) < gap.max + m as u64 {
        return Err(BenchError::TextTooShort {
            n: index.len(),
            needed: gap.max + m as u64,
        });
    }
    let pool: Vec<Vec<u8>> = top_frequent_substrings(index.text(), m, POOL_SIZE)?
        .into_iter()
        .map(|(s, _)| s)
        .collect();
    let pats = generate_patterns_from_pool(&pool, 2, gap, patterns.max(1), seed)?;
    let time = |p: &VlgPattern, s: StrategyKind| -> Result<Duration, SearchError> {
        let opts = SearchOptions::with_strategy(s);
        search(index, p, &opts)?;
        let runs: Vec<Duration> = (0..3)
            .map(|_| {
                let t = Instant::now();
                search(index, p, &opts).map(|_| t.elapsed())
            })
            .collect::<Result<_, _>>()?;
        Ok(median(runs))
    };
    let mut samples = Vec::new();
    for p in &pats {
        let a = index.find_interval(&p.subpatterns()[0]).map_err(SearchError::from)?.width() as f64;
        let b = index.find_interval(&p.subpatterns()[1]).map_err(SearchError::from)?.width() as f64;
        if a == 0.0 || b == 0.0 {
            continue;
        }
        let filter_per_elem = time(p, StrategyKind::FilterSort)?.as_secs_f64() / (a + b);
        let check_per_byte = time(p, StrategyKind::TextCheck)?.as_secs_f64() / (a.min(b) * (gap.width() + m as u64) as f64);
        if check_per_byte > 0.0 {
            samples.push(filter_per_elem / check_per_byte);
        }
    }
    let sort_cost = if samples.is_empty() {
        crate::match_engine::DEFAULT_SORT_COST
    } else {
        let mut s = samples.clone();
        s.sort_by(f64::total_cmp);
        s[s.len() / 2]
    };
    Ok(Calibration { sort_cost, samples })
}
