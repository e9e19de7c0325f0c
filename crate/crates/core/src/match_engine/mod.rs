//! Indexed VLG matching.
//!
//! Every strategy chains adjacencies left to right: the surviving
//! positions of subpattern `j` become the anchors for subpattern `j + 1`.
//! Results use endpoint semantics (distinct start positions of the last
//! subpattern completing a chain); full tuples are opt-in.

mod filter;
mod intersect;
mod kmp;
mod oracle;
mod radix;
mod text_check;

use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;

pub use filter::{filter_pair, Direction, FilterOutcome};
pub use intersect::{intersect_gapped, intersect_gapped_predecessors};
pub use kmp::{kmp_search, EmptyNeedle, Kmp};
pub use oracle::{oracle_search, oracle_search_with, oracle_tuple_count};
pub use radix::{radix_sort, radix_sort_in_place};
pub use text_check::{text_check_backward, text_check_forward};

use crate::block_filter::{default_block_size, BlockFilter, FilterError, DEFAULT_FILTER_BUDGET};
use crate::pattern::{GapConstraint, VlgPattern};
use crate::text_index::{extract_into, Index, IndexError, SaInterval};

/// Default weight of one sorted element relative to one scanned text byte.
pub const DEFAULT_SORT_COST: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum StrategyKind {
    /// Library comparison sort, then gapped intersection.
    #[value(name = "baseline")]
    BaselineSort,
    /// LSD radix sort, then gapped intersection.
    #[value(name = "radix")]
    RadixSort,
    /// Block filter, radix sort of survivors, gapped intersection.
    #[value(name = "filter")]
    FilterSort,
    /// KMP over the gap window of each anchor of the smaller side.
    #[value(name = "textcheck")]
    TextCheck,
    /// Per adjacency, text checking or filtering by estimated cost.
    #[value(name = "auto")]
    Auto,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 5] = [
        StrategyKind::BaselineSort,
        StrategyKind::RadixSort,
        StrategyKind::FilterSort,
        StrategyKind::TextCheck,
        StrategyKind::Auto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::BaselineSort => "baseline",
            StrategyKind::RadixSort => "radix",
            StrategyKind::FilterSort => "filter",
            StrategyKind::TextCheck => "textcheck",
            StrategyKind::Auto => "auto",
        }
    }

    pub fn uses_filter(self) -> bool {
        matches!(self, StrategyKind::FilterSort | StrategyKind::Auto)
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown strategy {s:?}"))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("gap {index} has Δ = {max} but must be below the text length {n}")]
    GapTooLarge { index: usize, max: u64, n: u64 },
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Filter(#[from] FilterError),
}

/// Cost-model choice between text checking and filtering for one adjacency.
///
/// Text checking costs about `min(occ_a, occ_b) * (Δ - δ + m_next)` byte
/// comparisons; the sort path about `sort_cost * (occ_a + occ_b)`.
pub fn plan_pair(occ_a: u64, occ_b: u64, m_next: usize, gap: GapConstraint, sort_cost: f64) -> StrategyKind {
    let smaller = occ_a.min(occ_b);
    if smaller == 0 {
        return StrategyKind::TextCheck;
    }
    let check = smaller as f64 * (gap.width() as f64 + m_next as f64);
    let sort = sort_cost * (occ_a as f64 + occ_b as f64);
    if check < sort {
        StrategyKind::TextCheck
    } else {
        StrategyKind::FilterSort
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOptions {
    pub strategy: StrategyKind,
    /// Filter block size; chosen per adjacency from the gap width when unset.
    pub block_size: Option<u64>,
    /// Cache budget in bytes used by the default block-size rule.
    pub filter_budget: usize,
    /// Planner weight of one sorted element; see [`plan_pair`].
    pub sort_cost: f64,
    /// `None`: endpoints only. `Some(cap)`: also enumerate tuples, at most
    /// `cap` of them when `cap` is set.
    pub tuples: Option<Option<usize>>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            strategy: StrategyKind::Auto,
            block_size: None,
            filter_budget: DEFAULT_FILTER_BUDGET,
            sort_cost: DEFAULT_SORT_COST,
            tuples: None,
        }
    }
}

impl SearchOptions {
    pub fn with_strategy(strategy: StrategyKind) -> Self {
        SearchOptions {
            strategy,
            ..Default::default()
        }
    }

    pub fn block_size(mut self, b: u64) -> Self {
        self.block_size = Some(b);
        self
    }

    pub fn tuples(mut self, cap: Option<usize>) -> Self {
        self.tuples = Some(cap);
        self
    }
}

/// Bookkeeping for one adjacency `j -> j+1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdjacencyStats {
    pub strategy: Option<StrategyKind>,
    pub anchors: u64,
    /// Occurrences of subpattern `j + 1`.
    pub raw: u64,
    /// Candidates for `j + 1` left for the exact step.
    pub filtered: u64,
    /// Positions of `j + 1` completing a chain.
    pub survivors: u64,
    pub block_size: Option<u64>,
    pub second_round: bool,
    pub backward: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// SA interval width of every subpattern.
    pub occurrences: Vec<u64>,
    pub adjacencies: Vec<AdjacencyStats>,
    /// Some subpattern did not occur; nothing else was computed.
    pub short_circuited: bool,
}

impl SearchStats {
    /// Candidate totals across adjacencies at the three pipeline stages:
    /// raw occurrences, after filtering, after exact intersection.
    /// Non-increasing by construction.
    pub fn candidate_stages(&self) -> [u64; 3] {
        self.adjacencies.iter().fold([0; 3], |acc, a| {
            [acc[0] + a.raw, acc[1] + a.filtered, acc[2] + a.survivors]
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchResult {
    /// Ascending start positions of the last subpattern that complete a chain.
    pub endpoints: Vec<u64>,
    /// Tuples in lexicographic order, when requested.
    pub tuples: Option<Vec<Vec<u64>>>,
    /// More tuples existed than the cap allowed.
    pub truncated: bool,
    pub stats: SearchStats,
}

/// Buffers reused across adjacencies and, through [`SCRATCH`], across
/// searches on the same thread. Fresh multi-megabyte allocations would
/// otherwise pay a page fault per 4 KiB on first touch in every query.
#[derive(Default)]
struct Scratch {
    filter: Option<BlockFilter>,
    sort_buf: Vec<u64>,
    partner: Vec<u64>,
}

/// Buffers larger than this are released after a search instead of kept.
const SCRATCH_RETAIN_BYTES: usize = 64 << 20;

thread_local! {
    static SCRATCH: RefCell<Scratch> = RefCell::new(Scratch::default());
}

impl Scratch {
    fn sort(&mut self, kind: StrategyKind, v: &mut Vec<u64>) {
        match kind {
            StrategyKind::BaselineSort => v.sort_unstable(),
            _ => radix_sort_in_place(v, &mut self.sort_buf),
        }
    }

    fn filter(&mut self, n: u64, b: u64) -> Result<&mut BlockFilter, FilterError> {
        match &mut self.filter {
            Some(f) if f.text_len() == n && f.block_size() == b => f.clear(),
            Some(f) => f.reset(n, b)?,
            slot => *slot = Some(BlockFilter::new(n, b)?),
        }
        Ok(self.filter.as_mut().unwrap())
    }

    fn trim(&mut self) {
        if self.filter.as_ref().is_some_and(|f| f.allocated_bytes() > SCRATCH_RETAIN_BYTES) {
            self.filter = None;
        }
        for v in [&mut self.sort_buf, &mut self.partner] {
            if v.capacity() * 8 > SCRATCH_RETAIN_BYTES {
                *v = Vec::new();
            }
        }
    }
}

/// Answers `pattern` over `index`.
pub fn search(index: &Index, pattern: &VlgPattern, opts: &SearchOptions) -> Result<MatchResult, SearchError> {
    let mut scratch = SCRATCH.with(|s| s.take());
    let result = search_with(index, pattern, opts, &mut scratch);
    scratch.trim();
    SCRATCH.with(|s| s.replace(scratch));
    result
}

fn search_with(
    index: &Index,
    pattern: &VlgPattern,
    opts: &SearchOptions,
    scratch: &mut Scratch,
) -> Result<MatchResult, SearchError> {
    let n = index.len() as u64;
    for (i, g) in pattern.gaps().iter().enumerate() {
        if g.max >= n {
            return Err(SearchError::GapTooLarge { index: i, max: g.max, n });
        }
    }
    let text = index.text().as_bytes();
    let sa = index.suffix_array();
    let subs = pattern.subpatterns();
    let k = subs.len();

    let intervals = subs
        .iter()
        .map(|s| index.find_interval(s))
        .collect::<Result<Vec<SaInterval>, _>>()?;
    let mut stats = SearchStats {
        occurrences: intervals.iter().map(|iv| iv.width() as u64).collect(),
        ..Default::default()
    };
    if intervals.iter().any(SaInterval::is_empty) {
        stats.short_circuited = true;
        return Ok(MatchResult {
            tuples: opts.tuples.map(|_| Vec::new()),
            stats,
            ..Default::default()
        });
    }

    let sort_kind = match opts.strategy {
        StrategyKind::BaselineSort => StrategyKind::BaselineSort,
        _ => StrategyKind::RadixSort,
    };

    let mut anchors = Vec::with_capacity(intervals[0].width());
    extract_into(sa, intervals[0], &mut anchors);
    let mut sorted = false;
    let mut levels: Vec<Vec<u64>> = Vec::new();

    for j in 0..k - 1 {
        let gap = pattern.gaps()[j];
        let next_iv = intervals[j + 1];
        let occ_b = next_iv.width() as u64;
        let kind = match opts.strategy {
            StrategyKind::Auto => plan_pair(anchors.len() as u64, occ_b, subs[j + 1].len(), gap, opts.sort_cost),
            s => s,
        };
        let mut adj = AdjacencyStats {
            strategy: Some(kind),
            anchors: anchors.len() as u64,
            raw: occ_b,
            ..Default::default()
        };

        let next = match kind {
            StrategyKind::BaselineSort | StrategyKind::RadixSort => {
                if !sorted {
                    scratch.sort(kind, &mut anchors);
                }
                let mut partner = std::mem::take(&mut scratch.partner);
                extract_into(sa, next_iv, &mut partner);
                scratch.sort(kind, &mut partner);
                adj.filtered = partner.len() as u64;
                let out = intersect_gapped(&anchors, &partner, gap.min, gap.max);
                scratch.partner = partner;
                out
            }
            StrategyKind::FilterSort => {
                let b = opts
                    .block_size
                    .unwrap_or_else(|| default_block_size(n, gap.width(), opts.filter_budget));
                adj.block_size = Some(b);
                let mut partner = std::mem::take(&mut scratch.partner);
                extract_into(sa, next_iv, &mut partner);
                let filter = scratch.filter(n, b)?;
                adj.second_round = if anchors.len() <= partner.len() {
                    filter::filter_pair_with(filter, &mut anchors, &mut partner, Direction::Forward, gap.min, gap.max)
                } else {
                    adj.backward = true;
                    filter::filter_pair_with(filter, &mut partner, &mut anchors, Direction::Backward, gap.min, gap.max)
                };
                if !sorted {
                    scratch.sort(StrategyKind::RadixSort, &mut anchors);
                }
                scratch.sort(StrategyKind::RadixSort, &mut partner);
                adj.filtered = partner.len() as u64;
                let out = intersect_gapped(&anchors, &partner, gap.min, gap.max);
                scratch.partner = partner;
                out
            }
            StrategyKind::TextCheck => {
                let next_sub = &subs[j + 1];
                if anchors.len() as u64 <= occ_b {
                    if !sorted {
                        scratch.sort(StrategyKind::RadixSort, &mut anchors);
                    }
                    let out = text_check::forward_sorted(&anchors, text, &Kmp::new(next_sub), gap.min, gap.max);
                    adj.filtered = out.len() as u64;
                    out
                } else {
                    adj.backward = true;
                    let mut partner = std::mem::take(&mut scratch.partner);
                    extract_into(sa, next_iv, &mut partner);
                    let kmp = Kmp::new(&subs[j]);
                    let mut out = if j == 0 {
                        // every occurrence of the first subpattern is an anchor
                        text_check::backward_filter(&partner, text, &kmp, gap.min, gap.max, |_| true)
                    } else {
                        debug_assert!(sorted);
                        let set = &anchors;
                        text_check::backward_filter(&partner, text, &kmp, gap.min, gap.max, |i| {
                            set.binary_search(&i).is_ok()
                        })
                    };
                    scratch.sort(StrategyKind::RadixSort, &mut out);
                    adj.filtered = out.len() as u64;
                    scratch.partner = partner;
                    out
                }
            }
            StrategyKind::Auto => unreachable!("auto resolves per adjacency"),
        };
        debug_assert!(next.windows(2).all(|w| w[0] < w[1]));
        adj.survivors = next.len() as u64;
        stats.adjacencies.push(adj);

        if opts.tuples.is_some() {
            if !sorted {
                scratch.sort(sort_kind, &mut anchors);
            }
            levels.push(std::mem::replace(&mut anchors, next));
        } else {
            anchors = next;
        }
        sorted = true;
        if anchors.is_empty() {
            break;
        }
    }
    if !sorted {
        scratch.sort(sort_kind, &mut anchors);
    }

    let mut result = MatchResult {
        endpoints: anchors,
        stats,
        ..Default::default()
    };
    if let Some(cap) = opts.tuples {
        if result.endpoints.is_empty() {
            result.tuples = Some(Vec::new());
        } else {
            levels.push(result.endpoints.clone());
            let (tuples, truncated) = enumerate_tuples(levels, pattern.gaps(), cap);
            result.tuples = Some(tuples);
            result.truncated = truncated;
        }
    }
    Ok(result)
}

/// Prunes each level to positions with a live successor, then walks the
/// levels depth-first in lexicographic order.
fn enumerate_tuples(mut levels: Vec<Vec<u64>>, gaps: &[GapConstraint], cap: Option<usize>) -> (Vec<Vec<u64>>, bool) {
    for j in (0..levels.len() - 1).rev() {
        let g = gaps[j];
        levels[j] = intersect_gapped_predecessors(&levels[j], &levels[j + 1], g.min, g.max);
    }
    let cap = cap.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(levels.len());
    let complete = levels[0]
        .iter()
        .all(|&p| walk(&levels, gaps, 0, p, &mut path, &mut out, cap));
    (out, !complete)
}

fn walk(
    levels: &[Vec<u64>],
    gaps: &[GapConstraint],
    level: usize,
    pos: u64,
    path: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
    cap: usize,
) -> bool {
    path.push(pos);
    let ok = if level + 1 == levels.len() {
        if out.len() == cap {
            false
        } else {
            out.push(path.clone());
            true
        }
    } else {
        let g = gaps[level];
        let next = &levels[level + 1];
        let lo = next.partition_point(|&x| x < pos.saturating_add(g.min));
        let hi = next.partition_point(|&x| x <= pos.saturating_add(g.max));
        next[lo..hi]
            .iter()
            .all(|&x| walk(levels, gaps, level + 1, x, path, out, cap))
    };
    path.pop();
    ok
}
