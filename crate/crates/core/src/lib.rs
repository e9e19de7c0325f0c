//! Suffix-array index for variable-length-gapped (VLG) pattern queries.
//!
//! A VLG pattern is a sequence of subpatterns separated by gap
//! constraints, e.g. `MT[115,136]MTNTAYGG[121,151]GTNGAYGAY`. Queries
//! locate each subpattern's suffix-array interval and chain adjacent
//! occurrence sets under the gap bounds, by sorting and scanning, block
//! filtering, or checking the text directly.

pub mod bench;
pub mod block_filter;
pub mod cli;
pub mod match_engine;
pub mod pattern;
mod prefetch;
pub mod text_index;

pub use block_filter::BlockFilter;
pub use match_engine::{oracle_search, search, MatchResult, SearchOptions, StrategyKind};
pub use pattern::{parse_pattern, GapConstraint, GapMode, VlgPattern};
pub use text_index::{Index, SaInterval, SuffixArray, Text};
