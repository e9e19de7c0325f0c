//! Brute-force reference matcher for verification.
//!
//! Occurrences come from a naive scan of every text position, and chains
//! are resolved by dynamic programming over per-level boolean arrays. It
//! shares no code with the indexed search path.

use super::{MatchResult, SearchStats};
use crate::pattern::VlgPattern;

fn naive_occurrences(text: &[u8], sub: &[u8]) -> Vec<bool> {
    (0..text.len()).map(|i| text[i..].starts_with(sub)).collect()
}

fn prefix_counts(flags: &[bool]) -> Vec<usize> {
    let mut acc = Vec::with_capacity(flags.len() + 1);
    acc.push(0);
    for &f in flags {
        acc.push(acc.last().unwrap() + f as usize);
    }
    acc
}

/// Whether any flag is set in positions `lo..=hi` (clipped to the array).
fn any_in(prefix: &[usize], lo: i128, hi: i128) -> bool {
    let n = prefix.len() as i128 - 1;
    let lo = lo.max(0);
    let hi = hi.min(n - 1);
    lo <= hi && prefix[(hi + 1) as usize] > prefix[lo as usize]
}

/// Per-level flags of positions lying on at least one complete chain.
fn live_levels(text: &[u8], pattern: &VlgPattern) -> Vec<Vec<bool>> {
    let subs = pattern.subpatterns();
    let gaps = pattern.gaps();
    let k = subs.len();
    let occ: Vec<Vec<bool>> = subs.iter().map(|s| naive_occurrences(text, s)).collect();

    let mut fwd = vec![occ[0].clone()];
    for j in 0..k - 1 {
        let prefix = prefix_counts(&fwd[j]);
        let g = gaps[j];
        let next = (0..text.len())
            .map(|x| occ[j + 1][x] && any_in(&prefix, x as i128 - g.max as i128, x as i128 - g.min as i128))
            .collect();
        fwd.push(next);
    }

    let mut live = fwd.clone();
    for j in (0..k - 1).rev() {
        let prefix = prefix_counts(&live[j + 1]);
        let g = gaps[j];
        for y in 0..text.len() {
            if live[j][y] {
                live[j][y] = any_in(&prefix, y as i128 + g.min as i128, y as i128 + g.max as i128);
            }
        }
    }
    live
}

/// Number of valid k-tuples, saturating at `u128::MAX`.
pub fn oracle_tuple_count(text: &[u8], pattern: &VlgPattern) -> u128 {
    let live = live_levels(text, pattern);
    let gaps = pattern.gaps();
    let n = text.len();
    let k = live.len();
    let mut ways: Vec<u128> = live[k - 1].iter().map(|&b| b as u128).collect();
    for j in (0..k - 1).rev() {
        let mut prefix = vec![0u128; n + 1];
        for x in 0..n {
            prefix[x + 1] = prefix[x].saturating_add(ways[x]);
        }
        let g = gaps[j];
        ways = (0..n)
            .map(|y| {
                if !live[j][y] {
                    return 0;
                }
                let lo = (y as u128 + g.min as u128).min(n as u128) as usize;
                let hi = (y as u128 + g.max as u128 + 1).min(n as u128) as usize;
                prefix[hi].saturating_sub(prefix[lo.min(hi)])
            })
            .collect();
    }
    ways.iter().fold(0u128, |acc, &w| acc.saturating_add(w))
}

/// Reference answer: all endpoints, plus every tuple in lexicographic
/// order up to `tuple_cap` when tuples are requested.
pub fn oracle_search_with(text: &[u8], pattern: &VlgPattern, tuples: Option<Option<usize>>) -> MatchResult {
    let live = live_levels(text, pattern);
    let endpoints = live[live.len() - 1]
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b)
        .map(|(x, _)| x as u64)
        .collect();

    let mut result = MatchResult {
        endpoints,
        tuples: None,
        truncated: false,
        stats: SearchStats::default(),
    };
    if let Some(cap) = tuples {
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(live.len());
        let cap = cap.unwrap_or(usize::MAX);
        for y in 0..text.len() {
            if live[0][y] && !enumerate(&live, pattern, 0, y, &mut path, &mut out, cap) {
                result.truncated = true;
                break;
            }
        }
        result.tuples = Some(out);
    }
    result
}

/// Depth-first enumeration; returns false once the cap is exceeded.
fn enumerate(
    live: &[Vec<bool>],
    pattern: &VlgPattern,
    level: usize,
    pos: usize,
    path: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
    cap: usize,
) -> bool {
    path.push(pos as u64);
    let ok = if level + 1 == live.len() {
        if out.len() == cap {
            false
        } else {
            out.push(path.clone());
            true
        }
    } else {
        let g = pattern.gaps()[level];
        let n = live[level + 1].len();
        let lo = pos.saturating_add(g.min as usize).min(n);
        let hi = pos.saturating_add(g.max as usize).min(n.saturating_sub(1));
        let mut ok = true;
        for x in lo..=hi {
            if x < n && live[level + 1][x] && !enumerate(live, pattern, level + 1, x, path, out, cap) {
                ok = false;
                break;
            }
        }
        ok
    };
    path.pop();
    ok
}

/// Reference endpoints and all tuples, uncapped.
pub fn oracle_search(text: &[u8], pattern: &VlgPattern) -> MatchResult {
    oracle_search_with(text, pattern, Some(None))
}
