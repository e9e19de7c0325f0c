//! Direct text checking: scan the gap window of each anchor with KMP
//! instead of materializing and sorting the partner's occurrences.

use std::ops::ControlFlow;

use super::kmp::Kmp;
use super::radix::radix_sort_in_place;
use crate::prefetch::{prefetch, AHEAD};


/// Occurrences of `next` starting `min..=max` after some anchor,
/// ascending and duplicate-free.
///
/// Each anchor `i` searches `text[i+min .. min(n, i+max+m)]`. Anchors may
/// be in any order.
pub fn text_check_forward(anchors: &[u64], text: &[u8], next: &[u8], min: u64, max: u64) -> Vec<u64> {
    if anchors.is_empty() || next.is_empty() {
        return Vec::new();
    }
    let kmp = Kmp::new(next);
    if anchors.windows(2).all(|w| w[0] < w[1]) {
        forward_sorted(anchors, text, &kmp, min, max)
    } else {
        let mut sorted = anchors.to_vec();
        radix_sort_in_place(&mut sorted, &mut Vec::new());
        sorted.dedup();
        forward_sorted(&sorted, text, &kmp, min, max)
    }
}

/// Forward check over ascending anchors.
///
/// Start positions already examined for an earlier anchor are not scanned
/// again, so overlapping windows cost no more than their union and the
/// output comes out sorted without duplicates.
pub(crate) fn forward_sorted(anchors: &[u64], text: &[u8], kmp: &Kmp<'_>, min: u64, max: u64) -> Vec<u64> {
    let n = text.len() as u64;
    let m = kmp.needle().len() as u64;
    let mut out = Vec::new();
    if m > n {
        return out;
    }
    let last_start = n - m;
    let mut next_unchecked = 0u64;
    for (idx, &i) in anchors.iter().enumerate() {
        if let Some(&ahead) = anchors.get(idx + AHEAD) {
            prefetch(text, ahead.saturating_add(min) as usize);
        }
        let lo = i.saturating_add(min).max(next_unchecked);
        let hi = i.saturating_add(max).min(last_start);
        if lo > hi {
            continue;
        }
        let window = &text[lo as usize..(hi + m) as usize];
        kmp.for_each_match::<()>(window, |off| {
            out.push(lo + off as u64);
            ControlFlow::Continue(())
        });
        next_unchecked = hi + 1;
    }
    out
}

/// Anchors `j` (occurrences of a later subpattern) preceded by an
/// occurrence of `prev` starting `min..=max` earlier, ascending.
///
/// Each anchor searches `text[max(0, j-max) .. min(n, j-min+m_prev)]`.
pub fn text_check_backward(anchors: &[u64], text: &[u8], prev: &[u8], min: u64, max: u64) -> Vec<u64> {
    if anchors.is_empty() || prev.is_empty() {
        return Vec::new();
    }
    let mut out = backward_filter(anchors, text, &Kmp::new(prev), min, max, |_| true);
    radix_sort_in_place(&mut out, &mut Vec::new());
    out.dedup();
    out
}

/// Keeps, in input order, each anchor with a hit `i` of `kmp` in its
/// backward window for which `accept(i)` holds.
pub(crate) fn backward_filter(
    anchors: &[u64],
    text: &[u8],
    kmp: &Kmp<'_>,
    min: u64,
    max: u64,
    accept: impl Fn(u64) -> bool,
) -> Vec<u64> {
    let n = text.len() as u64;
    let m = kmp.needle().len() as u64;
    if m > n {
        return Vec::new();
    }
    let last_start = n - m;
    let mut out = Vec::new();
    for (idx, &j) in anchors.iter().enumerate() {
        if let Some(&ahead) = anchors.get(idx + AHEAD) {
            prefetch(text, ahead.saturating_sub(max) as usize);
        }
        if j < min {
            continue;
        }
        let lo = j.saturating_sub(max);
        let hi = (j - min).min(last_start);
        if lo > hi {
            continue;
        }
        let window = &text[lo as usize..(hi + m) as usize];
        let hit = kmp.for_each_match(window, |off| {
            if accept(lo + off as u64) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if hit.is_some() {
            out.push(j);
        }
    }
    out
}
