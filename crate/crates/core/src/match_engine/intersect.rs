/// Positions `j` of `b_sorted` with some `i` in `a_sorted` such that
/// `i + min <= j <= i + max`, ascending and duplicate-free.
///
/// A single forward pass: `b` elements below the current window can never
/// match a later (larger) `a`, and an element already reported is consumed
/// rather than re-reported for the next window.
pub fn intersect_gapped(a_sorted: &[u64], b_sorted: &[u64], min: u64, max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    intersect_gapped_into(a_sorted, b_sorted, min, max, &mut out);
    out
}

pub(crate) fn intersect_gapped_into(a: &[u64], b: &[u64], min: u64, max: u64, out: &mut Vec<u64>) {
    out.clear();
    let mut j = 0;
    for &i in a {
        if j >= b.len() {
            break;
        }
        let lo = i.saturating_add(min);
        let hi = i.saturating_add(max);
        while j < b.len() && b[j] < lo {
            j += 1;
        }
        while j < b.len() && b[j] <= hi {
            out.push(b[j]);
            j += 1;
        }
    }
}

/// Positions `i` of `a_sorted` with some successor `j` in `b_sorted` such
/// that `i + min <= j <= i + max`, ascending.
pub fn intersect_gapped_predecessors(a_sorted: &[u64], b_sorted: &[u64], min: u64, max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut j = 0;
    for &i in a_sorted {
        let lo = i.saturating_add(min);
        while j < b_sorted.len() && b_sorted[j] < lo {
            j += 1;
        }
        if j == b_sorted.len() {
            break;
        }
        if b_sorted[j] <= i.saturating_add(max) {
            out.push(i);
        }
    }
    out
}
