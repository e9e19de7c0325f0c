/// Sorts positions ascending with a stable byte-wise LSD radix sort.
pub fn radix_sort(a: &[u64]) -> Vec<u64> {
    let mut out = a.to_vec();
    let mut scratch = Vec::new();
    radix_sort_in_place(&mut out, &mut scratch);
    out
}

/// In-place variant reusing `scratch` as the ping-pong buffer.
///
/// Only the low `ceil(bits(max) / 8)` bytes are examined, and a pass is
/// skipped whenever every key shares the same digit.
pub fn radix_sort_in_place(buf: &mut Vec<u64>, scratch: &mut Vec<u64>) {
    let n = buf.len();
    if n < 2 {
        return;
    }
    if n > u32::MAX as usize {
        // counts no longer fit the compact histogram
        buf.sort_unstable();
        return;
    }
    let max = buf.iter().copied().fold(0, u64::max);
    let passes = ((u64::BITS - max.leading_zeros()) as usize).div_ceil(8);

    let mut hist = [[0u32; 256]; 8];
    for &x in buf.iter() {
        for (p, h) in hist.iter_mut().enumerate().take(passes) {
            h[((x >> (8 * p)) & 0xff) as usize] += 1;
        }
    }

    if scratch.len() < n {
        scratch.resize(n, 0);
    }
    scratch.truncate(n);
    for (p, h) in hist.iter().enumerate().take(passes) {
        if h.iter().any(|&c| c as usize == n) {
            continue;
        }
        let mut offsets = [0u32; 256];
        let mut sum = 0u32;
        for (o, &c) in offsets.iter_mut().zip(h.iter()) {
            *o = sum;
            sum += c;
        }
        let shift = 8 * p;
        let dst = &mut scratch[..n];
        for &x in buf.iter() {
            let o = &mut offsets[((x >> shift) & 0xff) as usize];
            dst[*o as usize] = x;
            *o += 1;
        }
        std::mem::swap(buf, scratch);
    }
}
