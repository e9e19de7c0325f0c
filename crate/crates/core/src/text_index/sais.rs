//! Induced-sorting suffix array construction (SA-IS).
//!
//! No sentinel is appended. A suffix that is a proper prefix of another
//! sorts first, which is exactly the order produced when the induction
//! seeds the last suffix as an L-type suffix at the head of its bucket.

const EMPTY: usize = usize::MAX;

/// Builds the suffix array of `s`, whose symbols are all `<= upper`.
pub(crate) fn sa_is<S>(s: &[S], upper: usize) -> Vec<usize>
where
    S: Copy + Into<usize> + PartialEq,
{
    let n = s.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![0],
        2 => {
            return if s[0].into() < s[1].into() {
                vec![0, 1]
            } else {
                vec![1, 0]
            }
        }
        _ => {}
    }
    let sym = |i: usize| -> usize { s[i].into() };

    // true = S-type
    let mut ls = vec![false; n];
    for i in (0..n - 1).rev() {
        ls[i] = if s[i] == s[i + 1] {
            ls[i + 1]
        } else {
            sym(i) < sym(i + 1)
        };
    }

    let mut sum_l = vec![0usize; upper + 2];
    let mut sum_s = vec![0usize; upper + 2];
    for i in 0..n {
        if !ls[i] {
            sum_s[sym(i)] += 1;
        } else {
            sum_l[sym(i) + 1] += 1;
        }
    }
    for c in 0..=upper {
        sum_s[c] += sum_l[c];
        if c < upper {
            sum_l[c + 1] += sum_s[c];
        }
    }

    let induce = |lms: &[usize], sa: &mut [usize]| {
        sa.fill(EMPTY);
        let mut buf = sum_s.clone();
        for &d in lms {
            if d == n {
                continue;
            }
            let c = sym(d);
            sa[buf[c]] = d;
            buf[c] += 1;
        }
        buf.copy_from_slice(&sum_l);
        let c = sym(n - 1);
        sa[buf[c]] = n - 1;
        buf[c] += 1;
        for i in 0..n {
            let v = sa[i];
            if v != EMPTY && v >= 1 && !ls[v - 1] {
                let c = sym(v - 1);
                sa[buf[c]] = v - 1;
                buf[c] += 1;
            }
        }
        buf.copy_from_slice(&sum_l);
        for i in (0..n).rev() {
            let v = sa[i];
            if v != EMPTY && v >= 1 && ls[v - 1] {
                let c = sym(v - 1) + 1;
                buf[c] -= 1;
                sa[buf[c]] = v - 1;
            }
        }
    };

    let mut lms_map = vec![EMPTY; n + 1];
    let mut lms = Vec::new();
    for i in 1..n {
        if !ls[i - 1] && ls[i] {
            lms_map[i] = lms.len();
            lms.push(i);
        }
    }
    let m = lms.len();

    let mut sa = vec![EMPTY; n];
    induce(&lms, &mut sa);

    if m != 0 {
        let mut sorted_lms: Vec<usize> = sa.iter().copied().filter(|&v| lms_map[v] != EMPTY).collect();
        let mut rec_s = vec![0usize; m];
        let mut rec_upper = 0usize;
        rec_s[lms_map[sorted_lms[0]]] = 0;
        for i in 1..m {
            let mut l = sorted_lms[i - 1];
            let mut r = sorted_lms[i];
            let end_l = if lms_map[l] + 1 < m { lms[lms_map[l] + 1] } else { n };
            let end_r = if lms_map[r] + 1 < m { lms[lms_map[r] + 1] } else { n };
            let same = if end_l - l != end_r - r {
                false
            } else {
                while l < end_l && s[l] == s[r] {
                    l += 1;
                    r += 1;
                }
                l != n && s[l] == s[r]
            };
            if !same {
                rec_upper += 1;
            }
            rec_s[lms_map[sorted_lms[i]]] = rec_upper;
        }
        drop(lms_map);

        let rec_sa = sa_is(&rec_s, rec_upper);
        drop(rec_s);
        for (slot, &r) in sorted_lms.iter_mut().zip(rec_sa.iter()) {
            *slot = lms[r];
        }
        induce(&sorted_lms, &mut sa);
    }
    sa
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(s: &[u8]) -> Vec<usize> {
        let mut sa: Vec<usize> = (0..s.len()).collect();
        sa.sort_by(|&a, &b| s[a..].cmp(&s[b..]));
        sa
    }

    #[test]
    fn small_strings_match_naive_sort() {
        for text in [
            &b""[..],
            b"a",
            b"ab",
            b"ba",
            b"aa",
            b"banana",
            b"aaaa",
            b"abracadabra",
            b"mississippi",
            b"abababababab",
            b"\xff\x00\xff\x00\x00",
        ] {
            assert_eq!(sa_is(text, 255), naive(text), "text {:?}", text);
        }
    }

    #[test]
    fn exhaustive_binary_strings() {
        for len in 0..=12usize {
            for bits in 0u32..(1 << len) {
                let text: Vec<u8> = (0..len).map(|i| ((bits >> i) & 1) as u8).collect();
                assert_eq!(sa_is(&text, 255), naive(&text));
            }
        }
    }
}
