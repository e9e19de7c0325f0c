use std::ops::ControlFlow;

/// Knuth-Morris-Pratt matcher with a precomputed failure function.
#[derive(Clone, Debug)]
pub struct Kmp<'a> {
    needle: &'a [u8],
    // fail[i]: length of the longest proper border of needle[..=i]
    fail: Vec<usize>,
}

impl<'a> Kmp<'a> {
    /// Panics if `needle` is empty.
    pub fn new(needle: &'a [u8]) -> Self {
        assert!(!needle.is_empty(), "KMP needle must be non-empty");
        let mut fail = vec![0usize; needle.len()];
        let mut q = 0;
        for i in 1..needle.len() {
            while q > 0 && needle[i] != needle[q] {
                q = fail[q - 1];
            }
            if needle[i] == needle[q] {
                q += 1;
            }
            fail[i] = q;
        }
        Kmp { needle, fail }
    }

    pub fn needle(&self) -> &[u8] {
        self.needle
    }

    /// Calls `f` with each match offset in `hay`, ascending and
    /// overlapping, until `f` breaks.
    pub fn for_each_match<B>(&self, hay: &[u8], mut f: impl FnMut(usize) -> ControlFlow<B>) -> Option<B> {
        let m = self.needle.len();
        let mut q = 0;
        for (i, &c) in hay.iter().enumerate() {
            while q > 0 && self.needle[q] != c {
                q = self.fail[q - 1];
            }
            if self.needle[q] == c {
                q += 1;
            }
            if q == m {
                if let ControlFlow::Break(b) = f(i + 1 - m) {
                    return Some(b);
                }
                q = self.fail[q - 1];
            }
        }
        None
    }

    pub fn find_all(&self, hay: &[u8]) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_match::<()>(hay, |p| {
            out.push(p);
            ControlFlow::Continue(())
        });
        out
    }

    pub fn contains(&self, hay: &[u8]) -> bool {
        self.for_each_match(hay, |_| ControlFlow::Break(())).is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("empty needle")]
pub struct EmptyNeedle;

/// All (overlapping) start offsets of `needle` in `hay`, ascending.
pub fn kmp_search(hay: &[u8], needle: &[u8]) -> Result<Vec<usize>, EmptyNeedle> {
    if needle.is_empty() {
        return Err(EmptyNeedle);
    }
    Ok(Kmp::new(needle).find_all(hay))
}
