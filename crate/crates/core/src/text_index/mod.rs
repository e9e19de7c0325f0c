//! Suffix array over a byte text: construction, interval lookup, and
//! the on-disk index format.

mod format;
mod sais;

use std::cmp::Ordering;
use std::fmt;
use std::io;
use std::ops::Range;
use std::path::Path;

pub use format::{load_index, save_index, PositionWidth, INDEX_MAGIC};

/// Texts must be strictly shorter than this (5-byte position entries).
pub const MAX_TEXT_LEN: u64 = 1 << 40;

#[derive(Debug, thiserror::Error)]
pub enum IndexError {
    #[error("text of {0} bytes exceeds the 2^40-byte index capacity")]
    Capacity(u64),
    #[error("empty subpattern")]
    EmptySubpattern,
    #[error("not an index file (bad magic {0:?})")]
    BadMagic([u8; 8]),
    #[error("unsupported position width {0} (expected 5 or 8)")]
    BadWidth(u8),
    #[error("index file is truncated")]
    Truncated,
    #[error("index checksum mismatch (stored {stored:#018x}, computed {computed:#018x})")]
    Checksum { stored: u64, computed: u64 },
    #[error("malformed index file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Immutable byte text being indexed.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Text {
    bytes: Vec<u8>,
}

impl Text {
    pub fn new(bytes: Vec<u8>) -> Self {
        Text { bytes }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}

impl From<Vec<u8>> for Text {
    fn from(bytes: Vec<u8>) -> Self {
        Text::new(bytes)
    }
}

impl From<&[u8]> for Text {
    fn from(bytes: &[u8]) -> Self {
        Text::new(bytes.to_vec())
    }
}

impl From<&str> for Text {
    fn from(s: &str) -> Self {
        Text::new(s.as_bytes().to_vec())
    }
}

impl From<String> for Text {
    fn from(s: String) -> Self {
        Text::new(s.into_bytes())
    }
}

impl fmt::Debug for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bytes.len() <= 64 {
            write!(f, "Text({:?})", String::from_utf8_lossy(&self.bytes))
        } else {
            write!(f, "Text({} bytes)", self.bytes.len())
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
enum Store {
    Narrow(Vec<u32>),
    Wide(Vec<u64>),
}

/// Lexicographic permutation of suffix start positions.
///
/// Entries are held as `u32` whenever the text fits, `u64` otherwise.
#[derive(Clone, PartialEq, Eq)]
pub struct SuffixArray {
    store: Store,
}

impl SuffixArray {
    /// Wraps raw entries without checking the suffix-order invariant.
    pub fn from_positions(positions: Vec<u64>) -> Self {
        if positions.len() as u64 <= u32::MAX as u64 {
            SuffixArray {
                store: Store::Narrow(positions.into_iter().map(|p| p as u32).collect()),
            }
        } else {
            SuffixArray {
                store: Store::Wide(positions),
            }
        }
    }

    pub fn len(&self) -> usize {
        match &self.store {
            Store::Narrow(v) => v.len(),
            Store::Wide(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Text position of the suffix at `rank`.
    #[inline]
    pub fn get(&self, rank: usize) -> u64 {
        match &self.store {
            Store::Narrow(v) => v[rank] as u64,
            Store::Wide(v) => v[rank],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len()).map(move |r| self.get(r))
    }

    pub fn to_vec(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.len());
        self.extend_range(0..self.len(), &mut out);
        out
    }

    fn extend_range(&self, ranks: Range<usize>, out: &mut Vec<u64>) {
        match &self.store {
            Store::Narrow(v) => out.extend(v[ranks].iter().map(|&p| p as u64)),
            Store::Wide(v) => out.extend_from_slice(&v[ranks]),
        }
    }
}

impl fmt::Debug for SuffixArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 32 {
            f.debug_list().entries(self.iter()).finish()
        } else {
            write!(f, "SuffixArray({} entries)", self.len())
        }
    }
}

/// Contiguous range of suffix-array ranks sharing a prefix.
///
/// Stored half-open; the empty interval has no start or end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SaInterval {
    lo: usize,
    hi: usize,
}

impl SaInterval {
    pub const EMPTY: SaInterval = SaInterval { lo: 0, hi: 0 };

    /// Interval `start..=end` of ranks.
    pub fn inclusive(start: usize, end: usize) -> Self {
        assert!(start <= end, "interval start {start} > end {end}");
        SaInterval { lo: start, hi: end + 1 }
    }

    fn half_open(lo: usize, hi: usize) -> Self {
        if lo >= hi {
            Self::EMPTY
        } else {
            SaInterval { lo, hi }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    /// Number of occurrences covered.
    pub fn width(&self) -> usize {
        self.hi - self.lo
    }

    pub fn start(&self) -> Option<usize> {
        (!self.is_empty()).then_some(self.lo)
    }

    /// Inclusive end rank.
    pub fn end(&self) -> Option<usize> {
        (!self.is_empty()).then(|| self.hi - 1)
    }

    pub fn ranks(&self) -> Range<usize> {
        self.lo..self.hi
    }
}

fn check_capacity(n: u64) -> Result<(), IndexError> {
    if n >= MAX_TEXT_LEN {
        Err(IndexError::Capacity(n))
    } else {
        Ok(())
    }
}

/// Builds the suffix array of `text`. Deterministic; the empty text
/// yields an empty array.
pub fn build_index(text: &Text) -> Result<SuffixArray, IndexError> {
    check_capacity(text.len() as u64)?;
    let sa = sais::sa_is(text.as_bytes(), 255);
    let store = if text.len() as u64 <= u32::MAX as u64 {
        Store::Narrow(sa.into_iter().map(|p| p as u32).collect())
    } else {
        Store::Wide(sa.into_iter().map(|p| p as u64).collect())
    };
    Ok(SuffixArray { store })
}

/// Compares the first `sub.len()` bytes of the suffix at `pos` with `sub`.
#[inline]
fn cmp_prefix(text: &[u8], pos: usize, sub: &[u8]) -> Ordering {
    let end = text.len().min(pos + sub.len());
    text[pos..end].cmp(sub)
}

fn partition_point(len: usize, mut pred: impl FnMut(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0usize, len);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Locates the maximal interval of ranks whose suffixes start with `sub`
/// using a lower-bound and an upper-bound binary search.
pub fn find_interval(sa: &SuffixArray, text: &Text, sub: &[u8]) -> Result<SaInterval, IndexError> {
    if sub.is_empty() {
        return Err(IndexError::EmptySubpattern);
    }
    let t = text.as_bytes();
    let n = sa.len();
    let lo = partition_point(n, |r| cmp_prefix(t, sa.get(r) as usize, sub) == Ordering::Less);
    let hi = lo + partition_point(n - lo, |r| {
        cmp_prefix(t, sa.get(lo + r) as usize, sub) != Ordering::Greater
    });
    Ok(SaInterval::half_open(lo, hi))
}

/// Copies the positions of `iv` out of the suffix array, in rank order.
pub fn extract_positions(sa: &SuffixArray, iv: SaInterval) -> Vec<u64> {
    let mut out = Vec::with_capacity(iv.width());
    extract_into(sa, iv, &mut out);
    out
}

pub(crate) fn extract_into(sa: &SuffixArray, iv: SaInterval, out: &mut Vec<u64>) {
    out.clear();
    if !iv.is_empty() {
        sa.extend_range(iv.ranks(), out);
    }
}

/// A text together with its suffix array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Index {
    text: Text,
    sa: SuffixArray,
}

impl Index {
    pub fn build(text: impl Into<Text>) -> Result<Self, IndexError> {
        let text = text.into();
        let sa = build_index(&text)?;
        Ok(Index { text, sa })
    }

    /// Pairs a text with an already-built suffix array.
    pub fn from_parts(text: Text, sa: SuffixArray) -> Result<Self, IndexError> {
        if text.len() != sa.len() {
            return Err(IndexError::Malformed(format!(
                "text has {} bytes but suffix array has {} entries",
                text.len(),
                sa.len()
            )));
        }
        Ok(Index { text, sa })
    }

    pub fn text(&self) -> &Text {
        &self.text
    }

    pub fn suffix_array(&self) -> &SuffixArray {
        &self.sa
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn find_interval(&self, sub: &[u8]) -> Result<SaInterval, IndexError> {
        find_interval(&self.sa, &self.text, sub)
    }

    pub fn extract_positions(&self, iv: SaInterval) -> Vec<u64> {
        extract_positions(&self.sa, iv)
    }

    /// Occurrence positions of `sub` in rank order.
    pub fn occurrences(&self, sub: &[u8]) -> Result<Vec<u64>, IndexError> {
        Ok(self.extract_positions(self.find_interval(sub)?))
    }

    pub fn save(&self, path: impl AsRef<Path>, width: PositionWidth) -> Result<(), IndexError> {
        let file = std::fs::File::create(path)?;
        let mut w = io::BufWriter::with_capacity(1 << 20, file);
        save_index(&self.text, &self.sa, &mut w, width)?;
        io::Write::flush(&mut w)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, IndexError> {
        let file = std::fs::File::open(path)?;
        let (text, sa) = load_index(io::BufReader::with_capacity(1 << 20, file))?;
        Ok(Index { text, sa })
    }

    pub fn into_parts(self) -> (Text, SuffixArray) {
        (self.text, self.sa)
    }
}
