//! Block-granular bitvector over text positions.
//!
//! Bit `i` stands for positions `i*b .. (i+1)*b - 1` (clipped to the text).
//! Marking the gap window of every occurrence on one side lets the other
//! side drop candidates whose block was never marked. Pruning is sound
//! (never drops a gap-consistent candidate) and exact in the forward
//! direction when `b == 1`.

use crate::prefetch::{prefetch, AHEAD};

/// Default cache budget for the filter bitvector, in bytes.
pub const DEFAULT_FILTER_BUDGET: usize = 16 << 20;

/// Most bits a single occurrence should set under the default block size.
pub const MAX_BITS_PER_OCCURRENCE: u64 = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FilterError {
    #[error("block size {0} is not a power of two")]
    BlockSize(u64),
}

#[derive(Clone, Debug)]
pub struct BlockFilter {
    words: Vec<u64>,
    shift: u32,
    n: u64,
    blocks: u64,
}

impl BlockFilter {
    /// Filter covering `n` text positions with blocks of `block_size`.
    pub fn new(n: u64, block_size: u64) -> Result<Self, FilterError> {
        if block_size == 0 || !block_size.is_power_of_two() {
            return Err(FilterError::BlockSize(block_size));
        }
        let shift = block_size.trailing_zeros();
        let blocks = n.div_ceil(block_size);
        Ok(BlockFilter {
            words: vec![0; blocks.div_ceil(64) as usize],
            shift,
            n,
            blocks,
        })
    }

    pub fn block_size(&self) -> u64 {
        1 << self.shift
    }

    /// Number of bits (blocks).
    pub fn blocks(&self) -> u64 {
        self.blocks
    }

    /// Text length covered.
    pub fn text_len(&self) -> u64 {
        self.n
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    #[inline]
    pub fn is_set(&self, block: u64) -> bool {
        (self.words[(block >> 6) as usize] >> (block & 63)) & 1 == 1
    }

    /// Whether the block containing text position `pos` is marked.
    #[inline]
    pub fn covers(&self, pos: u64) -> bool {
        self.is_set(pos >> self.shift)
    }

    /// Sets every bit in `first..=last`.
    #[inline]
    fn set_blocks(&mut self, first: u64, last: u64) {
        let (fw, lw) = ((first >> 6) as usize, (last >> 6) as usize);
        let head = !0u64 << (first & 63);
        let tail = !0u64 >> (63 - (last & 63));
        if fw == lw {
            self.words[fw] |= head & tail;
        } else {
            self.words[fw] |= head;
            for w in &mut self.words[fw + 1..lw] {
                *w = !0;
            }
            self.words[lw] |= tail;
        }
    }

    /// Marks blocks holding positions `lo..=hi`, clipped to the text.
    #[inline]
    fn mark_positions(&mut self, lo: u64, hi: u64) {
        if lo >= self.n || lo > hi {
            return;
        }
        let hi = hi.min(self.n - 1);
        self.set_blocks(lo >> self.shift, hi >> self.shift);
    }

    /// For each `i`, marks the blocks of positions `i+min ..= i+max`.
    pub fn mark_forward(&mut self, positions: &[u64], min: u64, max: u64) {
        for (idx, &i) in positions.iter().enumerate() {
            if let Some(&ahead) = positions.get(idx + AHEAD) {
                self.prefetch_pos(ahead.saturating_add(min));
            }
            self.mark_positions(i.saturating_add(min), i.saturating_add(max));
        }
    }

    /// For each `j`, marks the blocks of positions `j-max ..= j-min`,
    /// clipped below at zero.
    pub fn mark_backward(&mut self, positions: &[u64], min: u64, max: u64) {
        for (idx, &j) in positions.iter().enumerate() {
            if let Some(&ahead) = positions.get(idx + AHEAD) {
                self.prefetch_pos(ahead.saturating_sub(max));
            }
            if j >= min {
                self.mark_positions(j.saturating_sub(max), j - min);
            }
        }
    }

    /// Keeps, in input order, the candidates whose block is marked.
    pub fn prune(&self, candidates: &[u64]) -> Vec<u64> {
        let mut out = Vec::new();
        self.prune_into(candidates, &mut out);
        out
    }

    pub fn prune_into(&self, candidates: &[u64], out: &mut Vec<u64>) {
        out.clear();
        for (idx, &p) in candidates.iter().enumerate() {
            if let Some(&ahead) = candidates.get(idx + AHEAD) {
                self.prefetch_pos(ahead);
            }
            if p < self.n && self.covers(p) {
                out.push(p);
            }
        }
    }

    /// Like [`prune`](Self::prune) but filters `candidates` in place.
    pub fn retain(&self, candidates: &mut Vec<u64>) {
        let mut kept = 0;
        for idx in 0..candidates.len() {
            if let Some(&ahead) = candidates.get(idx + AHEAD) {
                self.prefetch_pos(ahead);
            }
            let p = candidates[idx];
            if p < self.n && self.covers(p) {
                candidates[kept] = p;
                kept += 1;
            }
        }
        candidates.truncate(kept);
    }

    #[inline(always)]
    fn prefetch_pos(&self, pos: u64) {
        prefetch(&self.words, (pos >> self.shift >> 6) as usize);
    }

    /// Zeroes every bit, keeping the allocation.
    pub fn clear(&mut self) {
        self.words.fill(0);
    }

    /// Re-targets the filter at `n` positions with blocks of `block_size`,
    /// all bits clear, reusing the allocation where possible.
    pub fn reset(&mut self, n: u64, block_size: u64) -> Result<(), FilterError> {
        if block_size == 0 || !block_size.is_power_of_two() {
            return Err(FilterError::BlockSize(block_size));
        }
        self.shift = block_size.trailing_zeros();
        self.n = n;
        self.blocks = n.div_ceil(block_size);
        self.words.clear();
        self.words.resize(self.blocks.div_ceil(64) as usize, 0);
        Ok(())
    }

    /// Bytes held by the bitvector allocation.
    pub fn allocated_bytes(&self) -> usize {
        self.words.capacity() * 8
    }
}

/// Smallest power-of-two block size whose bitvector fits in
/// `budget_bytes` and that sets at most [`MAX_BITS_PER_OCCURRENCE`]
/// bits per occurrence for a gap window of `gap_width` positions.
pub fn default_block_size(n: u64, gap_width: u64, budget_bytes: usize) -> u64 {
    let budget_bits = (budget_bytes as u64).saturating_mul(8).max(1);
    let mut b = 1u64;
    while b < (1 << 40) && (n.div_ceil(b) > budget_bits || gap_width.div_ceil(b) > MAX_BITS_PER_OCCURRENCE) {
        b <<= 1;
    }
    b
}
