//! Seeded synthetic corpora: a concatenation of short grams drawn from a
//! Zipfian distribution, optionally interleaved with copies of earlier
//! text to mimic repetitive collections.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusConfig {
    /// Output length in bytes.
    pub len: usize,
    /// Byte values grams are built from.
    pub alphabet: Vec<u8>,
    pub gram_len: usize,
    /// Number of distinct grams (capped by what the alphabet allows).
    pub vocabulary: usize,
    /// Zipf exponent; rank `r` is drawn with weight `1 / r^s`.
    pub zipf_exponent: f64,
    /// Probability that a step copies an earlier stretch of text instead
    /// of emitting a fresh gram.
    pub repeat_prob: f64,
    /// Length of each copied stretch.
    pub repeat_len: usize,
    pub seed: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            len: 1 << 20,
            alphabet: b"abcdefghijklmnopqrstuvwxyz".to_vec(),
            gram_len: 3,
            vocabulary: 4096,
            zipf_exponent: 1.0,
            repeat_prob: 0.0,
            repeat_len: 4096,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("alphabet must not be empty")]
    EmptyAlphabet,
    #[error("gram length and vocabulary must be positive")]
    EmptyVocabulary,
    #[error("zipf exponent must be finite and non-negative")]
    BadExponent,
    #[error("repeat probability must lie in [0, 1]")]
    BadRepeatProb,
}

/// Cumulative integer weights; the same table on every platform once
/// built, and built with exact integer arithmetic when `s == 1`.
fn zipf_table(ranks: usize, s: f64) -> Vec<u64> {
    const SCALE: u64 = 1 << 40;
    let mut acc = 0u64;
    (1..=ranks as u64)
        .map(|r| {
            let w = if s == 1.0 {
                SCALE / r
            } else {
                ((SCALE as f64) / (r as f64).powf(s)).round() as u64
            };
            acc += w.max(1);
            acc
        })
        .collect()
}

pub fn generate_corpus(cfg: &CorpusConfig) -> Result<Vec<u8>, CorpusError> {
    if cfg.alphabet.is_empty() {
        return Err(CorpusError::EmptyAlphabet);
    }
    if cfg.gram_len == 0 || cfg.vocabulary == 0 {
        return Err(CorpusError::EmptyVocabulary);
    }
    if !cfg.zipf_exponent.is_finite() || cfg.zipf_exponent < 0.0 {
        return Err(CorpusError::BadExponent);
    }
    if !(0.0..=1.0).contains(&cfg.repeat_prob) {
        return Err(CorpusError::BadRepeatProb);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sigma = cfg.alphabet.len() as u32;

    let possible = (cfg.alphabet.len() as f64).powi(cfg.gram_len.min(64) as i32);
    let vocab_size = (cfg.vocabulary as f64).min(possible) as usize;
    let mut seen = HashSet::with_capacity(vocab_size);
    let mut vocab = Vec::with_capacity(vocab_size);
    while vocab.len() < vocab_size {
        let gram: Vec<u8> = (0..cfg.gram_len)
            .map(|_| cfg.alphabet[rng.random_range(0..sigma) as usize])
            .collect();
        if seen.insert(gram.clone()) {
            vocab.push(gram);
        }
    }

    let cdf = zipf_table(vocab.len(), cfg.zipf_exponent);
    let total = *cdf.last().unwrap();
    // repeat_prob as a 32-bit threshold keeps the draw in integers
    let repeat_threshold = (cfg.repeat_prob * (u32::MAX as f64 + 1.0)) as u64;

    let mut out = Vec::with_capacity(cfg.len + cfg.gram_len.max(cfg.repeat_len));
    while out.len() < cfg.len {
        let roll = rng.random::<u32>() as u64;
        if roll < repeat_threshold && out.len() > cfg.repeat_len && cfg.repeat_len > 0 {
            let from = rng.random_range(0..(out.len() - cfg.repeat_len) as u64) as usize;
            out.extend_from_within(from..from + cfg.repeat_len);
        } else {
            let x = rng.random_range(0..total);
            let rank = cdf.partition_point(|&c| c <= x);
            out.extend_from_slice(&vocab[rank]);
        }
    }
    out.truncate(cfg.len);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sized() {
        let cfg = CorpusConfig {
            len: 10_000,
            seed: 3,
            ..Default::default()
        };
        let a = generate_corpus(&cfg).unwrap();
        let b = generate_corpus(&cfg).unwrap();
        assert_eq!(a.len(), 10_000);
        assert_eq!(a, b);
        let c = generate_corpus(&CorpusConfig { seed: 4, ..cfg }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn respects_alphabet() {
        let cfg = CorpusConfig {
            len: 5000,
            alphabet: b"ACGT".to_vec(),
            vocabulary: 1000,
            repeat_prob: 0.2,
            repeat_len: 50,
            ..Default::default()
        };
        let text = generate_corpus(&cfg).unwrap();
        assert!(text.iter().all(|b| b"ACGT".contains(b)));
    }

    #[test]
    fn head_of_distribution_dominates() {
        let cdf = zipf_table(4, 1.0);
        let w: Vec<u64> = std::iter::once(cdf[0]).chain(cdf.windows(2).map(|p| p[1] - p[0])).collect();
        assert_eq!(w, vec![1 << 40, (1 << 40) / 2, (1 << 40) / 3, (1 << 40) / 4]);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = |f: fn(&mut CorpusConfig)| {
            let mut c = CorpusConfig::default();
            f(&mut c);
            generate_corpus(&c).unwrap_err()
        };
        assert_eq!(bad(|c| c.alphabet.clear()), CorpusError::EmptyAlphabet);
        assert_eq!(bad(|c| c.vocabulary = 0), CorpusError::EmptyVocabulary);
        assert_eq!(bad(|c| c.zipf_exponent = -1.0), CorpusError::BadExponent);
        assert_eq!(bad(|c| c.repeat_prob = 1.5), CorpusError::BadRepeatProb);
    }
}
