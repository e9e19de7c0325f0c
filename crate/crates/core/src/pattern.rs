//! Variable-length-gapped patterns: representation, the textual grammar,
//! and synthetic generation from frequent substrings.
//!
//! Grammar (whitespace is only skipped inside gap brackets):
//!
//! ```text
//! pattern := subpat (gap subpat)*
//! gap     := '[' int ',' int ']'
//! subpat  := ( any byte except '[' ']' '\'  |  '\[' | '\]' | '\\' | '\xNN' )+
//! ```
//!
//! Gaps are stored start-to-start: `⟨min, max⟩` bounds the difference
//! between the start of subpattern `i + 1` and the start of subpattern `i`.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::text_index::Text;

/// Size of the frequent-substring pool patterns are drawn from.
pub const POOL_SIZE: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("empty pattern")]
    EmptyPattern,
    #[error("empty subpattern at offset {offset}")]
    EmptySubpattern { offset: usize },
    #[error("invalid gap at offset {offset}: δ > Δ ({min} > {max})")]
    GapOrder { offset: usize, min: u64, max: u64 },
    #[error("malformed gap at offset {offset}: {reason}")]
    MalformedGap { offset: usize, reason: &'static str },
    #[error("unmatched ']' at offset {offset}")]
    UnmatchedBracket { offset: usize },
    #[error("dangling escape at offset {offset}")]
    DanglingEscape { offset: usize },
    #[error("invalid escape at offset {offset}")]
    InvalidEscape { offset: usize },
    #[error("pattern needs k-1 = {expected} gaps, got {got}")]
    GapCount { expected: usize, got: usize },
    #[error("subpattern pool is empty")]
    PoolEmpty,
    #[error("substring length {m} exceeds text length {n}")]
    LengthExceedsText { m: usize, n: usize },
    #[error("{0}")]
    Invalid(&'static str),
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<PatternError>,
    },
}

/// Allowed start-to-start distance between consecutive subpatterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GapConstraint {
    pub min: u64,
    pub max: u64,
}

impl GapConstraint {
    pub fn new(min: u64, max: u64) -> Result<Self, PatternError> {
        if min > max {
            return Err(PatternError::GapOrder { offset: 0, min, max });
        }
        Ok(GapConstraint { min, max })
    }

    pub fn width(&self) -> u64 {
        self.max - self.min
    }

    pub fn contains(&self, distance: u64) -> bool {
        self.min <= distance && distance <= self.max
    }
}

/// How bracketed gap bounds in pattern text are measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum GapMode {
    /// From the start of one subpattern to the start of the next.
    #[default]
    Start,
    /// From the end of one subpattern to the start of the next.
    End,
}

/// `k` subpatterns joined by `k - 1` gap constraints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VlgPattern {
    subpatterns: Vec<Vec<u8>>,
    gaps: Vec<GapConstraint>,
}

impl VlgPattern {
    pub fn new(subpatterns: Vec<Vec<u8>>, gaps: Vec<GapConstraint>) -> Result<Self, PatternError> {
        if subpatterns.is_empty() {
            return Err(PatternError::EmptyPattern);
        }
        if gaps.len() + 1 != subpatterns.len() {
            return Err(PatternError::GapCount {
                expected: subpatterns.len() - 1,
                got: gaps.len(),
            });
        }
        if subpatterns.iter().any(Vec::is_empty) {
            return Err(PatternError::EmptySubpattern { offset: 0 });
        }
        if let Some(g) = gaps.iter().find(|g| g.min > g.max) {
            return Err(PatternError::GapOrder {
                offset: 0,
                min: g.min,
                max: g.max,
            });
        }
        Ok(VlgPattern { subpatterns, gaps })
    }

    /// Plain substring search as a one-subpattern pattern.
    pub fn single(sub: impl Into<Vec<u8>>) -> Result<Self, PatternError> {
        Self::new(vec![sub.into()], Vec::new())
    }

    /// Number of subpatterns.
    pub fn k(&self) -> usize {
        self.subpatterns.len()
    }

    pub fn subpatterns(&self) -> &[Vec<u8>] {
        &self.subpatterns
    }

    pub fn gaps(&self) -> &[GapConstraint] {
        &self.gaps
    }

    /// Renders in the pattern grammar with start-to-start gaps.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, sub) in self.subpatterns.iter().enumerate() {
            if i > 0 {
                let g = self.gaps[i - 1];
                out.push_str(&format!("[{},{}]", g.min, g.max));
            }
            render_subpattern(sub, &mut out);
        }
        out
    }
}

impl fmt::Display for VlgPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for VlgPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VlgPattern({})", self.render())
    }
}

fn render_subpattern(sub: &[u8], out: &mut String) {
    for &b in sub {
        match b {
            b'[' | b']' | b'\\' => {
                out.push('\\');
                out.push(b as char);
            }
            0x20..=0x7e => out.push(b as char),
            _ => out.push_str(&format!("\\x{b:02x}")),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn subpattern(&mut self) -> Result<Vec<u8>, PatternError> {
        let start = self.pos;
        let mut out = Vec::new();
        while let Some(b) = self.peek() {
            match b {
                b'[' => break,
                b']' => return Err(PatternError::UnmatchedBracket { offset: self.pos }),
                b'\\' => {
                    let at = self.pos;
                    match self.src.get(at + 1) {
                        None => return Err(PatternError::DanglingEscape { offset: at }),
                        Some(&c @ (b'[' | b']' | b'\\')) => {
                            out.push(c);
                            self.pos += 2;
                        }
                        Some(b'x') => {
                            let hex = self
                                .src
                                .get(at + 2..at + 4)
                                .and_then(|h| std::str::from_utf8(h).ok())
                                .and_then(|h| u8::from_str_radix(h, 16).ok())
                                .ok_or(PatternError::InvalidEscape { offset: at })?;
                            out.push(hex);
                            self.pos += 4;
                        }
                        Some(_) => return Err(PatternError::InvalidEscape { offset: at }),
                    }
                }
                _ => {
                    out.push(b);
                    self.pos += 1;
                }
            }
        }
        if out.is_empty() {
            return Err(PatternError::EmptySubpattern { offset: start });
        }
        Ok(out)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn int(&mut self) -> Result<u64, PatternError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PatternError::MalformedGap {
                offset: start,
                reason: "expected an integer",
            });
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v = digits.parse().map_err(|_| PatternError::MalformedGap {
            offset: start,
            reason: "integer out of range",
        })?;
        self.skip_ws();
        Ok(v)
    }

    fn expect(&mut self, byte: u8, reason: &'static str) -> Result<(), PatternError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(PatternError::MalformedGap {
                offset: self.pos,
                reason,
            })
        }
    }

    fn gap(&mut self) -> Result<(usize, u64, u64), PatternError> {
        let open = self.pos;
        self.expect(b'[', "expected '['")?;
        let min = self.int()?;
        self.expect(b',', "expected ','")?;
        let max = self.int()?;
        self.expect(b']', "expected ']'")?;
        Ok((open, min, max))
    }
}

/// Parses a pattern; `mode` says how the bracketed bounds are measured.
pub fn parse_pattern(s: &str, mode: GapMode) -> Result<VlgPattern, PatternError> {
    if s.is_empty() {
        return Err(PatternError::EmptyPattern);
    }
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let mut subpatterns = vec![p.subpattern()?];
    let mut gaps = Vec::new();
    while p.peek().is_some() {
        let (offset, min, max) = p.gap()?;
        if min > max {
            return Err(PatternError::GapOrder { offset, min, max });
        }
        let shift = match mode {
            GapMode::Start => 0,
            GapMode::End => subpatterns.last().map_or(0, |s: &Vec<u8>| s.len() as u64),
        };
        let (min, max) = match (min.checked_add(shift), max.checked_add(shift)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(PatternError::MalformedGap {
                    offset,
                    reason: "gap bound overflows",
                })
            }
        };
        gaps.push(GapConstraint { min, max });
        subpatterns.push(p.subpattern()?);
    }
    VlgPattern::new(subpatterns, gaps)
}

/// Parses a pattern file: one pattern per line; blank lines and lines
/// starting with `#` are skipped.
pub fn parse_pattern_file(contents: &str, mode: GapMode) -> Result<Vec<VlgPattern>, PatternError> {
    let mut out = Vec::new();
    for (i, raw) in contents.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let pat = parse_pattern(line, mode).map_err(|e| PatternError::Line {
            line: i + 1,
            source: Box::new(e),
        })?;
        out.push(pat);
    }
    Ok(out)
}

/// Big-endian packing keeps same-length keys in lexicographic order.
fn pack(window: &[u8]) -> u64 {
    window.iter().fold(0u64, |acc, &b| (acc << 8) | b as u64)
}

fn unpack(mut key: u64, m: usize) -> Vec<u8> {
    let mut out = vec![0u8; m];
    for slot in out.iter_mut().rev() {
        *slot = key as u8;
        key >>= 8;
    }
    out
}

/// The `count` most frequent length-`m` substrings with their counts,
/// by descending frequency then ascending bytes.
pub fn top_frequent_substrings(text: &Text, m: usize, count: usize) -> Result<Vec<(Vec<u8>, u64)>, PatternError> {
    let t = text.as_bytes();
    if m == 0 {
        return Err(PatternError::Invalid("substring length must be at least 1"));
    }
    if m > t.len() {
        return Err(PatternError::LengthExceedsText { m, n: t.len() });
    }
    let mut ranked: Vec<(Vec<u8>, u64)> = if m <= 3 {
        let mut counts = vec![0u64; 1 << (8 * m)];
        for w in t.windows(m) {
            counts[pack(w) as usize] += 1;
        }
        counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(key, &c)| (unpack(key as u64, m), c))
            .collect()
    } else if m <= 8 {
        let mut counts: HashMap<u64, u64> = HashMap::new();
        for w in t.windows(m) {
            *counts.entry(pack(w)).or_default() += 1;
        }
        counts.into_iter().map(|(key, c)| (unpack(key, m), c)).collect()
    } else {
        let mut counts: HashMap<&[u8], u64> = HashMap::new();
        for w in t.windows(m) {
            *counts.entry(w).or_default() += 1;
        }
        counts.into_iter().map(|(w, c)| (w.to_vec(), c)).collect()
    };
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(count);
    Ok(ranked)
}

/// Draws `how_many` patterns of `k` subpatterns each, uniformly with
/// replacement from `pool`, every gap set to `gap`.
///
/// The generator is ChaCha8 seeded from `seed`, sampling `u32` indices,
/// so the output is identical across runs and platforms.
pub fn generate_patterns_from_pool(
    pool: &[Vec<u8>],
    k: usize,
    gap: GapConstraint,
    how_many: usize,
    seed: u64,
) -> Result<Vec<VlgPattern>, PatternError> {
    if pool.is_empty() {
        return Err(PatternError::PoolEmpty);
    }
    if k == 0 {
        return Err(PatternError::Invalid("k must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = pool.len() as u32;
    (0..how_many)
        .map(|_| {
            let subs = (0..k).map(|_| pool[rng.random_range(0..len) as usize].clone()).collect();
            VlgPattern::new(subs, vec![gap; k - 1])
        })
        .collect()
}

/// Draws patterns from the top-[`POOL_SIZE`] length-`m` substrings of `text`.
pub fn generate_patterns(
    text: &Text,
    k: usize,
    m: usize,
    gap: GapConstraint,
    how_many: usize,
    seed: u64,
) -> Result<Vec<VlgPattern>, PatternError> {
    let pool: Vec<Vec<u8>> = top_frequent_substrings(text, m, POOL_SIZE)?
        .into_iter()
        .map(|(s, _)| s)
        .collect();
    generate_patterns_from_pool(&pool, k, gap, how_many, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaps(p: &VlgPattern) -> Vec<(u64, u64)> {
        p.gaps().iter().map(|g| (g.min, g.max)).collect()
    }

    #[test]
    fn motif_in_start_mode() {
        let p = parse_pattern("MT[115,136]MTNTAYGG[121,151]GTNGAYGAY", GapMode::Start).unwrap();
        assert_eq!(p.k(), 3);
        assert_eq!(gaps(&p), vec![(115, 136), (121, 151)]);
        assert_eq!(p.subpatterns()[1], b"MTNTAYGG");
    }

    #[test]
    fn whitespace_inside_brackets() {
        let p = parse_pattern("MT[ 115,\t136 ]MTNTAYGG", GapMode::Start).unwrap();
        assert_eq!(gaps(&p), vec![(115, 136)]);
    }

    #[test]
    fn end_mode_adds_preceding_length() {
        let p = parse_pattern("ab[2,2]ra", GapMode::End).unwrap();
        assert_eq!(gaps(&p), vec![(4, 4)]);
        let p = parse_pattern("a[0,1]bcd[3,5]e", GapMode::End).unwrap();
        assert_eq!(gaps(&p), vec![(1, 2), (6, 8)]);
    }

    #[test]
    fn reversed_gap_is_an_error() {
        let err = parse_pattern("ab[5,3]cd", GapMode::Start).unwrap_err();
        assert_eq!(err, PatternError::GapOrder { offset: 2, min: 5, max: 3 });
        assert!(err.to_string().contains("δ > Δ"));
    }

    #[test]
    fn error_offsets() {
        use PatternError::*;
        let cases: &[(&str, PatternError)] = &[
            ("[1,2]ab", EmptySubpattern { offset: 0 }),
            ("ab[1,2]", EmptySubpattern { offset: 7 }),
            ("ab[1,2][3,4]cd", EmptySubpattern { offset: 7 }),
            ("ab[1 2]cd", MalformedGap { offset: 5, reason: "expected ','" }),
            ("ab[,2]cd", MalformedGap { offset: 3, reason: "expected an integer" }),
            ("ab[1,2cd", MalformedGap { offset: 6, reason: "expected ']'" }),
            ("ab]cd", UnmatchedBracket { offset: 2 }),
            ("ab\\", DanglingEscape { offset: 2 }),
            ("a\\qb", InvalidEscape { offset: 1 }),
            ("a\\x4", InvalidEscape { offset: 1 }),
            ("", EmptyPattern),
        ];
        for (src, want) in cases {
            assert_eq!(&parse_pattern(src, GapMode::Start).unwrap_err(), want, "{src}");
        }
    }

    #[test]
    fn escapes() {
        let p = parse_pattern(r"a\[b\]\\[0,3]\x00\xff", GapMode::Start).unwrap();
        assert_eq!(p.subpatterns()[0], b"a[b]\\");
        assert_eq!(p.subpatterns()[1], vec![0x00, 0xff]);
        assert_eq!(p.render(), r"a\[b\]\\[0,3]\x00\xff");
    }

    #[test]
    fn single_subpattern() {
        let p = parse_pattern("ana", GapMode::Start).unwrap();
        assert_eq!(p.k(), 1);
        assert!(p.gaps().is_empty());
    }

    #[test]
    fn pattern_file() {
        let src = "# motifs\n\nab[2,2]ra\n  # indented comment\nMT[1,2]GG\r\n";
        let pats = parse_pattern_file(src, GapMode::Start).unwrap();
        assert_eq!(pats.len(), 2);
        assert_eq!(pats[1].subpatterns()[1], b"GG");
        let err = parse_pattern_file("ab\nx[3,1]y\n", GapMode::Start).unwrap_err();
        assert!(matches!(err, PatternError::Line { line: 2, .. }));
    }

    #[test]
    fn constructor_validation() {
        assert!(VlgPattern::new(vec![], vec![]).is_err());
        assert!(VlgPattern::new(vec![b"a".to_vec()], vec![GapConstraint { min: 0, max: 1 }]).is_err());
        assert!(VlgPattern::new(vec![b"a".to_vec(), b"".to_vec()], vec![GapConstraint { min: 0, max: 1 }]).is_err());
        assert!(VlgPattern::new(vec![b"a".to_vec(), b"b".to_vec()], vec![GapConstraint { min: 2, max: 1 }]).is_err());
        assert!(GapConstraint::new(3, 2).is_err());
    }

    fn top(s: &str, m: usize, count: usize) -> Vec<(String, u64)> {
        top_frequent_substrings(&Text::from(s), m, count)
            .unwrap()
            .into_iter()
            .map(|(w, c)| (String::from_utf8(w).unwrap(), c))
            .collect()
    }

    #[test]
    fn frequent_substring_examples() {
        assert_eq!(top("abab", 2, 2), vec![("ab".into(), 2), ("ba".into(), 1)]);
        assert_eq!(top("aaaa", 3, 5), vec![("aaa".into(), 2)]);
        assert_eq!(
            top("banana", 2, 3),
            vec![("an".into(), 2), ("na".into(), 2), ("ba".into(), 1)]
        );
        assert!(matches!(
            top_frequent_substrings(&Text::from("ab"), 3, 1),
            Err(PatternError::LengthExceedsText { m: 3, n: 2 })
        ));
    }

    #[test]
    fn generated_patterns_follow_protocol() {
        let text = Text::from("the quick brown fox jumps over the lazy dog ".repeat(20).as_str());
        let gap = GapConstraint::new(100, 110).unwrap();
        let pats = generate_patterns(&text, 2, 3, gap, 20, 1).unwrap();
        assert_eq!(pats.len(), 20);
        assert!(pats.iter().all(|p| p.k() == 2 && p.gaps() == [gap]));

        let a = generate_patterns(&text, 2, 3, gap, 20, 7).unwrap();
        let b = generate_patterns(&text, 2, 3, gap, 20, 7).unwrap();
        assert_eq!(a, b);

        let four = generate_patterns(&text, 4, 3, gap, 5, 7).unwrap();
        assert!(four.iter().all(|p| p.gaps().len() == 3));

        assert_eq!(
            generate_patterns_from_pool(&[], 2, gap, 1, 1).unwrap_err(),
            PatternError::PoolEmpty
        );
    }
}
