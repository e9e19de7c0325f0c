use std::path::PathBuf;

use crate::block_filter::DEFAULT_FILTER_BUDGET;
use crate::match_engine::{StrategyKind, DEFAULT_SORT_COST};
use crate::pattern::GapConstraint;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("bad value {value:?} for {key}: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("line {0}: expected key=value")]
    Syntax(usize),
}

/// Small, medium and large gap bands.
pub const GAP_BANDS: [GapConstraint; 3] = [
    GapConstraint { min: 100, max: 110 },
    GapConstraint { min: 1000, max: 1100 },
    GapConstraint { min: 10000, max: 11000 },
];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub text: Option<PathBuf>,
    pub dataset: String,
    pub ks: Vec<usize>,
    pub ms: Vec<usize>,
    pub bands: Vec<GapConstraint>,
    pub patterns_per_cell: usize,
    pub strategies: Vec<StrategyKind>,
    /// Block sizes to sweep for filtering strategies; empty means the
    /// default rule.
    pub block_sizes: Vec<u64>,
    pub seed: u64,
    pub reps: usize,
    pub verify: bool,
    pub sort_cost: f64,
    pub filter_budget: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            text: None,
            dataset: "text".into(),
            ks: vec![2, 4, 8, 16, 32],
            ms: vec![3, 5, 7],
            bands: GAP_BANDS.to_vec(),
            patterns_per_cell: 20,
            strategies: vec![StrategyKind::Auto],
            block_sizes: Vec::new(),
            seed: 1,
            reps: 3,
            verify: false,
            sort_cost: DEFAULT_SORT_COST,
            filter_budget: DEFAULT_FILTER_BUDGET,
        }
    }
}

fn list<T>(key: &str, value: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, ConfigError> {
    let bad = |reason: &str| ConfigError::BadValue {
        key: key.into(),
        value: value.into(),
        reason: reason.into(),
    };
    let items: Vec<T> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(s).ok_or_else(|| bad(&format!("cannot parse {s:?}"))))
        .collect::<Result<_, _>>()?;
    Ok(items)
}

fn non_empty<T>(key: &str, value: &str, items: Vec<T>) -> Result<Vec<T>, ConfigError> {
    if items.is_empty() {
        return Err(ConfigError::BadValue {
            key: key.into(),
            value: value.into(),
            reason: "list must not be empty".into(),
        });
    }
    Ok(items)
}

fn parse_band(s: &str) -> Option<GapConstraint> {
    match s {
        "S" | "s" => return Some(GAP_BANDS[0]),
        "M" | "m" => return Some(GAP_BANDS[1]),
        "L" | "l" => return Some(GAP_BANDS[2]),
        _ => {}
    }
    let (lo, hi) = s.split_once(':')?;
    GapConstraint::new(lo.trim().parse().ok()?, hi.trim().parse().ok()?).ok()
}

fn scalar<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.trim().parse().map_err(|_| ConfigError::BadValue {
        key: key.into(),
        value: value.into(),
        reason: "not a valid number".into(),
    })
}

impl BenchConfig {
    /// Applies one `key=value` setting.
    ///
    /// Lists are comma separated; bands are `lo:hi` or `S`/`M`/`L`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = key.trim();
        match key {
            "text" => self.text = Some(PathBuf::from(value.trim())),
            "dataset" => self.dataset = value.trim().to_string(),
            "k" => self.ks = non_empty(key, value, list(key, value, |s| s.parse().ok().filter(|&k| k > 0))?)?,
            "m" => self.ms = non_empty(key, value, list(key, value, |s| s.parse().ok().filter(|&m| m > 0))?)?,
            "bands" => self.bands = non_empty(key, value, list(key, value, parse_band)?)?,
            "patterns" => {
                self.patterns_per_cell = scalar(key, value)?;
                if self.patterns_per_cell == 0 {
                    return Err(ConfigError::BadValue {
                        key: key.into(),
                        value: value.into(),
                        reason: "must be positive".into(),
                    });
                }
            }
            "strategies" => self.strategies = non_empty(key, value, list(key, value, |s| s.parse().ok())?)?,
            "block_sizes" => {
                self.block_sizes = list(key, value, |s| s.parse::<u64>().ok().filter(|b| b.is_power_of_two()))?
            }
            "seed" => self.seed = scalar(key, value)?,
            "reps" => {
                self.reps = scalar(key, value)?;
                if self.reps == 0 {
                    return Err(ConfigError::BadValue {
                        key: key.into(),
                        value: value.into(),
                        reason: "must be positive".into(),
                    });
                }
            }
            "verify" => {
                self.verify = match value.trim() {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" => false,
                    _ => {
                        return Err(ConfigError::BadValue {
                            key: key.into(),
                            value: value.into(),
                            reason: "expected true or false".into(),
                        })
                    }
                }
            }
            "sort_cost" => self.sort_cost = scalar(key, value)?,
            "filter_budget" => self.filter_budget = scalar(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Applies a flat `key=value` file; `#` starts a comment line.
    pub fn apply_file(&mut self, contents: &str) -> Result<(), ConfigError> {
        for (i, line) in contents.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax(i + 1))?;
            self.set(k, v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_protocol() {
        let c = BenchConfig::default();
        assert_eq!(c.ks, vec![2, 4, 8, 16, 32]);
        assert_eq!(c.ms, vec![3, 5, 7]);
        assert_eq!(c.bands, GAP_BANDS.to_vec());
        assert_eq!(c.patterns_per_cell, 20);
        assert_eq!(c.reps, 3);
    }

    #[test]
    fn file_then_override() {
        let mut c = BenchConfig::default();
        c.apply_file("# sweep\nk=2,4\nbands = S, 5:9\nstrategies=radix,auto\nverify=true\n").unwrap();
        c.set("k", "8").unwrap();
        assert_eq!(c.ks, vec![8]);
        assert_eq!(c.bands, vec![GAP_BANDS[0], GapConstraint { min: 5, max: 9 }]);
        assert_eq!(c.strategies, vec![StrategyKind::RadixSort, StrategyKind::Auto]);
        assert!(c.verify);
    }

    #[test]
    fn errors() {
        let mut c = BenchConfig::default();
        assert_eq!(c.set("bogus", "1"), Err(ConfigError::UnknownKey("bogus".into())));
        assert!(matches!(c.set("k", ""), Err(ConfigError::BadValue { .. })));
        assert!(matches!(c.set("bands", "9:5"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(c.set("block_sizes", "6"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(c.set("strategies", "fast"), Err(ConfigError::BadValue { .. })));
        assert_eq!(c.apply_file("k 2"), Err(ConfigError::Syntax(1)));
    }
}
