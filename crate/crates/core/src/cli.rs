//! Command-line front end.
//!
//! Exit codes: 0 success (search: at least one match), 1 search found no
//! match, 2 usage, parse or I/O error, 3 text exceeds index capacity,
//! 4 verification mismatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::bench::{self, BenchConfig, CorpusConfig};
use crate::match_engine::{oracle_search_with, search, SearchOptions, StrategyKind, DEFAULT_SORT_COST};
use crate::pattern::{parse_pattern, GapMode};
use crate::text_index::{Index, IndexError, PositionWidth};

pub const EXIT_MATCH: i32 = 0;
pub const EXIT_NO_MATCH: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "vlgscan", version, about = "Suffix-array index for variable-length-gapped pattern search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an index file from a text file.
    Build {
        text: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Bytes per suffix-array entry on disk.
        #[arg(long, default_value_t = 5, value_parser = parse_width)]
        width: u8,
    },
    /// Search an index for a VLG pattern such as `ab[2,5]ra`.
    Search {
        index: PathBuf,
        pattern: String,
        #[arg(long, value_enum, default_value_t = GapMode::Start)]
        gap_mode: GapMode,
        #[arg(long, value_enum, default_value_t = StrategyKind::Auto)]
        strategy: StrategyKind,
        /// Filter block size (power of two); default picks one per gap.
        #[arg(long)]
        block_size: Option<u64>,
        /// Planner weight of one sorted element.
        #[arg(long, default_value_t = DEFAULT_SORT_COST)]
        sort_cost: f64,
        /// Print tab-separated k-tuples instead of endpoints.
        #[arg(long, conflicts_with = "count")]
        tuples: bool,
        /// Stop enumerating after this many tuples.
        #[arg(long, requires = "tuples")]
        tuple_cap: Option<usize>,
        /// Print only the number of endpoints.
        #[arg(long)]
        count: bool,
        /// Cross-check against the brute-force matcher.
        #[arg(long)]
        verify: bool,
        /// Print per-adjacency diagnostics to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Time generated pattern sets against an index and write a CSV report.
    Bench {
        index: PathBuf,
        /// Flat key=value config file; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Extra config entries as key=value.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        dataset: Option<String>,
        #[arg(long)]
        k: Option<String>,
        #[arg(long)]
        m: Option<String>,
        /// Comma-separated bands, each `lo:hi` or S, M, L.
        #[arg(long)]
        bands: Option<String>,
        #[arg(long)]
        patterns: Option<String>,
        #[arg(long)]
        strategies: Option<String>,
        #[arg(long)]
        block_sizes: Option<String>,
        #[arg(long)]
        seed: Option<String>,
        #[arg(long)]
        reps: Option<String>,
        #[arg(long)]
        verify: bool,
        /// CSV destination; standard output when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write the grouped summary table here.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Estimate the planner's sort-cost constant on this host.
    Calibrate {
        index: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        patterns: usize,
    },
    /// Write a seeded synthetic corpus of Zipf-distributed grams.
    Corpus {
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        len: usize,
        #[arg(long, default_value = "abcdefghijklmnopqrstuvwxyz")]
        alphabet: String,
        #[arg(long, default_value_t = 3)]
        gram_len: usize,
        #[arg(long, default_value_t = 4096)]
        vocabulary: usize,
        #[arg(long, default_value_t = 1.0)]
        zipf: f64,
        #[arg(long, default_value_t = 0.0)]
        repeat_prob: f64,
        #[arg(long, default_value_t = 4096)]
        repeat_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Runs the CLI with explicit output streams and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_MATCH };
        }
    };
    match cli.command {
        Command::Build { text, out: dest, width } => cmd_build(text, dest, width, err),
        Command::Search {
            index,
            pattern,
            gap_mode,
            strategy,
            block_size,
            sort_cost,
            tuples,
            tuple_cap,
            count,
            verify,
            trace,
        } => {
            let opts = SearchOptions {
                strategy,
                block_size,
                sort_cost,
                tuples: tuples.then_some(tuple_cap),
                ..Default::default()
            };
            let flags = SearchFlags { count, verify, trace };
            cmd_search(index, &pattern, gap_mode, opts, flags, out, err)
        }
        Command::Bench {
            index,
            config,
            set,
            dataset,
            k,
            m,
            bands,
            patterns,
            strategies,
            block_sizes,
            seed,
            reps,
            verify,
            out: csv_out,
            summary,
        } => {
            let mut cfg = BenchConfig::default();
            if let Some(path) = config {
                let contents = match std::fs::read_to_string(&path) {
                    Ok(c) => c,
                    Err(e) => return fail(err, format!("cannot read {}: {e}", path.display()), EXIT_ERROR),
                };
                if let Err(e) = cfg.apply_file(&contents) {
                    return fail(err, format!("{}: {e}", path.display()), EXIT_ERROR);
                }
            }
            let mut overrides: Vec<(String, String)> = Vec::new();
            for entry in set {
                match entry.split_once('=') {
                    Some((k, v)) => overrides.push((k.to_string(), v.to_string())),
                    None => return fail(err, format!("--set expects KEY=VALUE, got {entry:?}"), EXIT_ERROR),
                }
            }
            for (key, value) in [
                ("dataset", dataset),
                ("k", k),
                ("m", m),
                ("bands", bands),
                ("patterns", patterns),
                ("strategies", strategies),
                ("block_sizes", block_sizes),
                ("seed", seed),
                ("reps", reps),
            ] {
                if let Some(v) = value {
                    overrides.push((key.to_string(), v));
                }
            }
            if verify {
                overrides.push(("verify".into(), "true".into()));
            }
            for (k, v) in overrides {
                if let Err(e) = cfg.set(&k, &v) {
                    return fail(err, e.to_string(), EXIT_ERROR);
                }
            }
            cmd_bench(index, cfg, csv_out, summary, out, err)
        }
        Command::Calibrate { index, seed, patterns } => {
            let idx = match load(&index, err) {
                Ok(idx) => idx,
                Err(code) => return code,
            };
            match bench::calibrate(&idx, seed, patterns) {
                Ok(c) => {
                    let _ = writeln!(out, "sort_cost={:.3}", c.sort_cost);
                    let _ = writeln!(err, "{} samples", c.samples.len());
                    EXIT_MATCH
                }
                Err(e) => fail(err, e.to_string(), EXIT_ERROR),
            }
        }
        Command::Corpus {
            out: dest,
            len,
            alphabet,
            gram_len,
            vocabulary,
            zipf,
            repeat_prob,
            repeat_len,
            seed,
        } => {
            let cfg = CorpusConfig {
                len,
                alphabet: alphabet.into_bytes(),
                gram_len,
                vocabulary,
                zipf_exponent: zipf,
                repeat_prob,
                repeat_len,
                seed,
            };
            match bench::generate_corpus(&cfg) {
                Ok(text) => match std::fs::write(&dest, text) {
                    Ok(()) => EXIT_MATCH,
                    Err(e) => fail(err, format!("cannot write {}: {e}", dest.display()), EXIT_ERROR),
                },
                Err(e) => fail(err, e.to_string(), EXIT_ERROR),
            }
        }
    }
}

fn parse_width(s: &str) -> Result<u8, String> {
    match s {
        "5" => Ok(5),
        "8" => Ok(8),
        _ => Err("width must be 5 or 8".into()),
    }
}

fn fail(err: &mut dyn Write, msg: impl std::fmt::Display, code: i32) -> i32 {
    let _ = writeln!(err, "error: {msg}");
    code
}

fn load(path: &PathBuf, err: &mut dyn Write) -> Result<Index, i32> {
    Index::load(path).map_err(|e| fail(err, format!("cannot load index {}: {e}", path.display()), EXIT_ERROR))
}

fn cmd_build(text: PathBuf, dest: PathBuf, width: u8, err: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let bytes = match std::fs::read(&text) {
        Ok(b) => b,
        Err(e) => return fail(err, format!("cannot read {}: {e}", text.display()), EXIT_ERROR),
    };
    let n = bytes.len();
    let index = match Index::build(bytes) {
        Ok(idx) => idx,
        Err(e @ IndexError::Capacity(_)) => return fail(err, e, EXIT_CAPACITY),
        Err(e) => return fail(err, e, EXIT_ERROR),
    };
    let width = PositionWidth::from_bytes(width).expect("validated by the argument parser");
    if let Err(e) = index.save(&dest, width) {
        return fail(err, format!("cannot write {}: {e}", dest.display()), EXIT_ERROR);
    }
    let _ = writeln!(err, "n={n} elapsed={:.3}s", start.elapsed().as_secs_f64());
    EXIT_MATCH
}

struct SearchFlags {
    count: bool,
    verify: bool,
    trace: bool,
}

fn cmd_search(
    index: PathBuf,
    pattern: &str,
    mode: GapMode,
    opts: SearchOptions,
    flags: SearchFlags,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let pattern = match parse_pattern(pattern, mode) {
        Ok(p) => p,
        Err(e) => return fail(err, e, EXIT_ERROR),
    };
    let idx = match load(&index, err) {
        Ok(idx) => idx,
        Err(code) => return code,
    };
    let start = Instant::now();
    let result = match search(&idx, &pattern, &opts) {
        Ok(r) => r,
        Err(e) => return fail(err, e, EXIT_ERROR),
    };
    let elapsed = start.elapsed();

    if flags.trace {
        let s = &result.stats;
        let _ = writeln!(err, "pattern {pattern} ({} µs)", elapsed.as_micros());
        let _ = writeln!(err, "occurrences {:?}{}", s.occurrences, if s.short_circuited { " (short-circuited)" } else { "" });
        for (j, a) in s.adjacencies.iter().enumerate() {
            let _ = writeln!(
                err,
                "adjacency {j}: {} anchors={} raw={} filtered={} survivors={} block={} second_round={} backward={}",
                a.strategy.map_or("-", StrategyKind::name),
                a.anchors,
                a.raw,
                a.filtered,
                a.survivors,
                a.block_size.map_or("-".to_string(), |b| b.to_string()),
                a.second_round,
                a.backward,
            );
        }
    }

    let mut buf = String::new();
    if flags.count {
        buf.push_str(&format!("{}\n", result.endpoints.len()));
    } else if let Some(tuples) = &result.tuples {
        for t in tuples {
            let line: Vec<String> = t.iter().map(u64::to_string).collect();
            buf.push_str(&line.join("\t"));
            buf.push('\n');
        }
        if result.truncated {
            let _ = writeln!(err, "warning: tuple output truncated at {} tuples", tuples.len());
        }
    } else {
        for p in &result.endpoints {
            buf.push_str(&format!("{p}\n"));
        }
    }
    if out.write_all(buf.as_bytes()).is_err() {
        return EXIT_ERROR;
    }

    if flags.verify {
        if pattern.gaps().iter().any(|g| g.min == 0) {
            let _ = writeln!(err, "note: a gap with δ = 0 lets consecutive subpatterns start at the same position");
        }
        let truth = oracle_search_with(idx.text().as_bytes(), &pattern, opts.tuples);
        let tuples_agree = opts.tuples.is_none() || truth.tuples == result.tuples;
        if truth.endpoints != result.endpoints || !tuples_agree {
            let _ = writeln!(
                err,
                "verify: MISMATCH (index {} endpoints, oracle {})",
                result.endpoints.len(),
                truth.endpoints.len()
            );
            return EXIT_MISMATCH;
        }
        let _ = writeln!(err, "verify: ok ({} endpoints)", truth.endpoints.len());
    }

    if result.endpoints.is_empty() {
        EXIT_NO_MATCH
    } else {
        EXIT_MATCH
    }
}

fn cmd_bench(
    index: PathBuf,
    cfg: BenchConfig,
    csv_out: Option<PathBuf>,
    summary: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let idx = match load(&index, err) {
        Ok(idx) => idx,
        Err(code) => return code,
    };
    let records = match bench::run_bench(&cfg, &idx) {
        Ok(r) => r,
        Err(e) => return fail(err, e, EXIT_ERROR),
    };
    let written = match &csv_out {
        Some(path) => std::fs::File::create(path)
            .map_err(bench::ReportError::from)
            .and_then(|f| bench::write_csv(&records, std::io::BufWriter::new(f))),
        None => bench::write_csv(&records, &mut *out),
    };
    if let Err(e) = written {
        return fail(err, e, EXIT_ERROR);
    }
    let table = bench::render_summary(&bench::summarize(&records));
    match &summary {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &table) {
                return fail(err, format!("cannot write {}: {e}", path.display()), EXIT_ERROR);
            }
        }
        None => {
            let _ = write!(err, "{table}");
        }
    }
    if cfg.verify {
        let bad = records.iter().filter(|r| !r.verified).count();
        if bad > 0 {
            return fail(err, format!("{bad} records disagree with the oracle"), EXIT_MISMATCH);
        }
    }
    EXIT_MATCH
}
