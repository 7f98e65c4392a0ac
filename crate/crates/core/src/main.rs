use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hecke_n0::cache::Cache;
use hecke_n0::engine::{
    atkin_lehner_eigen_check, compute_n0, easy_half_check, maeda_report, primes_coprime_to, SStar,
};
use hecke_n0::golden::{bundled, cell_cost, cells_to_csv, cells_to_json, parse_dataset, run_grid_with, Cell, GoldenEntry};
use hecke_n0::modsym::ModSymSpace;
use hecke_n0::Error;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;
const VERIFY_DEFAULT_COST: u64 = 2000;

#[derive(Parser)]
#[command(name = "hecke-n0", version, about = "How many Fourier coefficients distinguish newforms of level N and weight k")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CacheArgs {
    /// Cache directory (default: $HECKE_N0_CACHE, else ./.hecke-cache)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Do not read or write the cache
    #[arg(long)]
    no_cache: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compute n0(N, k) for one cell
    N0 {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weight: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Compute n0 over a grid of levels and weights
    Table {
        /// Levels, e.g. 1..6 or 11,13,17
        #[arg(long)]
        levels: String,
        /// Weights, e.g. 38..56 (even weights only) or 2..12:1
        #[arg(long)]
        weights: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long)]
        jobs: Option<usize>,
        /// Fill in the seconds column
        #[arg(long)]
        timings: bool,
        /// Report each finished cell on stderr
        #[arg(long)]
        progress: bool,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Recompute bundled table values and report any differences
    Verify {
        /// Alternative dataset with header N,k,n0,table_id
        #[arg(long)]
        dataset: Option<PathBuf>,
        #[arg(long)]
        levels: Option<String>,
        #[arg(long)]
        weights: Option<String>,
        /// Include cells with more than 2000 Manin generators
        #[arg(long)]
        slow: bool,
        #[arg(long)]
        jobs: Option<usize>,
        /// Report each finished cell on stderr
        #[arg(long)]
        progress: bool,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Pigeonhole, Atkin-Lehner and separability reports for one cell (JSON)
    Reports {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weight: u32,
        /// Primes for the separability report (default: three smallest not dividing N)
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Dimensions of the modular-symbols space and its subspaces (JSON)
    Dims {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weight: u32,
    },
}

enum Failure {
    Usage(String),
    Mismatch(String),
    Internal(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::Invariant(_) => Failure::Internal(e.to_string()),
            Error::Domain(_) | Error::UnsupportedWeight(_) => Failure::Usage(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

fn open_cache(args: &CacheArgs) -> Result<Option<Cache>, Failure> {
    if args.no_cache {
        return Ok(None);
    }
    Ok(Some(Cache::resolve(args.cache_dir.as_deref())?))
}

/// Parses `a..b`, `a..b:step` or a comma list. Ranges of weights default to
/// step 2 starting at the first even value; ranges of levels to step 1.
fn parse_set(spec: &str, even_default: bool) -> Result<Vec<u64>, Failure> {
    let bad = || Failure::Usage(format!("cannot parse range '{spec}'"));
    let spec = spec.trim();
    let out: Vec<u64> = if let Some((lo, rest)) = spec.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((h, s)) => (h, Some(s.parse::<u64>().map_err(|_| bad())?)),
            None => (rest, None),
        };
        let mut lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        let step = match step {
            Some(0) => return Err(bad()),
            Some(s) => s,
            None if even_default => {
                lo += lo % 2;
                2
            }
            None => 1,
        };
        (lo..=hi).step_by(step as usize).collect()
    } else {
        spec.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    Ok(out)
}

fn write_output(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Other(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::N0 {
            level,
            weight,
            format,
            cache,
        } => {
            let cache = open_cache(&cache)?;
            let r = compute_n0(level, weight, cache.as_ref())?;
            match format {
                TextFormat::Text => println!("{}", r.n0),
                TextFormat::Json => println!("{}", serde_json::to_string_pretty(&result_json(&r)).expect("json")),
            }
            Ok(())
        }
        Command::Table {
            levels,
            weights,
            out,
            format,
            jobs,
            timings,
            progress,
            cache,
        } => {
            let levels = parse_set(&levels, false)?;
            let weights = parse_set(&weights, true)?;
            if levels.is_empty() || weights.is_empty() || levels.contains(&0) || weights.contains(&0) {
                return Err(Failure::Usage("the grid is empty or contains 0".into()));
            }
            let grid: Vec<(u64, u32)> = levels
                .iter()
                .flat_map(|&n| weights.iter().map(move |&k| (n, k as u32)))
                .collect();
            let cache = open_cache(&cache)?;
            let cells = run_grid_with(&grid, cache.as_ref(), jobs, &reporter(progress, grid.len()))?;
            let text = match format {
                TableFormat::Csv => cells_to_csv(&cells, timings),
                TableFormat::Json => serde_json::to_string_pretty(&cells_to_json(&cells, timings)).expect("json") + "\n",
            };
            write_output(&text, out.as_ref())?;
            if let Some(c) = cells.iter().find(|c| c.internal_error) {
                let msg = c.result.as_ref().err().cloned().unwrap_or_default();
                return Err(Failure::Internal(format!("N = {}, k = {}: {msg}", c.level, c.weight)));
            }
            Ok(())
        }
        Command::Verify {
            dataset,
            levels,
            weights,
            slow,
            jobs,
            progress,
            cache,
        } => {
            let entries = match &dataset {
                Some(p) => {
                    let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
                    parse_dataset(&text)?
                }
                None => bundled(),
            };
            let levels = levels.map(|s| parse_set(&s, false)).transpose()?;
            let weights = weights.map(|s| parse_set(&s, false)).transpose()?;
            let selected: Vec<GoldenEntry> = entries
                .into_iter()
                .filter(|e| levels.as_ref().map_or(true, |l| l.contains(&e.level)))
                .filter(|e| weights.as_ref().map_or(true, |w| w.contains(&(e.weight as u64))))
                .filter(|e| slow || cell_cost(e.level, e.weight) <= VERIFY_DEFAULT_COST)
                .collect();
            if selected.is_empty() {
                eprintln!("warning: no dataset rows match the filter; nothing checked");
                println!("checked 0, passed 0, failed 0");
                return Ok(());
            }
            let cache = open_cache(&cache)?;
            let grid: Vec<(u64, u32)> = selected.iter().map(|e| (e.level, e.weight)).collect();
            let cells = run_grid_with(&grid, cache.as_ref(), jobs, &reporter(progress, grid.len()))?;
            let mut failures = Vec::new();
            let mut internal = false;
            for c in &cells {
                let expected = selected
                    .iter()
                    .find(|e| e.level == c.level && e.weight == c.weight)
                    .expect("selected cell");
                match &c.result {
                    Ok(r) if r.n0 == expected.n0 => {}
                    Ok(r) => failures.push(format!(
                        "N={} k={} table={}: expected {}, computed {}",
                        c.level, c.weight, expected.table_id, expected.n0, r.n0
                    )),
                    Err(e) => {
                        internal |= c.internal_error;
                        failures.push(format!("N={} k={}: error: {e}", c.level, c.weight));
                    }
                }
            }
            for f in &failures {
                println!("MISMATCH {f}");
            }
            println!(
                "checked {}, passed {}, failed {}",
                cells.len(),
                cells.len() - failures.len(),
                failures.len()
            );
            if internal {
                Err(Failure::Internal("internal consistency error during verification".into()))
            } else if failures.is_empty() {
                Ok(())
            } else {
                Err(Failure::Mismatch(format!("{} cells differ", failures.len())))
            }
        }
        Command::Reports {
            level,
            weight,
            primes,
            cache,
        } => {
            let cache = open_cache(&cache)?;
            let r = compute_n0(level, weight, cache.as_ref())?;
            let easy = easy_half_check(&r);
            let mut report = json!({
                "N": level.to_string(),
                "k": weight.to_string(),
                "n0": r.n0.to_string(),
                "dim_s": r.dim_s,
                "easy_half": easy,
            });
            if weight % 2 == 0 {
                let s = SStar::build(level, weight, cache.as_ref())?;
                let primes = if primes.is_empty() { primes_coprime_to(level, 3) } else { primes };
                report["atkin_lehner"] = serde_json::to_value(atkin_lehner_eigen_check(&s, true)?).expect("json");
                report["maeda"] = serde_json::to_value(maeda_report(&s, &primes)?).expect("json");
            }
            println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            Ok(())
        }
        Command::Dims { level, weight } => {
            let m = ModSymSpace::new(level, weight)?;
            let report = json!({
                "N": level.to_string(),
                "k": weight.to_string(),
                "generators": m.generator_count(),
                "modular_symbols": m.dim(),
                "cusp_classes": m.cusp_classes().count(),
                "cuspidal": m.cuspidal_subspace().dim(),
                "cuspidal_plus": m.cuspidal_plus_subspace()?.dim(),
                "new_cuspidal_plus": m.new_cuspidal_plus()?.dim(),
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            Ok(())
        }
    }
}

fn reporter(enabled: bool, total: usize) -> impl Fn(&Cell) + Sync {
    let done = std::sync::atomic::AtomicUsize::new(0);
    move |c: &Cell| {
        if !enabled {
            return;
        }
        let i = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
        let n0 = match &c.result {
            Ok(r) => r.n0.to_string(),
            Err(_) => "error".into(),
        };
        eprintln!("[{i}/{total}] N={} k={} n0={n0} {:.1}s", c.level, c.weight, c.seconds);
    }
}

fn result_json(r: &hecke_n0::engine::N0Result) -> serde_json::Value {
    let runs: Vec<serde_json::Value> = r
        .runs
        .iter()
        .map(|q| {
            json!({
                "q": q.q.to_string(),
                "street_dims": q.street_dims,
                "separation_primes": q.separation_primes.iter().map(u64::to_string).collect::<Vec<_>>(),
                "m": q.m.to_string(),
                "upper_bound": q.upper_bound.to_string(),
            })
        })
        .collect();
    json!({
        "N": r.level.to_string(),
        "k": r.weight.to_string(),
        "n0": r.n0.to_string(),
        "dim_s": r.dim_s,
        "sturm_bound": r.sturm_bound.to_string(),
        "streets_report": runs,
        "elapsed_seconds": r.elapsed_seconds,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Mismatch(m)) => {
            eprintln!("{m}");
            ExitCode::from(EXIT_MISMATCH)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(EXIT_INTERNAL)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_MISMATCH)
        }
    }
}
