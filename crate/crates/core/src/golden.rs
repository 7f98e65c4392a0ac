//! The bundled table of n₀ values and the grid runner.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::ntheory::psi;
use crate::cache::Cache;
use crate::engine::{compute_n0, N0Result};
use crate::error::{Error, Result};

pub const BUNDLED_CSV: &str = include_str!("../data/appendix_n0.csv");
const HEADER: &str = "N,k,n0,table_id";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub level: u64,
    pub weight: u32,
    pub n0: u64,
    pub table_id: u32,
}

/// Number of Manin symbol generators, (k - 1) ψ(N); the cost measure for grids.
pub fn cell_cost(n: u64, k: u32) -> u64 {
    (k as u64).saturating_sub(1) * psi(n)
}

pub fn parse_dataset(text: &str) -> Result<Vec<GoldenEntry>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == HEADER => {}
        _ => return Err(Error::domain(format!("dataset must start with the header {HEADER}"))),
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || Error::domain(format!("dataset line {}: cannot parse '{line}'", i + 2));
        if fields.len() != 4 {
            return Err(bad());
        }
        out.push(GoldenEntry {
            level: fields[0].parse().map_err(|_| bad())?,
            weight: fields[1].parse().map_err(|_| bad())?,
            n0: fields[2].parse().map_err(|_| bad())?,
            table_id: fields[3].parse().map_err(|_| bad())?,
        });
    }
    Ok(out)
}

pub fn bundled() -> Vec<GoldenEntry> {
    parse_dataset(BUNDLED_CSV).expect("bundled dataset parses")
}

/// One computed cell of a grid.
#[derive(Clone, Debug)]
pub struct Cell {
    pub level: u64,
    pub weight: u32,
    pub result: std::result::Result<N0Result, String>,
    pub internal_error: bool,
    pub seconds: f64,
}

/// Computes every (N, k) in parallel on `jobs` threads (all cores if `None`);
/// the output is sorted by (N, k) and independent of the thread count.
pub fn run_grid(cells: &[(u64, u32)], cache: Option<&Cache>, jobs: Option<usize>) -> Result<Vec<Cell>> {
    run_grid_with(cells, cache, jobs, &|_| {})
}

/// As [`run_grid`], calling `on_done` as each cell finishes (in completion order).
pub fn run_grid_with(
    cells: &[(u64, u32)],
    cache: Option<&Cache>,
    jobs: Option<usize>,
    on_done: &(dyn Fn(&Cell) + Sync),
) -> Result<Vec<Cell>> {
    let mut cells = cells.to_vec();
    cells.sort_unstable();
    cells.dedup();
    let work = || {
        cells
            .par_iter()
            .map(|&(n, k)| {
                let start = Instant::now();
                let r = compute_n0(n, k, cache);
                let internal_error = matches!(r, Err(Error::Internal(_)) | Err(Error::Invariant(_)));
                let cell = Cell {
                    level: n,
                    weight: k,
                    result: r.map_err(|e| e.to_string()),
                    internal_error,
                    seconds: start.elapsed().as_secs_f64(),
                };
                on_done(&cell);
                cell
            })
            .collect::<Vec<_>>()
    };
    let out = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::domain(e.to_string()))?
            .install(work),
        None => work(),
    };
    Ok(out)
}

/// CSV with header `N,k,n0,dim,seconds`. Without `timings` the seconds
/// column is left empty so that output is reproducible byte for byte.
pub fn cells_to_csv(cells: &[Cell], timings: bool) -> String {
    let mut s = String::from("N,k,n0,dim,seconds\n");
    for c in cells {
        let secs = if timings { format!("{:.3}", c.seconds) } else { String::new() };
        match &c.result {
            Ok(r) => writeln!(s, "{},{},{},{},{}", c.level, c.weight, r.n0, r.dim_s, secs),
            Err(_) => writeln!(s, "{},{},error,,{}", c.level, c.weight, secs),
        }
        .expect("write to string");
    }
    s
}

pub fn cells_to_json(cells: &[Cell], timings: bool) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = cells
        .iter()
        .map(|c| {
            let mut v = match &c.result {
                Ok(r) => serde_json::json!({
                    "N": c.level.to_string(),
                    "k": c.weight.to_string(),
                    "n0": r.n0.to_string(),
                    "dim": r.dim_s,
                }),
                Err(e) => serde_json::json!({
                    "N": c.level.to_string(),
                    "k": c.weight.to_string(),
                    "error": e,
                }),
            };
            if timings {
                v["seconds"] = serde_json::json!(c.seconds);
            }
            v
        })
        .collect();
    serde_json::Value::Array(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_shape() {
        let d = bundled();
        assert_eq!(d.len(), 1056);
        assert!(d.iter().all(|e| e.weight % 2 == 0 && (1..=8).contains(&e.table_id)));
        let find = |n, k| d.iter().find(|e| e.level == n && e.weight == k).map(|e| e.n0);
        assert_eq!(find(40, 2), Some(0));
        assert_eq!(find(40, 12), Some(7));
        assert_eq!(find(30, 14), Some(7));
        assert_eq!(find(225, 12), Some(7));
        assert_eq!(find(147, 14), None);
        let mut keys: Vec<_> = d.iter().map(|e| (e.level, e.weight)).collect();
        keys.dedup();
        assert_eq!(keys.len(), d.len());
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(parse_dataset("N,k,n0\n1,2,3\n").is_err());
        assert!(parse_dataset("N,k,n0,table_id\n1,x,3,1\n").is_err());
        assert_eq!(parse_dataset("N,k,n0,table_id\n").unwrap(), vec![]);
    }

    #[test]
    fn cost_measure() {
        assert_eq!(cell_cost(30, 14), 13 * 72);
        assert_eq!(cell_cost(1, 12), 11);
    }
}
