//! Minimum LP value over all filtered configurations, with incumbent pruning,
//! parallel chunks and an append-only checkpoint.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::configspace::{
    count_configurations, naive_upper_bound, traversal_lower_bound, ConfigSpace, Configuration, FilterOptions,
};
use crate::error::{EvacError, Result};
use crate::geometry::{make_polygon, PolygonGeometry};
use crate::lp::{build_lp_with_presets, solve_certified, LpStatus};

pub const CHUNK_SIZE: usize = 4096;
/// Configurations whose values differ by at most this are ties.
pub const TIE_TOL: f64 = 1e-10;
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundRecord {
    pub n: usize,
    pub k: usize,
    pub w: f64,
    pub lower_value: f64,
    pub raw_min: f64,
    pub argmin_config: Configuration,
    pub solved_count: u64,
    pub pruned_count: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub filters: FilterOptions,
    pub threads: usize,
    pub checkpoint: Option<PathBuf>,
    pub prune: bool,
    pub presets: bool,
    pub chunk_size: usize,
    pub budget: u128,
    /// Stop after this many new chunks (used to simulate an interrupted run).
    pub chunk_limit: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            filters: FilterOptions::all(),
            threads: default_threads(),
            checkpoint: None,
            prune: true,
            presets: false,
            chunk_size: CHUNK_SIZE,
            budget: DEFAULT_BUDGET,
            chunk_limit: None,
        }
    }
}

/// Thread count from `SOLVER_THREADS`, else the number of CPUs.
pub fn default_threads() -> usize {
    std::env::var("SOLVER_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Header {
    n: usize,
    k: usize,
    w: f64,
    filters: FilterOptions,
    chunk_size: usize,
    presets: bool,
}

#[derive(Debug, Clone)]
struct ChunkResult {
    lo: usize,
    hi: usize,
    best: Option<(f64, Configuration)>,
    solved: u64,
    pruned: u64,
}

#[derive(Debug, Deserialize)]
struct ChunkLine {
    chunk: [usize; 2],
    incumbent: f64,
    config: Option<String>,
    #[serde(default)]
    solved: u64,
    #[serde(default)]
    pruned: u64,
}

/// Better candidate under the tie rule: smaller value, ties to the smaller configuration.
fn better(a: &(f64, Configuration), b: &(f64, Configuration)) -> bool {
    if a.0 < b.0 - TIE_TOL {
        true
    } else if b.0 < a.0 - TIE_TOL {
        false
    } else {
        a.1 < b.1
    }
}

struct Incumbent(AtomicU64);

impl Incumbent {
    fn new(v: f64) -> Self {
        Incumbent(AtomicU64::new(v.to_bits()))
    }

    fn get(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Acquire))
    }

    fn lower_to(&self, v: f64) {
        let mut cur = self.0.load(Ordering::Acquire);
        while v < f64::from_bits(cur) {
            match self.0.compare_exchange_weak(cur, v.to_bits(), Ordering::AcqRel, Ordering::Acquire) {
                Ok(_) => break,
                Err(now) => cur = now,
            }
        }
    }
}

fn validate_problem(n: usize, k: usize, w: f64) -> Result<()> {
    if n < 3 {
        return Err(EvacError::InvalidPolygon(n));
    }
    if k < 1 {
        return Err(EvacError::InvalidInput("k must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&w) {
        return Err(EvacError::InvalidWeight(w));
    }
    if w > 0.0 && k != 1 {
        return Err(EvacError::UnsupportedWeightedK(k));
    }
    Ok(())
}

fn process_chunk(
    space: &ConfigSpace,
    g: &PolygonGeometry,
    w: f64,
    opts: &SearchOptions,
    incumbent: &Incumbent,
    lo: usize,
    hi: usize,
) -> Result<ChunkResult> {
    let mut res = ChunkResult { lo, hi, best: None, solved: 0, pruned: 0 };
    for i in lo..hi {
        let c = space.get(i);
        // Keep anything that could tie the incumbent so the tie rule sees it.
        if opts.prune && traversal_lower_bound(&c, g) > incumbent.get() + TIE_TOL {
            res.pruned += 1;
            continue;
        }
        let sol = solve_certified(&build_lp_with_presets(&c, g, w, opts.presets)?);
        if sol.status != LpStatus::Optimal {
            return Err(EvacError::NumericFailure(format!("{c}: status {:?}", sol.status)));
        }
        res.solved += 1;
        incumbent.lower_to(sol.value);
        let cand = (sol.value, c);
        if res.best.as_ref().map_or(true, |b| better(&cand, b)) {
            res.best = Some(cand);
        }
    }
    Ok(res)
}

fn write_line(file: &Mutex<File>, v: &serde_json::Value) -> Result<()> {
    let mut f = file.lock().expect("checkpoint writer poisoned");
    writeln!(f, "{v}")?;
    f.flush()?;
    Ok(())
}

fn read_checkpoint(path: &Path) -> Result<(Header, Vec<ChunkResult>)> {
    let file = File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let first = lines
        .next()
        .ok_or_else(|| EvacError::CheckpointParse("empty checkpoint".into()))??;
    let header: Header =
        serde_json::from_str(&first).map_err(|e| EvacError::CheckpointParse(format!("header: {e}")))?;
    let mut chunks = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ChunkLine =
            serde_json::from_str(&line).map_err(|e| EvacError::CheckpointParse(format!("{e}: {line}")))?;
        let best = match rec.config {
            Some(text) => Some((rec.incumbent, text.parse::<Configuration>()?)),
            None => None,
        };
        chunks.push(ChunkResult { lo: rec.chunk[0], hi: rec.chunk[1], best, solved: rec.solved, pruned: rec.pruned });
    }
    Ok((header, chunks))
}

/// Runs (or continues) the search. Returns `None` if `chunk_limit` stopped it early.
pub fn search(n: usize, k: usize, w: f64, opts: &SearchOptions) -> Result<Option<BoundRecord>> {
    validate_problem(n, k, w)?;
    let count = count_configurations(n, k, opts.filters);
    if count > opts.budget {
        return Err(EvacError::BudgetExceeded { count, budget: opts.budget });
    }
    let start = Instant::now();
    let g = make_polygon(n)?;
    let header = Header { n, k, w, filters: opts.filters, chunk_size: opts.chunk_size, presets: opts.presets };

    let mut done: Vec<ChunkResult> = Vec::new();
    let mut writer = None;
    if let Some(path) = &opts.checkpoint {
        if path.exists() && std::fs::metadata(path)?.len() > 0 {
            let (h, chunks) = read_checkpoint(path)?;
            if h != header {
                return Err(EvacError::CheckpointMismatch(format!(
                    "checkpoint is for {}, requested {}",
                    serde_json::to_string(&h).unwrap_or_default(),
                    serde_json::to_string(&header).unwrap_or_default()
                )));
            }
            done = chunks;
            writer = Some(OpenOptions::new().append(true).open(path)?);
        } else {
            let mut f = File::create(path)?;
            writeln!(f, "{}", serde_json::to_string(&header).expect("header serializes"))?;
            writer = Some(f);
        }
    }
    let writer = writer.map(Mutex::new);

    let space = ConfigSpace::new(n, k, opts.filters);
    let total = space.len();
    let mut completed = vec![false; total.div_ceil(opts.chunk_size)];
    for c in &done {
        if c.lo % opts.chunk_size != 0 || c.lo >= total {
            return Err(EvacError::CheckpointParse(format!("chunk [{}, {}] not on the grid", c.lo, c.hi)));
        }
        completed[c.lo / opts.chunk_size] = true;
    }
    let mut todo: Vec<usize> = (0..completed.len()).filter(|&i| !completed[i]).collect();
    let limited = opts.chunk_limit.is_some_and(|l| l < todo.len());
    if let Some(l) = opts.chunk_limit {
        todo.truncate(l);
    }

    let mut start_value = naive_upper_bound(n, k, &g);
    for c in &done {
        if let Some((v, _)) = &c.best {
            start_value = start_value.min(*v);
        }
    }
    let incumbent = Incumbent::new(start_value);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.max(1))
        .build()
        .map_err(|e| EvacError::InvalidInput(format!("thread pool: {e}")))?;
    let fresh: Vec<ChunkResult> = pool.install(|| {
        todo.par_iter()
            .map(|&ci| {
                let lo = ci * opts.chunk_size;
                let hi = (lo + opts.chunk_size).min(total);
                let r = process_chunk(&space, &g, w, opts, &incumbent, lo, hi)?;
                if let Some(f) = &writer {
                    let line = match &r.best {
                        Some((v, c)) => json!({"chunk": [lo, hi], "incumbent": v, "config": c.to_string(),
                                               "solved": r.solved, "pruned": r.pruned}),
                        None => json!({"chunk": [lo, hi], "incumbent": incumbent.get(), "config": null,
                                       "solved": r.solved, "pruned": r.pruned}),
                    };
                    write_line(f, &line)?;
                }
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    if limited {
        return Ok(None);
    }
    done.extend(fresh);
    Ok(Some(finish(n, k, w, &done, start.elapsed())?))
}

fn finish(n: usize, k: usize, w: f64, chunks: &[ChunkResult], wall: Duration) -> Result<BoundRecord> {
    let raw_min = chunks
        .iter()
        .filter_map(|c| c.best.as_ref().map(|b| b.0))
        .fold(f64::INFINITY, f64::min);
    let argmin = chunks
        .iter()
        .filter_map(|c| c.best.as_ref())
        .filter(|b| b.0 <= raw_min + TIE_TOL)
        .map(|b| &b.1)
        .min()
        .cloned()
        .ok_or_else(|| EvacError::NumericFailure("no configuration was solved".into()))?;
    Ok(BoundRecord {
        n,
        k,
        w,
        lower_value: raw_min.max(1.0),
        raw_min,
        argmin_config: argmin,
        solved_count: chunks.iter().map(|c| c.solved).sum(),
        pruned_count: chunks.iter().map(|c| c.pruned).sum(),
        wall_time: wall,
    })
}

pub fn min_over_configs(
    n: usize,
    k: usize,
    w: f64,
    filters: FilterOptions,
    threads: usize,
    checkpoint_path: Option<&Path>,
) -> Result<BoundRecord> {
    let opts = SearchOptions {
        filters,
        threads,
        checkpoint: checkpoint_path.map(Path::to_path_buf),
        ..SearchOptions::default()
    };
    Ok(search(n, k, w, &opts)?.expect("no chunk limit set"))
}

/// Continues the run recorded in `path` with the settings stored in its header.
pub fn resume(path: &Path, threads: usize) -> Result<BoundRecord> {
    let (h, _) = read_checkpoint(path)?;
    let opts = SearchOptions {
        filters: h.filters,
        threads,
        checkpoint: Some(path.to_path_buf()),
        presets: h.presets,
        chunk_size: h.chunk_size,
        budget: u128::MAX,
        ..SearchOptions::default()
    };
    Ok(search(h.n, h.k, h.w, &opts)?.expect("no chunk limit set"))
}

/// Like [`resume`], but fails unless the checkpoint is for `(n, k, w)`.
pub fn resume_expecting(path: &Path, n: usize, k: usize, w: f64, threads: usize) -> Result<BoundRecord> {
    let (h, _) = read_checkpoint(path)?;
    if h.n != n || h.k != k || h.w != w {
        return Err(EvacError::CheckpointMismatch(format!(
            "checkpoint is for n={} k={} w={}, requested n={n} k={k} w={w}",
            h.n, h.k, h.w
        )));
    }
    resume(path, threads)
}

/// Grid `from, from + step, ...` up to `to` (inclusive, with rounding slack).
pub fn w_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&from) || !(0.0..=1.0).contains(&to) || from > to || !(step > 0.0) {
        return Err(EvacError::InvalidInput(format!("bad grid from={from} to={to} step={step}")));
    }
    let mut out = Vec::new();
    let mut m = 0usize;
    loop {
        let w = from + m as f64 * step;
        if w > to + 1e-12 {
            break;
        }
        out.push(w.min(to).min(1.0));
        m += 1;
    }
    Ok(out)
}

pub fn w_sweep(n: usize, w_start: f64, w_end: f64, w_step: f64, opts: &SearchOptions) -> Result<Vec<BoundRecord>> {
    w_grid(w_start, w_end, w_step)?
        .into_iter()
        .map(|w| {
            let mut o = opts.clone();
            o.checkpoint = None;
            o.chunk_limit = None;
            Ok(search(n, 1, w, &o)?.expect("no chunk limit set"))
        })
        .collect()
}
