use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use evac_core::configspace::{Configuration, FilterOptions};
use evac_core::geometry::make_polygon;
use evac_core::lp::config_lp_value;
use evac_core::reductions::{best_disk_bound, disk_lower_bound, wdisk_lower_bound};
use evac_core::report::reference::{argmin_row, DISK_TABLE};
use evac_core::report::{
    emit_curve, parse_report_csv, recheck, report_csv, verify, CurveFormat, CurveKind, CurvePoint, Suite,
};
use evac_core::search::{default_threads, search, w_grid, BoundRecord, SearchOptions, DEFAULT_BUDGET};
use evac_core::upperbounds::export::{parse_trajectory_csv, trajectory_csv, trajectory_polylines};
use evac_core::upperbounds::optimize::DEFAULT_BUDGET as OPT_BUDGET;
use evac_core::upperbounds::{
    evaluate_trajectory, known_configuration, local_minimax_optimize, ub_for, Trajectory, UbMethod,
};
use evac_core::EvacError;

#[derive(Parser)]
#[command(name = "evac", version, about = "Bounds for priority evacuation from a regular n-gon")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Catalog,
    Optimize,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Trajectory,
    Table,
    Curve,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lower bound by enumerating every configuration
    Lb {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.0)]
        w: f64,
        /// Worker threads (default: SOLVER_THREADS or the CPU count)
        #[arg(long)]
        threads: Option<usize>,
        /// JSONL checkpoint; an existing file is resumed
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Enumerate without symmetry filters
        #[arg(long)]
        no_filters: bool,
        /// Refuse runs with more configurations than this
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// LP value of one configuration
    LbConfig {
        /// e.g. "n=5 k=1 rho=1,4,5,3,2 s=1,0,1,0,0"
        #[arg(long)]
        config: String,
        #[arg(long, default_value_t = 0.0)]
        w: f64,
    },
    /// Upper bound from a feasible trajectory
    Ub {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.0)]
        w: f64,
        #[arg(long, value_enum, default_value_t = Method::Catalog)]
        method: Method,
        /// Trajectory CSV to start the optimizer from
        #[arg(long)]
        seed: Option<PathBuf>,
        /// Write the trajectory CSV here (and polylines next to it)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Disk lower bounds from polygon lower bounds
    DiskLb {
        #[arg(long)]
        k: usize,
        /// Polygon sizes (default: every tabulated n for this k)
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        /// Enumerate configurations instead of solving the tabulated minimizer
        #[arg(long)]
        enumerate: bool,
    },
    /// Weighted lower, disk and upper curves over a grid of w
    Wsweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        step: f64,
        /// Also compute optimizer upper bounds on this coarser grid
        #[arg(long)]
        ub_step: Option<f64>,
        /// Write the curve here (.json for JSON, otherwise CSV)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check computed values against the embedded reference tables
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::Fast)]
        suite: SuiteArg,
        /// Re-check an exported table instead of recomputing
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Write a trajectory, verification table or curve to a file
    Export {
        #[arg(long, value_enum)]
        what: What,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        w: f64,
        #[arg(long, value_enum, default_value_t = Method::Catalog)]
        method: Method,
        #[arg(long, value_enum, default_value_t = SuiteArg::Fast)]
        suite: SuiteArg,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        ub_step: Option<f64>,
    },
}

/// Exit status: 1 for failed verification or solver failure, 2 for bad input.
enum Failure {
    Verification(String),
    Usage(String),
    Solver(String),
}

impl From<EvacError> for Failure {
    fn from(e: EvacError) -> Self {
        match e {
            EvacError::InvalidPolygon(_)
            | EvacError::IndexOutOfRange { .. }
            | EvacError::InvalidConfiguration(_)
            | EvacError::UnsupportedWeightedK(_)
            | EvacError::InvalidWeight(_)
            | EvacError::InvalidInput(_)
            | EvacError::CheckpointMismatch(_)
            | EvacError::NoKnownConfiguration { .. } => Failure::Usage(e.to_string()),
            EvacError::BudgetExceeded { .. } => {
                Failure::Usage(format!("{e}; raise --budget to run it anyway"))
            }
            _ => Failure::Solver(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn num(x: f64) -> String {
    format!("{x:.10}")
}

fn threads(t: Option<usize>) -> usize {
    t.unwrap_or_else(default_threads).max(1)
}

fn print_record(r: &BoundRecord, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(r).expect("record serializes"));
        return;
    }
    println!("n={} k={} w={}", r.n, r.k, r.w);
    println!("lower_value {}", num(r.lower_value));
    println!("raw_min {}", num(r.raw_min));
    println!("argmin {}", r.argmin_config);
    println!("solved {} pruned {} wall {:.2}s", r.solved_count, r.pruned_count, r.wall_time.as_secs_f64());
}

fn lower_record(n: usize, k: usize, w: f64, opts: &SearchOptions) -> Result<BoundRecord, Failure> {
    search(n, k, w, opts)?.ok_or_else(|| Failure::Solver("search stopped early".into()))
}

fn write_trajectory(tr: &Trajectory, out: &Path) -> CmdResult {
    std::fs::write(out, trajectory_csv(tr)).map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
    let lines = polyline_path(out);
    std::fs::write(&lines, trajectory_polylines(tr)).map_err(|e| Failure::Usage(format!("{}: {e}", lines.display())))?;
    println!("wrote {} and {}", out.display(), lines.display());
    Ok(())
}

/// `traj.csv` → `traj.polylines.csv`.
fn polyline_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("trajectory");
    out.with_file_name(format!("{stem}.polylines.csv"))
}

fn upper(n: usize, k: usize, w: f64, method: Method, seed: Option<&Path>) -> Result<(f64, Trajectory), Failure> {
    match (method, seed) {
        (Method::Catalog, Some(_)) => Err(Failure::Usage("--seed needs --method optimize".into())),
        (Method::Catalog, None) => Ok(ub_for(n, k, w, UbMethod::Catalog)?),
        (Method::Optimize, None) => Ok(ub_for(n, k, w, UbMethod::Optimize)?),
        (Method::Optimize, Some(path)) => {
            let c = known_configuration(n, k, w)?;
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let seed = parse_trajectory_csv(&text, &c)?;
            let g = make_polygon(n)?;
            let tr = local_minimax_optimize(&c, &g, w, Some(&seed), OPT_BUDGET)?;
            Ok((evaluate_trajectory(&tr, &g, w)?.worst_case, tr))
        }
    }
}

fn sweep(n: usize, from: f64, to: f64, step: f64, ub_step: Option<f64>, t: usize) -> Result<Vec<CurvePoint>, Failure> {
    let opts = SearchOptions { threads: t, ..SearchOptions::default() };
    let mut points = Vec::new();
    for w in w_grid(from, to, step)? {
        let r = lower_record(n, 1, w, &opts)?;
        points.push(CurvePoint::from(&r));
        points.push(CurvePoint::from(&wdisk_lower_bound(n, w, r.lower_value)?));
    }
    if let Some(s) = ub_step {
        for w in w_grid(from, to, s)? {
            let (v, _) = ub_for(n, 1, w, UbMethod::Optimize)?;
            points.push(CurvePoint { w, value: v, kind: CurveKind::Upper, n });
        }
    }
    Ok(points)
}

fn suite(s: SuiteArg) -> Suite {
    match s {
        SuiteArg::Fast => Suite::Fast,
        SuiteArg::Full => Suite::Full,
    }
}

fn run(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Lb { n, k, w, threads: t, checkpoint, no_filters, budget, json } => {
            let opts = SearchOptions {
                filters: if no_filters { FilterOptions::none() } else { FilterOptions::all() },
                threads: threads(t),
                checkpoint,
                budget,
                ..SearchOptions::default()
            };
            print_record(&lower_record(n, k, w, &opts)?, json);
        }
        Cmd::LbConfig { config, w } => {
            let c: Configuration = config.parse()?;
            let g = make_polygon(c.n)?;
            println!("{}", num(config_lp_value(&c, &g, w, false)?));
        }
        Cmd::Ub { n, k, w, method, seed, out } => {
            let (v, tr) = upper(n, k, w, method, seed.as_deref())?;
            println!("value {}", num(v));
            println!("config {}", tr.config);
            if let Some(out) = out {
                write_trajectory(&tr, &out)?;
            }
        }
        Cmd::DiskLb { k, n_list, enumerate } => {
            let ns = n_list.unwrap_or_else(|| DISK_TABLE.iter().filter(|e| e.k == k).map(|e| e.n).collect());
            let mut records = Vec::new();
            for n in ns {
                let polygon = if enumerate {
                    lower_record(n, k, 0.0, &SearchOptions::default())?
                } else {
                    let row = argmin_row(n, k).ok_or_else(|| {
                        Failure::Usage(format!("no tabulated minimizer for n={n} k={k}; use --enumerate"))
                    })?;
                    let c = Configuration::new(n, k, row.rho.to_vec(), row.s.to_vec())?;
                    let v = config_lp_value(&c, &make_polygon(n)?, 0.0, false)?;
                    BoundRecord {
                        n,
                        k,
                        w: 0.0,
                        lower_value: v.max(1.0),
                        raw_min: v,
                        argmin_config: c,
                        solved_count: 1,
                        pruned_count: 0,
                        wall_time: Default::default(),
                    }
                };
                let d = disk_lower_bound(n, k, polygon.lower_value)?;
                println!("n={n} k={k} polygon {} disk {}", num(d.polygon_lower), num(d.disk_lower));
                records.push(polygon);
            }
            let best = best_disk_bound(&records, k)?;
            println!("best n={} disk {}", best.n, num(best.disk_lower));
        }
        Cmd::Wsweep { n, from, to, step, ub_step, out, threads: t } => {
            let points = sweep(n, from, to, step, ub_step, threads(t))?;
            match out {
                Some(path) => {
                    emit_curve(&points, CurveFormat::for_path(&path), &path)?;
                    println!("wrote {} points to {}", points.len(), path.display());
                }
                None => print!("{}", evac_core::report::emit::curve_csv(&points)),
            }
        }
        Cmd::Verify { suite: s, table, json } => {
            let report = match &table {
                None => verify(suite(s)),
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    let stored = parse_report_csv(&text)?;
                    let fresh = recheck(&stored);
                    if let Some(c) = stored.checks.iter().zip(&fresh.checks).find(|(a, b)| a.pass != b.pass) {
                        println!("{}", fresh.to_text());
                        return Err(Failure::Verification(format!("stored pass flag of {} disagrees", c.0.id())));
                    }
                    fresh
                }
            };
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if !report.ok() {
                let ids: Vec<String> = report.unexpected_failures().map(|c| c.id()).collect();
                return Err(Failure::Verification(format!("failed: {}", ids.join(", "))));
            }
        }
        Cmd::Export { what, out, n, k, w, method, suite: s, from, to, step, ub_step } => match what {
            What::Trajectory => {
                let (n, k) = n.zip(k).ok_or_else(|| Failure::Usage("trajectory export needs --n and --k".into()))?;
                let (v, tr) = upper(n, k, w, method, None)?;
                println!("value {}", num(v));
                write_trajectory(&tr, &out)?;
            }
            What::Table => {
                let report = verify(suite(s));
                std::fs::write(&out, report_csv(&report))
                    .map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
                println!("wrote {} checks to {}", report.checks.len(), out.display());
            }
            What::Curve => {
                let (Some(n), Some(from), Some(to), Some(step)) = (n, from, to, step) else {
                    return Err(Failure::Usage("curve export needs --n --from --to --step".into()));
                };
                let points = sweep(n, from, to, step, ub_step, default_threads())?;
                emit_curve(&points, CurveFormat::for_path(&out), &out)?;
                println!("wrote {} points to {}", points.len(), out.display());
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) | Err(Failure::Solver(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
