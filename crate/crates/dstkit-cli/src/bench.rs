//! Corpus benchmarking: solve every instance in a directory, compare
//! against the exact oracle where it fits, and summarise ratios and bound
//! violations. Instances run on a worker pool (`DSTKIT_THREADS` overrides
//! the width); a single writer merges results in input order.

use crate::format::InstanceFile;
use crate::records::RunRecord;
use dstkit::oracle::{exact_dst, OracleOutcome};
use dstkit::solver::{solve, SolveOptions, SolveOutcome};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub eps_num: u64,
    pub eps_den: u64,
    pub oracle_cap: usize,
    pub prune: bool,
    pub threads: usize,
}

#[derive(Debug, Clone, Default)]
pub struct BenchSummary {
    pub instances: usize,
    pub infeasible: usize,
    pub compared: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub bound_violations: usize,
    pub budget_violations: usize,
}

impl std::fmt::Display for BenchSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "instances: {}", self.instances)?;
        writeln!(f, "oracle comparisons: {}", self.compared)?;
        writeln!(f, "max ratio: {:.4}", self.max_ratio)?;
        writeln!(f, "mean ratio: {:.4}", self.mean_ratio)?;
        writeln!(f, "bound violations: {}", self.bound_violations)?;
        write!(f, "budget violations: {}", self.budget_violations)
    }
}

pub fn worker_count() -> usize {
    match std::env::var("DSTKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(t) if t >= 1 => t,
        _ => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    }
}

/// Runs one loaded instance and produces its record. Public so the
/// acceptance suite can reuse the exact benchmark semantics.
pub fn run_one(file: &InstanceFile, cfg: &BenchConfig) -> anyhow::Result<Option<RunRecord>> {
    let name = file.name.clone().unwrap_or_else(|| "unnamed".into());
    let seed = file.seed;
    let loaded = file.clone().load()?;
    let inst = &loaded.instance;
    let opts = SolveOptions {
        eps_num: cfg.eps_num,
        eps_den: cfg.eps_den,
        prune: cfg.prune,
        audit: false,
    };
    let start = Instant::now();
    let report = solve(inst, &opts)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let sol = match report.outcome {
        SolveOutcome::Solved(s) => s,
        SolveOutcome::Infeasible => return Ok(None),
    };
    let (oracle_cost, ratio) = if inst.terminals.len() <= cfg.oracle_cap {
        match exact_dst(inst, cfg.oracle_cap)? {
            OracleOutcome::Optimal(o) => {
                let ratio = if o.cost == 0 {
                    if sol.cost == 0 {
                        1.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    sol.cost as f64 / o.cost as f64
                };
                (Some(o.cost), Some(ratio))
            }
            OracleOutcome::Infeasible => (None, None),
        }
    } else {
        (None, None)
    };
    Ok(Some(RunRecord {
        instance: name,
        seed,
        epsilon: format!("{}/{}", cfg.eps_num, cfg.eps_den),
        k: inst.terminals.len(),
        r: inst.roots.len(),
        n: inst.graph.num_vertices(),
        m: inst.graph.num_edges(),
        approx_cost: sol.cost,
        oracle_cost,
        ratio,
        recursion_calls: report.stats.recursion_calls,
        ell: report.stats.ell,
        o: report.stats.o,
        wall_ms,
    }))
}

pub fn bench_dir(dir: &Path, cfg: &BenchConfig) -> anyhow::Result<(Vec<RunRecord>, BenchSummary)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "dsti"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        anyhow::bail!("no .dsti instances in {}", dir.display());
    }

    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<anyhow::Result<Option<RunRecord>>>>> =
        Mutex::new((0..paths.len()).map(|_| None).collect());
    let workers = worker_count().min(paths.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= paths.len() {
                    break;
                }
                let result = std::fs::read_to_string(&paths[i])
                    .map_err(anyhow::Error::from)
                    .and_then(|text| InstanceFile::parse(&text, None).map_err(anyhow::Error::from))
                    .and_then(|file| run_one(&file, cfg));
                slots.lock().unwrap()[i] = Some(result);
            });
        }
    });

    let mut records = Vec::new();
    let mut summary = BenchSummary::default();
    let mut ratio_sum = 0.0;
    for (i, slot) in slots.into_inner().unwrap().into_iter().enumerate() {
        match slot.expect("worker filled every slot") {
            Err(e) => anyhow::bail!("{}: {e}", paths[i].display()),
            Ok(None) => summary.infeasible += 1,
            Ok(Some(rec)) => {
                summary.instances += 1;
                if let Some(r) = rec.ratio {
                    summary.compared += 1;
                    summary.max_ratio = summary.max_ratio.max(r);
                    ratio_sum += r;
                    let bound = dstkit::oracle::approximation_bound(
                        rec.k,
                        rec.r,
                        cfg.eps_num,
                        cfg.eps_den,
                    );
                    if r > bound + 1e-9 {
                        summary.bound_violations += 1;
                    }
                }
                if !rec.within_call_budget() {
                    summary.budget_violations += 1;
                }
                records.push(rec);
            }
        }
    }
    if summary.compared > 0 {
        summary.mean_ratio = ratio_sum / summary.compared as f64;
    }
    Ok((records, summary))
}
