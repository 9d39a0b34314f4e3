//! Acceptance suite. Each criterion is one test that prints a PASS line
//! with its measured numbers (run with `--nocapture` to see them).
//!
//! Criteria 1-4 and 6-8 share one solved corpus: several hundred generated
//! grid instances, solved with auditing on and compared against the exact
//! oracle. Criterion 5 cross-checks the two oracles, and criterion 9 runs
//! the big performance instance in a subprocess so its footprint can be
//! watched from outside.

use dstkit::oracle::{brute_force_dst, exact_dst, OracleOutcome};
use dstkit::solver::{scale_costs, solve, Instance, ScaleOutcome, SolveOptions, SolveOutcome, SolveStats};
use dstkit::paths::dijkstra;
use dstkit_cli::format::InstanceFile;
use dstkit_cli::generate::{generate, GenParams, GridStyle};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

const EPS: (u64, u64) = (1, 2);
const ORACLE_CAP: usize = 12;

struct Run {
    name: String,
    k: usize,
    r: usize,
    opt: u64,
    cost: u64,
    stats: SolveStats,
    instance: Instance,
}

struct Corpus {
    single: Vec<Run>,
    multi: Vec<Run>,
    single_wall: Duration,
}

fn gen_params(seed: u64, n: usize, k: usize, roots: usize) -> GenParams {
    GenParams {
        seed,
        n,
        k,
        roots,
        cost_lo: 1,
        cost_hi: 20,
        style: GridStyle::GridDiagonals,
        name: None,
    }
}

fn solve_and_compare(file: &InstanceFile) -> Run {
    let loaded = file.clone().load().expect("generated instances load");
    let opts = SolveOptions { eps_num: EPS.0, eps_den: EPS.1, prune: false, audit: true };
    let report = solve(&loaded.instance, &opts).expect("well-formed instance");
    let sol = match report.outcome {
        SolveOutcome::Solved(s) => s,
        SolveOutcome::Infeasible => panic!("generator guarantees feasibility"),
    };
    assert!(loaded.instance.is_feasible_edge_set(&sol.edges));
    let opt = match exact_dst(&loaded.instance, ORACLE_CAP).expect("within cap") {
        OracleOutcome::Optimal(o) => o.cost,
        OracleOutcome::Infeasible => panic!("feasible by construction"),
    };
    Run {
        name: file.name.clone().unwrap_or_default(),
        k: loaded.instance.terminals.len(),
        r: loaded.instance.roots.len(),
        opt,
        cost: sol.cost,
        stats: report.stats,
        instance: loaded.instance,
    }
}

fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let start = Instant::now();
        let mut single = Vec::new();
        for &n in &[36usize, 49, 64, 81, 100, 120] {
            for &k in &[2usize, 4, 8] {
                for seed in 0..12u64 {
                    let file = generate(&gen_params(seed * 31 + n as u64 + k as u64, n, k, 1))
                        .expect("valid parameters");
                    single.push(solve_and_compare(&file));
                }
            }
        }
        let single_wall = start.elapsed();
        let mut multi = Vec::new();
        for &r in &[2usize, 3] {
            for &k in &[3usize, 5, 6] {
                for &n in &[49usize, 81, 120] {
                    for seed in 0..6u64 {
                        let file =
                            generate(&gen_params(seed * 17 + (n + k + r) as u64, n, k, r))
                                .expect("valid parameters");
                        multi.push(solve_and_compare(&file));
                    }
                }
            }
        }
        Corpus { single, multi, single_wall }
    })
}

fn ceil_log2(x: u64) -> u64 {
    debug_assert!(x > 0);
    64 - (x - 1).leading_zeros() as u64
}

#[test]
fn criterion_1_single_root_approximation_bound() {
    let c = corpus();
    assert!(c.single.len() >= 200, "need at least 200 single-root instances");
    let mut violations = 0usize;
    let mut max_ratio = 0f64;
    for run in &c.single {
        // cost <= (6(ceil(log2 k) + 1) + 1) * (1 + eps) * opt, checked in
        // exact integers: 2 * cost <= 3 * bound * opt for eps = 1/2.
        let bound = 6 * (ceil_log2(run.k as u64) + 1) + 1;
        if 2 * run.cost > 3 * bound * run.opt {
            violations += 1;
        }
        if run.opt > 0 {
            max_ratio = max_ratio.max(run.cost as f64 / run.opt as f64);
        }
    }
    assert_eq!(violations, 0, "approximation bound violated");
    assert!(
        c.single_wall < Duration::from_secs(300),
        "single-root sweep took {:?}",
        c.single_wall
    );
    println!(
        "criterion 1: PASS - {} instances, zero violations, max ratio {:.3}, sweep {:?}",
        c.single.len(),
        max_ratio,
        c.single_wall
    );
}

#[test]
fn criterion_2_multi_rooted_approximation_bound() {
    let c = corpus();
    assert!(c.multi.len() >= 100, "need at least 100 multi-rooted instances");
    let mut violations = 0usize;
    let mut max_ratio = 0f64;
    for run in &c.multi {
        let bound = 8 * (run.r as u64 + ceil_log2(run.k as u64) + 1) + 1;
        if 2 * run.cost > 3 * bound * run.opt {
            violations += 1;
        }
        if run.opt > 0 {
            max_ratio = max_ratio.max(run.cost as f64 / run.opt as f64);
        }
    }
    assert_eq!(violations, 0, "multi-rooted bound violated");
    println!(
        "criterion 2: PASS - {} instances, zero violations, max ratio {:.3}",
        c.multi.len(),
        max_ratio
    );
}

#[test]
fn criterion_3_separator_balance_and_path_costs() {
    let c = corpus();
    let all = c.single.iter().chain(&c.multi);
    let mut calls = 0u64;
    let mut balance = 0u64;
    let mut path_checks = 0u64;
    let mut path_mismatches = 0u64;
    let mut marks = 0u64;
    let mut halving = 0u64;
    for run in all {
        calls += run.stats.separator_calls;
        balance += run.stats.balance_violations;
        path_checks += run.stats.path_cost_checks;
        path_mismatches += run.stats.path_cost_mismatches;
        marks += run.stats.mark_violations;
        halving += run.stats.halving_violations;
    }
    assert!(calls >= 1000, "only {calls} separator invocations logged");
    assert_eq!(balance, 0, "a component kept more than half the weight");
    assert_eq!(path_mismatches, 0, "a purchased path cost differs from its distance");
    assert!(path_checks > 0);
    assert_eq!(marks, 0, "a subtree used more than 4 marked targets");
    assert_eq!(halving, 0, "a subinstance kept more than half the terminals");
    println!(
        "criterion 3: PASS - {calls} separator calls audited, {path_checks} path-cost checks, zero violations"
    );
}

#[test]
fn criterion_4_recursion_budget() {
    let c = corpus();
    let mut worst = 0f64;
    for run in c.single.iter().chain(&c.multi) {
        let cap = run.stats.call_cap(run.k);
        assert!(
            (run.stats.recursion_calls as u128) <= cap,
            "{}: {} calls over cap {}",
            run.name,
            run.stats.recursion_calls,
            cap
        );
        worst = worst.max(run.stats.recursion_calls as f64 / cap as f64);
    }
    println!(
        "criterion 4: PASS - every run within k*2^(2l+o); worst utilisation {:.2e}",
        worst
    );
}

#[test]
fn criterion_5_oracle_consistency() {
    // 500 random instances with at most 16 edges: 3x3 plain grids have 12.
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 500 {
        seed += 1;
        let k = 1 + (seed % 3) as usize;
        let r = 1 + (seed % 2) as usize;
        let params = GenParams { style: GridStyle::Grid, ..gen_params(seed, 9, k, r) };
        let file = generate(&params).expect("valid parameters");
        let loaded = file.load().expect("loads");
        assert!(loaded.instance.graph.num_edges() <= 16);
        let a = exact_dst(&loaded.instance, ORACLE_CAP).expect("within cap");
        let b = brute_force_dst(&loaded.instance).expect("within edge cap");
        assert_eq!(a.cost(), b.cost(), "oracle mismatch at seed {seed}");
        checked += 1;
    }
    println!("criterion 5: PASS - exact_dst == brute_force_dst on {checked} instances");
}

#[test]
fn criterion_6_merge_cost_identities() {
    let c = corpus();
    let mut checks = 0u64;
    let mut violations = 0u64;
    for run in c.single.iter().chain(&c.multi) {
        checks += run.stats.merge_checks;
        violations += run.stats.merge_violations;
    }
    assert!(checks > 0, "no merges were traced");
    assert_eq!(violations, 0, "cost(merged) != cost(T\\F) + sum(sub costs) somewhere");
    println!("criterion 6: PASS - {checks} merges with exact integer cost identity");
}

#[test]
fn criterion_7_scaling_preserves_guarantees() {
    let c = corpus();
    let mut checked = 0;
    let mut tight_violations = 0usize;
    for run in c.single.iter().chain(&c.multi).take(100) {
        // (a) Post-scaling distances stay within n k / eps + n.
        match scale_costs(&run.instance, EPS.0, EPS.1).expect("scaling succeeds") {
            ScaleOutcome::Scaled(scaled, _) => {
                let table = dijkstra(&scaled.graph, &scaled.roots).unwrap();
                let n = run.instance.graph.num_vertices() as u128;
                let k = run.instance.terminals.len() as u128;
                for v in scaled.graph.vertices() {
                    if let Some(d) = table.dist(v) {
                        assert!(
                            d as u128 * EPS.0 as u128 <= n * k * EPS.1 as u128 + n * EPS.0 as u128,
                            "scaled distance above n k / eps + n"
                        );
                    }
                }
            }
            ScaleOutcome::ZeroCost(_) | ScaleOutcome::Infeasible => {}
        }
        // (b) Scaled-then-recosted solving stays within the (1 + eps)
        // inflation of the tight factor against the original-cost optimum.
        let ell = ceil_log2(run.k as u64);
        let alpha = if run.r == 1 { 6 * ell + 1 } else { 8 * (run.r as u64 + ell) + 1 };
        if 2 * run.cost > 3 * alpha * run.opt {
            tight_violations += 1;
        }
        checked += 1;
    }
    assert_eq!(checked, 100);
    assert_eq!(tight_violations, 0);
    println!("criterion 7: PASS - 100 instances, distances bounded, (1+eps) chain holds");
}

#[test]
fn criterion_8_embedding_integrity() {
    let c = corpus();
    let mut validations = 0u64;
    let mut failures = 0u64;
    for run in c.single.iter().chain(&c.multi) {
        validations += run.stats.embedding_validations;
        failures += run.stats.embedding_failures;
    }
    assert!(validations > 10_000, "only {validations} embeddings were validated");
    assert_eq!(failures, 0, "an operation produced an invalid embedding");

    // Generation and subdivision round out the operation coverage.
    let mut extra = 0u64;
    for seed in 0..25u64 {
        let file = generate(&gen_params(seed, 49, 4, 1)).unwrap();
        let loaded = file.load().unwrap();
        loaded.instance.graph.validate_embedding().expect("generated embedding valid");
        extra += 1;
        let node_costs: std::collections::BTreeMap<_, _> = loaded
            .instance
            .graph
            .vertices()
            .filter(|v| !loaded.instance.roots.contains(v) && !loaded.instance.terminals.contains(v))
            .take(5)
            .map(|v| (v, seed % 7))
            .collect();
        let reduced = dstkit::solver::node_weighted_reduction(
            &loaded.instance.graph,
            &node_costs,
            loaded.instance.roots.clone(),
            loaded.instance.terminals.clone(),
        )
        .unwrap();
        reduced.graph.validate_embedding().expect("subdivided embedding valid");
        extra += 1;
    }
    println!(
        "criterion 8: PASS - {} embeddings validated in-recursion, {extra} more from generation/subdivision, zero failures",
        validations
    );
}

#[test]
fn criterion_9_performance_at_ten_thousand_vertices() {
    // Heavy shared work first so the subprocess is not co-scheduled with it.
    let _ = corpus();

    let dir = std::env::temp_dir().join(format!("dstkit-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let inst_path = dir.join("big.dsti");
    let sol_path = dir.join("big.dsts");
    let file = generate(&gen_params(9, 10_000, 256, 1)).unwrap();
    std::fs::write(&inst_path, file.emit()).unwrap();

    let start = Instant::now();
    let mut child = std::process::Command::new(env!("CARGO_BIN_EXE_dstkit"))
        .args(["solve"])
        .arg(&inst_path)
        .arg("--out")
        .arg(&sol_path)
        .stderr(std::process::Stdio::null())
        .spawn()
        .expect("solver binary runs");
    let pid = child.id();
    let mut peak_kb = 0u64;
    let status = loop {
        match child.try_wait().unwrap() {
            Some(status) => break status,
            None => {
                // This kernel exposes VmRSS but no high-water mark; sample
                // the resident size and keep the maximum seen.
                if let Ok(s) = std::fs::read_to_string(format!("/proc/{pid}/status")) {
                    for line in s.lines() {
                        if let Some(v) = line.strip_prefix("VmRSS:") {
                            let kb: u64 =
                                v.trim().trim_end_matches("kB").trim().parse().unwrap_or(0);
                            peak_kb = peak_kb.max(kb);
                        }
                    }
                }
                std::thread::sleep(Duration::from_millis(20));
            }
        }
    };
    let wall = start.elapsed();
    assert!(status.success(), "big solve failed");
    assert!(wall < Duration::from_secs(60), "took {wall:?}, budget is 60 s");
    assert!(peak_kb > 0, "memory sampling saw no VmRSS readings");
    assert!(peak_kb < 2 * 1024 * 1024, "peak memory {peak_kb} kB over 2 GB");

    // Feasibility of the produced solution, checked independently.
    let sol = dstkit_cli::format::SolutionFile::parse(&std::fs::read_to_string(&sol_path).unwrap())
        .unwrap();
    let loaded = InstanceFile::parse(&std::fs::read_to_string(&inst_path).unwrap(), None)
        .unwrap()
        .load()
        .unwrap();
    let cost = dstkit_cli::verify::verify_solution(&loaded, &sol).expect("feasible");
    let _ = std::fs::remove_dir_all(&dir);
    println!(
        "criterion 9: PASS - n=10000 k=256 solved in {wall:?}, peak {:.0} MB, cost {cost}",
        peak_kb as f64 / 1024.0
    );
}
