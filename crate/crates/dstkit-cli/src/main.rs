use clap::{Parser, Subcommand};
use dstkit::oracle::{exact_dst, OracleOutcome};
use dstkit::solver::{solve, SolveOptions, SolveOutcome};
use dstkit_cli::bench::{bench_dir, worker_count, BenchConfig};
use dstkit_cli::draw::render_svg;
use dstkit_cli::format::{InstanceFile, SolutionFile};
use dstkit_cli::generate::{generate, GenParams, GridStyle};
use dstkit_cli::records::{to_csv, to_json, RunRecord};
use dstkit_cli::verify::verify_solution;
use dstkit_cli::parse_epsilon;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "dstkit", version, about = "Directed Steiner tree toolkit for planar graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random embedded planar instance.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of vertices.
        #[arg(long)]
        n: usize,
        /// Number of terminals.
        #[arg(long)]
        k: usize,
        /// Number of roots.
        #[arg(long, default_value_t = 1)]
        roots: usize,
        #[arg(long, default_value_t = 1)]
        cost_lo: u64,
        #[arg(long, default_value_t = 20)]
        cost_hi: u64,
        /// grid or grid-diagonals.
        #[arg(long, default_value = "grid-diagonals")]
        style: String,
        #[arg(long)]
        name: Option<String>,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance and write a solution file.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "1/2")]
        epsilon: String,
        /// Remove removable edges from the solution afterwards.
        #[arg(long)]
        prune: bool,
        /// Accept fractional costs with this many decimals (scaled by 10^P).
        #[arg(long, value_name = "P")]
        fixed_point: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the run record as JSON here.
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Solve an instance exactly with the subset dynamic program.
    Exact {
        instance: PathBuf,
        #[arg(long, default_value_t = dstkit::oracle::DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
        #[arg(long, value_name = "P")]
        fixed_point: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a solution file against its instance.
    Verify {
        instance: PathBuf,
        solution: PathBuf,
        #[arg(long, value_name = "P")]
        fixed_point: Option<u32>,
    },
    /// Solve every .dsti instance in a directory and summarise.
    Bench {
        dir: PathBuf,
        #[arg(long, default_value = "1/2")]
        epsilon: String,
        #[arg(long, default_value_t = dstkit::oracle::DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
        #[arg(long)]
        prune: bool,
        /// csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render an instance (and optionally a solution) as SVG.
    Draw {
        instance: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

// Exit codes: 2 parse/format, 3 infeasible or failed verification, 4 bad
// parameters, 1 anything else.
struct CmdError {
    code: u8,
    kind: &'static str,
    msg: String,
}

impl CmdError {
    fn new(code: u8, kind: &'static str, msg: impl ToString) -> Self {
        CmdError { code, kind, msg: msg.to_string() }
    }
}

type CmdResult = Result<(), CmdError>;

fn read(path: &PathBuf) -> Result<String, CmdError> {
    std::fs::read_to_string(path)
        .map_err(|e| CmdError::new(2, "IO", format!("{}: {e}", path.display())))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> CmdResult {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CmdError::new(2, "IO", format!("{}: {e}", p.display()))),
    }
}

fn load_instance(path: &PathBuf, fixed_point: Option<u32>) -> Result<dstkit_cli::format::LoadedInstance, CmdError> {
    let text = read(path)?;
    InstanceFile::parse(&text, fixed_point)
        .map_err(|e| CmdError::new(2, "PARSE", e))?
        .load()
        .map_err(|e| CmdError::new(2, "PARSE", e))
}

fn run(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::Gen { seed, n, k, roots, cost_lo, cost_hi, style, name, out } => {
            let style: GridStyle =
                style.parse().map_err(|e: String| CmdError::new(4, "PARAMS", e))?;
            let params = GenParams { seed, n, k, roots, cost_lo, cost_hi, style, name };
            let file = generate(&params).map_err(|e| CmdError::new(4, "PARAMS", e))?;
            write_out(&out, &file.emit())
        }
        Cmd::Solve { instance, epsilon, prune, fixed_point, out, record } => {
            let (eps_num, eps_den) =
                parse_epsilon(&epsilon).map_err(|e| CmdError::new(4, "PARAMS", e))?;
            let loaded = load_instance(&instance, fixed_point)?;
            let opts = SolveOptions { eps_num, eps_den, prune, audit: false };
            let start = Instant::now();
            let report = solve(&loaded.instance, &opts)
                .map_err(|e| CmdError::new(1, "SOLVE", e))?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let sol = match report.outcome {
                SolveOutcome::Infeasible => {
                    return Err(CmdError::new(3, "INFEASIBLE", "some terminal is unreachable"))
                }
                SolveOutcome::Solved(s) => s,
            };
            eprintln!(
                "solved: cost {} ({} edges, {} recursion calls, {:.1} ms)",
                sol.cost,
                sol.edges.len(),
                report.stats.recursion_calls,
                wall_ms
            );
            if let Some(rec_path) = record {
                let rec = RunRecord {
                    instance: loaded.file.name.clone().unwrap_or_else(|| "unnamed".into()),
                    seed: loaded.file.seed,
                    epsilon: format!("{eps_num}/{eps_den}"),
                    k: loaded.instance.terminals.len(),
                    r: loaded.instance.roots.len(),
                    n: loaded.instance.graph.num_vertices(),
                    m: loaded.instance.graph.num_edges(),
                    approx_cost: sol.cost,
                    oracle_cost: None,
                    ratio: None,
                    recursion_calls: report.stats.recursion_calls,
                    ell: report.stats.ell,
                    o: report.stats.o,
                    wall_ms,
                };
                std::fs::write(&rec_path, to_json(&[rec]))
                    .map_err(|e| CmdError::new(2, "IO", e))?;
            }
            let file = SolutionFile::from_solution(loaded.file.name.as_deref(), &sol);
            write_out(&out, &file.emit())
        }
        Cmd::Exact { instance, oracle_cap, fixed_point, out } => {
            let loaded = load_instance(&instance, fixed_point)?;
            let outcome = exact_dst(&loaded.instance, oracle_cap)
                .map_err(|e| CmdError::new(4, "ORACLE", e))?;
            match outcome {
                OracleOutcome::Infeasible => {
                    Err(CmdError::new(3, "INFEASIBLE", "some terminal is unreachable"))
                }
                OracleOutcome::Optimal(sol) => {
                    eprintln!("optimum: cost {} ({} edges)", sol.cost, sol.edges.len());
                    let file = SolutionFile::from_solution(loaded.file.name.as_deref(), &sol);
                    write_out(&out, &file.emit())
                }
            }
        }
        Cmd::Verify { instance, solution, fixed_point } => {
            let loaded = load_instance(&instance, fixed_point)?;
            let sol_text = read(&solution)?;
            let sol = SolutionFile::parse(&sol_text).map_err(|e| CmdError::new(2, "PARSE", e))?;
            match verify_solution(&loaded, &sol) {
                Ok(cost) => {
                    println!("ok: feasible, cost {cost}");
                    Ok(())
                }
                Err(e) => Err(CmdError::new(3, "VERIFY", e)),
            }
        }
        Cmd::Bench { dir, epsilon, oracle_cap, prune, format, out } => {
            let (eps_num, eps_den) =
                parse_epsilon(&epsilon).map_err(|e| CmdError::new(4, "PARAMS", e))?;
            let cfg = BenchConfig { eps_num, eps_den, oracle_cap, prune, threads: worker_count() };
            let (records, summary) =
                bench_dir(&dir, &cfg).map_err(|e| CmdError::new(1, "BENCH", e))?;
            let text = match format.as_str() {
                "csv" => to_csv(&records),
                "json" => to_json(&records),
                other => return Err(CmdError::new(4, "PARAMS", format!("unknown format {other:?}"))),
            };
            write_out(&out, &text)?;
            eprintln!("{summary}");
            if summary.bound_violations > 0 || summary.budget_violations > 0 {
                return Err(CmdError::new(3, "BOUND", "violations detected"));
            }
            Ok(())
        }
        Cmd::Draw { instance, solution, out } => {
            let text = read(&instance)?;
            let file = InstanceFile::parse(&text, None).map_err(|e| CmdError::new(2, "PARSE", e))?;
            let sol = match solution {
                None => None,
                Some(p) => {
                    let t = read(&p)?;
                    Some(SolutionFile::parse(&t).map_err(|e| CmdError::new(2, "PARSE", e))?)
                }
            };
            let svg = render_svg(&file, sol.as_ref()).map_err(|e| CmdError::new(4, "DRAW", e))?;
            write_out(&out, &svg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error {}: {}", e.kind, e.msg);
            ExitCode::from(e.code)
        }
    }
}
