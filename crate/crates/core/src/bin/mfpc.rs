use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};

use mfpc::bench::{self, BenchConfig, BenchError, Method};
use mfpc::generate::{self, CapacityRegime, GenParams};
use mfpc::greedy::DEFAULT_RESTARTS;
use mfpc::{build_model, export_lp, serialize_instance, serialize_solution};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "mfpc", version, about = "Maximum flow with arc conflicts: generate, solve, verify, export, bench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one instance.
    Generate {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        arc_density: f64,
        #[arg(long)]
        conflict_density: f64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        capacity_regime: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate the 160-instance grid into a directory.
    GenerateGrid {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Solve one instance and print a result row.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "bnb")]
        method: String,
        /// Seconds.
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: u32,
        /// Write the best assignment as a solution file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a solution file against an instance.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Write the MILP model in LP format.
    Export {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run methods over instance files and write a CSV table.
    Bench {
        #[arg(required = true)]
        instances: Vec<PathBuf>,
        /// Comma-separated: bnb, brute, greedy, maxflow-relax.
        #[arg(long = "method", alias = "methods", default_value = "bnb,greedy")]
        methods: String,
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: u32,
        /// CSV output; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Gap table against best-known bounds.
        #[arg(long)]
        gaps_out: Option<PathBuf>,
        /// CSV with `instance_id,bk_lb,bk_ub`; defaults to the best bounds of this run.
        #[arg(long)]
        best_known: Option<PathBuf>,
        /// Directory for one witness solution file per row.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::UnknownMethod(_) => Failure::Usage(e.to_string()),
            other => Failure::Io(other.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl Fn(io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(io_err(p)),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn time_limit(seconds: f64) -> Result<Duration, Failure> {
    if seconds.is_finite() && seconds > 0.0 {
        Ok(Duration::from_secs_f64(seconds))
    } else {
        Err(Failure::Usage(format!("--time-limit must be positive, got {seconds}")))
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Generate { nodes, arc_density, conflict_density, capacity_regime, seed, out } => {
            let regime = CapacityRegime::from_index(capacity_regime).expect("range-checked by clap");
            let params = GenParams { nodes, arc_density, conflict_density, regime, seed };
            let off = params.off_grid();
            if !off.is_empty() {
                eprintln!("warning: {} outside the standard grid", off.join(", "));
            }
            let inst = generate::generate(&params).map_err(|e| Failure::Usage(e.to_string()))?;
            fs::write(&out, serialize_instance(&inst)).map_err(io_err(&out))?;
            eprintln!("wrote {} (n={} m={} w={})", out.display(), inst.node_count(), inst.arc_count(), inst.conflict_count());
        }
        Command::GenerateGrid { seed, out_dir } => {
            fs::create_dir_all(&out_dir).map_err(io_err(&out_dir))?;
            let mut count = 0;
            for item in generate::grid(seed) {
                let (params, inst) = item.map_err(|e| Failure::Io(e.to_string()))?;
                let path = out_dir.join(params.file_name());
                fs::write(&path, serialize_instance(&inst)).map_err(io_err(&path))?;
                count += 1;
            }
            eprintln!("wrote {count} instances to {}", out_dir.display());
        }
        Command::Solve { instance, method, time_limit: secs, node_limit, seed, restarts, out } => {
            let method: Method = method.parse()?;
            let config = BenchConfig { time_limit: time_limit(secs)?, node_limit, seed, restarts };
            let inst = bench::read_instance(&instance)?;
            let mut runs = bench::bench_instance(&bench::instance_id(&instance), &inst, &[method], &config)?;
            let run = runs.pop().expect("one method, one run");
            if let Some(path) = out {
                fs::write(&path, serialize_solution(&run.witness)).map_err(io_err(&path))?;
            }
            bench::write_csv([&run.record], io::stdout())?;
        }
        Command::Verify { instance, solution } => {
            let report = bench::verify(&instance, &solution)?;
            println!("total {}", report.total);
            if report.verdict.is_ok() {
                println!("feasible");
            } else {
                println!("infeasible: {} violation(s)", report.verdict.violations.len());
                for v in &report.verdict.violations {
                    println!("  {v}");
                }
                return Ok(EXIT_VIOLATION);
            }
        }
        Command::Export { instance, out } => {
            let inst = bench::read_instance(&instance)?;
            write_output(out.as_deref(), &export_lp(&build_model(&inst)))?;
        }
        Command::Bench {
            instances,
            methods,
            time_limit: secs,
            node_limit,
            seed,
            restarts,
            out,
            gaps_out,
            best_known,
            witness_dir,
        } => {
            let methods = bench::parse_methods(&methods)?;
            let config = BenchConfig { time_limit: time_limit(secs)?, node_limit, seed, restarts };
            let runs = bench::run_bench(&instances, &methods, &config)?;
            let records: Vec<_> = runs.iter().map(|r| r.record.clone()).collect();
            match &out {
                Some(path) => {
                    let file = fs::File::create(path).map_err(io_err(path))?;
                    bench::write_csv(&records, file)?;
                }
                None => bench::write_csv(&records, io::stdout())?,
            }
            if let Some(dir) = witness_dir {
                fs::create_dir_all(&dir).map_err(io_err(&dir))?;
                for run in &runs {
                    let path = dir.join(format!("{}.{}.sol", run.record.instance_id, run.record.method));
                    fs::write(&path, serialize_solution(&run.witness)).map_err(io_err(&path))?;
                }
            }
            if let Some(path) = gaps_out {
                let bk = match best_known {
                    Some(p) => bench::read_best_known(&p)?,
                    None => bench::best_known_from(&records),
                };
                let file = fs::File::create(&path).map_err(io_err(&path))?;
                bench::write_gaps(&records, &bk, file)?;
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
