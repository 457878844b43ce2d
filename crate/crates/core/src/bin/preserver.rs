use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cspdp::bench::{bench, report_lines};
use cspdp::generate::{gen_grid, gen_random, RandomSpec};
use cspdp::hardness::{generate_cspdp, random_maxrep};
use cspdp::io::{
    parse_manifest, parse_maxrep, read_instance, verify_solution_file, write_instance, write_maxrep, SolutionFile,
};
use cspdp::reduction::undirected_to_directed;
use cspdp::{solve, Algorithm, Error, SolveOptions};

const EXIT_INFEASIBLE: u8 = 2;

#[derive(Parser)]
#[command(name = "preserver", version, about = "Cost-sharing pairwise distance preservers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Reduce an undirected instance to a directed one.
    Reduce {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Solve an instance and write a solution file.
    Solve(SolveArgs),
    /// Re-verify a solution file against an instance.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Run algorithms over the instances listed in a manifest.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    Random {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long)]
        pairs: usize,
        #[arg(long, default_value_t = 1)]
        min_weight: u64,
        #[arg(long, default_value_t = 10)]
        max_weight: u64,
        #[arg(long)]
        undirected: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Maxrep {
        #[arg(long, required_unless_present = "from")]
        k: Option<usize>,
        #[arg(long, required_unless_present = "from")]
        part_size: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Explicit bipartite edge list instead of a random one.
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        layout: Option<PathBuf>,
        /// Also write the MAX-REP edge list.
        #[arg(long)]
        maxrep_out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Oracle,
    Thick,
    Thin,
    Main,
}

impl From<AlgArg> for Algorithm {
    fn from(a: AlgArg) -> Self {
        match a {
            AlgArg::Oracle => Algorithm::Oracle,
            AlgArg::Thick => Algorithm::Thick,
            AlgArg::Thin => Algorithm::Thin,
            AlgArg::Main => Algorithm::Main,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "main")]
    alg: AlgArg,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, default_value_t = 32)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    manifest: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "thick,thin,main")]
    alg: Vec<AlgArg>,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, default_value_t = 32)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    /// Compare against the exact optimum.
    #[arg(long)]
    oracle: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Gen(gen) => run_gen(gen),
        Command::Reduce { input, output, map } => {
            let instance = read_instance(&input, 0.5)?;
            let (reduced, mapping) = undirected_to_directed(&instance)?;
            fs::write(output, write_instance(&reduced))?;
            fs::write(map, mapping.to_text())?;
            Ok(0)
        }
        Command::Solve(args) => {
            let instance = read_instance(&args.input, args.epsilon)?;
            let algorithm = Algorithm::from(args.alg);
            let options = SolveOptions {
                trials: args.trials,
                seed: args.seed,
                cap: args.cap,
            };
            let (solution, trace) = solve(&instance, algorithm, options)?;
            let file = SolutionFile::new(&instance, &solution, algorithm.name(), args.seed, args.trials);
            emit(args.output.as_deref(), &file.to_text())?;
            if let (Some(path), Some(trace)) = (args.trace, trace) {
                let mut text = String::new();
                for record in &trace.iterations {
                    text += &serde_json::to_string(record).expect("trace serializes");
                    text.push('\n');
                }
                text += &serde_json::json!({
                    "patched_pairs": trace.patched_pairs,
                    "final_objective": trace.final_objective,
                    "iteration_cap": trace.iteration_cap,
                    "hit_cap": trace.hit_cap,
                })
                .to_string();
                text.push('\n');
                fs::write(path, text)?;
            }
            if !file.feasible {
                log::error!("solution does not preserve every pair distance");
                return Ok(EXIT_INFEASIBLE);
            }
            Ok(0)
        }
        Command::Verify { instance, solution } => {
            let file = SolutionFile::parse(&fs::read_to_string(&solution)?)?;
            let epsilon = if file.epsilon > 0.0 && file.epsilon < 1.0 { file.epsilon } else { 0.5 };
            let instance = read_instance(&instance, epsilon)?;
            let report = verify_solution_file(&instance, &file)?;
            println!(
                "hash {} feasible {} objective {} (stated {})",
                if report.hash_matches { "ok" } else { "mismatch" },
                report.feasible,
                report.recomputed_objective,
                file.objective
            );
            if !report.feasible {
                return Ok(EXIT_INFEASIBLE);
            }
            if !report.ok() {
                return Err(Error::Validation("solution file does not match the instance".into()));
            }
            Ok(0)
        }
        Command::Bench(args) => {
            let text = fs::read_to_string(&args.manifest)?;
            let base = args.manifest.parent().map(Path::to_path_buf).unwrap_or_default();
            let mut instances = Vec::new();
            for entry in parse_manifest(&text) {
                let path = base.join(&entry);
                match read_instance(&path, args.epsilon) {
                    Ok(inst) => instances.push((entry, inst)),
                    Err(e) => log::error!("skipping {entry}: {e}"),
                }
            }
            let algorithms: Vec<Algorithm> = args.alg.into_iter().map(Algorithm::from).collect();
            let options = SolveOptions {
                trials: args.trials,
                seed: args.seed,
                cap: args.cap,
            };
            let rows = bench(&instances, &algorithms, options, args.oracle);
            emit(args.output.as_deref(), &report_lines(&rows))?;
            if rows.iter().any(|r| r.feasible == Some(false)) {
                return Ok(EXIT_INFEASIBLE);
            }
            Ok(0)
        }
    }
}

fn run_gen(gen: GenCommand) -> Result<u8, Error> {
    match gen {
        GenCommand::Random {
            nodes,
            edges,
            pairs,
            min_weight,
            max_weight,
            undirected,
            seed,
            output,
        } => {
            let instance = gen_random(RandomSpec {
                nodes,
                edges,
                pairs,
                min_weight,
                max_weight,
                directed: !undirected,
                epsilon: 0.5,
                seed,
            })?;
            emit(output.as_deref(), &write_instance(&instance))?;
        }
        GenCommand::Grid {
            rows,
            cols,
            pairs,
            seed,
            output,
        } => {
            let instance = gen_grid(rows, cols, pairs, 0.5, seed)?;
            emit(output.as_deref(), &write_instance(&instance))?;
        }
        GenCommand::Maxrep {
            k,
            part_size,
            density,
            seed,
            from,
            output,
            layout,
            maxrep_out,
        } => {
            let maxrep = match from {
                Some(path) => parse_maxrep(&fs::read_to_string(path)?)?,
                None => random_maxrep(k.unwrap_or(1), part_size.unwrap_or(1), density, seed)?,
            };
            let (instance, gadget) = generate_cspdp(&maxrep, 0.5)?;
            emit(output.as_deref(), &write_instance(&instance))?;
            if let Some(path) = layout {
                fs::write(path, gadget.to_text())?;
            }
            if let Some(path) = maxrep_out {
                fs::write(path, write_maxrep(&maxrep))?;
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
