use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cpw_core::decomp::first_disconnected_prefix;
use cpw_core::dp::StepStats;
use cpw_core::search::{mces_with, mcns_with};
use cpw_core::{
    compute_cpw_with, decide_cpw_with, exact_pathwidth, format_decomposition, format_graph, oracle_cpw,
    parse_decomposition, parse_graph, validate, Graph, Options, PathDecomposition, VertexSet,
};
use rand::{Rng, SeedableRng};

/// Exact connected pathwidth of small graphs.
///
/// Graphs use the `p <n> <m>` / `e <u> <v>` edge-list format, decompositions
/// one bag per line; vertex ids are 1-based in both.
#[derive(Parser)]
#[command(name = "cpw", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Is there a connected path-decomposition of width at most W?
    Decide {
        #[command(flatten)]
        input: Input,
        #[arg(short, long)]
        width: usize,
        /// Write the witness here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Per-phase table sizes as TSV on stderr.
        #[arg(long)]
        trace: bool,
        /// Answer with the dynamic program alone, skipping the bound shortcuts.
        #[arg(long)]
        dp_only: bool,
    },
    /// Smallest feasible width.
    Compute {
        #[command(flatten)]
        input: Input,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Print the monotone connected node search number instead.
        #[arg(long, conflicts_with = "mces")]
        mcns: bool,
        /// Print the monotone connected edge search number instead.
        #[arg(long)]
        mces: bool,
        #[arg(long)]
        dp_only: bool,
    },
    /// Brute-force answer (at most 15 vertices).
    Oracle {
        graph: PathBuf,
        #[arg(short, long)]
        width: usize,
    },
    /// Validate a decomposition and test whether it is connected.
    Check {
        graph: PathBuf,
        #[arg(short, long)]
        decomposition: PathBuf,
    },
    /// Random connected graph: a random spanning tree plus G(n, p) edges.
    Gen {
        #[arg(short)]
        n: usize,
        #[arg(short, default_value_t = 0.2)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Input {
    graph: PathBuf,
    /// Path-decomposition to run the dynamic program on; by default one of
    /// minimum width is computed.
    #[arg(short, long)]
    decomposition: Option<PathBuf>,
}

type Res<T> = Result<T, String>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_graph(path: &Path) -> Res<Graph> {
    let parsed = parse_graph(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    if parsed.duplicate_edges > 0 {
        eprintln!("warning: {} duplicate edges ignored", parsed.duplicate_edges);
    }
    Ok(parsed.graph)
}

fn load_connected(path: &Path) -> Res<Graph> {
    let g = load_graph(path)?;
    if g.n() == 0 {
        return Err("graph has no vertices".into());
    }
    if !g.is_connected() {
        return Err("graph must be connected".into());
    }
    Ok(g)
}

fn load_decomposition(path: &Path) -> Res<PathDecomposition> {
    parse_decomposition(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Res<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn options(dp_only: bool) -> Options {
    let base = Options::default();
    if dp_only {
        Options { trivial_bound: false, lower_bound: false, upper_bound: false, ..base }
    } else {
        base
    }
}

fn print_trace(trace: &[StepStats]) {
    eprintln!("{}", StepStats::TSV_HEADER);
    for s in trace {
        eprintln!("{}", s.tsv());
    }
}

fn run(cmd: Cmd) -> Res<bool> {
    match cmd {
        Cmd::Decide { input, width, out, trace, dp_only } => {
            let g = load_connected(&input.graph)?;
            let q = match &input.decomposition {
                Some(p) => load_decomposition(p)?,
                None => exact_pathwidth(&g).map_err(|e| e.to_string())?.1,
            };
            let opts = Options { trace, ..options(dp_only) };
            let d = decide_cpw_with(&g, &q, width, &opts).map_err(|e| e.to_string())?;
            if trace {
                print_trace(&d.trace);
            }
            match d.witness {
                Some(wit) => {
                    println!("YES");
                    emit(&format_decomposition(&wit.decomposition), out.as_deref())?;
                    Ok(true)
                }
                None => {
                    println!("NO");
                    Ok(false)
                }
            }
        }
        Cmd::Compute { input, out, mcns, mces, dp_only } => {
            let g = load_connected(&input.graph)?;
            let q = input.decomposition.as_deref().map(load_decomposition).transpose()?;
            let opts = options(dp_only);
            if mcns {
                println!("mcns = {}", mcns_with(&g, &opts).map_err(|e| e.to_string())?);
            } else if mces {
                println!("mces = {}", mces_with(&g, &opts).map_err(|e| e.to_string())?);
            } else {
                let (k, wit) = compute_cpw_with(&g, q.as_ref(), &opts).map_err(|e| e.to_string())?;
                println!("cpw = {k}");
                emit(&format_decomposition(&wit.decomposition), out.as_deref())?;
            }
            Ok(true)
        }
        Cmd::Oracle { graph, width } => {
            let g = load_connected(&graph)?;
            let yes = oracle_cpw(&g, width).map_err(|e| e.to_string())?;
            println!("{}", if yes { "YES" } else { "NO" });
            Ok(yes)
        }
        Cmd::Check { graph, decomposition } => {
            let g = load_graph(&graph)?;
            let p = load_decomposition(&decomposition)?;
            let width = validate(&g, &p).map_err(|e| format!("invalid decomposition: {e}"))?;
            match first_disconnected_prefix(&g, &p, &VertexSet::new()) {
                None => {
                    println!("OK width={width} connected");
                    Ok(true)
                }
                Some(i) => {
                    println!("OK width={width} NOT connected at prefix {}", i + 1);
                    Ok(false)
                }
            }
        }
        Cmd::Gen { n, p, seed } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("edge probability {p} is not in [0, 1]"));
            }
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut g = Graph::new(n);
            for v in 1..n {
                g.add_edge(rng.gen_range(0..v), v).map_err(|e| e.to_string())?;
            }
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v).map_err(|e| e.to_string())?;
                    }
                }
            }
            print!("{}", format_graph(&g));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
