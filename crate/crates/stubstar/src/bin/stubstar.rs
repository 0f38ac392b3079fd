//! Command-line front end: decide/construct/count over instance files, NMR
//! peak ingestion, benchmark sweeps, and the degree-test diagnostic.
//!
//! Exit codes: 0 feasible, 1 infeasible, 2 usage/parse/internal error, 3
//! undecided (connected-simple instances whose merge heuristic got stuck).

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use stubstar::assembler::{realize, relabel_to_instance, verify_realization, Realization};
use stubstar::bench;
use stubstar::feasibility::{
    build_system, enumerate_all, solve_first, visit_all, Encoding, LinearSystem,
};
use stubstar::feasibility::validate::eg_divergence_report;
use stubstar::model::{GraphClass, Instance};
use stubstar::nmr;

#[derive(Parser)]
#[command(name = "stubstar", version, about = "Feasibility and reconstruction for degree + neighbor-degree-sum instances")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether an instance is realizable in a graph class.
    Decide {
        class: ClassArg,
        /// Instance file ("d f" per line, '#' comments; "-" for stdin).
        file: PathBuf,
        #[command(flatten)]
        sys: SysOpts,
    },
    /// Decide and print a realization as an edge list (or DOT).
    Construct {
        class: ClassArg,
        file: PathBuf,
        /// Emit Graphviz DOT instead of edge-list lines.
        #[arg(long)]
        dot: bool,
        /// Skip the self-check against the instance before printing.
        #[arg(long)]
        no_verify: bool,
        #[command(flatten)]
        sys: SysOpts,
    },
    /// Count distinct stub-star ensembles realizing the instance.
    Count {
        class: ClassArg,
        file: PathBuf,
        /// Stop counting after this many ensembles and report ">= cap".
        #[arg(long)]
        cap: Option<u64>,
        #[command(flatten)]
        sys: SysOpts,
    },
    /// Digest an NMR peak table ("k l count" per line) into an instance.
    Nmr {
        file: PathBuf,
        /// Chemical formula CnHm; notes when m = 2n+2 forces a tree.
        #[arg(long)]
        formula: Option<String>,
        /// Also decide feasibility for this class.
        #[arg(long, value_enum)]
        decide: Option<ClassArg>,
        #[command(flatten)]
        sys: SysOpts,
    },
    /// Benchmark sweeps over random degree-bounded trees (CSV on stdout).
    Bench {
        #[command(subcommand)]
        mode: BenchCmd,
    },
    /// Diagnostics.
    Diag {
        #[command(subcommand)]
        what: DiagCmd,
    },
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Wall time from system build to a verified tree realization.
    Time {
        /// Size sweep A..B:S (inclusive, step S).
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Number of distinct ensembles per random tree instance.
    Count {
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stop each enumeration at this many ensembles.
        #[arg(long)]
        cap: Option<u64>,
    },
}

#[derive(Subcommand)]
enum DiagCmd {
    /// Compare the encoded degree-test rows against the classical test.
    Eg {
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        delta: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct SysOpts {
    /// Constraint encoding for the class-specific rows.
    #[arg(long, value_enum, default_value_t = EncodingArg::Semantic)]
    encoding: EncodingArg,
    /// Override the degree bound (defaults to the max degree in the file).
    #[arg(long)]
    delta: Option<u32>,
    /// Write the system in LP format to this file before solving.
    #[arg(long, value_name = "FILE")]
    dump_lp: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ClassArg {
    Multigraph,
    Loopless,
    Simple,
    ConnectedSimple,
    Forest,
    Tree,
    Caterpillar,
}

impl From<ClassArg> for GraphClass {
    fn from(c: ClassArg) -> GraphClass {
        match c {
            ClassArg::Multigraph => GraphClass::Multigraph,
            ClassArg::Loopless => GraphClass::LooplessMultigraph,
            ClassArg::Simple => GraphClass::Simple,
            ClassArg::ConnectedSimple => GraphClass::ConnectedSimple,
            ClassArg::Forest => GraphClass::Forest,
            ClassArg::Tree => GraphClass::Tree,
            ClassArg::Caterpillar => GraphClass::Caterpillar,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum EncodingArg {
    Semantic,
    Bigm,
}

impl From<EncodingArg> for Encoding {
    fn from(e: EncodingArg) -> Encoding {
        match e {
            EncodingArg::Semantic => Encoding::Semantic,
            EncodingArg::Bigm => Encoding::BigM,
        }
    }
}

const EXIT_FEASIBLE: u8 = 0;
const EXIT_INFEASIBLE: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;

/// How many ensembles the connected-simple search tries to assemble before
/// giving up and reporting UNKNOWN.
const CONNECT_ATTEMPTS: usize = 32;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.cmd {
        Cmd::Decide { class, file, sys } => {
            let inst = load_instance(&file, sys.delta)?;
            decide(&inst, class.into(), &sys).map(|(code, word, _)| {
                println!("{word}");
                code
            })
        }
        Cmd::Construct { class, file, dot, no_verify, sys } => {
            construct(&file, class.into(), dot, !no_verify, &sys)
        }
        Cmd::Count { class, file, cap, sys } => {
            let inst = load_instance(&file, sys.delta)?;
            let system = prepared_system(&inst, class.into(), &sys)?;
            let out = enumerate_all(&system, cap);
            if out.truncated {
                println!(">= {}", out.ensembles.len());
            } else {
                println!("{}", out.ensembles.len());
            }
            Ok(if out.ensembles.is_empty() { EXIT_INFEASIBLE } else { EXIT_FEASIBLE })
        }
        Cmd::Nmr { file, formula, decide: cls, sys } => {
            let text = read_input(&file)?;
            let peaks = nmr::parse_peaks(&text).map_err(|e| e.to_string())?;
            let inst = nmr::nmr_to_instance(&peaks).map_err(|e| e.to_string())?;
            if let Some(f) = formula {
                let parsed = nmr::parse_formula(&f).map_err(|e| e.to_string())?;
                if parsed.carbons != inst.n() as u64 {
                    return Err(format!(
                        "formula has {} carbons but the peak table digests to {}",
                        parsed.carbons,
                        inst.n()
                    ));
                }
                if parsed.is_saturated_acyclic() {
                    println!("# {f}: saturated acyclic, the skeleton is a tree");
                } else {
                    println!("# {f}: not of the form CnH(2n+2), the skeleton is not a tree");
                }
            }
            print!("{}", inst.to_text());
            match cls {
                Some(c) => decide(&inst, c.into(), &sys).map(|(code, word, _)| {
                    println!("{word}");
                    code
                }),
                None => Ok(EXIT_FEASIBLE),
            }
        }
        Cmd::Bench { mode } => {
            match mode {
                BenchCmd::Time { sizes, trials, seed } => {
                    let range = bench::parse_sizes(&sizes)?;
                    println!("{}", bench::CSV_HEADER);
                    for rec in bench::bench_time(&range.sizes(), trials, seed) {
                        println!("{}", rec.csv_line());
                    }
                }
                BenchCmd::Count { sizes, trials, seed, cap } => {
                    let range = bench::parse_sizes(&sizes)?;
                    println!("{}", bench::CSV_HEADER);
                    for rec in bench::bench_count(&range.sizes(), trials, seed, cap) {
                        println!("{}", rec.csv_line());
                    }
                }
            }
            Ok(EXIT_FEASIBLE)
        }
        Cmd::Diag { what } => {
            let DiagCmd::Eg { samples, delta, seed } = what;
            print!("{}", eg_divergence_report(samples, delta, seed));
            Ok(EXIT_FEASIBLE)
        }
    }
}

fn read_input(path: &Path) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))
    }
}

fn load_instance(path: &Path, delta: Option<u32>) -> Result<Instance, String> {
    let text = read_input(path)?;
    let inst = Instance::parse_text(&text).map_err(|e| e.to_string())?;
    match delta {
        Some(d) => inst.with_delta(d).map_err(|e| e.to_string()),
        None => Ok(inst),
    }
}

fn prepared_system(inst: &Instance, cls: GraphClass, sys: &SysOpts) -> Result<LinearSystem, String> {
    let system = build_system(inst, cls, sys.encoding.into()).map_err(|e| e.to_string())?;
    if let Some(path) = &sys.dump_lp {
        fs::write(path, system.to_lp_text()).map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    Ok(system)
}

/// Shared decide logic. Returns (exit code, verdict word, witness graph).
/// The witness is only produced when a realization was actually assembled
/// (always for connected-simple FEASIBLE, never for INFEASIBLE).
fn decide(
    inst: &Instance,
    cls: GraphClass,
    sys: &SysOpts,
) -> Result<(u8, &'static str, Option<stubstar::LabeledGraph>), String> {
    let system = prepared_system(inst, cls, sys)?;
    if cls != GraphClass::ConnectedSimple {
        return Ok(match solve_first(&system) {
            Some(_) => (EXIT_FEASIBLE, "FEASIBLE", None),
            None => (EXIT_INFEASIBLE, "INFEASIBLE", None),
        });
    }
    // Connected-simple: the system plus edge-count precheck is necessary but
    // not sufficient; try to assemble a connected witness from the first few
    // ensembles and admit ignorance otherwise.
    let mut witness = None;
    let mut saw_any = false;
    let mut tried = 0usize;
    visit_all(&system, true, |a| {
        saw_any = true;
        tried += 1;
        let e = system.ensemble_of(a);
        if let Ok(Realization::Complete(g)) = realize(&e, cls) {
            witness = Some(g);
            return false;
        }
        tried < CONNECT_ATTEMPTS
    });
    Ok(match (witness, saw_any) {
        (Some(g), _) => (EXIT_FEASIBLE, "FEASIBLE", Some(g)),
        (None, false) => (EXIT_INFEASIBLE, "INFEASIBLE", None),
        (None, true) => (EXIT_UNDECIDED, "UNKNOWN", None),
    })
}

fn construct(path: &Path, cls: GraphClass, dot: bool, verify: bool, sys: &SysOpts) -> Result<u8, String> {
    let inst = load_instance(path, sys.delta)?;
    let (code, word, witness) = decide(&inst, cls, sys)?;
    println!("{word}");
    if code != EXIT_FEASIBLE {
        return Ok(code);
    }
    let graph = match witness {
        Some(g) => g,
        None => {
            let system = prepared_system(&inst, cls, sys)?;
            let a = solve_first(&system).ok_or("solver lost a known-feasible instance")?;
            let e = system.ensemble_of(&a);
            realize(&e, cls).map_err(|err| err.to_string())?.into_graph()
        }
    };
    let graph = relabel_to_instance(&graph, &inst)
        .ok_or("realization does not match the instance profile")?;
    if verify {
        let report = verify_realization(&graph, &inst, cls);
        if !report.ok {
            return Err(format!("self-check failed: {}", report.problems.join("; ")));
        }
    }
    if dot {
        print!("{}", graph.to_dot());
    } else {
        print!("{}", graph.to_edge_list());
    }
    Ok(EXIT_FEASIBLE)
}
