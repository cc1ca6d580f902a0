//! Command-line front end.
//!
//! Exit codes: 0 yes or agreement, 1 no, 2 unknown (search budget exhausted), 3 input
//! error, 4 failed internal construction check.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use icchord::chord::{dilation, is_greedy_path, is_increasing_chord, is_self_approaching, Direction};
use icchord::cnf::{brute_force_sat, parse_dimacs, CnfInstance};
use icchord::drawing::Drawing;
use icchord::gadget::{build_gadget, coordinate_bits, extract_assignment, GadgetOptions, MIN_GADGET_ALPHA};
use icchord::io::{parse_id_list, read_drawing, read_tree, write_drawing, write_tree};
use icchord::reduction::{assignment_from_tree, build_arrangement, build_gamma, witness_tree_from_assignment};
use icchord::roundtrip::{roundtrip, RoundtripSummary};
use icchord::search::{
    find_ic_path, find_ic_rooted_spanning_tree, verify_ic_rooted_tree, SearchOutcome, DEFAULT_PATH_BUDGET,
    DEFAULT_TREE_BUDGET,
};
use icchord::svg::{render_svg, RenderOptions};
use icchord::Error;

#[derive(Parser)]
#[command(name = "icchord", version, about = "Increasing-chord paths, trees and reduction gadgets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Input file (drawing or DIMACS CNF, depending on the command).
    #[arg(long, short)]
    input: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether a vertex path of a drawing is increasing-chord.
    VerifyPath {
        #[command(flatten)]
        io: Io,
        /// Vertex ids, comma separated.
        #[arg(long)]
        path: String,
    },
    /// Search an increasing-chord path between two vertices (ids or role tags).
    FindPath {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = DEFAULT_PATH_BUDGET)]
        budget: u64,
    },
    /// Search an increasing-chord spanning tree rooted at a vertex.
    FindTree {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value = "root")]
        root: String,
        #[arg(long, default_value_t = DEFAULT_TREE_BUDGET)]
        budget: u64,
    },
    /// Check a tree file against a drawing.
    VerifyTree {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        tree: PathBuf,
    },
    /// Build the spanning-tree reduction drawing of a CNF file.
    Reduce {
        #[command(flatten)]
        io: Io,
    },
    /// Write the witness tree of the first satisfying assignment of a CNF file.
    Witness {
        #[command(flatten)]
        io: Io,
    },
    /// Read an assignment off a tree of the reduction drawing (`--input` is the CNF) or
    /// off a path of the path gadget (`--input` is the gadget drawing).
    Extract {
        #[command(flatten)]
        io: Io,
        #[arg(long, conflicts_with = "path", required_unless_present = "path")]
        tree: Option<PathBuf>,
        #[arg(long)]
        path: Option<String>,
    },
    /// Build the path gadget of a CNF file and search a path between its outer terminals.
    GadgetPath {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = DEFAULT_PATH_BUDGET)]
        budget: u64,
        /// Lift the default size cap.
        #[arg(long)]
        no_cap: bool,
        /// Also write the gadget drawing here.
        #[arg(long)]
        drawing: Option<PathBuf>,
    },
    /// Compare satisfiability with the spanning-tree verdict over many instances.
    Roundtrip {
        #[arg(long, default_value_t = 2)]
        alpha_max: usize,
        #[arg(long, default_value_t = 2)]
        beta_max: usize,
        /// Random instances of exactly the maximal size; 0 enumerates all instances.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TREE_BUDGET)]
        budget: u64,
        /// JSON report destination; standard output when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Render a drawing as SVG.
    Render {
        #[command(flatten)]
        io: Io,
        /// Path to highlight, vertex ids comma separated.
        #[arg(long)]
        path: Option<String>,
        /// Shade the slabs of the highlighted path's edges.
        #[arg(long)]
        slabs: bool,
        /// Draw the upper envelope of the drawing's first arrangement.
        #[arg(long)]
        show_envelope: bool,
    },
}

/// Result of a decision command.
enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    fn code(self) -> u8 {
        match self {
            Answer::Yes => 0,
            Answer::No => 1,
            Answer::Unknown => 2,
        }
    }
}

type CliResult = Result<Answer, Error>;

fn read_text(path: &Path) -> Result<String, Error> {
    Ok(fs::read_to_string(path)?)
}

fn load_drawing(path: &Path) -> Result<Drawing, Error> {
    read_drawing(&read_text(path)?)
}

fn load_cnf(path: &Path) -> Result<CnfInstance, Error> {
    parse_dimacs(&read_text(path)?)
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match output {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// A vertex given by id or by role tag.
fn resolve(d: &Drawing, spec: &str) -> Result<usize, Error> {
    if let Ok(id) = spec.parse::<usize>() {
        if id < d.len() {
            return Ok(id);
        }
        return Err(Error::InvalidDrawing(format!("no vertex {id}")));
    }
    d.find_label(spec)
        .ok_or_else(|| Error::InvalidDrawing(format!("no vertex tagged {spec:?}")))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn verify_path(io: &Io, path: &str) -> CliResult {
    let d = load_drawing(&io.input)?;
    let ids = parse_id_list(path)?;
    let p = d.path(&ids)?;
    let ic = is_increasing_chord(&p);
    let report = format!(
        "increasing-chord: {}\nself-approaching forward: {}\nself-approaching backward: {}\ngreedy: {}\ndilation: {}\n",
        yes_no(ic),
        yes_no(is_self_approaching(&p, Direction::Forward)),
        yes_no(is_self_approaching(&p, Direction::Backward)),
        yes_no(is_greedy_path(&p)),
        dilation(&p)?
    );
    emit(&io.output, &report)?;
    Ok(if ic { Answer::Yes } else { Answer::No })
}

fn print_path_outcome(output: &Option<PathBuf>, outcome: &SearchOutcome<Vec<usize>>, expansions: u64) -> CliResult {
    let (text, answer) = match outcome {
        SearchOutcome::Found(p) => (
            format!("path {}\n", p.iter().map(usize::to_string).collect::<Vec<_>>().join(",")),
            Answer::Yes,
        ),
        SearchOutcome::Absent => ("no path\n".to_string(), Answer::No),
        SearchOutcome::Unknown => ("unknown: budget exhausted\n".to_string(), Answer::Unknown),
    };
    emit(output, &text)?;
    eprintln!("expansions: {expansions}");
    Ok(answer)
}

fn find_path(io: &Io, from: &str, to: &str, budget: u64) -> CliResult {
    let d = load_drawing(&io.input)?;
    let (s, t) = (resolve(&d, from)?, resolve(&d, to)?);
    let search = find_ic_path(&d, s, t, budget)?;
    print_path_outcome(&io.output, &search.outcome, search.expansions)
}

fn find_tree(io: &Io, root: &str, budget: u64) -> CliResult {
    let d = load_drawing(&io.input)?;
    let r = resolve(&d, root)?;
    let search = find_ic_rooted_spanning_tree(&d, r, budget)?;
    eprintln!("expansions: {}", search.expansions);
    match search.outcome {
        SearchOutcome::Found(tree) => {
            emit(&io.output, &write_tree(&tree))?;
            Ok(Answer::Yes)
        }
        SearchOutcome::Absent => {
            emit(&io.output, "no tree\n")?;
            Ok(Answer::No)
        }
        SearchOutcome::Unknown => {
            emit(&io.output, "unknown: budget exhausted\n")?;
            Ok(Answer::Unknown)
        }
    }
}

fn verify_tree(io: &Io, tree: &Path) -> CliResult {
    let d = load_drawing(&io.input)?;
    let tree = read_tree(&read_text(tree)?)?;
    let ok = verify_ic_rooted_tree(&d, &tree)?;
    emit(&io.output, &format!("increasing-chord spanning tree: {}\n", yes_no(ok)))?;
    Ok(if ok { Answer::Yes } else { Answer::No })
}

fn reduce(io: &Io) -> CliResult {
    let inst = load_cnf(&io.input)?;
    let gamma = build_gamma(&inst)?;
    emit(&io.output, &write_drawing(&gamma.drawing))?;
    eprintln!(
        "vertices: {}, edges: {}, coordinate bits: {}",
        gamma.drawing.len(),
        gamma.drawing.edges().len(),
        gamma.drawing.max_bit_length()
    );
    Ok(Answer::Yes)
}

fn witness(io: &Io) -> CliResult {
    let inst = load_cnf(&io.input)?;
    let Some(asg) = brute_force_sat(&inst)? else {
        emit(&io.output, "unsatisfiable\n")?;
        return Ok(Answer::No);
    };
    let gamma = build_gamma(&inst)?;
    let tree = witness_tree_from_assignment(&gamma, &asg)?;
    eprintln!("assignment: {asg}");
    emit(&io.output, &write_tree(&tree))?;
    Ok(Answer::Yes)
}

fn extract(io: &Io, tree: &Option<PathBuf>, path: &Option<String>) -> CliResult {
    let asg = match (tree, path) {
        (Some(tree), _) => {
            let gamma = build_gamma(&load_cnf(&io.input)?)?;
            let tree = read_tree(&read_text(tree)?)?;
            assignment_from_tree(&gamma, &tree)?
        }
        (None, Some(path)) => {
            let d = load_drawing(&io.input)?;
            extract_assignment(&d, &parse_id_list(path)?)?
        }
        (None, None) => unreachable!("clap requires one of --tree and --path"),
    };
    emit(&io.output, &format!("{asg}\n"))?;
    Ok(Answer::Yes)
}

fn gadget_path(io: &Io, budget: u64, no_cap: bool, drawing: &Option<PathBuf>) -> CliResult {
    let inst = load_cnf(&io.input)?;
    let options = if no_cap {
        GadgetOptions::unbounded()
    } else {
        GadgetOptions::default()
    };
    let g = build_gadget(&inst, options)?;
    eprintln!(
        "vertices: {}, edges: {}, coordinate bits: {}",
        g.drawing.len(),
        g.drawing.edges().len(),
        coordinate_bits(&g)
    );
    if let Some(p) = drawing {
        fs::write(p, write_drawing(&g.drawing))?;
    }
    let search = find_ic_path(&g.drawing, g.start, g.end, budget)?;
    let answer = print_path_outcome(&io.output, &search.outcome, search.expansions)?;
    if let SearchOutcome::Found(p) = &search.outcome {
        let asg = extract_assignment(&g.drawing, p)?;
        eprintln!("assignment: {}", asg.truncated(inst.alpha()));
    }
    Ok(answer)
}

fn run_roundtrip(
    alpha_max: usize,
    beta_max: usize,
    samples: usize,
    seed: u64,
    budget: u64,
    output: &Option<PathBuf>,
) -> CliResult {
    let records = roundtrip(alpha_max, beta_max, samples, seed, budget)?;
    let summary = RoundtripSummary::of(&records);
    let json = serde_json::json!({ "summary": summary, "records": records });
    emit(output, &format!("{}\n", serde_json::to_string_pretty(&json).expect("serializable")))?;
    eprintln!(
        "instances: {}, agree: {}, disagree: {}, unknown: {}, witness failures: {}",
        summary.total, summary.agree, summary.disagree, summary.unknown, summary.witness_failures
    );
    Ok(if summary.disagree > 0 || summary.witness_failures > 0 {
        Answer::No
    } else if summary.unknown > 0 {
        Answer::Unknown
    } else {
        Answer::Yes
    })
}

/// Variable count of the first arrangement behind a constructed drawing, read from its
/// role tags.
fn arrangement_alpha(d: &Drawing) -> Option<usize> {
    let mut alpha = None;
    let mut gadget = false;
    for v in 0..d.len() {
        let Some(label) = d.label(v) else { continue };
        let parts: Vec<&str> = label.split(':').collect();
        let var = match parts.as_slice() {
            ["p" | "pprime", _, var] => var.parse::<usize>().ok(),
            ["qpt", _, _, _, var] => {
                gadget = true;
                var.parse::<usize>().ok()
            }
            _ => None,
        };
        if let Some(var) = var {
            alpha = Some(alpha.unwrap_or(0).max(var));
        }
    }
    alpha.map(|a| if gadget { a.max(MIN_GADGET_ALPHA) } else { a })
}

fn render(io: &Io, path: &Option<String>, slabs: bool, show_envelope: bool) -> CliResult {
    let d = load_drawing(&io.input)?;
    let mut options = RenderOptions {
        path: path.as_deref().map(parse_id_list).transpose()?,
        shade_slabs: slabs,
        envelope: Vec::new(),
    };
    if show_envelope {
        let alpha = arrangement_alpha(&d).ok_or_else(|| {
            Error::InvalidDrawing("no role tags to infer an arrangement from".into())
        })?;
        options.envelope = build_arrangement(alpha)?
            .lines()
            .iter()
            .map(|l| l.line.clone())
            .collect();
    }
    emit(&io.output, &render_svg(&d, &options)?)?;
    Ok(Answer::Yes)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::VerifyPath { io, path } => verify_path(&io, &path),
        Command::FindPath { io, from, to, budget } => find_path(&io, &from, &to, budget),
        Command::FindTree { io, root, budget } => find_tree(&io, &root, budget),
        Command::VerifyTree { io, tree } => verify_tree(&io, &tree),
        Command::Reduce { io } => reduce(&io),
        Command::Witness { io } => witness(&io),
        Command::Extract { io, tree, path } => extract(&io, &tree, &path),
        Command::GadgetPath {
            io,
            budget,
            no_cap,
            drawing,
        } => gadget_path(&io, budget, no_cap, &drawing),
        Command::Roundtrip {
            alpha_max,
            beta_max,
            samples,
            seed,
            budget,
            output,
        } => run_roundtrip(alpha_max, beta_max, samples, seed, budget, &output),
        Command::Render {
            io,
            path,
            slabs,
            show_envelope,
        } => render(&io, &path, slabs, show_envelope),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(answer) => ExitCode::from(answer.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 4 } else { 3 })
        }
    }
}
