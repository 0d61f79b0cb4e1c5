//! The `snakes` command line.
//!
//! Exit codes: 0 YES / ok / ACCEPT, 1 NO / REJECT, 2 UNKNOWN, 64 usage,
//! 65 malformed input or failed skeleton audit, 66 unreadable input,
//! 73 unwritable output.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::alphabet::Word;
use crate::automata::{audit_skeleton, builtin_skeleton, SkeletonAutomaton, SkeletonKind};
use crate::certificates::{verify, Certificate, Problem, Verdict};
use crate::embeddings::{center_embedding, parse_transducer, transform_tileset};
use crate::error::Error;
use crate::formats::{parse_automaton, parse_tileset, parse_wang};
use crate::groups::GroupOracle;
use crate::solvers::{
    solve_infinite_snake, solve_ouroboros, solve_reachability, solve_y_snake, Decision, SnakeSearch, SolveBudget,
};
use crate::tilesets::TilesetGraph;
use crate::wang::{graph_to_wang, wang_to_graph, DEFAULT_TILE_BUDGET};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_CANT_CREATE: i32 = 73;

/// Words of this length are checked when auditing a skeleton automaton.
const AUDIT_LENGTH: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "snakes", version, about = "Domino snake problems on finitely generated groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide or semi-decide a snake problem and emit a certificate.
    Solve(SolveArgs),
    /// Convert between Wang tile sets and tileset graphs.
    Convert(ConvertArgs),
    /// Transform a tileset through a transducer, or build a center embedding.
    Embed(EmbedArgs),
    /// Check a certificate against its problem instance.
    Verify(VerifyArgs),
    /// List or count the snakes of one length.
    Enumerate(EnumerateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProblemArg {
    InfiniteSnake,
    Ouroboros,
    Reach,
    YSnake,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_enum)]
    problem: ProblemArg,
    /// Group descriptor: zd:D, zd:D:gens=(..), free:K or heisenberg.
    #[arg(long)]
    group: String,
    #[arg(long)]
    tileset: PathBuf,
    #[arg(long)]
    seed: Option<String>,
    /// builtin:free, builtin:geodesic, builtin:directions=a,b or file:PATH.
    #[arg(long)]
    skeleton: Option<String>,
    /// Length bound for snake and loop searches.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    approximation_order: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_nodes: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, default_value_t = 2)]
    box_margin: u64,
    /// Certificate output; printed after the verdict when absent.
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Wang,
    Graph,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    #[arg(long, value_enum)]
    from: FormatArg,
    #[arg(long, value_enum)]
    to: FormatArg,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct EmbedArgs {
    #[arg(long, conflicts_with = "center", requires = "tileset")]
    transducer: Option<PathBuf>,
    #[arg(long)]
    tileset: Option<PathBuf>,
    #[arg(long, requires_all = ["group", "g", "w"])]
    center: bool,
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    cert: PathBuf,
    #[arg(long)]
    group: String,
    #[arg(long)]
    tileset: PathBuf,
    /// Needed for y-snake certificates.
    #[arg(long)]
    skeleton: Option<String>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    length: usize,
    #[arg(long)]
    group: String,
    #[arg(long)]
    tileset: PathBuf,
    #[arg(long)]
    seed: Option<String>,
    /// Print only the number of snakes.
    #[arg(long)]
    count: bool,
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => EXIT_NO_INPUT,
            Error::UnknownGroup(_) | Error::UnknownSkeleton(_) | Error::UnknownLetter { .. } | Error::UnknownTile(_) => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs the command line with process stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line writing to the given streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_YES };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a, out),
        Command::Convert(a) => convert(a, out),
        Command::Embed(a) => embed(a, out),
        Command::Verify(a) => verify_cmd(a, out),
        Command::Enumerate(a) => enumerate(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_NO_INPUT,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure {
        code: EXIT_CANT_CREATE,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn emit(out: &mut dyn Write, text: &str) -> std::result::Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure {
        code: EXIT_CANT_CREATE,
        message: format!("cannot write output: {e}"),
    })
}

fn with_path(path: &Path, e: Error) -> Failure {
    let mut f = Failure::from(e);
    f.message = format!("{}: {}", path.display(), f.message);
    f
}

fn load_tileset(path: &Path) -> std::result::Result<TilesetGraph, Failure> {
    parse_tileset(&read(path)?).map_err(|e| with_path(path, e))
}

fn word(group: &GroupOracle, text: &str) -> std::result::Result<Word, Failure> {
    group.alphabet().parse_word(text).map_err(|e| usage(format!("`{text}`: {e}")))
}

/// Resolves `builtin:KIND` or `file:PATH` and audits the result.
fn load_skeleton(group: &GroupOracle, source: &str) -> std::result::Result<SkeletonAutomaton, Failure> {
    let y = if let Some(kind) = source.strip_prefix("builtin:") {
        let kind = SkeletonKind::parse(kind, group.alphabet())?;
        builtin_skeleton(&kind, group.alphabet())?
    } else if let Some(path) = source.strip_prefix("file:") {
        let path = Path::new(path);
        parse_automaton(&read(path)?).map_err(|e| with_path(path, e))?
    } else {
        return Err(usage(format!("skeleton source `{source}` must start with builtin: or file:")));
    };
    if y.alphabet() != group.alphabet() {
        return Err(usage("skeleton alphabet differs from the group's"));
    }
    if let Some(w) = audit_skeleton(group, &y, AUDIT_LENGTH)? {
        return Err(Failure {
            code: EXIT_DATA,
            message: Error::AuditFailed(group.alphabet().format_word(&w)).to_string(),
        });
    }
    Ok(y)
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Yes => EXIT_YES,
        Verdict::No => EXIT_NO,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn solve(a: SolveArgs, out: &mut dyn Write) -> Outcome {
    let group = GroupOracle::from_descriptor(&a.group)?;
    let g = load_tileset(&a.tileset)?;
    let mut budget = match a.budget {
        Some(n) => SolveBudget::with_length(n as usize),
        None => SolveBudget::default(),
    };
    if let Some(k) = a.approximation_order {
        budget.approximation_order = k as usize;
    }
    if let Some(n) = a.max_nodes {
        budget.max_nodes = n;
    }
    let seed = a.seed.as_deref();
    let reach = matches!(a.problem, ProblemArg::Reach);
    if reach != (a.p.is_some() && a.q.is_some()) || (!reach && (a.p.is_some() || a.q.is_some())) {
        return Err(usage("--p and --q are required for reach and only for reach"));
    }
    if matches!(a.problem, ProblemArg::YSnake) != a.skeleton.is_some() {
        return Err(usage("--skeleton is required for y-snake and only for y-snake"));
    }
    let decision: Decision = match a.problem {
        ProblemArg::InfiniteSnake => solve_infinite_snake(&group, &g, &budget, seed)?,
        ProblemArg::Ouroboros => solve_ouroboros(&group, &g, &budget, seed)?,
        ProblemArg::Reach => {
            let p = word(&group, a.p.as_deref().expect("checked"))?;
            let q = word(&group, a.q.as_deref().expect("checked"))?;
            solve_reachability(&group, &g, &p, &q, a.box_margin, &budget, seed)?
        }
        ProblemArg::YSnake => {
            let y = load_skeleton(&group, a.skeleton.as_deref().expect("checked"))?;
            solve_y_snake(&group, &y, &g, seed)?
        }
    };
    emit(out, &format!("VERDICT: {}\n", decision.verdict))?;
    if let Some(c) = &decision.certificate {
        match &a.cert {
            Some(path) => write_file(path, &c.to_text())?,
            None => emit(out, &c.to_text())?,
        }
    }
    Ok(verdict_code(decision.verdict))
}

fn convert(a: ConvertArgs, out: &mut dyn Write) -> Outcome {
    let text = read(&a.input)?;
    let result = match (a.from, a.to) {
        (FormatArg::Wang, FormatArg::Graph) => {
            let w = parse_wang(&text).map_err(|e| with_path(&a.input, e))?;
            wang_to_graph(&w).to_text()
        }
        (FormatArg::Graph, FormatArg::Wang) => {
            let g = parse_tileset(&text).map_err(|e| with_path(&a.input, e))?;
            graph_to_wang(&g, DEFAULT_TILE_BUDGET)?.tiles.to_text()
        }
        (FormatArg::Wang, FormatArg::Wang) => parse_wang(&text).map_err(|e| with_path(&a.input, e))?.to_text(),
        (FormatArg::Graph, FormatArg::Graph) => parse_tileset(&text).map_err(|e| with_path(&a.input, e))?.to_text(),
    };
    write_file(&a.out, &result)?;
    emit(out, "ok\n")?;
    Ok(EXIT_YES)
}

fn embed(a: EmbedArgs, out: &mut dyn Write) -> Outcome {
    let text = if a.center {
        let group = GroupOracle::from_descriptor(a.group.as_deref().expect("required by clap"))?;
        let g = word(&group, a.g.as_deref().expect("required by clap"))?;
        let w = word(&group, a.w.as_deref().expect("required by clap"))?;
        let e = center_embedding(&group, &g, &w)?;
        format!(
            "# target: {}\n# assumptions: {}\n{}",
            e.target_group.descriptor(),
            if e.assumptions_checked { "checked" } else { "unchecked" },
            e.transducer.to_text()
        )
    } else {
        let Some(path) = &a.transducer else {
            return Err(usage("embed needs --transducer with --tileset, or --center"));
        };
        let m = parse_transducer(&read(path)?).map_err(|e| with_path(path, e))?;
        let g = load_tileset(a.tileset.as_deref().expect("required by clap"))?;
        transform_tileset(&m, &g)?.to_text()
    };
    write_file(&a.out, &text)?;
    emit(out, "ok\n")?;
    Ok(EXIT_YES)
}

fn verify_cmd(a: VerifyArgs, out: &mut dyn Write) -> Outcome {
    let group = GroupOracle::from_descriptor(&a.group)?;
    let g = load_tileset(&a.tileset)?;
    let cert = Certificate::from_text(&read(&a.cert)?).map_err(|e| with_path(&a.cert, e))?;
    let y = match (&a.skeleton, cert.problem) {
        (Some(src), _) => Some(load_skeleton(&group, src)?),
        (None, Problem::YSnake) => return Err(usage("y-snake certificates need --skeleton")),
        (None, _) => None,
    };
    match verify(&cert, &group, &g, y.as_ref()) {
        Ok(()) => {
            emit(out, "ACCEPT\n")?;
            Ok(EXIT_YES)
        }
        Err(Error::CertificateMismatch(m)) => {
            emit(out, &format!("REJECT: {m}\n"))?;
            Ok(EXIT_NO)
        }
        Err(e) => Err(e.into()),
    }
}

fn enumerate(a: EnumerateArgs, out: &mut dyn Write) -> Outcome {
    let group = GroupOracle::from_descriptor(&a.group)?;
    let g = load_tileset(&a.tileset)?;
    let search = SnakeSearch::new(&group, &g)?.seed(a.seed.as_deref())?;
    if a.count {
        emit(out, &format!("{}\n", search.count(a.length)))?;
        return Ok(EXIT_YES);
    }
    let lifted = search.tileset();
    let mut text = String::new();
    for s in search.enumerate(a.length) {
        let scales: Vec<&str> = s.scales.iter().map(|t| lifted.tile_name(*t)).collect();
        text.push_str(&format!("{} | {}\n", group.alphabet().format_word(&s.word), scales.join(" ")));
    }
    emit(out, &text)?;
    Ok(EXIT_YES)
}
