//! Command-line front end. [`run`] takes explicit streams so the whole
//! surface is testable in-process; the binary only wires in stdio.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::certificates::{self, CertError, RsmCert, RuleCert, Verdict};
use crate::exploration::{
    ast_search, ast_semicheck, build_tree, collapse_to_state_graph, ExploreError, Limits, SemicheckConfig, SeriesWalker,
    StateGraph,
};
use crate::hydra::{
    compile_to_pgcl, hercules_choose, play_round, successors_t, CompileError, HerculesStrategy, HydraError,
    HydraState, NodeId,
};
use crate::rational::{approx, from_text, to_text, Rational};
use crate::scheduling::{
    bound, constant, hashed, parity, standard_extension, Interactive, PartialSchedule, Scheduler,
};
use crate::semantics::{eval_bexpr, step, Direction, ExecState, StepError};
use crate::syntax::{parse, parse_bexpr, print, ParseError, Program};
use crate::transforms::{
    emit_ordinal_program, emit_tree_reduction, inc_program, inc_program_capped, is_knievel, to_knievel,
    unsoundness_program, KnievelPolicy, TransformError, TreeSpec,
};

/// Process exit status for a verdict that came out negative.
pub const EXIT_VERDICT: i32 = 1;
/// Process exit status for usage and resource errors.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}:{col}: {err}")]
    Parse { path: String, line: usize, col: usize, err: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Explore(#[from] ExploreError),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error(transparent)]
    Hydra(#[from] HydraError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Step(#[from] StepError),
    #[error("output failed: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "pastlab", version, about = "Explore, bound and certify termination of pGCL programs")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Maximum live execution states (overrides PASTLAB_NODE_CAP).
    #[arg(long, global = true)]
    pub node_cap: Option<usize>,
    /// Maximum reachable decision points when enumerating partial schedules.
    #[arg(long, global = true, default_value_t = 16)]
    pub query_cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for every random choice made by the tool itself.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Add an approximate decimal next to exact rationals.
    #[arg(long, global = true)]
    pub decimal: bool,
    /// Worker threads for schedule enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

impl Config {
    fn limits(&self) -> Result<Limits, CliError> {
        match self.node_cap {
            Some(0) => Err(CliError::Usage("--node-cap must be positive".into())),
            Some(n) => Ok(Limits::new(n)),
            None => Ok(Limits::from_env()),
        }
    }

    fn rat(&self, r: &Rational) -> String {
        if self.decimal {
            format!("{} (approx. {:.6})", to_text(r), approx(r))
        } else {
            to_text(r)
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a program and print it in canonical form.
    Parse { file: PathBuf },
    /// Sample one execution path; probabilistic choices use --seed.
    Run {
        file: PathBuf,
        #[arg(long, default_value = "const:Ln")]
        scheduler: String,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
        /// Print every visited state.
        #[arg(long)]
        trace: bool,
    },
    /// Print the execution tree up to a depth.
    Tree {
        file: PathBuf,
        #[arg(long, default_value = "const:Ln")]
        scheduler: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Exact lower bound (and value when closed) of the expected runtime.
    Runtime {
        file: PathBuf,
        #[arg(long, default_value = "const:Ln")]
        scheduler: String,
        #[arg(long, default_value_t = 64)]
        depth: usize,
        /// Measure time to reach states satisfying this condition instead.
        #[arg(long)]
        target: Option<String>,
    },
    /// Semi-decision check: every partial schedule terminates with
    /// probability above delta within n steps.
    AstCheck {
        file: PathBuf,
        #[arg(long)]
        delta: String,
        /// Check exactly this n.
        #[arg(long, conflicts_with = "max_n")]
        n: Option<usize>,
        /// Search n = 0..=max_n.
        #[arg(long, default_value_t = 64)]
        max_n: usize,
    },
    /// Collapse the reachable state space into a graph (or an RSM for it).
    Graph {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        bound: usize,
        /// Print the worst-case expected-termination RSM instead, refusing
        /// values above this bound.
        #[arg(long)]
        rsm: Option<String>,
    },
    /// The Hydra game.
    Hydra {
        #[command(subcommand)]
        command: HydraCommand,
    },
    /// Check an RSM-map certificate against a state graph.
    CheckRsm { graph: PathBuf, cert: PathBuf },
    /// Check a rank/certificate pair against a state graph.
    CheckRule { graph: PathBuf, cert: PathBuf },
    /// Transform a program into Knievel form (or just check the form).
    Knievel {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        width: usize,
        #[arg(long, default_value_t = 16)]
        cheer: u64,
        /// Only report whether the program already is in Knievel form.
        #[arg(long)]
        check: bool,
    },
    /// Emit one of the constructed programs.
    Emit {
        #[command(subcommand)]
        what: EmitCommand,
        /// Write to this file instead of stdout.
        #[arg(long, short = 'o', global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum HydraCommand {
    /// Print the ordinal T of a hydra.
    T {
        #[arg(long)]
        tree: String,
    },
    /// Play rounds until the Hydra dies, runs out of heads or --rounds.
    Play {
        #[arg(long)]
        tree: String,
        /// leftmost-deepest, random:SEED, scripted:ID,ID,... or interactive.
        #[arg(long, default_value = "leftmost-deepest")]
        hercules: String,
        /// Evolution attempts per round (ignored when interactive).
        #[arg(long, default_value_t = 0)]
        evolve: u32,
        #[arg(long, default_value_t = 100)]
        rounds: usize,
    },
    /// T of the survivor for each evolution count up to e-max.
    Successors {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        leaf: NodeId,
        #[arg(long, default_value_t = 3)]
        e_max: u32,
    },
    /// Compile the game into a pGCL program.
    Compile {
        #[arg(long)]
        tree: String,
        #[arg(long, default_value = "leftmost-deepest")]
        hercules: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum EmitCommand {
    /// Tree reduction for an ω-tree given as JSON text or a JSON file.
    Reduction { tree: String },
    /// Ordinal program for an ω-tree given as JSON text or a JSON file.
    Ordinal { tree: String },
    /// The `inc` program, optionally with a cap on the doubling loop.
    Inc {
        #[arg(long)]
        cap: Option<u64>,
    },
    /// The non-Knievel program certified by the proof rule despite not being PAST.
    Unsoundness,
}

/// Outcome of a command that completed without error.
enum Status {
    Ok,
    Failed,
}

struct Io<'a> {
    input: &'a mut dyn BufRead,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let mut io = Io { input, out, err };
    match dispatch(&cli, &mut io) {
        Ok(Status::Ok) => 0,
        Ok(Status::Failed) => EXIT_VERDICT,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

fn load_program(path: &Path) -> Result<Program, CliError> {
    let src = read(path)?;
    parse(&src).map_err(|err| {
        let (line, col) = err.position();
        CliError::Parse { path: path.display().to_string(), line, col, err }
    })
}

fn load_graph(path: &Path) -> Result<StateGraph, CliError> {
    StateGraph::from_json_str(&read(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_rational(s: &str, what: &str) -> Result<Rational, CliError> {
    from_text(s).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

/// Scheduler from its command-line spelling.
fn scheduler<'a>(spec: &str, io: &'a mut Io<'_>) -> Result<Box<dyn Scheduler + 'a>, CliError> {
    let bad = || CliError::Usage(format!("unknown scheduler `{spec}`"));
    if let Some(rest) = spec.strip_prefix("bounded:") {
        let (k, inner) = rest.split_once(':').ok_or_else(bad)?;
        let k: usize = k.parse().map_err(|_| bad())?;
        let inner = scheduler(inner, io)?;
        return Ok(Box::new(bound(inner, k)));
    }
    Ok(match spec {
        "const:Ln" | "const:L" => Box::new(constant(Direction::Ln)),
        "const:Rn" | "const:R" => Box::new(constant(Direction::Rn)),
        "parity" => Box::new(parity()),
        "interactive" => Box::new(Interactive::new(&mut *io.input, &mut *io.err)),
        other => {
            if let Some(seed) = other.strip_prefix("random:") {
                Box::new(hashed(seed.parse().map_err(|_| bad())?))
            } else if let Some(file) = other.strip_prefix("table:") {
                let ps = PartialSchedule::from_json_str(&read(Path::new(file))?)
                    .map_err(|e| CliError::Usage(format!("{file}: {e}")))?;
                Box::new(standard_extension(ps))
            } else {
                return Err(bad());
            }
        }
    })
}

fn hercules(spec: &str) -> Result<HerculesStrategy, CliError> {
    let bad = || CliError::Usage(format!("unknown Hercules strategy `{spec}`"));
    if spec == "leftmost-deepest" {
        return Ok(HerculesStrategy::LeftmostDeepest);
    }
    if let Some(seed) = spec.strip_prefix("random:") {
        return Ok(HerculesStrategy::Random(seed.parse().map_err(|_| bad())?));
    }
    if let Some(ids) = spec.strip_prefix("scripted:") {
        let ids = ids.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        return Ok(HerculesStrategy::Scripted(ids));
    }
    Err(bad())
}

fn load_hydra(text: &str) -> Result<HydraState, CliError> {
    let t = text.trim();
    Ok(if t.starts_with('{') { HydraState::from_json_str(t)? } else { HydraState::parse(t)? })
}

fn load_tree_spec(arg: &str) -> Result<TreeSpec, CliError> {
    let text = if arg.trim_start().starts_with('{') { arg.to_string() } else { read(Path::new(arg))? };
    Ok(TreeSpec::from_json_str(&text)?)
}

fn verdict(v: &Verdict, cfg: &Config, io: &mut Io<'_>) -> Result<(), CliError> {
    if cfg.format == Format::Json {
        let vs: Vec<_> = v
            .violations
            .iter()
            .map(|x| serde_json::json!({"node": x.node, "condition": x.condition, "lhs": x.lhs, "rhs": x.rhs}))
            .collect();
        writeln!(io.out, "{}", serde_json::json!({ "ok": v.ok, "violations": vs }))?;
    } else {
        for x in &v.violations {
            writeln!(io.out, "violation at {}: {} ({} > {})", x.node, x.condition, x.lhs, x.rhs)?;
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli, io: &mut Io<'_>) -> Result<Status, CliError> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Parse { file } => {
            let p = load_program(file)?;
            writeln!(io.out, "{}", print(&p))?;
            Ok(Status::Ok)
        }
        Command::Run { file, scheduler: spec, max_steps, trace } => cmd_run(cfg, io, file, spec, *max_steps, *trace),
        Command::Tree { file, scheduler: spec, depth } => {
            let p = load_program(file)?;
            let limits = cfg.limits()?;
            let tree = {
                let mut f = scheduler(spec, io)?;
                build_tree(&p, &mut *f, *depth, limits)?
            };
            match cfg.format {
                Format::Json => writeln!(io.out, "{}", tree.to_json())?,
                Format::Text => {
                    write!(io.out, "{}", tree.to_text())?;
                    writeln!(io.out, "terminal mass: {}", cfg.rat(&tree.terminal_mass()))?;
                    writeln!(io.out, "frontier mass: {}", cfg.rat(&tree.frontier_mass()))?;
                }
            }
            Ok(Status::Ok)
        }
        Command::Runtime { file, scheduler: spec, depth, target } => {
            let p = load_program(file)?;
            let limits = cfg.limits()?;
            let (b, term) = {
                let mut f = scheduler(spec, io)?;
                let start = ExecState::initial(&p);
                let mut w = match target {
                    Some(t) => {
                        let g = parse_bexpr(t).map_err(|e| CliError::Usage(format!("--target: {e}")))?;
                        let hit = move |s: &ExecState| eval_bexpr(&g, &s.valuation);
                        SeriesWalker::with_target(start, Box::new(hit), limits)
                    }
                    None => SeriesWalker::termination(start, limits),
                };
                w.advance_to(*depth, &mut *f)?;
                (w.bounds(), w.absorbed().clone())
            };
            match cfg.format {
                Format::Json => writeln!(
                    io.out,
                    "{}",
                    serde_json::json!({
                        "depth": depth,
                        "lower": to_text(&b.lower),
                        "exact": b.exact.as_ref().map(to_text),
                        "closed": b.closed,
                        "absorbed": to_text(&term),
                    })
                )?,
                Format::Text => {
                    writeln!(io.out, "depth: {depth}")?;
                    writeln!(io.out, "lower: {}", cfg.rat(&b.lower))?;
                    writeln!(io.out, "closed: {}", b.closed)?;
                    if let Some(x) = &b.exact {
                        writeln!(io.out, "exact: {}", cfg.rat(x))?;
                    }
                    let what = if target.is_some() { "target reached" } else { "terminated" };
                    writeln!(io.out, "probability {what}: {}", cfg.rat(&term))?;
                }
            }
            Ok(Status::Ok)
        }
        Command::AstCheck { file, delta, n, max_n } => {
            let p = load_program(file)?;
            let delta = parse_rational(delta, "--delta")?;
            let sc = SemicheckConfig { limits: cfg.limits()?, query_cap: cfg.query_cap, jobs: cfg.jobs.max(1) };
            let found = match n {
                Some(n) => ast_semicheck(&p, &delta, *n, &sc)?.then_some(*n),
                None => ast_search(&p, &delta, *max_n, &sc)?,
            };
            match found {
                Some(k) => writeln!(io.out, "true: every partial schedule terminates with probability > {} within n = {k}", to_text(&delta))?,
                None => {
                    let range = n.map_or(format!("n <= {max_n}"), |n| format!("n = {n}"));
                    writeln!(io.out, "false for {range}")?;
                }
            }
            Ok(if found.is_some() { Status::Ok } else { Status::Failed })
        }
        Command::Graph { file, bound, rsm } => {
            let p = load_program(file)?;
            let g = collapse_to_state_graph(&p, *bound)?;
            match rsm {
                None => writeln!(io.out, "{}", serde_json::to_string_pretty(&g.to_json()).expect("json"))?,
                Some(b) => {
                    let b = parse_rational(b, "--rsm")?;
                    let region: Vec<bool> = (0..g.len()).map(|s| !g.is_terminal(s)).collect();
                    let cert = certificates::in_loop_rsm_from_bound(&g, &region, &b)?;
                    writeln!(io.out, "{}", serde_json::to_string_pretty(&cert.to_json()).expect("json"))?;
                }
            }
            Ok(Status::Ok)
        }
        Command::CheckRsm { graph, cert } => {
            let g = load_graph(graph)?;
            let c = RsmCert::from_json_str(&read(cert)?)?;
            let v = certificates::check_rsm(&g, &c)?;
            verdict(&v, cfg, io)?;
            if v.ok {
                let b = certificates::rsm_bound(&c, g.key(g.initial))?;
                if cfg.format == Format::Text {
                    writeln!(io.out, "OK, bound = {}", cfg.rat(&b))?;
                }
                Ok(Status::Ok)
            } else {
                Ok(Status::Failed)
            }
        }
        Command::CheckRule { graph, cert } => {
            let g = load_graph(graph)?;
            let c = RuleCert::from_json_str(&read(cert)?)?;
            let v = certificates::check_proof_rule(&g, &c)?;
            verdict(&v, cfg, io)?;
            if v.ok {
                if cfg.format == Format::Text {
                    let rank = c.g.get(g.key(g.initial)).map(|o| o.to_text()).unwrap_or_default();
                    writeln!(io.out, "OK, rank of initial state = {rank}")?;
                }
                Ok(Status::Ok)
            } else {
                Ok(Status::Failed)
            }
        }
        Command::Knievel { file, width, cheer, check } => {
            let p = load_program(file)?;
            if *check {
                let ok = is_knievel(&p);
                writeln!(io.out, "knievel: {ok}")?;
                return Ok(if ok { Status::Ok } else { Status::Failed });
            }
            let q = to_knievel(&p, KnievelPolicy { width: *width, cheer: *cheer })?;
            writeln!(io.out, "{}", print(&q))?;
            Ok(Status::Ok)
        }
        Command::Emit { what, out } => {
            let p = match what {
                EmitCommand::Reduction { tree } => emit_tree_reduction(&load_tree_spec(tree)?)?,
                EmitCommand::Ordinal { tree } => emit_ordinal_program(&load_tree_spec(tree)?)?,
                EmitCommand::Inc { cap: Some(c) } => inc_program_capped(*c),
                EmitCommand::Inc { cap: None } => inc_program(),
                EmitCommand::Unsoundness => unsoundness_program(),
            };
            let text = format!("{}\n", print(&p));
            match out {
                Some(path) => std::fs::write(path, text)
                    .map_err(|source| CliError::Write { path: path.clone(), source })?,
                None => write!(io.out, "{text}")?,
            }
            Ok(Status::Ok)
        }
        Command::Hydra { command } => cmd_hydra(cfg, io, command),
    }
}

fn cmd_run(cfg: &Config, io: &mut Io<'_>, file: &Path, spec: &str, max_steps: usize, trace: bool) -> Result<Status, CliError> {
    let p = load_program(file)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut lines = Vec::new();
    let mut s = ExecState::initial(&p);
    let mut steps = 0;
    {
        let mut f = scheduler(spec, io)?;
        while !s.is_terminal() && steps < max_steps {
            if trace {
                lines.push(format!("{steps}: {} @ {}", crate::syntax::print_compact(&s.program), s.valuation.to_text()));
            }
            let out = step(&s, &mut *f)?;
            let mut succ = out.successors;
            s = if succ.len() == 1 {
                succ.pop().expect("one successor").0
            } else {
                // pick by relative weight of the two probabilistic branches
                let total = &succ[0].0.prob + &succ[1].0.prob;
                let left = &succ[0].0.prob / &total;
                let u: f64 = rng.gen();
                let idx = usize::from(u >= approx(&left));
                succ.swap_remove(idx).0
            };
            steps += 1;
        }
    }
    for l in lines {
        writeln!(io.out, "{l}")?;
    }
    let status = if s.is_terminal() { "terminated" } else { "running" };
    match cfg.format {
        Format::Json => writeln!(
            io.out,
            "{}",
            serde_json::json!({"status": status, "steps": steps, "state": s.to_json()})
        )?,
        Format::Text => {
            writeln!(io.out, "{status} after {steps} steps")?;
            let val = s.valuation.to_text();
            writeln!(io.out, "valuation: {}", if val.is_empty() { "(all variables 0)" } else { &val })?;
            writeln!(io.out, "path probability: {}", cfg.rat(&s.prob))?;
            writeln!(io.out, "history: {}", s.history.to_text())?;
        }
    }
    Ok(Status::Ok)
}

fn cmd_hydra(cfg: &Config, io: &mut Io<'_>, command: &HydraCommand) -> Result<Status, CliError> {
    match command {
        HydraCommand::T { tree } => {
            writeln!(io.out, "{}", load_hydra(tree)?.t())?;
            Ok(Status::Ok)
        }
        HydraCommand::Successors { tree, leaf, e_max } => {
            let h = load_hydra(tree)?;
            let ts = successors_t(&h, *leaf, *e_max)?;
            for (e, t) in ts.iter().enumerate() {
                writeln!(io.out, "e = {e}: {t}")?;
            }
            Ok(Status::Ok)
        }
        HydraCommand::Compile { tree, hercules: spec } => {
            let h = load_hydra(tree)?;
            writeln!(io.out, "{}", print(&compile_to_pgcl(&h, &hercules(spec)?)?))?;
            Ok(Status::Ok)
        }
        HydraCommand::Play { tree, hercules: spec, evolve, rounds } => {
            let mut h = load_hydra(tree)?;
            let interactive = spec == "interactive";
            let strategy = if interactive { None } else { Some(hercules(spec)?) };
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut alive = Rational::one();
            for round in 0..*rounds {
                if h.heads().is_empty() {
                    writeln!(io.out, "Hercules wins after {round} rounds: no heads left")?;
                    return Ok(Status::Ok);
                }
                let (leaf, e) = match &strategy {
                    Some(s) => {
                        let leaf = hercules_choose(&h, s, round)?;
                        let e = if h.parent(h.parent(leaf).expect("head")).is_some() { *evolve } else { 0 };
                        (leaf, e)
                    }
                    None => match ask_round(io, &h, round)? {
                        Some(x) => x,
                        None => {
                            writeln!(io.out, "input closed; stopping")?;
                            return Ok(Status::Ok);
                        }
                    },
                };
                let before = h.t();
                let outcomes = match play_round(&h, leaf, e) {
                    Ok(o) => o,
                    Err(e @ (HydraError::NotAHead(_) | HydraError::NoGrandparent)) if interactive => {
                        writeln!(io.err, "{e}; try again")?;
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                };
                // one coin per evolution attempt: the first tail kills the Hydra
                let mut died = false;
                for _ in 0..e {
                    if rng.gen::<bool>() {
                        died = true;
                        break;
                    }
                }
                let survivor = outcomes.into_iter().find(|o| o.survived).expect("survivor");
                if died {
                    writeln!(io.out, "round {round}: chop {leaf}, e = {e}: the Hydra implodes (T before = {before})")?;
                    writeln!(io.out, "the game ended by implosion")?;
                    return Ok(Status::Ok);
                }
                alive *= &survivor.prob;
                h = survivor.result.expect("survivor has a state");
                writeln!(
                    io.out,
                    "round {round}: chop {leaf}, e = {e}: T before = {before}, T after = {}, n = {}, heads = {}",
                    h.t(),
                    h.n,
                    h.heads().len()
                )?;
            }
            writeln!(io.out, "stopped after {rounds} rounds; survival probability so far {}", cfg.rat(&alive))?;
            if alive.is_zero() {
                return Ok(Status::Failed);
            }
            Ok(Status::Ok)
        }
    }
}

/// Reads `<leaf> <evolutions>` from the input; `None` at end of input.
fn ask_round(io: &mut Io<'_>, h: &HydraState, round: usize) -> Result<Option<(NodeId, u32)>, CliError> {
    loop {
        writeln!(io.err, "round {round}: hydra {} (T = {})", h.to_text(), h.t())?;
        writeln!(io.err, "heads: {:?}", h.heads())?;
        write!(io.err, "enter '<leaf> <evolutions>': ")?;
        io.err.flush()?;
        let mut line = String::new();
        if io.input.read_line(&mut line)? == 0 {
            return Ok(None);
        }
        let mut parts = line.split_whitespace();
        let leaf = parts.next().and_then(|s| s.parse().ok());
        let e = parts.next().map_or(Some(0), |s| s.parse().ok());
        match (leaf, e) {
            (Some(l), Some(e)) => return Ok(Some((l, e))),
            _ => writeln!(io.err, "expected a node id and an optional evolution count")?,
        }
    }
}
