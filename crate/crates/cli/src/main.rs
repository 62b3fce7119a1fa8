//! `workbench`: command-line access to the pushdown workbench.
//!
//! Every command prints human-readable lines, a `---` separator and then
//! `key=value` lines. Exit codes: 0 success or positive verdict, 1 negative
//! verdict, 2 usage or parse error, 3 resource-bound exhaustion.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use omega_pushdown::automata::{
    accepts_finite, classify_pda, validate_acceptance, validate_pda, Acceptance, DeterministicPda,
    Pda, State,
};
use omega_pushdown::catalog::{self, Entry};
use omega_pushdown::format::{parse_configuration, parse_document, print_document, Document};
use omega_pushdown::games::{
    validate_process, words_up_to, Bounds, DeadEnd, GameInstance, Solver, Verdict,
};
use omega_pushdown::omega::{RunLimits, DEFAULT_STEP_CEILING};
use omega_pushdown::suite::{exit_code, run_criterion, Mutant, SuiteConfig};
use omega_pushdown::triangle::{chain_validate, complement_chain, TriangleChain};
use omega_pushdown::words::{FiniteWord, LassoWord, Symbol};
use omega_pushdown::Error;

#[derive(Parser)]
#[command(
    name = "workbench",
    version,
    about = "Pushdown automata, stack-limit languages and pushdown games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the invariants of an automaton, process, chain or game.
    Validate { file: String },
    /// Report determinism and real-time behaviour of an automaton.
    Classify { file: String },
    /// Decide acceptance of a finite word (final states) or a lasso (ω-conditions).
    Accepts { file: String, word: String },
    /// Analyze the run of a deterministic automaton on a lasso.
    Limit { file: String, lasso: String },
    #[command(subcommand)]
    Triangle(TriangleCommand),
    #[command(subcommand)]
    Game(GameCommand),
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Run the acceptance battery.
    Suite {
        #[arg(long, value_enum)]
        mutant: Option<MutantArg>,
        /// Run only this criterion.
        #[arg(long)]
        criterion: Option<usize>,
    },
}

#[derive(Subcommand)]
enum TriangleCommand {
    /// Decide membership of a lasso in a chain's language.
    Member { chain: String, lasso: String },
    /// Write the complement chain to `<dir>/complement.chain`.
    Complement {
        chain: String,
        #[arg(short = 'o', long = "out")]
        dir: PathBuf,
    },
}

#[derive(clap::Args)]
struct BoundArgs {
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    #[arg(long, value_enum, default_value_t = DeadEndArg::MoverLoses)]
    dead_end: DeadEndArg,
}

#[derive(Subcommand)]
enum GameCommand {
    /// Solve the game from a configuration written `q : ⊥ a b`.
    Solve {
        game: String,
        config: String,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// The stack words of length at most N from which Eve wins at a state.
    Slice {
        game: String,
        state: String,
        n: usize,
        /// Restrict candidate words to these space-separated letters.
        #[arg(long)]
        letters: Option<String>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Print a catalog object in its text format.
    Export {
        name: String,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// List every catalog identifier.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeadEndArg {
    MoverLoses,
    EveLosesFinite,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutantArg {
    #[value(name = "swapped-partition")]
    SwappedPartition,
}

/// The printed result of a command.
struct Report {
    code: u8,
    lines: Vec<String>,
    keys: Vec<(String, String)>,
}

impl Report {
    fn new(code: u8) -> Self {
        Report {
            code,
            lines: Vec::new(),
            keys: Vec::new(),
        }
    }

    fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.lines.push(s.into());
        self
    }

    fn key(&mut self, k: &str, v: impl ToString) -> &mut Self {
        self.keys.push((k.to_string(), v.to_string()));
        self
    }

    fn verdict(code_if_true: bool) -> Self {
        let mut r = Report::new(if code_if_true { 0 } else { 1 });
        r.key("verdict", code_if_true);
        r
    }

    /// Write errors (a closed pipe, say) are ignored.
    fn print(&self) {
        let mut out = std::io::stdout().lock();
        let _ = self.write(&mut out);
    }

    fn write(&self, out: &mut impl Write) -> std::io::Result<()> {
        for l in &self.lines {
            writeln!(out, "{l}")?;
        }
        writeln!(out, "---")?;
        for (k, v) in &self.keys {
            writeln!(out, "{k}={v}")?;
        }
        out.flush()
    }
}

fn error_report(e: &Error) -> Report {
    let code = if e.is_exhaustion() { 3 } else { 2 };
    let mut r = Report::new(code);
    r.line(format!("error: {e}"));
    if let Error::Invalid(diags) = e {
        for d in diags {
            r.line(format!("  {d}"));
        }
    }
    if let Error::InvalidChain(diags) = e {
        for d in diags {
            r.line(format!("  {d}"));
        }
    }
    r.key("error", if code == 3 { "exhausted" } else { "invalid" });
    r
}

fn limits() -> Result<RunLimits, Error> {
    match std::env::var("WORKBENCH_STEP_CEILING") {
        Ok(v) => v
            .trim()
            .parse()
            .map(|step_ceiling| RunLimits { step_ceiling })
            .map_err(|_| Error::Unsupported(format!("WORKBENCH_STEP_CEILING={v} is not a count"))),
        Err(_) => Ok(RunLimits {
            step_ceiling: DEFAULT_STEP_CEILING,
        }),
    }
}

/// A path to a document, or a catalog identifier.
fn load(arg: &str) -> Result<Document, Error> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Unsupported(format!("cannot read {arg}: {e}")))?;
        return parse_document(&text);
    }
    match catalog::lookup(arg)? {
        Entry::Game(g) => Ok(Document::Game(g)),
        Entry::Chain(c) => Ok(Document::Chain(c)),
        Entry::Process(p) => Ok(Document::Process(p)),
        Entry::Automaton(p, acc) => Ok(Document::Automaton(p, acc)),
        Entry::Language(l) => Err(Error::Unsupported(format!(
            "lang:{} is an oracle, not a document",
            l.name
        ))),
    }
}

fn load_automaton(arg: &str) -> Result<(Pda, Option<Acceptance>), Error> {
    match load(arg)? {
        Document::Automaton(p, acc) => Ok((p, acc)),
        _ => Err(Error::Unsupported(format!("{arg} is not an automaton"))),
    }
}

fn load_chain(arg: &str) -> Result<TriangleChain, Error> {
    match load(arg)? {
        Document::Chain(c) => Ok(c),
        Document::Game(g) => Ok(g.condition),
        _ => Err(Error::Unsupported(format!("{arg} is not a chain"))),
    }
}

fn load_game(arg: &str) -> Result<GameInstance, Error> {
    match load(arg)? {
        Document::Game(g) => Ok(g),
        _ => Err(Error::Unsupported(format!("{arg} is not a game"))),
    }
}

fn validate(file: &str) -> Result<Report, Error> {
    let (kind, diags): (&str, Vec<String>) = match load(file)? {
        Document::Automaton(p, acc) => {
            let mut d: Vec<String> = validate_pda(&p).iter().map(ToString::to_string).collect();
            if let Some(acc) = &acc {
                d.extend(validate_acceptance(&p, acc).iter().map(ToString::to_string));
            }
            ("automaton", d)
        }
        Document::Process(p) => (
            "process",
            validate_process(&p)
                .iter()
                .map(ToString::to_string)
                .collect(),
        ),
        Document::Chain(c) => ("chain", chain_validate(&c)),
        Document::Game(g) => {
            let mut d: Vec<String> = validate_process(&g.process)
                .iter()
                .map(ToString::to_string)
                .collect();
            d.extend(chain_validate(&g.condition));
            ("game", d)
        }
    };
    let mut r = Report::new(if diags.is_empty() { 0 } else { 2 });
    r.line(format!(
        "{kind}: {}",
        if diags.is_empty() { "valid" } else { "invalid" }
    ));
    for d in &diags {
        r.line(format!("  {d}"));
    }
    r.key("kind", kind)
        .key("valid", diags.is_empty())
        .key("diagnostics", diags.len());
    Ok(r)
}

fn classify(file: &str) -> Result<Report, Error> {
    let (p, _) = load_automaton(file)?;
    let c = classify_pda(&p);
    let mut r = Report::new(0);
    r.line(format!(
        "{} states, {} rules; {}, {}",
        p.states().len(),
        p.rule_count(),
        if c.deterministic {
            "deterministic"
        } else {
            "nondeterministic"
        },
        if c.real_time {
            "real-time"
        } else {
            "with λ-transitions"
        }
    ));
    r.key("deterministic", c.deterministic)
        .key("real_time", c.real_time);
    Ok(r)
}

fn accepts(file: &str, word: &str) -> Result<Report, Error> {
    let (p, acc) = load_automaton(file)?;
    let acc =
        acc.ok_or_else(|| Error::Unsupported("the automaton has no acceptance condition".into()))?;
    let diags = validate_pda(&p);
    if !diags.is_empty() {
        return Err(Error::Invalid(diags));
    }
    let verdict = match &acc {
        Acceptance::FinalStates(f) => accepts_finite(&p, f, &FiniteWord::parse(word)?),
        cond => DeterministicPda::compile(&p)?.accepts_omega(
            cond,
            &LassoWord::parse(word)?,
            &limits()?,
        )?,
    };
    let mut r = Report::verdict(verdict);
    r.line(format!(
        "{} {word}",
        if verdict { "accepts" } else { "rejects" }
    ));
    Ok(r)
}

fn limit(file: &str, lasso: &str) -> Result<Report, Error> {
    let (p, acc) = load_automaton(file)?;
    let w = LassoWord::parse(lasso)?;
    let coloring = match &acc {
        Some(Acceptance::Parity(col)) => Some(col),
        _ => None,
    };
    let run = DeterministicPda::compile(&p)?.analyze(&w, coloring, &limits()?)?;
    let mut r = Report::new(0);
    r.line(format!("run on {w} is {}", run.completeness));
    r.line(format!("stack limit {}", run.stack_limit));
    let states: Vec<String> = run.inf_states.iter().map(ToString::to_string).collect();
    r.key("completeness", run.completeness)
        .key("transientSteps", run.transient_steps)
        .key("periodSteps", run.period_steps)
        .key("pumpedWord", &run.pumped_word)
        .key("stackLimit", &run.stack_limit)
        .key("strictlyUnbounded", run.strictly_unbounded)
        .key("infStates", states.join(" "))
        .key("consumed", run.consumed);
    if let Some(c) = run.min_inf_color {
        r.key("minInfColor", c);
    }
    Ok(r)
}

fn triangle(cmd: &TriangleCommand) -> Result<Report, Error> {
    match cmd {
        TriangleCommand::Member { chain, lasso } => {
            let c = load_chain(chain)?;
            let w = LassoWord::parse(lasso)?;
            let trace = c.compile_with(limits()?)?.trace(&w)?;
            let mut r = Report::verdict(trace.member);
            for (i, level) in trace.levels.iter().enumerate() {
                r.line(format!(
                    "level {}: {} run, stack limit {}",
                    i + 1,
                    level.completeness,
                    level.stack_limit
                ));
            }
            if let Some(t) = &trace.terminal {
                r.line(format!("terminal: {} run", t.completeness));
            }
            r.line(format!(
                "{w} is {}in the language",
                if trace.member { "" } else { "not " }
            ));
            r.key("levels", trace.levels.len());
            Ok(r)
        }
        TriangleCommand::Complement { chain, dir } => {
            let c = load_chain(chain)?;
            let comp = complement_chain(&c)?;
            fs::create_dir_all(dir)
                .map_err(|e| Error::Unsupported(format!("cannot create {}: {e}", dir.display())))?;
            let path = dir.join("complement.chain");
            fs::write(&path, print_document(&Document::Chain(comp.clone())))
                .map_err(|e| Error::Unsupported(format!("cannot write {}: {e}", path.display())))?;
            let mut r = Report::new(0);
            r.line(format!("wrote {}", path.display()));
            let states: usize = comp
                .chain
                .iter()
                .chain([&comp.terminal])
                .map(|p| p.states().len())
                .sum();
            r.key("file", path.display())
                .key("automata", comp.chain.len() + 1)
                .key("states", states);
            Ok(r)
        }
    }
}

fn bounds(args: &BoundArgs, width: usize) -> Bounds {
    let mut b = Bounds::for_width(width);
    if let Some(d) = args.depth {
        b.depth = d;
    }
    if let Some(h) = args.height {
        b.height = h;
    }
    b.dead_end = match args.dead_end {
        DeadEndArg::MoverLoses => DeadEnd::MoverLoses,
        DeadEndArg::EveLosesFinite => DeadEnd::EveLosesFinite,
    };
    b
}

fn game(cmd: &GameCommand) -> Result<Report, Error> {
    match cmd {
        GameCommand::Solve {
            game,
            config,
            bounds: args,
        } => {
            let g = load_game(game)?;
            let start = parse_configuration(config)?;
            let width = start.height().saturating_sub(1);
            let verdict = Solver::new(&g, limits()?)?.solve(&start, &bounds(args, width))?;
            let (code, v) = match &verdict {
                Verdict::EveWins => (0, "EveWins"),
                Verdict::AdamWins => (1, "AdamWins"),
                Verdict::Unknown(_) => (3, "Unknown"),
            };
            let mut r = Report::new(code);
            r.line(format!("{start}: {verdict}"));
            r.key("verdict", v);
            Ok(r)
        }
        GameCommand::Slice {
            game,
            state,
            n,
            letters,
            bounds: args,
        } => {
            let g = load_game(game)?;
            let q = State::try_new(state)?;
            if !g.process.states().contains(&q) {
                return Err(Error::UnknownName(q.to_string()));
            }
            let alphabet: Vec<Symbol> = match letters {
                Some(ls) => ls
                    .split_whitespace()
                    .map(Symbol::try_new)
                    .collect::<Result<_, _>>()?,
                None => g
                    .process
                    .stack_alphabet()
                    .iter()
                    .filter(|s| *s != g.process.bottom())
                    .cloned()
                    .collect(),
            };
            let candidates = words_up_to(&alphabet, *n);
            let slice: BTreeSet<FiniteWord> =
                Solver::new(&g, limits()?)?.slice(&q, &candidates, &bounds(args, *n))?;
            let mut r = Report::new(0);
            for u in &slice {
                r.line(if u.is_empty() {
                    "λ".to_string()
                } else {
                    u.to_string()
                });
            }
            r.key("candidates", candidates.len())
                .key("winning", slice.len());
            Ok(r)
        }
    }
}

fn catalog_cmd(cmd: &CatalogCommand) -> Result<Report, Error> {
    match cmd {
        CatalogCommand::List => {
            let mut r = Report::new(0);
            let ids = catalog::ids();
            for id in &ids {
                r.line(id.clone());
            }
            r.key("entries", ids.len());
            Ok(r)
        }
        CatalogCommand::Export { name, out } => {
            if let Some(lang) = name.strip_prefix("lang:") {
                let l = catalog::language(lang)?;
                let mut r = Report::new(0);
                r.line(format!("{}: {}", l.name, l.description));
                r.key("kind", format!("{:?}", l.kind()).to_lowercase());
                return Ok(r);
            }
            let text = print_document(&load(name)?);
            let mut r = Report::new(0);
            match out {
                Some(path) => {
                    fs::write(path, &text).map_err(|e| {
                        Error::Unsupported(format!("cannot write {}: {e}", path.display()))
                    })?;
                    r.line(format!("wrote {}", path.display()));
                    r.key("file", path.display());
                }
                None => {
                    r.lines.extend(text.lines().map(str::to_string));
                }
            }
            Ok(r)
        }
    }
}

fn suite(mutant: Option<MutantArg>, only: Option<usize>) -> Result<Report, Error> {
    let cfg = SuiteConfig {
        step_ceiling: limits()?.step_ceiling,
        mutant: mutant.map(|MutantArg::SwappedPartition| Mutant::SwappedPartition),
    };
    let numbers: Vec<usize> = match only {
        Some(n) if (1..=9).contains(&n) => vec![n],
        Some(n) => return Err(Error::UnknownName(format!("criterion {n}"))),
        None => (1..=9).collect(),
    };
    let results: Vec<_> = numbers.iter().map(|&n| run_criterion(n, &cfg)).collect();
    let mut r = Report::new(exit_code(&results) as u8);
    for res in &results {
        r.line(res.to_string());
    }
    for res in &results {
        let tag = match res.outcome {
            omega_pushdown::suite::Outcome::Pass(_) => "pass",
            omega_pushdown::suite::Outcome::Fail(_) => "fail",
            omega_pushdown::suite::Outcome::Exhausted(_) => "exhausted",
        };
        r.key(&format!("criterion{}", res.number), tag);
    }
    r.key("passed", results.iter().filter(|x| x.passed()).count());
    Ok(r)
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Classify { file } => classify(file),
        Command::Accepts { file, word } => accepts(file, word),
        Command::Limit { file, lasso } => limit(file, lasso),
        Command::Triangle(t) => triangle(t),
        Command::Game(g) => game(g),
        Command::Catalog(c) => catalog_cmd(c),
        Command::Suite { mutant, criterion } => suite(*mutant, *criterion),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli).unwrap_or_else(|e| error_report(&e));
    report.print();
    ExitCode::from(report.code)
}
