//! The `quantifix` command line: enumerate bounded languages, weaken
//! formula sets by states, abstract state sequences, compute bounded least
//! fixpoints of protocol models, and check inductiveness and safety.
//!
//! Exit codes: 0 success (and check passed), 1 check failed, 2 parse or
//! input error, 3 language too large, 4 cap exceeded.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use engine::{
    check_inductive, check_safety, lfp_symbolic_abstraction, weaken_set, Antichain, FixOpts,
    FixpointError, LSet, RunReport, Timings,
};
use fol::{Signature, State};
use lang::{
    bottom, enumerate_canonical, enumerate_formulas, is_canonical, parse_formula,
    parse_language_file, render, EnumError, Formula, LanguageSpec,
};
use oracle::OracleBudget;
use tsys::{parse_model, Bounds, ProtocolModel};

#[derive(Parser)]
#[command(name = "quantifix", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every formula of a bounded language, one per line.
    Enumerate(EnumerateArgs),
    /// Weaken a formula set (default: the bottom element) by one or more
    /// states and print the resulting antichain.
    Weaken(WeakenArgs),
    /// Abstract a sequence of states: the antichain representing all
    /// language formulas satisfied by every state.
    Abstract(AbstractArgs),
    /// Compute the bounded least fixpoint of the best abstract transformer
    /// of a protocol model and write a JSON report.
    Lfp(LfpArgs),
    /// Check bounded inductiveness and safety of a formula set against a
    /// model.
    Check(CheckArgs),
    /// Brute-force reference computations, for debugging.
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// Language file (s-expression text).
    #[arg(long)]
    language: PathBuf,
    /// Model file supplying the signature when the language file has none.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Abort when the language has more formulas than this.
    #[arg(long, default_value_t = 100_000)]
    limit: usize,
    /// List only canonical formulas.
    #[arg(long)]
    canonical_only: bool,
}

#[derive(Args)]
struct WeakenArgs {
    #[arg(long)]
    language: PathBuf,
    #[arg(long)]
    model: Option<PathBuf>,
    /// State file(s), applied in order.
    #[arg(long, required = true)]
    state: Vec<PathBuf>,
    /// Initial formulas, one rendered formula per line (default: bottom).
    #[arg(long)]
    formulas: Option<PathBuf>,
    /// Canonicalize the initial formulas instead of rejecting non-canonical
    /// ones.
    #[arg(long)]
    auto_canonicalize: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct AbstractArgs {
    #[arg(long)]
    language: PathBuf,
    #[arg(long)]
    model: Option<PathBuf>,
    /// State file(s), in order.
    #[arg(long, required = true)]
    state: Vec<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct LfpArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    language: PathBuf,
    /// Per-sort universe bounds, e.g. `node=2,value=3`.
    #[arg(long)]
    bounds: String,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    max_states: Option<usize>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exclude wall-clock fields, making reports byte-comparable.
    #[arg(long)]
    no_timings: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    language: PathBuf,
    #[arg(long)]
    bounds: String,
    /// Formulas to check, one rendered formula per line.
    #[arg(long)]
    formulas: PathBuf,
    #[arg(long)]
    max_states: Option<usize>,
    #[arg(long)]
    auto_canonicalize: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(subcommand)]
    command: OracleCommand,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// The upward closure of a formula set within the whole language.
    UpwardClosure {
        #[arg(long)]
        language: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
        /// Base formulas, one per line (default: bottom).
        #[arg(long)]
        formulas: Option<PathBuf>,
    },
    /// The weaken operator computed literally from its definition.
    NaiveWeaken {
        #[arg(long)]
        language: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        formulas: Option<PathBuf>,
    },
    /// The Kleene iteration for the bounded least fixpoint.
    Kleene {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        language: PathBuf,
        #[arg(long)]
        bounds: String,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    fn parse(message: impl std::fmt::Display) -> Self {
        CliError::new(2, message.to_string())
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        CliError::new(3, e.to_string())
    }
}

impl From<FixpointError> for CliError {
    fn from(e: FixpointError) -> Self {
        let code = match &e {
            FixpointError::IterationCap(_) | FixpointError::StateCap(_) => 4,
            _ => 2,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<engine::WeakenError> for CliError {
    fn from(e: engine::WeakenError) -> Self {
        CliError::parse(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Weaken(args) => cmd_weaken(args),
        Command::Abstract(args) => cmd_abstract(args),
        Command::Lfp(args) => cmd_lfp(args),
        Command::Check(args) => cmd_check(args),
        Command::Oracle(args) => cmd_oracle(args),
    }
}

// ---------------------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------------------

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<ProtocolModel, CliError> {
    parse_model(&read(path)?).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

/// Loads a language file, taking the signature from the file itself or from
/// an accompanying model. When both declare one they must agree.
fn load_language(
    language: &Path,
    model: Option<&ProtocolModel>,
) -> Result<(Arc<Signature>, Arc<LanguageSpec>), CliError> {
    let parsed = parse_language_file(&read(language)?)
        .map_err(|e| CliError::parse(format!("{}: {e}", language.display())))?;
    let sig: Arc<Signature> = match (parsed.signature(), model) {
        (Some(own), Some(m)) => {
            if own != m.signature.as_ref() {
                return Err(CliError::parse(format!(
                    "{}: language file signature differs from the model's",
                    language.display()
                )));
            }
            Arc::clone(&m.signature)
        }
        (Some(own), None) => Arc::new(own.clone()),
        (None, Some(m)) => Arc::clone(&m.signature),
        (None, None) => {
            return Err(CliError::parse(format!(
                "{}: language file declares no signature and no --model was given",
                language.display()
            )))
        }
    };
    let spec = parsed
        .resolve(&sig)
        .map_err(|e| CliError::parse(format!("{}: {e}", language.display())))?;
    Ok((sig, spec))
}

fn load_state(path: &Path, sig: &Arc<Signature>, spec: &LanguageSpec) -> Result<State, CliError> {
    let state = fol::parse_state(&read(path)?, sig)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let free = spec.free_vars();
    for (name, sort) in &free {
        match state.assignment.get(name) {
            None => {
                return Err(CliError::parse(format!(
                    "{}: state does not assign free variable {name}",
                    path.display()
                )))
            }
            Some(e) if e >= state.structure.size(sort) => {
                return Err(CliError::parse(format!(
                    "{}: assignment of {name} is outside the {sort} universe",
                    path.display()
                )))
            }
            Some(_) => {}
        }
    }
    Ok(state)
}

/// Reads a formula file: one rendered formula per line, blank lines and `#`
/// comments ignored.
fn load_formulas(
    path: &Path,
    spec: &LanguageSpec,
    sig: &Signature,
    auto_canonicalize: bool,
) -> Result<Vec<Formula>, CliError> {
    let mut formulas = Vec::new();
    for (idx, line) in read(path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f = parse_formula(line, spec, sig).map_err(|e| {
            CliError::parse(format!("{}: line {}: {e}", path.display(), idx + 1))
        })?;
        let f = if auto_canonicalize {
            lang::canonicalize(spec, &f)
        } else if !is_canonical(spec, &f) {
            return Err(CliError::parse(format!(
                "{}: line {}: formula is not canonical (use --auto-canonicalize)",
                path.display(),
                idx + 1
            )));
        } else {
            f
        };
        formulas.push(f);
    }
    Ok(formulas)
}

fn parse_bounds(text: &str, sig: &Signature) -> Result<Bounds, CliError> {
    Bounds::parse(text, sig).map_err(CliError::parse)
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_enumerate(args: EnumerateArgs) -> Result<ExitCode, CliError> {
    let model = args.model.as_deref().map(load_model).transpose()?;
    let (_, spec) = load_language(&args.language, model.as_ref())?;
    let formulas = if args.canonical_only {
        enumerate_canonical(&spec, args.limit)?
    } else {
        enumerate_formulas(&spec, args.limit)?
    };
    let mut out = String::new();
    for f in &formulas {
        out.push_str(&render(&spec, f));
        out.push('\n');
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_weaken(args: WeakenArgs) -> Result<ExitCode, CliError> {
    let model = args.model.as_deref().map(load_model).transpose()?;
    let (sig, spec) = load_language(&args.language, model.as_ref())?;
    let initial = match &args.formulas {
        Some(path) => load_formulas(path, &spec, &sig, args.auto_canonicalize)?,
        None => vec![bottom(&spec)],
    };
    let mut set = LSet::new(Arc::clone(&spec));
    for f in engine::min_antichain(&spec, initial) {
        set.insert(f);
    }
    for path in &args.state {
        let state = load_state(path, &sig, &spec)?;
        weaken_set(&mut set, &state, args.threads.max(1))?;
    }
    for f in set.iter_sorted() {
        println!("{}", render(&spec, &f));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_abstract(args: AbstractArgs) -> Result<ExitCode, CliError> {
    let model = args.model.as_deref().map(load_model).transpose()?;
    let (sig, spec) = load_language(&args.language, model.as_ref())?;
    let states = args
        .state
        .iter()
        .map(|p| load_state(p, &sig, &spec))
        .collect::<Result<Vec<_>, _>>()?;
    let result = engine::abstract_states(&spec, &states, args.threads.max(1))?;
    for f in result.formulas() {
        println!("{}", render(&spec, f));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_lfp(args: LfpArgs) -> Result<ExitCode, CliError> {
    let started = Instant::now();
    let model = load_model(&args.model)?;
    let (_, spec) = load_language(&args.language, Some(&model))?;
    if !spec.is_closed() {
        return Err(CliError::parse(
            "the fixpoint needs a closed language (no free variables)",
        ));
    }
    let bounds = parse_bounds(&args.bounds, &model.signature)?;
    let opts = FixOpts {
        max_iters: args.max_iters,
        max_states: args.max_states,
        threads: args.threads.max(1),
    };
    let (result, stats) = lfp_symbolic_abstraction(&model, &bounds, &spec, opts)?;
    let inductive = check_inductive(&model, &bounds, &result, args.max_states)?.is_none();
    let safe = match &model.safety {
        Some(_) => Some(check_safety(&model, &bounds, &result)?),
        None => None,
    };
    let report = RunReport {
        bounds: bounds
            .0
            .iter()
            .map(|(s, &n)| (s.name().to_string(), n))
            .collect::<BTreeMap<_, _>>(),
        iterations: stats.iterations,
        peak_size: stats.peak_size,
        formula_count: result.len(),
        formulas: result
            .formulas()
            .iter()
            .map(|f| render(&spec, f))
            .collect(),
        inductive,
        safe,
        timings: (!args.no_timings)
            .then(|| Timings::from_stats(&stats, started.elapsed().as_millis() as u64)),
    };
    let json = report.to_json();
    match &args.out {
        Some(path) => std::fs::write(path, json.as_bytes())
            .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?,
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, CliError> {
    let model = load_model(&args.model)?;
    let (sig, spec) = load_language(&args.language, Some(&model))?;
    let bounds = parse_bounds(&args.bounds, &model.signature)?;
    let formulas = load_formulas(&args.formulas, &spec, &sig, args.auto_canonicalize)?;
    let antichain = Antichain::from_canonical(Arc::clone(&spec), formulas);
    let counterexample = check_inductive(&model, &bounds, &antichain, args.max_states)?;
    let inductive = counterexample.is_none();
    println!("inductive: {inductive}");
    let mut ok = inductive;
    if let Some(cti) = counterexample {
        eprintln!("counterexample: {}", fol::render_state(&cti));
    }
    if model.safety.is_some() {
        let safe = check_safety(&model, &bounds, &antichain)?;
        println!("safe: {safe}");
        ok = ok && safe;
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode, CliError> {
    let budget = OracleBudget::default();
    match args.command {
        OracleCommand::UpwardClosure {
            language,
            model,
            formulas,
        } => {
            let model = model.as_deref().map(load_model).transpose()?;
            let (sig, spec) = load_language(&language, model.as_ref())?;
            let base = match &formulas {
                Some(path) => load_formulas(path, &spec, &sig, true)?,
                None => vec![bottom(&spec)],
            };
            let up = oracle::upward_closure(&spec, &base, &budget)
                .map_err(|e| CliError::new(3, e.to_string()))?;
            for f in &up {
                println!("{}", render(&spec, f));
            }
        }
        OracleCommand::NaiveWeaken {
            language,
            model,
            state,
            formulas,
        } => {
            let model = model.as_deref().map(load_model).transpose()?;
            let (sig, spec) = load_language(&language, model.as_ref())?;
            let state = load_state(&state, &sig, &spec)?;
            let base = match &formulas {
                Some(path) => load_formulas(path, &spec, &sig, true)?,
                None => vec![bottom(&spec)],
            };
            let mut pooled = Vec::new();
            for phi in &base {
                pooled.extend(
                    oracle::naive_weaken(&spec, phi, &state, &budget)
                        .map_err(|e| CliError::new(3, e.to_string()))?,
                );
            }
            for f in oracle::naive_min(&spec, pooled) {
                println!("{}", render(&spec, &f));
            }
        }
        OracleCommand::Kleene {
            model,
            language,
            bounds,
        } => {
            let model = load_model(&model)?;
            let (_, spec) = load_language(&language, Some(&model))?;
            let bounds = parse_bounds(&bounds, &model.signature)?;
            let lfp = oracle::kleene_lfp(&model, &bounds, &spec, &budget)
                .map_err(|e| CliError::new(3, e.to_string()))?;
            for f in &lfp {
                println!("{}", render(&spec, f));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
