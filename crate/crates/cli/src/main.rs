//! Command-line front end: decide, explain, dialogue, argue, audit, count
//! and serve.

use std::io::{self, BufRead, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use issuewise::adf::{evaluate, spot_issues, EvaluationTrace, Issue, TRADE_SECRETS_ADF};
use issuewise::argument::{build_argument_tree, prune_by_issues, render_tree};
use issuewise::explain::{render_irac, render_structured, DialogueMove, Explainer, Format};
use issuewise::model::{validate_factors, CATO_CORPUS};
use issuewise::precedent::{audit_consistency, resolution_requirements, Model};
use issuewise::{Case, Error, FactorSet, Outcome, Side};
use issuewise_server::{AppState, Engine};

const ADF_FILE: &str = "trade_secrets.adf";
const CORPUS_FILE: &str = "cato_corpus.json";

#[derive(Debug, Parser)]
#[command(name = "issuewise", version, about = "Issue-based precedent reasoning over factor cases")]
struct Cli {
    /// ADF document; defaults to the asset directory, then the bundled ADF.
    #[arg(long, global = true)]
    adf: Option<PathBuf>,
    /// Case corpus (JSON); defaults to the asset directory, then the bundled corpus.
    #[arg(long, global = true)]
    cases: Option<PathBuf>,
    /// Directory holding trade_secrets.adf and cato_corpus.json.
    #[arg(long, global = true, env = "ISSUEWISE_ASSETS")]
    assets: Option<PathBuf>,
    #[arg(long, global = true, default_value = "reason")]
    model: Model,
    #[arg(long, global = true, default_value = "plain")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide a corpus case or an inline factor list.
    Decide(Target),
    /// IRAC explanation of the decision.
    Explain(Target),
    /// SO?/WHY?/OK dialogue read from standard input.
    Dialogue {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1)]
        issue: usize,
    },
    /// Three-ply argument for a corpus case.
    Argue {
        case: String,
        /// Prune branches that contest no spotted issue.
        #[arg(long, value_enum, default_value = "off")]
        issues: Toggle,
        /// Side to argue for; defaults to the recorded or decided winner.
        #[arg(long)]
        side: Option<Side>,
    },
    /// Corpus agreement and preference consistency.
    Audit,
    /// Precedents needed to resolve every node.
    Count,
    /// Start the HTTP server.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Idle seconds before a dialogue session expires.
        #[arg(long, default_value_t = 1800)]
        idle_secs: u64,
    },
}

#[derive(Debug, clap::Args)]
struct Target {
    /// Name of a case in the corpus.
    case: Option<String>,
    /// Comma-separated factor ids, e.g. F2p,F10d,F24d.
    #[arg(long, value_delimiter = ',')]
    factors: Option<Vec<String>>,
}

/// Failure with its exit status: 1 data or configuration, 2 not found,
/// 3 internal.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn data(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownCase(_) | Error::UnknownNode(_) => 2,
            Error::Undecidable(_) => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Run = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn load(cli: &Cli) -> Result<Engine, Failure> {
    let pick = |explicit: &Option<PathBuf>, file: &str| {
        explicit
            .clone()
            .or_else(|| cli.assets.as_ref().map(|d| d.join(file)))
    };
    let adf = match pick(&cli.adf, ADF_FILE) {
        Some(p) => read(&p)?,
        None => TRADE_SECRETS_ADF.to_string(),
    };
    let corpus = match pick(&cli.cases, CORPUS_FILE) {
        Some(p) => read(&p)?,
        None => CATO_CORPUS.to_string(),
    };
    Ok(Engine::from_texts(&adf, &corpus)?)
}

fn resolve(engine: &Engine, target: &Target) -> Result<Case, Failure> {
    let cat = &engine.base.catalogue;
    match (&target.factors, &target.case) {
        (Some(tokens), name) => {
            let (factors, warnings) = cat.normalize_all(tokens.iter().map(|t| t.trim()))?;
            for w in warnings {
                log::warn!("{w}");
            }
            let violations = validate_factors(&factors, cat);
            if !violations.is_empty() {
                let text: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                return Err(Failure::data(format!("invalid factors: {}", text.join("; "))));
            }
            let name = name.clone().unwrap_or_else(|| "Hypothetical".into());
            Ok(Case::new(name, factors, Outcome::Undecided))
        }
        (None, Some(name)) => Ok(engine.base.case(name)?.clone()),
        (None, None) => Err(Failure::data("give a case name or --factors")),
    }
}

fn ids(set: &FactorSet) -> String {
    set.iter().map(|f| f.as_str()).collect::<Vec<_>>().join(", ")
}

fn print_json(value: &impl serde::Serialize) -> Run {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::data(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn decide(engine: &Engine, case: &Case, format: Format) -> Run {
    let trace: EvaluationTrace = evaluate(&engine.adf, &case.factors)?;
    let issues: Vec<Issue> = spot_issues(&engine.adf, &case.factors, &engine.base.catalogue);
    if format == Format::Structured {
        return print_json(&serde_json::json!({
            "case": case.name,
            "factors": case.factors,
            "decision": trace.outcome(),
            "issues": issues,
            "trace": trace,
        }));
    }
    println!("{}: {}", case.name, trace.outcome());
    println!("Factors: {}", ids(&case.factors));
    let names: Vec<&str> = issues.iter().map(|i| i.node.as_str()).collect();
    println!("Issues: {}", if names.is_empty() { "none".to_string() } else { names.join(", ") });
    println!("Trace:");
    for node in engine.adf.nodes() {
        let Ok(t) = trace.node(&node.name) else { continue };
        let rule = if t.default {
            "default".to_string()
        } else {
            format!("rule {}", t.rule + 1)
        };
        let why = t.justification.as_deref().unwrap_or("-");
        println!("  {:<28} {:<6} {rule:<8} {why}", node.name, t.verdict.to_string());
    }
    Ok(())
}

fn explain(engine: &Engine, case: &Case, model: Model, format: Format) -> Run {
    let ex = Explainer::new(&engine.adf, &engine.base, &engine.phrases, model);
    let e = ex.generate_irac(case)?;
    match format {
        Format::Plain => print!("{}", render_irac(&e)),
        Format::Structured => println!("{}", render_structured(&e)?),
    }
    Ok(())
}

fn dialogue(engine: &Engine, case: &Case, issue: usize, model: Model, format: Format) -> Run {
    let ex = Explainer::new(&engine.adf, &engine.base, &engine.phrases, model);
    let irac = ex.generate_irac(case)?;
    let mut state = ex.dialogue_start(&irac, issue)?;
    let plain = format == Format::Plain;
    if plain {
        println!("Issue {}: {}", state.issue, state.seed);
        println!("Moves: so, why [child], ok, issue <n>");
    }
    let stdin = io::stdin();
    for line in stdin.lock().lines() {
        let line = line.map_err(|e| Failure::data(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(n) = line.strip_prefix("issue ") {
            let n: usize = n.trim().parse().map_err(|_| Failure::data(format!("bad issue `{n}`")))?;
            match ex.dialogue_switch(state.clone(), &irac, n) {
                Ok(s) => {
                    state = s;
                    if plain {
                        println!("Issue {}: {}", state.issue, state.seed);
                    }
                }
                Err(e) => eprintln!("{e}"),
            }
            continue;
        }
        let spec = line.replacen(' ', ":", 1);
        let mv: DialogueMove = match spec.parse() {
            Ok(m) => m,
            Err(e) => {
                eprintln!("{e}");
                continue;
            }
        };
        let done = mv == DialogueMove::Ok;
        match ex.dialogue_move(state.clone(), mv) {
            Ok((s, text)) => {
                state = s;
                if plain && !text.is_empty() {
                    let x = state.transcript.last().expect("a move was just recorded");
                    match x.reply {
                        Some(n) => println!("Reply {n}: {text}"),
                        None => println!("{text}"),
                    }
                }
            }
            Err(e) => eprintln!("{e}"),
        }
        if done {
            break;
        }
        io::stdout().flush().ok();
    }
    if !plain {
        print_json(&state)?;
    }
    Ok(())
}

fn argue(engine: &Engine, name: &str, pruned: bool, side: Option<Side>, format: Format) -> Run {
    let case = engine.base.case(name)?;
    let side = match (side, case.outcome.side()) {
        (Some(s), _) | (None, Some(s)) => s,
        (None, None) => evaluate(&engine.adf, &case.factors)?.outcome(),
    };
    let mut tree = build_argument_tree(&engine.base, &engine.adf, case, side)?;
    if pruned {
        let issues = spot_issues(&engine.adf, &case.factors, &engine.base.catalogue);
        tree = prune_by_issues(&tree, &issues, &engine.adf);
    }
    match format {
        Format::Plain => print!("{}", render_tree(&tree, name, &engine.base.catalogue)),
        Format::Structured => print_json(&tree)?,
    }
    Ok(())
}

fn audit(engine: &Engine, model: Model, format: Format) -> Run {
    let mut agree = 0;
    let mut undecided = 0;
    let mut disagreements = Vec::new();
    for case in &engine.base.cases {
        let side = evaluate(&engine.adf, &case.factors)?.outcome();
        match case.outcome.side() {
            Some(recorded) if recorded != side => {
                disagreements.push(format!("{}: recorded {recorded}, decided {side}", case.name))
            }
            Some(_) => agree += 1,
            None => {
                agree += 1;
                undecided += 1;
            }
        }
    }
    let conflicts = audit_consistency(&engine.adf, &engine.base, model)?;
    let total = engine.base.len();
    if format == Format::Structured {
        print_json(&serde_json::json!({
            "cases": total,
            "agree": agree,
            "undecided": undecided,
            "disagreements": disagreements,
            "conflicts": conflicts,
        }))?;
    } else {
        let note = if undecided > 0 {
            format!(" ({undecided} undecided)")
        } else {
            String::new()
        };
        println!(
            "{agree}/{total} outcomes agree{note}; {} preference conflicts",
            conflicts.len()
        );
        for d in &disagreements {
            println!("  {d}");
        }
        for c in &conflicts {
            println!("  {}: {} vs {}", c.node, c.first, c.second);
        }
    }
    if disagreements.is_empty() && conflicts.is_empty() {
        Ok(())
    } else {
        Err(Failure::data("audit found problems"))
    }
}

fn count(engine: &Engine, format: Format) -> Run {
    let report = resolution_requirements(&engine.adf, &engine.base.catalogue);
    if format == Format::Structured {
        return print_json(&report);
    }
    println!("{:<28} {:>8} {:>4} {:>8}", "node", "children", "raw", "possible");
    for n in &report.nodes {
        println!("{:<28} {:>8} {:>4} {:>8}", n.node, n.children, n.raw, n.possible);
    }
    println!("total: {} possible ({} raw), max per node {}", report.total_possible, report.total_raw, report.max_raw());
    Ok(())
}

fn serve(engine: Engine, host: &str, port: u16, idle: u64) -> Run {
    let addr: SocketAddr = format!("{host}:{port}")
        .parse()
        .map_err(|e| Failure::data(format!("bad address {host}:{port}: {e}")))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure {
        code: 3,
        message: e.to_string(),
    })?;
    let state = AppState::new(engine, Duration::from_secs(idle));
    runtime
        .block_on(issuewise_server::serve(state, addr))
        .map_err(|e| Failure::data(format!("server: {e}")))
}

fn run(cli: Cli) -> Run {
    let engine = load(&cli)?;
    let (model, format) = (cli.model, cli.format);
    match &cli.command {
        Command::Decide(t) => decide(&engine, &resolve(&engine, t)?, format),
        Command::Explain(t) => explain(&engine, &resolve(&engine, t)?, model, format),
        Command::Dialogue { target, issue } => {
            dialogue(&engine, &resolve(&engine, target)?, *issue, model, format)
        }
        Command::Argue { case, issues, side } => argue(&engine, case, *issues == Toggle::On, *side, format),
        Command::Audit => audit(&engine, model, format),
        Command::Count => count(&engine, format),
        Command::Serve { port, host, idle_secs } => serve(engine, host, *port, *idle_secs),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            e.print().ok();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            e.print().ok();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

