use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use brane_cfa::cfa::{estimate_from_str, estimate_to_string, solve_with, Estimate, Mode, SolverConfig};
use brane_cfa::properties::{check_dynamic, check_static, parse_queries, Depth, PropertyQuery};
use brane_cfa::semantics::{
    explore_with, to_dot, to_json, to_text, ExploreConfig, ExploreError, MiRegistry, DEFAULT_MEMBRANE_CAP,
    DEFAULT_STATE_CAP,
};
use brane_cfa::syntax::{parse, pretty, SystemTerm};
use brane_cfa::verify::{self, VerifyConfig};

#[derive(Parser, Debug)]
#[command(name = "brane-cfa", version, about = "Parse, run and analyze Brane Calculi systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Print the term with every membrane label made explicit.
    Parse,
    /// Explore the reachable states.
    Run,
    /// Compute the estimate.
    Analyze,
    /// Check spatial properties from a query file.
    Check,
    /// Run the subject-reduction, soundness, congruence and transfer suites.
    Verify,
}

#[derive(clap::Args, Debug)]
struct Options {
    /// Exploration depth.
    #[arg(long, global = true, default_value_t = 4)]
    depth: usize,
    /// How many copies of a replicated membrane may be materialized.
    #[arg(long = "unfold", global = true, default_value_t = 2)]
    unfold_budget: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_CAP, value_parser = positive)]
    state_cap: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_MEMBRANE_CAP, value_parser = positive)]
    membrane_cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Sound)]
    mode: ModeArg,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Query file for `check` and `verify`.
    #[arg(long, global = true)]
    queries: Option<PathBuf>,
    /// Use this estimate instead of solving.
    #[arg(long, global = true)]
    estimate_file: Option<PathBuf>,
    /// Read "inside" as any depth of nesting instead of direct containment.
    #[arg(long, global = true)]
    transitive: bool,
    /// Seed for the random rearrangements of `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(global = true)]
    input: Option<PathBuf>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ModeArg {
    Sound,
    StrictPaper,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Syntax(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    StateCap(String),
    #[error("{0}")]
    MembraneCap(String),
    #[error("{0}")]
    Verify(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Syntax(_) => 1,
            Failure::Io(_) => 2,
            Failure::StateCap(_) => 3,
            Failure::MembraneCap(_) => 4,
            Failure::Verify(_) => 5,
        }
    }
}

impl From<ExploreError> for Failure {
    fn from(e: ExploreError) -> Self {
        match e {
            ExploreError::StateCap { .. } => Failure::StateCap(e.to_string()),
            ExploreError::MembraneCap(m) => Failure::MembraneCap(m.to_string()),
        }
    }
}

struct Paint(bool);

impl Paint {
    fn from_env(terminal: bool) -> Self {
        let off = std::env::var("BRANE_CFA_COLOR").is_ok_and(|v| v == "0");
        Paint(terminal && !off)
    }

    fn wrap(&self, code: &str, s: &str) -> String {
        if self.0 {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }
}

fn warn(msg: &str) {
    let paint = Paint::from_env(std::io::stderr().is_terminal());
    eprintln!("{} {msg}", paint.wrap("33", "warning:"));
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

impl Options {
    fn term(&self) -> Result<SystemTerm, Failure> {
        let path = self
            .input
            .as_ref()
            .ok_or_else(|| Failure::Io("no input file given".into()))?;
        let text = read_file(path)?;
        parse(&text).map_err(|e| Failure::Syntax(format!("{}:{e}", path.display())))
    }

    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Sound => Mode::Sound,
            ModeArg::StrictPaper => Mode::StrictPaper,
        }
    }

    fn depth_reading(&self) -> Depth {
        if self.transitive {
            Depth::Transitive
        } else {
            Depth::Direct
        }
    }

    fn explore_config(&self) -> ExploreConfig {
        ExploreConfig {
            depth: self.depth,
            unfold_budget: self.unfold_budget,
            state_cap: self.state_cap,
        }
    }

    fn registry(&self) -> MiRegistry {
        MiRegistry::with_cap(self.membrane_cap)
    }

    fn estimate(&self, term: &SystemTerm) -> Result<Estimate, Failure> {
        if let Some(path) = &self.estimate_file {
            return estimate_from_str(&read_file(path)?)
                .map_err(|e| Failure::Syntax(format!("{}: {e}", path.display())));
        }
        let cfg = SolverConfig {
            mode: self.mode(),
            membrane_cap: self.membrane_cap,
        };
        solve_with(term, &cfg, &mut self.registry()).map_err(|e| {
            Failure::MembraneCap(format!(
                "analysis did not terminate within the membrane cap: {e}\n\
                 the term may generate unboundedly many membranes; raise --membrane-cap to search further"
            ))
        })
    }

    fn queries(&self, required: bool) -> Result<Vec<PropertyQuery>, Failure> {
        match &self.queries {
            Some(path) => {
                parse_queries(&read_file(path)?).map_err(|e| Failure::Syntax(format!("{}: {e}", path.display())))
            }
            None if required => Err(Failure::Io("`check` needs --queries FILE".into())),
            None => Ok(Vec::new()),
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn cmd_parse(o: &Options) -> Result<String, Failure> {
    Ok(format!("{}\n", pretty(&o.term()?)))
}

fn cmd_run(o: &Options) -> Result<String, Failure> {
    let term = o.term()?;
    let ts = explore_with(&term, &o.explore_config(), o.registry())?;
    if ts.truncated {
        warn(&format!(
            "exploration truncated by depth {} or unfolding budget {}",
            o.depth, o.unfold_budget
        ));
    }
    Ok(match o.format.unwrap_or(Format::Text) {
        Format::Json => json_text(&to_json(&ts)),
        Format::Dot => to_dot(&ts),
        Format::Text => to_text(&ts),
    })
}

fn cmd_analyze(o: &Options) -> Result<String, Failure> {
    let term = o.term()?;
    let est = o.estimate(&term)?;
    Ok(match o.format.unwrap_or(Format::Json) {
        Format::Text => est.to_string(),
        _ => estimate_to_string(&est),
    })
}

fn cmd_check(o: &Options) -> Result<String, Failure> {
    let term = o.term()?;
    let queries = o.queries(true)?;
    let est = o.estimate(&term)?;
    let ts = if o.depth > 0 {
        Some(explore_with(&term, &o.explore_config(), o.registry())?)
    } else {
        None
    };
    let depth = o.depth_reading();
    let mut results = Vec::new();
    for q in &queries {
        let s = check_static(&est, q, depth);
        if s.vacuous {
            warn(&format!(
                "`{q}` mentions a label absent from the estimate; it holds vacuously"
            ));
        }
        let mut entry = json!({"query": q.to_string(), "static": s.holds});
        if s.vacuous {
            entry["vacuous"] = json!(true);
        }
        if let Some(ts) = &ts {
            let d = check_dynamic(ts, q, depth);
            entry["dynamic"] = json!(d.holds);
            entry["inconclusive"] = json!(d.inconclusive);
        }
        results.push(entry);
    }
    Ok(json_text(&Value::Array(results)))
}

fn cmd_verify(o: &Options) -> Result<String, Failure> {
    let term = o.term()?;
    let est = o.estimate(&term)?;
    let queries = o.queries(false)?;
    let cfg = VerifyConfig {
        explore: o.explore_config(),
        mode: o.mode(),
        seed: o.seed,
        depth: o.depth_reading(),
        ..VerifyConfig::default()
    };
    let report = verify::verify(&term, &est, &queries, &cfg)?;
    let out = match o.format.unwrap_or(Format::Text) {
        Format::Json => json_text(&json!({
            "passed": report.passed(),
            "truncated": report.truncated,
            "obligations": report.obligations.iter().map(|ob| json!({
                "suite": ob.suite,
                "passed": ob.passed,
                "checked": ob.checked,
                "counterexample": ob.counterexample,
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let paint = Paint::from_env(o.output.is_none() && std::io::stdout().is_terminal());
            let mut s = String::new();
            for ob in &report.obligations {
                let tag = if ob.passed {
                    paint.wrap("32", "pass")
                } else {
                    paint.wrap("31", "FAIL")
                };
                s.push_str(&format!("{tag} {} ({} checked)\n", ob.suite, ob.checked));
            }
            if report.truncated {
                s.push_str("note: exploration truncated\n");
            }
            s
        }
    };
    match report.first_failure() {
        None => Ok(out),
        Some(ob) => {
            print!("{out}");
            Err(Failure::Verify(format!(
                "{} failed; first counterexample: {}",
                ob.suite,
                ob.counterexample.as_deref().unwrap_or("none recorded")
            )))
        }
    }
}

fn emit(o: &Options, text: &str) -> Result<(), Failure> {
    match &o.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = &cli.opts;
    let result = match cli.command {
        Command::Parse => cmd_parse(o),
        Command::Run => cmd_run(o),
        Command::Analyze => cmd_analyze(o),
        Command::Check => cmd_check(o),
        Command::Verify => cmd_verify(o),
    }
    .and_then(|text| emit(o, &text));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let paint = Paint::from_env(std::io::stderr().is_terminal());
            eprintln!("{} {f}", paint.wrap("31", "error:"));
            ExitCode::from(f.code())
        }
    }
}
