//! Command-line front end: parses a `.gb` session, runs a computation or an
//! identity suite and renders the result as text or as a JSON report.

mod suite;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use superbracket::brackets::{
    check_kp_hamiltonian, higher_poisson_bracket, higher_schouten_bracket, jacobiator, ks_bracket,
};
use superbracket::dsl::{parse, Session};
use superbracket::operator::check_nilpotent;
use superbracket::phase::{hamiltonian_vector_field, linear_hamiltonian, r_pullback, schouten_bracket};
use superbracket::random::Sampler;
use superbracket::{
    BracketReport, CheckEntry, Error, HierarchyKind, HigherPoissonStructure, Poly, ReportDocument,
    Residual,
};

pub use suite::verify_suite;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IDENTITY: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "superbracket", version, about = "Higher Poisson, Koszul-Schouten and Schouten brackets")]
struct Cli {
    /// Emit a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Print computed values only, without the check report.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the master equation [[P,P]] = 0 and nilpotency of L_P.
    CheckMaster { file: PathBuf },
    /// Evaluate one bracket.
    Bracket {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Comma-separated argument expressions.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 0..)]
        args: Vec<String>,
    },
    /// Randomized Jacobiator suite for one hierarchy.
    Jacobiator {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Full identity suite.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Total symbol K_P, its pullback and the linear Hamiltonian of Q_P.
    Symbol { file: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Poisson,
    Ks,
    Schouten,
}

impl From<Kind> for HierarchyKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Poisson => HierarchyKind::HigherPoisson,
            Kind::Ks => HierarchyKind::KoszulSchouten,
            Kind::Schouten => HierarchyKind::HigherSchouten,
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failure(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome { code, stdout: String::new(), stderr }
    }
}

struct Input {
    session: Session,
    digest: String,
}

fn load(file: &PathBuf) -> Result<Input, Outcome> {
    let bytes = std::fs::read(file)
        .map_err(|e| Outcome::failure(EXIT_USAGE, format!("error: cannot read {}: {e}", file.display())))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| Outcome::failure(EXIT_USAGE, format!("error: {} is not UTF-8", file.display())))?;
    let session = parse(&text)
        .map_err(|e| Outcome::failure(EXIT_USAGE, format!("error: {}: {e}", file.display())))?;
    Ok(Input { session, digest })
}

fn structure_body(input: &Input) -> Result<Poly, Outcome> {
    input
        .session
        .structure()
        .cloned()
        .ok_or_else(|| Outcome::failure(EXIT_USAGE, "error: no binding named `P`"))
}

fn structure(input: &Input) -> Result<HigherPoissonStructure, Outcome> {
    let body = structure_body(input)?;
    HigherPoissonStructure::new(input.session.manifold().clone(), body).map_err(invalid)
}

fn invalid(e: Error) -> Outcome {
    match e {
        Error::OddStructure | Error::MasterEquation { .. } | Error::WrongBundle { .. } => {
            Outcome::failure(EXIT_INVALID, format!("error: {e}"))
        }
        other => Outcome::failure(EXIT_USAGE, format!("error: {other}")),
    }
}

/// Parse arguments and run; never exits the process.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_PASS,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => Outcome::failure(EXIT_USAGE, rendered),
            };
        }
    };
    match dispatch(&cli) {
        Ok(o) | Err(o) => o,
    }
}

struct Run {
    seed: u64,
    reports: Vec<BracketReport>,
    text: String,
    /// Exit code when every check passes.
    code: i32,
}

fn dispatch(cli: &Cli) -> Result<Outcome, Outcome> {
    let (input, run) = match &cli.command {
        Command::CheckMaster { file } => {
            let input = load(file)?;
            let run = check_master(&input)?;
            (input, run)
        }
        Command::Bracket { file, kind, args } => {
            let input = load(file)?;
            let run = bracket(&input, (*kind).into(), args)?;
            (input, run)
        }
        Command::Jacobiator { file, kind, order, trials, seed } => {
            let input = load(file)?;
            let run = jacobiators(&input, (*kind).into(), *order, *trials, *seed)?;
            (input, run)
        }
        Command::Verify { file, seed } => {
            let input = load(file)?;
            let p = structure(&input)?;
            let reports = verify_suite(&p, *seed);
            (input, Run { seed: *seed, reports, text: String::new(), code: EXIT_PASS })
        }
        Command::Symbol { file } => {
            let input = load(file)?;
            let run = symbol(&input)?;
            (input, run)
        }
    };
    Ok(render(cli, &input, run))
}

fn render(cli: &Cli, input: &Input, run: Run) -> Outcome {
    let m = input.session.manifold().clone();
    let entries: Vec<CheckEntry> = run.reports.iter().map(|r| r.to_entry(&m)).collect();
    let document = ReportDocument::new(VERSION, input.digest.clone(), run.seed, entries);
    let code = if document.passed { run.code } else { EXIT_IDENTITY };

    let mut stdout = String::new();
    if cli.json {
        stdout = serde_json::to_string_pretty(&document).expect("report serializes");
        stdout.push('\n');
    } else {
        stdout.push_str(&run.text);
    }
    if !cli.json && !cli.quiet {
        for entry in &document.checks {
            let args = entry.args.join(", ");
            if entry.passed {
                let _ = writeln!(stdout, "PASS {}({args})", entry.name);
            } else {
                let _ = writeln!(stdout, "FAIL {}({args}): {}", entry.name, entry.residual);
            }
        }
        let verdict = if document.passed { "passed" } else { "FAILED" };
        let _ = writeln!(stdout, "{} of {} checks passed; {verdict}",
            document.checks.iter().filter(|c| c.passed).count(), document.checks.len());
    }
    let stderr = if code == EXIT_IDENTITY {
        "error: identity check failed\n".to_string()
    } else {
        String::new()
    };
    Outcome { code, stdout, stderr }
}

fn check_master(input: &Input) -> Result<Run, Outcome> {
    let m = input.session.manifold().clone();
    let body = structure_body(input)?;
    match body.parity() {
        Some(p) if p.is_even() => {}
        _ => return Err(invalid(Error::OddStructure)),
    }
    let rendered = vec![m.render(&body)];
    let mut reports = vec![BracketReport::new(
        "master_equation",
        rendered,
        Residual::Poly(schouten_bracket(&body, &body)),
    )];
    if reports[0].passed {
        let p = structure(input)?;
        reports.push(check_nilpotent(&p));
    }
    Ok(Run { seed: 0, reports, text: String::new(), code: EXIT_PASS })
}

fn bracket(input: &Input, kind: HierarchyKind, raw: &[String]) -> Result<Run, Outcome> {
    let p = structure(input)?;
    let m = p.manifold().clone();
    let mut args = Vec::new();
    for text in raw.iter().filter(|t| !t.trim().is_empty()) {
        let value = input
            .session
            .parse_expr(text)
            .map_err(|e| Outcome::failure(EXIT_USAGE, format!("error: argument `{text}`: {e}")))?;
        args.push(value);
    }
    let value = match kind {
        HierarchyKind::HigherPoisson => higher_poisson_bracket(&p, &args),
        HierarchyKind::KoszulSchouten => ks_bracket(&p, &args),
        HierarchyKind::HigherSchouten => higher_schouten_bracket(&p, &args),
    }
    .map_err(|e| Outcome::failure(EXIT_USAGE, format!("error: {e}")))?;
    let rendered: Vec<String> = args.iter().map(|a| m.render(a)).collect();
    let text = format!("{}\n", m.render(&value));
    let mut report = BracketReport::new(format!("bracket_{}", kind.label()), rendered, Residual::Poly(value));
    // a bracket value is a result, not a residual
    report.passed = true;
    Ok(Run { seed: 0, reports: vec![report], text, code: EXIT_PASS })
}

fn jacobiators(input: &Input, kind: HierarchyKind, order: usize, trials: usize, seed: u64) -> Result<Run, Outcome> {
    let p = structure(input)?;
    let mut sampler = Sampler::new(p.manifold().clone(), seed);
    let mut reports = Vec::with_capacity(trials);
    for _ in 0..trials {
        let args: Vec<Poly> = (0..order)
            .map(|_| match kind {
                HierarchyKind::HigherPoisson => sampler.any_base_function(),
                _ => sampler.any_form(2),
            })
            .collect();
        let report = jacobiator(&p, kind, &args, order)
            .map_err(|e| Outcome::failure(EXIT_USAGE, format!("error: {e}")))?;
        reports.push(report.with_seed(seed));
    }
    Ok(Run { seed, reports, text: String::new(), code: EXIT_PASS })
}

fn symbol(input: &Input) -> Result<Run, Outcome> {
    let p = structure(input)?;
    let m = p.manifold().clone();
    let k = p.lie_derivative().total_symbol();
    let pulled = r_pullback(&k);
    let hamiltonian = linear_hamiltonian(&hamiltonian_vector_field(&p));
    let mut text = String::new();
    let _ = writeln!(text, "K_P = {}", m.render(&k));
    let _ = writeln!(text, "R*K_P = {}", m.render(&pulled));
    let _ = writeln!(text, "H_Q = {}", m.render(&hamiltonian));
    Ok(Run { seed: 0, reports: vec![check_kp_hamiltonian(&p)], text, code: EXIT_PASS })
}
