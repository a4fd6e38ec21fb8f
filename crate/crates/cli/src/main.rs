mod commands;
mod document;
mod suites;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use commands::Outcome;
use document::{read_document, FieldKind, GermDocument, InputError};

#[derive(Parser, Debug)]
#[command(name = "germlab", version, about = "Classify germs of symmetric matrix families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Germ document (JSON).
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Write the JSON report here; the summary then goes to stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Overrides the document's field.
    #[arg(long, value_enum)]
    field: Option<FieldKind>,
}

#[derive(Args, Debug)]
struct WithDmax {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = 10)]
    dmax: u32,
}

#[derive(Args, Debug)]
struct WithDegree {
    #[command(flatten)]
    input: Input,
    /// Jet degree [default: 2 for tangent-dim and transversal, 3 for
    /// orient-search, 4 for lda and divmod].
    #[arg(long)]
    degree: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Match against the normal forms of matching size.
    Classify(WithDmax),
    /// Ge-codimension with its stabilization trace.
    Codim(WithDmax),
    /// Dimension of the jet-group orbit tangent of the k-jet.
    TangentDim(WithDegree),
    /// Complete transversal of degree k+1 over the k-jet.
    Transversal(WithDegree),
    /// Diagonal quasi-homogeneity weights.
    Qh(Input),
    /// Certificate for or against symmetric quasi-homogeneity.
    SqhObstruct(WithDmax),
    /// Jets of the Lie algebra of the stabilizer.
    Lda(WithDegree),
    /// Divergence module and its quotient.
    Divmod(WithDegree),
    /// Verify a congruence witness, or search for one to the target.
    Witness {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Search for an orientation-reversing self-equivalence.
    OrientSearch(WithDegree),
    /// Unimodular splitting of the matched class.
    Split(WithDmax),
    /// Determinant and submaximal minors.
    Det(Input),
    /// Milnor number of the determinant.
    Milnor(WithDmax),
    /// Koszul Betti numbers of the submaximal minors.
    Koszul(WithDmax),
    /// mu(det) = codim - beta1 + beta0 for quasi-homogeneous germs.
    Thm27(WithDmax),
    /// Signature strata on a punctured grid.
    Signature {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "1/100")]
        grid_step: String,
        #[arg(long, default_value = "1")]
        radius: String,
    },
    /// Regression over the built-in tables.
    Tables {
        /// One of the table names, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 12)]
        dmax: u32,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn load(input: &Input) -> Result<(GermDocument, FieldKind), InputError> {
    let doc = read_document(&input.input)?;
    let field = input.field.unwrap_or(doc.field);
    Ok((doc, field))
}

fn name_of(command: &Command) -> &'static str {
    match command {
        Command::Classify(_) => "classify",
        Command::Codim(_) => "codim",
        Command::TangentDim(_) => "tangent-dim",
        Command::Transversal(_) => "transversal",
        Command::Qh(_) => "qh",
        Command::SqhObstruct(_) => "sqh-obstruct",
        Command::Lda(_) => "lda",
        Command::Divmod(_) => "divmod",
        Command::Witness { .. } => "witness",
        Command::OrientSearch(_) => "orient-search",
        Command::Split(_) => "split",
        Command::Det(_) => "det",
        Command::Milnor(_) => "milnor",
        Command::Koszul(_) => "koszul",
        Command::Thm27(_) => "thm27",
        Command::Signature { .. } => "signature",
        Command::Tables { .. } => "tables",
    }
}

fn run_germ(command: &Command) -> Result<(Outcome, &Input, GermDocument, FieldKind), InputError> {
    let input = match command {
        Command::Classify(a) | Command::Codim(a) | Command::SqhObstruct(a) | Command::Split(a) => &a.input,
        Command::Milnor(a) | Command::Koszul(a) | Command::Thm27(a) => &a.input,
        Command::TangentDim(a) | Command::Transversal(a) => &a.input,
        Command::Lda(a) | Command::Divmod(a) => &a.input,
        Command::OrientSearch(a) => &a.input,
        Command::Qh(i) | Command::Det(i) | Command::Witness { input: i, .. } | Command::Signature { input: i, .. } => i,
        Command::Tables { .. } => unreachable!("tables has no input document"),
    };
    let (doc, field) = load(input)?;
    let out = match command {
        Command::Classify(a) => commands::classify(&doc, field, a.dmax)?,
        Command::Codim(a) => commands::codim(&doc, a.dmax)?,
        Command::TangentDim(a) => commands::tangent_dim(&doc, a.degree.unwrap_or(2))?,
        Command::Transversal(a) => commands::transversal(&doc, a.degree.unwrap_or(2))?,
        Command::Qh(_) => commands::qh(&doc)?,
        Command::SqhObstruct(a) => commands::sqh_obstruct(&doc, a.dmax)?,
        Command::Lda(a) => commands::lda(&doc, a.degree.unwrap_or(4))?,
        Command::Divmod(a) => commands::divmod(&doc, a.degree.unwrap_or(4))?,
        Command::Witness { degree, .. } => commands::witness(&doc, *degree)?,
        Command::OrientSearch(a) => commands::orient_search(&doc, a.degree.unwrap_or(3))?,
        Command::Split(a) => commands::split(&doc, a.dmax)?,
        Command::Det(_) => commands::det(&doc)?,
        Command::Milnor(a) => commands::milnor(&doc, a.dmax)?,
        Command::Koszul(a) => commands::koszul(&doc, a.dmax)?,
        Command::Thm27(a) => commands::thm27(&doc, a.dmax)?,
        Command::Signature { grid_step, radius, .. } => {
            let step = commands::parse_rational(grid_step, "--grid-step")?;
            let radius = commands::parse_rational(radius, "--radius")?;
            commands::signature(&doc, field, &step, &radius)?
        }
        Command::Tables { .. } => unreachable!(),
    };
    Ok((out, input, doc, field))
}

fn run_tables(suite: &str, dmax: u32) -> Result<Outcome, InputError> {
    let names: Vec<&str> = if suite == "all" { suites::SUITES.to_vec() } else { vec![suite] };
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for name in names {
        let r = suites::run_suite(name, dmax).map_err(|e| InputError::Flag(format!("--suite: {e}")))?;
        lines.push(format!("{}: {} passed, {} failed", r.suite, r.passed, r.failed));
        for item in r.items.iter().filter(|i| !i.passed) {
            lines.push(format!("  FAIL {} {}", item.label, item.detail));
        }
        reports.push(r);
    }
    let resolved = reports.iter().all(|r| r.failed == 0);
    Ok(Outcome::new(json!({"suites": reports}), lines.join("\n"), resolved))
}

fn write(path: &Path, text: &str) -> Result<(), InputError> {
    fs::write(path, text).map_err(|source| InputError::Write { path: path.display().to_string(), source })
}

fn emit(command: &str, name: Option<&str>, field: Option<FieldKind>, out: &Outcome, path: Option<&Path>) -> Result<(), InputError> {
    let mut doc = serde_json::Map::new();
    doc.insert("command".into(), json!(command));
    if let Some(n) = name {
        doc.insert("name".into(), json!(n));
    }
    if let Some(f) = field {
        doc.insert("field".into(), json!(f));
    }
    doc.insert("resolved".into(), json!(out.resolved));
    doc.insert("report".into(), out.report.clone());
    let text = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable") + "\n";
    match path {
        Some(p) => {
            write(p, &text)?;
            for (ext, contents) in &out.attachments {
                write(&p.with_extension(ext), contents)?;
            }
            println!("{}", out.summary);
        }
        None => {
            print!("{text}");
            eprintln!("{}", out.summary);
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, InputError> {
    let command = name_of(&cli.command);
    if let Command::Tables { suite, dmax, out } = &cli.command {
        let outcome = run_tables(suite, *dmax)?;
        emit(command, None, None, &outcome, out.as_deref())?;
        return Ok(outcome.resolved);
    }
    let (outcome, input, doc, field) = run_germ(&cli.command)?;
    emit(command, doc.name.as_deref(), Some(field), &outcome, input.out.as_deref())?;
    Ok(outcome.resolved)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
