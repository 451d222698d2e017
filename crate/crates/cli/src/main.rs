//! Batch front end for the descent engine: reads JSON fixtures, runs
//! validations and the descent algorithms, and emits deterministic reports.
//!
//! Exit codes: 0 success, 1 mathematical failure (nonzero residual or failed
//! check), 2 input error. Identical invocations on identical inputs produce
//! byte-identical output; every success claim in a report is backed by an
//! exact zero residual.

mod fixture;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use descent_core::Error as CoreError;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: String) -> CliError {
        CliError { code: 2, message }
    }

    pub fn math(e: CoreError) -> CliError {
        CliError {
            code: 1,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "descent",
    about = "Exact checks and descent algorithms for twisted complexes on a finite cover"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Positional input: [FILE] and, for object/morphism commands, a name.
    #[arg(value_name = "ARG")]
    positional: Vec<String>,

    /// Input fixture file (alternative to the positional FILE).
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,

    /// Coefficient field the fixture must declare: `q` or `fp:<prime>`.
    #[arg(long)]
    field: Option<String>,

    /// Write the result document to a file instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the site and every object: partition invariants, squared
    /// differentials and Maurer-Cartan residuals.
    Validate(Common),
    /// Pointwise homology tables of the named object (or all objects).
    Homology(Common),
    /// Weak-equivalence verdict for a closed degree-zero morphism.
    Weq(Common),
    /// Mapping cone of a closed degree-zero morphism, as a new fixture.
    Cone(Common),
    /// Shift of a twisted object, as a new fixture.
    Shift(Common),
    /// Twist image of a global object, as a new fixture.
    Twist(Common),
    /// Globalize a twisted object and emit the verified certificate.
    Globalize(Common),
    /// Descend a closed morphism between twist images to a global morphism
    /// with an explicit homotopy.
    #[command(name = "descend-morphism")]
    DescendMorphism(Common),
    /// Globalize the twist image of a global object and verify the result is
    /// weakly equivalent to it.
    Roundtrip(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate(c) => report::run_validate(c),
        Command::Homology(c) => report::run_homology(c),
        Command::Weq(c) => report::run_weq(c),
        Command::Cone(c) => report::run_cone(c),
        Command::Shift(c) => report::run_shift(c),
        Command::Twist(c) => report::run_twist(c),
        Command::Globalize(c) => report::run_globalize(c),
        Command::DescendMorphism(c) => report::run_descend_morphism(c),
        Command::Roundtrip(c) => report::run_roundtrip(c),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let diag = serde_json::json!({
                "error": e.message,
                "exit": e.code,
            });
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&diag).expect("diagnostic")
            );
            ExitCode::from(e.code)
        }
    }
}

impl Common {
    /// Resolves the input file and the optional extra positional name.
    pub fn resolve(&self) -> Result<(PathBuf, Option<String>), CliError> {
        match (&self.input, self.positional.len()) {
            (Some(f), 0) => Ok((f.clone(), None)),
            (Some(f), 1) => Ok((f.clone(), Some(self.positional[0].clone()))),
            (None, 1) => Ok((PathBuf::from(&self.positional[0]), None)),
            (None, 2) => Ok((
                PathBuf::from(&self.positional[0]),
                Some(self.positional[1].clone()),
            )),
            _ => Err(CliError::input(
                "expected a fixture file (positionally or via --in) and at most one name".into(),
            )),
        }
    }

    pub fn load(&self) -> Result<(fixture::Loaded, Option<String>), CliError> {
        let (path, name) = self.resolve()?;
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        let loaded = fixture::load(&text, self.field.as_deref())?;
        Ok((loaded, name))
    }

    /// Writes the document to --out or stdout, with a trailing newline.
    pub fn emit<T: serde::Serialize>(&self, doc: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(doc)
            .map_err(|e| CliError::input(format!("serialization failed: {e}")))?;
        text.push('\n');
        match &self.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}
