//! `darboux`: evaluate potentials, Bloch solutions, families and
//! displacement maps, and run the verification suite.

mod commands;
mod config;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{BlochArgs, DisplaceArgs, EvalArgs, FamilyArgs, MapArgs, Outcome, VerifyArgs};

/// A configuration error; exits with status 2.
#[derive(Debug)]
pub struct UsageError(String);

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Parser)]
#[command(name = "darboux", version, about = "Second order Darboux displacements of Schrodinger operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// V0, and with --a2 the partner V1, dV and the transformation function.
    Eval(EvalArgs),
    /// Closed-form Bloch solutions at a displacement.
    Bloch(BlochArgs),
    /// Full second order transform compared with the shifted potential.
    Displace(DisplaceArgs),
    /// Displacement d and partner constant a1 as functions of a2.
    DisplacementMap(MapArgs),
    /// Members of the first order partner family.
    Family(FamilyArgs),
    /// Run the check suite and report every check.
    Verify(VerifyArgs),
}

impl Command {
    fn common(&self) -> &config::Common {
        match self {
            Command::Eval(a) => &a.common,
            Command::Bloch(a) => &a.common,
            Command::Displace(a) => &a.common,
            Command::DisplacementMap(a) => &a.common,
            Command::Family(a) => &a.common,
            Command::Verify(a) => &a.common,
        }
    }

    fn run(&self) -> anyhow::Result<Outcome> {
        match self {
            Command::Eval(a) => commands::eval(a),
            Command::Bloch(a) => commands::bloch(a),
            Command::Displace(a) => commands::displace(a),
            Command::DisplacementMap(a) => commands::displacement_map(a),
            Command::Family(a) => commands::family(a),
            Command::Verify(a) => commands::verify(a),
        }
    }
}

fn is_usage(err: &anyhow::Error) -> bool {
    if err.downcast_ref::<UsageError>().is_some() {
        return true;
    }
    matches!(
        err.downcast_ref::<darboux::Error>(),
        Some(darboux::Error::InvalidParameter(_) | darboux::Error::DegenerateLattice(_) | darboux::Error::NonRectangularLattice)
    )
}

/// Parses `args` (program name first), runs the command and returns what
/// goes to stdout, what goes to stderr and the exit status.
fn run<I, T>(args: I) -> (String, String, u8)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (text, String::new(), 0) } else { (String::new(), text, code) };
        }
    };
    if let Some(scale) = cli.command.common().tolerance_scale {
        if !(scale.is_finite() && scale > 0.0) {
            return (String::new(), "error: --tolerance-scale must be positive\n".into(), 2);
        }
        std::env::set_var(darboux::settings::TOLERANCE_SCALE_VAR, scale.to_string());
    }
    match cli.command.run() {
        Ok(out) => (out.text, String::new(), if out.ok { 0 } else { 1 }),
        Err(e) => (String::new(), format!("error: {e:#}\n"), if is_usage(&e) { 2 } else { 1 }),
    }
}

fn main() -> ExitCode {
    let (out, err, code) = run(std::env::args_os());
    eprint!("{err}");
    if std::io::stdout().lock().write_all(out.as_bytes()).is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
