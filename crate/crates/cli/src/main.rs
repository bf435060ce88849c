use std::path::PathBuf;
use std::process::ExitCode;

use blowfiber::verify::{self, FieldTag, Overrides, Render, VerifyError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "blowfiber", version, about = "Rational curves on blowups of products of projective spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hypothesis report for the configured class.
    Check(Common),
    /// Expected dimensions.
    Dims(Common),
    /// Solve one σ- or τ-fiber.
    Solve(Common),
    /// Sample one fiber member with exact contacts.
    Sample(Common),
    /// Run the configured experiment suites.
    Verify(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Q,
    Fp,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Emit the JSON report.
    #[arg(long)]
    json: bool,
    /// Leave out wall-clock times so reports are reproducible byte for byte.
    #[arg(long)]
    stable: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_enum)]
    field: Option<FieldArg>,
    #[arg(long)]
    prime: Option<u64>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            trials: self.trials,
            field: self.field.map(|f| match f {
                FieldArg::Q => FieldTag::Rational,
                FieldArg::Fp => FieldTag::Prime,
            }),
            prime: self.prime,
        }
    }
}

fn emit<T: Serialize + Render>(report: &T, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("reports serialize"));
    } else {
        print!("{}", report.render());
    }
}

fn run(cli: Cli) -> Result<bool, VerifyError> {
    let (Command::Check(c) | Command::Dims(c) | Command::Solve(c) | Command::Sample(c) | Command::Verify(c)) =
        &cli.command;
    let problem = verify::load_problem(&c.config, &c.overrides())?;
    Ok(match &cli.command {
        Command::Check(_) => {
            let r = verify::check(&problem)?;
            emit(&r, c.json);
            r.hypotheses.pass
        }
        Command::Dims(_) => {
            emit(&verify::dims(&problem)?, c.json);
            true
        }
        Command::Solve(_) => {
            let r = verify::solve(&problem)?;
            emit(&r, c.json);
            r.passed
        }
        Command::Sample(_) => {
            let r = verify::sample(&problem)?;
            emit(&r, c.json);
            r.passed
        }
        Command::Verify(_) => {
            let r = verify::verify(&problem, c.stable)?;
            emit(&r, c.json);
            r.passed
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
