mod args;
mod commands;
mod input;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use homdens::exact::ratio_string;
use homdens::forcing::Tolerances;
use homdens::generators::{EDGE_RULE, RNG_ID};
use homdens::ExactValue;

use args::{Cli, Command, Format};
use commands::Ctx;
use output::{Budgets, Envelope, RunConfig, SCHEMA_ID};

/// Reasons to stop without a report.
pub enum Failure {
    /// Bad flags, unreadable input, or a request outside budget: status 2.
    Usage(String),
    /// An internal consistency check tripped: status 1.
    Defect(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, failures)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            for f in &failures {
                eprintln!("verdict failure: {f}");
            }
            ExitCode::from(if failures.is_empty() { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Defect(msg)) => {
            eprintln!("defect: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(String, Vec<String>), Failure> {
    let default_format = match cli.command {
        Command::Gen(_) => Format::Text,
        _ => Format::Json,
    };
    let format = cli.format.unwrap_or(default_format);
    if format == Format::Text && default_format != Format::Text {
        return Err(Failure::Usage(
            "--format text is only available for gen".into(),
        ));
    }
    let mut tolerances = Tolerances::default();
    if let Some(s) = &cli.tol_c4 {
        tolerances.c4 = ExactValue(input::ratio(s, "--tol-c4")?);
    }
    if let Some(s) = &cli.tol_edge {
        tolerances.edge = ExactValue(input::ratio(s, "--tol-edge")?);
    }
    let ctx = Ctx {
        seed: cli.seed,
        budget_vertices: cli.budget_vertices,
        budget_enum: cli.budget_enum,
        tolerances: tolerances.clone(),
        exhaustive: cli.exhaustive,
    };
    let outcome = commands::run(&cli.command, &ctx)?;
    if format == Format::Text {
        return Ok((outcome.text.unwrap_or_default(), outcome.failures));
    }
    let env = Envelope {
        schema: SCHEMA_ID,
        run: RunConfig {
            command: &cli.command,
            seed: cli.seed,
            budgets: Budgets {
                vertices: cli.budget_vertices,
                enumeration: cli.budget_enum,
            },
            tolerances: output::Tolerances {
                edge: ratio_string(&tolerances.edge.0),
                c4: ratio_string(&tolerances.c4.0),
            },
            format,
            exhaustive: cli.exhaustive,
            rng: RNG_ID,
            edge_rule: EDGE_RULE,
            version: env!("CARGO_PKG_VERSION"),
        },
        engines: outcome.engines,
        report: outcome.report,
        failures: outcome.failures.clone(),
    };
    Ok((output::render(&env, format), outcome.failures))
}
