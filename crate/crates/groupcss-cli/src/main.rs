//! `groupcss`: build, analyze and verify group-valued CSS codes from the
//! command line. Every report is JSON, tagged with the format version and the
//! invocation that produced it.

mod commands;
mod input;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use groupcss::bounds::ClassicalKind;
use groupcss::{Budget, FORMAT_VERSION};
use serde::Serialize;

use commands::{BoundsArgs, GenerateArgs, Source};
use input::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "groupcss", version, about = "Group-valued CSS codes and quantum doubles on CW complexes")]
struct Cli {
    /// Budget overrides: a single cap for all enumerations, or
    /// `order=N,config=N,hom=N,op=N`. Applied after GROUPCSS_BUDGET.
    #[arg(long, global = true)]
    budget: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a complex builder; with --group also emit the quantum double code.
    Build {
        /// Builder spec as inline JSON or a file path, e.g. '{"kind":"torus_grid","k":2}'.
        #[arg(long)]
        builder: String,
        #[arg(long)]
        group: Option<String>,
    },
    /// Codespace dimension, Z-systole and Hom data.
    Analyze {
        #[command(flatten)]
        source: Source,
    },
    /// Check commutation and compatibility; optionally search KL distances.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Largest support searched for a Z-type Knill-Laflamme violation.
        #[arg(long)]
        dz_max: Option<usize>,
        /// Largest support searched for an X-type Knill-Laflamme violation.
        #[arg(long)]
        dx_max: Option<usize>,
    },
    /// Evaluate the girth and Z-distance bounds, for a code or from raw parameters.
    Bounds {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: Option<f64>,
        #[arg(long)]
        k: Option<f64>,
        /// Vertex count for the girth bound.
        #[arg(long)]
        vertices: Option<f64>,
        /// Average degree for the girth bound.
        #[arg(long)]
        degree: Option<f64>,
    },
    /// Random tree-plus-matching graph with glued checks from a classical code.
    Generate {
        #[arg(long, default_value_t = 4)]
        arity: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Target girth as a multiple of the depth.
        #[arg(long, default_value_t = 1.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value = "random")]
        classical: ClassicalKind,
        /// Design rate of the random classical code.
        #[arg(long, default_value_t = 0.75)]
        rate: f64,
        /// Group of the quantum double; defaults to Z_p.
        #[arg(long)]
        group: Option<String>,
        /// Leave the code document out of the report.
        #[arg(long)]
        no_code: bool,
    },
    /// Parity-check matrices over Z_m for an abelian code.
    Abelianize {
        #[command(flatten)]
        source: Source,
        /// Also compute the subgroup pair H <= K by closure.
        #[arg(long)]
        gkp: bool,
    },
    /// Run the model gallery.
    Examples {
        /// Only cases whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Print a text table instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Smallest weight of a nontrivial word that is a law of the group.
    Laws {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 6)]
        max_weight: usize,
    },
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    format: &'static str,
    invocation: &'a [String],
    budget: Budget,
    #[serde(flatten)]
    body: T,
}

struct Output {
    text: String,
    /// Exit code after a successful write.
    code: u8,
}

fn envelope<T: Serialize>(invocation: &[String], budget: Budget, body: T, code: u8) -> CliResult<Output> {
    let env = Envelope { format: FORMAT_VERSION, invocation, budget, body };
    let mut text = serde_json::to_string_pretty(&env).map_err(|e| CliError::Usage(e.to_string()))?;
    text.push('\n');
    Ok(Output { text, code })
}

fn run(cli: Cli, invocation: &[String]) -> CliResult<Output> {
    let budget = input::budget(cli.budget.as_deref())?;
    match cli.command {
        Command::Build { builder, group } => {
            envelope(invocation, budget, commands::build(&builder, group.as_deref(), &budget)?, 0)
        }
        Command::Analyze { source } => envelope(invocation, budget, commands::analyze(&source, &budget)?, 0),
        Command::Verify { source, dz_max, dx_max } => {
            let r = commands::verify(&source, dz_max, dx_max, &budget)?;
            let code = if r.passed { 0 } else { 1 };
            envelope(invocation, budget, r, code)
        }
        Command::Bounds { source, n, k, vertices, degree } => {
            let args = BoundsArgs { n, k, vertices, degree };
            envelope(invocation, budget, commands::bounds(&source, &args, &budget)?, 0)
        }
        Command::Generate { arity, depth, alpha, seed, p, classical, rate, group, no_code } => {
            let args = GenerateArgs { arity, depth, alpha, seed, p, classical, rate, group, no_code };
            envelope(invocation, budget, commands::generate(&args, &budget)?, 0)
        }
        Command::Abelianize { source, gkp } => {
            envelope(invocation, budget, commands::abelianize(&source, gkp, &budget)?, 0)
        }
        Command::Examples { filter, table } => {
            let r = commands::examples(filter.as_deref(), &budget)?;
            let code = if r.failed > 0 { 1 } else { 0 };
            if table {
                Ok(Output { text: commands::examples_table(&r), code })
            } else {
                envelope(invocation, budget, r, code)
            }
        }
        Command::Laws { group, max_weight } => {
            envelope(invocation, budget, commands::laws(&group, max_weight, &budget)?, 0)
        }
    }
}

fn main() -> ExitCode {
    let invocation: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let out_path = cli.out.clone();
    let result = run(cli, &invocation).and_then(|out| {
        match &out_path {
            Some(path) => fs::write(path, &out.text).map_err(|source| CliError::Io { path: path.clone(), source })?,
            None => print!("{}", out.text),
        }
        Ok(out.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("groupcss: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
