use clap::{Parser, Subcommand, ValueEnum};
use ri_ergodic_cli::examples::{render, run_example, ExampleId, ExampleOptions, DEFAULT_SEED};
use ri_ergodic_cli::output::{json_bytes, write_atomic};
use ri_ergodic_cli::verify::run_verify;
use ri_ergodic_cli::{eval, parse_schedule, schema, CliError, Command, ExitCode};
use std::io::{Read, Write};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "riergo", version, about = "Rearrangements, r.i. norms and ergodic averages of composition operators")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a named example and judge it against its pinned expectations.
    RunExample {
        id: ExampleId,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Write only this format; both when omitted.
        #[arg(long)]
        format: Option<Format>,
        /// Comma list of n, or `dyadic:k` for 1, 2, …, 2^k.
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long)]
        horizon: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run every property suite with a seeded generator.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        trials: u32,
        #[arg(long, default_value = "verify-out")]
        out: PathBuf,
        /// Add a deliberately failing property to exercise the reporting.
        #[arg(long)]
        inject_violation: bool,
    },
    /// Evaluate one operation on a JSON input (`-` reads stdin).
    Eval {
        command: Command,
        #[arg(long, default_value = "-")]
        input: String,
        /// Result file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the self-contained JSON schema of a type or of an eval input.
    Schema { name: String },
}

fn read_input(src: &str) -> Result<serde_json::Value, CliError> {
    let text = if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::io("<stdin>", e))?;
        s
    } else {
        std::fs::read_to_string(src).map_err(|e| CliError::Usage(format!("cannot read {src}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

fn emit(out: Option<PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => write_atomic(&p, bytes),
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.cmd {
        Cmd::RunExample { id, out, format, schedule, horizon, seed } => {
            let schedule = schedule.as_deref().map(parse_schedule).transpose()?;
            let run = run_example(id, &ExampleOptions { schedule, horizon, seed })?;
            let files = render(&run);
            for (ext, bytes) in &files {
                let wanted = match format {
                    None => true,
                    Some(Format::Csv) => *ext == "csv",
                    Some(Format::Json) => *ext == "json",
                };
                if wanted {
                    write_atomic(&out.join(format!("{}.{ext}", id.name())), bytes)?;
                }
            }
            for c in &run.checks {
                eprintln!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            Ok(if run.passed() { ExitCode::Pass } else { ExitCode::VerdictFail })
        }
        Cmd::Verify { seed, trials, out, inject_violation } => {
            let summary = run_verify(seed, trials, inject_violation, &out)?;
            for p in &summary.properties {
                let status = if p.failure.is_none() { "PASS" } else { "FAIL" };
                eprintln!("{status} {} ({}/{})", p.name, p.passed, p.cases);
            }
            Ok(if summary.passed() { ExitCode::Pass } else { ExitCode::VerdictFail })
        }
        Cmd::Eval { command, input, out } => {
            let value = eval(command, &read_input(&input)?)?;
            emit(out, &json_bytes(&value))?;
            Ok(ExitCode::Pass)
        }
        Cmd::Schema { name } => {
            let s = Command::ALL
                .into_iter()
                .find(|c| c.name() == name)
                .map(Command::schema)
                .or_else(|| schema::type_schema(&name))
                .ok_or_else(|| CliError::Usage(format!("unknown schema {name}")))?;
            emit(None, &json_bytes(&s))?;
            Ok(ExitCode::Pass)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ExitCode::Usage as i32 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    };
    std::process::exit(code as i32);
}
