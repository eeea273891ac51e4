use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use condenlab_cli::config::parse_format_list;
use condenlab_cli::error::CliError;
use condenlab_cli::registry::SCENARIOS;
use condenlab_cli::report::emit_report;
use condenlab_cli::verify::{verify, VerifyContext};
use condenlab_cli::{load_config, run_scenario};

#[derive(Parser)]
#[command(name = "condenlab", version, about = "Run wealth-condensation scenarios and replay their checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario from a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated subset of csv,json,svg.
        #[arg(long)]
        format: Option<String>,
    },
    /// List registered scenarios and their parameters.
    ListScenarios,
    /// Replay the worked examples; exits 1 if any check fails.
    Verify,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::Run {
            config,
            seed,
            out,
            format,
        } => match run(config, seed, out, format) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
        Command::ListScenarios => {
            list_scenarios();
            ExitCode::SUCCESS
        }
        Command::Verify => {
            let stdout = std::io::stdout();
            let code = verify(&VerifyContext::default(), &mut stdout.lock());
            ExitCode::from(code as u8)
        }
    }
}

fn run(
    path: PathBuf,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<String>,
) -> Result<(), CliError> {
    let mut config = load_config(&path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(out) = out {
        config.output_dir = out;
    }
    if let Some(list) = format {
        config.formats = parse_format_list(&list)?;
    }
    let trajectory = run_scenario(&config)?;
    for file in emit_report(&trajectory, &config.formats, &config.output_dir)? {
        println!("{}", file.display());
    }
    Ok(())
}

fn list_scenarios() {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for spec in SCENARIOS {
        let _ = writeln!(out, "{}\n    {}", spec.name, spec.description);
        for p in spec.params {
            let default = match p.default {
                Some(v) => format!("default {}", v.to_json()),
                None => "required".to_string(),
            };
            let _ = writeln!(out, "    {:<18} {:<14} {:<24} {}", p.name, p.range_text(), default, p.doc);
        }
        if spec.uses_network {
            let _ = writeln!(out, "    (reads \"network\"; defaults to the three-bank example)");
        }
    }
}
