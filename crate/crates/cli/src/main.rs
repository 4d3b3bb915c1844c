//! caution-blend: moderate-posterior analyses from a config file.
//!
//! `run <config>` executes the configured analysis at its caution value or
//! grid; `sweep <config> --grid <spec>` overrides the grid from the command
//! line. Exit codes: 0 success, 1 I/O failure, 2 validation failure,
//! 3 numerical non-convergence.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use caution_blend_cli::config::{
    parse_grid_expression, validate_grid, AnalysisConfig, OutputFormat,
};
use caution_blend_cli::error::CliError;
use caution_blend_cli::record::ResultRecord;
use caution_blend_cli::runner;

#[derive(Parser)]
#[command(
    name = "caution-blend",
    version,
    about = "Moderate-posterior analyses at a chosen caution level"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct OutputArgs {
    /// Output format, overriding the config's `[output]` section.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Output path, overriding the config; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress the summary line on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analysis configured in the file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the analysis over an explicit caution grid.
    Sweep {
        config: PathBuf,
        /// Grid as start:stop:step or a comma-separated list.
        #[arg(long)]
        grid: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn load_config(path: &Path) -> Result<AnalysisConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("config: cannot read {}: {e}", path.display())))?;
    AnalysisConfig::from_toml(&text)
}

fn write_output(
    record: &ResultRecord,
    format: OutputFormat,
    path: Option<&Path>,
) -> Result<(), CliError> {
    let rendered = match format {
        OutputFormat::Json => record.to_json(),
        OutputFormat::Csv => record.to_csv(),
    };
    match path {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| CliError::Io(format!("out: cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(rendered.as_bytes())
            .map_err(|e| CliError::Io(format!("out: cannot write stdout: {e}"))),
    }
}

fn run(command: Command) -> Result<i32, CliError> {
    let (config_path, grid_override, output_args) = match command {
        Command::Run { config, output } => (config, None, output),
        Command::Sweep {
            config,
            grid,
            output,
        } => {
            let values = parse_grid_expression(&grid)?;
            validate_grid(&values)?;
            (config, Some(values), output)
        }
    };
    let config = load_config(&config_path)?;
    let record = runner::execute(&config, grid_override.as_deref())?;

    let format = match output_args.format {
        Some(FormatArg::Json) => OutputFormat::Json,
        Some(FormatArg::Csv) => OutputFormat::Csv,
        None => config.output.format.unwrap_or(OutputFormat::Json),
    };
    let path = output_args
        .out
        .clone()
        .or_else(|| config.output.path.as_ref().map(PathBuf::from));
    write_output(&record, format, path.as_deref())?;

    if !output_args.quiet {
        let target = path
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "stdout".into());
        eprintln!(
            "wrote {} row(s) for kind {} to {target}",
            record.rows.len(),
            record.config.kind.as_str()
        );
    }
    // A row-level numerical failure surfaces as exit 3 after the output is
    // written, so sweeps never abort midway.
    if record.rows.iter().any(|r| r.status != "ok") {
        return Ok(3);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
