use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use crow_sim::output::{render, write_output, Format};
use crow_sim::sweep::{sweep_values, with_parameter};
use crow_sim::{preset, run, ExperimentConfig, Mode, SimError, SimResult};

/// Squeezed-light evolution in lossy coupled cavities and CROWs.
#[derive(Parser)]
#[command(name = "crowsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run {
        config: PathBuf,
        #[command(flatten)]
        opts: OutputOpts,
    },
    /// Run a built-in preset (fig2, fig3, fig4, fig5).
    Preset {
        name: String,
        #[command(flatten)]
        opts: OutputOpts,
    },
    /// Vary one numeric parameter and write one file per value into `--out`.
    Sweep {
        /// Base config file.
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        /// Base preset.
        #[arg(long)]
        preset: Option<String>,
        /// Dotted path of the parameter, e.g. `state.u` or `system.omega0.1`.
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        opts: OutputOpts,
    },
}

#[derive(Args)]
struct OutputOpts {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (directory for `sweep`); standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Drop the imaginary parts of the system parameters.
    #[arg(long)]
    lossless: bool,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Omit the creation time so that repeated runs are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
}

impl OutputOpts {
    fn apply(&self, config: &mut ExperimentConfig) {
        if self.lossless {
            config.output.lossless = true;
        }
        if let Some(mode) = self.mode {
            config.output.mode = mode;
        }
    }
}

fn emit(config: &ExperimentConfig, opts: &OutputOpts, out: Option<&Path>) -> SimResult<()> {
    let result = run(config)?;
    match out {
        Some(path) => {
            for file in write_output(config, &result, opts.format, path, !opts.no_timestamp)? {
                eprintln!("wrote {}", file.display());
            }
        }
        None => {
            let text = render(config, &result, opts.format, !opts.no_timestamp);
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                // A closed pipe (`crowsim ... | head`) is not a failure.
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    return Err(SimError::Io {
                        path: "<stdout>".into(),
                        source: e,
                    })
                }
                _ => {}
            }
        }
    }
    Ok(())
}

fn execute(command: Command) -> SimResult<()> {
    match command {
        Command::Run { config, opts } => {
            let mut config = ExperimentConfig::load(&config)?;
            opts.apply(&mut config);
            emit(&config, &opts, opts.out.as_deref())
        }
        Command::Preset { name, opts } => {
            let mut config = preset(&name)?;
            opts.apply(&mut config);
            emit(&config, &opts, opts.out.as_deref())
        }
        Command::Sweep {
            config,
            preset: name,
            param,
            from,
            to,
            steps,
            opts,
        } => {
            let mut base = match (config, name) {
                (Some(path), _) => ExperimentConfig::load(&path)?,
                (None, Some(name)) => preset(&name)?,
                (None, None) => unreachable!("clap requires one of --config/--preset"),
            };
            opts.apply(&mut base);
            let dir = opts
                .out
                .clone()
                .ok_or_else(|| SimError::Config("sweep needs --out <directory>".into()))?;
            std::fs::create_dir_all(&dir).map_err(|e| SimError::Io {
                path: dir.clone(),
                source: e,
            })?;
            let leaf = param.rsplit('.').next().unwrap_or(&param).to_string();
            for value in sweep_values(from, to, steps)? {
                let config = with_parameter(&base, &param, value)?;
                let file = dir.join(format!("{leaf}_{value}.{}", opts.format.extension()));
                emit(&config, &opts, Some(&file))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are configuration errors; help and version are not errors.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("crowsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
