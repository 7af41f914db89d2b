//! Command-line interface.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analytic::{self, AnalyticArgs};
use crate::check::run_checks;
use crate::config::{parse_config, PlotStyle, ScenarioConfig};
use crate::error::AppError;
use crate::plot::{beta_label, emit_plot, write_plot, Trace};
use crate::presets::{self, Figure};
use crate::{execute, OUT_DIR_ENV};

#[derive(Debug, Parser)]
#[command(
    name = "relmaser",
    version,
    about = "Maxwell-Bloch simulation of masers moving at relativistic speeds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one or more scenarios; independent runs execute in parallel.
    Run {
        /// Scenario file, or the name of a built-in preset. Repeatable.
        #[arg(long = "config", short = 'c', required = true, num_args = 1..)]
        configs: Vec<String>,
        /// Output directory [default: output.dir, then $RELMASER_OUT_DIR, then .].
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also write an overlay of all runs to <STEM>.svg.
        #[arg(long, value_name = "STEM")]
        compare: Option<String>,
        /// Plot style for the overlay [default: the first scenario's].
        #[arg(long, value_parser = ["linear", "log"])]
        plot: Option<String>,
        /// Worker threads per solver, overriding output.threads.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List or print the built-in scenarios.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
    /// Evaluate closed-form expressions.
    Analytic(AnalyticArgs),
    /// Run the reduced-scale invariant and oracle suite.
    Check,
}

#[derive(Debug, Subcommand)]
pub enum PresetAction {
    /// Print the preset names grouped by figure.
    List,
    /// Print a preset's scenario document.
    Emit {
        name: String,
        /// Print the fully resolved scenario instead of the compact preset.
        #[arg(long)]
        resolved: bool,
        /// Write to this file instead of standard output.
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
}

/// Reads a scenario file, or a built-in preset when no such file exists.
pub fn load_config(arg: &str) -> Result<ScenarioConfig, AppError> {
    let path = Path::new(arg);
    let (text, source) = if path.exists() {
        (
            std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?,
            arg.to_string(),
        )
    } else if let Some(doc) = presets::document(arg) {
        (doc, format!("preset {arg}"))
    } else {
        return Err(AppError::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or preset"),
        ));
    };
    parse_config(&text).map_err(|error| AppError::Config {
        source_name: source,
        error,
    })
}

fn output_dir(flag: Option<&Path>, config: &ScenarioConfig) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| config.output.dir.as_ref().map(PathBuf::from))
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn run_command(
    configs: &[String],
    out_dir: Option<&Path>,
    compare: Option<&str>,
    plot: Option<&str>,
    threads: Option<usize>,
    out: &mut dyn Write,
) -> Result<(), AppError> {
    let mut loaded = configs
        .iter()
        .map(|c| load_config(c))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(t) = threads {
        if t == 0 {
            return Err(AppError::Usage("--threads must be >= 1".into()));
        }
        for c in &mut loaded {
            c.output.threads = t;
        }
    }
    let outcomes: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = loaded
            .iter()
            .map(|c| {
                let dir = output_dir(out_dir, c);
                s.spawn(move || execute(c, &dir))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("run thread panicked"))
            .collect()
    });
    let mut results = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        let (result, paths) = o?;
        for p in paths.all() {
            writeln!(out, "{}", p.display()).map_err(|e| AppError::io("<stdout>", e))?;
        }
        results.push(result);
    }
    if let Some(stem) = compare {
        let style = match plot {
            Some(p) => PlotStyle::parse(p).expect("clap-validated"),
            None => loaded[0].output.plot,
        };
        let traces: Vec<Trace> = loaded
            .iter()
            .zip(&results)
            .map(|(c, r)| Trace::from_result(beta_label(c.frame.beta), r))
            .collect();
        let names: Vec<&str> = loaded.iter().map(|c| c.name.as_str()).collect();
        let svg = emit_plot(
            &names.join(" / "),
            &traces,
            style,
            loaded[0].output.log_floor,
        )?;
        let path = output_dir(out_dir, &loaded[0]).join(format!("{stem}.svg"));
        write_plot(&svg, &path)?;
        writeln!(out, "{}", path.display()).map_err(|e| AppError::io("<stdout>", e))?;
    }
    Ok(())
}

fn preset_command(action: &PresetAction, out: &mut dyn Write) -> Result<(), AppError> {
    let stdout = |e| AppError::io("<stdout>", e);
    match action {
        PresetAction::List => {
            for f in Figure::ALL {
                writeln!(out, "{}: {}", f.label(), f.summary()).map_err(stdout)?;
                for name in f.presets() {
                    writeln!(out, "  {name}").map_err(stdout)?;
                }
            }
        }
        PresetAction::Emit {
            name,
            resolved,
            output,
        } => {
            let doc = presets::document(name).ok_or_else(|| {
                AppError::Usage(format!("unknown preset `{name}`; see `preset list`"))
            })?;
            let text = if *resolved {
                parse_config(&doc)
                    .map_err(|error| AppError::Config {
                        source_name: format!("preset {name}"),
                        error,
                    })?
                    .to_toml()
            } else {
                doc
            };
            match output {
                Some(path) => {
                    std::fs::write(path, text).map_err(|e| AppError::io(path, e))?;
                    writeln!(out, "{}", path.display()).map_err(stdout)?;
                }
                None => write!(out, "{text}").map_err(stdout)?,
            }
        }
    }
    Ok(())
}

fn check_command(out: &mut dyn Write) -> Result<(), AppError> {
    let outcomes = run_checks();
    let stdout = |e| AppError::io("<stdout>", e);
    for o in &outcomes {
        writeln!(
            out,
            "{} {}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        )
        .map_err(stdout)?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(AppError::Check(format!(
            "{failed} of {} checks failed",
            outcomes.len()
        )));
    }
    Ok(())
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), AppError> {
    match &cli.command {
        Command::Run {
            configs,
            out_dir,
            compare,
            plot,
            threads,
        } => run_command(
            configs,
            out_dir.as_deref(),
            compare.as_deref(),
            plot.as_deref(),
            *threads,
            out,
        ),
        Command::Preset { action } => preset_command(action, out),
        Command::Analytic(args) => {
            for l in analytic::evaluate(args)? {
                writeln!(out, "{l}").map_err(|e| AppError::io("<stdout>", e))?;
            }
            Ok(())
        }
        Command::Check => check_command(out),
    }
}

/// Parses `args`, runs the command and returns the process exit status.
/// Failures print one `error[<category>]: <message>` line to `err`.
pub fn cli_main<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            let _ = writeln!(err, "error[usage]: {first}");
            return 2;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "error[{}]: {msg}", e.category());
            e.exit_code()
        }
    }
}
