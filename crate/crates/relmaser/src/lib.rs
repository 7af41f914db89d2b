//! Scenario files, presets, result writers, plots and the command-line
//! front end of the relativistic Maxwell-Bloch solver in `relmaser-core`.

pub mod analytic;
pub mod check;
pub mod cli;
pub mod config;
pub mod error;
pub mod plot;
pub mod presets;
pub mod results;

use std::path::Path;

use relmaser_core::solver::{run, SimulationResult};

pub use config::{parse_config, ScenarioConfig};
pub use error::{AppError, ConfigError};
pub use results::{write_results, OutputPaths};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RELMASER_OUT_DIR";

/// Plot title identifying a run.
pub fn run_title(config: &ScenarioConfig) -> String {
    format!(
        "{}: n't = {:e} m⁻³ in {} channel(s), β = {}",
        config.name,
        config.total_density(),
        config.channels.len(),
        config.frame.beta
    )
}

/// Simulates a scenario and writes its CSV, JSON and SVG files into `dir`.
pub fn execute(
    config: &ScenarioConfig,
    dir: &Path,
) -> Result<(SimulationResult, OutputPaths), AppError> {
    let result = run(&config.to_scenario())?;
    let svg = plot::emit_plot(
        &run_title(config),
        &[plot::Trace::from_result(
            plot::beta_label(config.frame.beta),
            &result,
        )],
        config.output.plot,
        config.output.log_floor,
    )?;
    let plot_path = dir.join(format!("{}.svg", config.output.stem));
    plot::write_plot(&svg, &plot_path)?;
    let paths = write_results(&result, config, dir, Some(plot_path))?;
    Ok((result, paths))
}
