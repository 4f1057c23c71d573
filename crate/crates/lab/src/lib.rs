//! Command-line laboratory for the `shifted-subset` crate: configuration,
//! record formats and the subcommand implementations behind the binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::fs;

pub use config::{Command, ExperimentConfig, Format};
pub use error::{LabError, LabResult};
pub use output::Emission;

/// Replaces a `replay` config with the configuration it names. The
/// destination is taken from the replay invocation, not the saved file.
pub fn resolve(config: ExperimentConfig) -> LabResult<ExperimentConfig> {
    let Command::Replay(args) = &config.command else {
        return Ok(config);
    };
    let text = fs::read_to_string(&args.config)?;
    let saved: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| LabError::Usage(format!("{}: {e}", args.config.display())))?;
    if matches!(saved.command, Command::Replay(_)) {
        return Err(LabError::Usage(
            "a replay config cannot name another replay".into(),
        ));
    }
    Ok(ExperimentConfig {
        output: config.output.clone(),
        ..saved
    })
}

/// Runs a resolved configuration.
pub fn run(config: &ExperimentConfig) -> LabResult<Emission> {
    let seed = config.seed;
    match &config.command {
        Command::Kraw(a) => commands::kraw(a),
        Command::Dist(a) => commands::dist(a),
        Command::Sample(a) => commands::sample(a, seed),
        Command::Recover(a) => commands::recover(a, seed),
        Command::OracleDemo(a) => commands::oracle_demo(a, seed),
        Command::Bounds(a) => commands::bounds(a),
        Command::Verify(a) => commands::verify(a, seed),
        Command::Replay(_) => Err(LabError::Usage(
            "resolve replay configs before running".into(),
        )),
    }
}
