use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use shifted_subset_lab::{resolve, run, ExperimentConfig, LabError, LabResult};

fn execute(config: ExperimentConfig) -> LabResult<u8> {
    let config = resolve(config)?;
    let (text, code) = if config.dump_config {
        (serde_json::to_string_pretty(&config)? + "\n", 0)
    } else {
        let emission = run(&config)?;
        (emission.render(config.format)?, emission.exit_code)
    };
    match &config.output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(code)
}

fn main() -> ExitCode {
    let config = match ExperimentConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(config) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                LabError::Usage(_) => 2,
                ref other => other.exit_code(),
            })
        }
    }
}
