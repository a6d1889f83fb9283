//! Command-line front end: configuration, the four subcommands and output
//! writing. The binary in `main.rs` is a thin wrapper over [`run`].

pub mod commands;
pub mod config;
pub mod error;
pub mod selftest;

use std::fs;
use std::path::{Path, PathBuf};

pub use commands::{Outcome, Verdict};
pub use config::{Overrides, RunConfig};
pub use error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Criteria,
    Compare,
    Depth,
    Selftest,
}

/// Runs one subcommand; nothing is written.
pub fn run(command: Command, config: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        Command::Criteria => commands::cmd_criteria(config),
        Command::Compare => commands::cmd_compare(config),
        Command::Depth => commands::cmd_depth(config),
        Command::Selftest => commands::cmd_selftest(config),
    }
}

/// Where each produced file goes: `[outputs]` paths when set, else the
/// default name, both relative to `out_dir`.
fn destination(name: &str, outputs: &config::OutputsConfig, out_dir: &Path) -> PathBuf {
    let chosen = match name {
        "summary.txt" => outputs.summary.as_ref(),
        "plot.gp" => outputs.plot_script.as_ref(),
        "trajectory.csv" => outputs.trajectory.as_ref(),
        _ => outputs.csv.as_ref(),
    };
    out_dir.join(chosen.map_or_else(|| PathBuf::from(name), Clone::clone))
}

/// Writes the outcome's files and returns their paths.
pub fn write_outputs(
    outcome: &Outcome,
    config: &RunConfig,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    for (name, body) in &outcome.files {
        let path = destination(name, &config.outputs, out_dir);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_paths_follow_overrides() {
        let outputs = config::OutputsConfig {
            csv: Some("data/main.csv".into()),
            ..Default::default()
        };
        let dir = Path::new("/tmp/x");
        assert_eq!(
            destination("compare.csv", &outputs, dir),
            dir.join("data/main.csv")
        );
        assert_eq!(
            destination("summary.txt", &outputs, dir),
            dir.join("summary.txt")
        );
    }
}
