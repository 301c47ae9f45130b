//! Scenario-driven front end for `fio-nuclear`: loads a JSON scenario,
//! runs one pipeline and serializes the result.

pub mod commands;
pub mod error;
pub mod output;
pub mod plot;
pub mod scenario;

pub use commands::{run_command, Artifact, Command, RunContext};
pub use error::{CliError, ErrorKind};
pub use scenario::{load_scenario, load_scenario_with, parse_scenario, Format, Overrides, Scenario};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "FIO_NUCLEAR_THREADS";

/// Writes artifacts under `dir`, creating directories as needed.
pub fn write_artifacts(dir: &std::path::Path, artifacts: &[Artifact]) -> Result<(), CliError> {
    for a in artifacts {
        let path = dir.join(&a.path);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::io(format!("cannot create {}: {e}", parent.display())))?;
        }
        std::fs::write(&path, &a.bytes).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
