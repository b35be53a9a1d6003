//! Batch front end for `randlab_core`: TOML job configs in, deterministic
//! reports and artifacts out.

pub mod config;
pub mod jobs;
pub mod report;

use std::io::Write;
use std::path::Path;

pub use config::ConfigError;
pub use jobs::{cap_from_env, run_job, JobKind, JobOutput, Options, DEFAULT_CAP_BYTES};
pub use report::Report;

/// Writes every artifact, then `report.txt` and `report.json`, each through
/// a temporary file in `dir` that is renamed into place.
pub fn write_outputs(dir: &Path, out: &JobOutput) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let reports = [
        ("report.txt".to_string(), out.report.to_text()),
        ("report.json".to_string(), out.report.to_json()),
    ];
    for (name, content) in out.artifacts.iter().chain(&reports) {
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(content.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(dir.join(name)).map_err(|e| e.error)?;
    }
    Ok(())
}
