//! Batch experiment runner: parses a JSON experiment config, orchestrates the
//! uncertop library, and writes per-task JSON reports, CSV tables and a digest
//! manifest into an output directory.
//!
//! Exit-code contract of the binary: 0 when every certificate passed,
//! 1 on a certificate failure, 2 on config/schema/IO problems, 3 on numeric
//! failures (solver non-convergence or refused recovery).

pub mod config;
pub mod manifest;
mod tasks;

use config::ExperimentConfig;
use manifest::{digest, Manifest, ManifestEntry};
use std::fs;
use std::path::Path;

#[derive(Debug)]
pub enum RunError {
    /// Unreadable, malformed or invalid configuration, or an output-path
    /// problem. Maps to exit code 2.
    Config(String),
    /// A solver failed to converge or a precondition was violated while the
    /// configuration itself was valid. Maps to exit code 3.
    Numeric(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "config error: {m}"),
            RunError::Numeric(m) => write!(f, "numeric error: {m}"),
        }
    }
}

#[derive(Debug)]
pub struct RunSummary {
    pub all_passed: bool,
    pub manifest_path: std::path::PathBuf,
    pub tasks_run: usize,
}

/// Execute a config file. Tasks run sequentially in config order so the
/// manifest is deterministic; intra-task parallelism is rayon's.
pub fn run(
    config_path: &Path,
    out_dir: &Path,
    seed_override: Option<u64>,
) -> Result<RunSummary, RunError> {
    let raw = fs::read(config_path)
        .map_err(|e| RunError::Config(format!("cannot read {}: {e}", config_path.display())))?;
    // serde_json's Display already carries the line/column diagnostic
    let mut config: ExperimentConfig =
        serde_json::from_slice(&raw).map_err(|e| RunError::Config(e.to_string()))?;
    config.validate().map_err(RunError::Config)?;
    if let Some(s) = seed_override {
        for t in &mut config.tasks {
            t.override_seed(s);
        }
    }

    fs::create_dir_all(out_dir)
        .map_err(|e| RunError::Config(format!("cannot create {}: {e}", out_dir.display())))?;

    let mut entries: Vec<ManifestEntry> = Vec::new();
    let mut write_artifact = |name: &str, task: &str, pass: Option<bool>, bytes: &[u8]| {
        let path = out_dir.join(name);
        fs::write(&path, bytes)
            .map_err(|e| RunError::Config(format!("cannot write {}: {e}", path.display())))?;
        entries.push(ManifestEntry {
            file: name.to_string(),
            task: task.to_string(),
            pass,
            sha256: digest(bytes),
        });
        Ok::<(), RunError>(())
    };

    // base grid artifacts
    let base_grid = tasks::base_grid(&config).map_err(|e| RunError::Numeric(e.to_string()))?;
    write_artifact("grid.csv", "grid", None, base_grid.to_csv().as_bytes())?;
    write_artifact(
        "grid.json",
        "grid",
        None,
        serde_json::to_vec_pretty(&base_grid.metadata())
            .expect("grid metadata serializes")
            .as_slice(),
    )?;

    let mut all_passed = true;
    let task_list = config.tasks.clone();
    for (idx, task) in task_list.iter().enumerate() {
        let outcome = tasks::execute(&config, task, idx)?;
        all_passed &= outcome.pass;
        for art in &outcome.artifacts {
            write_artifact(&art.name, task.name(), Some(outcome.pass), &art.bytes)?;
        }
    }

    let manifest = Manifest {
        config_sha256: digest(&raw),
        created_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        pass: all_passed,
        entries,
    };
    let manifest_path = out_dir.join("manifest.json");
    fs::write(
        &manifest_path,
        serde_json::to_vec_pretty(&manifest).expect("manifest serializes"),
    )
    .map_err(|e| RunError::Config(format!("cannot write manifest: {e}")))?;

    Ok(RunSummary {
        all_passed,
        manifest_path,
        tasks_run: task_list.len(),
    })
}
