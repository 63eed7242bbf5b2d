//! Run manifest: every artifact file with its task, pass flag and content
//! digest. The `created_unix` timestamp is the one field excluded from
//! reproducibility comparisons.

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    pub file: String,
    pub task: String,
    pub pass: Option<bool>,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub config_sha256: String,
    pub created_unix: u64,
    pub pass: bool,
    pub entries: Vec<ManifestEntry>,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
