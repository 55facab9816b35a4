//! Run manifests: the resolved job, seeds and digests of every file touched.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use embguard_core::io::{file_digest, read_json, write_json};
use embguard_core::Result;

use crate::job::{Job, Outcome};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub toolkit_version: String,
    pub config: Job,
    pub seeds: BTreeMap<String, u64>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub exit_code: i32,
    pub threads: usize,
    pub wall_clock_secs: f64,
}

pub fn digests(paths: &[PathBuf]) -> Result<Vec<FileDigest>> {
    paths
        .iter()
        .map(|p| {
            Ok(FileDigest {
                path: p.clone(),
                sha256: file_digest(p)?,
            })
        })
        .collect()
}

impl RunManifest {
    pub fn new(job: &Job, outcome: &Outcome, wall_clock_secs: f64) -> Result<Self> {
        Ok(RunManifest {
            subcommand: job.name().to_owned(),
            toolkit_version: embguard_core::VERSION.to_owned(),
            config: job.clone(),
            seeds: outcome.seeds.clone(),
            inputs: digests(&outcome.inputs)?,
            outputs: digests(&outcome.outputs)?,
            exit_code: outcome.exit_code,
            threads: rayon::current_num_threads(),
            wall_clock_secs,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        read_json(path)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

/// Outputs whose digest differs from the manifest, with the new digest.
pub fn mismatches(recorded: &[FileDigest], current: &[FileDigest]) -> Vec<(PathBuf, Option<String>)> {
    recorded
        .iter()
        .filter_map(|r| {
            let now = current.iter().find(|c| c.path == r.path).map(|c| c.sha256.clone());
            (now.as_deref() != Some(r.sha256.as_str())).then(|| (r.path.clone(), now))
        })
        .collect()
}
