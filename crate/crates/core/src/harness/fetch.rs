//! Instance manifest, local cache and download.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::registry::builtin_graph;
use super::HarnessError;
use crate::dimacs::{parse_dimacs, serialize_dimacs};
use crate::graph::Graph;

/// Environment variable naming the instance cache directory.
pub const CACHE_ENV: &str = "STABLEQUBO_CACHE";

const SHIPPED_MANIFEST: &str = include_str!("../../data/manifest.json");

/// Cache directory: `$STABLEQUBO_CACHE`, else `.stable-qubo-cache`.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".stable-qubo-cache"))
}

pub fn cache_path(cache_dir: &Path, name: &str) -> PathBuf {
    cache_dir.join(format!("{name}.clq"))
}

/// SHA-256 of the canonical DIMACS serialization, so comments and edge order
/// in the source file do not matter.
pub fn content_checksum(g: &Graph) -> String {
    hex::encode(Sha256::digest(serialize_dimacs(g).as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    /// [`content_checksum`] of the clique graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
    /// Vertex and edge counts of the file as distributed.
    pub n: usize,
    pub m: usize,
    /// Built-in generator that reproduces the file, used instead of a download.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub instances: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn shipped() -> Self {
        serde_json::from_str(SHIPPED_MANIFEST).expect("shipped manifest is valid")
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::InvalidSpec(format!("{}: {e}", path.display())))
    }

    pub fn entry(&self, name: &str) -> Option<&ManifestEntry> {
        self.instances.iter().find(|e| e.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FetchStatus {
    Cached,
    Generated,
    Downloaded,
    ChecksumMismatch { expected: String, found: String },
    Failed { reason: String },
}

impl FetchStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, FetchStatus::Cached | FetchStatus::Generated | FetchStatus::Downloaded)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchRecord {
    pub name: String,
    #[serde(flatten)]
    pub status: FetchStatus,
}

fn check(entry: &ManifestEntry, g: &Graph) -> Result<(), FetchStatus> {
    if (g.n(), g.m()) != (entry.n, entry.m) {
        return Err(FetchStatus::Failed {
            reason: format!(
                "expected n={} m={}, found n={} m={}",
                entry.n,
                entry.m,
                g.n(),
                g.m()
            ),
        });
    }
    if let Some(expected) = &entry.sha256 {
        let found = content_checksum(g);
        if &found != expected {
            return Err(FetchStatus::ChecksumMismatch {
                expected: expected.clone(),
                found,
            });
        }
    }
    Ok(())
}

fn cached(entry: &ManifestEntry, cache_dir: &Path) -> Option<Result<(), FetchStatus>> {
    let bytes = fs::read(cache_path(cache_dir, &entry.name)).ok()?;
    Some(match parse_dimacs(&bytes) {
        Ok(g) => check(entry, &g),
        Err(e) => Err(FetchStatus::Failed {
            reason: format!("cached file unreadable: {e}"),
        }),
    })
}

fn store(cache_dir: &Path, name: &str, g: &Graph) -> Result<(), FetchStatus> {
    let failed = |e: std::io::Error| FetchStatus::Failed {
        reason: format!("cannot write cache: {e}"),
    };
    fs::create_dir_all(cache_dir).map_err(failed)?;
    fs::write(cache_path(cache_dir, name), serialize_dimacs(g)).map_err(failed)
}

fn download(url: &str) -> Result<Vec<u8>, String> {
    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(60))
        .build()
        .map_err(|e| e.to_string())?;
    let response = client.get(url).send().map_err(|e| e.to_string())?;
    if !response.status().is_success() {
        return Err(format!("HTTP {}", response.status()));
    }
    response.bytes().map(|b| b.to_vec()).map_err(|e| e.to_string())
}

fn fetch_one(entry: &ManifestEntry, cache_dir: &Path, offline: bool) -> FetchStatus {
    let cache_problem = match cached(entry, cache_dir) {
        Some(Ok(())) => return FetchStatus::Cached,
        Some(Err(status)) => {
            log::warn!("{}: ignoring cached copy: {status:?}", entry.name);
            Some(status)
        }
        None => None,
    };

    if let Some(generator) = &entry.generator {
        let g = match builtin_graph(generator) {
            Some(Ok(g)) => g,
            Some(Err(e)) => return FetchStatus::Failed { reason: e.to_string() },
            None => {
                return FetchStatus::Failed {
                    reason: format!("unknown generator `{generator}`"),
                }
            }
        };
        if let Err(status) = check(entry, &g) {
            return status;
        }
        return store(cache_dir, &entry.name, &g).err().unwrap_or(FetchStatus::Generated);
    }

    if offline {
        return cache_problem.unwrap_or(FetchStatus::Failed {
            reason: "not cached and offline mode is on".into(),
        });
    }
    let Some(url) = &entry.url else {
        return FetchStatus::Failed {
            reason: "no url and no generator".into(),
        };
    };
    let bytes = match download(url) {
        Ok(b) => b,
        Err(reason) => return FetchStatus::Failed { reason },
    };
    let g = match parse_dimacs(&bytes) {
        Ok(g) => g,
        Err(e) => {
            return FetchStatus::Failed {
                reason: format!("downloaded file unreadable: {e}"),
            }
        }
    };
    if let Err(status) = check(entry, &g) {
        return status;
    }
    store(cache_dir, &entry.name, &g).err().unwrap_or(FetchStatus::Downloaded)
}

/// Brings every manifest entry into the cache. Failures are recorded per
/// instance; the rest proceed.
pub fn fetch_instances(manifest: &Manifest, cache_dir: &Path, offline: bool) -> Vec<FetchRecord> {
    manifest
        .instances
        .iter()
        .map(|entry| {
            let status = fetch_one(entry, cache_dir, offline);
            if !status.is_ok() {
                log::warn!("{}: {status:?}", entry.name);
            }
            FetchRecord {
                name: entry.name.clone(),
                status,
            }
        })
        .collect()
}
