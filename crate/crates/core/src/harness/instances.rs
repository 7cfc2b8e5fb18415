use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::fetch::cache_path;
use super::registry::builtin_graph;
use super::HarnessError;
use crate::dimacs::parse_dimacs;
use crate::graph::{complement, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    File(PathBuf),
    Builtin,
    Cache(PathBuf),
}

/// A stable-set instance ready for solving.
#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub name: String,
    pub complemented: bool,
    /// The graph whose stable sets are sought (already complemented if asked).
    pub graph: Graph,
    pub origin: Origin,
}

/// Resolves `reference` as an existing file path, then a built-in name, then
/// `<cache_dir>/<name>.clq`. The complement is taken when `complement` is set.
pub fn load_instance(
    reference: &str,
    complement_flag: bool,
    cache_dir: &Path,
) -> Result<LoadedInstance, HarnessError> {
    let (name, graph, origin) = if Path::new(reference).is_file() {
        let path = PathBuf::from(reference);
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| reference.to_string());
        (name, read_file(&path)?, Origin::File(path))
    } else if let Some(generated) = builtin_graph(reference) {
        (reference.to_string(), generated?, Origin::Builtin)
    } else {
        let path = cache_path(cache_dir, reference);
        if !path.is_file() {
            return Err(HarnessError::UnknownInstance(reference.to_string()));
        }
        (reference.to_string(), read_file(&path)?, Origin::Cache(path))
    };
    let graph = if complement_flag { complement(&graph) } else { graph };
    Ok(LoadedInstance {
        name,
        complemented: complement_flag,
        graph,
        origin,
    })
}

fn read_file(path: &Path) -> Result<Graph, HarnessError> {
    let bytes = fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    parse_dimacs(&bytes).map_err(|source| HarnessError::Dimacs {
        path: path.display().to_string(),
        source,
    })
}
