//! The shipped corpus: algebra files plus a manifest of expected invariants.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::parse::ParseError;
use crate::presentation::Presentation;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Manifest {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub verdict: String,
    pub d: Option<usize>,
    pub l: Option<i64>,
    pub standard: bool,
    pub koszul: bool,
    #[serde(default)]
    pub koszul_witness: Option<(usize, i64)>,
    /// `[i, j, beta]` triples, complete for the entry's window.
    pub betti_k: Vec<[i64; 3]>,
    /// `dim A_0, dim A_1, ...`
    pub hilbert: Vec<u64>,
    pub cm_reg_a: i64,
    pub ext_reg_k: i64,
    pub ext_reg_k_certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub file: String,
    pub max_hom: usize,
    pub max_deg: i64,
    #[serde(default = "default_random_modules")]
    pub random_modules: usize,
    pub expected: Expected,
    /// Where each expectation comes from.
    #[serde(default)]
    pub source: BTreeMap<String, String>,
}

fn default_random_modules() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomAlgebras {
    pub count: usize,
    pub max_hom: usize,
    pub max_deg: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub random_algebras: Option<RandomAlgebras>,
    #[serde(rename = "algebra", default)]
    pub algebras: Vec<CorpusEntry>,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub dir: PathBuf,
    pub manifest: Manifest,
}

impl Corpus {
    pub fn load(dir: impl AsRef<Path>) -> Result<Self, CorpusError> {
        let dir = dir.as_ref().to_path_buf();
        let path = dir.join("manifest.toml");
        let text = fs::read_to_string(&path).map_err(|source| CorpusError::Io {
            path: path.clone(),
            source,
        })?;
        let manifest =
            toml::from_str(&text).map_err(|source| CorpusError::Manifest { path, source })?;
        Ok(Corpus { dir, manifest })
    }

    pub fn presentation(&self, entry: &CorpusEntry) -> Result<Presentation, CorpusError> {
        read_presentation(&self.dir.join(&entry.file))
    }

    pub fn entry(&self, name: &str) -> Option<&CorpusEntry> {
        self.manifest.algebras.iter().find(|e| e.name == name)
    }
}

pub fn read_presentation(path: &Path) -> Result<Presentation, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Presentation::parse(&text).map_err(|source| CorpusError::Parse {
        path: path.to_path_buf(),
        source,
    })
}
