//! Dense vector index with exact top-k cosine search and JSON Lines
//! persistence.
//!
//! The documentation corpus is small, so search is an exhaustive scan; that
//! keeps retrieval exact and directly testable against a brute-force oracle.

use std::collections::HashSet;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::platform::Platform;

/// A dense embedding. All values are finite; the dimension is fixed by the
/// index the vector lives in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EmbeddingVector(pub Vec<f64>);

impl EmbeddingVector {
    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn l2_norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimilarityError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("cosine similarity is undefined for a zero vector")]
    ZeroVector,
}

/// Cosine similarity, `dot(a,b) / (|a||b|)`.
pub fn cosine_similarity(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<f64, SimilarityError> {
    if a.dimension() != b.dimension() {
        return Err(SimilarityError::DimensionMismatch(a.dimension(), b.dimension()));
    }
    let norm_a = a.l2_norm();
    let norm_b = b.l2_norm();
    if norm_a == 0.0 || norm_b == 0.0 {
        return Err(SimilarityError::ZeroVector);
    }
    let dot: f64 = a.0.iter().zip(b.0.iter()).map(|(x, y)| x * y).sum();
    Ok(dot / (norm_a * norm_b))
}

/// One indexed chunk: provenance metadata plus its embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub chunk_id: String,
    pub origin: Platform,
    pub start_offset: usize,
    pub text: String,
    pub vector: EmbeddingVector,
}

/// Immutable-once-built store of embedded chunks.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorIndex {
    dimension: usize,
    provider_id: String,
    entries: Vec<IndexEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IndexError {
    #[error("entry vector has dimension {got}, index expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("duplicate chunk id `{0}`")]
    DuplicateChunkId(String),
    #[error("entry vector for `{0}` contains non-finite values")]
    NonFiniteVector(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("index contains no entries")]
    EmptyIndex,
    #[error("query vector has dimension {got}, index expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("query vector has zero norm")]
    ZeroQuery,
}

/// A search result: chunk id and its cosine score, best first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub chunk_id: String,
    pub score: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum PersistError {
    #[error("could not write index file: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("could not read index file: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt index file: {0}")]
    CorruptIndexFile(String),
}

#[derive(Serialize, Deserialize)]
struct IndexHeader {
    dimension: usize,
    provider_id: String,
    entries: usize,
}

impl VectorIndex {
    pub fn new(dimension: usize, provider_id: impl Into<String>) -> Self {
        Self { dimension, provider_id: provider_id.into(), entries: Vec::new() }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn provider_id(&self) -> &str {
        &self.provider_id
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[IndexEntry] {
        &self.entries
    }

    pub fn push(&mut self, entry: IndexEntry) -> Result<(), IndexError> {
        if entry.vector.dimension() != self.dimension {
            return Err(IndexError::DimensionMismatch {
                expected: self.dimension,
                got: entry.vector.dimension(),
            });
        }
        if !entry.vector.is_finite() {
            return Err(IndexError::NonFiniteVector(entry.chunk_id));
        }
        if self.entries.iter().any(|e| e.chunk_id == entry.chunk_id) {
            return Err(IndexError::DuplicateChunkId(entry.chunk_id));
        }
        self.entries.push(entry);
        Ok(())
    }

    /// Exact top-k scan over entries matching `origin_filter`, sorted by
    /// descending score with ties broken by ascending chunk id. Returns fewer
    /// than `k` hits when the filtered index is smaller.
    pub fn top_k(
        &self,
        query: &EmbeddingVector,
        k: usize,
        origin_filter: Platform,
    ) -> Result<Vec<SearchHit>, SearchError> {
        if self.entries.is_empty() {
            return Err(SearchError::EmptyIndex);
        }
        if query.dimension() != self.dimension {
            return Err(SearchError::DimensionMismatch {
                expected: self.dimension,
                got: query.dimension(),
            });
        }
        if query.l2_norm() == 0.0 {
            return Err(SearchError::ZeroQuery);
        }
        let mut hits: Vec<SearchHit> = self
            .entries
            .iter()
            .filter(|e| e.origin == origin_filter)
            .filter_map(|e| {
                cosine_similarity(query, &e.vector)
                    .ok()
                    .map(|score| SearchHit { chunk_id: e.chunk_id.clone(), score })
            })
            .collect();
        hits.sort_by(|a, b| {
            b.score
                .partial_cmp(&a.score)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.chunk_id.cmp(&b.chunk_id))
        });
        hits.truncate(k);
        Ok(hits)
    }

    pub fn entry(&self, chunk_id: &str) -> Option<&IndexEntry> {
        self.entries.iter().find(|e| e.chunk_id == chunk_id)
    }

    /// Warning text when this index was built by a different embedding
    /// provider than the one configured for the current run.
    pub fn provider_mismatch_warning(&self, configured_provider_id: &str) -> Option<String> {
        if self.provider_id != configured_provider_id {
            Some(format!(
                "index was built with provider `{}` but the configured provider is `{}`; \
                 retrieval scores may be meaningless",
                self.provider_id, configured_provider_id
            ))
        } else {
            None
        }
    }

    /// Write the index as JSON Lines: a header line, then one entry per line.
    /// Floats are serialized as shortest round-trip decimals, so the format
    /// is lossless and byte-stable.
    pub fn persist(&self, path: &Path) -> Result<(), PersistError> {
        let file = fs::File::create(path)?;
        let mut w = BufWriter::new(file);
        let header = IndexHeader {
            dimension: self.dimension,
            provider_id: self.provider_id.clone(),
            entries: self.entries.len(),
        };
        writeln!(w, "{}", serde_json::to_string(&header).expect("header serializes"))?;
        for entry in &self.entries {
            writeln!(w, "{}", serde_json::to_string(entry).expect("entry serializes"))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, LoadError> {
        let content = fs::read_to_string(path)?;
        let mut lines = content.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| LoadError::CorruptIndexFile("missing header line".to_string()))?;
        let header: IndexHeader = serde_json::from_str(header_line)
            .map_err(|e| LoadError::CorruptIndexFile(format!("bad header: {e}")))?;

        let mut index = VectorIndex::new(header.dimension, header.provider_id);
        let mut seen: HashSet<String> = HashSet::new();
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: IndexEntry = serde_json::from_str(line)
                .map_err(|e| LoadError::CorruptIndexFile(format!("entry {}: {e}", n + 1)))?;
            if entry.vector.dimension() != header.dimension {
                return Err(LoadError::CorruptIndexFile(format!(
                    "entry {}: dimension {} does not match header {}",
                    n + 1,
                    entry.vector.dimension(),
                    header.dimension
                )));
            }
            if !entry.vector.is_finite() {
                return Err(LoadError::CorruptIndexFile(format!(
                    "entry {}: non-finite vector value",
                    n + 1
                )));
            }
            if !seen.insert(entry.chunk_id.clone()) {
                return Err(LoadError::CorruptIndexFile(format!(
                    "duplicate chunk id `{}`",
                    entry.chunk_id
                )));
            }
            index.entries.push(entry);
        }
        if index.entries.len() != header.entries {
            return Err(LoadError::CorruptIndexFile(format!(
                "header declares {} entries, found {}",
                header.entries,
                index.entries.len()
            )));
        }
        Ok(index)
    }
}
