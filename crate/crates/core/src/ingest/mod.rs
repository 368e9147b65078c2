//! Documentation ingestion: load markdown and saved HTML sources, then split
//! them into overlapping chunks with provenance metadata.

mod chunker;
mod html;

pub use chunker::{chunk_text, ChunkParams, InvalidChunkParams, TextChunk, DEFAULT_CHUNK_SIZE, DEFAULT_OVERLAP};
pub use html::{extract_article_html, HtmlError};

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use uuid::Uuid;

use crate::platform::Platform;

/// Namespace for deterministic document ids: the same corpus layout always
/// produces the same ids, which keeps rebuilt indexes byte-identical.
const DOC_ID_NAMESPACE: Uuid = Uuid::from_bytes([
    0x73, 0x79, 0x6e, 0x72, 0x61, 0x67, 0x2d, 0x64, 0x6f, 0x63, 0x2d, 0x69, 0x64, 0x73, 0x2e, 0x31,
]);

/// A loaded documentation source file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceDocument {
    /// UUID derived from origin and relative path.
    pub doc_id: String,
    /// Platform corpus the file belongs to.
    pub origin: Platform,
    /// Path relative to the corpus root, with forward slashes.
    pub source_path: String,
    /// Extracted plain text / markdown. Never empty.
    pub text: String,
}

/// A retrievable segment of a [`SourceDocument`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentChunk {
    /// `doc_id` plus zero-padded ordinal.
    pub chunk_id: String,
    pub origin: Platform,
    /// Position in the parent text, in characters.
    pub start_offset: usize,
    pub text: String,
}

/// Why a file in a corpus directory was skipped instead of loaded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SkipReason {
    /// Not valid UTF-8.
    DecodeError(String),
    /// File was empty (or whitespace only).
    EmptyDocument,
    /// HTML file without an `<article>` element.
    NoArticleTag,
    /// Filesystem error while reading.
    Unreadable(String),
}

impl std::fmt::Display for SkipReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SkipReason::DecodeError(e) => write!(f, "decode error: {e}"),
            SkipReason::EmptyDocument => write!(f, "empty document"),
            SkipReason::NoArticleTag => write!(f, "no <article> element"),
            SkipReason::Unreadable(e) => write!(f, "unreadable: {e}"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("corpus directory not found: {0}")]
    DirNotFound(PathBuf),
}

/// Result of loading a corpus directory: documents sorted by path, plus the
/// files that were skipped and why.
#[derive(Debug, Default)]
pub struct CorpusLoad {
    pub documents: Vec<SourceDocument>,
    pub skipped: Vec<(PathBuf, SkipReason)>,
}

/// Load every `.md` file under `dir`, recursively.
pub fn load_markdown_dir(dir: &Path, origin: Platform) -> Result<CorpusLoad, IngestError> {
    load_dir(dir, origin, false)
}

/// Load every `.md`, `.html`, and `.htm` file under `dir`, recursively.
/// HTML files go through [`extract_article_html`].
pub fn load_corpus_dir(dir: &Path, origin: Platform) -> Result<CorpusLoad, IngestError> {
    load_dir(dir, origin, true)
}

fn load_dir(dir: &Path, origin: Platform, include_html: bool) -> Result<CorpusLoad, IngestError> {
    if !dir.is_dir() {
        return Err(IngestError::DirNotFound(dir.to_path_buf()));
    }
    let mut paths: Vec<PathBuf> = walkdir::WalkDir::new(dir)
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file())
        .map(|e| e.into_path())
        .filter(|p| match extension(p).as_deref() {
            Some("md") => true,
            Some("html") | Some("htm") => include_html,
            _ => false,
        })
        .collect();
    paths.sort();

    let mut load = CorpusLoad::default();
    for path in paths {
        let started = Instant::now();
        let rel = relative_path(dir, &path);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) => {
                load.skipped.push((path, SkipReason::Unreadable(e.to_string())));
                continue;
            }
        };
        let raw = match String::from_utf8(bytes) {
            Ok(t) => t,
            Err(e) => {
                load.skipped.push((path, SkipReason::DecodeError(e.to_string())));
                continue;
            }
        };
        let text = if matches!(extension(&path).as_deref(), Some("html") | Some("htm")) {
            match extract_article_html(&raw) {
                Ok(t) => t,
                Err(HtmlError::NoArticleTag) => {
                    load.skipped.push((path, SkipReason::NoArticleTag));
                    continue;
                }
            }
        } else {
            raw
        };
        if text.trim().is_empty() {
            load.skipped.push((path, SkipReason::EmptyDocument));
            continue;
        }
        let doc_id = Uuid::new_v5(
            &DOC_ID_NAMESPACE,
            format!("{}:{}", origin, rel).as_bytes(),
        )
        .to_string();
        log::info!("loaded {} in {} ms", path.display(), started.elapsed().as_millis());
        load.documents.push(SourceDocument { doc_id, origin, source_path: rel, text });
    }
    load.documents.sort_by(|a, b| a.source_path.cmp(&b.source_path));
    Ok(load)
}

fn extension(path: &Path) -> Option<String> {
    path.extension().and_then(|e| e.to_str()).map(|e| e.to_ascii_lowercase())
}

fn relative_path(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

/// Split one document into chunks with provenance ids.
pub fn chunk_document(
    doc: &SourceDocument,
    params: ChunkParams,
) -> Result<Vec<DocumentChunk>, InvalidChunkParams> {
    let chunks = chunk_text(&doc.text, params)?;
    let out: Vec<DocumentChunk> = chunks
        .into_iter()
        .enumerate()
        .map(|(ordinal, c)| DocumentChunk {
            chunk_id: format!("{}:{:04}", doc.doc_id, ordinal),
            origin: doc.origin,
            start_offset: c.start_offset,
            text: c.text,
        })
        .collect();
    log::info!("chunked {} into {} chunks", doc.doc_id, out.len());
    Ok(out)
}
