//! SynRAG core: turns platform-agnostic YAML threat specifications into
//! platform-specific SIEM queries (QRadar AQL, Google SecOps YARA-L) through
//! retrieval-augmented, syntax-constrained prompting, then validates and
//! scores the results against expert references.

pub mod platform;

pub use platform::Platform;
