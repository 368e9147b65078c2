//! Parsing and validation of the platform-agnostic YAML threat specification.
//!
//! Analysts describe a detection in four parts: a free-text `description`,
//! the abstract `fields` to select, an abstract log `source`, and the
//! detection `logic` in plain English. The spec never binds to a particular
//! SIEM's syntax; translation happens downstream in the generation pipeline.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_yaml::Value;

/// A parsed platform-agnostic detection specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreatSpec {
    /// Unique identifier; defaults to the source filename stem when the file
    /// carries no explicit `id` key.
    pub id: String,
    /// What threat behavior is being detected.
    pub description: String,
    /// Abstract field names the analyst wants returned.
    pub select_fields: Vec<String>,
    /// Abstract log source, e.g. "events" or "authentication logs".
    pub source: String,
    /// Detection logic in plain English (conditions, thresholds, windows).
    pub logic: String,
    /// Unknown top-level keys, preserved so analyst-extended specs stay usable.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
}

/// Errors produced while parsing a single spec file.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("malformed YAML: {0}")]
    MalformedYaml(String),
    #[error("missing required key `{0}`")]
    MissingField(String),
    #[error("key `{0}` is empty")]
    EmptyField(String),
    #[error("duplicate select field `{0}` (entries must be unique ignoring case)")]
    DuplicateSelectField(String),
    #[error("could not read file: {0}")]
    Unreadable(String),
}

/// Error for a spec-directory load that cannot even start.
#[derive(Debug, thiserror::Error)]
pub enum SpecDirError {
    #[error("spec directory not found: {0}")]
    DirNotFound(PathBuf),
}

/// Outcome of loading a directory of spec files. Files that fail to parse are
/// collected rather than aborting the batch.
#[derive(Debug, Default)]
pub struct SpecDirLoad {
    /// Successfully parsed specs, sorted by id.
    pub specs: Vec<ThreatSpec>,
    /// Per-file failures as (path, error).
    pub failures: Vec<(PathBuf, SpecError)>,
}

const REQUIRED_KEYS: [&str; 4] = ["description", "fields", "source", "logic"];

/// Parse a YAML threat specification.
///
/// `default_id` is used when the document has no explicit `id` key; callers
/// loading from disk pass the filename stem. Unknown top-level keys are kept
/// in [`ThreatSpec::extras`] and surfaced by [`ThreatSpec::warnings`].
pub fn parse_spec(yaml_text: &str, default_id: &str) -> Result<ThreatSpec, SpecError> {
    let value: Value = serde_yaml::from_str(yaml_text)
        .map_err(|e| SpecError::MalformedYaml(e.to_string()))?;
    let mapping = match value {
        Value::Mapping(m) => m,
        other => {
            return Err(SpecError::MalformedYaml(format!(
                "top level must be a mapping, got {}",
                yaml_type_name(&other)
            )))
        }
    };

    let mut fields: BTreeMap<String, Value> = BTreeMap::new();
    for (k, v) in mapping {
        let key = match k {
            Value::String(s) => s,
            other => {
                return Err(SpecError::MalformedYaml(format!(
                    "top-level keys must be strings, got {}",
                    yaml_type_name(&other)
                )))
            }
        };
        fields.insert(key, v);
    }

    for key in REQUIRED_KEYS {
        if !fields.contains_key(key) {
            return Err(SpecError::MissingField(key.to_string()));
        }
    }

    let id = match fields.remove("id") {
        Some(v) => {
            let s = string_value("id", &v)?.trim().to_string();
            if s.is_empty() {
                return Err(SpecError::EmptyField("id".to_string()));
            }
            s
        }
        None => default_id.trim().to_string(),
    };

    let description = required_text(&mut fields, "description")?;
    let source = required_text(&mut fields, "source")?;
    let logic = required_text(&mut fields, "logic")?;
    let select_fields = select_field_list(fields.remove("fields").expect("checked above"))?;

    Ok(ThreatSpec {
        id,
        description,
        select_fields,
        source,
        logic,
        extras: fields,
    })
}

impl ThreatSpec {
    /// Serialize back to YAML with the canonical key layout. Reparsing the
    /// result yields a field-wise equal spec.
    pub fn to_yaml(&self) -> String {
        let mut mapping = serde_yaml::Mapping::new();
        mapping.insert("id".into(), Value::String(self.id.clone()));
        mapping.insert("description".into(), Value::String(self.description.clone()));
        mapping.insert(
            "fields".into(),
            Value::Sequence(self.select_fields.iter().cloned().map(Value::String).collect()),
        );
        mapping.insert("source".into(), Value::String(self.source.clone()));
        mapping.insert("logic".into(), Value::String(self.logic.clone()));
        for (k, v) in &self.extras {
            mapping.insert(Value::String(k.clone()), v.clone());
        }
        serde_yaml::to_string(&Value::Mapping(mapping)).expect("spec serializes to YAML")
    }

    /// One warning per unknown top-level key found in the source file.
    pub fn warnings(&self) -> Vec<String> {
        self.extras
            .keys()
            .map(|k| format!("spec `{}`: unknown key `{}` preserved but ignored", self.id, k))
            .collect()
    }
}

/// Load every `.yaml`/`.yml` file in `dir` (non-recursive). Parse failures are
/// collected per file and do not abort the batch; results are sorted by id so
/// output is independent of filesystem enumeration order.
pub fn load_spec_dir(dir: &Path) -> Result<SpecDirLoad, SpecDirError> {
    if !dir.is_dir() {
        return Err(SpecDirError::DirNotFound(dir.to_path_buf()));
    }
    let mut load = SpecDirLoad::default();
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|_| SpecDirError::DirNotFound(dir.to_path_buf()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && has_yaml_extension(p))
        .collect();
    entries.sort();

    for path in entries {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let parsed = fs::read_to_string(&path)
            .map_err(|e| SpecError::Unreadable(e.to_string()))
            .and_then(|text| parse_spec(&text, &stem));
        match parsed {
            Ok(spec) => {
                for w in spec.warnings() {
                    log::warn!("{w}");
                }
                load.specs.push(spec);
            }
            Err(err) => load.failures.push((path, err)),
        }
    }

    load.specs.sort_by(|a, b| a.id.cmp(&b.id));
    load.failures.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(load)
}

fn has_yaml_extension(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| e.eq_ignore_ascii_case("yaml") || e.eq_ignore_ascii_case("yml"))
        .unwrap_or(false)
}

fn yaml_type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "bool",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Sequence(_) => "sequence",
        Value::Mapping(_) => "mapping",
        Value::Tagged(_) => "tagged value",
    }
}

fn string_value(key: &str, v: &Value) -> Result<String, SpecError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        other => Err(SpecError::MalformedYaml(format!(
            "key `{key}` must be a string, got {}",
            yaml_type_name(other)
        ))),
    }
}

fn required_text(fields: &mut BTreeMap<String, Value>, key: &str) -> Result<String, SpecError> {
    let value = fields.remove(key).expect("presence checked by caller");
    let text = string_value(key, &value)?.trim().to_string();
    if text.is_empty() {
        return Err(SpecError::EmptyField(key.to_string()));
    }
    Ok(text)
}

fn select_field_list(value: Value) -> Result<Vec<String>, SpecError> {
    let seq = match value {
        Value::Sequence(seq) => seq,
        other => {
            return Err(SpecError::MalformedYaml(format!(
                "key `fields` must be a sequence of strings, got {}",
                yaml_type_name(&other)
            )))
        }
    };
    if seq.is_empty() {
        return Err(SpecError::EmptyField("fields".to_string()));
    }
    let mut out = Vec::with_capacity(seq.len());
    let mut seen_folded: Vec<String> = Vec::new();
    for item in seq {
        let entry = string_value("fields", &item)?.trim().to_string();
        if entry.is_empty() {
            return Err(SpecError::EmptyField("fields".to_string()));
        }
        let folded = entry.to_lowercase();
        if seen_folded.contains(&folded) {
            return Err(SpecError::DuplicateSelectField(folded));
        }
        seen_folded.push(folded);
        out.push(entry);
    }
    Ok(out)
}
