//! The SIEM platforms this pipeline targets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A supported SIEM platform. Each platform has its own query language,
/// documentation corpus, and syntax catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Platform {
    /// QRadar, queried with AQL (Ariel Query Language).
    Qradar,
    /// Google SecOps, queried with YARA-L 2.0 over the Unified Data Model.
    Secops,
}

impl Platform {
    pub const ALL: [Platform; 2] = [Platform::Qradar, Platform::Secops];

    pub fn as_str(&self) -> &'static str {
        match self {
            Platform::Qradar => "qradar",
            Platform::Secops => "secops",
        }
    }

    /// Name of the query language used by this platform.
    pub fn query_language(&self) -> &'static str {
        match self {
            Platform::Qradar => "AQL",
            Platform::Secops => "YARA-L 2.0",
        }
    }
}

impl fmt::Display for Platform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error returned when a string does not name a known platform.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown platform `{0}`, expected `qradar` or `secops`")]
pub struct UnknownPlatform(pub String);

impl FromStr for Platform {
    type Err = UnknownPlatform;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qradar" => Ok(Platform::Qradar),
            "secops" => Ok(Platform::Secops),
            other => Err(UnknownPlatform(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_case_insensitively() {
        assert_eq!("QRadar".parse::<Platform>().unwrap(), Platform::Qradar);
        assert_eq!("secops".parse::<Platform>().unwrap(), Platform::Secops);
        assert!("splunk".parse::<Platform>().is_err());
    }

    #[test]
    fn serde_uses_lowercase_names() {
        assert_eq!(serde_json::to_string(&Platform::Qradar).unwrap(), "\"qradar\"");
        let p: Platform = serde_json::from_str("\"secops\"").unwrap();
        assert_eq!(p, Platform::Secops);
    }
}
