use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// O*NET-SOC code, `DD-DDDD.DD`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct OnetCode(String);

impl OnetCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for OnetCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for OnetCode {
    type Err = OccupationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let b = s.as_bytes();
        let ok = b.len() == 10
            && b.iter().enumerate().all(|(i, &c)| match i {
                2 => c == b'-',
                7 => c == b'.',
                _ => c.is_ascii_digit(),
            });
        if ok {
            Ok(OnetCode(s.to_string()))
        } else {
            Err(OccupationError::MalformedCode(s.to_string()))
        }
    }
}

impl TryFrom<String> for OnetCode {
    type Error = OccupationError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<OnetCode> for String {
    fn from(c: OnetCode) -> Self {
        c.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OccupationEntry {
    pub display_name: String,
    pub onet_title: String,
    pub onet_code: OnetCode,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OccupationError {
    #[error("malformed O*NET code {0:?}")]
    MalformedCode(String),
    #[error("unknown occupation {0:?}")]
    Unknown(String),
    #[error("occupation list: {0}")]
    Invalid(String),
}

/// The curated occupation list, in file order.
#[derive(Debug, Clone)]
pub struct OccupationList {
    entries: Vec<OccupationEntry>,
}

impl OccupationList {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, OccupationError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path)
            .map_err(|e| OccupationError::Invalid(format!("{}: {e}", path.display())))?;
        Self::parse(&raw)
    }

    pub fn parse(raw: &str) -> Result<Self, OccupationError> {
        let entries: Vec<OccupationEntry> =
            serde_json::from_str(raw).map_err(|e| OccupationError::Invalid(e.to_string()))?;
        Self::new(entries)
    }

    pub fn new(entries: Vec<OccupationEntry>) -> Result<Self, OccupationError> {
        if entries.is_empty() {
            return Err(OccupationError::Invalid("no entries".into()));
        }
        let mut names = HashSet::new();
        for e in &entries {
            if e.display_name.trim().is_empty() {
                return Err(OccupationError::Invalid(format!("blank display name for {}", e.onet_code)));
            }
            if !names.insert(e.display_name.as_str()) {
                return Err(OccupationError::Invalid(format!(
                    "duplicate display name {:?}",
                    e.display_name
                )));
            }
        }
        Ok(OccupationList { entries })
    }

    pub fn entries(&self) -> &[OccupationEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exact display-name lookup, falling back to a case-insensitive match.
    pub fn resolve_occupation(&self, name: &str) -> Result<&OnetCode, OccupationError> {
        let name = name.trim();
        self.entries
            .iter()
            .find(|e| e.display_name == name)
            .or_else(|| {
                self.entries
                    .iter()
                    .find(|e| e.display_name.eq_ignore_ascii_case(name))
            })
            .map(|e| &e.onet_code)
            .ok_or_else(|| OccupationError::Unknown(name.to_string()))
    }

    /// Accepts a curated display name or any well-formed code.
    pub fn resolve_name_or_code(&self, raw: &str) -> Result<OnetCode, OccupationError> {
        match raw.trim().parse::<OnetCode>() {
            Ok(code) => Ok(code),
            Err(_) => self.resolve_occupation(raw).cloned(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_pattern() {
        assert!("15-1252.00".parse::<OnetCode>().is_ok());
        for bad in ["151252.00", "15-1252.0", "1a-1252.00", "15-1252-00", ""] {
            assert!(bad.parse::<OnetCode>().is_err(), "{bad}");
        }
    }

    #[test]
    fn resolve() {
        let list = OccupationList::parse(
            r#"[{"display_name":"Software Developer","onet_title":"Software Developers","onet_code":"15-1252.00"}]"#,
        )
        .unwrap();
        assert_eq!(list.resolve_occupation("Software Developer").unwrap().as_str(), "15-1252.00");
        assert_eq!(list.resolve_occupation("software developer").unwrap().as_str(), "15-1252.00");
        assert_eq!(
            list.resolve_occupation("Astronaut"),
            Err(OccupationError::Unknown("Astronaut".into()))
        );
        assert_eq!(list.resolve_name_or_code("29-1292.00").unwrap().as_str(), "29-1292.00");
    }

    #[test]
    fn rejects_duplicates_and_bad_codes() {
        let dup = r#"[{"display_name":"A","onet_title":"A","onet_code":"15-1252.00"},
                      {"display_name":"A","onet_title":"B","onet_code":"15-1253.00"}]"#;
        assert!(OccupationList::parse(dup).is_err());
        let bad = r#"[{"display_name":"A","onet_title":"A","onet_code":"15-125"}]"#;
        assert!(OccupationList::parse(bad).is_err());
    }
}
