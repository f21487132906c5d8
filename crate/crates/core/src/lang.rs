//! Supported content languages and four-way localized values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One of the four languages every piece of user-facing content ships in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    En,
    Es,
    Fr,
    Ar,
}

impl Language {
    pub const ALL: [Language; 4] = [Language::En, Language::Es, Language::Fr, Language::Ar];

    pub fn code(self) -> &'static str {
        match self {
            Language::En => "en",
            Language::Es => "es",
            Language::Fr => "fr",
            Language::Ar => "ar",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unsupported language code {0:?}")]
pub struct UnsupportedLanguage(pub String);

impl FromStr for Language {
    type Err = UnsupportedLanguage;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "en" => Ok(Language::En),
            "es" => Ok(Language::Es),
            "fr" => Ok(Language::Fr),
            "ar" => Ok(Language::Ar),
            other => Err(UnsupportedLanguage(other.to_string())),
        }
    }
}

/// A value present in all four languages.
///
/// Deserializes from a map keyed by language code and rejects maps that are
/// missing a language or carry an empty string, so a loaded file can never
/// leak an untranslated gap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Localized {
    pub en: String,
    pub es: String,
    pub fr: String,
    pub ar: String,
}

impl Localized {
    pub fn get(&self, lang: Language) -> &str {
        match lang {
            Language::En => &self.en,
            Language::Es => &self.es,
            Language::Fr => &self.fr,
            Language::Ar => &self.ar,
        }
    }

    /// Languages whose variant is missing or blank in a raw map.
    pub fn missing_in(raw: &RawLocalized) -> Vec<Language> {
        Language::ALL
            .into_iter()
            .filter(|l| raw.get(l.code()).is_none_or(|v| v.trim().is_empty()))
            .collect()
    }

    pub fn from_raw(raw: &RawLocalized) -> Result<Self, Vec<Language>> {
        let missing = Self::missing_in(raw);
        if !missing.is_empty() {
            return Err(missing);
        }
        Ok(Localized {
            en: raw["en"].clone(),
            es: raw["es"].clone(),
            fr: raw["fr"].clone(),
            ar: raw["ar"].clone(),
        })
    }
}

/// Untyped language map as authored in content files.
pub type RawLocalized = std::collections::BTreeMap<String, String>;

pub(crate) fn fmt_langs(langs: &[Language]) -> String {
    langs.iter().map(|l| l.code()).collect::<Vec<_>>().join(", ")
}
