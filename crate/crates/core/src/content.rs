//! Multilingual FAQ, mindfulness content, locator map queries, and the
//! shared message catalog.
//!
//! Every entry comes from a content file; the only things fixed in code are
//! the category and section names the files are validated against.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use url::Url;

use crate::lang::{fmt_langs, Language, Localized, RawLocalized, UnsupportedLanguage};

pub const FAQ_CATEGORIES: [&str; 6] = [
    "Finding and Getting a Job",
    "Relationships",
    "Well-being",
    "Getting Adjusted to a New Place",
    "Community Resources",
    "FitBit",
];

pub const MINDFULNESS_SECTIONS: [&str; 5] = [
    "Meditation/Breathing Invitations and Exercises",
    "Wellness",
    "Breathing and Meditation",
    "Connecting with Nature",
    "Education",
];

pub const LOCATOR_CATEGORIES: [&str; 4] = [
    "affordable grocery stores",
    "culturally specific grocery stores",
    "farmers markets",
    "food pantries",
];

pub const DEFAULT_MAP_EMBED_URL: &str = "https://maps.google.com/maps?output=embed";

#[derive(Debug, thiserror::Error)]
pub enum ContentError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{file}: category or section list does not match the fixed list")]
    HeadingList { file: &'static str },
    #[error("{id:?}: unknown category {category:?}")]
    UnknownCategory { id: String, category: String },
    #[error("{id:?}: {field} is missing {langs}")]
    MissingVariant {
        id: String,
        field: &'static str,
        langs: String,
    },
    #[error("{id:?}: invalid video URL {url:?}")]
    InvalidUrl { id: String, url: String },
    #[error("{id:?}: {kind} item is missing its {field}")]
    KindMismatch {
        id: String,
        kind: &'static str,
        field: &'static str,
    },
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("locator categories must be exactly the four fixed categories")]
    LocatorCategories,
    #[error("map embed URL {0:?} is not a valid http(s) URL")]
    EmbedUrl(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContentLookupError {
    #[error("unknown category {0:?}")]
    UnknownCategory(String),
    #[error("unknown section {0:?}")]
    UnknownSection(String),
    #[error("unknown locator category {0:?}")]
    UnknownLocatorCategory(String),
    #[error(transparent)]
    Language(#[from] UnsupportedLanguage),
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, ContentError> {
    let raw = std::fs::read_to_string(path).map_err(|source| ContentError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&raw).map_err(|source| ContentError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn localized(id: &str, field: &'static str, raw: &RawLocalized) -> Result<Localized, ContentError> {
    Localized::from_raw(raw).map_err(|langs| ContentError::MissingVariant {
        id: id.to_string(),
        field,
        langs: fmt_langs(&langs),
    })
}

// ---- FAQ ---------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Human,
    Machine,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaqEntry {
    pub entry_id: String,
    pub category: String,
    pub question: Localized,
    pub answer: Localized,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaqItem {
    pub entry_id: String,
    pub question: String,
    pub answer: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFaq {
    categories: Vec<String>,
    entries: Vec<RawFaqEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFaqEntry {
    id: String,
    category: String,
    provenance: Provenance,
    question: RawLocalized,
    answer: RawLocalized,
}

#[derive(Debug, Clone)]
pub struct FaqCatalog {
    entries: Vec<FaqEntry>,
}

impl FaqCatalog {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ContentError> {
        Self::from_raw(read_json(path.as_ref())?)
    }

    pub fn parse(raw: &str) -> Result<Self, ContentError> {
        let parsed = serde_json::from_str(raw).map_err(|source| ContentError::Parse {
            path: PathBuf::from("<inline>"),
            source,
        })?;
        Self::from_raw(parsed)
    }

    fn from_raw(raw: RawFaq) -> Result<Self, ContentError> {
        if raw.categories.iter().map(String::as_str).ne(FAQ_CATEGORIES) {
            return Err(ContentError::HeadingList { file: "faq" });
        }
        let mut seen = HashSet::new();
        let mut entries = Vec::with_capacity(raw.entries.len());
        for e in raw.entries {
            if !FAQ_CATEGORIES.contains(&e.category.as_str()) {
                return Err(ContentError::UnknownCategory {
                    id: e.id,
                    category: e.category,
                });
            }
            if !seen.insert(e.id.clone()) {
                return Err(ContentError::DuplicateId(e.id));
            }
            entries.push(FaqEntry {
                question: localized(&e.id, "question", &e.question)?,
                answer: localized(&e.id, "answer", &e.answer)?,
                entry_id: e.id,
                category: e.category,
                provenance: e.provenance,
            });
        }
        Ok(FaqCatalog { entries })
    }

    pub fn entries(&self) -> &[FaqEntry] {
        &self.entries
    }

    pub fn list_faq(&self, category: &str, lang: &str) -> Result<Vec<FaqItem>, ContentLookupError> {
        if !FAQ_CATEGORIES.contains(&category) {
            return Err(ContentLookupError::UnknownCategory(category.to_string()));
        }
        let lang: Language = lang.parse()?;
        Ok(self
            .entries
            .iter()
            .filter(|e| e.category == category)
            .map(|e| FaqItem {
                entry_id: e.entry_id.clone(),
                question: e.question.get(lang).to_string(),
                answer: e.answer.get(lang).to_string(),
            })
            .collect())
    }
}

// ---- Mindfulness -------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MindfulnessKind {
    WrittenInvitation,
    EmbeddedVideo,
}

#[derive(Debug, Clone, Serialize)]
pub enum MindfulnessBody {
    Invitation(Localized),
    Video(Url),
}

#[derive(Debug, Clone, Serialize)]
pub struct MindfulnessItem {
    pub id: String,
    pub section: String,
    pub title: Localized,
    pub body: MindfulnessBody,
}

impl MindfulnessItem {
    pub fn kind(&self) -> MindfulnessKind {
        match self.body {
            MindfulnessBody::Invitation(_) => MindfulnessKind::WrittenInvitation,
            MindfulnessBody::Video(_) => MindfulnessKind::EmbeddedVideo,
        }
    }
}

/// One item rendered for a language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MindfulnessView {
    pub id: String,
    pub kind: MindfulnessKind,
    pub title: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub body: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub video_url: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMindfulness {
    sections: Vec<String>,
    items: Vec<RawMindfulnessItem>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMindfulnessItem {
    id: String,
    section: String,
    kind: MindfulnessKind,
    title: RawLocalized,
    #[serde(default)]
    body: Option<RawLocalized>,
    #[serde(default)]
    video_url: Option<String>,
}

#[derive(Debug, Clone)]
pub struct MindfulnessLibrary {
    items: Vec<MindfulnessItem>,
}

impl MindfulnessLibrary {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ContentError> {
        Self::from_raw(read_json(path.as_ref())?)
    }

    pub fn parse(raw: &str) -> Result<Self, ContentError> {
        let parsed = serde_json::from_str(raw).map_err(|source| ContentError::Parse {
            path: PathBuf::from("<inline>"),
            source,
        })?;
        Self::from_raw(parsed)
    }

    fn from_raw(raw: RawMindfulness) -> Result<Self, ContentError> {
        if raw.sections.iter().map(String::as_str).ne(MINDFULNESS_SECTIONS) {
            return Err(ContentError::HeadingList { file: "mindfulness" });
        }
        let mut seen = HashSet::new();
        let mut items = Vec::with_capacity(raw.items.len());
        for it in raw.items {
            if !MINDFULNESS_SECTIONS.contains(&it.section.as_str()) {
                return Err(ContentError::UnknownCategory {
                    id: it.id,
                    category: it.section,
                });
            }
            if !seen.insert(it.id.clone()) {
                return Err(ContentError::DuplicateId(it.id));
            }
            let title = localized(&it.id, "title", &it.title)?;
            let body = match it.kind {
                MindfulnessKind::WrittenInvitation => {
                    let raw_body = it.body.as_ref().ok_or_else(|| ContentError::KindMismatch {
                        id: it.id.clone(),
                        kind: "written-invitation",
                        field: "body",
                    })?;
                    MindfulnessBody::Invitation(localized(&it.id, "body", raw_body)?)
                }
                MindfulnessKind::EmbeddedVideo => {
                    let raw_url = it.video_url.as_deref().ok_or_else(|| ContentError::KindMismatch {
                        id: it.id.clone(),
                        kind: "embedded-video",
                        field: "video_url",
                    })?;
                    MindfulnessBody::Video(parse_http_url(raw_url).ok_or_else(|| {
                        ContentError::InvalidUrl {
                            id: it.id.clone(),
                            url: raw_url.to_string(),
                        }
                    })?)
                }
            };
            items.push(MindfulnessItem {
                id: it.id,
                section: it.section,
                title,
                body,
            });
        }
        Ok(MindfulnessLibrary { items })
    }

    pub fn items(&self) -> &[MindfulnessItem] {
        &self.items
    }

    pub fn list_mindfulness(
        &self,
        section: &str,
        lang: &str,
    ) -> Result<Vec<MindfulnessView>, ContentLookupError> {
        if !MINDFULNESS_SECTIONS.contains(&section) {
            return Err(ContentLookupError::UnknownSection(section.to_string()));
        }
        let lang: Language = lang.parse()?;
        Ok(self
            .items
            .iter()
            .filter(|i| i.section == section)
            .map(|i| MindfulnessView {
                id: i.id.clone(),
                kind: i.kind(),
                title: i.title.get(lang).to_string(),
                body: match &i.body {
                    MindfulnessBody::Invitation(b) => Some(b.get(lang).to_string()),
                    MindfulnessBody::Video(_) => None,
                },
                video_url: match &i.body {
                    MindfulnessBody::Video(u) => Some(u.to_string()),
                    MindfulnessBody::Invitation(_) => None,
                },
            })
            .collect())
    }
}

fn parse_http_url(raw: &str) -> Option<Url> {
    Url::parse(raw)
        .ok()
        .filter(|u| matches!(u.scheme(), "http" | "https") && u.host().is_some())
}

// ---- Locator -----------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocatorCategory {
    pub id: String,
    pub name: String,
    pub search_phrase: String,
}

#[derive(Debug, Clone)]
pub struct Locator {
    embed_base: Url,
    categories: Vec<LocatorCategory>,
}

impl Locator {
    pub fn load(path: impl AsRef<Path>, embed_base: &str) -> Result<Self, ContentError> {
        Self::new(read_json(path.as_ref())?, embed_base)
    }

    pub fn new(categories: Vec<LocatorCategory>, embed_base: &str) -> Result<Self, ContentError> {
        let embed_base =
            parse_http_url(embed_base).ok_or_else(|| ContentError::EmbedUrl(embed_base.to_string()))?;
        let mut names: Vec<&str> = categories.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        let mut expected = LOCATOR_CATEGORIES;
        expected.sort_unstable();
        if names != expected || categories.iter().any(|c| c.search_phrase.trim().is_empty()) {
            return Err(ContentError::LocatorCategories);
        }
        Ok(Locator {
            embed_base,
            categories,
        })
    }

    pub fn categories(&self) -> &[LocatorCategory] {
        &self.categories
    }

    /// Builds the map-embed URL searching for "<search phrase> near me".
    ///
    /// `category` may be the category id or its display name. Location is
    /// left to the map provider; no coordinates pass through the backend.
    pub fn locator_query(&self, category: &str) -> Result<Url, ContentLookupError> {
        let cat = self
            .categories
            .iter()
            .find(|c| c.id == category || c.name == category)
            .ok_or_else(|| ContentLookupError::UnknownLocatorCategory(category.to_string()))?;
        let mut url = self.embed_base.clone();
        let kept: Vec<(String, String)> = url
            .query_pairs()
            .filter(|(k, _)| k != "q")
            .map(|(k, v)| (k.into_owned(), v.into_owned()))
            .collect();
        url.query_pairs_mut()
            .clear()
            .extend_pairs(kept)
            .append_pair("q", &format!("{} near me", cat.search_phrase));
        Ok(url)
    }
}

// ---- Message catalog ---------------------------------------------------

/// Keyed UI and error strings in all four languages.
#[derive(Debug, Clone)]
pub struct MessageCatalog {
    messages: BTreeMap<String, Localized>,
}

impl MessageCatalog {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ContentError> {
        let raw: BTreeMap<String, RawLocalized> = read_json(path.as_ref())?;
        let messages = raw
            .iter()
            .map(|(k, v)| Ok((k.clone(), localized(k, "message", v)?)))
            .collect::<Result<_, ContentError>>()?;
        Ok(MessageCatalog { messages })
    }

    pub fn get(&self, key: &str) -> Option<&Localized> {
        self.messages.get(key)
    }

    pub fn text(&self, key: &str, lang: Language) -> Option<&str> {
        self.messages.get(key).map(|m| m.get(lang))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.messages.keys().map(String::as_str)
    }
}
