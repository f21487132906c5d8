//! Categorized phrase bank with per-language audio, and free-text
//! translation into English.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};

use crate::lang::{fmt_langs, Language, Localized, RawLocalized};

/// Phrase categories offered in the translator, in display order.
pub const PHRASE_CATEGORIES: [&str; 11] = [
    "Common Words",
    "Words for Healthy and Unhealthy Relationships",
    "Words for Job Search",
    "Words for Emotional Well-Being",
    "Words for a Different Kind of Feeling",
    "Greetings",
    "Introductions",
    "General Questions and Responses",
    "Feeling and Emotional Well-Being",
    "Health and Well-Being",
    "School and Family",
];

pub const MAX_TRANSLATION_CHARS: usize = 2000;

#[derive(Debug, thiserror::Error)]
pub enum PhraseBankError {
    #[error("failed to read phrase bank {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("phrase bank is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("phrase bank category list does not match the fixed categories")]
    CategoryList,
    #[error("phrase {id:?}: unknown category {category:?}")]
    UnknownCategory { id: String, category: String },
    #[error("phrase {id:?}: missing text for {langs}")]
    MissingText { id: String, langs: String },
    #[error("phrase {id:?}: missing audio reference for {langs}")]
    MissingAudio { id: String, langs: String },
    #[error("duplicate phrase id {0:?}")]
    DuplicateId(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LookupError {
    #[error("unknown phrase category {0:?}")]
    UnknownCategory(String),
    #[error(transparent)]
    Language(#[from] crate::lang::UnsupportedLanguage),
}

#[derive(Debug, Clone, Serialize)]
pub struct PhraseEntry {
    pub phrase_id: String,
    pub category: String,
    pub text: Localized,
    pub audio: Localized,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhraseItem {
    pub phrase_id: String,
    pub text: String,
    pub audio: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBank {
    categories: Vec<String>,
    entries: Vec<RawEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    id: String,
    category: String,
    text: RawLocalized,
    audio: RawLocalized,
}

#[derive(Debug, Clone)]
pub struct PhraseBank {
    entries: Vec<PhraseEntry>,
    categories: Vec<String>,
}

impl PhraseBank {
    pub fn entries(&self) -> &[PhraseEntry] {
        &self.entries
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn get_phrases(&self, category: &str, lang: &str) -> Result<Vec<PhraseItem>, LookupError> {
        if !self.categories.iter().any(|c| c == category) {
            return Err(LookupError::UnknownCategory(category.to_string()));
        }
        let lang: Language = lang.parse()?;
        Ok(self
            .entries
            .iter()
            .filter(|e| e.category == category)
            .map(|e| PhraseItem {
                phrase_id: e.phrase_id.clone(),
                text: e.text.get(lang).to_string(),
                audio: e.audio.get(lang).to_string(),
            })
            .collect())
    }
}

pub fn load_phrase_bank(path: impl AsRef<Path>) -> Result<PhraseBank, PhraseBankError> {
    let path = path.as_ref();
    let raw = std::fs::read_to_string(path).map_err(|source| PhraseBankError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_phrase_bank(&raw)
}

pub fn parse_phrase_bank(raw: &str) -> Result<PhraseBank, PhraseBankError> {
    let bank: RawBank = serde_json::from_str(raw)?;
    if bank.categories.iter().map(String::as_str).ne(PHRASE_CATEGORIES) {
        return Err(PhraseBankError::CategoryList);
    }

    let mut seen = HashSet::new();
    let mut entries = Vec::with_capacity(bank.entries.len());
    for e in bank.entries {
        if !PHRASE_CATEGORIES.contains(&e.category.as_str()) {
            return Err(PhraseBankError::UnknownCategory {
                id: e.id,
                category: e.category,
            });
        }
        let text = Localized::from_raw(&e.text).map_err(|langs| PhraseBankError::MissingText {
            id: e.id.clone(),
            langs: fmt_langs(&langs),
        })?;
        let audio =
            Localized::from_raw(&e.audio).map_err(|langs| PhraseBankError::MissingAudio {
                id: e.id.clone(),
                langs: fmt_langs(&langs),
            })?;
        if !seen.insert(e.id.clone()) {
            return Err(PhraseBankError::DuplicateId(e.id));
        }
        entries.push(PhraseEntry {
            phrase_id: e.id,
            category: e.category,
            text,
            audio,
        });
    }

    Ok(PhraseBank {
        entries,
        categories: bank.categories,
    })
}

/// Source languages accepted for free-text translation. English is the
/// fixed target, so it is never a source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceLanguage {
    Es,
    Fr,
    Ar,
}

impl SourceLanguage {
    pub fn code(self) -> &'static str {
        match self {
            SourceLanguage::Es => "es",
            SourceLanguage::Fr => "fr",
            SourceLanguage::Ar => "ar",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslationError {
    #[error("source language {0:?} is not one of es, fr, ar")]
    UnsupportedSource(String),
    #[error("text to translate is empty")]
    EmptyText,
    #[error("text is {0} characters; the limit is {MAX_TRANSLATION_CHARS}")]
    TooLong(usize),
    #[error("translation unavailable: {0}")]
    Unavailable(String),
}

impl TranslationError {
    pub fn is_validation(&self) -> bool {
        !matches!(self, TranslationError::Unavailable(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationRequest {
    source: SourceLanguage,
    text: String,
}

impl TranslationRequest {
    pub fn new(source: &str, text: impl Into<String>) -> Result<Self, TranslationError> {
        let source = match source {
            "es" => SourceLanguage::Es,
            "fr" => SourceLanguage::Fr,
            "ar" => SourceLanguage::Ar,
            other => return Err(TranslationError::UnsupportedSource(other.to_string())),
        };
        let text = text.into();
        if text.trim().is_empty() {
            return Err(TranslationError::EmptyText);
        }
        let chars = text.chars().count();
        if chars > MAX_TRANSLATION_CHARS {
            return Err(TranslationError::TooLong(chars));
        }
        Ok(TranslationRequest { source, text })
    }

    pub fn source(&self) -> SourceLanguage {
        self.source
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

#[async_trait]
pub trait TranslationProvider: Send + Sync {
    fn name(&self) -> &str;

    fn is_configured(&self) -> bool {
        true
    }

    /// Translates into English. Errors are reported as plain messages and
    /// surface to callers as [`TranslationError::Unavailable`].
    async fn translate(&self, source: SourceLanguage, text: &str) -> Result<String, String>;
}

/// Validates and forwards a request; validation failures never reach the provider.
pub async fn translate_to_english(
    provider: &dyn TranslationProvider,
    request: &TranslationRequest,
) -> Result<String, TranslationError> {
    let out = provider
        .translate(request.source, &request.text)
        .await
        .map_err(TranslationError::Unavailable)?;
    if out.trim().is_empty() {
        return Err(TranslationError::Unavailable("provider returned empty text".into()));
    }
    Ok(out)
}

/// Google Cloud Translation v2 (`/language/translate/v2`) client.
pub struct GoogleTranslateProvider {
    client: reqwest::Client,
    endpoint: String,
    api_key: Option<String>,
}

impl GoogleTranslateProvider {
    pub const DEFAULT_ENDPOINT: &'static str =
        "https://translation.googleapis.com/language/translate/v2";

    pub fn new(endpoint: impl Into<String>, api_key: Option<String>) -> Self {
        GoogleTranslateProvider {
            client: reqwest::Client::new(),
            endpoint: endpoint.into(),
            api_key: api_key.filter(|k| !k.trim().is_empty()),
        }
    }
}

impl std::fmt::Debug for GoogleTranslateProvider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GoogleTranslateProvider")
            .field("endpoint", &self.endpoint)
            .field("configured", &self.api_key.is_some())
            .finish()
    }
}

#[derive(Deserialize)]
struct GoogleResponse {
    data: GoogleData,
}

#[derive(Deserialize)]
struct GoogleData {
    translations: Vec<GoogleTranslation>,
}

#[derive(Deserialize)]
struct GoogleTranslation {
    #[serde(rename = "translatedText")]
    translated_text: String,
}

#[async_trait]
impl TranslationProvider for GoogleTranslateProvider {
    fn name(&self) -> &str {
        "google-translate"
    }

    fn is_configured(&self) -> bool {
        self.api_key.is_some()
    }

    async fn translate(&self, source: SourceLanguage, text: &str) -> Result<String, String> {
        let key = self.api_key.as_deref().ok_or("translation API key is not set")?;
        let body = serde_json::json!({
            "q": text,
            "source": source.code(),
            "target": "en",
            "format": "text",
        });
        let response = self
            .client
            .post(&self.endpoint)
            .query(&[("key", key)])
            .json(&body)
            .send()
            .await
            .map_err(|e| e.without_url().to_string())?;
        if !response.status().is_success() {
            return Err(format!("upstream status {}", response.status().as_u16()));
        }
        let parsed: GoogleResponse = response.json().await.map_err(|e| e.without_url().to_string())?;
        parsed
            .data
            .translations
            .into_iter()
            .next()
            .map(|t| t.translated_text)
            .ok_or_else(|| "no translation in reply".to_string())
    }
}

#[derive(Debug, Deserialize)]
struct FixtureRecord {
    source: SourceLanguage,
    text: String,
    translation: String,
}

/// Replays recorded provider responses keyed by (source, text).
#[derive(Debug, Clone, Default)]
pub struct FixtureTranslator {
    table: Arc<HashMap<(SourceLanguage, String), String>>,
    calls: Arc<AtomicUsize>,
}

impl FixtureTranslator {
    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (SourceLanguage, S, S)>,
        S: Into<String>,
    {
        let table = pairs
            .into_iter()
            .map(|(l, t, out)| ((l, t.into()), out.into()))
            .collect();
        FixtureTranslator {
            table: Arc::new(table),
            calls: Arc::new(AtomicUsize::new(0)),
        }
    }

    /// Loads a JSON array of `{source, text, translation}` records.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, String> {
        let raw = std::fs::read_to_string(path.as_ref())
            .map_err(|e| format!("{}: {e}", path.as_ref().display()))?;
        let records: Vec<FixtureRecord> = serde_json::from_str(&raw).map_err(|e| e.to_string())?;
        Ok(Self::from_pairs(
            records.into_iter().map(|r| (r.source, r.text, r.translation)),
        ))
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    pub fn recorded(&self) -> BTreeMap<(SourceLanguage, String), String> {
        self.table.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }
}

#[async_trait]
impl TranslationProvider for FixtureTranslator {
    fn name(&self) -> &str {
        "fixture"
    }

    async fn translate(&self, source: SourceLanguage, text: &str) -> Result<String, String> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.table
            .get(&(source, text.trim().to_string()))
            .cloned()
            .ok_or_else(|| format!("no recorded translation for {}:{text:?}", source.code()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(id: &str, category: &str, langs: &[&str]) -> serde_json::Value {
        let text: serde_json::Map<_, _> = langs
            .iter()
            .map(|l| (l.to_string(), serde_json::Value::from(format!("{id}-{l}"))))
            .collect();
        let audio: serde_json::Map<_, _> = ["en", "es", "fr", "ar"]
            .iter()
            .map(|l| (l.to_string(), serde_json::Value::from(format!("audio/{l}/{id}.mp3"))))
            .collect();
        serde_json::json!({"id": id, "category": category, "text": text, "audio": audio})
    }

    fn bank_json(entries: Vec<serde_json::Value>) -> String {
        serde_json::json!({"categories": PHRASE_CATEGORIES, "entries": entries}).to_string()
    }

    const ALL: &[&str] = &["en", "es", "fr", "ar"];

    #[test]
    fn lookup_by_category_and_language() {
        let bank = parse_phrase_bank(&bank_json(vec![
            entry("greet-hello", "Greetings", ALL),
            entry("job-resume", "Words for Job Search", ALL),
            entry("greet-bye", "Greetings", ALL),
        ]))
        .unwrap();
        let fr = bank.get_phrases("Greetings", "fr").unwrap();
        assert_eq!(
            fr,
            vec![
                PhraseItem {
                    phrase_id: "greet-hello".into(),
                    text: "greet-hello-fr".into(),
                    audio: "audio/fr/greet-hello.mp3".into()
                },
                PhraseItem {
                    phrase_id: "greet-bye".into(),
                    text: "greet-bye-fr".into(),
                    audio: "audio/fr/greet-bye.mp3".into()
                },
            ]
        );
        assert_eq!(bank.get_phrases("Words for Job Search", "en").unwrap().len(), 1);
        assert!(matches!(
            bank.get_phrases("Greetings", "de"),
            Err(LookupError::Language(_))
        ));
        assert!(matches!(
            bank.get_phrases("Weather", "en"),
            Err(LookupError::UnknownCategory(_))
        ));
    }

    #[test]
    fn missing_variant_names_entry() {
        let err = parse_phrase_bank(&bank_json(vec![entry(
            "greet-hello",
            "Greetings",
            &["en", "es", "fr"],
        )]))
        .unwrap_err();
        match err {
            PhraseBankError::MissingText { id, langs } => {
                assert_eq!(id, "greet-hello");
                assert_eq!(langs, "ar");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_audio_names_entry() {
        let mut e = entry("greet-hello", "Greetings", ALL);
        e["audio"].as_object_mut().unwrap().remove("es");
        assert!(matches!(
            parse_phrase_bank(&bank_json(vec![e])),
            Err(PhraseBankError::MissingAudio { .. })
        ));
    }

    #[test]
    fn unknown_category_is_rejected() {
        assert!(matches!(
            parse_phrase_bank(&bank_json(vec![entry("w-rain", "Weather", ALL)])),
            Err(PhraseBankError::UnknownCategory { .. })
        ));
    }

    #[test]
    fn category_list_must_match() {
        let raw = serde_json::json!({"categories": ["Greetings"], "entries": []}).to_string();
        assert!(matches!(parse_phrase_bank(&raw), Err(PhraseBankError::CategoryList)));
    }

    #[test]
    fn request_validation() {
        assert!(TranslationRequest::new("es", "hola").is_ok());
        assert_eq!(
            TranslationRequest::new("es", ""),
            Err(TranslationError::EmptyText)
        );
        assert_eq!(
            TranslationRequest::new("en", "hello"),
            Err(TranslationError::UnsupportedSource("en".into()))
        );
        let max = "é".repeat(MAX_TRANSLATION_CHARS);
        assert!(TranslationRequest::new("fr", max.clone()).is_ok());
        assert_eq!(
            TranslationRequest::new("fr", format!("{max}a")),
            Err(TranslationError::TooLong(2001))
        );
    }

    #[tokio::test]
    async fn fixture_translation_is_deterministic() {
        let t = FixtureTranslator::from_pairs([(SourceLanguage::Es, "hola", "hello")]);
        let req = TranslationRequest::new("es", "hola").unwrap();
        assert_eq!(translate_to_english(&t, &req).await.unwrap(), "hello");
        assert_eq!(translate_to_english(&t, &req).await.unwrap(), "hello");
        let unknown = TranslationRequest::new("fr", "bonsoir").unwrap();
        let err = translate_to_english(&t, &unknown).await.unwrap_err();
        assert!(!err.is_validation());
    }
}
