use std::fmt;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("invalid config value: {0}")]
    Invalid(String),
}

/// A credential. Never printed.
#[derive(Clone, PartialEq, Eq)]
pub struct Secret(String);

impl Secret {
    pub fn new(value: impl Into<String>) -> Option<Self> {
        let value = value.into();
        (!value.trim().is_empty()).then_some(Secret(value))
    }

    pub fn expose(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Secret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Secret(<redacted>)")
    }
}

/// Provider credentials. Only ever read from the environment.
#[derive(Debug, Clone, Default)]
pub struct Credentials {
    pub openai_api_key: Option<Secret>,
    pub google_translate_api_key: Option<Secret>,
    pub careeronestop_api_token: Option<Secret>,
    pub careeronestop_user_id: Option<Secret>,
}

pub const ENV_OPENAI_API_KEY: &str = "OPENAI_API_KEY";
pub const ENV_GOOGLE_TRANSLATE_API_KEY: &str = "GOOGLE_TRANSLATE_API_KEY";
pub const ENV_CAREERONESTOP_API_TOKEN: &str = "CAREERONESTOP_API_TOKEN";
pub const ENV_CAREERONESTOP_USER_ID: &str = "CAREERONESTOP_USER_ID";

impl Credentials {
    pub fn from_env() -> Self {
        let var = |name: &str| std::env::var(name).ok().and_then(Secret::new);
        Credentials {
            openai_api_key: var(ENV_OPENAI_API_KEY),
            google_translate_api_key: var(ENV_GOOGLE_TRANSLATE_API_KEY),
            careeronestop_api_token: var(ENV_CAREERONESTOP_API_TOKEN),
            careeronestop_user_id: var(ENV_CAREERONESTOP_USER_ID),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContentPaths {
    pub corpus: PathBuf,
    pub phrases: PathBuf,
    pub faq: PathBuf,
    pub mindfulness: PathBuf,
    pub locator: PathBuf,
    pub messages: PathBuf,
    pub occupations: PathBuf,
    pub classifier_rules: PathBuf,
    pub interview_questions: PathBuf,
    /// Directory served under `/audio`; phrase audio refs resolve inside it.
    pub audio_dir: Option<PathBuf>,
    /// Built web client, served at `/` when set.
    pub static_dir: Option<PathBuf>,
}

impl ContentPaths {
    pub fn in_dir(dir: &Path) -> Self {
        ContentPaths {
            corpus: dir.join("corpus.jsonl"),
            phrases: dir.join("phrases.json"),
            faq: dir.join("faq.json"),
            mindfulness: dir.join("mindfulness.json"),
            locator: dir.join("locator.json"),
            messages: dir.join("messages.json"),
            occupations: dir.join("occupations.json"),
            classifier_rules: dir.join("classifier_rules.toml"),
            interview_questions: dir.join("interview_questions.json"),
            audio_dir: None,
            static_dir: None,
        }
    }
}

impl Default for ContentPaths {
    fn default() -> Self {
        ContentPaths::in_dir(Path::new("data"))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AssistantSettings {
    pub api_base: String,
    pub model_id: String,
    pub match_threshold: f64,
    pub timeout_secs: u64,
}

impl Default for AssistantSettings {
    fn default() -> Self {
        AssistantSettings {
            api_base: "https://api.openai.com/v1".into(),
            model_id: heyfriend_core::assistant::DEFAULT_MODEL_ID.into(),
            match_threshold: heyfriend_core::qa::DEFAULT_MATCH_THRESHOLD,
            timeout_secs: 30,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TranslationSettings {
    pub endpoint: String,
}

impl Default for TranslationSettings {
    fn default() -> Self {
        TranslationSettings {
            endpoint: heyfriend_core::translator::GoogleTranslateProvider::DEFAULT_ENDPOINT.into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CareerSettings {
    pub api_base: String,
    pub cache_ttl_secs: u64,
}

impl Default for CareerSettings {
    fn default() -> Self {
        CareerSettings {
            api_base: heyfriend_core::career::DEFAULT_CAREER_API_BASE.into(),
            cache_ttl_secs: heyfriend_core::career::DEFAULT_CACHE_TTL.as_secs(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResumeSettings {
    /// External render program. Unset means the builtin engine.
    pub engine: Option<PathBuf>,
    pub engine_args: Vec<String>,
    pub render_timeout_secs: u64,
    pub max_concurrent_renders: usize,
}

impl Default for ResumeSettings {
    fn default() -> Self {
        ResumeSettings {
            engine: None,
            engine_args: Vec::new(),
            render_timeout_secs: 60,
            max_concurrent_renders: 2,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MetricsSettings {
    pub event_log: PathBuf,
}

impl Default for MetricsSettings {
    fn default() -> Self {
        MetricsSettings {
            event_log: PathBuf::from("var/events.jsonl"),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LocatorSettings {
    pub embed_url: String,
}

impl Default for LocatorSettings {
    fn default() -> Self {
        LocatorSettings {
            embed_url: heyfriend_core::content::DEFAULT_MAP_EMBED_URL.into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ServiceConfig {
    pub listen: SocketAddr,
    /// Replay recorded provider responses from this directory instead of
    /// calling the network.
    pub offline_fixtures: Option<PathBuf>,
    pub content: ContentPaths,
    pub assistant: AssistantSettings,
    pub translation: TranslationSettings,
    pub career: CareerSettings,
    pub resume: ResumeSettings,
    pub metrics: MetricsSettings,
    pub locator: LocatorSettings,
    #[serde(skip)]
    pub credentials: Credentials,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            offline_fixtures: None,
            content: ContentPaths::default(),
            assistant: AssistantSettings::default(),
            translation: TranslationSettings::default(),
            career: CareerSettings::default(),
            resume: ResumeSettings::default(),
            metrics: MetricsSettings::default(),
            locator: LocatorSettings::default(),
            credentials: Credentials::default(),
        }
    }
}

impl ServiceConfig {
    /// Reads a TOML file. Relative paths inside it resolve against the
    /// file's own directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut config: ServiceConfig = toml::from_str(&raw).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.rebase(base);
        config.validate()?;
        Ok(config)
    }

    /// Defaults with every content file under `data_dir`.
    pub fn for_data_dir(data_dir: impl AsRef<Path>) -> Self {
        ServiceConfig {
            content: ContentPaths::in_dir(data_dir.as_ref()),
            ..ServiceConfig::default()
        }
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        let c = &mut self.content;
        for p in [
            &mut c.corpus,
            &mut c.phrases,
            &mut c.faq,
            &mut c.mindfulness,
            &mut c.locator,
            &mut c.messages,
            &mut c.occupations,
            &mut c.classifier_rules,
            &mut c.interview_questions,
            &mut self.metrics.event_log,
        ] {
            fix(p);
        }
        for p in [
            c.audio_dir.as_mut(),
            c.static_dir.as_mut(),
            self.offline_fixtures.as_mut(),
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
        // Bare program names are looked up on PATH, so only rebase paths.
        if let Some(engine) = self.resume.engine.as_mut() {
            if engine.components().count() > 1 {
                fix(engine);
            }
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.assistant.match_threshold) {
            return Err(ConfigError::Invalid(format!(
                "assistant.match_threshold must be within [0, 1], got {}",
                self.assistant.match_threshold
            )));
        }
        if self.resume.max_concurrent_renders == 0 {
            return Err(ConfigError::Invalid("resume.max_concurrent_renders must be at least 1".into()));
        }
        for (name, secs) in [
            ("assistant.timeout_secs", self.assistant.timeout_secs),
            ("resume.render_timeout_secs", self.resume.render_timeout_secs),
        ] {
            if secs == 0 {
                return Err(ConfigError::Invalid(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn provider_timeout(&self) -> Duration {
        Duration::from_secs(self.assistant.timeout_secs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths_follow_the_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("conf.toml");
        std::fs::write(
            &path,
            "listen = \"0.0.0.0:9000\"\n[content]\ncorpus = \"d/corpus.jsonl\"\n[resume]\nengine = \"rendercv\"\n",
        )
        .unwrap();
        let c = ServiceConfig::load(&path).unwrap();
        assert_eq!(c.listen.port(), 9000);
        assert_eq!(c.content.corpus, dir.path().join("d/corpus.jsonl"));
        assert_eq!(c.content.faq, dir.path().join("data/faq.json"));
        assert_eq!(c.resume.engine, Some(PathBuf::from("rendercv")));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("conf.toml");
        std::fs::write(&path, "api_key = \"x\"\n").unwrap();
        assert!(matches!(ServiceConfig::load(&path), Err(ConfigError::Parse { .. })));
        std::fs::write(&path, "[assistant]\nmatch_threshold = 1.5\n").unwrap();
        assert!(matches!(ServiceConfig::load(&path), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn secrets_do_not_print() {
        let s = Secret::new("sk-live-123").unwrap();
        assert!(!format!("{s:?}").contains("sk-live"));
        assert!(Secret::new("  ").is_none());
    }
}
