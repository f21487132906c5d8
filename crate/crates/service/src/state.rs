use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use heyfriend_core::assistant::{
    Assistant, AssistantConfig, ChatProvider, MockChatProvider, OpenAiChatProvider, ProviderError, Purpose,
};
use heyfriend_core::career::{CareerCache, CareerClient, CareerOneStopClient, FixtureClient, OccupationList};
use heyfriend_core::content::{FaqCatalog, Locator, MessageCatalog, MindfulnessLibrary};
use heyfriend_core::metrics::{Classifier, EventStore, FileEventLog};
use heyfriend_core::qa::{load_corpus, Threshold};
use heyfriend_core::resume::{BuiltinEngine, InterviewCoach, ProcessEngine, QuestionBank, RenderEngine, ResumeBuilder};
use heyfriend_core::translator::{
    load_phrase_bank, FixtureTranslator, GoogleTranslateProvider, PhraseBank, TranslationProvider,
};
use heyfriend_core::Localized;
use serde::Serialize;

use crate::config::ServiceConfig;

#[derive(Debug, thiserror::Error)]
#[error("cannot start: {what}: {reason}")]
pub struct StartupError {
    pub what: String,
    pub reason: String,
}

fn startup(what: impl std::fmt::Display, reason: impl std::fmt::Display) -> StartupError {
    StartupError {
        what: what.to_string(),
        reason: reason.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Live,
    OfflineFixtures,
}

/// Everything the handlers share. Content is immutable after startup.
pub struct AppState {
    pub mode: Mode,
    pub messages: MessageCatalog,
    pub assistant: Assistant,
    pub chat_provider: Arc<dyn ChatProvider>,
    pub model_id: String,
    pub provider_timeout: Duration,
    pub phrases: PhraseBank,
    pub translator: Arc<dyn TranslationProvider>,
    pub faq: FaqCatalog,
    pub mindfulness: MindfulnessLibrary,
    pub locator: Locator,
    pub occupations: OccupationList,
    pub career_client: Arc<dyn CareerClient>,
    pub career_cache: CareerCache,
    pub resume: ResumeBuilder,
    pub interview: InterviewCoach,
    pub classifier: Classifier,
    pub events: Arc<dyn EventStore>,
    pub audio_dir: Option<PathBuf>,
    pub static_dir: Option<PathBuf>,
}

type Providers = (
    Mode,
    Arc<dyn ChatProvider>,
    Arc<dyn TranslationProvider>,
    Arc<dyn CareerClient>,
);

/// Canned provider replies keyed by purpose, for offline mode.
fn offline_chat(dir: &Path) -> Result<MockChatProvider, StartupError> {
    let path = dir.join("chat_replies.json");
    let raw = std::fs::read_to_string(&path).map_err(|e| startup(path.display(), e))?;
    let replies: HashMap<String, String> = serde_json::from_str(&raw).map_err(|e| startup(path.display(), e))?;
    for purpose in [Purpose::Chat, Purpose::ResumeReview, Purpose::InterviewFeedback, Purpose::InterviewSummary] {
        let key = purpose_key(purpose);
        if !replies.contains_key(&key) {
            return Err(startup(path.display(), format!("no reply for {key:?}")));
        }
    }
    Ok(MockChatProvider::from_fn(move |req| {
        replies
            .get(&purpose_key(req.purpose))
            .cloned()
            .ok_or(ProviderError::EmptyReply)
    }))
}

fn purpose_key(p: Purpose) -> String {
    serde_json::to_value(p)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

impl AppState {
    /// Loads every content file and wires providers. Missing or invalid
    /// content is fatal; missing credentials only degrade features.
    pub async fn build(config: &ServiceConfig) -> Result<Arc<Self>, StartupError> {
        let c = &config.content;
        let messages = MessageCatalog::load(&c.messages).map_err(|e| startup("messages", e))?;
        let corpus = Arc::new(load_corpus(&c.corpus).map_err(|e| startup("corpus", e))?);
        let phrases = load_phrase_bank(&c.phrases).map_err(|e| startup("phrase bank", e))?;
        let faq = FaqCatalog::load(&c.faq).map_err(|e| startup("faq", e))?;
        let mindfulness = MindfulnessLibrary::load(&c.mindfulness).map_err(|e| startup("mindfulness", e))?;
        let locator = Locator::load(&c.locator, &config.locator.embed_url).map_err(|e| startup("locator", e))?;
        let occupations = OccupationList::load(&c.occupations).map_err(|e| startup("occupations", e))?;
        let classifier = Classifier::load(&c.classifier_rules).map_err(|e| startup("classifier rules", e))?;
        let bank = Arc::new(QuestionBank::load(&c.interview_questions).map_err(|e| startup("interview questions", e))?);
        let fallback: Localized = messages
            .get("chat.fallback")
            .cloned()
            .ok_or_else(|| startup("messages", "missing chat.fallback"))?;
        for dir in [&c.audio_dir, &c.static_dir].into_iter().flatten() {
            if !dir.is_dir() {
                return Err(startup(dir.display(), "not a directory"));
            }
        }

        let creds = &config.credentials;
        let (mode, chat_provider, translator, career_client): Providers = match &config.offline_fixtures {
            Some(dir) => {
                let translations = dir.join("translations.json");
                (
                    Mode::OfflineFixtures,
                    Arc::new(offline_chat(dir)?),
                    Arc::new(FixtureTranslator::load(&translations).map_err(|e| startup("translation fixtures", e))?),
                    Arc::new(FixtureClient::new(dir.join("career/responses"))),
                )
            }
            None => (
                Mode::Live,
                Arc::new(OpenAiChatProvider::new(
                    config.assistant.api_base.clone(),
                    creds.openai_api_key.as_ref().map(|s| s.expose().to_string()),
                )),
                Arc::new(GoogleTranslateProvider::new(
                    config.translation.endpoint.clone(),
                    creds.google_translate_api_key.as_ref().map(|s| s.expose().to_string()),
                )),
                Arc::new(CareerOneStopClient::new(
                    config.career.api_base.clone(),
                    creds.careeronestop_api_token.as_ref().map(|s| s.expose().to_string()),
                    creds.careeronestop_user_id.as_ref().map(|s| s.expose().to_string()),
                )),
            ),
        };

        let threshold = Threshold::new(config.assistant.match_threshold).map_err(|e| startup("match threshold", e))?;
        let assistant = Assistant::new(
            corpus,
            chat_provider.clone(),
            AssistantConfig {
                model_id: config.assistant.model_id.clone(),
                threshold,
                provider_timeout: config.provider_timeout(),
                ..AssistantConfig::default()
            },
            fallback,
        );

        let engine: Arc<dyn RenderEngine> = match &config.resume.engine {
            Some(program) => Arc::new(ProcessEngine::new(
                program.clone(),
                config.resume.engine_args.clone(),
                Duration::from_secs(config.resume.render_timeout_secs),
            )),
            None => Arc::new(BuiltinEngine),
        };
        let resume = ResumeBuilder::new(engine, config.resume.max_concurrent_renders);
        let interview = InterviewCoach::new(
            bank,
            chat_provider.clone(),
            config.assistant.model_id.clone(),
            config.provider_timeout(),
        );
        let events: Arc<dyn EventStore> = Arc::new(
            FileEventLog::open(&config.metrics.event_log)
                .await
                .map_err(|e| startup(config.metrics.event_log.display(), e))?,
        );

        Ok(Arc::new(AppState {
            mode,
            messages,
            assistant,
            chat_provider,
            model_id: config.assistant.model_id.clone(),
            provider_timeout: config.provider_timeout(),
            phrases,
            translator,
            faq,
            mindfulness,
            locator,
            occupations,
            career_client,
            career_cache: CareerCache::new(Duration::from_secs(config.career.cache_ttl_secs)),
            resume,
            interview,
            classifier,
            events,
            audio_dir: c.audio_dir.clone(),
            static_dir: c.static_dir.clone(),
        }))
    }
}
