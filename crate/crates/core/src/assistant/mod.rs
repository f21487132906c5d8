//! Chat sessions and verbatim-first dispatch.
//!
//! A message that matches a curated question returns the stored answer
//! byte-for-byte without touching the provider. Anything else goes to the
//! chat provider together with the active instruction profile, the corpus
//! text as grounding, and the full session history.

mod profile;
mod provider;

use std::sync::Arc;
use std::time::Duration;

use chrono::{DateTime, Utc};
use serde::Serialize;

pub use profile::{ProfileVersion, UnknownProfile};
pub use provider::{
    send_with_timeout, ChatMessage, ChatProvider, ChatRequest, MockChatProvider,
    OpenAiChatProvider, ProviderError, Purpose, Role, DEFAULT_MODEL_ID,
};

use crate::lang::{Language, Localized};
use crate::qa::{self, QaCorpus, Threshold};
use crate::sessions::{SessionId, SessionStore};

#[derive(Debug, thiserror::Error)]
pub enum AssistantError {
    #[error("message is empty")]
    EmptyMessage,
    #[error("unknown chat session")]
    UnknownSession,
    #[error(transparent)]
    Language(#[from] crate::lang::UnsupportedLanguage),
    #[error(transparent)]
    Profile(#[from] UnknownProfile),
}

#[derive(Debug, Clone, Serialize)]
pub struct HistoryEntry {
    pub role: Role,
    pub text: String,
    pub timestamp: DateTime<Utc>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChatSession {
    pub session_id: SessionId,
    history: Vec<HistoryEntry>,
    pub language: Language,
    pub profile: ProfileVersion,
}

impl ChatSession {
    pub fn new(language: Language, profile: ProfileVersion) -> Self {
        ChatSession {
            session_id: SessionId::new(),
            history: Vec::new(),
            language,
            profile,
        }
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    /// Appends a user message and its reply as one unit, keeping roles
    /// alternating and timestamps nondecreasing.
    fn push_exchange(&mut self, user: String, reply: String) {
        let now = Utc::now();
        let floor = self.history.last().map(|e| e.timestamp).unwrap_or(now);
        let ts = now.max(floor);
        self.history.push(HistoryEntry {
            role: Role::User,
            text: user,
            timestamp: ts,
        });
        self.history.push(HistoryEntry {
            role: Role::Assistant,
            text: reply,
            timestamp: ts,
        });
    }

    fn as_messages(&self) -> Vec<ChatMessage> {
        self.history
            .iter()
            .map(|e| ChatMessage {
                role: e.role,
                content: e.text.clone(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReplySource {
    CorpusVerbatim,
    Generated,
    Degraded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssistantReply {
    pub text: String,
    pub source: ReplySource,
    pub matched_pair: Option<String>,
    pub score: f64,
}

#[derive(Debug, Clone)]
pub struct AssistantConfig {
    pub model_id: String,
    pub threshold: Threshold,
    pub default_profile: ProfileVersion,
    pub provider_timeout: Duration,
}

impl Default for AssistantConfig {
    fn default() -> Self {
        AssistantConfig {
            model_id: DEFAULT_MODEL_ID.to_string(),
            threshold: Threshold::default(),
            default_profile: ProfileVersion::default(),
            provider_timeout: Duration::from_secs(30),
        }
    }
}

pub struct Assistant {
    corpus: Arc<QaCorpus>,
    provider: Arc<dyn ChatProvider>,
    config: AssistantConfig,
    fallback: Localized,
    sessions: SessionStore<ChatSession>,
}

impl Assistant {
    /// `fallback` is the reply used when the provider fails, per language.
    pub fn new(
        corpus: Arc<QaCorpus>,
        provider: Arc<dyn ChatProvider>,
        config: AssistantConfig,
        fallback: Localized,
    ) -> Self {
        Assistant {
            corpus,
            provider,
            config,
            fallback,
            sessions: SessionStore::new(),
        }
    }

    pub fn corpus(&self) -> &QaCorpus {
        &self.corpus
    }

    pub fn config(&self) -> &AssistantConfig {
        &self.config
    }

    pub fn provider(&self) -> &dyn ChatProvider {
        self.provider.as_ref()
    }

    pub fn create_session(&self, language: &str) -> Result<ChatSession, AssistantError> {
        let language: Language = language.parse()?;
        let session = ChatSession::new(language, self.config.default_profile);
        self.sessions.insert(session.session_id.clone(), session.clone());
        Ok(session)
    }

    pub async fn session(&self, id: &SessionId) -> Result<ChatSession, AssistantError> {
        let slot = self.sessions.get(id).ok_or(AssistantError::UnknownSession)?;
        let session = slot.lock().await;
        Ok(session.clone())
    }

    pub async fn set_profile(
        &self,
        id: &SessionId,
        version: &str,
    ) -> Result<ChatSession, AssistantError> {
        let version: ProfileVersion = version.parse()?;
        let slot = self.sessions.get(id).ok_or(AssistantError::UnknownSession)?;
        let mut session = slot.lock().await;
        session.profile = version;
        Ok(session.clone())
    }

    /// Dispatches a message for a stored session, holding that session's
    /// lock for the whole exchange.
    pub async fn handle_message(
        &self,
        id: &SessionId,
        text: &str,
    ) -> Result<AssistantReply, AssistantError> {
        let slot = self.sessions.get(id).ok_or(AssistantError::UnknownSession)?;
        let mut session = slot.lock().await;
        self.respond(&mut session, text).await
    }

    /// Dispatch against a caller-owned session.
    pub async fn respond(
        &self,
        session: &mut ChatSession,
        text: &str,
    ) -> Result<AssistantReply, AssistantError> {
        if qa::normalize(text).is_empty() {
            return Err(AssistantError::EmptyMessage);
        }

        let matched = self.corpus.match_query(text, self.config.threshold);
        if let Some(pair_id) = matched.pair_id.as_deref().filter(|_| matched.is_hit()) {
            let answer = self
                .corpus
                .get_answer(pair_id)
                .expect("matched ids come from the corpus")
                .to_string();
            session.push_exchange(text.to_string(), answer.clone());
            return Ok(AssistantReply {
                text: answer,
                source: ReplySource::CorpusVerbatim,
                matched_pair: Some(pair_id.to_string()),
                score: matched.score,
            });
        }

        let mut messages = session.as_messages();
        messages.push(ChatMessage::user(text));
        let request = ChatRequest {
            model_id: self.config.model_id.clone(),
            instructions: session.profile.text().to_string(),
            grounding: Some(self.corpus.raw_text().to_string()),
            messages,
            purpose: Purpose::Chat,
        };

        let reply = match send_with_timeout(
            self.provider.as_ref(),
            &request,
            self.config.provider_timeout,
        )
        .await
        {
            Ok(reply) => AssistantReply {
                text: reply,
                source: ReplySource::Generated,
                matched_pair: None,
                score: matched.score,
            },
            Err(err) => {
                tracing::warn!(provider = self.provider.name(), error = %err, "chat provider failed; serving fallback");
                AssistantReply {
                    text: self.fallback.get(session.language).to_string(),
                    source: ReplySource::Degraded,
                    matched_pair: None,
                    score: matched.score,
                }
            }
        };
        session.push_exchange(text.to_string(), reply.text.clone());
        Ok(reply)
    }
}
