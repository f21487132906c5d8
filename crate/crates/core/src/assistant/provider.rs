//! Chat-completion provider boundary.
//!
//! Every model call in the crate goes through [`ChatProvider::send`]: the
//! assistant fallback, resume review, and interview feedback. The request
//! carries the model id, the instruction text, the grounding text, and the
//! role-tagged messages; the reply is plain text.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};

pub const DEFAULT_MODEL_ID: &str = "gpt-4o-11-20-2024";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::User,
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::Assistant,
            content: content.into(),
        }
    }
}

/// What a request is for. Not sent upstream; lets mocks answer in the right shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Purpose {
    Chat,
    ResumeReview,
    InterviewFeedback,
    InterviewSummary,
}

/// One outbound provider exchange.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChatRequest {
    pub model_id: String,
    pub instructions: String,
    pub grounding: Option<String>,
    pub messages: Vec<ChatMessage>,
    #[serde(skip)]
    pub purpose: Purpose,
}

impl ChatRequest {
    /// The instruction text and grounding joined into one system message.
    pub fn system_prompt(&self) -> String {
        match &self.grounding {
            Some(g) => format!(
                "{}\n\nReference file (curated questions and answers, one JSON record per line):\n{}",
                self.instructions, g
            ),
            None => self.instructions.clone(),
        }
    }

    pub fn last_user_message(&self) -> Option<&str> {
        self.messages
            .iter()
            .rev()
            .find(|m| m.role == Role::User)
            .map(|m| m.content.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProviderError {
    #[error("provider not configured: {0}")]
    NotConfigured(String),
    #[error("provider request timed out")]
    Timeout,
    #[error("provider transport error: {0}")]
    Transport(String),
    #[error("provider returned status {status}")]
    Status { status: u16 },
    #[error("provider reply could not be read: {0}")]
    Malformed(String),
    #[error("provider returned an empty reply")]
    EmptyReply,
}

#[async_trait]
pub trait ChatProvider: Send + Sync {
    fn name(&self) -> &str;

    /// Whether credentials are present. Unconfigured providers fail every call.
    fn is_configured(&self) -> bool {
        true
    }

    async fn send(&self, request: &ChatRequest) -> Result<String, ProviderError>;
}

/// Runs `send` under a deadline, mapping expiry to [`ProviderError::Timeout`].
pub async fn send_with_timeout(
    provider: &dyn ChatProvider,
    request: &ChatRequest,
    timeout: Duration,
) -> Result<String, ProviderError> {
    match tokio::time::timeout(timeout, provider.send(request)).await {
        Ok(Ok(reply)) if reply.trim().is_empty() => Err(ProviderError::EmptyReply),
        Ok(result) => result,
        Err(_) => Err(ProviderError::Timeout),
    }
}

/// OpenAI-compatible `/v1/chat/completions` client.
pub struct OpenAiChatProvider {
    client: reqwest::Client,
    base_url: String,
    api_key: Option<String>,
}

impl OpenAiChatProvider {
    pub fn new(base_url: impl Into<String>, api_key: Option<String>) -> Self {
        OpenAiChatProvider {
            client: reqwest::Client::new(),
            base_url: base_url.into().trim_end_matches('/').to_string(),
            api_key: api_key.filter(|k| !k.trim().is_empty()),
        }
    }
}

// Never derive Debug: the key must not reach logs.
impl std::fmt::Debug for OpenAiChatProvider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OpenAiChatProvider")
            .field("base_url", &self.base_url)
            .field("configured", &self.api_key.is_some())
            .finish()
    }
}

#[derive(Serialize)]
struct WireMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Serialize)]
struct WireRequest<'a> {
    model: &'a str,
    messages: Vec<WireMessage<'a>>,
}

#[derive(Deserialize)]
struct WireResponse {
    choices: Vec<WireChoice>,
}

#[derive(Deserialize)]
struct WireChoice {
    message: WireReply,
}

#[derive(Deserialize)]
struct WireReply {
    content: Option<String>,
}

#[async_trait]
impl ChatProvider for OpenAiChatProvider {
    fn name(&self) -> &str {
        "openai"
    }

    fn is_configured(&self) -> bool {
        self.api_key.is_some()
    }

    async fn send(&self, request: &ChatRequest) -> Result<String, ProviderError> {
        let key = self
            .api_key
            .as_deref()
            .ok_or_else(|| ProviderError::NotConfigured("chat API key is not set".into()))?;

        let system = request.system_prompt();
        let mut messages = vec![WireMessage {
            role: "system",
            content: &system,
        }];
        messages.extend(request.messages.iter().map(|m| WireMessage {
            role: match m.role {
                Role::User => "user",
                Role::Assistant => "assistant",
            },
            content: &m.content,
        }));
        let body = WireRequest {
            model: &request.model_id,
            messages,
        };

        let response = self
            .client
            .post(format!("{}/v1/chat/completions", self.base_url))
            .bearer_auth(key)
            .json(&body)
            .send()
            .await
            .map_err(|e| ProviderError::Transport(e.without_url().to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(ProviderError::Status {
                status: status.as_u16(),
            });
        }
        let parsed: WireResponse = response
            .json()
            .await
            .map_err(|e| ProviderError::Malformed(e.without_url().to_string()))?;
        parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .filter(|c| !c.trim().is_empty())
            .ok_or(ProviderError::EmptyReply)
    }
}

type Responder = dyn Fn(&ChatRequest) -> Result<String, ProviderError> + Send + Sync;

/// Deterministic in-process provider with a call counter and request log.
#[derive(Clone)]
pub struct MockChatProvider {
    responder: Arc<Responder>,
    queue: Arc<Mutex<VecDeque<Result<String, ProviderError>>>>,
    calls: Arc<AtomicUsize>,
    requests: Arc<Mutex<Vec<ChatRequest>>>,
    delay: Option<Duration>,
}

impl Default for MockChatProvider {
    fn default() -> Self {
        Self::echo()
    }
}

impl MockChatProvider {
    pub fn from_fn(
        f: impl Fn(&ChatRequest) -> Result<String, ProviderError> + Send + Sync + 'static,
    ) -> Self {
        MockChatProvider {
            responder: Arc::new(f),
            queue: Arc::new(Mutex::new(VecDeque::new())),
            calls: Arc::new(AtomicUsize::new(0)),
            requests: Arc::new(Mutex::new(Vec::new())),
            delay: None,
        }
    }

    /// Replies "Mock reply: <last user message>".
    pub fn echo() -> Self {
        Self::from_fn(|req| {
            Ok(format!(
                "Mock reply: {}",
                req.last_user_message().unwrap_or_default()
            ))
        })
    }

    pub fn fixed(reply: impl Into<String>) -> Self {
        let reply = reply.into();
        Self::from_fn(move |_| Ok(reply.clone()))
    }

    pub fn failing(error: ProviderError) -> Self {
        Self::from_fn(move |_| Err(error.clone()))
    }

    /// Sleeps before answering; pairs with short timeouts in tests.
    pub fn with_delay(mut self, delay: Duration) -> Self {
        self.delay = Some(delay);
        self
    }

    /// Queued replies are served first, in order, before the responder.
    pub fn push_reply(&self, reply: Result<String, ProviderError>) {
        self.queue.lock().unwrap_or_else(|e| e.into_inner()).push_back(reply);
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    pub fn requests(&self) -> Vec<ChatRequest> {
        self.requests.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn last_request(&self) -> Option<ChatRequest> {
        self.requests
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .last()
            .cloned()
    }
}

#[async_trait]
impl ChatProvider for MockChatProvider {
    fn name(&self) -> &str {
        "mock"
    }

    async fn send(&self, request: &ChatRequest) -> Result<String, ProviderError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.requests
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .push(request.clone());
        if let Some(delay) = self.delay {
            tokio::time::sleep(delay).await;
        }
        let queued = self.queue.lock().unwrap_or_else(|e| e.into_inner()).pop_front();
        match queued {
            Some(reply) => reply,
            None => (self.responder)(request),
        }
    }
}
