use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use async_trait::async_trait;

use super::RequestDescriptor;

pub const DEFAULT_CAREER_API_BASE: &str = "https://api.careeronestop.org";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClientError {
    #[error("not configured")]
    NotConfigured,
    #[error("network: {0}")]
    Network(String),
    #[error("status {0}")]
    Status(u16),
}

/// Executes a request descriptor and returns the raw response body.
#[async_trait]
pub trait CareerClient: Send + Sync {
    fn name(&self) -> &str;

    fn is_configured(&self) -> bool {
        true
    }

    async fn execute(&self, request: &RequestDescriptor) -> Result<String, ClientError>;
}

/// Live client: bearer token plus the account user id substituted into paths.
pub struct CareerOneStopClient {
    client: reqwest::Client,
    base_url: String,
    credentials: Option<(String, String)>,
    timeout: Duration,
}

impl CareerOneStopClient {
    pub fn new(base_url: impl Into<String>, token: Option<String>, user_id: Option<String>) -> Self {
        let credentials = match (token, user_id) {
            (Some(t), Some(u)) if !t.trim().is_empty() && !u.trim().is_empty() => Some((t, u)),
            _ => None,
        };
        CareerOneStopClient {
            client: reqwest::Client::new(),
            base_url: base_url.into().trim_end_matches('/').to_string(),
            credentials,
            timeout: Duration::from_secs(20),
        }
    }
}

impl std::fmt::Debug for CareerOneStopClient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CareerOneStopClient")
            .field("base_url", &self.base_url)
            .field("configured", &self.credentials.is_some())
            .finish()
    }
}

#[async_trait]
impl CareerClient for CareerOneStopClient {
    fn name(&self) -> &str {
        "careeronestop"
    }

    fn is_configured(&self) -> bool {
        self.credentials.is_some()
    }

    async fn execute(&self, request: &RequestDescriptor) -> Result<String, ClientError> {
        let (token, user_id) = self.credentials.as_ref().ok_or(ClientError::NotConfigured)?;
        let url = format!("{}{}", self.base_url, request.path.replace("{userId}", user_id));
        let response = self
            .client
            .get(url)
            .query(&request.query)
            .bearer_auth(token)
            .header(reqwest::header::ACCEPT, "application/json")
            .timeout(self.timeout)
            .send()
            .await
            .map_err(|e| ClientError::Network(e.without_url().to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(ClientError::Status(status.as_u16()));
        }
        response
            .text()
            .await
            .map_err(|e| ClientError::Network(e.without_url().to_string()))
    }
}

/// Serves `<dir>/<kind-slug>.json` regardless of parameters.
#[derive(Debug, Clone)]
pub struct FixtureClient {
    dir: PathBuf,
    calls: Arc<AtomicUsize>,
}

impl FixtureClient {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FixtureClient {
            dir: dir.into(),
            calls: Arc::new(AtomicUsize::new(0)),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

#[async_trait]
impl CareerClient for FixtureClient {
    fn name(&self) -> &str {
        "fixtures"
    }

    async fn execute(&self, request: &RequestDescriptor) -> Result<String, ClientError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let path = self.dir.join(format!("{}.json", request.kind.slug()));
        tokio::fs::read_to_string(&path)
            .await
            .map_err(|e| ClientError::Network(format!("fixture {}: {e}", path.display())))
    }
}

type Responder = dyn Fn(&RequestDescriptor) -> Result<String, ClientError> + Send + Sync;

/// Closure-backed client with a call counter and optional delay.
#[derive(Clone)]
pub struct MockCareerClient {
    responder: Arc<Responder>,
    calls: Arc<AtomicUsize>,
    delay: Option<Duration>,
}

impl MockCareerClient {
    pub fn from_fn(
        f: impl Fn(&RequestDescriptor) -> Result<String, ClientError> + Send + Sync + 'static,
    ) -> Self {
        MockCareerClient {
            responder: Arc::new(f),
            calls: Arc::new(AtomicUsize::new(0)),
            delay: None,
        }
    }

    pub fn with_delay(mut self, delay: Duration) -> Self {
        self.delay = Some(delay);
        self
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

#[async_trait]
impl CareerClient for MockCareerClient {
    fn name(&self) -> &str {
        "mock"
    }

    async fn execute(&self, request: &RequestDescriptor) -> Result<String, ClientError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        if let Some(d) = self.delay {
            tokio::time::sleep(d).await;
        }
        (self.responder)(request)
    }
}
