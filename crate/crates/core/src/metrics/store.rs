use std::path::{Path, PathBuf};
use std::sync::Mutex;

use async_trait::async_trait;
use tokio::io::AsyncWriteExt;

use super::{EventError, UsageEvent};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error(transparent)]
    Rejected(#[from] EventError),
    #[error("event log I/O failed: {0}")]
    Io(#[from] std::io::Error),
}

/// Append-only event sink. Appends are serialized internally.
#[async_trait]
pub trait EventStore: Send + Sync {
    /// Returns once the record is durable.
    async fn append(&self, line: &str) -> Result<(), std::io::Error>;

    /// Full log text as of a point between appends.
    async fn snapshot(&self) -> Result<String, std::io::Error>;
}

/// Validates and appends. The event is re-checked here so no code path can
/// store an unscreened record.
pub async fn record_event(store: &dyn EventStore, event: &UsageEvent) -> Result<(), StoreError> {
    event.validate()?;
    store.append(&event.to_line()).await?;
    Ok(())
}

/// Line-delimited file, flushed to disk before each append returns.
pub struct FileEventLog {
    path: PathBuf,
    file: tokio::sync::Mutex<tokio::fs::File>,
}

impl FileEventLog {
    pub async fn open(path: impl AsRef<Path>) -> Result<Self, std::io::Error> {
        let path = path.as_ref().to_path_buf();
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            tokio::fs::create_dir_all(parent).await?;
        }
        let file = tokio::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .await?;
        Ok(FileEventLog {
            path,
            file: tokio::sync::Mutex::new(file),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

#[async_trait]
impl EventStore for FileEventLog {
    async fn append(&self, line: &str) -> Result<(), std::io::Error> {
        let mut buf = Vec::with_capacity(line.len() + 1);
        buf.extend_from_slice(line.as_bytes());
        buf.push(b'\n');
        let mut file = self.file.lock().await;
        file.write_all(&buf).await?;
        file.flush().await?;
        file.sync_data().await
    }

    async fn snapshot(&self) -> Result<String, std::io::Error> {
        // Holding the writer lock keeps a half-written line out of the read.
        let _guard = self.file.lock().await;
        tokio::fs::read_to_string(&self.path).await
    }
}

/// In-memory log for tests and offline mode.
#[derive(Debug, Default)]
pub struct MemoryEventLog {
    lines: Mutex<Vec<String>>,
}

impl MemoryEventLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lines(&self) -> Vec<String> {
        self.lines.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }
}

#[async_trait]
impl EventStore for MemoryEventLog {
    async fn append(&self, line: &str) -> Result<(), std::io::Error> {
        self.lines
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .push(line.to_string());
        Ok(())
    }

    async fn snapshot(&self) -> Result<String, std::io::Error> {
        let lines = self.lines.lock().unwrap_or_else(|e| e.into_inner());
        let mut out = String::new();
        for l in lines.iter() {
            out.push_str(l);
            out.push('\n');
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{new_session_id, EventKind};
    use chrono::Utc;

    #[tokio::test]
    async fn file_log_appends_and_reopens() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("logs/events.jsonl");
        let log = FileEventLog::open(&path).await.unwrap();
        let e = UsageEvent::new(new_session_id(), EventKind::TabOpened, "resume", Utc::now()).unwrap();
        record_event(&log, &e).await.unwrap();
        record_event(&log, &e).await.unwrap();
        drop(log);
        let reopened = FileEventLog::open(&path).await.unwrap();
        let text = reopened.snapshot().await.unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(serde_json::from_str::<UsageEvent>(text.lines().next().unwrap()).unwrap(), e);
    }

    #[tokio::test]
    async fn tampered_event_is_refused() {
        let log = MemoryEventLog::new();
        let mut e = UsageEvent::new(new_session_id(), EventKind::TabOpened, "resume", Utc::now()).unwrap();
        e.target = "someone@example.com".into();
        assert!(matches!(record_event(&log, &e).await, Err(StoreError::Rejected(EventError::Pii))));
        assert!(log.lines().is_empty());
    }
}
