//! Opaque session identifiers and an in-memory store with per-session locking.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex;

/// 128-bit random identifier rendered as 32 lowercase hex digits.
///
/// Version-4 UUIDs carry 122 random bits. The rendering has no separators
/// or whitespace so it can sit in line-oriented logs unquoted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SessionId(String);

impl SessionId {
    pub fn new() -> Self {
        SessionId(uuid::Uuid::new_v4().simple().to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Default for SessionId {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Display for SessionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed session id")]
pub struct MalformedSessionId;

impl FromStr for SessionId {
    type Err = MalformedSessionId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() == 32 && s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
            Ok(SessionId(s.to_string()))
        } else {
            Err(MalformedSessionId)
        }
    }
}

impl TryFrom<String> for SessionId {
    type Error = MalformedSessionId;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<SessionId> for String {
    fn from(id: SessionId) -> Self {
        id.0
    }
}

/// Sessions keyed by id, each behind its own async mutex.
///
/// Holding the guard gives exclusive, sequential processing for that session
/// while other sessions proceed concurrently.
pub struct SessionStore<T> {
    inner: DashMap<SessionId, Arc<Mutex<T>>>,
}

impl<T> Default for SessionStore<T> {
    fn default() -> Self {
        SessionStore {
            inner: DashMap::new(),
        }
    }
}

impl<T> SessionStore<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&self, id: SessionId, value: T) {
        self.inner.insert(id, Arc::new(Mutex::new(value)));
    }

    pub fn get(&self, id: &SessionId) -> Option<Arc<Mutex<T>>> {
        self.inner.get(id).map(|e| Arc::clone(e.value()))
    }

    pub fn remove(&self, id: &SessionId) -> bool {
        self.inner.remove(id).is_some()
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }
}
