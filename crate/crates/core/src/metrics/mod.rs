//! Anonymized usage events, question classification, and aggregate reports.
//!
//! An event carries a per-visit session id, a kind, a label from that
//! kind's closed vocabulary, and a timestamp. Nothing else is accepted:
//! unknown fields are rejected and every label is screened for address
//! patterns before it reaches the log.

mod aggregate;
mod classify;
mod store;

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use chrono::{DateTime, Utc};
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::career::CareerKind;
use crate::sessions::SessionId;

pub use aggregate::{aggregate, AggregateReport, TAB_LABELS};
pub use classify::{Classifier, ClassifierError, QuestionCategory};
pub use store::{record_event, EventStore, FileEventLog, MemoryEventLog, StoreError};

/// Fresh per-visit identifier; see [`SessionId`].
pub fn new_session_id() -> SessionId {
    SessionId::new()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    TabOpened,
    ButtonClicked,
    QuestionSubmitted,
    AudioPlayed,
    ResumeGenerated,
    CareerPanelOpened,
    LinkAccessed,
}

pub const TABS: [&str; 6] = [
    "resume",
    "career-services",
    "mindfulness",
    "translator",
    "common-questions",
    "locator",
];

const BUTTONS: &[&str] = &[
    "chat-open",
    "chat-send",
    "faq-expand",
    "faq-collapse",
    "interview-start",
    "interview-turn",
    "interview-end",
    "resume-build",
    "resume-review",
    "translate",
    "language-switch",
    "phrase-category",
    "locator-search",
    "career-search",
    "mindfulness-section",
];

const LINKS: &[&str] = &["mindfulness-video", "faq-link", "career-link", "locator-map"];

const AUDIO: &[&str] = &["en", "es", "fr", "ar"];

const RESUME: &[&str] = &["resume-builder"];

impl EventKind {
    pub const ALL: [EventKind; 7] = [
        EventKind::TabOpened,
        EventKind::ButtonClicked,
        EventKind::QuestionSubmitted,
        EventKind::AudioPlayed,
        EventKind::ResumeGenerated,
        EventKind::CareerPanelOpened,
        EventKind::LinkAccessed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::TabOpened => "tab_opened",
            EventKind::ButtonClicked => "button_clicked",
            EventKind::QuestionSubmitted => "question_submitted",
            EventKind::AudioPlayed => "audio_played",
            EventKind::ResumeGenerated => "resume_generated",
            EventKind::CareerPanelOpened => "career_panel_opened",
            EventKind::LinkAccessed => "link_accessed",
        }
    }

    /// Whether `target` is in this kind's closed label vocabulary.
    pub fn allows(self, target: &str) -> bool {
        match self {
            EventKind::TabOpened => TABS.contains(&target),
            EventKind::ButtonClicked => BUTTONS.contains(&target),
            EventKind::QuestionSubmitted => target.parse::<QuestionCategory>().is_ok(),
            EventKind::AudioPlayed => AUDIO.contains(&target),
            EventKind::ResumeGenerated => RESUME.contains(&target),
            EventKind::CareerPanelOpened => target.parse::<CareerKind>().is_ok(),
            EventKind::LinkAccessed => LINKS.contains(&target),
        }
    }

    pub fn vocabulary(self) -> Vec<&'static str> {
        match self {
            EventKind::TabOpened => TABS.to_vec(),
            EventKind::ButtonClicked => BUTTONS.to_vec(),
            EventKind::QuestionSubmitted => QuestionCategory::ALL.iter().map(|c| c.slug()).collect(),
            EventKind::AudioPlayed => AUDIO.to_vec(),
            EventKind::ResumeGenerated => RESUME.to_vec(),
            EventKind::CareerPanelOpened => CareerKind::ALL.iter().map(|k| k.slug()).collect(),
            EventKind::LinkAccessed => LINKS.to_vec(),
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EventKind {
    type Err = EventError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EventKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| EventError::UnknownKind(s.to_string()))
    }
}

/// One stored log record. Flat by construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UsageEvent {
    pub timestamp: DateTime<Utc>,
    pub session_id: SessionId,
    pub kind: EventKind,
    pub target: String,
}

impl UsageEvent {
    pub fn new(
        session_id: SessionId,
        kind: EventKind,
        target: impl Into<String>,
        timestamp: DateTime<Utc>,
    ) -> Result<Self, EventError> {
        let event = UsageEvent {
            timestamp,
            session_id,
            kind,
            target: target.into(),
        };
        event.validate()?;
        Ok(event)
    }

    pub fn validate(&self) -> Result<(), EventError> {
        if contains_pii(&self.target) {
            return Err(EventError::Pii);
        }
        if !self.kind.allows(&self.target) {
            return Err(EventError::UnknownTarget {
                kind: self.kind,
                target: self.target.clone(),
            });
        }
        Ok(())
    }

    /// The exact line appended to the log, without the newline.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("events serialize")
    }
}

/// Client-submitted event body; the server stamps the time.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventPayload {
    pub session_id: String,
    pub kind: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EventError {
    #[error("malformed event: {0}")]
    Malformed(String),
    #[error("unknown event kind {0:?}")]
    UnknownKind(String),
    #[error("target {target:?} is not a {kind} label")]
    UnknownTarget { kind: EventKind, target: String },
    #[error("malformed session id")]
    SessionId,
    #[error("event contains an address-like value")]
    Pii,
}

/// Validates an untrusted JSON payload into an event stamped `now`.
///
/// Extra fields, nested values, unknown kinds, labels outside the closed
/// vocabulary, and address-like strings anywhere in the payload are all
/// rejected.
pub fn validate_payload(raw: &serde_json::Value, now: DateTime<Utc>) -> Result<UsageEvent, EventError> {
    if value_contains_pii(raw) {
        return Err(EventError::Pii);
    }
    let payload: EventPayload =
        serde_json::from_value(raw.clone()).map_err(|e| EventError::Malformed(e.to_string()))?;
    let session_id = payload.session_id.parse().map_err(|_| EventError::SessionId)?;
    let kind = payload.kind.parse()?;
    UsageEvent::new(session_id, kind, payload.target, now)
}

static IPV4: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?:^|[^0-9])(?:[0-9]{1,3}\.){3}[0-9]{1,3}(?:[^0-9]|$)").unwrap());
// Full eight-group form, or any form using "::" compression. Requiring one
// of the two keeps clock times like 10:04:09 from matching.
static IPV6: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)(?:[0-9a-f]{1,4}:){7}[0-9a-f]{1,4}|(?:[0-9a-f]{1,4}(?::[0-9a-f]{1,4}){0,6})?::(?:[0-9a-f]{1,4}(?::[0-9a-f]{1,4}){0,6})?").unwrap()
});
static EMAIL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[^\s@]+@[^\s@]+\.[^\s@]+").unwrap());

/// True when `s` contains something shaped like an IPv4/IPv6 address or an email.
pub fn contains_pii(s: &str) -> bool {
    IPV4.is_match(s) || IPV6.is_match(s) || EMAIL.is_match(s)
}

fn value_contains_pii(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::String(s) => contains_pii(s),
        serde_json::Value::Array(items) => items.iter().any(value_contains_pii),
        serde_json::Value::Object(map) => map
            .iter()
            .any(|(k, v)| contains_pii(k) || value_contains_pii(v)),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sid() -> String {
        new_session_id().to_string()
    }

    #[test]
    fn accepts_known_labels() {
        let e = validate_payload(
            &json!({"session_id": sid(), "kind": "tab_opened", "target": "resume"}),
            Utc::now(),
        )
        .unwrap();
        assert_eq!(e.kind, EventKind::TabOpened);
        assert!(!e.to_line().contains('\n'));
    }

    #[test]
    fn rejects_addresses_kinds_and_extra_fields() {
        let now = Utc::now();
        assert_eq!(
            validate_payload(&json!({"session_id": sid(), "kind": "tab_opened", "target": "192.168.1.5"}), now),
            Err(EventError::Pii)
        );
        assert!(matches!(
            validate_payload(&json!({"session_id": sid(), "kind": "keypress", "target": "resume"}), now),
            Err(EventError::UnknownKind(_))
        ));
        assert!(matches!(
            validate_payload(&json!({"session_id": sid(), "kind": "tab_opened", "target": "resume", "device_id": "x"}), now),
            Err(EventError::Malformed(_))
        ));
        assert!(matches!(
            validate_payload(&json!({"session_id": sid(), "kind": "tab_opened", "target": "weather"}), now),
            Err(EventError::UnknownTarget { .. })
        ));
        assert_eq!(
            validate_payload(&json!({"session_id": "abc", "kind": "tab_opened", "target": "resume"}), now),
            Err(EventError::SessionId)
        );
    }

    #[test]
    fn pii_patterns() {
        for s in ["10.0.0.1", "see 8.8.8.8 now", "fe80::1", "::1", "2001:db8:0:0:0:0:2:1", "a@b.co"] {
            assert!(contains_pii(s), "{s}");
        }
        for s in ["resume", "career-services", "2025-03-03T10:04:09Z", "10:04", "4.8", "v1.2.3"] {
            assert!(!contains_pii(s), "{s}");
        }
    }

    #[test]
    fn every_vocabulary_label_is_clean() {
        for k in EventKind::ALL {
            for t in k.vocabulary() {
                assert!(k.allows(t));
                assert!(!contains_pii(t), "{t}");
            }
        }
    }
}
