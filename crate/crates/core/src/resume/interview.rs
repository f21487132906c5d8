use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;
use std::time::Duration;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::review::{is_score_like, split_sections};
use crate::assistant::{send_with_timeout, ChatMessage, ChatProvider, ChatRequest, Purpose};
use crate::sessions::{SessionId, SessionStore};

/// Question ids every bank must contain.
pub const REQUIRED_QUESTIONS: [&str; 5] = [
    "tell-me-about-yourself",
    "handle-pressure",
    "salary-expectations",
    "leisure-time",
    "independent-or-team",
];

pub const MAX_TRANSCRIPT_CHARS: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterviewQuestion {
    pub id: String,
    pub text: String,
}

#[derive(Debug, Clone)]
pub struct QuestionBank {
    questions: Vec<InterviewQuestion>,
}

impl QuestionBank {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, InterviewError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path)
            .map_err(|e| InterviewError::Bank(format!("{}: {e}", path.display())))?;
        Self::parse(&raw)
    }

    pub fn parse(raw: &str) -> Result<Self, InterviewError> {
        let questions: Vec<InterviewQuestion> =
            serde_json::from_str(raw).map_err(|e| InterviewError::Bank(e.to_string()))?;
        let mut ids = HashSet::new();
        for q in &questions {
            if q.text.trim().is_empty() {
                return Err(InterviewError::Bank(format!("question {:?} has no text", q.id)));
            }
            if !ids.insert(q.id.as_str()) {
                return Err(InterviewError::Bank(format!("duplicate question id {:?}", q.id)));
            }
        }
        if let Some(missing) = REQUIRED_QUESTIONS.iter().find(|id| !ids.contains(**id)) {
            return Err(InterviewError::Bank(format!("missing required question {missing:?}")));
        }
        Ok(QuestionBank { questions })
    }

    pub fn questions(&self) -> &[InterviewQuestion] {
        &self.questions
    }

    pub fn get(&self, id: &str) -> Option<&InterviewQuestion> {
        self.questions.iter().find(|q| q.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterviewState {
    Active,
    Ended,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Feedback {
    pub clarity: String,
    pub confidence: String,
    pub completeness: String,
    /// Whole reply, kept when it had none of the three headings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TurnFeedback {
    Available(Feedback),
    Unavailable { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterviewTurn {
    pub index: usize,
    pub transcript: String,
    pub feedback: TurnFeedback,
    pub at: DateTime<Utc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SummarySource {
    Generated,
    Local,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterviewSummary {
    pub turn_count: usize,
    pub text: String,
    pub source: SummarySource,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterviewError {
    #[error("unknown interview question {0:?}")]
    UnknownQuestion(String),
    #[error("unknown interview session")]
    UnknownSession,
    #[error("interview session has already ended")]
    Ended,
    #[error("transcript is empty")]
    EmptyTranscript,
    #[error("transcript is longer than {MAX_TRANSCRIPT_CHARS} characters")]
    TranscriptTooLong,
    #[error("an interview needs at least one answer before it can end")]
    NoTurns,
    #[error("question bank: {0}")]
    Bank(String),
}

/// One practice session. Turns only grow while active; once ended the
/// session refuses every mutation.
#[derive(Debug, Clone, Serialize)]
pub struct InterviewSession {
    pub session_id: SessionId,
    pub question: InterviewQuestion,
    turns: Vec<InterviewTurn>,
    state: InterviewState,
    summary: Option<InterviewSummary>,
}

impl InterviewSession {
    pub fn new(question: InterviewQuestion) -> Self {
        InterviewSession {
            session_id: SessionId::new(),
            question,
            turns: Vec::new(),
            state: InterviewState::Active,
            summary: None,
        }
    }

    pub fn turns(&self) -> &[InterviewTurn] {
        &self.turns
    }

    pub fn state(&self) -> InterviewState {
        self.state
    }

    pub fn summary(&self) -> Option<&InterviewSummary> {
        self.summary.as_ref()
    }

    pub fn check_turn(&self, transcript: &str) -> Result<(), InterviewError> {
        if self.state == InterviewState::Ended {
            return Err(InterviewError::Ended);
        }
        if transcript.trim().is_empty() {
            return Err(InterviewError::EmptyTranscript);
        }
        if transcript.chars().count() > MAX_TRANSCRIPT_CHARS {
            return Err(InterviewError::TranscriptTooLong);
        }
        Ok(())
    }

    pub fn check_end(&self) -> Result<(), InterviewError> {
        match (self.state, self.turns.is_empty()) {
            (InterviewState::Ended, _) => Err(InterviewError::Ended),
            (_, true) => Err(InterviewError::NoTurns),
            _ => Ok(()),
        }
    }

    pub fn append_turn(
        &mut self,
        transcript: &str,
        feedback: TurnFeedback,
        at: DateTime<Utc>,
    ) -> Result<&InterviewTurn, InterviewError> {
        self.check_turn(transcript)?;
        let at = self.turns.last().map_or(at, |t| t.at.max(at));
        self.turns.push(InterviewTurn {
            index: self.turns.len() + 1,
            transcript: transcript.trim().to_string(),
            feedback,
            at,
        });
        Ok(self.turns.last().expect("just pushed"))
    }

    /// Ends the session. The summary's turn count is taken from the session.
    pub fn end(&mut self, text: String, source: SummarySource) -> Result<&InterviewSummary, InterviewError> {
        self.check_end()?;
        self.state = InterviewState::Ended;
        Ok(self.summary.insert(InterviewSummary {
            turn_count: self.turns.len(),
            text,
            source,
        }))
    }

    fn local_summary(&self) -> String {
        let mut s = format!(
            "You practiced the question \"{}\" with {} answer{}.\n",
            self.question.text,
            self.turns.len(),
            if self.turns.len() == 1 { "" } else { "s" }
        );
        for t in &self.turns {
            let note = match &t.feedback {
                TurnFeedback::Available(f) => [&f.clarity, &f.confidence, &f.completeness]
                    .into_iter()
                    .filter(|x| !x.is_empty())
                    .cloned()
                    .chain(f.notes.clone())
                    .collect::<Vec<_>>()
                    .join(" "),
                TurnFeedback::Unavailable { .. } => String::new(),
            };
            let note = if note.is_empty() {
                "Feedback was not available for this answer. Try answering again with a short example from your experience.".to_string()
            } else {
                note
            };
            let _ = writeln!(s, "Answer {}: {note}", t.index);
        }
        s
    }
}

fn feedback_text(f: &TurnFeedback) -> String {
    match f {
        TurnFeedback::Available(f) => match &f.notes {
            Some(n) => n.clone(),
            None => format!(
                "Clarity: {}\nConfidence: {}\nCompleteness: {}",
                f.clarity, f.confidence, f.completeness
            ),
        },
        TurnFeedback::Unavailable { .. } => "(feedback unavailable)".to_string(),
    }
}

fn parse_feedback(reply: &str) -> Feedback {
    match split_sections(reply, &["clarity", "confidence", "completeness"]) {
        Some(sections) => {
            let mut dims = sections.into_iter().map(|items| {
                items
                    .into_iter()
                    .filter(|i| !is_score_like(i))
                    .collect::<Vec<_>>()
                    .join(" ")
            });
            Feedback {
                clarity: dims.next().unwrap_or_default(),
                confidence: dims.next().unwrap_or_default(),
                completeness: dims.next().unwrap_or_default(),
                notes: None,
            }
        }
        None => Feedback {
            notes: Some(reply.trim().to_string()),
            ..Default::default()
        },
    }
}

fn feedback_instructions(question: &str) -> String {
    format!(
        "You are a friendly interview practice coach. The user is answering the interview question \
         \"{question}\". Give short, encouraging, actionable feedback on the user's latest answer under \
         exactly three headings: Clarity:, Confidence:, Completeness:. Do not give scores or ratings."
    )
}

fn summary_instructions(question: &str, turns: usize) -> String {
    format!(
        "You are a friendly interview practice coach. The user practiced the interview question \
         \"{question}\" and gave {turns} answer(s). Write a short written summary of their \
         performance with actionable suggestions. Refer to each answer as \"Answer 1\", \"Answer 2\", \
         and so on, covering every answer. Do not give scores or ratings."
    )
}

/// Interview sessions plus the provider used for feedback.
pub struct InterviewCoach {
    bank: Arc<QuestionBank>,
    provider: Arc<dyn ChatProvider>,
    model_id: String,
    timeout: Duration,
    sessions: SessionStore<InterviewSession>,
}

impl InterviewCoach {
    pub fn new(
        bank: Arc<QuestionBank>,
        provider: Arc<dyn ChatProvider>,
        model_id: impl Into<String>,
        timeout: Duration,
    ) -> Self {
        InterviewCoach {
            bank,
            provider,
            model_id: model_id.into(),
            timeout,
            sessions: SessionStore::new(),
        }
    }

    pub fn bank(&self) -> &QuestionBank {
        &self.bank
    }

    pub fn start_interview(&self, question_id: &str) -> Result<InterviewSession, InterviewError> {
        let question = self
            .bank
            .get(question_id)
            .ok_or_else(|| InterviewError::UnknownQuestion(question_id.to_string()))?;
        let session = InterviewSession::new(question.clone());
        self.sessions.insert(session.session_id.clone(), session.clone());
        Ok(session)
    }

    pub async fn session(&self, id: &SessionId) -> Result<InterviewSession, InterviewError> {
        let slot = self.sessions.get(id).ok_or(InterviewError::UnknownSession)?;
        let guard = slot.lock().await;
        Ok(guard.clone())
    }

    /// Records one answer. Validation happens before any provider call; a
    /// provider failure still records the turn, with feedback unavailable.
    pub async fn submit_turn(&self, id: &SessionId, transcript: &str) -> Result<InterviewTurn, InterviewError> {
        let slot = self.sessions.get(id).ok_or(InterviewError::UnknownSession)?;
        let mut session = slot.lock().await;
        session.check_turn(transcript)?;

        let mut messages = Vec::with_capacity(session.turns.len() * 2 + 1);
        for t in &session.turns {
            messages.push(ChatMessage::user(t.transcript.clone()));
            messages.push(ChatMessage::assistant(feedback_text(&t.feedback)));
        }
        messages.push(ChatMessage::user(transcript.trim().to_string()));
        let request = ChatRequest {
            model_id: self.model_id.clone(),
            instructions: feedback_instructions(&session.question.text),
            grounding: None,
            messages,
            purpose: Purpose::InterviewFeedback,
        };
        let feedback = match send_with_timeout(self.provider.as_ref(), &request, self.timeout).await {
            Ok(reply) => TurnFeedback::Available(parse_feedback(&reply)),
            Err(e) => {
                tracing::warn!(error = %e, "interview feedback unavailable");
                TurnFeedback::Unavailable { reason: e.to_string() }
            }
        };
        session.append_turn(transcript, feedback, Utc::now()).cloned()
    }

    /// Ends the session with a written summary. If the provider fails, a
    /// summary is assembled from the per-turn feedback instead.
    pub async fn end_interview(&self, id: &SessionId) -> Result<InterviewSummary, InterviewError> {
        let slot = self.sessions.get(id).ok_or(InterviewError::UnknownSession)?;
        let mut session = slot.lock().await;
        session.check_end()?;

        let mut transcript = String::new();
        for t in &session.turns {
            let _ = writeln!(
                transcript,
                "Answer {}: {}\nFeedback: {}\n",
                t.index,
                t.transcript,
                feedback_text(&t.feedback)
            );
        }
        let request = ChatRequest {
            model_id: self.model_id.clone(),
            instructions: summary_instructions(&session.question.text, session.turns.len()),
            grounding: None,
            messages: vec![ChatMessage::user(transcript)],
            purpose: Purpose::InterviewSummary,
        };
        let (text, source) = match send_with_timeout(self.provider.as_ref(), &request, self.timeout).await {
            Ok(reply) => (reply.trim().to_string(), SummarySource::Generated),
            Err(e) => {
                tracing::warn!(error = %e, "interview summary falling back to local text");
                (session.local_summary(), SummarySource::Local)
            }
        };
        session.end(text, source).cloned()
    }
}
