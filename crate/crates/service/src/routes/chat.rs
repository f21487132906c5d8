use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::Json;
use chrono::Utc;
use heyfriend_core::assistant::{AssistantError, AssistantReply, ChatSession};
use heyfriend_core::metrics::{record_event, EventKind, UsageEvent};
use heyfriend_core::SessionId;
use serde::{Deserialize, Serialize};

use super::{body_session, path_session, ApiJson, AppResult};
use crate::error::ApiError;
use crate::state::AppState;

impl From<AssistantError> for ApiError {
    fn from(e: AssistantError) -> Self {
        match e {
            AssistantError::UnknownSession => ApiError::NotFound(e.to_string()),
            AssistantError::EmptyMessage | AssistantError::Language(_) | AssistantError::Profile(_) => {
                ApiError::BadRequest(e.to_string())
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewSession {
    #[serde(default)]
    language: Option<String>,
    #[serde(default)]
    profile: Option<String>,
}

pub async fn create_session(
    State(state): State<Arc<AppState>>,
    ApiJson(body): ApiJson<NewSession>,
) -> AppResult<(StatusCode, Json<ChatSession>)> {
    let session = state.assistant.create_session(body.language.as_deref().unwrap_or("en"))?;
    let session = match body.profile {
        Some(p) => state.assistant.set_profile(&session.session_id, &p).await?,
        None => session,
    };
    Ok((StatusCode::CREATED, Json(session)))
}

pub async fn get_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> AppResult<Json<ChatSession>> {
    Ok(Json(state.assistant.session(&path_session(&id)?).await?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MessageBody {
    text: String,
    /// Per-visit analytics id. When present, the question's category (never
    /// its text) is recorded as a usage event.
    #[serde(default)]
    visit_id: Option<String>,
}

#[derive(Serialize)]
pub struct MessageReply {
    session_id: SessionId,
    #[serde(flatten)]
    reply: AssistantReply,
}

pub async fn message(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    ApiJson(body): ApiJson<MessageBody>,
) -> AppResult<Json<MessageReply>> {
    let session_id = path_session(&id)?;
    let visit = body.visit_id.as_deref().map(body_session).transpose()?;
    let reply = state.assistant.handle_message(&session_id, &body.text).await?;

    if let Some(visit) = visit {
        let category = state.classifier.classify_question(&body.text);
        let recorded = match UsageEvent::new(visit, EventKind::QuestionSubmitted, category.slug(), Utc::now()) {
            Ok(event) => record_event(state.events.as_ref(), &event).await.map_err(|e| e.to_string()),
            Err(e) => Err(e.to_string()),
        };
        if let Err(e) = recorded {
            tracing::warn!(error = %e, "question event not recorded");
        }
    }
    Ok(Json(MessageReply { session_id, reply }))
}
