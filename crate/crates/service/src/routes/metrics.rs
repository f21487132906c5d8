use std::sync::Arc;

use axum::extract::{DefaultBodyLimit, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use chrono::Utc;
use heyfriend_core::metrics::{aggregate, new_session_id, record_event, validate_payload, StoreError};
use heyfriend_core::SessionId;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{ApiJson, ApiQuery, AppResult};
use crate::error::ApiError;
use crate::state::AppState;

const EVENT_BODY_LIMIT: usize = 4 * 1024;

pub fn event_limit() -> DefaultBodyLimit {
    DefaultBodyLimit::max(EVENT_BODY_LIMIT)
}

#[derive(Serialize)]
pub struct NewSession {
    session_id: SessionId,
}

pub async fn new_session() -> (StatusCode, Json<NewSession>) {
    (
        StatusCode::CREATED,
        Json(NewSession {
            session_id: new_session_id(),
        }),
    )
}

pub async fn event(State(state): State<Arc<AppState>>, ApiJson(raw): ApiJson<Value>) -> AppResult<(StatusCode, Json<Value>)> {
    let event = validate_payload(&raw, Utc::now()).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    record_event(state.events.as_ref(), &event).await.map_err(|e| match e {
        StoreError::Rejected(e) => ApiError::BadRequest(e.to_string()),
        StoreError::Io(e) => ApiError::Internal(e.to_string()),
    })?;
    Ok((StatusCode::CREATED, Json(json!({ "recorded": true }))))
}

#[derive(Deserialize)]
pub struct ReportQuery {
    format: Option<String>,
}

pub async fn report(State(state): State<Arc<AppState>>, ApiQuery(q): ApiQuery<ReportQuery>) -> AppResult<Response> {
    let log = state
        .events
        .snapshot()
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?;
    let report = aggregate(&log);
    match q.format.as_deref().unwrap_or("json") {
        "json" => Ok(Json(report).into_response()),
        "text" => Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], report.export_text()).into_response()),
        other => Err(ApiError::BadRequest(format!("unknown report format {other:?}"))),
    }
}
