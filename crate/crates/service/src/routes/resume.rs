use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, FromRequest, Multipart, Path, Request, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use heyfriend_core::resume::{
    review_resume, ExtractError, InterviewError, InterviewQuestion, InterviewSession, InterviewSummary,
    InterviewTurn, RenderError, ResumeError, ResumeInput, ReviewError, ReviewReport, MAX_UPLOAD_BYTES,
};
use serde::{Deserialize, Serialize};

use super::{body_session, path_session, ApiJson, AppResult};
use crate::error::ApiError;
use crate::state::AppState;

// Headroom for multipart framing around a maximum-size file.
const UPLOAD_SLACK: usize = 64 * 1024;

pub fn upload_limit() -> DefaultBodyLimit {
    DefaultBodyLimit::max(MAX_UPLOAD_BYTES + UPLOAD_SLACK)
}

impl From<ResumeError> for ApiError {
    fn from(e: ResumeError) -> Self {
        match e {
            ResumeError::Invalid(_)
            | ResumeError::Render(RenderError::Document(_))
            | ResumeError::Render(RenderError::Unsupported(_)) => ApiError::BadRequest(e.to_string()),
            ResumeError::Render(r) => ApiError::RenderFailed {
                diagnostics: r.diagnostics().map(str::to_owned).or_else(|| Some(r.to_string())),
            },
        }
    }
}

pub async fn build(State(state): State<Arc<AppState>>, ApiJson(input): ApiJson<ResumeInput>) -> AppResult<Response> {
    let pdf = state.resume.build_resume(&input).await?;
    Ok((
        [
            (header::CONTENT_TYPE, "application/pdf"),
            (header::CONTENT_DISPOSITION, "attachment; filename=\"resume.pdf\""),
        ],
        pdf,
    )
        .into_response())
}

impl From<ReviewError> for ApiError {
    fn from(e: ReviewError) -> Self {
        match e {
            ReviewError::Extract(ExtractError::TooLarge) => ApiError::PayloadTooLarge,
            ReviewError::Extract(x) => ApiError::BadRequest(x.to_string()),
            ReviewError::Provider(p) => ApiError::degraded("resume review", p),
        }
    }
}

fn content_type(req: &Request) -> String {
    req.headers()
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.split(';').next())
        .unwrap_or("")
        .trim()
        .to_ascii_lowercase()
}

async fn read_upload(req: Request) -> AppResult<Bytes> {
    let too_large = |status: StatusCode, text: String| {
        if status == StatusCode::PAYLOAD_TOO_LARGE {
            ApiError::PayloadTooLarge
        } else {
            ApiError::BadRequest(text)
        }
    };
    match content_type(&req).as_str() {
        "multipart/form-data" => {
            let mut form = Multipart::from_request(req, &())
                .await
                .map_err(|e| too_large(e.status(), e.body_text()))?;
            while let Some(field) = form.next_field().await.map_err(|e| too_large(e.status(), e.body_text()))? {
                if field.name() == Some("file") {
                    return field.bytes().await.map_err(|e| too_large(e.status(), e.body_text()));
                }
            }
            Err(ApiError::BadRequest("missing form field \"file\"".into()))
        }
        "application/pdf" | "application/octet-stream" => Bytes::from_request(req, &())
            .await
            .map_err(|e| too_large(e.status(), e.body_text())),
        other => Err(ApiError::UnsupportedMediaType(format!(
            "expected multipart/form-data or application/pdf, got {other:?}"
        ))),
    }
}

/// The upload lives only for the duration of this call.
pub async fn review(State(state): State<Arc<AppState>>, req: Request) -> AppResult<Json<ReviewReport>> {
    let pdf = read_upload(req).await?;
    if pdf.len() > MAX_UPLOAD_BYTES {
        return Err(ApiError::PayloadTooLarge);
    }
    if !state.chat_provider.is_configured() {
        // Still reject unreadable files first, so callers see the real problem.
        heyfriend_core::resume::extract_text(&pdf).map_err(ReviewError::from)?;
        return Err(ApiError::degraded("resume review", "no credentials"));
    }
    let report = review_resume(&pdf, state.chat_provider.as_ref(), &state.model_id, state.provider_timeout).await?;
    Ok(Json(report))
}

impl From<InterviewError> for ApiError {
    fn from(e: InterviewError) -> Self {
        match e {
            InterviewError::UnknownSession => ApiError::NotFound(e.to_string()),
            InterviewError::Ended | InterviewError::NoTurns => ApiError::Conflict(e.to_string()),
            InterviewError::Bank(_) => ApiError::Internal(e.to_string()),
            _ => ApiError::BadRequest(e.to_string()),
        }
    }
}

#[derive(Serialize)]
pub struct Questions {
    questions: Vec<InterviewQuestion>,
}

pub async fn questions(State(state): State<Arc<AppState>>) -> Json<Questions> {
    Json(Questions {
        questions: state.interview.bank().questions().to_vec(),
    })
}

fn interview_available(state: &AppState) -> AppResult<()> {
    if state.chat_provider.is_configured() {
        Ok(())
    } else {
        Err(ApiError::degraded("interview practice", "no credentials"))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartBody {
    question_id: String,
}

pub async fn start_interview(
    State(state): State<Arc<AppState>>,
    ApiJson(body): ApiJson<StartBody>,
) -> AppResult<(StatusCode, Json<InterviewSession>)> {
    interview_available(&state)?;
    let session = state.interview.start_interview(&body.question_id)?;
    Ok((StatusCode::CREATED, Json(session)))
}

pub async fn get_interview(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> AppResult<Json<InterviewSession>> {
    Ok(Json(state.interview.session(&path_session(&id)?).await?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TurnBody {
    session_id: String,
    transcript: String,
}

pub async fn turn(State(state): State<Arc<AppState>>, ApiJson(body): ApiJson<TurnBody>) -> AppResult<Json<InterviewTurn>> {
    let id = body_session(&body.session_id)?;
    interview_available(&state)?;
    Ok(Json(state.interview.submit_turn(&id, &body.transcript).await?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndBody {
    session_id: String,
}

#[derive(Serialize)]
pub struct Ended {
    summary: InterviewSummary,
    session: InterviewSession,
}

pub async fn end_interview(State(state): State<Arc<AppState>>, ApiJson(body): ApiJson<EndBody>) -> AppResult<Json<Ended>> {
    let id = body_session(&body.session_id)?;
    let summary = state.interview.end_interview(&id).await?;
    let session = state.interview.session(&id).await?;
    Ok(Json(Ended { summary, session }))
}
