mod career;
mod chat;
mod content;
mod health;
mod metrics;
mod resume;

use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{FromRequest, FromRequestParts, Request};
use axum::http::request::Parts;
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{middleware, Json, Router};
use heyfriend_core::{Language, SessionId};
use serde::de::DeserializeOwned;
use tower_http::services::ServeDir;

use crate::error::{envelope, ApiError};
use crate::state::AppState;

type AppResult<T> = Result<T, ApiError>;

/// JSON body whose rejections use the error envelope.
pub struct ApiJson<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for ApiJson<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(ApiJson(v)),
            Err(JsonRejection::MissingJsonContentType(_)) => {
                Err(ApiError::UnsupportedMediaType("expected application/json".into()))
            }
            Err(e) if e.status() == StatusCode::PAYLOAD_TOO_LARGE => Err(ApiError::PayloadTooLarge),
            Err(e) => Err(ApiError::BadRequest(e.body_text())),
        }
    }
}

/// Query string whose rejections use the error envelope.
pub struct ApiQuery<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequestParts<S> for ApiQuery<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, Self::Rejection> {
        axum::extract::Query::<T>::from_request_parts(parts, state)
            .await
            .map(|q| ApiQuery(q.0))
            .map_err(|e: QueryRejection| ApiError::BadRequest(e.body_text()))
    }
}

fn language(raw: Option<&str>) -> AppResult<Language> {
    raw.unwrap_or("en")
        .parse()
        .map_err(|e: heyfriend_core::lang::UnsupportedLanguage| ApiError::BadRequest(e.to_string()))
}

/// Session ids in paths: anything malformed cannot name a session.
fn path_session(raw: &str) -> AppResult<SessionId> {
    raw.parse().map_err(|_| ApiError::NotFound("unknown session".into()))
}

/// Session ids in bodies are caller input, so malformed ones are a 400.
fn body_session(raw: &str) -> AppResult<SessionId> {
    raw.parse().map_err(|_| ApiError::BadRequest("malformed session id".into()))
}

async fn not_found() -> ApiError {
    ApiError::NotFound("no such route".into())
}

pub fn router(state: Arc<AppState>) -> Router {
    let api = Router::new()
        .route("/healthz", get(health::healthz))
        .route("/api/chat/session", post(chat::create_session))
        .route("/api/chat/{id}", get(chat::get_session))
        .route("/api/chat/{id}/message", post(chat::message))
        .route("/api/faq", get(content::faq))
        .route("/api/mindfulness", get(content::mindfulness))
        .route("/api/phrases", get(content::phrases))
        .route("/api/translate", post(content::translate))
        .route("/api/locator", get(content::locator))
        .route("/api/career/occupations", get(career::occupations))
        .route("/api/career/kinds", get(career::kinds))
        .route("/api/career/{kind}", get(career::query))
        .route("/api/resume/build", post(resume::build))
        .route("/api/resume/review", post(resume::review).layer(resume::upload_limit()))
        .route("/api/interview/questions", get(resume::questions))
        .route("/api/interview/session", post(resume::start_interview))
        .route("/api/interview/session/{id}", get(resume::get_interview))
        .route("/api/interview/turn", post(resume::turn))
        .route("/api/interview/end", post(resume::end_interview))
        .route("/api/metrics/session", post(metrics::new_session))
        .route("/api/metrics/event", post(metrics::event).layer(metrics::event_limit()))
        .route("/api/metrics/report", get(metrics::report));

    let api = match &state.audio_dir {
        Some(dir) => api.nest_service("/audio", ServeDir::new(dir)),
        None => api,
    };
    let api = match &state.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir).fallback(axum::routing::any(not_found))),
        None => api.fallback(not_found),
    };
    api.layer(middleware::from_fn_with_state(state.clone(), envelope))
        .with_state(state)
}
