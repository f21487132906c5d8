use std::sync::Arc;

use axum::extract::{Request, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::middleware::Next;
use axum::response::{IntoResponse, Response};
use axum::Json;
use heyfriend_core::Language;
use serde::Serialize;

use crate::state::AppState;

pub const REQUEST_ID_HEADER: &str = "x-request-id";

/// Per-request correlation id, available to handlers as an extension.
#[derive(Debug, Clone)]
pub struct RequestId(pub String);

/// Error raised by handlers. The response body is filled in by
/// [`envelope`], which knows the request id and the caller's language.
#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("conflict: {0}")]
    Conflict(String),
    #[error("payload too large")]
    PayloadTooLarge,
    #[error("unsupported media type: {0}")]
    UnsupportedMediaType(String),
    /// A provider is missing credentials or failed. The reason is logged,
    /// never returned, since provider errors can carry request details.
    #[error("{component} unavailable: {reason}")]
    Degraded { component: &'static str, reason: String },
    /// An upstream data source answered badly. Logged, not returned.
    #[error("upstream failure: {0}")]
    Upstream(String),
    #[error("render failed")]
    RenderFailed { diagnostics: Option<String> },
    #[error("internal error: {0}")]
    Internal(String),
}

impl ApiError {
    pub fn degraded(component: &'static str, reason: impl ToString) -> Self {
        ApiError::Degraded {
            component,
            reason: reason.to_string(),
        }
    }

    fn parts(&self) -> (StatusCode, &'static str, Option<String>) {
        match self {
            ApiError::BadRequest(d) => (StatusCode::BAD_REQUEST, "bad_request", Some(d.clone())),
            ApiError::NotFound(d) => (StatusCode::NOT_FOUND, "not_found", Some(d.clone())),
            ApiError::Conflict(d) => (StatusCode::CONFLICT, "conflict", Some(d.clone())),
            ApiError::PayloadTooLarge => (StatusCode::PAYLOAD_TOO_LARGE, "payload_too_large", None),
            ApiError::UnsupportedMediaType(d) => {
                (StatusCode::UNSUPPORTED_MEDIA_TYPE, "unsupported_media_type", Some(d.clone()))
            }
            ApiError::Degraded { component, .. } => (
                StatusCode::SERVICE_UNAVAILABLE,
                "service_degraded",
                Some(format!("{component} is unavailable")),
            ),
            ApiError::Upstream(_) => (StatusCode::BAD_GATEWAY, "upstream", None),
            ApiError::RenderFailed { diagnostics } => {
                (StatusCode::INTERNAL_SERVER_ERROR, "render_failed", diagnostics.clone())
            }
            ApiError::Internal(_) => (StatusCode::INTERNAL_SERVER_ERROR, "internal", None),
        }
    }
}

/// Marker left on error responses for [`envelope`] to render.
#[derive(Debug, Clone)]
struct ErrorInfo {
    code: &'static str,
    detail: Option<String>,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        match &self {
            ApiError::Degraded { .. } | ApiError::Upstream(_) | ApiError::Internal(_) => tracing::warn!(error = %self, "request failed"),
            ApiError::RenderFailed { diagnostics } => {
                tracing::warn!(diagnostics = diagnostics.as_deref().unwrap_or(""), "render failed")
            }
            _ => tracing::debug!(error = %self, "request rejected"),
        }
        let (status, code, detail) = self.parts();
        let mut res = status.into_response();
        res.extensions_mut().insert(ErrorInfo { code, detail });
        res
    }
}

#[derive(Serialize)]
struct EnvelopeBody<'a> {
    error: ErrorBody<'a>,
    request_id: &'a str,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<&'a str>,
}

fn code_for_status(status: StatusCode) -> &'static str {
    match status {
        StatusCode::NOT_FOUND => "not_found",
        StatusCode::METHOD_NOT_ALLOWED => "method_not_allowed",
        StatusCode::PAYLOAD_TOO_LARGE => "payload_too_large",
        StatusCode::UNSUPPORTED_MEDIA_TYPE => "unsupported_media_type",
        StatusCode::CONFLICT => "conflict",
        StatusCode::SERVICE_UNAVAILABLE => "service_degraded",
        StatusCode::BAD_GATEWAY => "upstream",
        s if s.is_client_error() => "bad_request",
        _ => "internal",
    }
}

fn request_language(query: Option<&str>) -> Language {
    query
        .into_iter()
        .flat_map(|q| q.split('&'))
        .filter_map(|pair| pair.split_once('='))
        .find(|(k, _)| *k == "lang")
        .and_then(|(_, v)| v.parse().ok())
        .unwrap_or(Language::En)
}

fn acceptable_id(v: &HeaderValue) -> Option<String> {
    let s = v.to_str().ok()?;
    let ok = !s.is_empty() && s.len() <= 64 && s.bytes().all(|b| b.is_ascii_alphanumeric() || b"-_.".contains(&b));
    ok.then(|| s.to_string())
}

/// Assigns the request id and renders every error response into the
/// shared envelope, including the router's own 404/405/413 replies.
pub async fn envelope(State(state): State<Arc<AppState>>, mut req: Request, next: Next) -> Response {
    let request_id = req
        .headers()
        .get(REQUEST_ID_HEADER)
        .and_then(acceptable_id)
        .unwrap_or_else(|| uuid::Uuid::new_v4().simple().to_string());
    let lang = request_language(req.uri().query());
    req.extensions_mut().insert(RequestId(request_id.clone()));

    let mut res = next.run(req).await;
    let status = res.status();
    let info = res.extensions_mut().remove::<ErrorInfo>();
    let is_json = res
        .headers()
        .get(header::CONTENT_TYPE)
        .is_some_and(|v| v.as_bytes().starts_with(b"application/json"));
    let failed = status.is_client_error() || status.is_server_error();
    let info = info.or_else(|| {
        (failed && !is_json).then(|| ErrorInfo {
            code: code_for_status(status),
            detail: None,
        })
    });
    if let Some(info) = info {
        let key = format!("error.{}", info.code);
        let message = state
            .messages
            .text(&key, lang)
            .or_else(|| state.messages.text("error.internal", lang))
            .unwrap_or("error");
        let body = EnvelopeBody {
            error: ErrorBody {
                code: info.code,
                message,
                detail: info.detail.as_deref(),
            },
            request_id: &request_id,
        };
        let headers = std::mem::take(res.headers_mut());
        res = (status, Json(body)).into_response();
        for (name, value) in headers.iter() {
            if name != header::CONTENT_TYPE && name != header::CONTENT_LENGTH {
                res.headers_mut().append(name.clone(), value.clone());
            }
        }
    }
    if let Ok(v) = HeaderValue::from_str(&request_id) {
        res.headers_mut().insert(REQUEST_ID_HEADER, v);
    }
    res
}
