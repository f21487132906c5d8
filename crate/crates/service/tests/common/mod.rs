#![allow(dead_code)]

use std::path::PathBuf;

use axum::body::{to_bytes, Body};
use axum::http::{header, HeaderMap, Method, Request, StatusCode};
use axum::Router;
use heyfriend_service::{app, AppState, ServiceConfig};
use serde_json::Value;
use tempfile::TempDir;
use tower::ServiceExt;

pub fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

/// Offline-fixture app over the shipped content, logging to a temp dir.
pub struct TestApp {
    pub router: Router,
    pub dir: TempDir,
}

pub async fn offline_app() -> TestApp {
    let dir = tempfile::tempdir().unwrap();
    let mut config = ServiceConfig::for_data_dir(data(""));
    config.offline_fixtures = Some(data("fixtures"));
    config.metrics.event_log = dir.path().join("events.jsonl");
    let state = AppState::build(&config).await.expect("offline state builds");
    TestApp { router: app(state), dir }
}

/// Live mode with no credentials: every provider is unconfigured.
pub async fn unconfigured_app() -> TestApp {
    let dir = tempfile::tempdir().unwrap();
    let mut config = ServiceConfig::for_data_dir(data(""));
    config.metrics.event_log = dir.path().join("events.jsonl");
    let state = AppState::build(&config).await.expect("live state builds");
    TestApp { router: app(state), dir }
}

pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body)
            .unwrap_or_else(|e| panic!("body is not JSON ({e}): {}", String::from_utf8_lossy(&self.body)))
    }

    pub fn content_type(&self) -> &str {
        self.headers
            .get(header::CONTENT_TYPE)
            .and_then(|v| v.to_str().ok())
            .unwrap_or("")
    }
}

impl TestApp {
    pub async fn send(&self, req: Request<Body>) -> Reply {
        let res = self.router.clone().oneshot(req).await.unwrap();
        let status = res.status();
        let headers = res.headers().clone();
        let body = to_bytes(res.into_body(), usize::MAX).await.unwrap().to_vec();
        Reply { status, headers, body }
    }

    pub async fn get(&self, uri: &str) -> Reply {
        self.send(Request::get(uri).body(Body::empty()).unwrap()).await
    }

    pub async fn post_json(&self, uri: &str, body: Value) -> Reply {
        self.send(
            Request::builder()
                .method(Method::POST)
                .uri(uri)
                .header(header::CONTENT_TYPE, "application/json")
                .body(Body::from(body.to_string()))
                .unwrap(),
        )
        .await
    }

    pub async fn post_bytes(&self, uri: &str, content_type: &str, body: Vec<u8>) -> Reply {
        self.send(
            Request::builder()
                .method(Method::POST)
                .uri(uri)
                .header(header::CONTENT_TYPE, content_type)
                .body(Body::from(body))
                .unwrap(),
        )
        .await
    }

    pub async fn upload_pdf(&self, uri: &str, pdf: &[u8]) -> Reply {
        let boundary = "XyZboundary42";
        let mut body = format!(
            "--{boundary}\r\nContent-Disposition: form-data; name=\"file\"; filename=\"resume.pdf\"\r\nContent-Type: application/pdf\r\n\r\n"
        )
        .into_bytes();
        body.extend_from_slice(pdf);
        body.extend_from_slice(format!("\r\n--{boundary}--\r\n").as_bytes());
        self.post_bytes(uri, &format!("multipart/form-data; boundary={boundary}"), body).await
    }
}

/// Checks the shared error shape and returns the code.
pub fn error_code(r: &Reply) -> String {
    let v = r.json();
    let err = v["error"].as_object().unwrap_or_else(|| panic!("no error envelope: {v}"));
    assert!(err["message"].as_str().is_some_and(|m| !m.is_empty()), "{v}");
    let id = v["request_id"].as_str().expect("request_id in body");
    assert_eq!(r.headers.get("x-request-id").unwrap().to_str().unwrap(), id);
    err["code"].as_str().unwrap().to_string()
}
