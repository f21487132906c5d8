//! HTTP service for the community resource assistant: chat, translation,
//! career data, resume tools, and usage metrics behind one JSON API.

pub mod config;
pub mod error;
pub mod routes;
pub mod state;

use std::sync::Arc;

use axum::Router;

pub use config::ServiceConfig;
pub use state::{AppState, Mode};

/// Full application router over already-built state.
pub fn app(state: Arc<AppState>) -> Router {
    routes::router(state)
}
