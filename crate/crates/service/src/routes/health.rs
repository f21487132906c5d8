use std::collections::BTreeMap;
use std::sync::Arc;

use axum::extract::State;
use axum::Json;
use serde::Serialize;

use crate::state::{AppState, Mode};

#[derive(Serialize)]
pub struct Health {
    status: &'static str,
    mode: Mode,
    components: BTreeMap<&'static str, &'static str>,
}

fn readiness(configured: bool) -> &'static str {
    if configured {
        "up"
    } else {
        "degraded"
    }
}

/// The service is up whenever it is serving; providers without
/// credentials show as degraded components.
pub async fn healthz(State(state): State<Arc<AppState>>) -> Json<Health> {
    let chat = readiness(state.chat_provider.is_configured());
    let components = BTreeMap::from([
        ("content", "up"),
        ("chat", chat),
        ("translation", readiness(state.translator.is_configured())),
        ("career", readiness(state.career_client.is_configured())),
        ("resume_builder", "up"),
        ("resume_review", chat),
        ("interview", chat),
        ("metrics", "up"),
    ]);
    Json(Health {
        status: "up",
        mode: state.mode,
        components,
    })
}
