use std::collections::HashMap;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::Json;
use chrono::{DateTime, Utc};
use heyfriend_core::career::{fetch, CareerError, CareerKind, CareerParams, OccupationEntry, Param, RawCareerQuery};
use serde::Serialize;

use super::{ApiQuery, AppResult};
use crate::error::ApiError;
use crate::state::AppState;

impl From<CareerError> for ApiError {
    fn from(e: CareerError) -> Self {
        match e {
            _ if e.is_validation() => ApiError::BadRequest(e.to_string()),
            CareerError::NotConfigured => ApiError::degraded("career", e),
            _ => ApiError::Upstream(e.to_string()),
        }
    }
}

#[derive(Serialize)]
pub struct Occupations {
    occupations: Vec<OccupationEntry>,
}

pub async fn occupations(State(state): State<Arc<AppState>>) -> Json<Occupations> {
    Json(Occupations {
        occupations: state.occupations.entries().to_vec(),
    })
}

#[derive(Serialize)]
pub struct KindView {
    kind: CareerKind,
    title: &'static str,
    params: Vec<Param>,
}

#[derive(Serialize)]
pub struct Kinds {
    kinds: Vec<KindView>,
}

pub async fn kinds() -> Json<Kinds> {
    let kinds = CareerKind::ALL
        .into_iter()
        .map(|kind| KindView {
            kind,
            title: kind.display_name(),
            params: kind.signature().to_vec(),
        })
        .collect();
    Json(Kinds { kinds })
}

#[derive(Serialize)]
pub struct DatasetView {
    kind: CareerKind,
    title: &'static str,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
    fetched_at: DateTime<Utc>,
}

pub async fn query(
    State(state): State<Arc<AppState>>,
    Path(kind): Path<String>,
    ApiQuery(mut raw): ApiQuery<HashMap<String, String>>,
) -> AppResult<Json<DatasetView>> {
    let kind: CareerKind = kind.parse().map_err(|e: heyfriend_core::career::UnknownKind| ApiError::NotFound(e.to_string()))?;
    // lang only picks the error message language
    raw.remove("lang");
    let raw: RawCareerQuery = serde_json::to_value(raw)
        .and_then(serde_json::from_value)
        .map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let params = CareerParams::from_raw(kind, &raw, &state.occupations)?;
    let data = fetch(kind, &params, state.career_client.as_ref(), &state.career_cache).await?;
    Ok(Json(DatasetView {
        kind,
        title: kind.display_name(),
        columns: data.columns,
        rows: data.rows,
        fetched_at: data.fetched_at,
    }))
}
