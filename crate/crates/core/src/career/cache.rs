use std::sync::{Arc, Mutex};

use chrono::{DateTime, Utc};
use dashmap::DashMap;
use serde_json::Value;

use super::client::{CareerClient, ClientError};
use super::{build_request, CareerDataset, CareerError, CareerKind, CareerParams};

pub const DEFAULT_CACHE_TTL: std::time::Duration = std::time::Duration::from_secs(24 * 60 * 60);

pub trait Clock: Send + Sync {
    fn now(&self) -> DateTime<Utc>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<Utc> {
        Utc::now()
    }
}

/// Clock that only moves when told to.
#[derive(Debug, Clone)]
pub struct ManualClock(Arc<Mutex<DateTime<Utc>>>);

impl ManualClock {
    pub fn new(start: DateTime<Utc>) -> Self {
        ManualClock(Arc::new(Mutex::new(start)))
    }

    pub fn advance(&self, by: chrono::Duration) {
        *self.0.lock().unwrap_or_else(|e| e.into_inner()) += by;
    }
}

impl Clock for ManualClock {
    fn now(&self) -> DateTime<Utc> {
        *self.0.lock().unwrap_or_else(|e| e.into_inner())
    }
}

/// TTL cache of parsed datasets keyed by [`super::RequestDescriptor::cache_key`].
///
/// Misses are single-flight: concurrent fetches of one key queue on a
/// per-key lock, the first performs the upstream call, and the rest are
/// served from the cache once it lands. Failures are not cached, so
/// queued callers retry in turn.
pub struct CareerCache {
    ttl: chrono::Duration,
    clock: Arc<dyn Clock>,
    entries: DashMap<String, CareerDataset>,
    inflight: DashMap<String, Arc<tokio::sync::Mutex<()>>>,
}

impl CareerCache {
    pub fn new(ttl: std::time::Duration) -> Self {
        Self::with_clock(ttl, Arc::new(SystemClock))
    }

    pub fn with_clock(ttl: std::time::Duration, clock: Arc<dyn Clock>) -> Self {
        CareerCache {
            ttl: chrono::Duration::from_std(ttl).unwrap_or(chrono::Duration::MAX),
            clock,
            entries: DashMap::new(),
            inflight: DashMap::new(),
        }
    }

    pub fn get(&self, key: &str) -> Option<CareerDataset> {
        let now = self.clock.now();
        self.entries
            .get(key)
            .filter(|e| now.signed_duration_since(e.fetched_at) < self.ttl)
            .map(|e| e.value().clone())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn key_lock(&self, key: &str) -> Arc<tokio::sync::Mutex<()>> {
        self.inflight.entry(key.to_string()).or_default().clone()
    }
}

/// Validates, consults the cache, and on a miss calls the client once.
pub async fn fetch(
    kind: CareerKind,
    params: &CareerParams,
    client: &dyn CareerClient,
    cache: &CareerCache,
) -> Result<CareerDataset, CareerError> {
    let request = build_request(kind, params)?;
    let key = request.cache_key();
    if let Some(hit) = cache.get(&key) {
        return Ok(hit);
    }

    let lock = cache.key_lock(&key);
    let _guard = lock.lock().await;
    if let Some(hit) = cache.get(&key) {
        return Ok(hit);
    }

    let body = client.execute(&request).await.map_err(|e| match e {
        ClientError::NotConfigured => CareerError::NotConfigured,
        ClientError::Network(m) => CareerError::Network(m),
        ClientError::Status(status) => CareerError::Status { status },
    })?;
    let dataset = parse_dataset(kind, &body, cache.clock.now(), key.clone())?;
    cache.entries.insert(key, dataset.clone());
    Ok(dataset)
}

/// Turns a response body into a table.
///
/// Rows come from the kind's row location: an array of objects, or one
/// object for single-record responses. Nested objects flatten to dotted
/// column names, scalar arrays join with "; ", and columns keep first-seen
/// order across rows. Missing cells are empty strings.
pub fn parse_dataset(
    kind: CareerKind,
    body: &str,
    fetched_at: DateTime<Utc>,
    cache_key: String,
) -> Result<CareerDataset, CareerError> {
    let value: Value = serde_json::from_str(body).map_err(|e| CareerError::Parse(e.to_string()))?;
    let pointer = kind.rows_pointer();
    let target = value
        .pointer(pointer)
        .ok_or_else(|| CareerError::Parse(format!("missing {pointer}")))?;
    let records: Vec<&serde_json::Map<String, Value>> = match target {
        Value::Array(items) => items
            .iter()
            .map(|v| {
                v.as_object()
                    .ok_or_else(|| CareerError::Parse(format!("{pointer} holds a non-object row")))
            })
            .collect::<Result<_, _>>()?,
        Value::Object(obj) => vec![obj],
        _ => return Err(CareerError::Parse(format!("{pointer} is not a table"))),
    };

    let mut columns: Vec<String> = Vec::new();
    let mut flat_rows = Vec::with_capacity(records.len());
    for record in records {
        let mut cells = Vec::new();
        flatten("", record, &mut cells);
        for (name, _) in &cells {
            if !columns.contains(name) {
                columns.push(name.clone());
            }
        }
        flat_rows.push(cells);
    }
    let rows = flat_rows
        .into_iter()
        .map(|cells| {
            columns
                .iter()
                .map(|c| {
                    cells
                        .iter()
                        .find(|(n, _)| n == c)
                        .map(|(_, v)| v.clone())
                        .unwrap_or_default()
                })
                .collect()
        })
        .collect();

    Ok(CareerDataset {
        kind,
        columns,
        rows,
        fetched_at,
        cache_key,
    })
}

fn flatten(prefix: &str, obj: &serde_json::Map<String, Value>, out: &mut Vec<(String, String)>) {
    for (k, v) in obj {
        let name = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Object(inner) => flatten(&name, inner, out),
            other => out.push((name, cell(other))),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            items.iter().map(cell).collect::<Vec<_>>().join("; ")
        }
        Value::Array(_) | Value::Object(_) => v.to_string(),
    }
}
