//! Curated question-answer corpus and verbatim-first query matching.
//!
//! The corpus file is line-delimited JSON, one record per line:
//!
//! ```text
//! {"id":"q-interview","category":"employment","language":"en","question":"...","answer":"..."}
//! ```
//!
//! Answers keep their embedded newlines through JSON string escaping and are
//! stored exactly as decoded. Nothing in this module rewrites answer text.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const DEFAULT_MATCH_THRESHOLD: f64 = 0.75;

#[derive(Debug, thiserror::Error)]
pub enum QaError {
    #[error("failed to read corpus {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus contains no records")]
    Empty,
    #[error("corpus line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("corpus line {line}: duplicate id {id:?}")]
    DuplicateId { line: usize, id: String },
    #[error("corpus line {line}: record {id:?} has an empty {field}")]
    EmptyField {
        line: usize,
        id: String,
        field: &'static str,
    },
    #[error("corpus line {line}: record {id:?} repeats the question of {other:?}")]
    DuplicateQuestion {
        line: usize,
        id: String,
        other: String,
    },
    #[error("unknown corpus id {0:?}")]
    UnknownId(String),
    #[error("match threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QaCategory {
    WellBeing,
    Employment,
    Navigation,
    Family,
    ChicagoServices,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QaPair {
    pub id: String,
    pub category: QaCategory,
    #[serde(default = "default_language")]
    pub language: String,
    pub question: String,
    pub answer: String,
    /// Marks authored stand-in content awaiting community review.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub placeholder: bool,
}

fn default_language() -> String {
    "en".to_string()
}

/// Similarity cut-off for a verbatim hit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Threshold(f64);

impl Threshold {
    pub fn new(value: f64) -> Result<Self, QaError> {
        if (0.0..=1.0).contains(&value) {
            Ok(Threshold(value))
        } else {
            Err(QaError::InvalidThreshold(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold(DEFAULT_MATCH_THRESHOLD)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    VerbatimHit,
    Miss,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchResult {
    pub verdict: Verdict,
    pub pair_id: Option<String>,
    pub score: f64,
}

impl MatchResult {
    pub fn is_hit(&self) -> bool {
        self.verdict == Verdict::VerbatimHit
    }
}

/// The loaded, validated corpus. Immutable after load.
#[derive(Debug, Clone)]
pub struct QaCorpus {
    pairs: Vec<QaPair>,
    question_tokens: Vec<HashSet<String>>,
    by_id: HashMap<String, usize>,
    version: String,
    source_path: PathBuf,
    raw: String,
}

impl QaCorpus {
    pub fn pairs(&self) -> &[QaPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Short content hash of the file the corpus was loaded from.
    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn source_path(&self) -> &Path {
        &self.source_path
    }

    /// The corpus file exactly as read, used as grounding for generation.
    pub fn raw_text(&self) -> &str {
        &self.raw
    }

    pub fn get(&self, id: &str) -> Option<&QaPair> {
        self.by_id.get(id).map(|&i| &self.pairs[i])
    }

    pub fn get_answer(&self, pair_id: &str) -> Result<&str, QaError> {
        self.get(pair_id)
            .map(|p| p.answer.as_str())
            .ok_or_else(|| QaError::UnknownId(pair_id.to_string()))
    }

    /// Scores `query` against every question and reports the best one.
    ///
    /// The score is the token-set Jaccard index of the normalized texts.
    /// Equal scores resolve to the earliest pair in file order.
    pub fn match_query(&self, query: &str, threshold: Threshold) -> MatchResult {
        let query_tokens = token_set(query);
        if query_tokens.is_empty() {
            return MatchResult {
                verdict: Verdict::Miss,
                pair_id: None,
                score: 0.0,
            };
        }

        let mut best: Option<(usize, f64)> = None;
        for (idx, question) in self.question_tokens.iter().enumerate() {
            let score = jaccard(&query_tokens, question);
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((idx, score));
            }
        }

        match best {
            Some((idx, score)) if score >= threshold.value() => MatchResult {
                verdict: Verdict::VerbatimHit,
                pair_id: Some(self.pairs[idx].id.clone()),
                score,
            },
            Some((_, score)) => MatchResult {
                verdict: Verdict::Miss,
                pair_id: None,
                score,
            },
            None => MatchResult {
                verdict: Verdict::Miss,
                pair_id: None,
                score: 0.0,
            },
        }
    }
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<QaCorpus, QaError> {
    let path = path.as_ref();
    let raw = std::fs::read_to_string(path).map_err(|source| QaError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_corpus(raw, path)
}

pub fn parse_corpus(raw: String, source_path: impl Into<PathBuf>) -> Result<QaCorpus, QaError> {
    let mut pairs = Vec::new();
    let mut by_id = HashMap::new();
    let mut seen_questions: HashMap<Vec<String>, String> = HashMap::new();
    let mut question_tokens = Vec::new();

    for (idx, line) in raw.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let pair: QaPair = serde_json::from_str(line).map_err(|e| QaError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        for (field, value) in [
            ("id", &pair.id),
            ("question", &pair.question),
            ("answer", &pair.answer),
        ] {
            if value.trim().is_empty() {
                return Err(QaError::EmptyField {
                    line: line_no,
                    id: pair.id.clone(),
                    field,
                });
            }
        }
        if by_id.contains_key(&pair.id) {
            return Err(QaError::DuplicateId {
                line: line_no,
                id: pair.id,
            });
        }

        let tokens = token_set(&pair.question);
        let mut key: Vec<String> = tokens.iter().cloned().collect();
        key.sort();
        if let Some(other) = seen_questions.get(&key) {
            return Err(QaError::DuplicateQuestion {
                line: line_no,
                id: pair.id,
                other: other.clone(),
            });
        }
        seen_questions.insert(key, pair.id.clone());

        by_id.insert(pair.id.clone(), pairs.len());
        question_tokens.push(tokens);
        pairs.push(pair);
    }

    if pairs.is_empty() {
        return Err(QaError::Empty);
    }

    Ok(QaCorpus {
        pairs,
        question_tokens,
        by_id,
        version: content_version(&raw),
        source_path: source_path.into(),
        raw,
    })
}

fn content_version(raw: &str) -> String {
    use sha2::{Digest, Sha256};
    let digest = Sha256::digest(raw.as_bytes());
    hex::encode(&digest[..6])
}

/// Lowercases, drops punctuation and symbols, and collapses whitespace.
///
/// Lowercasing happens first: some uppercase letters lowercase to a letter
/// plus a combining mark, and the mark must be stripped in the same pass for
/// the function to be idempotent.
pub fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for ch in text.chars().flat_map(char::to_lowercase) {
        if ch.is_whitespace() {
            pending_space = !out.is_empty();
        } else if ch.is_alphanumeric() {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.push(ch);
        }
    }
    out
}

pub fn tokens(text: &str) -> Vec<String> {
    normalize(text).split(' ').filter(|t| !t.is_empty()).map(str::to_owned).collect()
}

fn token_set(text: &str) -> HashSet<String> {
    tokens(text).into_iter().collect()
}

fn jaccard(a: &HashSet<String>, b: &HashSet<String>) -> f64 {
    let shared = a.intersection(b).count();
    let union = a.len() + b.len() - shared;
    if union == 0 {
        0.0
    } else {
        shared as f64 / union as f64
    }
}
