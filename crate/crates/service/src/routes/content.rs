use std::sync::Arc;

use axum::extract::State;
use axum::Json;
use heyfriend_core::content::{ContentLookupError, FaqItem, MindfulnessView, FAQ_CATEGORIES, MINDFULNESS_SECTIONS};
use heyfriend_core::translator::{translate_to_english, LookupError, PhraseItem, TranslationError, TranslationRequest};
use serde::{Deserialize, Serialize};

use super::{language, ApiJson, ApiQuery, AppResult};
use crate::error::ApiError;
use crate::state::AppState;

impl From<ContentLookupError> for ApiError {
    fn from(e: ContentLookupError) -> Self {
        match e {
            ContentLookupError::Language(_) => ApiError::BadRequest(e.to_string()),
            _ => ApiError::NotFound(e.to_string()),
        }
    }
}

impl From<LookupError> for ApiError {
    fn from(e: LookupError) -> Self {
        match e {
            LookupError::Language(_) => ApiError::BadRequest(e.to_string()),
            LookupError::UnknownCategory(_) => ApiError::NotFound(e.to_string()),
        }
    }
}

#[derive(Deserialize)]
pub struct CategoryQuery {
    category: Option<String>,
    lang: Option<String>,
}

#[derive(Serialize)]
pub struct Group<T> {
    category: String,
    items: Vec<T>,
}

#[derive(Serialize)]
pub struct Listing<T> {
    lang: &'static str,
    groups: Vec<Group<T>>,
}

/// One group when a category is named, otherwise every group in order.
fn listing<T, E>(
    q: &CategoryQuery,
    all: impl IntoIterator<Item = String>,
    fetch: impl Fn(&str, &str) -> Result<Vec<T>, E>,
) -> AppResult<Listing<T>>
where
    ApiError: From<E>,
{
    let lang = language(q.lang.as_deref())?;
    let categories: Vec<String> = match &q.category {
        Some(c) => vec![c.clone()],
        None => all.into_iter().collect(),
    };
    let groups = categories
        .into_iter()
        .map(|category| {
            let items = fetch(&category, lang.code())?;
            Ok(Group { category, items })
        })
        .collect::<Result<Vec<_>, E>>()?;
    Ok(Listing {
        lang: lang.code(),
        groups,
    })
}

pub async fn faq(
    State(state): State<Arc<AppState>>,
    ApiQuery(q): ApiQuery<CategoryQuery>,
) -> AppResult<Json<Listing<FaqItem>>> {
    let all = FAQ_CATEGORIES.iter().map(|c| c.to_string());
    Ok(Json(listing(&q, all, |c, l| state.faq.list_faq(c, l))?))
}

#[derive(Deserialize)]
pub struct SectionQuery {
    section: Option<String>,
    lang: Option<String>,
}

pub async fn mindfulness(
    State(state): State<Arc<AppState>>,
    ApiQuery(q): ApiQuery<SectionQuery>,
) -> AppResult<Json<Listing<MindfulnessView>>> {
    let q = CategoryQuery {
        category: q.section,
        lang: q.lang,
    };
    let all = MINDFULNESS_SECTIONS.iter().map(|c| c.to_string());
    Ok(Json(listing(&q, all, |c, l| state.mindfulness.list_mindfulness(c, l))?))
}

#[derive(Serialize)]
pub struct PhraseView {
    #[serde(flatten)]
    item: PhraseItem,
    /// Same-origin URL for the audio asset.
    audio_url: String,
}

pub async fn phrases(
    State(state): State<Arc<AppState>>,
    ApiQuery(q): ApiQuery<CategoryQuery>,
) -> AppResult<Json<Listing<PhraseView>>> {
    let all = state.phrases.categories().to_vec();
    let listing = listing(&q, all, |c, l| {
        state.phrases.get_phrases(c, l).map(|items| {
            items
                .into_iter()
                .map(|item| PhraseView {
                    audio_url: format!("/{}", item.audio.trim_start_matches('/')),
                    item,
                })
                .collect()
        })
    })?;
    Ok(Json(listing))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslateBody {
    source: String,
    text: String,
}

#[derive(Serialize)]
pub struct Translation {
    source: &'static str,
    target: &'static str,
    translation: String,
}

pub async fn translate(
    State(state): State<Arc<AppState>>,
    ApiJson(body): ApiJson<TranslateBody>,
) -> AppResult<Json<Translation>> {
    let request = TranslationRequest::new(&body.source, body.text).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    if !state.translator.is_configured() {
        return Err(ApiError::degraded("translation", "no credentials"));
    }
    let translation = translate_to_english(state.translator.as_ref(), &request)
        .await
        .map_err(|e| match e {
            TranslationError::Unavailable(reason) => ApiError::degraded("translation", reason),
            other => ApiError::BadRequest(other.to_string()),
        })?;
    Ok(Json(Translation {
        source: request.source().code(),
        target: "en",
        translation,
    }))
}

#[derive(Deserialize)]
pub struct LocatorQuery {
    category: Option<String>,
}

#[derive(Serialize)]
pub struct LocatorView {
    id: String,
    name: String,
    search_phrase: String,
    embed_url: String,
}

#[derive(Serialize)]
pub struct LocatorListing {
    categories: Vec<LocatorView>,
}

pub async fn locator(
    State(state): State<Arc<AppState>>,
    ApiQuery(q): ApiQuery<LocatorQuery>,
) -> AppResult<Json<LocatorListing>> {
    let wanted: Vec<_> = match &q.category {
        Some(c) => {
            state.locator.locator_query(c)?;
            state
                .locator
                .categories()
                .iter()
                .filter(|x| &x.id == c || &x.name == c)
                .collect()
        }
        None => state.locator.categories().iter().collect(),
    };
    let categories = wanted
        .into_iter()
        .map(|c| {
            Ok(LocatorView {
                id: c.id.clone(),
                name: c.name.clone(),
                search_phrase: c.search_phrase.clone(),
                embed_url: state.locator.locator_query(&c.id)?.to_string(),
            })
        })
        .collect::<Result<_, ContentLookupError>>()?;
    Ok(Json(LocatorListing { categories }))
}
