use std::path::PathBuf;

use heyfriend_core::content::{
    FaqCatalog, LocatorCategory, Locator, MessageCatalog, MindfulnessKind, MindfulnessLibrary, DEFAULT_MAP_EMBED_URL,
    FAQ_CATEGORIES, MINDFULNESS_SECTIONS,
};
use heyfriend_core::translator::{
    load_phrase_bank, translate_to_english, FixtureTranslator, TranslationError, TranslationRequest,
    MAX_TRANSLATION_CHARS,
};
use heyfriend_core::Language;
use proptest::prelude::*;
use serde_json::Value;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn raw(rel: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(data(rel)).unwrap()).unwrap()
}

// Checked on the raw files, independent of the loaders.
fn has_four_languages(v: &Value) -> bool {
    ["en", "es", "fr", "ar"]
        .iter()
        .all(|l| v.get(l).and_then(Value::as_str).is_some_and(|s| !s.trim().is_empty()))
}

#[test]
fn phrase_bank_entries_carry_four_texts_and_four_audio_refs() {
    let file = raw("phrases.json");
    let entries = file["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    for e in entries {
        assert!(has_four_languages(&e["text"]), "{}", e["id"]);
        assert!(has_four_languages(&e["audio"]), "{}", e["id"]);
        for lang in ["en", "es", "fr", "ar"] {
            let audio = e["audio"][lang].as_str().unwrap();
            assert!(audio.starts_with(&format!("audio/{lang}/")), "{audio}");
        }
    }

    let bank = load_phrase_bank(data("phrases.json")).unwrap();
    assert_eq!(bank.entries().len(), entries.len());
    for category in bank.categories() {
        for lang in Language::ALL {
            let items = bank.get_phrases(category, lang.code()).unwrap();
            assert!(items.iter().all(|i| !i.text.is_empty() && !i.audio.is_empty()));
        }
    }
    assert!(bank.get_phrases("Greetings", "de").is_err());
}

#[test]
fn faq_entries_carry_four_variants() {
    let file = raw("faq.json");
    let entries = file["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    for e in entries {
        assert!(has_four_languages(&e["question"]), "{}", e["id"]);
        assert!(has_four_languages(&e["answer"]), "{}", e["id"]);
    }
    let catalog = FaqCatalog::load(data("faq.json")).unwrap();
    let mut served = 0;
    for category in FAQ_CATEGORIES {
        for lang in Language::ALL {
            served += catalog.list_faq(category, lang.code()).unwrap().len();
        }
    }
    assert_eq!(served, entries.len() * 4);
}

#[test]
fn written_invitations_carry_four_variants_and_videos_parse() {
    let file = raw("mindfulness.json");
    for item in file["items"].as_array().unwrap() {
        assert!(has_four_languages(&item["title"]), "{}", item["id"]);
        match item["kind"].as_str().unwrap() {
            "written-invitation" => assert!(has_four_languages(&item["body"]), "{}", item["id"]),
            "embedded-video" => {
                url::Url::parse(item["video_url"].as_str().unwrap()).unwrap();
            }
            other => panic!("unexpected kind {other}"),
        }
    }
    let library = MindfulnessLibrary::load(data("mindfulness.json")).unwrap();
    for section in MINDFULNESS_SECTIONS {
        for lang in Language::ALL {
            for view in library.list_mindfulness(section, lang.code()).unwrap() {
                match view.kind {
                    MindfulnessKind::WrittenInvitation => assert!(view.body.is_some()),
                    MindfulnessKind::EmbeddedVideo => assert!(view.video_url.is_some()),
                }
            }
        }
    }
}

#[test]
fn message_catalog_is_complete() {
    let catalog = MessageCatalog::load(data("messages.json")).unwrap();
    let file = raw("messages.json");
    let keys = file.as_object().unwrap();
    assert_eq!(catalog.keys().count(), keys.len());
    for (key, v) in keys {
        assert!(has_four_languages(v), "{key}");
    }
}

#[test]
fn shipped_locator_builds_near_me_queries() {
    let locator = Locator::load(data("locator.json"), DEFAULT_MAP_EMBED_URL).unwrap();
    assert_eq!(locator.categories().len(), 4);
    for c in locator.categories() {
        let url = locator.locator_query(&c.id).unwrap();
        let q: Vec<String> = url.query_pairs().filter(|(k, _)| k == "q").map(|(_, v)| v.into_owned()).collect();
        assert_eq!(q, [format!("{} near me", c.search_phrase)]);
    }
}

proptest! {
    #[test]
    fn locator_query_decodes_to_phrase_near_me(phrase in "[\\p{L}0-9 &+#%'=?/-]{1,40}") {
        prop_assume!(!phrase.trim().is_empty());
        let names = ["affordable grocery stores", "culturally specific grocery stores", "farmers markets", "food pantries"];
        let categories = names
            .iter()
            .enumerate()
            .map(|(i, n)| LocatorCategory {
                id: format!("c{i}"),
                name: n.to_string(),
                search_phrase: if i == 0 { phrase.clone() } else { n.to_string() },
            })
            .collect();
        let locator = Locator::new(categories, "https://maps.example.com/embed?output=embed&q=old").unwrap();
        let url = locator.locator_query("c0").unwrap();
        let q: Vec<String> = url.query_pairs().filter(|(k, _)| k == "q").map(|(_, v)| v.into_owned()).collect();
        prop_assert_eq!(q, vec![format!("{phrase} near me")]);
    }
}

#[tokio::test]
async fn translation_validates_before_the_provider_and_replays_fixtures() {
    let provider = FixtureTranslator::load(data("fixtures/translations.json")).unwrap();
    let bad = [
        TranslationRequest::new("en", "hello"),
        TranslationRequest::new("de", "hallo"),
        TranslationRequest::new("es", "   "),
        TranslationRequest::new("es", "a".repeat(MAX_TRANSLATION_CHARS + 1)),
    ];
    for r in &bad {
        assert!(r.as_ref().unwrap_err().is_validation());
    }
    assert_eq!(provider.calls(), 0);

    for ((source, text), expected) in provider.recorded() {
        let req = TranslationRequest::new(source.code(), text.clone()).unwrap();
        let first = translate_to_english(&provider, &req).await.unwrap();
        let second = translate_to_english(&provider, &req).await.unwrap();
        assert_eq!(first, expected);
        assert_eq!(first, second);
    }

    let unknown = TranslationRequest::new("fr", "texte jamais enregistré").unwrap();
    assert!(matches!(
        translate_to_english(&provider, &unknown).await,
        Err(TranslationError::Unavailable(_))
    ));
}
