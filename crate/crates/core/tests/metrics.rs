use std::collections::BTreeMap;
use std::path::PathBuf;

use chrono::{TimeZone, Utc};
use heyfriend_core::metrics::{
    aggregate, contains_pii, new_session_id, record_event, validate_payload, Classifier,
    EventKind, MemoryEventLog, QuestionCategory, UsageEvent,
};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

#[test]
fn synthetic_log_reproduces_key_results_and_tabs() {
    let log = std::fs::read_to_string(data("metrics/synthetic_events.jsonl")).unwrap();
    let r = aggregate(&log);
    assert_eq!(r.corrupt_lines, 0);
    assert_eq!(r.session_count, 55);
    assert_eq!(r.question_count, 66);
    assert_eq!(r.resume_generated_count, 17);
    assert_eq!(r.american_job_center_count, 15);
    assert_eq!(r.audio_play_count, 534);
    let tabs: Vec<u64> = ["resume", "career-services", "mindfulness", "translator", "common-questions", "locator"]
        .iter()
        .map(|t| r.tabs[*t])
        .collect();
    assert_eq!(tabs, [75, 62, 61, 54, 75, 45]);
}

#[test]
fn labeled_questions_reproduce_the_histogram() {
    let classifier = Classifier::load(data("classifier_rules.toml")).unwrap();
    let raw = std::fs::read_to_string(data("metrics/fig8_questions.jsonl")).unwrap();
    let mut hist: BTreeMap<QuestionCategory, u32> = BTreeMap::new();
    for line in raw.lines().filter(|l| !l.trim().is_empty()) {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let text = v["text"].as_str().unwrap();
        let label: QuestionCategory = v["category"].as_str().unwrap().parse().unwrap();
        let got = classifier.classify_question(text);
        assert_eq!(got, label, "{text:?}");
        *hist.entry(got).or_default() += 1;
    }
    let counts: Vec<u32> = QuestionCategory::ALL.iter().map(|c| hist.get(c).copied().unwrap_or(0)).collect();
    assert_eq!(counts, [10, 15, 13, 5, 3, 20]);
}

#[test]
fn classifier_examples() {
    let c = Classifier::load(data("classifier_rules.toml")).unwrap();
    assert_eq!(c.classify_question("How much does a dishwashing job pay?"), QuestionCategory::FindingAJob);
    assert_eq!(c.classify_question("asdf"), QuestionCategory::QuestionsAskedInError);
    assert_eq!(c.classify_question("help me write my resume objective"), QuestionCategory::ResumeCvCreation);
}

#[test]
fn export_lists_tables_in_order() {
    let log = std::fs::read_to_string(data("metrics/synthetic_events.jsonl")).unwrap();
    let text = aggregate(&log).export_text();
    let resume = text.find("  Resume ").unwrap();
    let locator = text.find("  Locator").unwrap();
    assert!(resume < locator);
    assert!(text.contains("Audio pronunciation played"));
    assert!(text.lines().any(|l| l.contains("Number of user sessions") && l.trim_end().ends_with("55")));
}

fn event_strategy() -> impl Strategy<Value = (usize, usize)> {
    (0..EventKind::ALL.len(), 0..64usize)
}

fn build_log(sessions: usize, picks: &[(usize, usize)], seed: i64) -> String {
    let ids: Vec<_> = (0..sessions.max(1)).map(|_| new_session_id()).collect();
    let base = Utc.with_ymd_and_hms(2025, 3, 3, 10, 0, 0).unwrap();
    picks
        .iter()
        .enumerate()
        .map(|(i, &(k, t))| {
            let kind = EventKind::ALL[k];
            let vocab = kind.vocabulary();
            let target = vocab[t % vocab.len()];
            UsageEvent::new(
                ids[i % ids.len()].clone(),
                kind,
                target,
                base + chrono::Duration::seconds(seed + i as i64),
            )
            .unwrap()
            .to_line()
                + "\n"
        })
        .collect()
}

proptest! {
    #[test]
    fn aggregation_is_additive_over_disjoint_logs(
        a in prop::collection::vec(event_strategy(), 0..60),
        b in prop::collection::vec(event_strategy(), 0..60),
        sa in 1usize..6,
        sb in 1usize..6,
        junk in 0usize..3,
    ) {
        let log_a = build_log(sa, &a, 0) + &"garbage line\n".repeat(junk);
        let log_b = build_log(sb, &b, 10_000);
        let whole = aggregate(&(log_a.clone() + &log_b));
        prop_assert_eq!(whole, aggregate(&log_a) + aggregate(&log_b));
    }

    #[test]
    fn classification_is_total_and_deterministic(text in ".{0,80}") {
        let c = Classifier::load(data("classifier_rules.toml")).unwrap();
        prop_assert_eq!(c.classify_question(&text), c.classify_question(&text));
    }
}

// Payload fuzzing: a mix of valid events, events with address-like labels,
// unknown kinds, stray fields, and nested values.
fn payload_strategy() -> impl Strategy<Value = serde_json::Value> {
    let ipv4 = (0u8..=255, 0u8..=255, 0u8..=255, 0u8..=255).prop_map(|(a, b, c, d)| format!("{a}.{b}.{c}.{d}"));
    let ipv6 = prop::collection::vec(0u16..=0xffff, 8).prop_map(|g| {
        g.iter().map(|x| format!("{x:x}")).collect::<Vec<_>>().join(":")
    });
    let ipv6_short = (0u16..=0xffff).prop_map(|x| format!("fe80::{x:x}"));
    let email = ("[a-z]{1,8}", "[a-z]{1,8}", "[a-z]{2,4}").prop_map(|(u, d, t)| format!("{u}@{d}.{t}"));
    let junk_target = prop_oneof![
        1 => ipv4,
        1 => ipv6,
        1 => ipv6_short,
        1 => email,
        1 => ".{0,24}",
    ];
    let known_kind = (0..EventKind::ALL.len(), any::<prop::sample::Index>()).prop_map(|(k, i)| {
        let kind = EventKind::ALL[k];
        let vocab = kind.vocabulary();
        (kind.as_str().to_string(), Some(vocab[i.index(vocab.len())].to_string()))
    });
    let kind_and_target = (
        prop_oneof![
            6 => known_kind,
            1 => "[a-z_]{1,12}".prop_map(|k| (k, None)),
        ],
        junk_target,
        prop::bool::weighted(0.6),
    )
        .prop_map(|((kind, valid), junk, use_valid)| match valid {
            Some(t) if use_valid => (kind, t),
            _ => (kind, junk),
        });
    let session = prop_oneof![
        6 => Just(()).prop_map(|_| new_session_id().to_string()),
        1 => ".{0,40}",
    ];
    let extra = prop_oneof![
        6 => Just(None),
        1 => Just(Some(("ip", serde_json::json!("203.0.113.9")))),
        1 => Just(Some(("device_id", serde_json::json!("abc")))),
        1 => Just(Some(("note", serde_json::json!({"email": "x@y.org"})))),
    ];
    (session, kind_and_target, extra).prop_map(|(s, (k, t), extra)| {
        let mut v = serde_json::json!({"session_id": s, "kind": k, "target": t});
        if let Some((key, val)) = extra {
            v[key] = val;
        }
        v
    })
}

#[test]
fn ten_thousand_fuzzed_payloads_never_leak() {
    let rt = tokio::runtime::Builder::new_current_thread().build().unwrap();
    let store = MemoryEventLog::new();
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strategy = payload_strategy();
    let (mut accepted, mut rejected) = (0, 0);
    for _ in 0..10_000 {
        let payload = strategy.new_tree(&mut runner).unwrap().current();
        match validate_payload(&payload, Utc::now()) {
            Ok(event) => {
                rt.block_on(record_event(&store, &event)).unwrap();
                accepted += 1;
            }
            Err(_) => {
                let obj = payload.as_object().unwrap();
                let well_formed = obj.len() == 3
                    && obj["kind"].as_str().and_then(|k| k.parse::<EventKind>().ok())
                        .is_some_and(|k| k.allows(obj["target"].as_str().unwrap()))
                    && obj["session_id"].as_str().unwrap().parse::<heyfriend_core::SessionId>().is_ok();
                assert!(!well_formed, "valid payload rejected: {payload}");
                rejected += 1;
            }
        }
    }
    let lines = store.lines();
    assert_eq!(lines.len(), accepted);
    assert!(accepted > 1000 && rejected > 1000, "{accepted} accepted, {rejected} rejected");
    for line in &lines {
        assert!(!contains_pii(line), "leaked: {line}");
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v.as_object().unwrap().len(), 4);
    }
}
