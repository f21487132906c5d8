use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use super::{EventKind, QuestionCategory, UsageEvent, TABS};
use crate::career::CareerKind;

/// Display labels for [`TABS`], same order.
pub const TAB_LABELS: [&str; 6] = [
    "Resume",
    "Career Services",
    "Mindfulness",
    "Translator",
    "Common Questions",
    "Locator",
];

/// Counts over one event log.
///
/// Every field is a plain count, so reports over logs with disjoint
/// session ids add componentwise. `session_count` counts distinct ids
/// and is additive only under that disjointness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub session_count: u64,
    pub question_count: u64,
    pub resume_generated_count: u64,
    pub american_job_center_count: u64,
    pub audio_play_count: u64,
    pub event_count: u64,
    pub tabs: BTreeMap<String, u64>,
    pub question_categories: BTreeMap<String, u64>,
    pub career_panels: BTreeMap<String, u64>,
    pub events_by_kind: BTreeMap<String, u64>,
    /// Non-blank lines that failed to parse or validate.
    pub corrupt_lines: u64,
}

impl Default for AggregateReport {
    fn default() -> Self {
        let zeros = |keys: Vec<&str>| keys.into_iter().map(|k| (k.to_string(), 0)).collect();
        AggregateReport {
            session_count: 0,
            question_count: 0,
            resume_generated_count: 0,
            american_job_center_count: 0,
            audio_play_count: 0,
            event_count: 0,
            tabs: zeros(TABS.to_vec()),
            question_categories: zeros(QuestionCategory::ALL.iter().map(|c| c.slug()).collect()),
            career_panels: zeros(CareerKind::ALL.iter().map(|k| k.slug()).collect()),
            events_by_kind: zeros(EventKind::ALL.iter().map(|k| k.as_str()).collect()),
            corrupt_lines: 0,
        }
    }
}

fn add_maps(mut a: BTreeMap<String, u64>, b: BTreeMap<String, u64>) -> BTreeMap<String, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

impl Add for AggregateReport {
    type Output = AggregateReport;

    fn add(self, rhs: AggregateReport) -> AggregateReport {
        AggregateReport {
            session_count: self.session_count + rhs.session_count,
            question_count: self.question_count + rhs.question_count,
            resume_generated_count: self.resume_generated_count + rhs.resume_generated_count,
            american_job_center_count: self.american_job_center_count + rhs.american_job_center_count,
            audio_play_count: self.audio_play_count + rhs.audio_play_count,
            event_count: self.event_count + rhs.event_count,
            tabs: add_maps(self.tabs, rhs.tabs),
            question_categories: add_maps(self.question_categories, rhs.question_categories),
            career_panels: add_maps(self.career_panels, rhs.career_panels),
            events_by_kind: add_maps(self.events_by_kind, rhs.events_by_kind),
            corrupt_lines: self.corrupt_lines + rhs.corrupt_lines,
        }
    }
}

/// Aggregates a line-delimited log. Blank lines are ignored; any other
/// line that fails to parse or validate is skipped and counted.
pub fn aggregate(log: &str) -> AggregateReport {
    let mut report = AggregateReport::default();
    let mut sessions = HashSet::new();
    for line in log.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let event = match serde_json::from_str::<UsageEvent>(line) {
            Ok(e) if e.validate().is_ok() => e,
            _ => {
                report.corrupt_lines += 1;
                continue;
            }
        };
        report.event_count += 1;
        sessions.insert(event.session_id.clone());
        *report
            .events_by_kind
            .get_mut(event.kind.as_str())
            .expect("all kinds pre-seeded") += 1;
        match event.kind {
            EventKind::TabOpened => *report.tabs.get_mut(&event.target).expect("validated tab") += 1,
            EventKind::QuestionSubmitted => {
                report.question_count += 1;
                *report
                    .question_categories
                    .get_mut(&event.target)
                    .expect("validated category") += 1;
            }
            EventKind::ResumeGenerated => report.resume_generated_count += 1,
            EventKind::AudioPlayed => report.audio_play_count += 1,
            EventKind::CareerPanelOpened => {
                if event.target == CareerKind::AmericanJobCenter.slug() {
                    report.american_job_center_count += 1;
                }
                *report
                    .career_panels
                    .get_mut(&event.target)
                    .expect("validated panel") += 1;
            }
            EventKind::ButtonClicked | EventKind::LinkAccessed => {}
        }
    }
    report.session_count = sessions.len() as u64;
    report
}

impl AggregateReport {
    /// Plain-text summary: key results, tabs accessed, question types.
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        let row = |out: &mut String, label: &str, n: u64| {
            let _ = writeln!(out, "  {label:<52}{n:>6}");
        };
        out.push_str("Key results\n");
        row(&mut out, "Number of user sessions", self.session_count);
        row(&mut out, "Number of questions asked to the assistant", self.question_count);
        row(&mut out, "Resumes generated through resume builder", self.resume_generated_count);
        row(&mut out, "American Job Center accessed", self.american_job_center_count);
        row(&mut out, "Audio pronunciation played", self.audio_play_count);

        out.push_str("\nTabs accessed\n");
        for (slug, label) in TABS.iter().zip(TAB_LABELS) {
            row(&mut out, label, self.tabs.get(*slug).copied().unwrap_or(0));
        }

        out.push_str("\nQuestion types\n");
        for c in QuestionCategory::ALL {
            row(&mut out, c.label(), self.question_categories.get(c.slug()).copied().unwrap_or(0));
        }

        out.push_str("\nDiagnostics\n");
        row(&mut out, "Events counted", self.event_count);
        row(&mut out, "Corrupt lines skipped", self.corrupt_lines);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::new_session_id;
    use chrono::Utc;

    #[test]
    fn empty_log_is_all_zero() {
        let r = aggregate("");
        assert_eq!(r, AggregateReport::default());
        assert!(r.tabs.values().all(|&v| v == 0));
    }

    #[test]
    fn counts_and_corrupt_lines() {
        let s = new_session_id();
        let line = |k, t| UsageEvent::new(s.clone(), k, t, Utc::now()).unwrap().to_line();
        let log = [
            line(EventKind::TabOpened, "locator"),
            line(EventKind::CareerPanelOpened, "american-job-center"),
            "{not json".to_string(),
            String::new(),
            r#"{"timestamp":"2025-01-01T00:00:00Z","session_id":"00000000000000000000000000000000","kind":"tab_opened","target":"10.0.0.1"}"#.to_string(),
        ]
        .join("\n");
        let r = aggregate(&log);
        assert_eq!(r.session_count, 1);
        assert_eq!(r.tabs["locator"], 1);
        assert_eq!(r.american_job_center_count, 1);
        assert_eq!(r.corrupt_lines, 2);
        assert_eq!(r.event_count, 2);
        assert!(r.export_text().contains("Corrupt lines skipped"));
    }
}
