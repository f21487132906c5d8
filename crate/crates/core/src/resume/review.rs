use std::sync::LazyLock;
use std::time::Duration;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::extract::{extract_text, ExtractError};
use crate::assistant::{send_with_timeout, ChatMessage, ChatProvider, ChatRequest, ProviderError, Purpose};

const REVIEW_INSTRUCTIONS: &str = "You are a supportive career coach reviewing a resume for someone \
who may be new to the U.S. job market. Give narrative, practical feedback in plain language. \
Do not assign scores, ratings, grades, or percentages. Answer in exactly three sections with these \
headings, each followed by short bullet points:\nStrengths:\nWeaknesses:\nImprovements:";

/// Narrative review in three lists. Never carries scores.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewReport {
    pub strengths: Vec<String>,
    pub weaknesses: Vec<String>,
    pub improvements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReviewError {
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error("review provider failed: {0}")]
    Provider(#[from] ProviderError),
}

// Score-shaped phrases: "7/10", "8 out of 10", "score: 90", "rated 4".
static SCORE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?i)\b\d+(?:\.\d+)?\s*(?:/|out\s+of)\s*(?:5|10|100)\b|\b(?:score|scored|rating|rated|grade|graded)\b\W{0,3}\d",
    )
    .unwrap()
});

pub(crate) fn is_score_like(s: &str) -> bool {
    SCORE.is_match(s)
}

fn strip_marker(line: &str) -> &str {
    let t = line.trim();
    let t = t.trim_start_matches(['-', '*', '•', '+']).trim_start();
    // "1." or "2)" list numbering
    let digits = t.bytes().take_while(u8::is_ascii_digit).count();
    if digits > 0 && t[digits..].starts_with(['.', ')']) {
        return t[digits + 1..].trim_start();
    }
    t
}

/// Matches a heading line against `headings`; returns the index and any
/// text after the colon on the same line.
fn heading<'a>(line: &'a str, headings: &[&str]) -> Option<(usize, &'a str)> {
    let t = line.trim().trim_start_matches('#').trim();
    let t = t.trim_start_matches('*').trim_start_matches('_');
    let (head, rest) = match t.find(':') {
        Some(i) => (&t[..i], &t[i + 1..]),
        None => (t, ""),
    };
    let head = head.trim().trim_end_matches(['*', '_']).trim().to_lowercase();
    let rest = rest.trim().trim_start_matches(['*', '_']).trim();
    headings
        .iter()
        .position(|h| head == *h)
        .map(|i| (i, rest))
}

/// Splits a labeled reply into one item list per heading. Returns `None`
/// when no heading is found.
pub(crate) fn split_sections(reply: &str, headings: &[&str]) -> Option<Vec<Vec<String>>> {
    let mut sections = vec![Vec::new(); headings.len()];
    let mut current: Option<usize> = None;
    for line in reply.lines() {
        if let Some((idx, rest)) = heading(line, headings) {
            current = Some(idx);
            if !rest.is_empty() {
                sections[idx].push(rest.to_string());
            }
            continue;
        }
        let item = strip_marker(line);
        if let (Some(idx), false) = (current, item.is_empty()) {
            sections[idx].push(item.to_string());
        }
    }
    current.map(|_| sections)
}

/// Parses a provider reply into a report.
///
/// Items that read like scores are dropped. A reply without any of the
/// three headings becomes a single improvements item.
pub fn parse_review(reply: &str) -> ReviewReport {
    let clean = |items: Vec<String>| -> Vec<String> { items.into_iter().filter(|i| !is_score_like(i)).collect() };
    let parsed = split_sections(reply, &["strengths", "weaknesses", "improvements"]);
    if let Some(mut s) = parsed {
        let improvements = clean(s.pop().unwrap_or_default());
        let weaknesses = clean(s.pop().unwrap_or_default());
        let strengths = clean(s.pop().unwrap_or_default());
        if !(strengths.is_empty() && weaknesses.is_empty() && improvements.is_empty()) {
            return ReviewReport {
                strengths,
                weaknesses,
                improvements,
            };
        }
    }
    let kept: Vec<&str> = reply
        .lines()
        .filter(|l| !is_score_like(l))
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    ReviewReport {
        improvements: if kept.is_empty() { vec![] } else { vec![kept.join("\n")] },
        ..Default::default()
    }
}

/// Extracts the resume text and asks the provider for a narrative review.
/// Nothing about the upload is kept after the call returns.
pub async fn review_resume(
    pdf: &[u8],
    provider: &dyn ChatProvider,
    model_id: &str,
    timeout: Duration,
) -> Result<ReviewReport, ReviewError> {
    let text = extract_text(pdf)?;
    let request = ChatRequest {
        model_id: model_id.to_string(),
        instructions: REVIEW_INSTRUCTIONS.to_string(),
        grounding: None,
        messages: vec![ChatMessage::user(format!("Here is my resume:\n\n{}", text.trim()))],
        purpose: Purpose::ResumeReview,
    };
    let reply = send_with_timeout(provider, &request, timeout).await?;
    Ok(parse_review(&reply))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_labeled_sections() {
        let reply = "**Strengths:**\n- Clear work history\n- Good skills list\n\n## Weaknesses\n1. No dates on education\nImprovements: Add a summary line\n* Quantify duties";
        let r = parse_review(reply);
        assert_eq!(r.strengths, ["Clear work history", "Good skills list"]);
        assert_eq!(r.weaknesses, ["No dates on education"]);
        assert_eq!(r.improvements, ["Add a summary line", "Quantify duties"]);
    }

    #[test]
    fn unlabeled_reply_is_one_improvement() {
        let r = parse_review("Looks decent overall, consider adding dates.");
        assert!(r.strengths.is_empty() && r.weaknesses.is_empty());
        assert_eq!(r.improvements, ["Looks decent overall, consider adding dates."]);
    }

    #[test]
    fn score_items_are_dropped() {
        let r = parse_review("Strengths:\n- Overall score: 8\n- Strong verbs\nWeaknesses:\n- 6/10 formatting\n- Typos\nImprovements:\n- Rated 3 stars\n- Add certifications");
        assert_eq!(r.strengths, ["Strong verbs"]);
        assert_eq!(r.weaknesses, ["Typos"]);
        assert_eq!(r.improvements, ["Add certifications"]);
        assert!(!is_score_like("Managed a team of 5 cooks in 2021"));
        assert!(!is_score_like("Worked 2019/2020 seasons"));
    }
}
