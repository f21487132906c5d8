use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::qa::tokens;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuestionCategory {
    FindingAJob,
    ResumeCvCreation,
    CommonQuestionType,
    PreparingForAnInterview,
    EmotionalSupport,
    QuestionsAskedInError,
}

impl QuestionCategory {
    pub const ALL: [QuestionCategory; 6] = [
        QuestionCategory::FindingAJob,
        QuestionCategory::ResumeCvCreation,
        QuestionCategory::CommonQuestionType,
        QuestionCategory::PreparingForAnInterview,
        QuestionCategory::EmotionalSupport,
        QuestionCategory::QuestionsAskedInError,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            QuestionCategory::FindingAJob => "finding-a-job",
            QuestionCategory::ResumeCvCreation => "resume-cv-creation",
            QuestionCategory::CommonQuestionType => "common-question-type",
            QuestionCategory::PreparingForAnInterview => "preparing-for-an-interview",
            QuestionCategory::EmotionalSupport => "emotional-support",
            QuestionCategory::QuestionsAskedInError => "questions-asked-in-error",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            QuestionCategory::FindingAJob => "Finding a job",
            QuestionCategory::ResumeCvCreation => "Resume/CV creation",
            QuestionCategory::CommonQuestionType => "Common-Question type",
            QuestionCategory::PreparingForAnInterview => "Preparing for an interview",
            QuestionCategory::EmotionalSupport => "Emotional support",
            QuestionCategory::QuestionsAskedInError => "Questions asked in error",
        }
    }
}

impl fmt::Display for QuestionCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown question category {0:?}")]
pub struct UnknownCategory(pub String);

impl FromStr for QuestionCategory {
    type Err = UnknownCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        QuestionCategory::ALL
            .into_iter()
            .find(|c| c.slug() == s)
            .ok_or_else(|| UnknownCategory(s.to_string()))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ClassifierError {
    #[error("failed to read rules: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid rules file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error(transparent)]
    Category(#[from] UnknownCategory),
    #[error("rule for {0} has no usable keywords")]
    EmptyRule(QuestionCategory),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRules {
    fallback: String,
    rule: Vec<RawRule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    category: String,
    keywords: Vec<String>,
}

/// Ordered keyword rules.
///
/// Each keyword is normalized into a token run and counted once per
/// occurrence in the normalized question. The rule with the most hits wins,
/// earlier rules win ties, and a question with no hits gets the fallback.
#[derive(Debug, Clone)]
pub struct Classifier {
    rules: Vec<(QuestionCategory, Vec<Vec<String>>)>,
    fallback: QuestionCategory,
}

impl Classifier {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ClassifierError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(raw: &str) -> Result<Self, ClassifierError> {
        let raw: RawRules = toml::from_str(raw)?;
        let fallback = raw.fallback.parse()?;
        let rules = raw
            .rule
            .into_iter()
            .map(|r| {
                let category: QuestionCategory = r.category.parse()?;
                let keywords: Vec<Vec<String>> = r
                    .keywords
                    .iter()
                    .map(|k| tokens(k))
                    .filter(|t| !t.is_empty())
                    .collect();
                if keywords.is_empty() {
                    return Err(ClassifierError::EmptyRule(category));
                }
                Ok((category, keywords))
            })
            .collect::<Result<_, ClassifierError>>()?;
        Ok(Classifier { rules, fallback })
    }

    pub fn classify_question(&self, text: &str) -> QuestionCategory {
        let toks = tokens(text);
        let mut best: Option<(QuestionCategory, usize)> = None;
        for (category, keywords) in &self.rules {
            let hits: usize = keywords.iter().map(|k| occurrences(&toks, k)).sum();
            if hits > 0 && best.is_none_or(|(_, b)| hits > b) {
                best = Some((*category, hits));
            }
        }
        best.map_or(self.fallback, |(c, _)| c)
    }
}

fn occurrences(haystack: &[String], needle: &[String]) -> usize {
    if needle.len() > haystack.len() {
        return 0;
    }
    haystack.windows(needle.len()).filter(|w| *w == needle).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    const RULES: &str = r#"
        fallback = "questions-asked-in-error"
        [[rule]]
        category = "resume-cv-creation"
        keywords = ["resume", "cover letter"]
        [[rule]]
        category = "finding-a-job"
        keywords = ["job", "pay"]
    "#;

    #[test]
    fn most_hits_then_order() {
        let c = Classifier::parse(RULES).unwrap();
        assert_eq!(c.classify_question("How much does a dishwashing job pay?"), QuestionCategory::FindingAJob);
        assert_eq!(c.classify_question("resume for a job"), QuestionCategory::ResumeCvCreation);
        assert_eq!(c.classify_question("write my Cover Letter"), QuestionCategory::ResumeCvCreation);
        assert_eq!(c.classify_question("cover the letter"), QuestionCategory::QuestionsAskedInError);
        assert_eq!(c.classify_question("asdf"), QuestionCategory::QuestionsAskedInError);
        assert_eq!(c.classify_question(""), QuestionCategory::QuestionsAskedInError);
    }

    #[test]
    fn rejects_unknown_categories() {
        assert!(matches!(
            Classifier::parse("fallback = \"nope\"\n[[rule]]\ncategory=\"finding-a-job\"\nkeywords=[\"job\"]"),
            Err(ClassifierError::Category(_))
        ));
    }
}
