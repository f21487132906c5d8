//! Resume building, resume review, and interview practice.
//!
//! Building maps structured input onto a YAML render document and hands it
//! to a [`RenderEngine`]. Review extracts text from an uploaded PDF and asks
//! the chat provider for narrative feedback. Interview practice is a small
//! state machine over transcripts.

mod engine;
mod extract;
mod interview;
mod pdf;
mod review;

use serde::{Deserialize, Serialize};

pub use engine::{BuiltinEngine, ProcessEngine, RenderEngine, RenderError, ResumeBuilder};
pub use extract::{extract_text, ExtractError, MAX_UPLOAD_BYTES};
pub use interview::{
    Feedback, InterviewCoach, InterviewError, InterviewQuestion, InterviewSession, InterviewState,
    InterviewSummary, InterviewTurn, QuestionBank, SummarySource, TurnFeedback,
};
pub use pdf::encodable;
pub use review::{parse_review, review_resume, ReviewError, ReviewReport};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Personal {
    pub name: String,
    #[serde(default)]
    pub phone: String,
    #[serde(default)]
    pub email: String,
    #[serde(default)]
    pub location: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Education {
    pub institution: String,
    pub credential: String,
    pub dates: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Experience {
    pub employer: String,
    pub title: String,
    pub dates: String,
    pub bullets: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Certification {
    pub name: String,
    pub issuer: String,
    pub date: String,
}

/// Structured resume content. Dates are free-form text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResumeInput {
    pub personal: Personal,
    #[serde(default)]
    pub education: Vec<Education>,
    #[serde(default)]
    pub experience: Vec<Experience>,
    #[serde(default)]
    pub certifications: Vec<Certification>,
    #[serde(default)]
    pub skills: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResumeError {
    #[error("invalid resume input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Render(#[from] RenderError),
}

impl ResumeInput {
    pub fn name_only(name: impl Into<String>) -> Self {
        ResumeInput {
            personal: Personal {
                name: name.into(),
                ..Default::default()
            },
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ResumeError> {
        if self.personal.name.trim().is_empty() {
            return Err(ResumeError::Invalid("name is required".into()));
        }
        Ok(())
    }

    /// Every non-blank string in the input, in document order.
    pub fn strings(&self) -> Vec<&str> {
        let p = &self.personal;
        let mut out = vec![p.name.as_str(), &p.location, &p.email, &p.phone];
        for e in &self.education {
            out.extend([e.institution.as_str(), &e.credential, &e.dates]);
        }
        for x in &self.experience {
            out.extend([x.employer.as_str(), &x.title, &x.dates]);
            out.extend(x.bullets.iter().map(String::as_str));
        }
        for c in &self.certifications {
            out.extend([c.name.as_str(), &c.issuer, &c.date]);
        }
        out.extend(self.skills.iter().map(String::as_str));
        out.retain(|s| !s.trim().is_empty());
        out
    }
}

fn keep(s: &str) -> Option<String> {
    let t = s.trim();
    (!t.is_empty()).then(|| t.to_string())
}

/// Render document in the engine's `cv` / `design` schema.
///
/// Blank strings and empty sections are omitted, so each non-blank input
/// string appears exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderDocument {
    pub cv: Cv,
    pub design: Design,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Design {
    pub theme: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cv {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub email: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phone: Option<String>,
    #[serde(default, skip_serializing_if = "Sections::is_empty")]
    pub sections: Sections,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sections {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub education: Vec<EducationEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub experience: Vec<ExperienceEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certifications: Vec<CertificationEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skills: Vec<BulletEntry>,
}

impl Sections {
    pub fn is_empty(&self) -> bool {
        self.education.is_empty()
            && self.experience.is_empty()
            && self.certifications.is_empty()
            && self.skills.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EducationEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub institution: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperienceEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub company: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub highlights: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificationEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BulletEntry {
    pub bullet: String,
}

/// Maps validated input onto the render schema.
pub fn map_to_render_schema(input: &ResumeInput) -> Result<RenderDocument, ResumeError> {
    input.validate()?;
    let p = &input.personal;
    let sections = Sections {
        education: input
            .education
            .iter()
            .map(|e| EducationEntry {
                institution: keep(&e.institution),
                area: keep(&e.credential),
                date: keep(&e.dates),
            })
            .filter(|e| e.institution.is_some() || e.area.is_some() || e.date.is_some())
            .collect(),
        experience: input
            .experience
            .iter()
            .map(|x| ExperienceEntry {
                company: keep(&x.employer),
                position: keep(&x.title),
                date: keep(&x.dates),
                highlights: x.bullets.iter().filter_map(|b| keep(b)).collect(),
            })
            .filter(|x| {
                x.company.is_some() || x.position.is_some() || x.date.is_some() || !x.highlights.is_empty()
            })
            .collect(),
        certifications: input
            .certifications
            .iter()
            .map(|c| CertificationEntry {
                name: keep(&c.name),
                summary: keep(&c.issuer),
                date: keep(&c.date),
            })
            .filter(|c| c.name.is_some() || c.summary.is_some() || c.date.is_some())
            .collect(),
        skills: input
            .skills
            .iter()
            .filter_map(|s| keep(s))
            .map(|bullet| BulletEntry { bullet })
            .collect(),
    };
    Ok(RenderDocument {
        cv: Cv {
            name: p.name.trim().to_string(),
            location: keep(&p.location),
            email: keep(&p.email),
            phone: keep(&p.phone),
            sections,
        },
        design: Design {
            theme: "classic".into(),
        },
    })
}

impl RenderDocument {
    /// Deterministic YAML: field order follows the struct definitions.
    pub fn to_yaml(&self) -> String {
        serde_yaml::to_string(self).expect("render documents serialize")
    }

    pub fn from_yaml(raw: &str) -> Result<Self, serde_yaml::Error> {
        serde_yaml::from_str(raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full() -> ResumeInput {
        ResumeInput {
            personal: Personal {
                name: "Amina Yusuf".into(),
                phone: "312-555-0100".into(),
                email: "amina@example.org".into(),
                location: "Chicago, IL".into(),
            },
            education: vec![Education {
                institution: "Truman College".into(),
                credential: "Certificate in Culinary Arts".into(),
                dates: "2021 - 2022".into(),
            }],
            experience: vec![
                Experience {
                    employer: "Lakeview Diner".into(),
                    title: "Dishwasher".into(),
                    dates: "2022 - present".into(),
                    bullets: vec!["Kept the dish station clean".into(), "  ".into()],
                },
                Experience {
                    employer: "Corner Market".into(),
                    title: "Stock Clerk".into(),
                    dates: "2020 - 2022".into(),
                    bullets: vec![],
                },
            ],
            certifications: vec![],
            skills: vec!["Food safety".into(), "Teamwork".into(), "Arabic".into()],
        }
    }

    #[test]
    fn name_only_is_minimal() {
        let doc = map_to_render_schema(&ResumeInput::name_only("Ana")).unwrap();
        assert_eq!(doc.to_yaml(), "cv:\n  name: Ana\ndesign:\n  theme: classic\n");
    }

    #[test]
    fn empty_name_is_rejected() {
        assert!(matches!(
            map_to_render_schema(&ResumeInput::name_only("  ")),
            Err(ResumeError::Invalid(_))
        ));
    }

    #[test]
    fn mapping_is_deterministic_and_round_trips() {
        let a = map_to_render_schema(&full()).unwrap().to_yaml();
        let b = map_to_render_schema(&full()).unwrap().to_yaml();
        assert_eq!(a, b);
        let back = RenderDocument::from_yaml(&a).unwrap();
        assert_eq!(back, map_to_render_schema(&full()).unwrap());
        for s in full().strings() {
            assert_eq!(a.matches(s).count(), 1, "{s}");
        }
        assert!(!a.contains("certifications"));
    }
}
