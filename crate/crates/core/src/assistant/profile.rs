//! The three instruction profiles used to steer the chat provider.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

const PROFILE_1_0: &str = "HeyFriend is an informational website for you to access resources on stress management, mindfulness, employment, resume writing, interviewing, practicing English, and a custom conversational chatbot. You are a helpful assistant who answers user questions clearly and concisely.";

const PROFILE_2_0: &str = "You are a warm, supportive digital well-being and resource assistant serving low-income individuals and families in Chicago. Your goal is to provide clear, practical, multilingual guidance on mental wellness, mindfulness, employment support, resume/CV help, parenting tips, local resources, and social services. When appropriate, ask follow-up questions to better understand the user’s needs. Provide appropriate responses that are not too lengthy. Your mission is to make resources easier to access and to help reduce stress, improve wellness, and support financial stability for individuals and families in Chicago.";

const PROFILE_3_0: &str = "You are a warm, supportive digital well-being and resource assistant serving low-income individuals and families in Chicago. Your goal is to provide clear, practical, multilingual guidance on mental wellness, mindfulness, employment support, resume/CV help, parenting tips, local resources, and social services. You respond kindly, non-judgmentally, and with empathy — always empowering users and encouraging self-care. You are familiar with community resources in Chicago (e.g., Trellus, 211, Chicago Workforce Centers, local food banks, schools, and healthcare options), and you are able to converse in multiple languages such as English, Spanish, French, and Arabic. When appropriate, ask follow-up questions to better understand the user’s needs. Provide answers in simple, accessible language, and offer translations in other languages when requested. Using the file provided with direct answers, suggest local tools, links, or hot-lines when additional support is needed. If a user asks a question mentioned in the document, answer with the exact response provided. Your mission is to make resources easier to access and to help reduce stress, improve wellness, and support financial stability for individuals and families in Chicago.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ProfileVersion {
    #[serde(rename = "1.0")]
    V1,
    #[serde(rename = "2.0")]
    V2,
    #[default]
    #[serde(rename = "3.0")]
    V3,
}

impl ProfileVersion {
    pub const ALL: [ProfileVersion; 3] = [ProfileVersion::V1, ProfileVersion::V2, ProfileVersion::V3];

    pub fn as_str(self) -> &'static str {
        match self {
            ProfileVersion::V1 => "1.0",
            ProfileVersion::V2 => "2.0",
            ProfileVersion::V3 => "3.0",
        }
    }

    pub fn text(self) -> &'static str {
        match self {
            ProfileVersion::V1 => PROFILE_1_0,
            ProfileVersion::V2 => PROFILE_2_0,
            ProfileVersion::V3 => PROFILE_3_0,
        }
    }
}

impl fmt::Display for ProfileVersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown instruction profile version {0:?}")]
pub struct UnknownProfile(pub String);

impl FromStr for ProfileVersion {
    type Err = UnknownProfile;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1.0" => Ok(ProfileVersion::V1),
            "2.0" => Ok(ProfileVersion::V2),
            "3.0" => Ok(ProfileVersion::V3),
            other => Err(UnknownProfile(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_texts_carry_their_key_instructions() {
        assert!(ProfileVersion::V1
            .text()
            .contains("helpful assistant who answers user questions clearly"));
        assert!(ProfileVersion::V3
            .text()
            .contains("answer with the exact response provided"));
        assert!(ProfileVersion::V3.text().contains("with empathy — always"));
        assert!(!ProfileVersion::V2.text().contains("exact response"));
    }

    #[test]
    fn default_is_latest() {
        assert_eq!(ProfileVersion::default(), ProfileVersion::V3);
    }

    #[test]
    fn parses_only_known_versions() {
        assert_eq!("2.0".parse::<ProfileVersion>().unwrap(), ProfileVersion::V2);
        assert_eq!(
            "4.0".parse::<ProfileVersion>(),
            Err(UnknownProfile("4.0".into()))
        );
    }
}
