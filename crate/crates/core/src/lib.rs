//! Core of a community resource-access assistant service.
//!
//! Each module owns one capability: curated-answer retrieval ([`qa`]), chat
//! dispatch ([`assistant`]), phrase bank and translation ([`translator`]),
//! occupational data queries ([`career`]), resume and interview tools
//! ([`resume`]), multilingual content ([`content`]), and anonymized usage
//! metrics ([`metrics`]). The HTTP surface lives in a separate crate.

pub mod assistant;
pub mod career;
pub mod content;
pub mod lang;
pub mod metrics;
pub mod qa;
pub mod resume;
pub mod sessions;
pub mod translator;

pub use lang::{Language, Localized};
pub use sessions::{SessionId, SessionStore};
