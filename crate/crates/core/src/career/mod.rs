//! Occupational-data queries: the fourteen query kinds, their parameter
//! signatures, request descriptors, and the cached fetch path.

mod cache;
mod client;
mod location;
mod occupations;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use cache::{fetch, parse_dataset, CareerCache, Clock, ManualClock, SystemClock, DEFAULT_CACHE_TTL};
pub use client::{
    CareerClient, CareerOneStopClient, ClientError, FixtureClient, MockCareerClient,
    DEFAULT_CAREER_API_BASE,
};
pub use location::{validate_location, LocationError, LocationKind, LocationQuery, StateCode};
pub use occupations::{OccupationEntry, OccupationError, OccupationList, OnetCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CareerKind {
    AmericanJobCenter,
    ApprenticeshipOffices,
    Certifications,
    EmploymentPatterns,
    LaborMarketInformation,
    Occupations,
    OccupationalReports,
    SalariesAndWages,
    SkillsGaps,
    StateResources,
    ToolsAndTechnology,
    Training,
    Unemployment,
    YouthPrograms,
}

/// One slot in a query kind's parameter signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Location,
    Occupation,
    CompareOccupation,
    State,
    Scope,
    Radius,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::Location => "location",
            Param::Occupation => "occupation",
            Param::CompareOccupation => "compare_occupation",
            Param::State => "state",
            Param::Scope => "scope",
            Param::Radius => "radius",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl CareerKind {
    pub const ALL: [CareerKind; 14] = [
        CareerKind::AmericanJobCenter,
        CareerKind::ApprenticeshipOffices,
        CareerKind::Certifications,
        CareerKind::EmploymentPatterns,
        CareerKind::LaborMarketInformation,
        CareerKind::Occupations,
        CareerKind::OccupationalReports,
        CareerKind::SalariesAndWages,
        CareerKind::SkillsGaps,
        CareerKind::StateResources,
        CareerKind::ToolsAndTechnology,
        CareerKind::Training,
        CareerKind::Unemployment,
        CareerKind::YouthPrograms,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            CareerKind::AmericanJobCenter => "american-job-center",
            CareerKind::ApprenticeshipOffices => "apprenticeship-offices",
            CareerKind::Certifications => "certifications",
            CareerKind::EmploymentPatterns => "employment-patterns",
            CareerKind::LaborMarketInformation => "labor-market-information",
            CareerKind::Occupations => "occupations",
            CareerKind::OccupationalReports => "occupational-reports",
            CareerKind::SalariesAndWages => "salaries-and-wages",
            CareerKind::SkillsGaps => "skills-gaps",
            CareerKind::StateResources => "state-resources",
            CareerKind::ToolsAndTechnology => "tools-and-technology",
            CareerKind::Training => "training",
            CareerKind::Unemployment => "unemployment",
            CareerKind::YouthPrograms => "youth-programs",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            CareerKind::AmericanJobCenter => "American Job Center",
            CareerKind::ApprenticeshipOffices => "Apprenticeship Offices",
            CareerKind::Certifications => "Certifications",
            CareerKind::EmploymentPatterns => "Employment Patterns",
            CareerKind::LaborMarketInformation => "Labor Market Information",
            CareerKind::Occupations => "Occupations",
            CareerKind::OccupationalReports => "Occupational Reports",
            CareerKind::SalariesAndWages => "Salaries and Wages",
            CareerKind::SkillsGaps => "Skills Gaps",
            CareerKind::StateResources => "State Resources",
            CareerKind::ToolsAndTechnology => "Tools and Technology",
            CareerKind::Training => "Training",
            CareerKind::Unemployment => "Unemployment",
            CareerKind::YouthPrograms => "Youth Programs",
        }
    }

    /// Exact parameter set the kind accepts. Location kinds also take an
    /// optional radius inside the location itself.
    pub fn signature(self) -> &'static [Param] {
        use CareerKind::*;
        match self {
            AmericanJobCenter | ApprenticeshipOffices | Training | YouthPrograms => &[Param::Location],
            Certifications | EmploymentPatterns | ToolsAndTechnology => &[Param::Occupation],
            LaborMarketInformation | Occupations | SalariesAndWages => &[Param::Occupation, Param::State],
            OccupationalReports => &[Param::Scope],
            SkillsGaps => &[Param::Occupation, Param::CompareOccupation],
            StateResources => &[Param::State, Param::Radius],
            Unemployment => &[Param::State],
        }
    }

    fn path(self) -> &'static str {
        match self {
            CareerKind::AmericanJobCenter => "/v1/ajcfinder/{userId}",
            CareerKind::ApprenticeshipOffices => "/v1/apprenticeshipfinder/{userId}",
            CareerKind::Certifications => "/v1/certificationfinder/{userId}",
            CareerKind::EmploymentPatterns => "/v1/employmentpattern/{userId}",
            CareerKind::LaborMarketInformation => "/v1/lmi/{userId}",
            CareerKind::Occupations => "/v1/occupation/{userId}",
            CareerKind::OccupationalReports => "/v1/occupationreports/{userId}",
            CareerKind::SalariesAndWages => "/v1/comparesalaries/{userId}/wage",
            CareerKind::SkillsGaps => "/v1/skillgap/{userId}",
            CareerKind::StateResources => "/v1/unemploymentresources/{userId}",
            CareerKind::ToolsAndTechnology => "/v1/tnt/{userId}",
            CareerKind::Training => "/v1/training/{userId}",
            CareerKind::Unemployment => "/v1/unemploymentrate/{userId}",
            CareerKind::YouthPrograms => "/v1/youthprogramfinder/{userId}",
        }
    }

    /// JSON pointer to the row array (or single row object) in a response.
    pub(crate) fn rows_pointer(self) -> &'static str {
        match self {
            CareerKind::AmericanJobCenter => "/OneStopCenterList",
            CareerKind::ApprenticeshipOffices => "/ApprenticeshipOfficeList",
            CareerKind::Certifications => "/CertList",
            CareerKind::EmploymentPatterns => "/EmploymentPatternList",
            CareerKind::LaborMarketInformation => "/LMI",
            CareerKind::Occupations => "/OccupationDetail",
            CareerKind::OccupationalReports => "/OccupationList",
            CareerKind::SalariesAndWages => "/Wages/WageList",
            CareerKind::SkillsGaps => "/SkillsGapList",
            CareerKind::StateResources => "/StateResourceList",
            CareerKind::ToolsAndTechnology => "/ToolsList",
            CareerKind::Training => "/SchoolPrograms",
            CareerKind::Unemployment => "/UnemploymentRateList",
            CareerKind::YouthPrograms => "/YouthProgramList",
        }
    }
}

impl fmt::Display for CareerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown career query kind {0:?}")]
pub struct UnknownKind(pub String);

impl FromStr for CareerKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CareerKind::ALL
            .into_iter()
            .find(|k| k.slug() == s)
            .ok_or_else(|| UnknownKind(s.to_string()))
    }
}

/// Occupational Reports scope: one state, or the whole country.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportScope {
    State(StateCode),
    Us,
}

impl ReportScope {
    pub fn as_str(&self) -> &str {
        match self {
            ReportScope::State(s) => s.as_str(),
            ReportScope::Us => "US",
        }
    }
}

impl FromStr for ReportScope {
    type Err = LocationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("us") {
            Ok(ReportScope::Us)
        } else {
            s.parse().map(ReportScope::State)
        }
    }
}

/// Typed parameter set. Which fields must be present depends on the kind.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CareerParams {
    pub location: Option<LocationQuery>,
    pub occupation: Option<OnetCode>,
    pub compare_occupation: Option<OnetCode>,
    pub state: Option<StateCode>,
    pub scope: Option<ReportScope>,
    pub radius_miles: Option<u32>,
}

impl CareerParams {
    pub fn present(&self) -> BTreeSet<Param> {
        let mut set = BTreeSet::new();
        if self.location.is_some() {
            set.insert(Param::Location);
        }
        if self.occupation.is_some() {
            set.insert(Param::Occupation);
        }
        if self.compare_occupation.is_some() {
            set.insert(Param::CompareOccupation);
        }
        if self.state.is_some() {
            set.insert(Param::State);
        }
        if self.scope.is_some() {
            set.insert(Param::Scope);
        }
        if self.radius_miles.is_some() {
            set.insert(Param::Radius);
        }
        set
    }

    /// Builds typed parameters from raw query-string fields for one kind.
    ///
    /// For location kinds `city`/`state`/`zip`/`radius` form the location;
    /// for the others `state` and `radius` are standalone parameters.
    /// Occupations may be given by curated display name or by code.
    pub fn from_raw(
        kind: CareerKind,
        raw: &RawCareerQuery,
        occupations: &OccupationList,
    ) -> Result<Self, CareerError> {
        let mut params = CareerParams::default();
        let sig = kind.signature();
        if sig.contains(&Param::Location) {
            if raw.city.is_some() || raw.state.is_some() || raw.zip.is_some() || raw.radius.is_some() {
                params.location = Some(validate_location(
                    raw.city.as_deref(),
                    raw.state.as_deref(),
                    raw.zip.as_deref(),
                    raw.radius.as_deref(),
                )?);
            }
        } else {
            if raw.city.is_some() || raw.zip.is_some() {
                return Err(CareerError::UnexpectedParameter { kind, param: Param::Location });
            }
            if let Some(s) = &raw.state {
                params.state = Some(s.parse()?);
            }
            if let Some(r) = &raw.radius {
                params.radius_miles = Some(location::parse_radius(r)?);
            }
        }
        if let Some(o) = &raw.occupation {
            params.occupation = Some(occupations.resolve_name_or_code(o)?);
        }
        if let Some(o) = &raw.compare_occupation {
            params.compare_occupation = Some(occupations.resolve_name_or_code(o)?);
        }
        if let Some(s) = &raw.scope {
            params.scope = Some(s.parse()?);
        }
        Ok(params)
    }
}

/// Query-string form of [`CareerParams`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCareerQuery {
    pub city: Option<String>,
    pub state: Option<String>,
    pub zip: Option<String>,
    pub radius: Option<String>,
    pub occupation: Option<String>,
    pub compare_occupation: Option<String>,
    pub scope: Option<String>,
}

/// Upstream request independent of host and credentials.
///
/// The path keeps a `{userId}` placeholder that the HTTP client fills in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestDescriptor {
    pub kind: CareerKind,
    pub method: String,
    pub path: String,
    pub query: BTreeMap<String, String>,
}

impl RequestDescriptor {
    /// Stable across processes: sha256 over the kind slug and sorted query.
    pub fn cache_key(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.kind.slug().as_bytes());
        for (k, v) in &self.query {
            hasher.update([0u8]);
            hasher.update(k.as_bytes());
            hasher.update([1u8]);
            hasher.update(v.as_bytes());
        }
        hex::encode(hasher.finalize())
    }

    /// Pretty JSON with sorted keys and a trailing newline, as stored in golden files.
    pub fn to_golden(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("descriptor serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CareerError {
    #[error("{kind} requires parameter {param}")]
    MissingParameter { kind: CareerKind, param: Param },
    #[error("{kind} does not take parameter {param}")]
    UnexpectedParameter { kind: CareerKind, param: Param },
    #[error(transparent)]
    Location(#[from] LocationError),
    #[error(transparent)]
    Occupation(#[from] OccupationError),
    #[error("career data provider is not configured")]
    NotConfigured,
    #[error("career data request failed: {0}")]
    Network(String),
    #[error("career data provider returned status {status}")]
    Status { status: u16 },
    #[error("career data response could not be parsed: {0}")]
    Parse(String),
}

impl CareerError {
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            CareerError::MissingParameter { .. }
                | CareerError::UnexpectedParameter { .. }
                | CareerError::Location(_)
                | CareerError::Occupation(_)
        )
    }
}

/// Checks `params` against the kind's signature and produces the descriptor.
pub fn build_request(kind: CareerKind, params: &CareerParams) -> Result<RequestDescriptor, CareerError> {
    let required: BTreeSet<Param> = kind.signature().iter().copied().collect();
    let present = params.present();
    if let Some(&param) = required.difference(&present).next() {
        return Err(CareerError::MissingParameter { kind, param });
    }
    if let Some(&param) = present.difference(&required).next() {
        return Err(CareerError::UnexpectedParameter { kind, param });
    }

    let mut query = BTreeMap::new();
    if let Some(loc) = &params.location {
        query.insert("location".to_string(), loc.query_value());
        if let Some(r) = loc.radius_miles {
            query.insert("radius".to_string(), r.to_string());
        }
    }
    if let Some(code) = &params.occupation {
        query.insert("onetcode".to_string(), code.to_string());
    }
    if let Some(code) = &params.compare_occupation {
        query.insert("targetonetcode".to_string(), code.to_string());
    }
    if let Some(state) = &params.state {
        query.insert("state".to_string(), state.to_string());
    }
    if let Some(scope) = &params.scope {
        query.insert("scope".to_string(), scope.as_str().to_string());
    }
    if let Some(r) = params.radius_miles {
        query.insert("radius".to_string(), r.to_string());
    }

    Ok(RequestDescriptor {
        kind,
        method: "GET".to_string(),
        path: kind.path().to_string(),
        query,
    })
}

/// Tabular result of one query. Cells stay strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CareerDataset {
    pub kind: CareerKind,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub fetched_at: chrono::DateTime<chrono::Utc>,
    pub cache_key: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> OnetCode {
        s.parse().unwrap()
    }

    #[test]
    fn slugs_round_trip() {
        for k in CareerKind::ALL {
            assert_eq!(k.slug().parse::<CareerKind>().unwrap(), k);
            assert_eq!(serde_json::to_value(k).unwrap(), k.slug());
        }
        assert!("weather".parse::<CareerKind>().is_err());
    }

    #[test]
    fn lmi_takes_occupation_and_state() {
        let params = CareerParams {
            occupation: Some(code("15-1252.00")),
            state: Some("IL".parse().unwrap()),
            ..Default::default()
        };
        let d = build_request(CareerKind::LaborMarketInformation, &params).unwrap();
        assert_eq!(d.query.get("onetcode").unwrap(), "15-1252.00");
        assert_eq!(d.query.get("state").unwrap(), "IL");
        assert_eq!(d.query.len(), 2);
    }

    #[test]
    fn unemployment_takes_state_only() {
        let params = CareerParams {
            state: Some("IL".parse().unwrap()),
            ..Default::default()
        };
        let d = build_request(CareerKind::Unemployment, &params).unwrap();
        assert_eq!(d.query.keys().collect::<Vec<_>>(), ["state"]);
        let extra = CareerParams {
            occupation: Some(code("15-1252.00")),
            ..params
        };
        assert_eq!(
            build_request(CareerKind::Unemployment, &extra),
            Err(CareerError::UnexpectedParameter {
                kind: CareerKind::Unemployment,
                param: Param::Occupation
            })
        );
    }

    #[test]
    fn skills_gaps_needs_two_occupations() {
        let one = CareerParams {
            occupation: Some(code("15-1252.00")),
            ..Default::default()
        };
        assert_eq!(
            build_request(CareerKind::SkillsGaps, &one),
            Err(CareerError::MissingParameter {
                kind: CareerKind::SkillsGaps,
                param: Param::CompareOccupation
            })
        );
    }

    #[test]
    fn cache_key_is_stable_and_param_sensitive() {
        let a = CareerParams {
            state: Some("IL".parse().unwrap()),
            ..Default::default()
        };
        let b = CareerParams {
            state: Some("IN".parse().unwrap()),
            ..Default::default()
        };
        let ka = build_request(CareerKind::Unemployment, &a).unwrap().cache_key();
        assert_eq!(ka, build_request(CareerKind::Unemployment, &a).unwrap().cache_key());
        assert_ne!(ka, build_request(CareerKind::Unemployment, &b).unwrap().cache_key());
        assert_eq!(ka.len(), 64);
    }

    #[test]
    fn scope_accepts_us_sentinel() {
        assert_eq!("US".parse::<ReportScope>().unwrap(), ReportScope::Us);
        assert_eq!("il".parse::<ReportScope>().unwrap().as_str(), "IL");
        assert!("XZ".parse::<ReportScope>().is_err());
    }
}
