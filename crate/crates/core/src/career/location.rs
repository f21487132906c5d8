use std::fmt;
use std::str::FromStr;

use serde::Serialize;

const STATE_CODES: [&str; 56] = [
    "AL", "AK", "AZ", "AR", "CA", "CO", "CT", "DE", "FL", "GA", "HI", "ID", "IL", "IN", "IA", "KS",
    "KY", "LA", "ME", "MD", "MA", "MI", "MN", "MS", "MO", "MT", "NE", "NV", "NH", "NJ", "NM", "NY",
    "NC", "ND", "OH", "OK", "OR", "PA", "RI", "SC", "SD", "TN", "TX", "UT", "VT", "VA", "WA", "WV",
    "WI", "WY", "DC", "PR", "GU", "VI", "AS", "MP",
];

/// Two-letter U.S. state or territory code, stored uppercase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub struct StateCode([u8; 2]);

impl StateCode {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("state codes are ASCII")
    }
}

impl fmt::Display for StateCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<StateCode> for String {
    fn from(s: StateCode) -> Self {
        s.as_str().to_string()
    }
}

impl FromStr for StateCode {
    type Err = LocationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        if STATE_CODES.contains(&upper.as_str()) {
            let b = upper.as_bytes();
            Ok(StateCode([b[0], b[1]]))
        } else {
            Err(LocationError::UnknownState(s.to_string()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocationKind {
    CityState,
    Zip,
    State,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocationQuery {
    pub kind: LocationKind,
    pub city: Option<String>,
    pub state: Option<StateCode>,
    pub zip: Option<String>,
    pub radius_miles: Option<u32>,
}

impl LocationQuery {
    /// Single upstream `location` value: "Chicago, IL", "60660", or "IL".
    pub fn query_value(&self) -> String {
        match (self.kind, &self.city, &self.state, &self.zip) {
            (LocationKind::CityState, Some(city), Some(state), _) => format!("{city}, {state}"),
            (LocationKind::Zip, _, _, Some(zip)) => zip.clone(),
            (LocationKind::State, _, Some(state), _) => state.to_string(),
            _ => unreachable!("LocationQuery is only built by validate_location"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocationError {
    #[error("ZIP code must be exactly 5 digits, got {0:?}")]
    InvalidZip(String),
    #[error("unknown state code {0:?}")]
    UnknownState(String),
    #[error("radius must be a positive whole number of miles, got {0:?}")]
    InvalidRadius(String),
    #[error("a city needs a state")]
    CityWithoutState,
    #[error("give either a ZIP code or a city/state, not both")]
    Ambiguous,
    #[error("a city, state, or ZIP code is required")]
    Missing,
}

pub(crate) fn parse_radius(raw: &str) -> Result<u32, LocationError> {
    match raw.trim().parse::<u32>() {
        Ok(r) if r > 0 => Ok(r),
        _ => Err(LocationError::InvalidRadius(raw.to_string())),
    }
}

fn present(field: Option<&str>) -> Option<&str> {
    field.map(str::trim).filter(|s| !s.is_empty())
}

/// Validates raw form fields into a location. Blank fields count as absent.
pub fn validate_location(
    city: Option<&str>,
    state: Option<&str>,
    zip: Option<&str>,
    radius: Option<&str>,
) -> Result<LocationQuery, LocationError> {
    let radius_miles = present(radius).map(parse_radius).transpose()?;
    let (city, state, zip) = (present(city), present(state), present(zip));

    if let Some(zip) = zip {
        if city.is_some() || state.is_some() {
            return Err(LocationError::Ambiguous);
        }
        if zip.len() != 5 || !zip.bytes().all(|b| b.is_ascii_digit()) {
            return Err(LocationError::InvalidZip(zip.to_string()));
        }
        return Ok(LocationQuery {
            kind: LocationKind::Zip,
            city: None,
            state: None,
            zip: Some(zip.to_string()),
            radius_miles,
        });
    }

    let state = match state {
        Some(s) => s.parse::<StateCode>()?,
        None if city.is_some() => return Err(LocationError::CityWithoutState),
        None => return Err(LocationError::Missing),
    };
    Ok(LocationQuery {
        kind: if city.is_some() {
            LocationKind::CityState
        } else {
            LocationKind::State
        },
        city: city.map(str::to_string),
        state: Some(state),
        zip: None,
        radius_miles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zip_kinds() {
        let q = validate_location(None, None, Some("60660"), None).unwrap();
        assert_eq!(q.kind, LocationKind::Zip);
        assert_eq!(q.query_value(), "60660");
        assert_eq!(
            validate_location(None, None, Some("1234"), None),
            Err(LocationError::InvalidZip("1234".into()))
        );
        assert!(validate_location(None, None, Some("6066a"), None).is_err());
    }

    #[test]
    fn state_and_city() {
        assert_eq!(
            validate_location(None, Some("XZ"), None, None),
            Err(LocationError::UnknownState("XZ".into()))
        );
        let q = validate_location(Some("Chicago"), Some("il"), None, Some("25")).unwrap();
        assert_eq!(q.kind, LocationKind::CityState);
        assert_eq!(q.query_value(), "Chicago, IL");
        assert_eq!(q.radius_miles, Some(25));
        assert_eq!(
            validate_location(Some("Chicago"), None, None, None),
            Err(LocationError::CityWithoutState)
        );
    }

    #[test]
    fn radius_must_be_positive() {
        for bad in ["0", "-5", "ten", "2.5"] {
            assert!(matches!(
                validate_location(None, Some("IL"), None, Some(bad)),
                Err(LocationError::InvalidRadius(_))
            ));
        }
    }

    #[test]
    fn nothing_given() {
        assert_eq!(validate_location(None, Some(" "), None, None), Err(LocationError::Missing));
    }
}
