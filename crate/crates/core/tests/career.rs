use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use heyfriend_core::career::{
    build_request, fetch, validate_location, CareerCache, CareerError, CareerKind, CareerParams, FixtureClient,
    MockCareerClient, OccupationList, OnetCode, Param, RawCareerQuery, ReportScope, DEFAULT_CACHE_TTL,
};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn code(s: &str) -> OnetCode {
    s.parse().unwrap()
}

/// Same inputs the golden generator used.
fn full_params(kind: CareerKind) -> CareerParams {
    let mut p = CareerParams::default();
    for param in kind.signature() {
        match param {
            Param::Location => p.location = Some(validate_location(Some("Chicago"), Some("IL"), None, Some("25")).unwrap()),
            Param::Occupation => p.occupation = Some(code("15-1252.00")),
            Param::CompareOccupation => p.compare_occupation = Some(code("29-1292.00")),
            Param::State => p.state = Some("IL".parse().unwrap()),
            Param::Scope => p.scope = Some(ReportScope::Us),
            Param::Radius => p.radius_miles = Some(50),
        }
    }
    p
}

fn without(mut p: CareerParams, param: Param) -> CareerParams {
    match param {
        Param::Location => p.location = None,
        Param::Occupation => p.occupation = None,
        Param::CompareOccupation => p.compare_occupation = None,
        Param::State => p.state = None,
        Param::Scope => p.scope = None,
        Param::Radius => p.radius_miles = None,
    }
    p
}

#[test]
fn requests_match_golden_files() {
    for kind in CareerKind::ALL {
        let path = data(&format!("fixtures/career/requests/{}.json", kind.slug()));
        let golden = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let built = build_request(kind, &full_params(kind)).unwrap();
        assert_eq!(built.to_golden(), golden, "{}", kind.slug());
    }
}

#[test]
fn every_strict_subset_is_rejected() {
    let mut checked = 0;
    for kind in CareerKind::ALL {
        let sig = kind.signature();
        assert!(!sig.is_empty());
        for mask in 0..(1u32 << sig.len()) - 1 {
            let mut p = full_params(kind);
            for (i, param) in sig.iter().enumerate() {
                if mask & (1 << i) == 0 {
                    p = without(p, *param);
                }
            }
            let err = build_request(kind, &p).unwrap_err();
            assert!(matches!(err, CareerError::MissingParameter { .. }), "{kind:?} mask {mask}: {err:?}");
            assert!(err.is_validation());
            checked += 1;
        }
    }
    // Nine one-parameter kinds and five two-parameter kinds.
    assert_eq!(checked, 9 + 5 * 3);
}

#[test]
fn extra_parameters_are_rejected() {
    let all = [
        Param::Location,
        Param::Occupation,
        Param::CompareOccupation,
        Param::State,
        Param::Scope,
        Param::Radius,
    ];
    for kind in CareerKind::ALL {
        let sig: BTreeSet<Param> = kind.signature().iter().copied().collect();
        for extra in all.iter().filter(|p| !sig.contains(p)) {
            let mut p = full_params(kind);
            let donor = full_params(match extra {
                Param::Location => CareerKind::ALL[0],
                Param::CompareOccupation => CareerKind::SkillsGaps,
                Param::Scope => CareerKind::OccupationalReports,
                Param::Radius => CareerKind::StateResources,
                _ => CareerKind::Occupations,
            });
            match extra {
                Param::Location => p.location = donor.location,
                Param::Occupation => p.occupation = donor.occupation,
                Param::CompareOccupation => p.compare_occupation = donor.compare_occupation,
                Param::State => p.state = donor.state,
                Param::Scope => p.scope = donor.scope,
                Param::Radius => p.radius_miles = donor.radius_miles,
            }
            assert!(
                matches!(build_request(kind, &p), Err(CareerError::UnexpectedParameter { .. })),
                "{kind:?} accepted extra {extra:?}"
            );
        }
    }
}

#[test]
fn cache_key_is_stable() {
    let a = build_request(CareerKind::SalariesAndWages, &full_params(CareerKind::SalariesAndWages)).unwrap();
    let b = build_request(CareerKind::SalariesAndWages, &full_params(CareerKind::SalariesAndWages)).unwrap();
    assert_eq!(a.cache_key(), b.cache_key());
    assert_eq!(a.cache_key().len(), 64);
    let other = build_request(CareerKind::LaborMarketInformation, &full_params(CareerKind::LaborMarketInformation)).unwrap();
    assert_ne!(a.cache_key(), other.cache_key());
}

#[tokio::test]
async fn fixtures_parse_and_repeat_hits_cache() {
    let client = FixtureClient::new(data("fixtures/career/responses"));
    let cache = CareerCache::new(DEFAULT_CACHE_TTL);
    for kind in CareerKind::ALL {
        let ds = fetch(kind, &full_params(kind), &client, &cache).await.unwrap();
        assert!(!ds.columns.is_empty(), "{}", kind.slug());
        assert!(!ds.rows.is_empty(), "{}", kind.slug());
        assert!(ds.rows.iter().all(|r| r.len() == ds.columns.len()));
    }
    assert_eq!(client.calls(), 14);
    for kind in CareerKind::ALL {
        fetch(kind, &full_params(kind), &client, &cache).await.unwrap();
    }
    assert_eq!(client.calls(), 14);

    let unemployment = cache
        .get(&build_request(CareerKind::Unemployment, &full_params(CareerKind::Unemployment)).unwrap().cache_key())
        .unwrap();
    assert_eq!(unemployment.rows.len(), 1);
}

#[tokio::test]
async fn invalid_requests_never_reach_the_client() {
    let client = FixtureClient::new(data("fixtures/career/responses"));
    let cache = CareerCache::new(DEFAULT_CACHE_TTL);
    for kind in CareerKind::ALL {
        assert!(fetch(kind, &CareerParams::default(), &client, &cache).await.is_err());
    }
    assert_eq!(client.calls(), 0);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_identical_requests_share_one_upstream_call() {
    let body = std::fs::read_to_string(data("fixtures/career/responses/unemployment.json")).unwrap();
    let client = Arc::new(MockCareerClient::from_fn(move |_| Ok(body.clone())).with_delay(Duration::from_millis(50)));
    let cache = Arc::new(CareerCache::new(DEFAULT_CACHE_TTL));
    let mut tasks = Vec::new();
    for _ in 0..16 {
        let (client, cache) = (client.clone(), cache.clone());
        tasks.push(tokio::spawn(async move {
            let p = full_params(CareerKind::Unemployment);
            fetch(CareerKind::Unemployment, &p, client.as_ref(), &cache).await.unwrap()
        }));
    }
    for t in tasks {
        t.await.unwrap();
    }
    assert_eq!(client.calls(), 1);
}

#[test]
fn curated_occupations_resolve_against_taxonomy() {
    let list = OccupationList::load(data("occupations.json")).unwrap();
    assert_eq!(list.len(), 50);
    let taxonomy: HashMap<String, String> = std::fs::read_to_string(data("onet_taxonomy_excerpt.tsv"))
        .unwrap()
        .lines()
        .skip(1)
        .filter_map(|l| l.split_once('\t'))
        .map(|(c, t)| (c.trim().to_string(), t.trim().to_string()))
        .collect();
    for entry in list.entries() {
        let resolved = list.resolve_occupation(&entry.display_name).unwrap();
        assert_eq!(resolved, &entry.onet_code);
        let title = taxonomy
            .get(entry.onet_code.as_str())
            .unwrap_or_else(|| panic!("{} not in taxonomy", entry.onet_code.as_str()));
        assert_eq!(title, &entry.onet_title);
        let upper = list.resolve_occupation(&entry.display_name.to_uppercase()).unwrap();
        assert_eq!(upper, &entry.onet_code);
    }
    assert!(list.resolve_occupation("Dragon Tamer").is_err());
}

#[test]
fn raw_queries_map_to_params() {
    let list = OccupationList::load(data("occupations.json")).unwrap();
    let raw = RawCareerQuery {
        occupation: Some("Software Developer".into()),
        compare_occupation: Some("29-1292.00".into()),
        ..Default::default()
    };
    let p = CareerParams::from_raw(CareerKind::SkillsGaps, &raw, &list).unwrap();
    assert_eq!(p.occupation, Some(code("15-1252.00")));
    assert!(build_request(CareerKind::SkillsGaps, &p).is_ok());

    let zip = RawCareerQuery {
        zip: Some("6066".into()),
        ..Default::default()
    };
    let err = CareerParams::from_raw(CareerKind::AmericanJobCenter, &zip, &list).unwrap_err();
    assert!(err.is_validation());
}
