mod common;

use std::path::Path;
use std::sync::Arc;

use common::*;
use opacity_cli::files::{to_canonical_json, AnnouncementFile, EnvironmentFile};
use opacity_core::{Announcement, Domain, Environment, OutcomeId, Profile, Ranking};
use proptest::prelude::*;
use serde_json::json;

const GOLDEN_INTRO: &str = include_str!("golden/intro_announcement.json");
const GOLDEN_WMM3: &str = include_str!("golden/wmm3_announcement.json");

#[test]
fn intro_build_matches_golden_bytes() {
    let run = audit(&["build", "--construction", "intro"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout, GOLDEN_INTRO);
}

#[test]
fn wmm_build_matches_golden_bytes() {
    let run = audit(&["build", "--construction", "thm2", "--n", "3"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout, GOLDEN_WMM3);
}

#[test]
fn golden_intro_has_the_expected_content() {
    let x = || json!(["x"]);
    let y = || json!(["y"]);
    let expected = json!({
        "environment": {
            "outcomes": ["x", "y"],
            "individuals": ["A", "B"],
            "profiles": [
                [[x(), y()], [x(), y()]],
                [[x(), y()], [y(), x()]],
                [[y(), x()], [x(), y()]],
                [[y(), x()], [y(), x()]]
            ]
        },
        "images": [["x"], ["x", "y"], ["x", "y"], ["y"]]
    });
    let parsed: serde_json::Value = serde_json::from_str(GOLDEN_INTRO).unwrap();
    assert_eq!(parsed, expected);
    assert!(!GOLDEN_INTRO.contains('\r'));
    assert!(GOLDEN_INTRO.ends_with("}\n"));
}

#[test]
fn build_out_files_are_canonical() {
    let dir = tempfile::tempdir().unwrap();
    audit(&["build", "--construction", "intro", "--out", path_str(dir.path())]);
    for name in ["environment.json", "announcement.json"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        let recanonical = match name {
            "environment.json" => to_canonical_json(&EnvironmentFile::parse(&text).unwrap()),
            _ => to_canonical_json(&AnnouncementFile::parse(&text).unwrap()),
        };
        assert_eq!(recanonical, text, "{name}");
    }
}

#[test]
fn announcement_may_reference_environment_by_path() {
    let dir = tempfile::tempdir().unwrap();
    audit(&["build", "--construction", "intro", "--out", path_str(dir.path())]);
    let linked = dir.path().join("linked.json");
    let text = json!({
        "environment": "environment.json",
        "images": [["x"], ["x", "y"], ["x", "y"], ["y"]]
    });
    std::fs::write(&linked, text.to_string()).unwrap();
    let run = audit(&["check", path_str(&linked), "--property", "sp", "--method", "both"]);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);

    let inline = AnnouncementFile::load(&dir.path().join("announcement.json")).unwrap();
    let by_path = AnnouncementFile::load(&linked).unwrap();
    assert_eq!(inline.images(), by_path.images());
    assert_eq!(inline.environment().domain(), by_path.environment().domain());
}

/// Random weak rankings, given as per-outcome levels that are compressed to be gapless.
fn ranking(outcomes: usize) -> impl Strategy<Value = Ranking> {
    prop::collection::vec(0..outcomes, outcomes).prop_map(|raw| {
        let mut used: Vec<usize> = raw.clone();
        used.sort_unstable();
        used.dedup();
        let levels: Vec<usize> = raw.iter().map(|l| used.binary_search(l).unwrap()).collect();
        Ranking::from_levels(&levels).unwrap()
    })
}

fn announcement() -> impl Strategy<Value = Announcement> {
    (1usize..=3, 2usize..=4)
        .prop_flat_map(|(individuals, outcomes)| {
            let profile = prop::collection::vec(ranking(outcomes), individuals);
            (Just(outcomes), prop::collection::vec(profile, 1..8))
        })
        .prop_flat_map(|(outcomes, profiles)| {
            let domain = Domain::new(profiles.into_iter().map(|rs| Profile::new(rs).unwrap())).unwrap();
            let env = Arc::new(Environment::with_default_labels(domain).unwrap());
            let image = prop::collection::btree_set(0..outcomes, 1..=outcomes)
                .prop_map(|s| s.into_iter().map(OutcomeId).collect::<Vec<_>>());
            let len = env.domain().len();
            (Just(env), prop::collection::vec(image, len))
        })
        .prop_map(|(env, images)| Announcement::new(env, images).unwrap())
}

proptest! {
    #[test]
    fn canonical_serialization_round_trips(a in announcement()) {
        let text = to_canonical_json(&AnnouncementFile::from_announcement(&a));
        let file = AnnouncementFile::parse(&text).unwrap();
        prop_assert_eq!(to_canonical_json(&file), text.clone());

        let back = file.to_announcement(Path::new(".")).unwrap();
        prop_assert_eq!(back.images(), a.images());
        prop_assert_eq!(back.environment().domain(), a.environment().domain());
        prop_assert_eq!(to_canonical_json(&AnnouncementFile::from_announcement(&back)), text);
    }

    #[test]
    fn environment_round_trips_through_files(a in announcement()) {
        let env = a.environment();
        let text = to_canonical_json(&EnvironmentFile::from_environment(env));
        let back = EnvironmentFile::parse(&text).unwrap().to_environment().unwrap();
        prop_assert_eq!(back.domain(), env.domain());
        prop_assert_eq!(back.outcome_labels(), env.outcome_labels());
        prop_assert_eq!(back.individual_labels(), env.individual_labels());
    }

    #[test]
    fn class_order_inside_input_is_irrelevant(a in announcement()) {
        // Reversing every indifference class and image must parse to the same announcement.
        let text = to_canonical_json(&AnnouncementFile::from_announcement(&a));
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        for profile in value["environment"]["profiles"].as_array_mut().unwrap() {
            for ranking in profile.as_array_mut().unwrap() {
                for class in ranking.as_array_mut().unwrap() {
                    class.as_array_mut().unwrap().reverse();
                }
            }
        }
        for image in value["images"].as_array_mut().unwrap() {
            image.as_array_mut().unwrap().reverse();
        }
        let file = AnnouncementFile::parse(&value.to_string()).unwrap();
        let back = file.to_announcement(Path::new(".")).unwrap();
        prop_assert_eq!(to_canonical_json(&AnnouncementFile::from_announcement(&back)), text);
    }
}
