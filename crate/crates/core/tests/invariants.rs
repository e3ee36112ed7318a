mod common;

use std::collections::HashSet;
use std::sync::Arc;

use common::{nonempty_subsets, permutations, single_env};
use itertools::Itertools;
use opacity_core::gen::{full_strict_domain, full_weak_domain};
use opacity_core::{
    adjacent_individual, check_property, check_richness, guarantee_pairwise,
    is_monotonic_transformation, Announcement, CheckOptions, Domain, Environment, OutcomeId,
    PropertyKind, Selection,
};
use proptest::prelude::*;

fn weak_env() -> Arc<Environment> {
    Arc::new(Environment::with_default_labels(full_weak_domain(2, 3).unwrap()).unwrap())
}

proptest! {
    #[test]
    fn adjacency_is_symmetric(a in 0usize..10_000, b in 0usize..10_000) {
        let env = weak_env();
        let d = env.domain();
        let (p, q) = (&d.profiles()[a % d.len()], &d.profiles()[b % d.len()]);
        prop_assert_eq!(adjacent_individual(p, q).unwrap(), adjacent_individual(q, p).unwrap());
    }

    #[test]
    fn monotonic_transformation_is_reflexive(a in 0usize..10_000, x in 0usize..3) {
        let env = weak_env();
        let p = &env.domain().profiles()[a % env.domain().len()];
        prop_assert!(is_monotonic_transformation(p, p, OutcomeId(x)).unwrap());
    }

    #[test]
    fn enumeration_is_exhaustive_unique_and_possible(masks in prop::collection::vec(1usize..8, 4)) {
        let env = single_env(&permutations(3)[..4]);
        let subsets = nonempty_subsets(3);
        let images = masks.iter().map(|&m| subsets[m - 1].clone()).collect();
        let a = Announcement::new(env, images).unwrap();
        let all: Vec<Selection> = a.enumerate_selections(1 << 20).unwrap().collect();
        prop_assert_eq!(num_bigint::BigUint::from(all.len()), a.selection_count());
        prop_assert!(all.iter().all(|s| s.is_possible_under(&a)));
        let unique: HashSet<&Selection> = all.iter().collect();
        prop_assert_eq!(unique.len(), all.len());
        prop_assert_eq!(a.is_fully_transparent(), all.len() == 1);
    }

    #[test]
    fn pairwise_witnesses_are_sound(
        seed_images in prop::collection::vec(prop::collection::vec(0usize..4, 1..3), 24),
        kind in prop::sample::select(PropertyKind::ALL.to_vec()),
    ) {
        let env = common::full_strict_env(1, 4);
        let images = seed_images.into_iter().map(|img| img.into_iter().map(OutcomeId).collect()).collect();
        let a = Announcement::new(env, images).unwrap();
        let report = guarantee_pairwise(&a, kind);
        if let Some(w) = report.witness {
            let opts = CheckOptions::default();
            prop_assert!(w.selection.is_possible_under(&a));
            prop_assert!(w.violation.exhibited_by(&w.selection, &opts));
            prop_assert!(!check_property(&w.selection, kind, &opts).is_pass());
        }
    }
}

#[test]
fn richness_gaps_of_supersets_lie_in_added_profiles() {
    let perms = permutations(3);
    for mask in 1u32..64 {
        let base: Vec<_> = (0..6).filter(|k| mask & (1 << k) != 0).collect();
        let base_env = single_env(&base.iter().map(|&k| perms[k].clone()).collect_vec());
        let base_rich = check_richness(base_env.domain()).is_pass();
        for extra in 0u32..64 {
            if extra & mask != 0 || !base_rich {
                continue;
            }
            let added = (0..6).filter(|k| extra & (1 << k) != 0);
            let orders: Vec<_> = base.iter().copied().chain(added).map(|k| perms[k].clone()).collect();
            let env = single_env(&orders);
            if let Some(gap) = check_richness(env.domain()).into_failure() {
                assert!(gap.profile.0 >= base.len(), "gap {gap:?} in original profile");
            }
        }
    }
}

#[test]
fn full_strict_domains_are_rich_from_three_outcomes() {
    for (individuals, outcomes) in [(1, 3), (1, 4), (1, 5), (2, 3), (3, 3), (2, 4)] {
        let d = full_strict_domain(individuals, outcomes).unwrap();
        assert!(check_richness(&d).is_pass(), "{individuals} x {outcomes}");
    }
    for individuals in 1..=3 {
        let d = full_strict_domain(individuals, 2).unwrap();
        assert!(!check_richness(&d).is_pass());
    }
}

#[test]
fn any_two_outcome_strict_domain_fails_richness() {
    let env = common::full_strict_env(2, 2);
    let profiles = env.domain().profiles().to_vec();
    for subset in (1..=profiles.len()).flat_map(|k| profiles.iter().cloned().combinations(k)) {
        let d = Domain::new(subset).unwrap();
        assert!(!check_richness(&d).is_pass());
    }
}
