//! The pairwise decomposition must agree with enumerating every selection.

mod common;

use std::sync::Arc;

use common::{nonempty_subsets, permutations, single_env};
use itertools::Itertools;
use opacity_core::gen::{announcement_from, full_weak_domain, trial_rng, DomainKind, GenConfig};
use opacity_core::props::{guarantee_bruteforce_with, guarantee_pairwise_with};
use opacity_core::{
    check_property, guarantee_bruteforce, guarantee_pairwise, Announcement, CheckOptions,
    Environment, NonBossyReading, PropertyKind, DEFAULT_SELECTION_CAP,
};

fn assert_agree(a: &Announcement, kind: PropertyKind, opts: &CheckOptions) {
    let brute = guarantee_bruteforce_with(a, kind, DEFAULT_SELECTION_CAP, opts).unwrap();
    let pair = guarantee_pairwise_with(a, kind, opts);
    assert_eq!(
        brute.verdict,
        pair.verdict,
        "{kind} disagreement on images {:?}",
        a.images()
    );
    for report in [&brute, &pair] {
        if let Some(w) = &report.witness {
            assert!(w.selection.is_possible_under(a));
            assert!(w.violation.exhibited_by(&w.selection, opts));
            assert!(!check_property(&w.selection, kind, opts).is_pass());
        }
    }
}

#[test]
fn exhaustive_on_three_profile_subdomains() {
    // every 3-profile subdomain of the single-individual strict domain over 3 outcomes
    let perms = permutations(3);
    let subsets = nonempty_subsets(3);
    let opts = CheckOptions::default();
    let mut checked = 0;
    for chosen in perms.iter().cloned().combinations(3) {
        let env = single_env(&chosen);
        for images in (0..3).map(|_| subsets.iter().cloned()).multi_cartesian_product() {
            let a = Announcement::new(env.clone(), images).unwrap();
            for kind in PropertyKind::ALL {
                assert_agree(&a, kind, &opts);
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 20 * 343);
}

fn random_instances(env: &Arc<Environment>, seed: u64, count: usize) -> Vec<Announcement> {
    let cfg = GenConfig {
        seed,
        outcomes: env.num_outcomes(),
        individuals: env.num_individuals(),
        domain_kind: DomainKind::Explicit,
        opacity_rate: 0.15,
        max_image_size: 3,
    };
    (0..)
        .map(|t| announcement_from(env, &cfg, &mut trial_rng(seed, t)))
        .filter(|a| a.enumerate_selections(DEFAULT_SELECTION_CAP).is_ok())
        .take(count)
        .collect()
}

#[test]
fn random_two_individual_instances() {
    let env = common::full_strict_env(2, 3);
    let opts = CheckOptions::default();
    let instances = random_instances(&env, 2024, 500);
    assert!(instances.iter().filter(|a| a.is_opaque()).count() > 400);
    for kind in PropertyKind::ALL {
        let mut guaranteed = 0;
        for a in &instances {
            assert_agree(a, kind, &opts);
            guaranteed += usize::from(guarantee_pairwise(a, kind).is_guaranteed());
        }
        // both verdicts must actually occur for the comparison to mean something
        if kind == PropertyKind::Sp {
            assert!(guaranteed < instances.len());
        }
    }
}

#[test]
fn random_weak_domain_instances_under_both_readings() {
    let env = Arc::new(Environment::with_default_labels(full_weak_domain(2, 2).unwrap()).unwrap());
    for reading in [NonBossyReading::EitherRanking, NonBossyReading::OriginRanking] {
        let opts = CheckOptions { nonbossy: reading };
        for a in random_instances(&env, 77, 200) {
            for kind in PropertyKind::ALL {
                assert_agree(&a, kind, &opts);
            }
        }
    }
}

#[test]
fn widening_never_repairs_a_failed_guarantee() {
    let env = common::full_strict_env(1, 3);
    let instances = random_instances(&env, 11, 200);
    for a in instances {
        for kind in PropertyKind::ALL {
            if guarantee_pairwise(&a, kind).is_guaranteed() {
                continue;
            }
            for p in 0..a.images().len() {
                for extra in 0..3 {
                    let mut images = a.images().to_vec();
                    images[p].push(common::o(extra));
                    let wider = Announcement::new(env.clone(), images).unwrap();
                    assert!(!guarantee_pairwise(&wider, kind).is_guaranteed());
                    assert!(!guarantee_bruteforce(&wider, kind, DEFAULT_SELECTION_CAP)
                        .unwrap()
                        .is_guaranteed());
                }
            }
        }
    }
}

#[test]
fn transparent_verdict_is_the_single_mechanism_verdict() {
    let env = common::full_strict_env(2, 3);
    let cfg = GenConfig {
        seed: 3,
        outcomes: 3,
        individuals: 2,
        domain_kind: DomainKind::FullStrict,
        opacity_rate: 0.0,
        max_image_size: 1,
    };
    for t in 0..50 {
        let a = announcement_from(&env, &cfg, &mut trial_rng(cfg.seed, t));
        let s = a.unique_selection().unwrap();
        for kind in PropertyKind::ALL {
            let single = check_property(&s, kind, &CheckOptions::default());
            assert_eq!(single.is_pass(), guarantee_pairwise(&a, kind).is_guaranteed());
            let pw = guarantee_pairwise(&a, kind);
            if let (Some(w), Some(v)) = (pw.witness, single.failure()) {
                assert_eq!(&w.violation, v);
                assert_eq!(w.selection, s);
            }
        }
    }
}
