#![allow(dead_code)]

use std::sync::Arc;

use itertools::Itertools;
use opacity_core::gen::full_strict_domain;
use opacity_core::{Domain, Environment, OutcomeId, Profile, Ranking};

pub fn o(k: usize) -> OutcomeId {
    OutcomeId(k)
}

pub fn strict(order: &[usize]) -> Ranking {
    Ranking::strict(&order.iter().map(|&k| OutcomeId(k)).collect::<Vec<_>>()).unwrap()
}

pub fn full_strict_env(individuals: usize, outcomes: usize) -> Arc<Environment> {
    Arc::new(Environment::with_default_labels(full_strict_domain(individuals, outcomes).unwrap()).unwrap())
}

/// Single-individual environment over the given strict orders.
pub fn single_env(orders: &[Vec<usize>]) -> Arc<Environment> {
    let n = orders[0].len();
    let d = Domain::new(orders.iter().map(|ord| Profile::new(vec![strict(ord)]).unwrap())).unwrap();
    assert_eq!(d.num_outcomes(), n);
    Arc::new(Environment::with_default_labels(d).unwrap())
}

/// Every non-empty subset of `0..n`, ordered by bitmask.
pub fn nonempty_subsets(n: usize) -> Vec<Vec<OutcomeId>> {
    (1u32..(1 << n))
        .map(|mask| (0..n).filter(|k| mask & (1 << k) != 0).map(OutcomeId).collect())
        .collect()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    (0..n).permutations(n).collect()
}
