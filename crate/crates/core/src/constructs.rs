//! Explicit environments and announcements: the two-agent, two-outcome
//! allocation example; a single-individual announcement that guarantees weak
//! Maskin monotonicity while opaque at one profile; and two-outcome
//! announcements that guarantee non-bossiness.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::announce::{Announcement, Selection};
use crate::gen::{full_strict_domain_within, GenError, DEFAULT_DOMAIN_LIMIT};
use crate::model::{
    Domain, Environment, IndividualId, ModelError, OutcomeId, Profile, ProfileId, Ranking,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructError {
    #[error("at least 3 outcomes are required, found {0}")]
    TooFewOutcomes(usize),
    #[error("the ranking is not strict")]
    NotStrict,
    #[error("the ranking equals the reference ranking, which improves no outcome")]
    ReferenceRanking,
    #[error("individual {individual} does not strictly rank the two outcomes at profile {profile}")]
    NotStrictlyRanked {
        profile: ProfileId,
        individual: IndividualId,
    },
    #[error("the two outcomes must differ")]
    SameOutcome,
    #[error("outcome {0} is out of range")]
    UnknownOutcome(OutcomeId),
    #[error("image rule lists {found} choices for {expected} profiles")]
    RuleLength { expected: usize, found: usize },
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The strict ranking `x1 > x2 > ... > xN`.
pub fn reference_ranking(outcomes: usize) -> Result<Ranking, ConstructError> {
    if outcomes < 3 {
        return Err(ConstructError::TooFewOutcomes(outcomes));
    }
    let order: Vec<_> = (0..outcomes).map(OutcomeId).collect();
    Ok(Ranking::strict(&order)?)
}

fn check_improvable(ranking: &Ranking) -> Result<(), ConstructError> {
    if !ranking.is_strict() {
        return Err(ConstructError::NotStrict);
    }
    if ranking.num_outcomes() < 3 {
        return Err(ConstructError::TooFewOutcomes(ranking.num_outcomes()));
    }
    if *ranking == reference_ranking(ranking.num_outcomes())? {
        return Err(ConstructError::ReferenceRanking);
    }
    Ok(())
}

/// Outcomes with strictly fewer outcomes above them under `ranking` than
/// under the reference ranking (where `x_k` has `k - 1` above it).
pub fn improved_set(ranking: &Ranking) -> Result<BTreeSet<OutcomeId>, ConstructError> {
    check_improvable(ranking)?;
    Ok((0..ranking.num_outcomes())
        .map(OutcomeId)
        .filter(|&x| ranking.outcomes_above(x) < x.0)
        .collect())
}

/// The improved outcome ranked highest by `ranking`.
///
/// This takes the improved outcome with the fewest outcomes above it. The
/// alternative of minimizing the outcomes below it would pick the lowest
/// improved outcome instead; for `x1 > x5 > x4 > x2 > x3` the improved set is
/// `{x4, x5}` and the choice here is `x5`.
pub fn best_improved(ranking: &Ranking) -> Result<OutcomeId, ConstructError> {
    improved_set(ranking)?
        .into_iter()
        .min_by_key(|&x| ranking.outcomes_above(x))
        .ok_or(ConstructError::ReferenceRanking)
}

/// A single-individual strict environment with an announcement that is
/// opaque only at the reference profile, and its two selections.
#[derive(Debug, Clone, PartialEq)]
pub struct WmmConstruction {
    pub environment: Arc<Environment>,
    pub reference: ProfileId,
    pub announcement: Announcement,
    /// Picks `x_{N-1}` at the reference profile.
    pub phi: Selection,
    /// Picks `x_N` at the reference profile.
    pub psi: Selection,
}

/// Images `{x_{N-1}, x_N}` at the reference profile and `{best_improved(P)}`
/// everywhere else.
pub fn build_wmm_announcement(outcomes: usize) -> Result<WmmConstruction, ConstructError> {
    build_wmm_announcement_within(outcomes, DEFAULT_DOMAIN_LIMIT)
}

pub fn build_wmm_announcement_within(
    outcomes: usize,
    limit: usize,
) -> Result<WmmConstruction, ConstructError> {
    let reference_order = reference_ranking(outcomes)?;
    let domain = full_strict_domain_within(1, outcomes, limit)?;
    let environment = Arc::new(Environment::with_default_labels(domain)?);
    let domain = environment.domain();
    let reference = domain
        .position(&Profile::new(vec![reference_order])?)
        .expect("the full strict domain contains every ranking");

    let (second_last, last) = (OutcomeId(outcomes - 2), OutcomeId(outcomes - 1));
    let images = domain
        .ids()
        .map(|p| {
            if p == reference {
                Ok(vec![second_last, last])
            } else {
                Ok(vec![best_improved(&domain.profile(p).rankings()[0])?])
            }
        })
        .collect::<Result<Vec<_>, ConstructError>>()?;
    let announcement = Announcement::new(environment.clone(), images)
        .expect("images are valid outcome sets");
    let pick = |at_reference: OutcomeId| {
        let mut values: Vec<_> = announcement.images().iter().map(|img| img[0]).collect();
        values[reference.0] = at_reference;
        Selection::new(environment.clone(), values).expect("values come from the images")
    };
    let phi = pick(second_last);
    let psi = pick(last);
    Ok(WmmConstruction {
        environment,
        reference,
        announcement,
        phi,
        psi,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageChoice {
    X,
    Y,
    Both,
}

/// How a two-outcome announcement picks its image at each profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImageRule {
    Uniform(ImageChoice),
    PerProfile(Vec<ImageChoice>),
}

/// An announcement with every image inside `{x, y}`, on an environment in
/// which every individual strictly ranks `x` against `y` at every profile.
pub fn build_two_outcome_announcement(
    env: &Arc<Environment>,
    x: OutcomeId,
    y: OutcomeId,
    rule: &ImageRule,
) -> Result<Announcement, ConstructError> {
    for z in [x, y] {
        if z.0 >= env.num_outcomes() {
            return Err(ConstructError::UnknownOutcome(z));
        }
    }
    if x == y {
        return Err(ConstructError::SameOutcome);
    }
    let domain = env.domain();
    for p in domain.ids() {
        if let Some(i) = domain
            .profile(p)
            .rankings()
            .iter()
            .position(|r| !r.strictly_ranks(x, y))
        {
            return Err(ConstructError::NotStrictlyRanked {
                profile: p,
                individual: IndividualId(i),
            });
        }
    }
    let choices = match rule {
        ImageRule::Uniform(choice) => vec![*choice; domain.len()],
        ImageRule::PerProfile(choices) if choices.len() == domain.len() => choices.clone(),
        ImageRule::PerProfile(choices) => {
            return Err(ConstructError::RuleLength {
                expected: domain.len(),
                found: choices.len(),
            })
        }
    };
    let images = choices
        .into_iter()
        .map(|c| match c {
            ImageChoice::X => vec![x],
            ImageChoice::Y => vec![y],
            ImageChoice::Both => vec![x, y],
        })
        .collect();
    Ok(Announcement::new(env.clone(), images).expect("x and y are valid outcomes"))
}

/// Two individuals `A`, `B` and two allocations of objects 1 and 2:
/// `x` gives A object 1 and B object 2, `y` gives A object 2 and B object 1.
/// Profiles in order: both prefer x; A x, B y; A y, B x; both prefer y.
/// The announcement maximizes the number of individuals who get their top
/// object, so it is `{x}`, `{x, y}`, `{x, y}`, `{y}`.
pub fn build_intro_example() -> (Arc<Environment>, Announcement) {
    let (x, y) = (OutcomeId(0), OutcomeId(1));
    let prefers_x = Ranking::strict(&[x, y]).expect("strict");
    let prefers_y = Ranking::strict(&[y, x]).expect("strict");
    let profile = |a: &Ranking, b: &Ranking| Profile::new(vec![a.clone(), b.clone()]).expect("shape");
    let domain = Domain::new([
        profile(&prefers_x, &prefers_x),
        profile(&prefers_x, &prefers_y),
        profile(&prefers_y, &prefers_x),
        profile(&prefers_y, &prefers_y),
    ])
    .expect("four distinct profiles");
    let env = Arc::new(
        Environment::new(
            vec!["x".into(), "y".into()],
            vec!["A".into(), "B".into()],
            domain,
        )
        .expect("labels are unique"),
    );
    let announcement = Announcement::new(
        env.clone(),
        vec![vec![x], vec![x, y], vec![x, y], vec![y]],
    )
    .expect("valid images");
    (env, announcement)
}
