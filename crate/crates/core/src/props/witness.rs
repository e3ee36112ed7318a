//! Constructive manipulation witness for opaque announcements.
//!
//! Given an opaque announcement on a rich domain, pick a profile `R` with two
//! possible outcomes `x P_i y`, and an alternative report `R'_i` that keeps
//! everything `x` strictly beat below `x`. Fix the value `c` at `R'`. Either
//! `c P_i y`, and choosing `y` at `R` lets `i` gain by reporting `R'_i`; or
//! `y R_i c`, so `x P_i c`, hence `x P'_i c`, and choosing `x` at `R` lets
//! `i` gain at `R'` by reporting `R_i`.

use thiserror::Error;

use crate::announce::{Announcement, Selection};
use crate::model::{
    check_no_universal_indifference, check_richness, IndividualId, OutcomeId, ProfileId,
    RichnessGap, UniversalIndifference, Verdict,
};
use crate::props::{check_sp, CheckOptions, PropertyKind, Relation, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("the announcement is fully transparent")]
    Transparent,
    #[error("the domain is not rich: {0:?}")]
    NotRich(RichnessGap),
    #[error("universal indifference in the domain: {0:?}")]
    UniversalIndifference(UniversalIndifference),
    #[error("at least 3 outcomes are required, found {0}")]
    TooFewOutcomes(usize),
    #[error("neither c P_i y nor x P'_i c holds at profiles {profile} and {deviation}")]
    BranchGap {
        profile: ProfileId,
        deviation: ProfileId,
    },
    #[error("the constructed selection passes the strategy-proofness check")]
    Unconfirmed,
}

impl WitnessError {
    /// Short machine name for precondition failures.
    pub fn code(&self) -> &'static str {
        match self {
            WitnessError::Transparent => "transparent",
            WitnessError::NotRich(_) => "not-rich",
            WitnessError::UniversalIndifference(_) => "universal-indifference",
            WitnessError::TooFewOutcomes(_) => "N<3",
            WitnessError::BranchGap { .. } => "branch-gap",
            WitnessError::Unconfirmed => "unconfirmed",
        }
    }
}

/// Which of the two mechanisms is manipulable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessBranch {
    /// `c P_i y`: the mechanism choosing `y` at `R` is manipulated at `R` via `R'_i`.
    WorseAtProfile,
    /// `x P'_i c`: the mechanism choosing `x` at `R` is manipulated at `R'` via `R_i`.
    BetterAtProfile,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationWitness {
    pub profile: ProfileId,
    pub deviation: ProfileId,
    pub individual: IndividualId,
    /// `x`, the member of the image at `profile` that `individual` prefers.
    pub better: OutcomeId,
    /// `y`, the other member.
    pub worse: OutcomeId,
    /// `c`, the value fixed at `deviation`.
    pub completion: OutcomeId,
    pub branch: WitnessBranch,
    pub violation: Violation,
    pub selection: Selection,
}

/// Builds a selection of `announcement` that fails strategy-proofness.
pub fn manipulation_witness(
    announcement: &Announcement,
) -> Result<ManipulationWitness, WitnessError> {
    let env = announcement.environment();
    let domain = env.domain();
    if env.num_outcomes() < 3 {
        return Err(WitnessError::TooFewOutcomes(env.num_outcomes()));
    }
    let (profile, image) = domain
        .ids()
        .map(|p| (p, announcement.image(p)))
        .find(|(_, img)| img.len() >= 2)
        .ok_or(WitnessError::Transparent)?;
    if let Verdict::Fail(gap) = check_no_universal_indifference(domain) {
        return Err(WitnessError::UniversalIndifference(gap));
    }
    if let Verdict::Fail(gap) = check_richness(domain) {
        return Err(WitnessError::NotRich(gap));
    }

    let rankings = domain.profile(profile).rankings();
    let (mut x, mut y) = (image[0], image[1]);
    let individual = rankings
        .iter()
        .position(|r| r.strictly_ranks(x, y))
        .map(IndividualId)
        .expect("no universal indifference was checked above");
    let own = &rankings[individual.0];
    if own.prefers(y, x) {
        std::mem::swap(&mut x, &mut y);
    }

    let deviation = domain
        .variants(profile, individual)
        .find(|&q| own.lower_contour_kept_by(domain.profile(q).ranking(individual), x))
        .expect("richness was checked above");
    let reported = domain.profile(deviation).ranking(individual);
    let c = announcement.image(deviation)[0];

    let worse_branch = own.prefers(c, y);
    let better_branch = reported.prefers(x, c);
    if !(worse_branch || better_branch) {
        return Err(WitnessError::BranchGap {
            profile,
            deviation,
        });
    }

    let relation = Relation::Manipulation { individual };
    let (branch, violation) = if worse_branch {
        (
            WitnessBranch::WorseAtProfile,
            Violation {
                property: PropertyKind::Sp,
                profile,
                deviation,
                individual: Some(individual),
                outcome: y,
                deviation_outcome: c,
                relation,
            },
        )
    } else {
        (
            WitnessBranch::BetterAtProfile,
            Violation {
                property: PropertyKind::Sp,
                profile: deviation,
                deviation: profile,
                individual: Some(individual),
                outcome: c,
                deviation_outcome: x,
                relation,
            },
        )
    };
    let at_profile = if worse_branch { y } else { x };
    let selection = announcement
        .restrict_pairwise(profile, at_profile, deviation, c)
        .expect("both values are drawn from their images");

    let opts = CheckOptions::default();
    if check_sp(&selection).is_pass() || !violation.exhibited_by(&selection, &opts) {
        return Err(WitnessError::Unconfirmed);
    }
    Ok(ManipulationWitness {
        profile,
        deviation,
        individual,
        better: x,
        worse: y,
        completion: c,
        branch,
        violation,
        selection,
    })
}
