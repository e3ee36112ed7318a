//! Strategy-proofness, weak Maskin monotonicity and non-bossiness.
//!
//! Each property is a conjunction of constraints on the values a mechanism
//! takes at two distinct profiles. [`pair_violation`] evaluates one such
//! constraint; the single-mechanism checkers here and the announcement-level
//! checkers in [`guarantee`] both scan pairs in the same canonical order:
//! first profile ascending, then second profile ascending.

mod guarantee;
mod witness;

pub use guarantee::{
    guarantee_bruteforce, guarantee_bruteforce_with, guarantee_pairwise, guarantee_pairwise_with,
    GuaranteeReport, GuaranteeVerdict, GuaranteeWitness, Method, ScanStats,
};
pub use witness::{manipulation_witness, ManipulationWitness, WitnessBranch, WitnessError};

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use crate::announce::Selection;
use crate::model::{monotonic_at, Domain, IndividualId, OutcomeId, ProfileId, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyKind {
    /// Strategy-proofness.
    Sp,
    /// Weak Maskin monotonicity.
    Wmm,
    /// Non-bossiness.
    NonBossy,
}

impl PropertyKind {
    pub const ALL: [PropertyKind; 3] = [PropertyKind::Sp, PropertyKind::Wmm, PropertyKind::NonBossy];

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyKind::Sp => "sp",
            PropertyKind::Wmm => "wmm",
            PropertyKind::NonBossy => "nonbossy",
        }
    }

    /// SP and non-bossiness only relate profiles that differ in one ranking.
    fn adjacent_pairs_only(self) -> bool {
        !matches!(self, PropertyKind::Wmm)
    }
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PropertyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sp" => Ok(PropertyKind::Sp),
            "wmm" => Ok(PropertyKind::Wmm),
            "nonbossy" => Ok(PropertyKind::NonBossy),
            other => Err(format!("unknown property {other:?} (expected sp, wmm or nonbossy)")),
        }
    }
}

/// Which rankings of the deviating individual count when non-bossiness asks
/// whether the deviator strictly ranks the old and new outcomes.
///
/// Other individuals keep their ranking across an adjacent pair, so only the
/// deviator's side is ambiguous. On strict domains both readings agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NonBossyReading {
    /// A strict comparison under either the original or the new ranking.
    #[default]
    EitherRanking,
    /// A strict comparison under the ranking at the first profile of the pair.
    OriginRanking,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CheckOptions {
    pub nonbossy: NonBossyReading,
}

/// The comparison that failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `b P_i a` under `R_i`: at `R`, reporting `R'_i` gets `i` something better.
    Manipulation { individual: IndividualId },
    /// `a P'_j b` under `R'_j` although `R'` is a monotonic transformation of `R` at `a`.
    MonotonicityReversal { individual: IndividualId },
    /// `affected` strictly ranks `a` against `b` while `deviator` does not.
    Bossiness {
        deviator: IndividualId,
        affected: IndividualId,
    },
}

/// One failed two-profile constraint: the mechanism picks `outcome` at
/// `profile` and `deviation_outcome` at `deviation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub property: PropertyKind,
    pub profile: ProfileId,
    pub deviation: ProfileId,
    /// The individual whose ranking differs; absent for WMM.
    pub individual: Option<IndividualId>,
    pub outcome: OutcomeId,
    pub deviation_outcome: OutcomeId,
    pub relation: Relation,
}

impl Violation {
    /// Re-evaluates the recorded comparison from scratch.
    pub fn holds(&self, domain: &Domain, opts: &CheckOptions) -> bool {
        let individual = if self.property.adjacent_pairs_only() {
            match crate::model::adjacent_individual(
                domain.profile(self.profile),
                domain.profile(self.deviation),
            ) {
                Ok(Some(i)) if Some(i) == self.individual => Some(i),
                _ => return false,
            }
        } else {
            if self.profile == self.deviation || self.individual.is_some() {
                return false;
            }
            None
        };
        pair_violation(
            self.property,
            opts,
            domain,
            self.profile,
            self.deviation,
            individual,
            self.outcome,
            self.deviation_outcome,
        ) == Some(self.relation)
    }

    /// Whether `selection` exhibits this violation at the recorded pair.
    pub fn exhibited_by(&self, selection: &Selection, opts: &CheckOptions) -> bool {
        selection.value(self.profile) == self.outcome
            && selection.value(self.deviation) == self.deviation_outcome
            && self.holds(selection.environment().domain(), opts)
    }

    /// Human-readable account using environment labels.
    pub fn describe(&self, env: &crate::model::Environment) -> String {
        let a = env.outcome_label(self.outcome);
        let b = env.outcome_label(self.deviation_outcome);
        let (r, r2) = (self.profile.0, self.deviation.0);
        match self.relation {
            Relation::Manipulation { individual } => format!(
                "at profile {r} individual {} prefers {b} (chosen at profile {r2}) to {a}",
                env.individual_label(individual)
            ),
            Relation::MonotonicityReversal { individual } => format!(
                "profile {r2} is a monotonic transformation of profile {r} at {a}, \
                 but individual {} strictly prefers {a} to {b} at profile {r2}",
                env.individual_label(individual)
            ),
            Relation::Bossiness { deviator, affected } => format!(
                "moving from profile {r} to {r2}, individual {} changes the outcome from {a} to {b}, \
                 which {} strictly ranks while {} does not",
                env.individual_label(deviator),
                env.individual_label(affected),
                env.individual_label(deviator)
            ),
        }
    }
}

/// Evaluates the constraint `kind` places on the values `a` at `r` and `b`
/// at `r_prime`. `individual` is the adjacent individual for SP and
/// non-bossiness and is ignored for WMM.
#[allow(clippy::too_many_arguments)]
pub(crate) fn pair_violation(
    kind: PropertyKind,
    opts: &CheckOptions,
    domain: &Domain,
    r: ProfileId,
    r_prime: ProfileId,
    individual: Option<IndividualId>,
    a: OutcomeId,
    b: OutcomeId,
) -> Option<Relation> {
    if a == b {
        return None;
    }
    let before = domain.profile(r);
    let after = domain.profile(r_prime);
    match kind {
        PropertyKind::Sp => {
            let i = individual?;
            before
                .ranking(i)
                .prefers(b, a)
                .then_some(Relation::Manipulation { individual: i })
        }
        PropertyKind::Wmm => {
            if !monotonic_at(before, after, a) {
                return None;
            }
            after
                .rankings()
                .iter()
                .position(|ranking| ranking.prefers(a, b))
                .map(|j| Relation::MonotonicityReversal {
                    individual: IndividualId(j),
                })
        }
        PropertyKind::NonBossy => {
            let i = individual?;
            let deviator_strict = match opts.nonbossy {
                NonBossyReading::EitherRanking => {
                    before.ranking(i).strictly_ranks(a, b) || after.ranking(i).strictly_ranks(a, b)
                }
                NonBossyReading::OriginRanking => before.ranking(i).strictly_ranks(a, b),
            };
            if deviator_strict {
                return None;
            }
            (0..domain.num_individuals())
                .map(IndividualId)
                .find(|&j| {
                    j != i
                        && (before.ranking(j).strictly_ranks(a, b)
                            || after.ranking(j).strictly_ranks(a, b))
                })
                .map(|affected| Relation::Bossiness {
                    deviator: i,
                    affected,
                })
        }
    }
}

/// Visits the ordered profile pairs `kind` constrains, in canonical order.
/// Returns the number of pairs visited.
pub(crate) fn scan_pairs<F>(domain: &Domain, kind: PropertyKind, mut visit: F) -> u64
where
    F: FnMut(ProfileId, ProfileId, Option<IndividualId>) -> ControlFlow<()>,
{
    let mut visited = 0;
    for r in domain.ids() {
        if kind.adjacent_pairs_only() {
            for (r_prime, i) in domain.adjacent(r) {
                visited += 1;
                if visit(r, r_prime, Some(i)).is_break() {
                    return visited;
                }
            }
        } else {
            for r_prime in domain.ids().filter(|&q| q != r) {
                visited += 1;
                if visit(r, r_prime, None).is_break() {
                    return visited;
                }
            }
        }
    }
    visited
}

/// Scans `selection` for violations, stopping when `sink` breaks. Returns
/// the number of pairs visited.
pub(crate) fn scan_selection<F>(
    selection: &Selection,
    kind: PropertyKind,
    opts: &CheckOptions,
    mut sink: F,
) -> u64
where
    F: FnMut(Violation) -> ControlFlow<()>,
{
    let domain = selection.environment().domain();
    scan_pairs(domain, kind, |r, r_prime, i| {
        let (a, b) = (selection.value(r), selection.value(r_prime));
        match pair_violation(kind, opts, domain, r, r_prime, i, a, b) {
            Some(relation) => sink(Violation {
                property: kind,
                profile: r,
                deviation: r_prime,
                individual: i,
                outcome: a,
                deviation_outcome: b,
                relation,
            }),
            None => ControlFlow::Continue(()),
        }
    })
}

/// First violation of `kind` in canonical order, if any.
pub fn check_property(
    selection: &Selection,
    kind: PropertyKind,
    opts: &CheckOptions,
) -> Verdict<Violation> {
    let mut found = None;
    scan_selection(selection, kind, opts, |v| {
        found = Some(v);
        ControlFlow::Break(())
    });
    found.map_or(Verdict::Pass, Verdict::Fail)
}

/// Every violation of `kind`, in canonical order.
pub fn all_violations(
    selection: &Selection,
    kind: PropertyKind,
    opts: &CheckOptions,
) -> Vec<Violation> {
    let mut out = Vec::new();
    scan_selection(selection, kind, opts, |v| {
        out.push(v);
        ControlFlow::Continue(())
    });
    out
}

pub fn check_sp(selection: &Selection) -> Verdict<Violation> {
    check_property(selection, PropertyKind::Sp, &CheckOptions::default())
}

pub fn check_wmm(selection: &Selection) -> Verdict<Violation> {
    check_property(selection, PropertyKind::Wmm, &CheckOptions::default())
}

pub fn check_nonbossy(selection: &Selection) -> Verdict<Violation> {
    check_property(selection, PropertyKind::NonBossy, &CheckOptions::default())
}
