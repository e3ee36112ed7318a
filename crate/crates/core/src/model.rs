//! Outcomes, rankings, profiles and preference domains.
//!
//! A [`Ranking`] is stored as an ordered partition of the outcomes into
//! indifference classes, so completeness and transitivity of the induced
//! weak order hold by construction. Earlier classes are strictly preferred.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index into an environment's outcome table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutcomeId(pub usize);

/// Index into an environment's individual table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndividualId(pub usize);

/// Position of a profile in its domain's canonical (insertion) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProfileId(pub usize);

impl fmt::Display for OutcomeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for IndividualId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for ProfileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("outcome index {index} out of range for {outcomes} outcomes")]
    OutcomeOutOfRange { index: usize, outcomes: usize },
    #[error("individual index {index} out of range for {individuals} individuals")]
    IndividualOutOfRange { index: usize, individuals: usize },
    #[error("indifference class {class} is empty")]
    EmptyClass { class: usize },
    #[error("outcome {0} appears more than once in a ranking")]
    DuplicateOutcome(OutcomeId),
    #[error("outcome {0} is missing from a ranking")]
    MissingOutcome(OutcomeId),
    #[error("class levels {0:?} do not form a contiguous range starting at 0")]
    GappedLevels(Vec<usize>),
    #[error("a profile needs at least one individual")]
    NoIndividuals,
    #[error("profile shapes differ: expected {expected_individuals} individuals over {expected_outcomes} outcomes, found {individuals} over {outcomes}")]
    ShapeMismatch {
        expected_individuals: usize,
        expected_outcomes: usize,
        individuals: usize,
        outcomes: usize,
    },
    #[error("a domain needs at least one profile")]
    EmptyDomain,
    #[error("an environment needs at least 2 outcomes, found {0}")]
    TooFewOutcomes(usize),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("label table has {labels} entries but the domain has {expected}")]
    LabelCount { labels: usize, expected: usize },
}

/// A weak order over outcomes as an ordered sequence of indifference classes.
///
/// Classes are kept sorted internally by outcome index, which makes
/// structural equality coincide with equality of the induced relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    classes: Vec<Vec<OutcomeId>>,
    // level[x] = index of the class holding outcome x
    level: Vec<usize>,
}

impl Ranking {
    /// Builds a ranking over `outcomes` outcomes from its indifference classes.
    pub fn new(classes: Vec<Vec<OutcomeId>>, outcomes: usize) -> Result<Self, ModelError> {
        let mut level = vec![usize::MAX; outcomes];
        let mut classes = classes;
        for (c, class) in classes.iter_mut().enumerate() {
            if class.is_empty() {
                return Err(ModelError::EmptyClass { class: c });
            }
            class.sort_unstable();
            for &x in class.iter() {
                if x.0 >= outcomes {
                    return Err(ModelError::OutcomeOutOfRange {
                        index: x.0,
                        outcomes,
                    });
                }
                if level[x.0] != usize::MAX {
                    return Err(ModelError::DuplicateOutcome(x));
                }
                level[x.0] = c;
            }
        }
        if let Some(missing) = level.iter().position(|&l| l == usize::MAX) {
            return Err(ModelError::MissingOutcome(OutcomeId(missing)));
        }
        Ok(Self { classes, level })
    }

    /// Strict ranking listing every outcome once, best first.
    pub fn strict(order: &[OutcomeId]) -> Result<Self, ModelError> {
        Self::new(order.iter().map(|&x| vec![x]).collect(), order.len())
    }

    /// Builds a ranking from per-outcome class levels (0 = top class).
    pub fn from_levels(levels: &[usize]) -> Result<Self, ModelError> {
        let depth = levels.iter().copied().max().map_or(0, |m| m + 1);
        let mut classes = vec![Vec::new(); depth];
        for (x, &l) in levels.iter().enumerate() {
            classes[l].push(OutcomeId(x));
        }
        if classes.iter().any(Vec::is_empty) {
            return Err(ModelError::GappedLevels(levels.to_vec()));
        }
        Self::new(classes, levels.len())
    }

    pub fn num_outcomes(&self) -> usize {
        self.level.len()
    }

    pub fn classes(&self) -> &[Vec<OutcomeId>] {
        &self.classes
    }

    /// Index of the indifference class containing `x`.
    pub fn level(&self, x: OutcomeId) -> usize {
        self.level[x.0]
    }

    pub fn is_strict(&self) -> bool {
        self.classes.len() == self.level.len()
    }

    /// `x P y`: the class of `x` strictly precedes the class of `y`.
    pub fn prefers(&self, x: OutcomeId, y: OutcomeId) -> bool {
        self.level[x.0] < self.level[y.0]
    }

    /// `x R y`.
    pub fn weakly_prefers(&self, x: OutcomeId, y: OutcomeId) -> bool {
        self.level[x.0] <= self.level[y.0]
    }

    pub fn indifferent(&self, x: OutcomeId, y: OutcomeId) -> bool {
        self.level[x.0] == self.level[y.0]
    }

    /// `x P y` or `y P x`.
    pub fn strictly_ranks(&self, x: OutcomeId, y: OutcomeId) -> bool {
        !self.indifferent(x, y)
    }

    /// Range-checked [`Ranking::prefers`].
    pub fn try_prefers(&self, x: OutcomeId, y: OutcomeId) -> Result<bool, ModelError> {
        self.check_outcome(x)?;
        self.check_outcome(y)?;
        Ok(self.prefers(x, y))
    }

    /// Range-checked [`Ranking::weakly_prefers`].
    pub fn try_weakly_prefers(&self, x: OutcomeId, y: OutcomeId) -> Result<bool, ModelError> {
        self.check_outcome(x)?;
        self.check_outcome(y)?;
        Ok(self.weakly_prefers(x, y))
    }

    /// Range-checked [`Ranking::indifferent`].
    pub fn try_indifferent(&self, x: OutcomeId, y: OutcomeId) -> Result<bool, ModelError> {
        self.check_outcome(x)?;
        self.check_outcome(y)?;
        Ok(self.indifferent(x, y))
    }

    /// Number of outcomes strictly above `x`.
    pub fn outcomes_above(&self, x: OutcomeId) -> usize {
        self.classes[..self.level[x.0]].iter().map(Vec::len).sum()
    }

    /// True iff every outcome strictly below `x` here is still strictly
    /// below `x` in `other`.
    pub fn lower_contour_kept_by(&self, other: &Ranking, x: OutcomeId) -> bool {
        (0..self.num_outcomes())
            .map(OutcomeId)
            .all(|z| !self.prefers(x, z) || other.prefers(x, z))
    }

    fn check_outcome(&self, x: OutcomeId) -> Result<(), ModelError> {
        if x.0 < self.num_outcomes() {
            Ok(())
        } else {
            Err(ModelError::OutcomeOutOfRange {
                index: x.0,
                outcomes: self.num_outcomes(),
            })
        }
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, class) in self.classes.iter().enumerate() {
            if c > 0 {
                f.write_str(" > ")?;
            }
            for (k, x) in class.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ~ ")?;
                }
                write!(f, "{}", x.0)?;
            }
        }
        Ok(())
    }
}

/// `x P y` under `ranking`, with range checking.
pub fn prefers(ranking: &Ranking, x: OutcomeId, y: OutcomeId) -> Result<bool, ModelError> {
    ranking.try_prefers(x, y)
}

/// `x R y` under `ranking`, with range checking.
pub fn weakly_prefers(ranking: &Ranking, x: OutcomeId, y: OutcomeId) -> Result<bool, ModelError> {
    ranking.try_weakly_prefers(x, y)
}

/// Indifference between `x` and `y` under `ranking`, with range checking.
pub fn indifferent(ranking: &Ranking, x: OutcomeId, y: OutcomeId) -> Result<bool, ModelError> {
    ranking.try_indifferent(x, y)
}

/// One ranking per individual.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    rankings: Vec<Ranking>,
}

impl Profile {
    pub fn new(rankings: Vec<Ranking>) -> Result<Self, ModelError> {
        let first = rankings.first().ok_or(ModelError::NoIndividuals)?;
        let outcomes = first.num_outcomes();
        if let Some(bad) = rankings.iter().find(|r| r.num_outcomes() != outcomes) {
            return Err(ModelError::ShapeMismatch {
                expected_individuals: rankings.len(),
                expected_outcomes: outcomes,
                individuals: rankings.len(),
                outcomes: bad.num_outcomes(),
            });
        }
        Ok(Self { rankings })
    }

    pub fn num_individuals(&self) -> usize {
        self.rankings.len()
    }

    pub fn num_outcomes(&self) -> usize {
        self.rankings[0].num_outcomes()
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.rankings
    }

    pub fn ranking(&self, i: IndividualId) -> &Ranking {
        &self.rankings[i.0]
    }

    /// The profile `(ranking, R_{-i})`.
    pub fn with_ranking(&self, i: IndividualId, ranking: Ranking) -> Self {
        let mut rankings = self.rankings.clone();
        rankings[i.0] = ranking;
        Self { rankings }
    }

    /// Some individual strictly ranks `x` against `y`.
    pub fn separates(&self, x: OutcomeId, y: OutcomeId) -> bool {
        self.rankings.iter().any(|r| r.strictly_ranks(x, y))
    }

    fn same_shape(&self, other: &Profile) -> Result<(), ModelError> {
        if self.num_individuals() == other.num_individuals()
            && self.num_outcomes() == other.num_outcomes()
        {
            Ok(())
        } else {
            Err(ModelError::ShapeMismatch {
                expected_individuals: self.num_individuals(),
                expected_outcomes: self.num_outcomes(),
                individuals: other.num_individuals(),
                outcomes: other.num_outcomes(),
            })
        }
    }
}

/// The single individual whose ranking differs between two profiles, if
/// exactly one does. Identical profiles yield `None`.
pub fn adjacent_individual(
    r: &Profile,
    r_prime: &Profile,
) -> Result<Option<IndividualId>, ModelError> {
    r.same_shape(r_prime)?;
    let mut changed = r
        .rankings
        .iter()
        .zip(&r_prime.rankings)
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(i, _)| IndividualId(i));
    match (changed.next(), changed.next()) {
        (Some(i), None) => Ok(Some(i)),
        _ => Ok(None),
    }
}

/// Whether `r_prime` is a monotonic transformation of `r` at `x`: every
/// outcome `x` strictly beats for some individual under `r` it still
/// strictly beats under `r_prime`.
pub fn is_monotonic_transformation(
    r: &Profile,
    r_prime: &Profile,
    x: OutcomeId,
) -> Result<bool, ModelError> {
    r.same_shape(r_prime)?;
    if x.0 >= r.num_outcomes() {
        return Err(ModelError::OutcomeOutOfRange {
            index: x.0,
            outcomes: r.num_outcomes(),
        });
    }
    Ok(monotonic_at(r, r_prime, x))
}

pub(crate) fn monotonic_at(r: &Profile, r_prime: &Profile, x: OutcomeId) -> bool {
    r.rankings
        .iter()
        .zip(&r_prime.rankings)
        .all(|(before, after)| before.lower_contour_kept_by(after, x))
}

/// A finite, deduplicated, insertion-ordered set of profiles sharing one shape.
#[derive(Debug, Clone)]
pub struct Domain {
    profiles: Vec<Profile>,
    lookup: HashMap<Profile, ProfileId>,
    // groups[i][g]: profiles that agree everywhere except possibly at individual i
    groups: Vec<Vec<Vec<ProfileId>>>,
    // group_of[p][i]: index into groups[i] for profile p
    group_of: Vec<Vec<usize>>,
    individuals: usize,
    outcomes: usize,
}

impl Domain {
    /// Builds a domain; structurally equal duplicates keep their first position.
    pub fn new<I: IntoIterator<Item = Profile>>(profiles: I) -> Result<Self, ModelError> {
        let mut unique: Vec<Profile> = Vec::new();
        let mut lookup = HashMap::new();
        for p in profiles {
            if let Some(first) = unique.first() {
                first.same_shape(&p)?;
            }
            if !lookup.contains_key(&p) {
                lookup.insert(p.clone(), ProfileId(unique.len()));
                unique.push(p);
            }
        }
        let first = unique.first().ok_or(ModelError::EmptyDomain)?;
        let individuals = first.num_individuals();
        let outcomes = first.num_outcomes();

        // Rankings are interned so each "everyone but i" key is a small vector.
        let mut interned: HashMap<&Ranking, usize> = HashMap::new();
        let codes: Vec<Vec<usize>> = unique
            .iter()
            .map(|p| {
                p.rankings
                    .iter()
                    .map(|r| {
                        let next = interned.len();
                        *interned.entry(r).or_insert(next)
                    })
                    .collect()
            })
            .collect();
        let mut groups = vec![Vec::new(); individuals];
        let mut group_of = vec![vec![0; individuals]; unique.len()];
        for (i, groups_i) in groups.iter_mut().enumerate() {
            let mut keys: HashMap<Vec<usize>, usize> = HashMap::new();
            for (p, code) in codes.iter().enumerate() {
                let mut key = code.clone();
                key[i] = usize::MAX;
                let g = *keys.entry(key).or_insert_with(|| {
                    groups_i.push(Vec::new());
                    groups_i.len() - 1
                });
                groups_i[g].push(ProfileId(p));
                group_of[p][i] = g;
            }
        }
        drop(interned);

        Ok(Self {
            profiles: unique,
            lookup,
            groups,
            group_of,
            individuals,
            outcomes,
        })
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn num_individuals(&self) -> usize {
        self.individuals
    }

    pub fn num_outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub fn profile(&self, id: ProfileId) -> &Profile {
        &self.profiles[id.0]
    }

    pub fn ids(&self) -> impl Iterator<Item = ProfileId> + '_ {
        (0..self.profiles.len()).map(ProfileId)
    }

    pub fn position(&self, profile: &Profile) -> Option<ProfileId> {
        self.lookup.get(profile).copied()
    }

    /// Profiles `(R'_i, R_{-i})` with `R'_i != R_i`, in domain order.
    pub fn variants(&self, p: ProfileId, i: IndividualId) -> impl Iterator<Item = ProfileId> + '_ {
        self.groups[i.0][self.group_of[p.0][i.0]]
            .iter()
            .copied()
            .filter(move |&q| q != p)
    }

    /// Every profile adjacent to `p`, with the individual whose ranking
    /// changed, ordered by profile position.
    pub fn adjacent(&self, p: ProfileId) -> Vec<(ProfileId, IndividualId)> {
        let mut out: Vec<_> = (0..self.individuals)
            .map(IndividualId)
            .flat_map(|i| self.variants(p, i).map(move |q| (q, i)))
            .collect();
        out.sort_unstable();
        out
    }
}

impl PartialEq for Domain {
    fn eq(&self, other: &Self) -> bool {
        self.profiles == other.profiles
    }
}

impl Eq for Domain {}

/// Outcome of a structural check: pass, or the first counterexample found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Pass,
    Fail(W),
}

impl<W> Verdict<W> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn failure(&self) -> Option<&W> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }

    pub fn into_failure(self) -> Option<W> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }
}

/// A profile at which nobody separates two distinct outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniversalIndifference {
    pub profile: ProfileId,
    pub x: OutcomeId,
    pub y: OutcomeId,
}

/// A strict comparison `x P_i y` at `profile` with no admissible
/// alternative report for `individual` that keeps `x`'s strict lower contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RichnessGap {
    pub profile: ProfileId,
    pub individual: IndividualId,
    pub x: OutcomeId,
    pub y: OutcomeId,
}

pub fn check_no_universal_indifference(domain: &Domain) -> Verdict<UniversalIndifference> {
    let n = domain.num_outcomes();
    for p in domain.ids() {
        let profile = domain.profile(p);
        for x in 0..n {
            for y in x + 1..n {
                let (x, y) = (OutcomeId(x), OutcomeId(y));
                if !profile.separates(x, y) {
                    return Verdict::Fail(UniversalIndifference { profile: p, x, y });
                }
            }
        }
    }
    Verdict::Pass
}

pub fn check_richness(domain: &Domain) -> Verdict<RichnessGap> {
    let n = domain.num_outcomes();
    for p in domain.ids() {
        let profile = domain.profile(p);
        for i in (0..domain.num_individuals()).map(IndividualId) {
            let own = profile.ranking(i);
            for x in (0..n).map(OutcomeId) {
                // The condition depends on x only; y is the first outcome x beats.
                let Some(y) = (0..n).map(OutcomeId).find(|&y| own.prefers(x, y)) else {
                    continue;
                };
                let covered = domain
                    .variants(p, i)
                    .any(|q| own.lower_contour_kept_by(domain.profile(q).ranking(i), x));
                if !covered {
                    return Verdict::Fail(RichnessGap {
                        profile: p,
                        individual: i,
                        x,
                        y,
                    });
                }
            }
        }
    }
    Verdict::Pass
}

/// Individuals, outcomes and the admissible profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Environment {
    outcomes: Vec<String>,
    individuals: Vec<String>,
    domain: Domain,
}

impl Environment {
    pub fn new(
        outcomes: Vec<String>,
        individuals: Vec<String>,
        domain: Domain,
    ) -> Result<Self, ModelError> {
        if outcomes.len() != domain.num_outcomes() {
            return Err(ModelError::LabelCount {
                labels: outcomes.len(),
                expected: domain.num_outcomes(),
            });
        }
        if individuals.len() != domain.num_individuals() {
            return Err(ModelError::LabelCount {
                labels: individuals.len(),
                expected: domain.num_individuals(),
            });
        }
        if outcomes.len() < 2 {
            return Err(ModelError::TooFewOutcomes(outcomes.len()));
        }
        for table in [&outcomes, &individuals] {
            for (k, label) in table.iter().enumerate() {
                if table[..k].contains(label) {
                    return Err(ModelError::DuplicateLabel(label.clone()));
                }
            }
        }
        Ok(Self {
            outcomes,
            individuals,
            domain,
        })
    }

    /// Labels outcomes `x1..xN` and individuals `i1..iK`.
    pub fn with_default_labels(domain: Domain) -> Result<Self, ModelError> {
        let outcomes = (1..=domain.num_outcomes()).map(|k| format!("x{k}")).collect();
        let individuals = (1..=domain.num_individuals())
            .map(|k| format!("i{k}"))
            .collect();
        Self::new(outcomes, individuals, domain)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn outcome_labels(&self) -> &[String] {
        &self.outcomes
    }

    pub fn individual_labels(&self) -> &[String] {
        &self.individuals
    }

    pub fn num_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn num_individuals(&self) -> usize {
        self.individuals.len()
    }

    pub fn outcome_label(&self, x: OutcomeId) -> &str {
        &self.outcomes[x.0]
    }

    pub fn individual_label(&self, i: IndividualId) -> &str {
        &self.individuals[i.0]
    }

    pub fn outcome(&self, label: &str) -> Option<OutcomeId> {
        self.outcomes.iter().position(|l| l == label).map(OutcomeId)
    }

    pub fn individual(&self, label: &str) -> Option<IndividualId> {
        self.individuals.iter().position(|l| l == label).map(IndividualId)
    }
}
