//! Seeded generators and the randomized transparency campaign.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. Trial `t` of a campaign uses the same key on
//! stream `t`, so trials are independent and can be replayed one at a time.

use std::sync::Arc;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::announce::Announcement;
use crate::model::{
    check_no_universal_indifference, check_richness, Domain, Environment, ModelError, OutcomeId,
    Profile, Ranking, RichnessGap, UniversalIndifference, Verdict,
};
use crate::props::{
    check_sp, guarantee_pairwise, manipulation_witness, CheckOptions, PropertyKind, WitnessBranch,
};

/// Largest domain the generators will materialize by default.
pub const DEFAULT_DOMAIN_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("domain would have {size} profiles, above the limit of {limit}")]
    DomainTooLarge { size: String, limit: usize },
    #[error("opacity rate {0} is outside [0, 1]")]
    OpacityRate(f64),
    #[error("max image size must be at least 1")]
    MaxImageSize,
    #[error("need at least {min} outcomes, got {found}")]
    TooFewOutcomes { min: usize, found: usize },
    #[error("need at least one individual")]
    NoIndividuals,
    #[error("an explicit domain needs an environment")]
    MissingEnvironment,
    #[error("domain is not rich: {0:?}")]
    NotRich(RichnessGap),
    #[error("universal indifference in the domain: {0:?}")]
    UniversalIndifference(UniversalIndifference),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    FullStrict,
    FullWeak,
    Explicit,
}

impl DomainKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DomainKind::FullStrict => "full-strict",
            DomainKind::FullWeak => "full-weak",
            DomainKind::Explicit => "explicit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub outcomes: usize,
    pub individuals: usize,
    pub domain_kind: DomainKind,
    /// Probability that a profile's image is widened beyond one outcome.
    pub opacity_rate: f64,
    pub max_image_size: usize,
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        if !(0.0..=1.0).contains(&self.opacity_rate) {
            return Err(GenError::OpacityRate(self.opacity_rate));
        }
        if self.max_image_size == 0 {
            return Err(GenError::MaxImageSize);
        }
        if self.domain_kind != DomainKind::Explicit {
            if self.individuals == 0 {
                return Err(GenError::NoIndividuals);
            }
            if self.outcomes < 2 {
                return Err(GenError::TooFewOutcomes {
                    min: 2,
                    found: self.outcomes,
                });
            }
        }
        Ok(())
    }

    /// Environment for a full-strict or full-weak configuration.
    pub fn environment(&self) -> Result<Arc<Environment>, GenError> {
        self.validate()?;
        let domain = match self.domain_kind {
            DomainKind::FullStrict => full_strict_domain(self.individuals, self.outcomes)?,
            DomainKind::FullWeak => full_weak_domain(self.individuals, self.outcomes)?,
            DomainKind::Explicit => return Err(GenError::MissingEnvironment),
        };
        Ok(Arc::new(Environment::with_default_labels(domain)?))
    }
}

fn strict_rankings(outcomes: usize) -> Vec<Ranking> {
    (0..outcomes)
        .permutations(outcomes)
        .map(|p| {
            let order: Vec<_> = p.into_iter().map(OutcomeId).collect();
            Ranking::strict(&order).expect("a permutation is a strict ranking")
        })
        .collect()
}

/// All weak orders over `outcomes` outcomes, ordered by their level vectors.
fn weak_rankings(outcomes: usize) -> Vec<Ranking> {
    (0..outcomes)
        .map(|_| 0..outcomes)
        .multi_cartesian_product()
        .filter_map(|levels| Ranking::from_levels(&levels).ok())
        .collect()
}

fn checked_power(base: usize, exp: usize, limit: usize) -> Result<(), GenError> {
    let mut size: u128 = 1;
    for _ in 0..exp {
        size = size.saturating_mul(base as u128);
    }
    if size > limit as u128 {
        return Err(GenError::DomainTooLarge {
            size: size.to_string(),
            limit,
        });
    }
    Ok(())
}

/// Number of weak orders over `n` outcomes (ordered Bell number), saturating.
fn weak_order_count(n: usize) -> usize {
    let mut counts: Vec<u128> = vec![1];
    for m in 1..=n {
        let mut binom: u128 = 1;
        let mut total: u128 = 0;
        for k in 1..=m {
            binom = binom.saturating_mul((m - k + 1) as u128) / k as u128;
            total = total.saturating_add(binom.saturating_mul(counts[m - k]));
        }
        counts.push(total);
    }
    usize::try_from(counts[n]).unwrap_or(usize::MAX)
}

fn factorial_capped(n: usize) -> usize {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k)).unwrap_or(usize::MAX)
}

fn product_domain(
    rankings: &[Ranking],
    individuals: usize,
    keep: impl Fn(&Profile) -> bool,
) -> Result<Domain, GenError> {
    let profiles = (0..individuals)
        .map(|_| rankings.iter().cloned())
        .multi_cartesian_product()
        .map(|rs| Profile::new(rs).expect("rankings share the outcome count"))
        .filter(keep);
    Ok(Domain::new(profiles)?)
}

/// Every profile of strict rankings, lexicographic in (individual, permutation).
pub fn full_strict_domain(individuals: usize, outcomes: usize) -> Result<Domain, GenError> {
    full_strict_domain_within(individuals, outcomes, DEFAULT_DOMAIN_LIMIT)
}

pub fn full_strict_domain_within(
    individuals: usize,
    outcomes: usize,
    limit: usize,
) -> Result<Domain, GenError> {
    if individuals == 0 {
        return Err(GenError::NoIndividuals);
    }
    checked_power(factorial_capped(outcomes), individuals, limit)?;
    product_domain(&strict_rankings(outcomes), individuals, |_| true)
}

/// Every profile of weak orders in which no two outcomes are tied by everyone.
pub fn full_weak_domain(individuals: usize, outcomes: usize) -> Result<Domain, GenError> {
    full_weak_domain_within(individuals, outcomes, DEFAULT_DOMAIN_LIMIT)
}

pub fn full_weak_domain_within(
    individuals: usize,
    outcomes: usize,
    limit: usize,
) -> Result<Domain, GenError> {
    if individuals == 0 {
        return Err(GenError::NoIndividuals);
    }
    checked_power(weak_order_count(outcomes), individuals, limit)?;
    let rankings = weak_rankings(outcomes);
    product_domain(&rankings, individuals, |p| {
        (0..outcomes)
            .tuple_combinations()
            .all(|(x, y)| p.separates(OutcomeId(x), OutcomeId(y)))
    })
}

/// Random announcement from stream 0 of the configured seed.
pub fn random_announcement(
    env: &Arc<Environment>,
    cfg: &GenConfig,
) -> Result<Announcement, GenError> {
    cfg.validate()?;
    Ok(announcement_from(env, cfg, &mut trial_rng(cfg.seed, 0)))
}

/// The generator for trial `trial` of a campaign seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Each image starts as one uniform outcome; with probability
/// `opacity_rate` it is widened to a uniform size in `2..=max_image_size`
/// (capped at the outcome count) with uniformly drawn extra outcomes.
pub fn announcement_from<R: Rng>(
    env: &Arc<Environment>,
    cfg: &GenConfig,
    rng: &mut R,
) -> Announcement {
    let n = env.num_outcomes();
    let widest = cfg.max_image_size.min(n);
    let images = env
        .domain()
        .ids()
        .map(|_| {
            let first = rng.gen_range(0..n);
            let mut image = vec![OutcomeId(first)];
            if widest >= 2 && rng.gen_bool(cfg.opacity_rate) {
                let size = rng.gen_range(2..=widest);
                let mut rest: Vec<usize> = (0..n).filter(|&k| k != first).collect();
                rest.shuffle(rng);
                image.extend(rest[..size - 1].iter().map(|&k| OutcomeId(k)));
            }
            image
        })
        .collect();
    Announcement::new(env.clone(), images).expect("generated images are valid")
}

/// Something that contradicts the transparency characterization of
/// strategy-proofness guarantees; any anomaly indicates a bug.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anomaly {
    pub trial: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CampaignReport {
    pub seed: u64,
    pub trials: u64,
    pub outcomes: usize,
    pub individuals: usize,
    pub domain_size: usize,
    pub opaque: u64,
    pub transparent: u64,
    /// Opaque announcements found not to guarantee SP.
    pub opaque_not_guaranteed: u64,
    /// Pairwise witnesses whose selection re-failed the SP check.
    pub witnesses_validated: u64,
    /// Successful constructive witnesses.
    pub constructive_witnesses: u64,
    pub branch_worse_at_profile: u64,
    pub branch_better_at_profile: u64,
    /// Transparent announcements whose unique selection is SP.
    pub transparent_sp: u64,
    /// Sum over announcements of the number of non-singleton images.
    pub non_singleton_images: u64,
    /// Sum over announcements of `sum(|image| - 1)`.
    pub total_excess: u64,
    pub max_excess: u64,
    pub anomalies: Vec<Anomaly>,
}

impl CampaignReport {
    pub fn is_clean(&self) -> bool {
        self.anomalies.is_empty()
    }
}

/// Builds the configured environment and runs the campaign on it.
pub fn run_transparency_campaign(cfg: &GenConfig, trials: u64) -> Result<CampaignReport, GenError> {
    let env = cfg.environment()?;
    run_transparency_campaign_on(&env, cfg, trials)
}

/// Generates `trials` announcements and confirms that the opaque ones never
/// guarantee strategy-proofness (with validated witnesses) while transparent
/// ones agree with the check of their unique selection.
pub fn run_transparency_campaign_on(
    env: &Arc<Environment>,
    cfg: &GenConfig,
    trials: u64,
) -> Result<CampaignReport, GenError> {
    cfg.validate()?;
    if env.num_outcomes() < 3 {
        return Err(GenError::TooFewOutcomes {
            min: 3,
            found: env.num_outcomes(),
        });
    }
    if let Verdict::Fail(gap) = check_no_universal_indifference(env.domain()) {
        return Err(GenError::UniversalIndifference(gap));
    }
    if let Verdict::Fail(gap) = check_richness(env.domain()) {
        return Err(GenError::NotRich(gap));
    }

    let opts = CheckOptions::default();
    let mut report = CampaignReport {
        seed: cfg.seed,
        trials,
        outcomes: env.num_outcomes(),
        individuals: env.num_individuals(),
        domain_size: env.domain().len(),
        ..CampaignReport::default()
    };
    for trial in 0..trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let announcement = announcement_from(env, cfg, &mut rng);
        let excess = announcement.excess() as u64;
        report.non_singleton_images += announcement.opaque_profiles() as u64;
        report.total_excess += excess;
        report.max_excess = report.max_excess.max(excess);
        let mut anomaly = |detail: String| report.anomalies.push(Anomaly { trial, detail });

        let guarantee = guarantee_pairwise(&announcement, PropertyKind::Sp);
        if let Some(selection) = announcement.unique_selection() {
            let sp = check_sp(&selection).is_pass();
            if guarantee.is_guaranteed() != sp {
                anomaly(format!(
                    "transparent announcement: guarantee {} but unique selection SP {sp}",
                    guarantee.is_guaranteed()
                ));
            }
            report.transparent += 1;
            report.transparent_sp += u64::from(sp);
            continue;
        }

        report.opaque += 1;
        match &guarantee.witness {
            None => anomaly("opaque announcement guarantees strategy-proofness".into()),
            Some(w) => {
                report.opaque_not_guaranteed += 1;
                if !check_sp(&w.selection).is_pass() && w.violation.exhibited_by(&w.selection, &opts)
                {
                    report.witnesses_validated += 1;
                } else {
                    anomaly("pairwise witness does not re-validate".into());
                }
            }
        }
        match manipulation_witness(&announcement) {
            Ok(w) => {
                report.constructive_witnesses += 1;
                match w.branch {
                    WitnessBranch::WorseAtProfile => report.branch_worse_at_profile += 1,
                    WitnessBranch::BetterAtProfile => report.branch_better_at_profile += 1,
                }
            }
            Err(e) => anomaly(format!("constructive witness failed: {e}")),
        }
    }
    Ok(report)
}
