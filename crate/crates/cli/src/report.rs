//! Machine-readable reports. Profiles are referenced by their index in the
//! input file's `profiles` list; outcomes and individuals by label.

use opacity_core::gen::CampaignReport;
use opacity_core::model::{RichnessGap, UniversalIndifference};
use opacity_core::props::{GuaranteeWitness, WitnessBranch};
use opacity_core::{Environment, ManipulationWitness, Relation, Selection, Violation};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RelationJson {
    pub kind: &'static str,
    /// The individual whose comparison failed.
    pub individual: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviator: Option<String>,
    pub statement: String,
}

#[derive(Debug, Serialize)]
pub struct ViolationJson {
    pub property: &'static str,
    pub profile: usize,
    pub deviation: usize,
    pub individual: Option<String>,
    pub outcome: String,
    pub deviation_outcome: String,
    pub relation: RelationJson,
    pub description: String,
}

impl ViolationJson {
    pub fn new(v: &Violation, env: &Environment) -> Self {
        let a = env.outcome_label(v.outcome);
        let b = env.outcome_label(v.deviation_outcome);
        let relation = match v.relation {
            Relation::Manipulation { individual } => {
                let who = env.individual_label(individual).to_owned();
                RelationJson {
                    kind: "manipulation",
                    statement: format!("{b} P_{who} {a} at profile {}", v.profile.0),
                    individual: who,
                    deviator: None,
                }
            }
            Relation::MonotonicityReversal { individual } => {
                let who = env.individual_label(individual).to_owned();
                RelationJson {
                    kind: "monotonicity-reversal",
                    statement: format!("{a} P_{who} {b} at profile {}", v.deviation.0),
                    individual: who,
                    deviator: None,
                }
            }
            Relation::Bossiness { deviator, affected } => {
                let who = env.individual_label(affected).to_owned();
                let dev = env.individual_label(deviator).to_owned();
                RelationJson {
                    kind: "bossiness",
                    statement: format!(
                        "{who} strictly ranks {a} against {b}; {dev} is indifferent"
                    ),
                    individual: who,
                    deviator: Some(dev),
                }
            }
        };
        Self {
            property: v.property.as_str(),
            profile: v.profile.0,
            deviation: v.deviation.0,
            individual: v.individual.map(|i| env.individual_label(i).to_owned()),
            outcome: a.to_owned(),
            deviation_outcome: b.to_owned(),
            relation,
            description: v.describe(env),
        }
    }
}

pub fn selection_labels(s: &Selection) -> Vec<String> {
    let env = s.environment();
    s.values()
        .iter()
        .map(|&x| env.outcome_label(x).to_owned())
        .collect()
}

#[derive(Debug, Serialize)]
pub struct WitnessJson {
    pub violation: ViolationJson,
    /// The full selection, parallel to `profiles`.
    pub selection: Vec<String>,
}

impl WitnessJson {
    pub fn new(w: &GuaranteeWitness) -> Self {
        Self {
            violation: ViolationJson::new(&w.violation, w.selection.environment()),
            selection: selection_labels(&w.selection),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MethodJson {
    pub verdict: &'static str,
    pub pairs_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selections_enumerated: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct CheckJson {
    pub property: &'static str,
    pub method: &'static str,
    pub verdict: &'static str,
    pub selection_count: String,
    pub opaque: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairwise: Option<MethodJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bruteforce: Option<MethodJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
    pub witness: Option<WitnessJson>,
}

pub fn verdict_str(guaranteed: bool) -> &'static str {
    if guaranteed {
        "guaranteed"
    } else {
        "not-guaranteed"
    }
}

#[derive(Debug, Serialize)]
pub struct ManipulationJson {
    pub profile: usize,
    pub deviation: usize,
    pub individual: String,
    pub better: String,
    pub worse: String,
    pub completion: String,
    pub branch: &'static str,
    pub violation: ViolationJson,
    pub selection: Vec<String>,
}

impl ManipulationJson {
    pub fn new(w: &ManipulationWitness) -> Self {
        let env = w.selection.environment();
        let label = |x| env.outcome_label(x).to_owned();
        Self {
            profile: w.profile.0,
            deviation: w.deviation.0,
            individual: env.individual_label(w.individual).to_owned(),
            better: label(w.better),
            worse: label(w.worse),
            completion: label(w.completion),
            branch: match w.branch {
                WitnessBranch::WorseAtProfile => "worse-at-profile",
                WitnessBranch::BetterAtProfile => "better-at-profile",
            },
            violation: ViolationJson::new(&w.violation, env),
            selection: selection_labels(&w.selection),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckVerdictJson<T: Serialize> {
    pub pass: bool,
    pub counterexample: Option<T>,
}

#[derive(Debug, Serialize)]
pub struct IndifferenceJson {
    pub profile: usize,
    pub x: String,
    pub y: String,
}

impl IndifferenceJson {
    pub fn new(u: &UniversalIndifference, env: &Environment) -> Self {
        Self {
            profile: u.profile.0,
            x: env.outcome_label(u.x).to_owned(),
            y: env.outcome_label(u.y).to_owned(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RichnessGapJson {
    pub profile: usize,
    pub individual: String,
    pub x: String,
    pub y: String,
}

impl RichnessGapJson {
    pub fn new(g: &RichnessGap, env: &Environment) -> Self {
        Self {
            profile: g.profile.0,
            individual: env.individual_label(g.individual).to_owned(),
            x: env.outcome_label(g.x).to_owned(),
            y: env.outcome_label(g.y).to_owned(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ValidateJson {
    pub path: String,
    pub kind: &'static str,
    pub profiles: usize,
    pub individuals: usize,
    pub outcomes: usize,
    pub no_universal_indifference: CheckVerdictJson<IndifferenceJson>,
    pub richness: CheckVerdictJson<RichnessGapJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection_count: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct AnomalyJson {
    pub trial: u64,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct CampaignJson {
    pub seed: u64,
    pub trials: u64,
    pub domain: &'static str,
    pub outcomes: usize,
    pub individuals: usize,
    pub domain_size: usize,
    pub opacity_rate: f64,
    pub max_image_size: usize,
    pub opaque: u64,
    pub transparent: u64,
    pub opaque_not_guaranteed: u64,
    pub witnesses_validated: u64,
    pub constructive_witnesses: u64,
    pub branch_worse_at_profile: u64,
    pub branch_better_at_profile: u64,
    pub transparent_sp: u64,
    pub non_singleton_images: u64,
    pub total_excess: u64,
    pub max_excess: u64,
    pub anomalies: Vec<AnomalyJson>,
}

impl CampaignJson {
    pub fn new(
        r: &CampaignReport,
        domain: &'static str,
        opacity_rate: f64,
        max_image_size: usize,
    ) -> Self {
        Self {
            seed: r.seed,
            trials: r.trials,
            domain,
            outcomes: r.outcomes,
            individuals: r.individuals,
            domain_size: r.domain_size,
            opacity_rate,
            max_image_size,
            opaque: r.opaque,
            transparent: r.transparent,
            opaque_not_guaranteed: r.opaque_not_guaranteed,
            witnesses_validated: r.witnesses_validated,
            constructive_witnesses: r.constructive_witnesses,
            branch_worse_at_profile: r.branch_worse_at_profile,
            branch_better_at_profile: r.branch_better_at_profile,
            transparent_sp: r.transparent_sp,
            non_singleton_images: r.non_singleton_images,
            total_excess: r.total_excess,
            max_excess: r.max_excess,
            anomalies: r
                .anomalies
                .iter()
                .map(|a| AnomalyJson {
                    trial: a.trial,
                    detail: a.detail.clone(),
                })
                .collect(),
        }
    }
}
