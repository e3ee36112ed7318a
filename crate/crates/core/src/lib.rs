//! Robust guarantee checking for opaque announcements.
//!
//! An [`Announcement`] assigns every preference profile of a finite
//! [`Environment`] a non-empty set of possible outcomes. It guarantees a
//! property when every [`Selection`] from it (every mechanism compatible
//! with it) has the property. This crate decides guarantees of
//! strategy-proofness, weak Maskin monotonicity and non-bossiness, both by
//! enumerating selections and by an exact two-profile decomposition, and
//! produces concrete witnesses when a guarantee fails.

pub mod announce;
pub mod constructs;
pub mod gen;
pub mod model;
pub mod props;

pub use announce::{AnnounceError, Announcement, Selection, Selections, DEFAULT_SELECTION_CAP};
pub use model::{
    adjacent_individual, check_no_universal_indifference, check_richness,
    is_monotonic_transformation, Domain, Environment, IndividualId, ModelError, OutcomeId,
    Profile, ProfileId, Ranking, Verdict,
};
pub use props::{
    all_violations, check_nonbossy, check_property, check_sp, check_wmm, guarantee_bruteforce,
    guarantee_pairwise, manipulation_witness, CheckOptions, GuaranteeReport, GuaranteeVerdict,
    ManipulationWitness, Method, NonBossyReading, PropertyKind, Relation, Violation,
};
