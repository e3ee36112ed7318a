use std::ops::ControlFlow;

use crate::announce::{AnnounceError, Announcement, Selection};
use crate::props::{pair_violation, scan_pairs, scan_selection, CheckOptions, PropertyKind, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuaranteeVerdict {
    Guaranteed,
    NotGuaranteed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    BruteForce,
    Pairwise,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::BruteForce => "bruteforce",
            Method::Pairwise => "pairwise",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScanStats {
    /// Ordered profile pairs visited, summed over all scans.
    pub pairs_checked: u64,
    pub selections_enumerated: u64,
}

/// A violation together with a full selection that exhibits it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuaranteeWitness {
    pub violation: Violation,
    pub selection: Selection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuaranteeReport {
    pub property: PropertyKind,
    pub verdict: GuaranteeVerdict,
    pub witness: Option<GuaranteeWitness>,
    pub method: Method,
    pub stats: ScanStats,
}

impl GuaranteeReport {
    pub fn is_guaranteed(&self) -> bool {
        self.verdict == GuaranteeVerdict::Guaranteed
    }

    fn from_witness(
        property: PropertyKind,
        method: Method,
        witness: Option<GuaranteeWitness>,
        stats: ScanStats,
    ) -> Self {
        let verdict = if witness.is_some() {
            GuaranteeVerdict::NotGuaranteed
        } else {
            GuaranteeVerdict::Guaranteed
        };
        Self {
            property,
            verdict,
            witness,
            method,
            stats,
        }
    }
}

/// Checks every selection of `announcement` against `kind`.
pub fn guarantee_bruteforce(
    announcement: &Announcement,
    kind: PropertyKind,
    cap: u64,
) -> Result<GuaranteeReport, AnnounceError> {
    guarantee_bruteforce_with(announcement, kind, cap, &CheckOptions::default())
}

pub fn guarantee_bruteforce_with(
    announcement: &Announcement,
    kind: PropertyKind,
    cap: u64,
    opts: &CheckOptions,
) -> Result<GuaranteeReport, AnnounceError> {
    let mut stats = ScanStats::default();
    let mut witness = None;
    for selection in announcement.enumerate_selections(cap)? {
        stats.selections_enumerated += 1;
        let mut found = None;
        stats.pairs_checked += scan_selection(&selection, kind, opts, |v| {
            found = Some(v);
            ControlFlow::Break(())
        });
        if let Some(violation) = found {
            witness = Some(GuaranteeWitness {
                violation,
                selection,
            });
            break;
        }
    }
    Ok(GuaranteeReport::from_witness(
        kind,
        Method::BruteForce,
        witness,
        stats,
    ))
}

/// Decides the guarantee from two-profile constraints on the images alone.
///
/// Every constraint involves two distinct profiles, and any choice of values
/// at two profiles extends to a full selection, so the announcement
/// guarantees `kind` iff no pair of image members violates a constraint.
pub fn guarantee_pairwise(announcement: &Announcement, kind: PropertyKind) -> GuaranteeReport {
    guarantee_pairwise_with(announcement, kind, &CheckOptions::default())
}

pub fn guarantee_pairwise_with(
    announcement: &Announcement,
    kind: PropertyKind,
    opts: &CheckOptions,
) -> GuaranteeReport {
    let domain = announcement.environment().domain();
    let mut found = None;
    let pairs_checked = scan_pairs(domain, kind, |r, r_prime, i| {
        for &a in announcement.image(r) {
            for &b in announcement.image(r_prime) {
                if let Some(relation) = pair_violation(kind, opts, domain, r, r_prime, i, a, b) {
                    found = Some(Violation {
                        property: kind,
                        profile: r,
                        deviation: r_prime,
                        individual: i,
                        outcome: a,
                        deviation_outcome: b,
                        relation,
                    });
                    return ControlFlow::Break(());
                }
            }
        }
        ControlFlow::Continue(())
    });
    let witness = found.map(|violation| {
        let selection = announcement
            .restrict_pairwise(
                violation.profile,
                violation.outcome,
                violation.deviation,
                violation.deviation_outcome,
            )
            .expect("scanned pairs are distinct and values come from the images");
        GuaranteeWitness {
            violation,
            selection,
        }
    });
    GuaranteeReport::from_witness(
        kind,
        Method::Pairwise,
        witness,
        ScanStats {
            pairs_checked,
            selections_enumerated: 0,
        },
    )
}
