//! Announcements and the selections (possible mechanisms) they admit.

use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::model::{Environment, OutcomeId, ProfileId};

/// Enumeration cap used when callers do not supply one.
pub const DEFAULT_SELECTION_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnounceError {
    #[error("expected one image per profile ({expected}), got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("image at profile {0} is empty")]
    EmptyImage(ProfileId),
    #[error("outcome {outcome} at profile {profile} is out of range")]
    InvalidOutcome {
        profile: ProfileId,
        outcome: OutcomeId,
    },
    #[error("{count} selections exceed the enumeration cap of {cap}")]
    CapExceeded { count: BigUint, cap: u64 },
    #[error("outcome {outcome} is not in the image at profile {profile}")]
    NotInImage {
        profile: ProfileId,
        outcome: OutcomeId,
    },
    #[error("the two fixed profiles must differ (both are {0})")]
    SameProfile(ProfileId),
    #[error("profile {0} is not in the domain")]
    UnknownProfile(ProfileId),
}

/// An extensional announcement: one non-empty outcome set per profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Announcement {
    env: Arc<Environment>,
    images: Vec<Vec<OutcomeId>>,
}

impl Announcement {
    /// `images[p]` is the image at profile `p`; each set is sorted and deduplicated.
    pub fn new(env: Arc<Environment>, images: Vec<Vec<OutcomeId>>) -> Result<Self, AnnounceError> {
        let expected = env.domain().len();
        if images.len() != expected {
            return Err(AnnounceError::LengthMismatch {
                expected,
                found: images.len(),
            });
        }
        let mut images = images;
        for (p, image) in images.iter_mut().enumerate() {
            if image.is_empty() {
                return Err(AnnounceError::EmptyImage(ProfileId(p)));
            }
            image.sort_unstable();
            image.dedup();
            if let Some(&bad) = image.iter().find(|x| x.0 >= env.num_outcomes()) {
                return Err(AnnounceError::InvalidOutcome {
                    profile: ProfileId(p),
                    outcome: bad,
                });
            }
        }
        Ok(Self { env, images })
    }

    /// The fully transparent announcement of a single mechanism.
    pub fn from_selection(selection: &Selection) -> Self {
        Self {
            env: selection.env.clone(),
            images: selection.values.iter().map(|&x| vec![x]).collect(),
        }
    }

    pub fn environment(&self) -> &Arc<Environment> {
        &self.env
    }

    pub fn images(&self) -> &[Vec<OutcomeId>] {
        &self.images
    }

    pub fn image(&self, p: ProfileId) -> &[OutcomeId] {
        &self.images[p.0]
    }

    pub fn contains(&self, p: ProfileId, x: OutcomeId) -> bool {
        self.images[p.0].binary_search(&x).is_ok()
    }

    pub fn is_fully_transparent(&self) -> bool {
        self.images.iter().all(|img| img.len() == 1)
    }

    pub fn is_opaque(&self) -> bool {
        !self.is_fully_transparent()
    }

    /// Number of profiles whose image is not a singleton.
    pub fn opaque_profiles(&self) -> usize {
        self.images.iter().filter(|img| img.len() > 1).count()
    }

    /// Total excess `sum(|image| - 1)`.
    pub fn excess(&self) -> usize {
        self.images.iter().map(|img| img.len() - 1).sum()
    }

    /// Exact number of selections: the product of image sizes.
    pub fn selection_count(&self) -> BigUint {
        self.images
            .iter()
            .fold(BigUint::one(), |acc, img| acc * BigUint::from(img.len()))
    }

    /// The unique selection of a fully transparent announcement.
    pub fn unique_selection(&self) -> Option<Selection> {
        self.is_fully_transparent().then(|| Selection {
            env: self.env.clone(),
            values: self.images.iter().map(|img| img[0]).collect(),
        })
    }

    /// Streams every selection in lexicographic order (first profile most
    /// significant), or fails with the exact count when it exceeds `cap`.
    pub fn enumerate_selections(&self, cap: u64) -> Result<Selections<'_>, AnnounceError> {
        let count = self.selection_count();
        if count > BigUint::from(cap) {
            return Err(AnnounceError::CapExceeded { count, cap });
        }
        Ok(Selections {
            announcement: self,
            digits: vec![0; self.images.len()],
            done: false,
        })
    }

    /// The canonical completion fixing `x` at `r` and `y` at `r_prime`; every
    /// other profile takes the smallest member of its image.
    pub fn restrict_pairwise(
        &self,
        r: ProfileId,
        x: OutcomeId,
        r_prime: ProfileId,
        y: OutcomeId,
    ) -> Result<Selection, AnnounceError> {
        for p in [r, r_prime] {
            if p.0 >= self.images.len() {
                return Err(AnnounceError::UnknownProfile(p));
            }
        }
        if r == r_prime {
            return Err(AnnounceError::SameProfile(r));
        }
        for (p, z) in [(r, x), (r_prime, y)] {
            if !self.contains(p, z) {
                return Err(AnnounceError::NotInImage {
                    profile: p,
                    outcome: z,
                });
            }
        }
        let mut values: Vec<OutcomeId> = self.images.iter().map(|img| img[0]).collect();
        values[r.0] = x;
        values[r_prime.0] = y;
        Ok(Selection {
            env: self.env.clone(),
            values,
        })
    }
}

/// Lexicographic stream over the selections of an announcement.
#[derive(Debug)]
pub struct Selections<'a> {
    announcement: &'a Announcement,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for Selections<'_> {
    type Item = Selection;

    fn next(&mut self) -> Option<Selection> {
        if self.done {
            return None;
        }
        let images = &self.announcement.images;
        let values = self
            .digits
            .iter()
            .zip(images)
            .map(|(&d, img)| img[d])
            .collect();
        // odometer: the last profile varies fastest
        self.done = true;
        for k in (0..self.digits.len()).rev() {
            self.digits[k] += 1;
            if self.digits[k] < images[k].len() {
                self.done = false;
                break;
            }
            self.digits[k] = 0;
        }
        Some(Selection {
            env: self.announcement.env.clone(),
            values,
        })
    }
}

/// A single-valued mechanism on the domain: one outcome per profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    env: Arc<Environment>,
    values: Vec<OutcomeId>,
}

impl Selection {
    pub fn new(env: Arc<Environment>, values: Vec<OutcomeId>) -> Result<Self, AnnounceError> {
        let expected = env.domain().len();
        if values.len() != expected {
            return Err(AnnounceError::LengthMismatch {
                expected,
                found: values.len(),
            });
        }
        if let Some(p) = values.iter().position(|x| x.0 >= env.num_outcomes()) {
            return Err(AnnounceError::InvalidOutcome {
                profile: ProfileId(p),
                outcome: values[p],
            });
        }
        Ok(Self { env, values })
    }

    /// The mechanism choosing `f(profile)` everywhere.
    pub fn from_fn<F>(env: Arc<Environment>, mut f: F) -> Result<Self, AnnounceError>
    where
        F: FnMut(ProfileId) -> OutcomeId,
    {
        let values = env.domain().ids().map(&mut f).collect();
        Self::new(env, values)
    }

    pub fn environment(&self) -> &Arc<Environment> {
        &self.env
    }

    pub fn values(&self) -> &[OutcomeId] {
        &self.values
    }

    pub fn value(&self, p: ProfileId) -> OutcomeId {
        self.values[p.0]
    }

    /// `value(R)` lies in `announcement`'s image at every profile.
    pub fn is_possible_under(&self, announcement: &Announcement) -> bool {
        self.values.len() == announcement.images.len()
            && self
                .values
                .iter()
                .enumerate()
                .all(|(p, &x)| announcement.contains(ProfileId(p), x))
    }
}

impl Hash for Selection {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.values.hash(state);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Domain, Profile, Ranking};
    use std::collections::HashSet;

    fn o(k: usize) -> OutcomeId {
        OutcomeId(k)
    }

    fn env(profiles: usize) -> Arc<Environment> {
        // single individual over 3 outcomes, first `profiles` strict rankings
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let d = Domain::new(orders[..profiles].iter().map(|ord| {
            let r = Ranking::strict(&ord.map(OutcomeId)).unwrap();
            Profile::new(vec![r]).unwrap()
        }))
        .unwrap();
        Arc::new(Environment::with_default_labels(d).unwrap())
    }

    fn ann(images: &[&[usize]]) -> Announcement {
        let e = env(images.len());
        Announcement::new(
            e,
            images
                .iter()
                .map(|img| img.iter().map(|&k| o(k)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn transparency() {
        assert!(ann(&[&[0], &[1], &[2]]).is_fully_transparent());
        let a = ann(&[&[0], &[1, 2], &[2]]);
        assert!(!a.is_fully_transparent());
        assert!(a.is_opaque());
        assert_eq!(a.opaque_profiles(), 1);
        assert_eq!(a.excess(), 1);
    }

    #[test]
    fn counts() {
        assert_eq!(ann(&[&[0], &[1], &[2]]).selection_count(), BigUint::from(1u8));
        assert_eq!(
            ann(&[&[0, 1], &[0, 1, 2], &[2]]).selection_count(),
            BigUint::from(6u8)
        );
    }

    #[test]
    fn construction_errors() {
        let e = env(2);
        assert_eq!(
            Announcement::new(e.clone(), vec![vec![o(0)]]),
            Err(AnnounceError::LengthMismatch {
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            Announcement::new(e.clone(), vec![vec![o(0)], vec![]]),
            Err(AnnounceError::EmptyImage(ProfileId(1)))
        );
        assert!(matches!(
            Announcement::new(e, vec![vec![o(0)], vec![o(3)]]),
            Err(AnnounceError::InvalidOutcome { .. })
        ));
    }

    #[test]
    fn enumeration_is_lexicographic_exhaustive_and_unique() {
        let a = ann(&[&[0, 2], &[1], &[0, 1, 2]]);
        let all: Vec<Vec<usize>> = a
            .enumerate_selections(10)
            .unwrap()
            .map(|s| s.values().iter().map(|x| x.0).collect())
            .collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![0, 1, 2],
                vec![2, 1, 0],
                vec![2, 1, 1],
                vec![2, 1, 2],
            ]
        );
        let set: HashSet<Selection> = a.enumerate_selections(10).unwrap().collect();
        assert_eq!(set.len(), 6);
        assert!(set.iter().all(|s| s.is_possible_under(&a)));
    }

    #[test]
    fn transparent_enumerates_once() {
        let a = ann(&[&[0], &[1], &[2]]);
        assert_eq!(a.enumerate_selections(1).unwrap().count(), 1);
        assert_eq!(a.unique_selection().unwrap().values(), &[o(0), o(1), o(2)]);
    }

    #[test]
    fn cap_is_enforced_with_exact_count() {
        let a = ann(&[&[0, 1], &[0, 1, 2], &[2]]);
        match a.enumerate_selections(5) {
            Err(AnnounceError::CapExceeded { count, cap }) => {
                assert_eq!(count, BigUint::from(6u8));
                assert_eq!(cap, 5);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
        assert!(a.enumerate_selections(6).is_ok());
    }

    #[test]
    fn huge_counts_do_not_overflow() {
        use itertools::Itertools;
        let d = Domain::new((0..5).permutations(5).take(60).map(|ord| {
            let ord: Vec<_> = ord.into_iter().map(OutcomeId).collect();
            Profile::new(vec![Ranking::strict(&ord).unwrap()]).unwrap()
        }))
        .unwrap();
        let e = Arc::new(Environment::with_default_labels(d).unwrap());
        let a = Announcement::new(e, vec![vec![o(0), o(1)]; 60]).unwrap();
        assert_eq!(a.selection_count(), BigUint::from(1u64 << 60));
        match a.enumerate_selections(1 << 20) {
            Err(AnnounceError::CapExceeded { count, .. }) => {
                assert_eq!(count, BigUint::from(1u64 << 60))
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn restrict_pairwise_completion() {
        let a = ann(&[&[1, 2], &[0, 2], &[1, 2]]);
        let s = a.restrict_pairwise(ProfileId(0), o(2), ProfileId(1), o(2)).unwrap();
        assert_eq!(s.values(), &[o(2), o(2), o(1)]);
        assert!(s.is_possible_under(&a));
        assert_eq!(
            a.restrict_pairwise(ProfileId(0), o(0), ProfileId(1), o(2)),
            Err(AnnounceError::NotInImage {
                profile: ProfileId(0),
                outcome: o(0)
            })
        );
        assert_eq!(
            a.restrict_pairwise(ProfileId(1), o(0), ProfileId(1), o(2)),
            Err(AnnounceError::SameProfile(ProfileId(1)))
        );
    }

    #[test]
    fn restrict_pairwise_on_transparent_is_unique_selection() {
        let a = ann(&[&[2], &[0], &[1]]);
        let s = a.restrict_pairwise(ProfileId(2), o(1), ProfileId(0), o(2)).unwrap();
        assert_eq!(Some(s), a.unique_selection());
    }
}
