//! Basic belief assignments and the static measures derived from them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetMask};
use crate::scalar::Scalar;
use crate::transform::BeliefTable;

/// Whether the empty set may carry mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WorldMode {
    /// Masses are normalized; m(∅) = 0.
    #[default]
    Closed,
    /// m(∅) ≥ 0 is kept as an explicit outcome of unnormalized transfer.
    Open,
}

/// Mass function over a frame: strictly positive masses on focal sets,
/// summing to one.
///
/// Equality compares the frame and the focal masses. The mode is a
/// permission on ∅ and does not take part in it, so an open-world mass with
/// nothing on ∅ equals its closed-world twin.
#[derive(Debug, Clone)]
pub struct MassFunction<T> {
    frame: Frame,
    focal: BTreeMap<SubsetMask, T>,
    mode: WorldMode,
}

impl<T: Scalar> PartialEq for MassFunction<T> {
    fn eq(&self, other: &Self) -> bool {
        self.frame == other.frame && self.focal == other.focal
    }
}

impl<T: Scalar> MassFunction<T> {
    /// Validating constructor. Repeated subsets are summed; zero masses are
    /// dropped.
    pub fn new<I>(frame: Frame, assignments: I, mode: WorldMode) -> Result<Self>
    where
        I: IntoIterator<Item = (SubsetMask, T)>,
    {
        let mut focal: BTreeMap<SubsetMask, T> = BTreeMap::new();
        for (set, mass) in assignments {
            frame.check(set)?;
            *focal.entry(set).or_insert_with(T::zero) += mass;
        }
        for (set, mass) in &focal {
            if mass.is_negative() {
                return Err(Error::NegativeMass {
                    set: frame.render(*set),
                    value: mass.to_literal(),
                });
            }
        }
        let sum: T = focal.values().cloned().sum();
        if !sum.approx_eq(&T::one()) {
            return Err(Error::MassSumNotOne {
                sum: sum.to_literal(),
            });
        }
        if mode == WorldMode::Closed {
            if let Some(m) = focal.get(&SubsetMask::EMPTY) {
                if !m.is_negligible() {
                    return Err(Error::MassOnEmptySet {
                        value: m.to_literal(),
                    });
                }
            }
        }
        Ok(Self::from_parts(frame, focal, mode))
    }

    /// Assembles a mass function whose invariants the caller guarantees,
    /// dropping negligible entries.
    pub(crate) fn from_parts(frame: Frame, mut focal: BTreeMap<SubsetMask, T>, mode: WorldMode) -> Self {
        focal.retain(|_, m| !m.is_negligible());
        MassFunction { frame, focal, mode }
    }

    /// Total ignorance: m(Ω) = 1.
    pub fn vacuous(frame: Frame) -> Self {
        let full = frame.full();
        Self::from_parts(frame, BTreeMap::from([(full, T::one())]), WorldMode::Closed)
    }

    /// m(B) = 1 for a nonempty `set`.
    pub fn categorical(frame: Frame, set: SubsetMask) -> Result<Self> {
        frame.check(set)?;
        if set.is_empty() {
            return Err(Error::MassOnEmptySet {
                value: "1".to_string(),
            });
        }
        Ok(Self::from_parts(frame, BTreeMap::from([(set, T::one())]), WorldMode::Closed))
    }

    /// Mass on singletons only, from a probability per label. Labels left out
    /// get probability 0.
    pub fn bayesian<I, S>(frame: Frame, probabilities: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T)>,
        S: AsRef<str>,
    {
        let mut assignments = Vec::new();
        for (label, p) in probabilities {
            let label = label.as_ref();
            let i = frame
                .index_of(label)
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            assignments.push((SubsetMask::singleton(i), p));
        }
        Self::new(frame, assignments, WorldMode::Closed)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn mode(&self) -> WorldMode {
        self.mode
    }

    /// Focal sets and their masses in increasing mask order.
    pub fn focal(&self) -> impl Iterator<Item = (SubsetMask, &T)> {
        self.focal.iter().map(|(s, m)| (*s, m))
    }

    pub fn focal_count(&self) -> usize {
        self.focal.len()
    }

    /// m(A), zero for non-focal sets.
    pub fn mass(&self, set: SubsetMask) -> T {
        self.focal.get(&set).cloned().unwrap_or_else(T::zero)
    }

    /// m(∅); always zero in closed-world mode.
    pub fn empty_mass(&self) -> T {
        self.mass(SubsetMask::EMPTY)
    }

    /// True when every focal set is a singleton.
    pub fn is_bayesian(&self) -> bool {
        self.focal.keys().all(|s| s.len() == 1)
    }

    /// Degree of belief: Σ m(X) over nonempty X ⊆ A. Never counts m(∅).
    pub fn bel(&self, set: SubsetMask) -> Result<T> {
        self.frame.check(set)?;
        Ok(self.bel_unchecked(set))
    }

    /// Plausibility: Σ m(X) over X meeting A.
    pub fn pl(&self, set: SubsetMask) -> Result<T> {
        self.frame.check(set)?;
        Ok(self.pl_unchecked(set))
    }

    pub(crate) fn bel_unchecked(&self, set: SubsetMask) -> T {
        self.focal
            .iter()
            .filter(|(x, _)| !x.is_empty() && x.is_subset_of(set))
            .map(|(_, m)| m.clone())
            .sum()
    }

    pub(crate) fn pl_unchecked(&self, set: SubsetMask) -> T {
        self.focal
            .iter()
            .filter(|(x, _)| x.intersects(set))
            .map(|(_, m)| m.clone())
            .sum()
    }

    /// Dense belief values over the whole powerset.
    pub fn bel_table(&self) -> BeliefTable<T> {
        BeliefTable::from_mass(self)
    }

    /// Same masses reinterpreted under another mode. Fails when moving to
    /// closed mode with mass on ∅.
    pub fn with_mode(&self, mode: WorldMode) -> Result<Self> {
        if mode == WorldMode::Closed && !self.empty_mass().is_negligible() {
            return Err(Error::MassOnEmptySet {
                value: self.empty_mass().to_literal(),
            });
        }
        Ok(MassFunction {
            frame: self.frame.clone(),
            focal: self.focal.clone(),
            mode,
        })
    }

    /// Equality up to the scalar tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        if self.frame != other.frame {
            return false;
        }
        let keys: std::collections::BTreeSet<SubsetMask> =
            self.focal.keys().chain(other.focal.keys()).copied().collect();
        keys.into_iter()
            .all(|k| self.mass(k).approx_eq(&other.mass(k)))
    }
}
