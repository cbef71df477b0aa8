//! Multivalued sources: a probability on an evidence space carried to
//! subsets of a target frame.

use std::collections::BTreeMap;

use crate::conditioning::{g_condition, IntervalResult};
use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetMask};
use crate::mass::{MassFunction, WorldMode};
use crate::scalar::Scalar;

/// `(X, P_X, M)`: labelled evidence states with probabilities, each mapped
/// to a subset of the target frame. Empty images are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivaluedSource<T> {
    labels: Vec<String>,
    probabilities: Vec<T>,
    target: Frame,
    images: Vec<SubsetMask>,
}

/// Checks that `probabilities` form a distribution over `labels`.
pub(crate) fn check_distribution<T: Scalar>(labels: &[String], probabilities: &[T]) -> Result<()> {
    for (label, p) in labels.iter().zip(probabilities) {
        if p.is_negative() {
            return Err(Error::NegativeProbability {
                label: label.clone(),
                value: p.to_literal(),
            });
        }
    }
    let sum: T = probabilities.iter().cloned().sum();
    if !sum.approx_eq(&T::one()) {
        return Err(Error::ProbabilitySumNotOne {
            sum: sum.to_literal(),
        });
    }
    Ok(())
}

/// Conditions `probabilities` on the `allowed` indices, zeroing the rest.
pub(crate) fn restrict_distribution<T: Scalar>(probabilities: &[T], allowed: &[bool]) -> Result<Vec<T>> {
    let total: T = probabilities
        .iter()
        .zip(allowed)
        .filter(|(_, &keep)| keep)
        .map(|(p, _)| p.clone())
        .sum();
    if !total.is_positive() {
        return Err(Error::ZeroProbability);
    }
    Ok(probabilities
        .iter()
        .zip(allowed)
        .map(|(p, &keep)| if keep { p.clone() / total.clone() } else { T::zero() })
        .collect())
}

impl<T: Scalar> MultivaluedSource<T> {
    /// `entries` lists `(label, probability, image)` in source order.
    pub fn new<I, S>(target: Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T, SubsetMask)>,
        S: Into<String>,
    {
        let mut labels = Vec::new();
        let mut probabilities = Vec::new();
        let mut images = Vec::new();
        for (label, p, image) in entries {
            let label = label.into();
            if label.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if labels.contains(&label) {
                return Err(Error::DuplicateSource(label));
            }
            target.check(image)?;
            labels.push(label);
            probabilities.push(p);
            images.push(image);
        }
        if labels.is_empty() {
            return Err(Error::EmptyFrame);
        }
        check_distribution(&labels, &probabilities)?;
        Ok(MultivaluedSource {
            labels,
            probabilities,
            target,
            images,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    pub fn target(&self) -> &Frame {
        &self.target
    }

    pub fn images(&self) -> &[SubsetMask] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn entries(&self) -> impl Iterator<Item = (&T, SubsetMask)> {
        self.probabilities.iter().zip(self.images.iter().copied())
    }

    /// P_X of the states whose image is nonempty and inside `set`.
    pub fn lower_probability(&self, set: SubsetMask) -> T {
        self.entries()
            .filter(|(_, img)| !img.is_empty() && img.is_subset_of(set))
            .map(|(p, _)| p.clone())
            .sum()
    }

    /// P_X of the states whose image meets `set`.
    pub fn upper_probability(&self, set: SubsetMask) -> T {
        self.entries()
            .filter(|(_, img)| img.intersects(set))
            .map(|(p, _)| p.clone())
            .sum()
    }

    /// m(A) = Σ P_X(x) over {x : M(x) = A}.
    ///
    /// Probability on empty images is renormalized away when `normalize` is
    /// set, and kept as m(∅) of an open-world mass otherwise.
    pub fn induced_mass(&self, normalize: bool) -> Result<MassFunction<T>> {
        let mut focal: BTreeMap<SubsetMask, T> = BTreeMap::new();
        for (p, img) in self.entries() {
            *focal.entry(img).or_insert_with(T::zero) += p.clone();
        }
        if !normalize {
            return Ok(MassFunction::from_parts(self.target.clone(), focal, WorldMode::Open));
        }
        let lost = focal.remove(&SubsetMask::EMPTY).unwrap_or_else(T::zero);
        let kept: T = focal.values().cloned().sum();
        if !kept.is_positive() {
            return Err(Error::TotalConflict);
        }
        if !lost.is_negligible() {
            for m in focal.values_mut() {
                *m = m.clone() / kept.clone();
            }
        }
        Ok(MassFunction::from_parts(self.target.clone(), focal, WorldMode::Closed))
    }

    /// M_B(x) = M(x) ∩ B with P_X left as is.
    pub fn condition_mapping(&self, on: SubsetMask) -> Self {
        MultivaluedSource {
            images: self.images.iter().map(|&img| img & on).collect(),
            ..self.clone()
        }
    }

    /// Conditions P_X on the named states; images are untouched.
    pub fn condition_source<I, S>(&self, allowed: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut keep = vec![false; self.len()];
        for name in allowed {
            let name = name.as_ref();
            let i = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownSource(name.to_string()))?;
            keep[i] = true;
        }
        Ok(MultivaluedSource {
            probabilities: restrict_distribution(&self.probabilities, &keep)?,
            ..self.clone()
        })
    }

    /// Robust conditional bounds of the normalized induced mass.
    pub fn g_condition(&self, a: SubsetMask, on: SubsetMask) -> Result<IntervalResult<T>> {
        let m = self.induced_mass(true).map_err(|e| match e {
            Error::TotalConflict => Error::ZeroPlausibility {
                set: self.target.render(on),
            },
            other => other,
        })?;
        g_condition(&m, a, on)
    }
}

/// Free-function form of [`MultivaluedSource::g_condition`].
pub fn g_condition_source<T: Scalar>(
    s: &MultivaluedSource<T>,
    a: SubsetMask,
    on: SubsetMask,
) -> Result<IntervalResult<T>> {
    s.g_condition(a, on)
}
