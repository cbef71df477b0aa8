//! Belief revision: Dempster's rule of conditioning (mass transfer, with or
//! without normalization), robust conditioning of the credal set, and
//! Dempster's rule of combination.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::SubsetMask;
use crate::mass::{MassFunction, WorldMode};
use crate::scalar::Scalar;

/// Which conditioning rule produced an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditioningRule {
    /// Mass transfer followed by renormalization (D-conditioning).
    DempsterNormalized,
    /// Mass transfer that keeps the conflict on ∅.
    DempsterOpen,
    /// Envelope of the conditioned credal set (G-conditioning).
    Robust,
}

impl fmt::Display for ConditioningRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditioningRule::DempsterNormalized => "dempster",
            ConditioningRule::DempsterOpen => "open",
            ConditioningRule::Robust => "robust",
        })
    }
}

/// Lower and upper bound on a (conditional) probability.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalResult<T> {
    pub lower: T,
    pub upper: T,
    pub rule: ConditioningRule,
}

impl<T: Scalar> IntervalResult<T> {
    pub fn new(lower: T, upper: T, rule: ConditioningRule) -> Self {
        IntervalResult { lower, upper, rule }
    }

    /// `[other.lower, other.upper] ⊆ [self.lower, self.upper]`.
    pub fn contains(&self, other: &IntervalResult<T>) -> bool {
        self.lower.le_approx(&other.lower) && other.upper.le_approx(&self.upper)
    }

    pub fn is_point(&self) -> bool {
        self.lower.approx_eq(&self.upper)
    }

    /// Bound-wise equality up to tolerance, ignoring the rule tag.
    pub fn same_bounds(&self, other: &IntervalResult<T>) -> bool {
        self.lower.approx_eq(&other.lower) && self.upper.approx_eq(&other.upper)
    }
}

/// Result of a transfer or combination together with the mass that landed
/// on ∅. When normalized, that conflict was discarded before rescaling.
#[derive(Debug, Clone)]
pub struct Revised<T> {
    pub mass: MassFunction<T>,
    pub conflict: T,
}

impl<T: Scalar> PartialEq for Revised<T> {
    fn eq(&self, other: &Self) -> bool {
        self.mass == other.mass && self.conflict == other.conflict
    }
}

/// Rescales everything but ∅ to sum to one, or keeps ∅ as is.
fn settle<T: Scalar>(
    frame: crate::frame::Frame,
    mut focal: BTreeMap<SubsetMask, T>,
    normalize: bool,
) -> Result<Revised<T>> {
    let conflict = focal.get(&SubsetMask::EMPTY).cloned().unwrap_or_else(T::zero);
    if !normalize {
        return Ok(Revised {
            mass: MassFunction::from_parts(frame, focal, WorldMode::Open),
            conflict,
        });
    }
    focal.remove(&SubsetMask::EMPTY);
    let kept: T = focal.values().cloned().sum();
    if !kept.is_positive() {
        return Err(Error::TotalConflict);
    }
    if !conflict.is_negligible() {
        for m in focal.values_mut() {
            *m = m.clone() / kept.clone();
        }
    }
    Ok(Revised {
        mass: MassFunction::from_parts(frame, focal, WorldMode::Closed),
        conflict,
    })
}

/// Dempster's rule of conditioning on `on`: every m(A) moves to A ∩ B.
///
/// With `normalize`, mass reaching ∅ is discarded and the rest rescaled; this
/// requires pl(B) > 0. Without it, m(∅) keeps the transferred conflict and
/// the result is an open-world mass.
pub fn d_condition<T: Scalar>(m: &MassFunction<T>, on: SubsetMask, normalize: bool) -> Result<Revised<T>> {
    let frame = m.frame();
    frame.check(on)?;
    if on.is_empty() {
        return Err(Error::EmptyConditioningSet);
    }
    if normalize && !m.pl_unchecked(on).is_positive() {
        return Err(Error::ZeroPlausibility {
            set: frame.render(on),
        });
    }
    let mut focal: BTreeMap<SubsetMask, T> = BTreeMap::new();
    for (set, mass) in m.focal() {
        *focal.entry(set & on).or_insert_with(T::zero) += mass.clone();
    }
    settle(frame.clone(), focal, normalize)
}

/// Conditional bel/pl under normalized D-conditioning, from the unconditioned
/// measures:
///
/// lower = (bel(A ∪ B̄) − bel(B̄)) / (bel(Ω) − bel(B̄)), upper = pl(A ∩ B) / pl(B).
///
/// For closed-world masses bel(Ω) = 1; the general denominator equals pl(B)
/// in either mode.
pub fn d_condition_closed_form<T: Scalar>(
    m: &MassFunction<T>,
    a: SubsetMask,
    on: SubsetMask,
) -> Result<IntervalResult<T>> {
    let frame = m.frame();
    frame.check(a)?;
    frame.check(on)?;
    let pl_b = m.pl_unchecked(on);
    if !pl_b.is_positive() {
        return Err(Error::ZeroPlausibility {
            set: frame.render(on),
        });
    }
    let not_b = frame.complement(on);
    let bel_not_b = m.bel_unchecked(not_b);
    let lower = (m.bel_unchecked(a | not_b) - bel_not_b.clone())
        / (m.bel_unchecked(frame.full()) - bel_not_b);
    let upper = m.pl_unchecked(a & on) / pl_b;
    Ok(IntervalResult::new(lower, upper, ConditioningRule::DempsterNormalized))
}

/// Robust conditioning: the envelope of P(A | B) over every distribution
/// P ≥ bel with P(B) > 0.
///
/// lower = bel(A∩B) / (bel(A∩B) + pl(Ā∩B)), upper = pl(A∩B) / (pl(A∩B) + bel(Ā∩B)).
///
/// A zero lower denominator means no compatible distribution puts mass on
/// Ā∩B while B stays possible, so the lower bound is 1. A zero upper
/// denominator means pl(A∩B) = 0 and the upper bound is 0.
pub fn g_condition<T: Scalar>(m: &MassFunction<T>, a: SubsetMask, on: SubsetMask) -> Result<IntervalResult<T>> {
    let frame = m.frame();
    frame.check(a)?;
    frame.check(on)?;
    if !m.pl_unchecked(on).is_positive() {
        return Err(Error::ZeroPlausibility {
            set: frame.render(on),
        });
    }
    let hit = a & on;
    let miss = frame.complement(a) & on;
    let (bel_hit, pl_hit) = (m.bel_unchecked(hit), m.pl_unchecked(hit));
    let (bel_miss, pl_miss) = (m.bel_unchecked(miss), m.pl_unchecked(miss));

    let lower_den = bel_hit.clone() + pl_miss;
    let lower = if lower_den.is_negligible() {
        T::one()
    } else {
        bel_hit / lower_den
    };
    let upper_den = pl_hit.clone() + bel_miss;
    let upper = if upper_den.is_negligible() {
        T::zero()
    } else {
        pl_hit / upper_den
    };
    Ok(IntervalResult::new(lower, upper, ConditioningRule::Robust))
}

/// Dempster's rule of combination: m(C) = Σ_{A∩B=C} m1(A)·m2(B), then
/// normalized or kept open as in [`d_condition`].
pub fn combine_dempster<T: Scalar>(
    m1: &MassFunction<T>,
    m2: &MassFunction<T>,
    normalize: bool,
) -> Result<Revised<T>> {
    if m1.frame() != m2.frame() {
        return Err(Error::FrameMismatch);
    }
    let mut focal: BTreeMap<SubsetMask, T> = BTreeMap::new();
    for (a, ma) in m1.focal() {
        for (b, mb) in m2.focal() {
            *focal.entry(a & b).or_insert_with(T::zero) += ma.clone() * mb.clone();
        }
    }
    settle(m1.frame().clone(), focal, normalize)
}

/// The same conditional query under both rules: (D interval, G interval).
pub fn compare_rules<T: Scalar>(
    m: &MassFunction<T>,
    a: SubsetMask,
    on: SubsetMask,
) -> Result<(IntervalResult<T>, IntervalResult<T>)> {
    Ok((d_condition_closed_form(m, a, on)?, g_condition(m, a, on)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Frame;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    fn posts() -> Frame {
        Frame::new(["P1", "P2", "P3"]).unwrap()
    }

    fn soldiers() -> MassFunction<BigRational> {
        let f = posts();
        MassFunction::new(
            f.clone(),
            [
                (f.subset(["P1"]).unwrap(), q(1, 3)),
                (f.subset(["P1", "P2"]).unwrap(), q(1, 3)),
                (f.full(), q(1, 3)),
            ],
            WorldMode::Closed,
        )
        .unwrap()
    }

    fn set(names: &[&str]) -> SubsetMask {
        posts().subset(names).unwrap()
    }

    #[test]
    fn dempster_conditioning_on_p1_p3() {
        let m = soldiers();
        let r = d_condition(&m, set(&["P1", "P3"]), true).unwrap();
        assert_eq!(r.mass.mass(set(&["P1"])), q(2, 3));
        assert_eq!(r.mass.mass(set(&["P1", "P3"])), q(1, 3));
        assert_eq!(r.mass.focal_count(), 2);
        assert_eq!(r.conflict, q(0, 1));
        assert_eq!(r.mass.bel(set(&["P1"])).unwrap(), q(2, 3));
        assert_eq!(r.mass.bel(set(&["P1", "P3"])).unwrap(), q(1, 1));
    }

    #[test]
    fn conditioning_on_the_frame_is_identity() {
        let m = soldiers();
        assert_eq!(d_condition(&m, posts().full(), true).unwrap().mass, m);
        assert_eq!(d_condition(&m, posts().full(), false).unwrap().mass, m);
    }

    #[test]
    fn open_and_normalized_transfer() {
        let f = Frame::new(["a", "b"]).unwrap();
        let a = f.subset(["a"]).unwrap();
        let b = f.subset(["b"]).unwrap();
        let m = MassFunction::new(f.clone(), [(a, q(1, 2)), (b, q(1, 2))], WorldMode::Closed).unwrap();
        let open = d_condition(&m, a, false).unwrap();
        assert_eq!(open.mass.mode(), WorldMode::Open);
        assert_eq!(open.mass.mass(a), q(1, 2));
        assert_eq!(open.mass.empty_mass(), q(1, 2));
        let closed = d_condition(&m, a, true).unwrap();
        assert_eq!(closed.mass.mass(a), q(1, 1));
        assert_eq!(closed.conflict, q(1, 2));
    }

    #[test]
    fn conditioning_errors() {
        let f = Frame::new(["a", "b"]).unwrap();
        let a = f.subset(["a"]).unwrap();
        let b = f.subset(["b"]).unwrap();
        let m = MassFunction::<BigRational>::categorical(f, a).unwrap();
        assert!(matches!(d_condition(&m, b, true), Err(Error::ZeroPlausibility { .. })));
        assert!(matches!(
            d_condition(&m, SubsetMask::EMPTY, false),
            Err(Error::EmptyConditioningSet)
        ));
        let open = d_condition(&m, b, false).unwrap();
        assert_eq!(open.mass.empty_mass(), q(1, 1));
        assert!(matches!(d_condition_closed_form(&m, a, b), Err(Error::ZeroPlausibility { .. })));
        assert!(matches!(g_condition(&m, a, b), Err(Error::ZeroPlausibility { .. })));
    }

    #[test]
    fn dempster_closed_form() {
        let m = soldiers();
        let on = set(&["P1", "P3"]);
        let r = d_condition_closed_form(&m, set(&["P1"]), on).unwrap();
        assert_eq!((r.lower, r.upper), (q(2, 3), q(1, 1)));
        let r = d_condition_closed_form(&m, set(&["P3"]), on).unwrap();
        assert_eq!((r.lower, r.upper), (q(0, 1), q(1, 3)));
        let full = posts().full();
        let r = d_condition_closed_form(&m, full, full).unwrap();
        assert_eq!((r.lower, r.upper), (q(1, 1), q(1, 1)));
    }

    #[test]
    fn robust_conditioning() {
        let m = soldiers();
        let on = set(&["P1", "P3"]);
        let r = g_condition(&m, set(&["P1"]), on).unwrap();
        assert_eq!((r.lower, r.upper), (q(1, 2), q(1, 1)));
        assert_eq!(r.rule, ConditioningRule::Robust);
        // A ⊇ B
        let r = g_condition(&m, set(&["P1", "P2", "P3"]), on).unwrap();
        assert_eq!(r.upper, q(1, 1));
    }

    #[test]
    fn robust_degenerate_denominators() {
        // m({a,c}) = 1, B = {a,b}: any P with P(B) > 0 has P(a|B) = 1.
        let f = Frame::new(["a", "b", "c"]).unwrap();
        let m = MassFunction::<BigRational>::categorical(f.clone(), f.subset(["a", "c"]).unwrap()).unwrap();
        let on = f.subset(["a", "b"]).unwrap();
        let r = g_condition(&m, f.subset(["a"]).unwrap(), on).unwrap();
        assert_eq!((r.lower, r.upper), (q(1, 1), q(1, 1)));
        let r = g_condition(&m, f.subset(["b"]).unwrap(), on).unwrap();
        assert_eq!((r.lower, r.upper), (q(0, 1), q(0, 1)));
    }

    #[test]
    fn bayesian_rules_agree() {
        let f = posts();
        let m = MassFunction::bayesian(f.clone(), [("P1", q(1, 2)), ("P2", q(1, 3)), ("P3", q(1, 6))])
            .unwrap();
        for a in f.subsets() {
            for b in f.subsets().filter(|b| !b.is_empty()) {
                let (d, g) = compare_rules(&m, a, b).unwrap();
                assert!(d.is_point() && g.is_point());
                let expected = m.bel(a & b).unwrap() / m.bel(b).unwrap();
                assert_eq!(d.lower, expected);
                assert_eq!(g.lower, expected);
            }
        }
    }

    #[test]
    fn compare_on_soldiers() {
        let (d, g) = compare_rules(&soldiers(), set(&["P1"]), set(&["P1", "P3"])).unwrap();
        assert_eq!((d.lower.clone(), d.upper.clone()), (q(2, 3), q(1, 1)));
        assert_eq!((g.lower.clone(), g.upper.clone()), (q(1, 2), q(1, 1)));
        assert!(g.contains(&d));
        assert!(!d.contains(&g));
    }

    #[test]
    fn combination_basics() {
        let m = soldiers();
        let v = MassFunction::vacuous(posts());
        let r = combine_dempster(&m, &v, true).unwrap();
        assert_eq!(r.mass, m);
        assert_eq!(r.conflict, q(0, 1));

        let on = set(&["P1", "P3"]);
        let cat = MassFunction::categorical(posts(), on).unwrap();
        assert_eq!(
            combine_dempster(&m, &cat, true).unwrap().mass,
            d_condition(&m, on, true).unwrap().mass
        );

        let f = Frame::new(["a", "b"]).unwrap();
        let ca = MassFunction::<BigRational>::categorical(f.clone(), f.subset(["a"]).unwrap()).unwrap();
        let cb = MassFunction::<BigRational>::categorical(f.clone(), f.subset(["b"]).unwrap()).unwrap();
        assert!(matches!(combine_dempster(&ca, &cb, true), Err(Error::TotalConflict)));
        let open = combine_dempster(&ca, &cb, false).unwrap();
        assert_eq!(open.mass.empty_mass(), q(1, 1));
        assert_eq!(open.conflict, q(1, 1));

        assert!(matches!(combine_dempster(&m, &ca, true), Err(Error::FrameMismatch)));
    }

    #[test]
    fn float_instantiation() {
        let f = posts();
        let m = MassFunction::new(
            f.clone(),
            [(set(&["P1"]), 1.0f64 / 3.0), (set(&["P1", "P2"]), 1.0 / 3.0), (f.full(), 1.0 / 3.0)],
            WorldMode::Closed,
        )
        .unwrap();
        let (d, g) = compare_rules(&m, set(&["P1"]), set(&["P1", "P3"])).unwrap();
        assert!(d.lower.approx_eq(&(2.0 / 3.0)));
        assert!(g.lower.approx_eq(&0.5));
        assert!(g.contains(&d));
    }
}
