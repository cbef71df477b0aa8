//! Brute-force credal-set oracle.
//!
//! The credal set of a closed-world mass function is the polytope of
//! probability distributions P with P(A) ≥ bel(A) for every A. Its extreme
//! points are obtained by sending each focal mass wholly to one element of
//! its focal set. Linear and linear-fractional objectives reach their extrema
//! at extreme points, so envelopes over the vertex list are exact.

use serde::Serialize;

use crate::conditioning::{d_condition, d_condition_closed_form, g_condition, ConditioningRule, IntervalResult};
use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetMask};
use crate::mass::MassFunction;
use crate::scalar::Scalar;
use crate::transform::subset_sums;

/// Maximum number of focal-mass allocations enumerated.
pub const ALLOCATION_BUDGET: u128 = 1_000_000;

/// Largest frame [`verify_against_closed_forms`] sweeps; it checks all
/// `4^n` subset pairs.
pub const VERIFY_MAX_FRAME: usize = 6;

/// One extreme point of the credal set, with an allocation that produces it.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationVertex<T> {
    /// Probability of each frame element, in frame order.
    pub distribution: Vec<T>,
    /// `(focal set, index of the element receiving its mass)`.
    pub allocation: Vec<(SubsetMask, usize)>,
}

impl<T: Scalar> AllocationVertex<T> {
    pub fn probability(&self, set: SubsetMask) -> T {
        set.elements()
            .filter_map(|i| self.distribution.get(i))
            .cloned()
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct CredalVertexSet<T> {
    mass: MassFunction<T>,
    vertices: Vec<AllocationVertex<T>>,
    allocations: u128,
}

fn allocation_count<T: Scalar>(m: &MassFunction<T>) -> u128 {
    m.focal()
        .map(|(s, _)| s.len() as u128)
        .fold(1u128, |acc, k| acc.saturating_mul(k))
}

/// Every allocation in mixed-radix order, without deduplication.
pub fn enumerate_allocations<T: Scalar>(m: &MassFunction<T>) -> Result<Vec<AllocationVertex<T>>> {
    let empty = m.empty_mass();
    if !empty.is_negligible() {
        return Err(Error::OpenWorldMass {
            value: empty.to_literal(),
        });
    }
    let required = allocation_count(m);
    if required > ALLOCATION_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "credal allocations",
            required,
            budget: ALLOCATION_BUDGET,
        });
    }
    let n = m.frame().len();
    let focal: Vec<(SubsetMask, T, Vec<usize>)> = m
        .focal()
        .map(|(s, mass)| (s, mass.clone(), s.elements().collect()))
        .collect();
    let mut digits = vec![0usize; focal.len()];
    let mut out = Vec::with_capacity(required as usize);
    loop {
        let mut distribution = vec![T::zero(); n];
        let mut allocation = Vec::with_capacity(focal.len());
        for ((set, mass, elems), &d) in focal.iter().zip(&digits) {
            distribution[elems[d]] += mass.clone();
            allocation.push((*set, elems[d]));
        }
        out.push(AllocationVertex {
            distribution,
            allocation,
        });
        // odometer increment, last focal set fastest
        let mut pos = focal.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < focal[pos].2.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

fn lexicographic<T: Scalar>(a: &[T], b: &[T]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Distinct extreme points of the credal set of `m`, sorted
/// lexicographically by distribution.
pub fn enumerate_vertices<T: Scalar>(m: &MassFunction<T>) -> Result<CredalVertexSet<T>> {
    let raw = enumerate_allocations(m)?;
    let allocations = raw.len() as u128;
    Ok(CredalVertexSet::from_raw(m.clone(), raw, allocations))
}

impl<T: Scalar> CredalVertexSet<T> {
    fn from_raw(mass: MassFunction<T>, mut raw: Vec<AllocationVertex<T>>, allocations: u128) -> Self {
        // stable sort keeps the first allocation of each distribution
        raw.sort_by(|a, b| lexicographic(&a.distribution, &b.distribution));
        raw.dedup_by(|later, kept| later.distribution == kept.distribution);
        CredalVertexSet {
            mass,
            vertices: raw,
            allocations,
        }
    }

    pub fn mass(&self) -> &MassFunction<T> {
        &self.mass
    }

    pub fn frame(&self) -> &Frame {
        self.mass.frame()
    }

    pub fn vertices(&self) -> &[AllocationVertex<T>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Allocations enumerated before deduplication.
    pub fn allocation_count(&self) -> u128 {
        self.allocations
    }

    /// (min, max) of P(A) over the credal set.
    pub fn envelope(&self, a: SubsetMask) -> IntervalResult<T> {
        envelope_over(&self.vertices, a)
    }

    /// (min, max) of P(A | B) over distributions of the credal set with
    /// P(B) > 0.
    pub fn conditional_envelope(&self, a: SubsetMask, on: SubsetMask) -> Result<IntervalResult<T>> {
        conditional_envelope_over(&self.vertices, a, on).ok_or_else(|| Error::UndefinedConditioning {
            set: self.frame().render(on),
        })
    }
}

/// Envelope over an arbitrary vertex list, duplicates or not.
pub fn envelope_over<T: Scalar>(vertices: &[AllocationVertex<T>], a: SubsetMask) -> IntervalResult<T> {
    let mut values = vertices.iter().map(|v| v.probability(a));
    let first = values.next().unwrap_or_else(T::zero);
    let (lower, upper) = values.fold((first.clone(), first), |(lo, hi), p| {
        (T::min_of(lo, p.clone()), T::max_of(hi, p))
    });
    IntervalResult::new(lower, upper, ConditioningRule::Robust)
}

/// Conditional envelope over a vertex list; `None` when every vertex gives B
/// probability zero.
pub fn conditional_envelope_over<T: Scalar>(
    vertices: &[AllocationVertex<T>],
    a: SubsetMask,
    on: SubsetMask,
) -> Option<IntervalResult<T>> {
    let mut ratios = vertices.iter().filter_map(|v| {
        let pb = v.probability(on);
        pb.is_positive().then(|| v.probability(a & on) / pb)
    });
    let first = ratios.next()?;
    let (lower, upper) = ratios.fold((first.clone(), first), |(lo, hi), r| {
        (T::min_of(lo, r.clone()), T::max_of(hi, r))
    });
    Some(IntervalResult::new(lower, upper, ConditioningRule::Robust))
}

/// One failed check in a [`VerifyReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: &'static str,
    pub query: String,
    pub given: Option<String>,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub frame_size: usize,
    pub allocations: u128,
    pub vertices: usize,
    /// Queries A checked against the unconditional envelope.
    pub sets_checked: usize,
    /// Pairs (A, B) with pl(B) > 0 checked under conditioning.
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Sums counts and concatenates violations.
    pub fn merge(&mut self, other: VerifyReport) {
        self.frame_size = self.frame_size.max(other.frame_size);
        self.allocations += other.allocations;
        self.vertices += other.vertices;
        self.sets_checked += other.sets_checked;
        self.pairs_checked += other.pairs_checked;
        self.violations.extend(other.violations);
    }
}

fn show<T: Scalar>(i: &IntervalResult<T>) -> String {
    format!("[{}, {}]", i.lower.to_literal(), i.upper.to_literal())
}

/// Sweeps every subset A and every pair (A, B) with pl(B) > 0 and checks
/// that the credal envelopes match the closed forms:
///
/// * `envelope(A) = (bel(A), pl(A))`
/// * `conditional_envelope(A, B) = g_condition(A, B)`
/// * the D-conditioning interval lies inside the G-conditioning interval
/// * the D closed form equals bel/pl after normalized mass transfer
pub fn verify_against_closed_forms<T: Scalar>(m: &MassFunction<T>) -> Result<VerifyReport> {
    let frame = m.frame().clone();
    if frame.len() > VERIFY_MAX_FRAME {
        return Err(Error::BudgetExceeded {
            what: "frame size for the pairwise sweep",
            required: frame.len() as u128,
            budget: VERIFY_MAX_FRAME as u128,
        });
    }
    let credal = enumerate_vertices(m)?;

    // P(S) for every vertex and subset
    let tables: Vec<Vec<T>> = credal
        .vertices()
        .iter()
        .map(|v| {
            let mut t = vec![T::zero(); frame.powerset_len()];
            for (i, p) in v.distribution.iter().enumerate() {
                t[1 << i] = p.clone();
            }
            subset_sums(&mut t);
            t
        })
        .collect();

    let bel = m.bel_table();
    let mut report = VerifyReport {
        frame_size: frame.len(),
        allocations: credal.allocation_count(),
        vertices: credal.len(),
        sets_checked: 0,
        pairs_checked: 0,
        violations: Vec::new(),
    };
    let flag = |check: &'static str, a: SubsetMask, b: Option<SubsetMask>, expected: String, found: String| {
        report_violation(&frame, check, a, b, expected, found)
    };
    let mut violations = Vec::new();

    for a in frame.subsets() {
        report.sets_checked += 1;
        let env = credal.envelope(a);
        let (bel_a, pl_a) = (bel.bel(a)?.clone(), bel.pl(a)?);
        if !env.lower.approx_eq(&bel_a) || !env.upper.approx_eq(&pl_a) {
            violations.push(flag(
                "envelope = (bel, pl)",
                a,
                None,
                format!("[{}, {}]", bel_a.to_literal(), pl_a.to_literal()),
                show(&env),
            ));
        }
    }

    for on in frame.subsets() {
        if !bel.pl(on)?.is_positive() {
            continue;
        }
        let transferred = d_condition(m, on, true)?.mass;
        for a in frame.subsets() {
            report.pairs_checked += 1;
            let g = g_condition(m, a, on)?;
            let d = d_condition_closed_form(m, a, on)?;

            let ratios = tables.iter().filter_map(|t| {
                let pb = &t[on.bits() as usize];
                pb.is_positive().then(|| t[(a & on).bits() as usize].clone() / pb.clone())
            });
            let env = ratios.fold(None, |acc: Option<(T, T)>, r| match acc {
                None => Some((r.clone(), r)),
                Some((lo, hi)) => Some((T::min_of(lo, r.clone()), T::max_of(hi, r))),
            });
            match env {
                None => violations.push(flag(
                    "conditional envelope defined",
                    a,
                    Some(on),
                    show(&g),
                    "undefined".to_string(),
                )),
                Some((lo, hi)) => {
                    if !lo.approx_eq(&g.lower) || !hi.approx_eq(&g.upper) {
                        violations.push(flag(
                            "conditional envelope = G closed form",
                            a,
                            Some(on),
                            show(&g),
                            format!("[{}, {}]", lo.to_literal(), hi.to_literal()),
                        ));
                    }
                }
            }
            if !g.contains(&d) {
                violations.push(flag("D interval within G interval", a, Some(on), show(&g), show(&d)));
            }
            let moved = IntervalResult::new(
                transferred.bel_unchecked(a),
                transferred.pl_unchecked(a),
                ConditioningRule::DempsterNormalized,
            );
            if !moved.same_bounds(&d) {
                violations.push(flag("D closed form = mass transfer", a, Some(on), show(&moved), show(&d)));
            }
        }
    }
    report.violations = violations;
    Ok(report)
}

fn report_violation(
    frame: &Frame,
    check: &'static str,
    a: SubsetMask,
    b: Option<SubsetMask>,
    expected: String,
    found: String,
) -> Violation {
    Violation {
        check,
        query: frame.render(a),
        given: b.map(|b| frame.render(b)),
        expected,
        found,
    }
}
