//! Belief functions on finite frames.
//!
//! Two rival dynamics live side by side here. The transferable-belief reading
//! revises a mass function by moving each focal mass onto its intersection
//! with the evidence (Dempster's rule of conditioning), optionally
//! renormalizing. The upper/lower-probability reading conditions every
//! distribution compatible with the beliefs and reports the envelope. The
//! [`credal`] module enumerates that set of distributions exactly and serves
//! as an oracle for every closed form.
//!
//! All algorithms are generic over [`Scalar`]. [`Rational`] is the reference
//! instantiation; `f64` and `f32` also work, comparing with a tolerance.

pub mod conditioning;
pub mod credal;
pub mod error;
pub mod frame;
pub mod io;
pub mod mass;
pub mod random;
pub mod scalar;
pub mod scenario;
pub mod source;
pub mod transform;

pub use conditioning::{
    combine_dempster, compare_rules, d_condition, d_condition_closed_form, g_condition, ConditioningRule,
    IntervalResult, Revised,
};
pub use credal::{enumerate_vertices, verify_against_closed_forms, AllocationVertex, CredalVertexSet, VerifyReport};
pub use error::{Error, ErrorKind, Result};
pub use frame::{Frame, SubsetMask, MAX_FRAME_SIZE};
pub use mass::{MassFunction, WorldMode};
pub use scalar::Scalar;
pub use scenario::{CaseLabel, Scenario, WorldId};
pub use source::{g_condition_source, MultivaluedSource};
pub use transform::{mass_from_bel, BeliefTable};

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type ExactMass = MassFunction<Rational>;
pub type ExactBeliefTable = BeliefTable<Rational>;
pub type ExactInterval = IntervalResult<Rational>;
pub type ExactSource = MultivaluedSource<Rational>;
pub type ExactScenario = Scenario<Rational>;
pub type ExactVertexSet = CredalVertexSet<Rational>;

pub type FloatMass = MassFunction<f64>;
pub type FloatInterval = IntervalResult<f64>;
pub type FloatSource = MultivaluedSource<f64>;
pub type FloatScenario = Scenario<f64>;
