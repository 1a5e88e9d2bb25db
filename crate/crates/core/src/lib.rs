//! Exact intersection theory on chains of point blowups of a regular
//! surface germ, the rounded divisor family `D(l)_m = ceil(m F(l))`, value
//! sequences of the associated graded filtration, and the Gauss extension
//! of a discrete valuation.
//!
//! The core types are generic over an exact integer scalar (see
//! [`scalar::ExactInt`]). The aliases below fix the two scalars used in
//! practice: `i64` for bounded sweeps and [`BigInt`] for everything else.

pub mod blowup;
pub mod certificate;
pub mod divisor;
pub mod error;
pub mod filtration;
pub mod gauss;
pub mod io;
pub mod report;
pub mod scalar;
pub mod sweep;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use blowup::{BlowupChain, Parent, PullbackMap};
pub use certificate::{distinct_components_certificate, Certificate, DistinguishingWitness};
pub use divisor::{classify_residue, closed_form_intersection, CaseAnalysis, ResidueCase};
pub use error::{Error, Result};
pub use filtration::{
    center_criterion, coefficient_cross_check, composite_value_sequence, gamma,
    paper_value_sequence, Attainment, CenterStatus, GammaReport, LexPair, LexRatio, ValueSequence,
};
pub use gauss::{
    associated_graded_dimensions, extended_ideal_value, gauss_multiplicativity_check, Order,
};
pub use scalar::ExactInt;
pub use sweep::{run_sweep, SweepConfig, SweepReport};

/// Intersection form with unbounded entries.
pub type IntersectionForm = blowup::IntersectionForm<BigInt>;
/// Rational divisor with unbounded numerators and denominators.
pub type QDivisor = divisor::QDivisor<BigInt>;
pub type IntegralDivisor = divisor::IntegralDivisor<BigInt>;

pub type FastIntersectionForm = blowup::IntersectionForm<i64>;
pub type FastQDivisor = divisor::QDivisor<i64>;
pub type FastIntegralDivisor = divisor::IntegralDivisor<i64>;

/// Element of `Q(t)`-style Laurent polynomials used as the valued base field.
pub type ValuedScalar = gauss::Laurent<BigRational>;
pub type GaussPolynomial = gauss::GaussPolynomial<BigRational>;
