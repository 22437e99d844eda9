//! Möbius disjointness experiments for distal flows: sieves, continued
//! fractions, skew products over rotations and Möbius-weighted sums.
//!
//! The floating-point layers are generic over [`scalar::Real`] (`f32` or
//! `f64`); the aliases below fix the scalar to `f64`. Continued fractions,
//! error terms and phases are exact or certified and do not depend on the
//! scalar choice.

pub mod confrac;
pub mod correlation;
pub mod csv;
pub mod flows;
pub mod scalar;
pub mod sieve;
pub mod summation;
pub mod turn;

pub use confrac::{Convergent, PartialQuotients};
pub use correlation::{CorrelationSeries, DecayFit, PhiCoefficient};
pub use flows::{AffineTorusMap, AnalyticFourierSeries, FurstenbergCocycle, SkewProductMap};
pub use scalar::Real;
pub use sieve::{MertensSeries, MobiusTable};
pub use turn::Turn;

pub type Complex64 = num_complex::Complex<f64>;
pub type FurstenbergCocycle64 = FurstenbergCocycle<f64>;
pub type SkewProductMap64 = SkewProductMap<f64>;
pub type AffineTorusMap64 = AffineTorusMap<f64>;
pub type AnalyticFourierSeries64 = AnalyticFourierSeries<f64>;
pub type CorrelationSeries64 = CorrelationSeries<f64>;
