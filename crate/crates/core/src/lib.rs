//! Derivatives taken against parametric "derivator" families instead of
//! the tangent line, instantaneous-frequency recovery from chirps and wave
//! functions, and a short-time Fourier baseline to compare against.
//!
//! The classical derivative is the slope of the line fitted through two
//! coalescing points of `f`. Here the line can be swapped for any family
//! `h(x; p)` (polynomials, exponentials, sinusoids, linear chirps, Fourier
//! kernels), and every parameter of the fitted family has its own
//! instantaneous function `p(x)`. Evaluating the family with all of them
//! gives `f` back exactly.
//!
//! ```
//! use gencalc::{derivative_trace, Family, GeneralizedDerivativeRequest, LimitPolicy};
//! use gencalc::expr::Expr;
//!
//! let f = Expr::parse_str("x^2+2*x+3").unwrap();
//! let req = GeneralizedDerivativeRequest::named(&f, Family::LINEAR, "a0", LimitPolicy::default()).unwrap();
//! let trace = derivative_trace(&req, &[0.0, 1.0, 2.0]).unwrap();
//! assert!((trace.values()[2].re - (-1.0)).abs() < 1e-8);
//! ```

pub mod baseline;
pub mod derivand;
pub mod derivators;
pub mod expr;
pub mod gcalc;
pub mod instafreq;
pub mod numerics;
pub mod par;
pub mod sigio;

pub use derivand::{real, Derivand, DerivandError};
pub use derivators::{family_eval, Family, FamilyError, FamilyId};
pub use gcalc::{
    derivative_trace, derivative_trace_with, generalized_derivative, reconstruct,
    reconstruct_partial, GcalcError, GeneralizedDerivativeRequest, InstParamTrace,
};
pub use numerics::LimitPolicy;
pub use par::Execution;
pub use sigio::SampledSignal;
