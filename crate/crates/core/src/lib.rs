//! A verification laboratory for a family of sharp counterexamples to
//! Sobolev-scale regularity of degenerate diffusion.
//!
//! The central object is an explicit piecewise-power "bump train" on the
//! half line: an accumulating sequence of plateaus joined by power ramps,
//! tuned by a smoothness exponent `sigma` and an accumulation exponent
//! `theta`. The train has closed-form Lebesgue norms, a closed-form
//! derivative norm with an exact divergence boundary, and a smoothness
//! modulus that follows a predictable power law. Folding the train into a
//! compactly supported window and lifting it radially produces a function
//! whose gradient field solves a degenerate equation with prescribed,
//! sharp integrability — the laboratory measures all of it numerically
//! and checks the measurements against the formulas.
//!
//! Module map:
//! - [`bump`]: the train itself — breakpoints, pointwise evaluation,
//!   derivative, block masses.
//! - [`window`]: the compactly supported antisymmetric fold and its
//!   antiderivative.
//! - [`norms`]: closed-form Lebesgue norms of the train and its slope.
//! - [`zeta`]: tail sums `sum n^-s` with certified error bounds.
//! - [`modulus`]: piecewise-exact integration of shifted differences and
//!   the supremum modulus.
//! - [`fit`]: log-log regression and the predicted modulus exponent.
//! - [`reference`]: an independent adaptive-quadrature oracle for the
//!   norm formulas.
//! - [`radial`]: the radial lift, its flux field, weak and strong forms,
//!   and quadrature grids.
//! - [`probe`]: smooth compactly supported test functions.
//! - [`quad`]: Gauss-Legendre rules and adaptive Simpson.
//! - [`experiment`]: configuration, parameter selection, classification
//!   tables, and the staged verification driver.
//! - [`render`]: number formatting and extended-real (de)serialization.
//! - [`error`]: the crate-wide error type.

pub mod bump;
pub mod error;
pub mod experiment;
pub mod fit;
pub mod modulus;
pub mod norms;
pub mod probe;
pub mod quad;
pub mod radial;
pub mod reference;
pub mod render;
pub mod window;
pub mod zeta;

pub use bump::BumpParams;
pub use error::{Error, Result};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentReport, MainTheoremConfig};
pub use radial::RadialFieldSpec;
