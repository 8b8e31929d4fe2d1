//! Numerical laboratory for the `N(p,q,s)` holomorphic function spaces on the
//! unit ball of ℂⁿ.
//!
//! The crate has three layers:
//!
//! * exact geometry of the ball — inner products, the involutive automorphisms
//!   `Φ_a`, the Bergman pseudometric, and the closed-form identities and
//!   inequalities they satisfy ([`ball`], [`battery`]);
//! * holomorphic test functions as immutable ASTs with symbolic
//!   differentiation and a small textual language ([`expr`], [`parser`]);
//! * seeded Monte Carlo integration against `dV`, `dV_α` and the invariant
//!   measure `dλ`, desingularized double-integral estimators, supremum search
//!   over the Möbius parameter, and the eight space functionals built on top
//!   ([`sampler`], [`estimate`], [`supsearch`], [`space`], [`functionals`]).
//!
//! The core is `no_std` (with `alloc`); IO, CLI and file formats live in the
//! companion `npqs-cli` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod ball;
pub mod battery;
pub mod estimate;
pub mod expr;
pub mod functionals;
pub mod parser;
pub mod sampler;
pub mod space;
pub mod supsearch;

pub use num_complex::Complex64;

pub use ball::{BallPoint, GeometryError, MobiusMap};
pub use estimate::{IntegralEstimate, PairMode};
pub use expr::{EvalError, GradExpr, HoloExpr};
pub use functionals::{EvalConfig, FunctionalError, FunctionalKind, SupOutcome};
pub use parser::{ParseError, ParseErrorKind, SourceSpan};
pub use sampler::{RadialMode, SampleStream, SamplerConfig};
pub use space::{ParamError, SpaceParams};
pub use supsearch::{SupConfig, SupResult};
