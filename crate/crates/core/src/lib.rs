//! Computational toolkit for 2-step nilpotent Lie algebras presented by
//! tuples of skew-symmetric matrices.
//!
//! A point `C = (C_1, ..., C_p)` in `so(q)^p` with linearly independent
//! entries determines a 2-step nilpotent algebra `n = v + z` of type
//! `(p,q)`. This crate computes, for such points:
//!
//! * the derivation algebra `Der(n)` with its block splitting and the
//!   minimality verdict `Der = R(D) + Der_{v->z}` ([`derivations`]);
//! * stabilizers of the `gl(q)+gl(p)` and `sl(q)+sl(p)` actions, their
//!   correspondence with block-diagonal derivations, and the closed-orbit
//!   stabilizer identity ([`stabilizers`]);
//! * Ricci endomorphisms (general metric and 2-step block form) and
//!   least-squares nilsoliton certificates `Ric = cI + D` ([`geometry`]);
//! * a norm-minimizing moment-map flow over the `SL(q) x SL(p)` orbit that
//!   certifies closed orbits and produces the minimizing group element
//!   ([`flow`]).
//!
//! Everything algebraic is generic over the scalar type ([`Scalar`]): `f64`
//! (or `f32`) for tolerance-based numerics and [`Rational`] for exact
//! verdicts; the numerical-only paths require [`Real`]. The two modes share
//! one code path per operation, with mode-specific nullspace engines behind
//! the scalar trait.

pub mod algebra;
pub mod derivations;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod io;
pub mod kernel;
pub mod mat;
pub mod scalar;
pub mod stabilizers;
pub mod tuple;

pub use error::{Error, Result};
pub use scalar::{ArithmeticMode, Rational, Real, Scalar};

/// Concrete aliases for the two arithmetic modes used throughout the CLI
/// and the test suites.
pub type TupleF64 = tuple::SkewTuple<f64>;
pub type TupleF32 = tuple::SkewTuple<f32>;
pub type TupleExact = tuple::SkewTuple<Rational>;
pub type AlgebraF64 = algebra::TwoStepAlgebra<f64>;
pub type AlgebraExact = algebra::TwoStepAlgebra<Rational>;
pub type MatF64 = mat::Mat<f64>;
pub type MatExact = mat::Mat<Rational>;
