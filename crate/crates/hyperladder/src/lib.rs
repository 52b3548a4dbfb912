//! Hypergeometric-type operators `sigma(s) y'' + tau(s) y' + lambda y = 0`,
//! their shape-invariant factorizations, and the coherent-state systems they
//! generate.
//!
//! The crate is organized around the six canonical coefficient forms
//! (`sigma = 1, s, 1-s^2, s^2-1, s^2, s^2+1`):
//!
//! - [`cases`] — the canonical case registry: eigenvalues, weights, validity
//!   bounds, and the admissible-parameter set for the deformed families.
//! - [`hypfun`] — polynomial eigenfunctions, associated special functions
//!   `kappa^m d^m Phi_l / ds^m`, ladder operators and norm chains.
//! - [`tilde`] — the delta-deformed operator families, their ground functions
//!   and ladder-built eigenfunctions.
//! - [`coherent`] — Gazeau-Klauder coherent states for the plain and deformed
//!   families, with numerically verified resolution-of-identity measures.
//! - [`schrodinger`] — change of variable to Schrodinger form, superpotentials
//!   and partner potentials.
//! - [`specmath`] — scalar special functions (complex log-gamma, Bessel J/K,
//!   generalized hypergeometric series, a Mellin-Barnes Meijer-G evaluator).
//! - [`quadrature`] — double-exponential and oscillatory integration for the
//!   weighted inner products and half-line measures.
//! - [`verify`] — the theorem-level verification suites behind `hyperladder
//!   verify`, and [`cli`] — the command-line surface.
//!
//! Every operator identity shipped here is backed by an executable check; see
//! the `examples/` directory for one runnable program per capability and the
//! `acceptance` integration test for the full suite.

pub mod cases;
pub mod jet;
pub mod poly;
pub mod quadrature;
pub mod specmath;

pub mod hypfun;
pub mod tilde;
pub mod coherent;
pub mod schrodinger;

pub use cases::{CanonicalCase, MSet, SigmaTag};
pub use hypfun::HypFunction;
pub use tilde::{DeformedFunction, DeformedParams};
pub use coherent::{CoherentFamily, CoherentState, MeasureSpec};
pub use schrodinger::{SchrodingerFamily, VariableMap};
