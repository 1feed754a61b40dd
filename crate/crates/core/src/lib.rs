//! Invariant integration on compact groups, and exact character theory for
//! finite ones.
//!
//! The numerical side parametrizes SO(n) and SU(n) by global angle charts with
//! closed-form Haar densities, integrates over them by tensor-product
//! quadrature or Monte Carlo, and uses that to exercise Schur orthogonality,
//! unitarization, invariant generation by averaging, and the Weyl integration
//! formula over a Cartan subgroup. Every closed-form density is cross-checked
//! against a finite-difference metric oracle.
//!
//! The exact side computes full character tables of finite groups from the
//! class-algebra structure constants alone, verifies them in exact cyclotomic
//! arithmetic, and checks them against an independent decomposition of the
//! regular representation, including group-determinant factorization.

pub mod chart;
pub mod chartab;
pub mod cyclo;
pub mod error;
pub mod finite;
pub mod fourier;
pub mod group;
pub mod haar;
pub mod invariants;
pub mod poly;
pub mod quad;
pub mod regrep;
pub mod report;
pub mod reps;
pub mod weyl;

pub use error::{Error, Result};
pub use group::{GroupElement, GroupTag, Tolerance};

/// Complex matrix type used throughout the numerical side.
pub type CMat = nalgebra::DMatrix<num_complex::Complex64>;
/// Complex column vector.
pub type CVec = nalgebra::DVector<num_complex::Complex64>;
pub use num_complex::Complex64;
