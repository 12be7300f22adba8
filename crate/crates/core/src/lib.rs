//! Variance-based uncertainty bounds.
//!
//! The crate evaluates lower bounds on products and sums of standard
//! deviations of incompatible observables: the classic Robertson and
//! Schrödinger product forms, the sum-of-variance relations built on an
//! auxiliary state orthogonal to the measured state, and the one- and
//! two-auxiliary-state product/sum forms that stay informative when the two
//! deviation vectors are orthogonal.
//!
//! Modules:
//!
//! - [`hilbert`]: states, observables, deviation vectors, case classification.
//! - [`bounds`]: one evaluator per inequality, each returning a [`BoundReport`].
//! - [`auxopt`]: auxiliary states expanded in an orthonormal basis seeded
//!   with `Psi` and the normalized deviations, and their closed-form optimum.
//! - [`spin`]: angular-momentum matrices, the qutrit/qubit experiment states,
//!   angle sweeps and the three-level comparison scenario.
//! - [`oscillator`]: function-space counterparts on a quadrature grid.
//! - [`problem`]: the JSON problem-file schema consumed by the CLI.

pub mod auxopt;
pub mod bounds;
pub mod error;
pub mod hilbert;
pub mod oscillator;
pub mod problem;
pub mod quadrature;
pub mod spin;

pub use bounds::{Aux, BoundReport, RelationId};
pub use error::{Error, Result};
pub use hilbert::{CaseTag, DeviationVector, Observable, QuantumState, UncertaintyCase};

/// Numerical tolerances shared across the crate.
pub mod tol {
    /// `|1 - ||psi|||` accepted for a normalized state.
    pub const NORM: f64 = 1e-10;
    /// Max entry of `M - M^dagger` for an observable.
    pub const HERMITICITY: f64 = 1e-12;
    /// Absolute norm below which a deviation vector counts as zero.
    pub const ZERO_DEVIATION: f64 = 1e-12;
    /// Overlap below which two deviation vectors count as orthogonal.
    pub const ORTHOGONALITY: f64 = 1e-10;
    /// Relative residual `||Psi_B - mu Psi_A|| / ||Psi_B||` for linear dependence.
    pub const DEPENDENCE_RESIDUAL: f64 = 1e-8;
    /// Gram-matrix error accepted for seed states.
    pub const SEED_ORTHONORMALITY: f64 = 1e-8;
    /// `|<Psi|aux>|` accepted for an auxiliary state that must be orthogonal to `Psi`.
    pub const AUX_ORTHOGONALITY: f64 = 1e-8;
    /// `|<Psi_A|Psi_B>|` accepted by the strengthened (orthogonal-deviation) forms.
    pub const CASE3_PRECONDITION: f64 = 1e-8;
    /// Slack in `rhs <= lhs`.
    pub const VALIDITY: f64 = 1e-10;
    /// `|lhs - rhs|` below which a bound is reported as saturated.
    pub const SATURATION: f64 = 1e-8;
}
