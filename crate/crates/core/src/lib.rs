//! Numerical laboratory for weighted composition semigroups
//! `C(t)f = m_t · (f ∘ φ_t)` on Hardy, Bergman, Dirichlet, Bloch-type and
//! weighted sup-norm spaces.
//!
//! The crate is layered bottom-up:
//!
//! * [`holo`]: function evaluators, Cauchy differentiation and quadrature on
//!   circles and discs.
//! * [`spaces`]: norms, compact-open seminorms and mixed-topology probes.
//! * [`flows`]: closed-form and ODE-reconstructed semiflows.
//! * [`cocycles`]: integral, coboundary and derivative semicocycles.
//! * [`semigroup`]: the weighted composition operators, norm bounds,
//!   generator and continuity diagnostics.
//! * [`cli`]: configuration, suites and reports behind the `wcsg` binary.

pub mod cli;
pub mod cocycles;
mod error;
pub mod flows;
pub mod holo;
pub mod semigroup;
pub mod spaces;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex64;

/// Version tag of the built-in test-function corpus; bump whenever the
/// default corpus or default grids change.
pub const CORPUS_VERSION: &str = "corpus-v1";
