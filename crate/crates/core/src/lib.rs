//! Numerical laboratory for Lebesgue summability of trigonometric integrals
//! `∫ f(t) e^{itx} dt` with locally integrable `f`.
//!
//! * [`corpus`]: built-in test integrands and their analytic metadata.
//! * [`quad`]: adaptive Gauss–Kronrod quadrature with oscillation-aware
//!   panelling and envelope-controlled tails.
//! * [`functionals`]: the growth functional `M(T)` and tail functional `Q(T)`,
//!   condition classification and the tail-inequality checks.
//! * [`summability`]: partial integrals `I_T(x)`, sinc-kernel means and their
//!   difference `D(x, h)`.
//! * [`harness`]: uniform sweeps and pointwise convergence checks.
//! * [`report`]: CSV/JSON rendering with lossless 17-digit numbers.

pub mod corpus;
pub mod error;
pub mod functionals;
pub mod grid;
pub mod harness;
pub mod quad;
pub mod report;
pub mod sum;
pub mod summability;

pub use corpus::{ConditionClass, TestFunction};
pub use error::{LabError, Result};
pub use quad::{OscillationSpec, QuadResult};
