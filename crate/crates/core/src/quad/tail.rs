//! Weighted tail integrals `∫_{|t|>T} w(t) dt` over the unbounded region.
//!
//! The numerical part on `T ≤ |t| ≤ T_env` is computed after the substitution
//! `s = 1/t`; beyond `T_env` the envelope's closed-form tail either supplies
//! the exact remainder or a rigorous bound that is folded into the error
//! estimate.

use num_complex::Complex64;

use super::{integrate_finite, OscillationSpec, QuadResult};
use crate::corpus::TestFunction;
use crate::error::{LabError, Result};

/// Smallest envelope cut-off `T_env`; the default is `max(this, 10 T)`.
pub const DEFAULT_ENVELOPE_START: f64 = 1e4;

/// Largest envelope cut-off tried before giving up on shrinking the remainder.
const MAX_ENVELOPE_CUTOFF: f64 = 1e250;

/// Weight applied inside the tail integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailWeight {
    /// `|f(t)/t|`
    AbsOverT,
}

/// `∫_{|t|>T} |f(t)/t| dt`.
pub fn integrate_tail(
    f: &TestFunction,
    t: f64,
    weight: TailWeight,
    tol: f64,
) -> Result<QuadResult> {
    let TailWeight::AbsOverT = weight;
    if !(t > 0.0 && t.is_finite()) {
        return Err(LabError::InvalidParameter {
            name: "T",
            value: t,
            reason: "must be positive and finite",
        });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(LabError::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "must be positive and finite",
        });
    }

    let both_sides = |u: f64| (f.eval(u).norm() + f.eval(-u).norm()) / u;

    if let Some(radius) = f.support_radius {
        if t >= radius {
            return Ok(QuadResult::zero());
        }
        let jumps: Vec<f64> = f.jump_points.iter().map(|j| j.abs()).collect();
        let osc = OscillationSpec::new(vec![], jumps);
        return integrate_finite(|u| Complex64::new(both_sides(u), 0.0), t, radius, &osc, tol);
    }

    let unavailable = || LabError::EnvelopeUnavailable {
        name: f.name.clone(),
    };
    let envelope = f.envelope.as_ref().ok_or_else(unavailable)?;
    let tail = envelope.tail.as_ref().ok_or_else(unavailable)?;

    // Push the cut-off out until the remainder fits in half the budget.
    let mut cutoff = DEFAULT_ENVELOPE_START.max(10.0 * t).max(envelope.from);
    let remainder = |c: f64| 2.0 * tail.eval(c);
    while !tail.exact && remainder(cutoff) > 0.5 * tol && cutoff < MAX_ENVELOPE_CUTOFF {
        cutoff *= 10.0;
    }
    let rem = remainder(cutoff);
    if !rem.is_finite() {
        return Err(unavailable());
    }

    // s = 1/t: ∫_T^{T_env} g(t) dt = ∫_{1/T_env}^{1/T} g(1/s) / s² ds and
    // g(t) = w(t)/t, so the integrand becomes (|f(1/s)| + |f(-1/s)|) / s.
    let jumps: Vec<f64> = f
        .jump_points
        .iter()
        .filter(|j| j.abs() > t && j.abs() < cutoff)
        .map(|j| 1.0 / j.abs())
        .collect();
    let osc = OscillationSpec::new(vec![], jumps);
    let numeric = integrate_finite(
        |s| {
            let u = 1.0 / s;
            Complex64::new((f.eval(u).norm() + f.eval(-u).norm()) / s, 0.0)
        },
        1.0 / cutoff,
        1.0 / t,
        &osc,
        0.5 * tol,
    )?;

    let mut result = numeric;
    if tail.exact {
        result.value += Complex64::new(rem, 0.0);
    } else {
        result.abs_error_estimate += rem;
    }
    result.converged = result.abs_error_estimate <= tol;
    Ok(result)
}
