//! Partial integrals, sinc-kernel means and their difference.
//!
//! For `h > 0` the mean
//!
//! ```text
//! ∫_ℝ f(t) e^{itx} sin(th)/(th) dt
//! ```
//!
//! is the ratio `ΔL(x; h) / 2h`, where `L(x) = ∫ f(t) e^{itx}/(it) dt` is only
//! a formal expression and is never evaluated here. The mean itself is a
//! Lebesgue integral whenever `∫ |f(t)| min(1, 1/|th|) dt < ∞`, and it is
//! computed as a finite integral over `|t| ≤ T_max` plus a certified bound on
//! the discarded tail.

use num_complex::Complex64;
use serde::Serialize;

use crate::corpus::TestFunction;
use crate::error::{LabError, Result};
use crate::quad::{integrate_finite, OscillationSpec, QuadResult};

/// Below this `|u|` the kernel uses its Taylor series.
const SINC_SERIES_CUTOFF: f64 = 1e-4;

/// Largest truncation radius the search will consider.
const MAX_TRUNCATION: f64 = 1e200;

/// `sin(u)/u` with the removable singularity filled in.
#[inline]
pub fn sinc(u: f64) -> f64 {
    if u.abs() <= SINC_SERIES_CUTOFF {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sin() / u
    }
}

/// Point at which the summability quantities are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalPoint {
    pub x: f64,
    pub h: f64,
    #[serde(rename = "T")]
    pub t: f64,
}

impl EvalPoint {
    pub fn new(x: f64, h: f64, t: f64) -> Result<Self> {
        check_finite("x", x)?;
        check_positive("h", h)?;
        check_positive("T", t)?;
        Ok(EvalPoint { x, h, t })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanResult {
    pub value: Complex64,
    #[serde(rename = "truncation_T")]
    pub truncation_t: f64,
    pub tail_bound: f64,
    pub quad: QuadResult,
}

impl MeanResult {
    /// Quadrature estimate plus the certified tail bound.
    pub fn error_budget(&self) -> f64 {
        self.quad.abs_error_estimate + self.tail_bound
    }
}

/// `D(x, h)`: the mean minus `I_{1/h}(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Difference {
    pub value: Complex64,
    pub budget: f64,
    pub mean: MeanResult,
    pub partial: QuadResult,
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(LabError::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(LabError::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

/// `I_T(x) = ∫_{|t|<T} f(t) e^{itx} dt`.
pub fn partial_integral(f: &TestFunction, x: f64, t: f64, tol: f64) -> Result<QuadResult> {
    check_finite("x", x)?;
    check_positive("T", t)?;
    check_positive("tol", tol)?;
    let reach = f.support_radius.map_or(t, |a| a.min(t));
    if reach <= 0.0 {
        return Ok(QuadResult::zero());
    }
    let osc = OscillationSpec::new(vec![x.abs()], f.breakpoints());
    integrate_finite(
        |u| f.eval(u) * Complex64::new(0.0, u * x).exp(),
        -reach,
        reach,
        &osc,
        tol,
    )
}

/// Smallest (up to bisection resolution) `T ≥ floor` with `bound(T) ≤ eps`,
/// for a nonincreasing `bound`.
fn search_truncation(floor: f64, eps: f64, bound: impl Fn(f64) -> f64) -> Option<(f64, f64)> {
    let floor = floor.max(1e-300);
    let passes = |t: f64| bound(t) <= eps;

    let mut hi = floor.max(1.0);
    while !passes(hi) {
        hi *= 2.0;
        if hi > MAX_TRUNCATION {
            return None;
        }
    }
    // walk down until the bound fails or the floor is reached
    let mut lo = hi;
    loop {
        let next = (lo / 2.0).max(floor);
        if next == lo {
            return Some((lo, bound(lo)));
        }
        lo = next;
        if passes(lo) {
            hi = lo;
        } else {
            break;
        }
    }
    for _ in 0..64 {
        let mid = (lo * hi).sqrt();
        if !(mid > lo && mid < hi) {
            break;
        }
        if passes(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some((hi, bound(hi)))
}

fn tail_inputs(f: &TestFunction, eps_tail: f64) -> Result<(f64, &crate::corpus::Envelope)> {
    let unachievable = || LabError::TruncationUnachievable {
        name: f.name.clone(),
        eps_tail,
    };
    let env = f.envelope.as_ref().ok_or_else(unachievable)?;
    if env.tail.is_none() {
        return Err(unachievable());
    }
    Ok((env.from, env))
}

/// `T_max` with `∫_{|t|>T_max} |f(t) sinc(th)| dt ≤ eps_tail`, certified by
/// compact support or by `|sinc(th)| ≤ 1/|th|` and the envelope tail, i.e.
/// the discarded tail is at most `Q(T)/(T h)`.
pub fn choose_truncation(f: &TestFunction, h: f64, eps_tail: f64) -> Result<f64> {
    check_positive("h", h)?;
    check_positive("eps_tail", eps_tail)?;
    if let Some(a) = f.support_radius {
        return Ok(a);
    }
    let (from, env) = tail_inputs(f, eps_tail)?;
    let tail = env.tail.as_ref().expect("checked");
    search_truncation(from, eps_tail, |t| 2.0 * tail.eval(t) / h)
        .map(|(t, _)| t)
        .ok_or_else(|| LabError::TruncationUnachievable {
            name: f.name.clone(),
            eps_tail,
        })
}

/// Truncation radius and tail bound used by [`lebesgue_mean`].
///
/// Starts from the absolute bound of [`choose_truncation`]. When `f` is real,
/// even and nonincreasing on the envelope range, the tail equals
/// `(1/h) ∫_T^∞ (f(t)/t) [sin(t(x+h)) − sin(t(x−h))] dt`, and each term with
/// frequency `ω ≠ 0` is at most `2 f(T)/(T ω)` by the second mean value
/// theorem; the smaller of the two certificates is taken term by term.
pub fn truncation_for(f: &TestFunction, x: f64, h: f64, eps_tail: f64) -> Result<(f64, f64)> {
    check_finite("x", x)?;
    check_positive("h", h)?;
    check_positive("eps_tail", eps_tail)?;
    if let Some(a) = f.support_radius {
        return Ok((a, 0.0));
    }
    let (from, env) = tail_inputs(f, eps_tail)?;
    let tail = env.tail.as_ref().expect("checked");
    let oscillatory = env.monotone_even && f.real_even;
    let term = |t: f64, omega: f64| -> f64 {
        let absolute = tail.eval(t);
        if omega == 0.0 {
            0.0
        } else if oscillatory {
            (2.0 * env.bound(t) / (t * omega)).min(absolute)
        } else {
            absolute
        }
    };
    let bound = |t: f64| -> f64 {
        if oscillatory {
            (term(t, (x + h).abs()) + term(t, (x - h).abs())) / h
        } else {
            2.0 * tail.eval(t) / h
        }
    };
    search_truncation(from, eps_tail, bound).ok_or_else(|| LabError::TruncationUnachievable {
        name: f.name.clone(),
        eps_tail,
    })
}

/// `∫_{|t|<T_max} f(t) e^{itx} sinc(th) dt` without any tail correction.
pub fn lebesgue_mean_truncated(
    f: &TestFunction,
    x: f64,
    h: f64,
    t_max: f64,
    tol: f64,
) -> Result<QuadResult> {
    check_finite("x", x)?;
    check_positive("h", h)?;
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(LabError::InvalidParameter {
            name: "T_max",
            value: t_max,
            reason: "must be non-negative and finite",
        });
    }
    check_positive("tol", tol)?;
    let reach = f.support_radius.map_or(t_max, |a| a.min(t_max));
    if reach <= 0.0 {
        return Ok(QuadResult::zero());
    }
    let osc = OscillationSpec::new(
        vec![x.abs(), h, (x + h).abs(), (x - h).abs()],
        f.breakpoints(),
    );
    integrate_finite(
        |u| f.eval(u) * Complex64::new(0.0, u * x).exp() * sinc(u * h),
        -reach,
        reach,
        &osc,
        tol,
    )
}

/// The sinc-kernel mean with quadrature tolerance `tol` and certified tail
/// bound at most `eps_tail`.
pub fn lebesgue_mean(
    f: &TestFunction,
    x: f64,
    h: f64,
    eps_tail: f64,
    tol: f64,
) -> Result<MeanResult> {
    let (truncation_t, tail_bound) = truncation_for(f, x, h, eps_tail)?;
    let quad = lebesgue_mean_truncated(f, x, h, truncation_t, tol)?;
    Ok(MeanResult {
        value: quad.value,
        truncation_t,
        tail_bound,
        quad,
    })
}

/// `D(x, h)`: mean minus the partial integral at `T = 1/h`.
pub fn mean_minus_partial(
    f: &TestFunction,
    x: f64,
    h: f64,
    eps_tail: f64,
    tol: f64,
) -> Result<Difference> {
    let mean = lebesgue_mean(f, x, h, eps_tail, tol)?;
    let partial = partial_integral(f, x, 1.0 / h, tol)?;
    Ok(Difference {
        value: mean.value - partial.value,
        budget: mean.error_budget() + partial.abs_error_estimate,
        mean,
        partial,
    })
}
