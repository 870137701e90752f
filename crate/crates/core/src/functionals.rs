//! Growth and tail functionals of an integrand.
//!
//! * `M(T) = (1/T) ∫_{|t|<T} |t f(t)| dt`: vanishing, bounded or divergent
//!   behaviour of `M` is the hypothesis of the two convergence theorems.
//! * `Q(T) = T ∫_{|t|>T} |f(t)/t| dt`: the tail quantity controlled by `M`.
//!
//! Limits cannot be decided from finite data. Classification therefore uses a
//! fixed decade-ratio rule on a grid spanning at least three decades; the
//! thresholds are constants so that verdicts are reproducible.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{ConditionClass, TestFunction};
use crate::error::{LabError, Result};
use crate::quad::{integrate_finite, integrate_tail, OscillationSpec, TailWeight};

/// Default lower threshold `T₁` of the bounded-growth condition.
pub const DEFAULT_T1: f64 = 1.0;

/// Last value below this fraction of the reference value counts as decay.
pub const VANISHING_RATIO: f64 = 0.5;
/// Last value above this multiple of the value one decade earlier counts as growth.
pub const DIVERGENT_RATIO: f64 = 2.0;
/// Decades separating the last grid value from the decay reference value.
pub const VANISHING_SPAN_DECADES: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaVerdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub fn_name: String,
    pub t_grid: Vec<f64>,
    pub m_values: Vec<f64>,
    pub classification: ConditionClass,
    /// Grid supremum of `M` over `T > T1`.
    pub b_hat: f64,
    pub t1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub fn_name: String,
    pub t_grid: Vec<f64>,
    pub m_values: Vec<f64>,
    /// `None` where `Q(T)` is not finite or has no usable tail bound.
    pub q_values: Vec<Option<f64>>,
    pub classification: ConditionClass,
    pub b_hat: f64,
    pub t1: f64,
    pub lemma2_verdict: LemmaVerdict,
    pub lemma3_verdict: LemmaVerdict,
    /// `max Q(T) / (4 B_hat)` over grid points `T > T1`, when applicable.
    pub bound_ratio: Option<f64>,
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

/// `M(T)` to absolute accuracy `tol`.
pub fn weighted_mass(f: &TestFunction, t: f64, tol: f64) -> Result<f64> {
    check_positive("T", t)?;
    check_positive("tol", tol)?;
    let reach = f.support_radius.map_or(t, |a| a.min(t));
    if reach <= 0.0 {
        return Ok(0.0);
    }
    let osc = OscillationSpec::new(vec![], f.breakpoints());
    let r = integrate_finite(
        |u| Complex64::new((u * f.eval(u)).norm(), 0.0),
        -reach,
        reach,
        &osc,
        tol * t,
    )?;
    Ok(r.value.re.max(0.0) / t)
}

/// `Q(T) = T · ∫_{|t|>T} |f(t)/t| dt` to absolute accuracy `tol`.
pub fn tail_functional(f: &TestFunction, t: f64, tol: f64) -> Result<f64> {
    check_positive("T", t)?;
    check_positive("tol", tol)?;
    let r = integrate_tail(f, t, TailWeight::AbsOverT, tol / t)?;
    Ok((t * r.value.re).max(0.0))
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(LabError::GridTooSmall {
            reason: format!("{} points; need at least 2", grid.len()),
        });
    }
    if !grid.iter().all(|&t| t > 0.0 && t.is_finite()) {
        return Err(LabError::GridTooSmall {
            reason: "grid points must be positive and finite".into(),
        });
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(LabError::GridTooSmall {
            reason: "grid must be strictly increasing".into(),
        });
    }
    let decades = (grid[grid.len() - 1] / grid[0]).log10();
    if decades < f64::from(VANISHING_SPAN_DECADES) - 1e-9 {
        return Err(LabError::GridTooSmall {
            reason: format!("grid spans {decades:.3} decades; need {VANISHING_SPAN_DECADES}"),
        });
    }
    Ok(())
}

/// Index of the last grid point not exceeding `T_last / 10^decades`.
fn reference_index(grid: &[f64], decades: i32) -> usize {
    let target = grid[grid.len() - 1] / 10f64.powi(decades) * (1.0 + 1e-12);
    grid.iter().rposition(|&t| t <= target).unwrap_or(0)
}

/// Nonincreasing over the top decade (up to `slack`) and the last value is
/// below half the value three decades earlier, or already at noise level.
fn decays(grid: &[f64], values: &[f64], slack: f64) -> bool {
    let top = reference_index(grid, 1);
    let span = reference_index(grid, VANISHING_SPAN_DECADES);
    let last = values[values.len() - 1];
    let monotone = values[top..].windows(2).all(|w| w[1] <= w[0] + slack);
    monotone && (last < VANISHING_RATIO * values[span] || last <= slack)
}

fn classify(grid: &[f64], m: &[f64], tol: f64) -> ConditionClass {
    let top = reference_index(grid, 1);
    let last = m[m.len() - 1];
    if last > DIVERGENT_RATIO * m[top] && last > tol {
        ConditionClass::DivergentM
    } else if decays(grid, m, tol) {
        ConditionClass::VanishingM
    } else {
        ConditionClass::BoundedM
    }
}

fn sup_beyond(grid: &[f64], values: &[f64], t1: f64) -> Result<f64> {
    let mut beyond = grid
        .iter()
        .zip(values)
        .filter(|(&t, _)| t > t1)
        .map(|(_, &v)| v)
        .peekable();
    if beyond.peek().is_none() {
        return Err(LabError::GridTooSmall {
            reason: format!("no grid point exceeds T1 = {t1}"),
        });
    }
    Ok(beyond.fold(0.0, f64::max))
}

/// Sample `M` on the grid and classify its growth.
pub fn classify_conditions(
    f: &TestFunction,
    grid: &[f64],
    t1: f64,
    tol: f64,
) -> Result<ConditionReport> {
    validate_grid(grid)?;
    check_positive("T1", t1)?;
    let m_values = grid
        .par_iter()
        .map(|&t| weighted_mass(f, t, tol))
        .collect::<Result<Vec<_>>>()?;
    let classification = classify(grid, &m_values, tol);
    let b_hat = sup_beyond(grid, &m_values, t1)?;
    Ok(ConditionReport {
        fn_name: f.name.clone(),
        t_grid: grid.to_vec(),
        m_values,
        classification,
        b_hat,
        t1,
    })
}

/// Sample `Q` on the grid; entries are `None` when the tail has no usable
/// envelope.
pub fn tail_values(f: &TestFunction, grid: &[f64], tol: f64) -> Result<Vec<Option<f64>>> {
    grid.par_iter()
        .map(|&t| match tail_functional(f, t, tol) {
            Ok(q) => Ok(Some(q)),
            Err(LabError::EnvelopeUnavailable { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}

/// Evaluate both tail inequalities on the grid.
///
/// The decay check (`Q → 0`) applies to vanishing-M functions; the bound
/// check (`Q(T) ≤ 4 B` for `T > T1`) applies to every function that is not
/// divergent-M.
pub fn verify_lemmas(f: &TestFunction, grid: &[f64], t1: f64, tol: f64) -> Result<LemmaReport> {
    let conditions = classify_conditions(f, grid, t1, tol)?;
    let q_values = tail_values(f, grid, tol)?;
    let class = conditions.classification;

    let complete: Option<Vec<f64>> = q_values.iter().copied().collect();

    let lemma2_verdict = match (class, &complete) {
        (ConditionClass::VanishingM, Some(q)) if decays(grid, q, tol) => LemmaVerdict::Pass,
        (ConditionClass::VanishingM, _) => LemmaVerdict::Fail,
        _ => LemmaVerdict::NotApplicable,
    };

    let b_hat = conditions.b_hat;
    let (lemma3_verdict, bound_ratio) = match class {
        ConditionClass::DivergentM => (LemmaVerdict::NotApplicable, None),
        _ => match &complete {
            None => (LemmaVerdict::Fail, None),
            Some(q) => {
                let beyond: Vec<f64> = grid
                    .iter()
                    .zip(q)
                    .filter(|(&t, _)| t > t1)
                    .map(|(_, &v)| v)
                    .collect();
                let q_max = beyond.iter().copied().fold(0.0, f64::max);
                let holds = beyond.iter().all(|&v| v <= 4.0 * b_hat + tol);
                let ratio = if b_hat > 0.0 {
                    q_max / (4.0 * b_hat)
                } else if q_max == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                };
                let verdict = if holds {
                    LemmaVerdict::Pass
                } else {
                    LemmaVerdict::Fail
                };
                (verdict, Some(ratio))
            }
        },
    };

    Ok(LemmaReport {
        fn_name: f.name.clone(),
        t_grid: grid.to_vec(),
        m_values: conditions.m_values,
        q_values,
        classification: class,
        b_hat,
        t1,
        lemma2_verdict,
        lemma3_verdict,
        bound_ratio,
    })
}

/// Decay check with the default `T1`.
pub fn verify_lemma2(f: &TestFunction, grid: &[f64], tol: f64) -> Result<LemmaReport> {
    verify_lemmas(f, grid, DEFAULT_T1, tol)
}

/// Bound check `Q(T) ≤ 4 B_hat` for grid points `T > T1`.
pub fn verify_lemma3(f: &TestFunction, t1: f64, grid: &[f64], tol: f64) -> Result<LemmaReport> {
    verify_lemmas(f, grid, t1, tol)
}
