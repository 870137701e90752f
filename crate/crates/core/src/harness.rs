//! Theorem-level experiments.
//!
//! * [`abelian_sweep`] measures `sup_x |D(x, h)|` over a finite window of `x`
//!   for a decreasing sequence of `h`; uniform convergence on ℝ is replaced by
//!   the supremum over the grid.
//! * [`tauberian_check`] follows `I_T(x0)` to estimate its limit and checks
//!   that `D(x0, h)` shrinks along the `h` sequence.
//!
//! Convergence thresholds are fixed engineering constants: a trajectory
//! converges when it is nonincreasing within the per-step error budgets and
//! its final value is below half its first.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{ConditionClass, TestFunction};
use crate::error::{LabError, Result};
use crate::functionals::{classify_conditions, DEFAULT_T1};
use crate::grid::GridSpec;
use crate::summability::{mean_minus_partial, partial_integral};

/// Final supremum must fall below this fraction of the first.
pub const CONVERGENCE_RATIO: f64 = 0.5;
/// Decades the `h` sequence of a sweep must span.
pub const SWEEP_MIN_DECADES: f64 = 3.0;
/// Minimum number of `h` values in a sweep.
pub const SWEEP_MIN_STEPS: usize = 4;
/// Extrapolation stability may exceed the error budget by this factor.
pub const STABILITY_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Converging,
    NotConverging,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Converging => "converging",
            Verdict::NotConverging => "not-converging",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Whether the function's growth class matches the theorem's hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub required: Vec<ConditionClass>,
    pub observed: ConditionClass,
    pub satisfied: bool,
}

impl Hypothesis {
    fn check(f: &TestFunction, required: &[ConditionClass], tol: f64) -> Result<Self> {
        let report = classify_conditions(f, &default_condition_grid(), DEFAULT_T1, tol)?;
        Ok(Hypothesis {
            required: required.to_vec(),
            observed: report.classification,
            satisfied: required.contains(&report.classification),
        })
    }

    fn note(&self) -> Option<String> {
        (!self.satisfied).then(|| {
            format!(
                "hypothesis violation: function is {}, theorem requires {}; no claim is made",
                self.observed,
                self.required
                    .iter()
                    .map(|c| c.as_str())
                    .collect::<Vec<_>>()
                    .join(" or ")
            )
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub fn_name: String,
    pub x_grid: Vec<f64>,
    pub h_seq: Vec<f64>,
    /// `d_matrix[i][j] = D(x_grid[i], h_seq[j])`; `None` where evaluation failed.
    pub d_matrix: Vec<Vec<Option<Complex64>>>,
    pub error_budget_matrix: Vec<Vec<Option<f64>>>,
    /// Per-`h` supremum of `|D|` over the `x` grid.
    pub sup_abs_d: Vec<f64>,
    /// Per-`h` maximum cell budget.
    pub sup_budget: Vec<f64>,
    pub verdict: Verdict,
    pub hypothesis: Hypothesis,
    pub window: (f64, f64),
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub fn_name: String,
    pub x0: f64,
    pub ell_hat: Complex64,
    pub stability: f64,
    pub t_seq: Vec<f64>,
    pub i_values: Vec<Complex64>,
    pub i_errors: Vec<f64>,
    pub h_seq: Vec<f64>,
    pub mean_values: Vec<Complex64>,
    pub d_values: Vec<Complex64>,
    pub d_budgets: Vec<f64>,
    /// `|mean(h) − ell_hat|`
    pub mean_residuals: Vec<f64>,
    /// `|D(x0, h)|`
    pub d_abs: Vec<f64>,
    pub verdict: Verdict,
    pub hypothesis: Hypothesis,
    pub notes: Vec<String>,
}

/// Limit estimate from one stage of pairwise averaging.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrapolation {
    pub ell_hat: Complex64,
    /// Spread of the last three averaged values.
    pub stability: f64,
    pub averaged: Vec<Complex64>,
}

/// `T ∈ [1, 10⁴]`, 40 geometric points.
pub fn default_condition_grid() -> Vec<f64> {
    GridSpec::Geometric {
        start: 1.0,
        end: 1e4,
        n: 40,
    }
    .points()
}

/// `x ∈ [−10, 10]`, 41 points.
pub fn default_x_grid() -> Vec<f64> {
    GridSpec::Linear {
        start: -10.0,
        end: 10.0,
        n: 41,
    }
    .points()
}

/// `h ∈ {1, 10⁻¹, 10⁻², 10⁻³}`.
pub fn default_h_seq() -> Vec<f64> {
    GridSpec::Geometric {
        start: 1.0,
        end: 1e-3,
        n: 4,
    }
    .points()
}

/// Smoothing parameters for a pointwise check at `x0`: four decades
/// starting at the largest power of ten `h` with `1/h ≥ 2π/|x0|`, so every
/// partial integral `I_{1/h}(x0)` spans at least one period of `e^{itx0}`.
/// Coarser `h` sample `D(x0, h)` before its oscillation settles into the
/// `O(h)` envelope. For `x0 = 0` this is [`default_h_seq`].
pub fn default_tauberian_h_grid(x0: f64) -> GridSpec {
    if x0 == 0.0 {
        return GridSpec::Geometric {
            start: 1.0,
            end: 1e-3,
            n: 4,
        };
    }
    let start = 10f64.powf((x0.abs() / (2.0 * PI)).log10().floor().min(0.0));
    GridSpec::Geometric {
        start,
        end: start * 1e-3,
        n: 4,
    }
}

/// Truncations for following `I_T(x0)`.
///
/// For `x0 ≠ 0` the points are half a period of `e^{itx0}` apart, so the
/// leading oscillation of `I_T` alternates in sign and pairwise averaging
/// cancels it. For `x0 = 0` the points are geometric on `[10, 10⁴]`.
pub fn default_t_seq(x0: f64) -> Vec<f64> {
    if x0 == 0.0 {
        GridSpec::Geometric {
            start: 10.0,
            end: 1e4,
            n: 8,
        }
        .points()
    } else {
        let step = PI / x0.abs();
        (0..8).map(|k| 1000.0 + k as f64 * step).collect()
    }
}

fn is_monotone_drift(values: &[Complex64]) -> bool {
    let steps: Vec<Complex64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    steps.iter().all(|d| d.norm() > 0.0) && steps.windows(2).all(|w| (w[0] * w[1].conj()).re > 0.0)
}

/// Estimate `lim I_T` from samples.
///
/// Consecutive samples are averaged once; the estimate is the mean of the
/// last two averages and the stability is the spread of the last three.
/// Fails with [`LabError::NoLimitDetected`] when the stability exceeds
/// `STABILITY_FACTOR × budget` and the last four raw samples drift in one
/// direction.
pub fn extrapolate_limit(
    t_seq: &[f64],
    values: &[Complex64],
    budget: f64,
) -> Result<Extrapolation> {
    if t_seq.len() != values.len() {
        return Err(LabError::GridTooSmall {
            reason: format!("{} truncations but {} values", t_seq.len(), values.len()),
        });
    }
    if values.len() < 4 {
        return Err(LabError::GridTooSmall {
            reason: format!("{} samples; need at least 4", values.len()),
        });
    }
    if !t_seq.windows(2).all(|w| w[0] < w[1]) {
        return Err(LabError::GridTooSmall {
            reason: "truncations must be strictly increasing".into(),
        });
    }
    let averaged: Vec<Complex64> = values.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
    let n = averaged.len();
    let ell_hat = (averaged[n - 1] + averaged[n - 2]) * 0.5;
    let last3 = &averaged[n - 3..];
    let stability = last3
        .iter()
        .flat_map(|a| last3.iter().map(move |b| (a - b).norm()))
        .fold(0.0, f64::max);

    let threshold = STABILITY_FACTOR * budget;
    if stability > threshold && is_monotone_drift(&values[values.len() - 4..]) {
        return Err(LabError::NoLimitDetected {
            stability,
            threshold,
        });
    }
    Ok(Extrapolation {
        ell_hat,
        stability,
        averaged,
    })
}

/// Converging when the trajectory is nonincreasing within budgets and its
/// final value is below `CONVERGENCE_RATIO` of its first (or at noise level).
pub fn trajectory_verdict(values: &[f64], budgets: &[f64]) -> Verdict {
    if values.len() < 2 || values.iter().any(|v| !v.is_finite()) {
        return Verdict::Inconclusive;
    }
    let nonincreasing =
        (1..values.len()).all(|k| values[k] <= values[k - 1] + budgets[k] + budgets[k - 1]);
    let last = values.len() - 1;
    let shrunk = values[last] < CONVERGENCE_RATIO * values[0] || values[last] <= budgets[last];
    if nonincreasing && shrunk {
        Verdict::Converging
    } else {
        Verdict::NotConverging
    }
}

fn validate_h_seq(h_seq: &[f64], min_steps: usize, min_decades: f64) -> Result<()> {
    if h_seq.len() < min_steps {
        return Err(LabError::GridTooSmall {
            reason: format!("{} values of h; need at least {min_steps}", h_seq.len()),
        });
    }
    if !h_seq.iter().all(|&h| h > 0.0 && h.is_finite()) {
        return Err(LabError::GridTooSmall {
            reason: "h values must be positive and finite".into(),
        });
    }
    if !h_seq.windows(2).all(|w| w[0] > w[1]) {
        return Err(LabError::GridTooSmall {
            reason: "h sequence must be strictly decreasing".into(),
        });
    }
    let decades = (h_seq[0] / h_seq[h_seq.len() - 1]).log10();
    if decades < min_decades - 1e-9 {
        return Err(LabError::GridTooSmall {
            reason: format!("h sequence spans {decades:.3} decades; need {min_decades}"),
        });
    }
    Ok(())
}

fn validate_x_grid(x_grid: &[f64]) -> Result<()> {
    if x_grid.is_empty() || !x_grid.iter().all(|x| x.is_finite()) {
        return Err(LabError::GridTooSmall {
            reason: "x grid must be nonempty and finite".into(),
        });
    }
    if !x_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(LabError::GridTooSmall {
            reason: "x grid must be strictly increasing".into(),
        });
    }
    Ok(())
}

fn standard_notes(extra: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut notes = vec![format!(
        "verdict thresholds are fixed engineering choices: nonincreasing within budgets, final < {CONVERGENCE_RATIO} x first"
    )];
    notes.extend(extra);
    notes
}

/// Uniform sweep of `D(x, h)` over `x_grid × h_seq`. Each cell uses
/// quadrature tolerance `tol/2` and tail budget `tol/2`.
pub fn abelian_sweep(
    f: &TestFunction,
    x_grid: &[f64],
    h_seq: &[f64],
    tol: f64,
) -> Result<SweepReport> {
    validate_x_grid(x_grid)?;
    validate_h_seq(h_seq, SWEEP_MIN_STEPS, SWEEP_MIN_DECADES)?;
    let hypothesis = Hypothesis::check(f, &[ConditionClass::VanishingM], tol)?;

    let nh = h_seq.len();
    let cells: Vec<std::result::Result<(Complex64, f64), LabError>> = (0..x_grid.len() * nh)
        .into_par_iter()
        .map(|k| {
            let (x, h) = (x_grid[k / nh], h_seq[k % nh]);
            mean_minus_partial(f, x, h, 0.5 * tol, 0.5 * tol).map(|d| (d.value, d.budget))
        })
        .collect();

    let mut d_matrix = vec![vec![None; nh]; x_grid.len()];
    let mut error_budget_matrix = vec![vec![None; nh]; x_grid.len()];
    let mut failures = Vec::new();
    for (k, cell) in cells.into_iter().enumerate() {
        let (i, j) = (k / nh, k % nh);
        match cell {
            Ok((d, b)) => {
                d_matrix[i][j] = Some(d);
                error_budget_matrix[i][j] = Some(b);
            }
            Err(e) => failures.push(format!("x = {}, h = {}: {e}", x_grid[i], h_seq[j])),
        }
    }

    let column_max =
        |m: &Vec<Vec<Option<f64>>>, j: usize| m.iter().filter_map(|row| row[j]).fold(0.0, f64::max);
    let abs_matrix: Vec<Vec<Option<f64>>> = d_matrix
        .iter()
        .map(|row| row.iter().map(|c| c.map(|d| d.norm())).collect())
        .collect();
    let sup_abs_d: Vec<f64> = (0..nh).map(|j| column_max(&abs_matrix, j)).collect();
    let sup_budget: Vec<f64> = (0..nh)
        .map(|j| column_max(&error_budget_matrix, j))
        .collect();

    let verdict = if failures.is_empty() {
        trajectory_verdict(&sup_abs_d, &sup_budget)
    } else {
        Verdict::Inconclusive
    };

    let window = (x_grid[0], x_grid[x_grid.len() - 1]);
    let notes = standard_notes(
        std::iter::once(format!(
            "uniformity in x is checked on the finite window [{}, {}] with {} points",
            window.0,
            window.1,
            x_grid.len()
        ))
        .chain(hypothesis.note())
        .chain(failures.into_iter().map(|e| format!("cell failed: {e}"))),
    );

    Ok(SweepReport {
        fn_name: f.name.clone(),
        x_grid: x_grid.to_vec(),
        h_seq: h_seq.to_vec(),
        d_matrix,
        error_budget_matrix,
        sup_abs_d,
        sup_budget,
        verdict,
        hypothesis,
        window,
        notes,
    })
}

/// Pointwise check at `x0`: estimate `ℓ = lim I_T(x0)` along `t_seq`, then
/// follow `D(x0, h)` along `h_seq`.
pub fn tauberian_check(
    f: &TestFunction,
    x0: f64,
    t_seq: &[f64],
    h_seq: &[f64],
    tol: f64,
) -> Result<ConvergenceReport> {
    validate_h_seq(h_seq, 2, 0.0)?;
    let hypothesis = Hypothesis::check(
        f,
        &[ConditionClass::BoundedM, ConditionClass::VanishingM],
        tol,
    )?;

    let partials = t_seq
        .par_iter()
        .map(|&t| partial_integral(f, x0, t, tol))
        .collect::<Result<Vec<_>>>()?;
    let i_values: Vec<Complex64> = partials.iter().map(|r| r.value).collect();
    let i_errors: Vec<f64> = partials.iter().map(|r| r.abs_error_estimate).collect();
    let budget = i_errors.iter().copied().fold(tol, f64::max);
    let extrapolation = extrapolate_limit(t_seq, &i_values, budget)?;

    let diffs = h_seq
        .par_iter()
        .map(|&h| mean_minus_partial(f, x0, h, 0.5 * tol, 0.5 * tol))
        .collect::<Result<Vec<_>>>()?;
    let mean_values: Vec<Complex64> = diffs.iter().map(|d| d.mean.value).collect();
    let d_values: Vec<Complex64> = diffs.iter().map(|d| d.value).collect();
    let d_budgets: Vec<f64> = diffs.iter().map(|d| d.budget).collect();
    let d_abs: Vec<f64> = d_values.iter().map(|d| d.norm()).collect();
    let mean_residuals = mean_values
        .iter()
        .map(|m| (m - extrapolation.ell_hat).norm())
        .collect();

    let verdict = trajectory_verdict(&d_abs, &d_budgets);
    let notes = standard_notes(hypothesis.note());

    Ok(ConvergenceReport {
        fn_name: f.name.clone(),
        x0,
        ell_hat: extrapolation.ell_hat,
        stability: extrapolation.stability,
        t_seq: t_seq.to_vec(),
        i_values,
        i_errors,
        h_seq: h_seq.to_vec(),
        mean_values,
        d_values,
        d_budgets,
        mean_residuals,
        d_abs,
        verdict,
        hypothesis,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn extrapolate_constant() {
        let t = [1.0, 2.0, 3.0, 4.0, 5.0];
        let v = vec![c(1.25); 5];
        let e = extrapolate_limit(&t, &v, 1e-12).unwrap();
        assert_eq!(e.ell_hat, c(1.25));
        assert_eq!(e.stability, 0.0);
    }

    #[test]
    fn extrapolate_divergent_is_flagged() {
        let t = default_t_seq(0.0);
        let v: Vec<Complex64> = t.iter().map(|&t| c(2.0 * t.ln_1p())).collect();
        assert!(matches!(
            extrapolate_limit(&t, &v, 1e-8),
            Err(LabError::NoLimitDetected { .. })
        ));
    }

    #[test]
    fn extrapolate_alternating() {
        let ell = 0.7;
        let k_max = 40;
        let t: Vec<f64> = (1..=k_max).map(|k| k as f64).collect();
        let v: Vec<Complex64> = (1..=k_max)
            .map(|k| c(ell + if k % 2 == 0 { 1.0 } else { -1.0 } / k as f64))
            .collect();
        let e = extrapolate_limit(&t, &v, 1e-8).unwrap();
        assert!((e.ell_hat.re - ell).abs() <= 2.0 / k_max as f64);
    }

    #[test]
    fn extrapolate_rejects_short_or_unsorted() {
        assert!(extrapolate_limit(&[1.0, 2.0, 3.0], &[c(0.0); 3], 1.0).is_err());
        assert!(extrapolate_limit(&[1.0, 3.0, 2.0, 4.0], &[c(0.0); 4], 1.0).is_err());
    }

    #[test]
    fn verdict_rule() {
        assert_eq!(
            trajectory_verdict(&[1.0, 0.5, 0.1], &[0.0; 3]),
            Verdict::Converging
        );
        assert_eq!(
            trajectory_verdict(&[1.0, 1.2, 0.1], &[0.0; 3]),
            Verdict::NotConverging
        );
        assert_eq!(
            trajectory_verdict(&[1.0, 0.9, 0.8], &[0.0; 3]),
            Verdict::NotConverging
        );
        assert_eq!(
            trajectory_verdict(&[0.0, 0.0, 0.0], &[0.0; 3]),
            Verdict::Converging
        );
        assert_eq!(
            trajectory_verdict(&[1.0, 1.05, 0.1], &[0.05; 3]),
            Verdict::Converging
        );
        assert_eq!(
            trajectory_verdict(&[1.0, f64::NAN], &[0.0; 2]),
            Verdict::Inconclusive
        );
    }

    #[test]
    fn sweep_of_zero_function() {
        let f = corpus::get("zero").unwrap();
        let r = abelian_sweep(&f, &[-1.0, 0.0, 2.0], &default_h_seq(), 1e-8).unwrap();
        assert!(r.sup_abs_d.iter().all(|&s| s == 0.0));
        assert_eq!(r.verdict, Verdict::Converging);
        assert!(r.hypothesis.satisfied);
    }

    #[test]
    fn sweep_of_box_follows_h_squared_law() {
        let f = corpus::get("box").unwrap();
        let r = abelian_sweep(&f, &[0.0], &default_h_seq(), 1e-12).unwrap();
        assert_eq!(r.verdict, Verdict::Converging);
        for (&h, &s) in r.h_seq.iter().zip(&r.sup_abs_d) {
            let law = h * h / 9.0;
            assert!(s / law > 0.5 && s / law < 2.0, "h = {h}: {s} vs {law}");
        }
    }

    #[test]
    fn sweep_rejects_short_h_seq() {
        let f = corpus::get("box").unwrap();
        assert!(matches!(
            abelian_sweep(&f, &[0.0], &[0.1, 0.01, 0.001], 1e-8),
            Err(LabError::GridTooSmall { .. })
        ));
        assert!(abelian_sweep(&f, &[0.0], &[1.0, 0.1, 0.2, 0.001], 1e-8).is_err());
    }

    #[test]
    fn sweep_of_constant_one_is_annotated() {
        let f = corpus::get("constant_one").unwrap();
        let r = abelian_sweep(&f, &[0.0, 1.0], &default_h_seq(), 1e-8).unwrap();
        assert!(!r.hypothesis.satisfied);
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.notes.iter().any(|n| n.contains("hypothesis violation")));
    }

    #[test]
    fn tauberian_box() {
        let f = corpus::get("box").unwrap();
        let r = tauberian_check(&f, 1.0, &default_t_seq(1.0), &default_h_seq(), 1e-10).unwrap();
        assert!((r.ell_hat.re - 2.0 * 1f64.sin()).abs() < 1e-9);
        assert_eq!(r.verdict, Verdict::Converging);
    }

    #[test]
    fn tauberian_divergent_point() {
        let f = corpus::get("shifted_reciprocal").unwrap();
        assert!(matches!(
            tauberian_check(&f, 0.0, &default_t_seq(0.0), &default_h_seq(), 1e-8),
            Err(LabError::NoLimitDetected { .. })
        ));
    }

    #[test]
    fn tauberian_h_grid_starts_after_one_period() {
        let h = default_tauberian_h_grid(1.0).points();
        assert_eq!(h.len(), 4);
        assert!((h[0] - 0.1).abs() < 1e-15 && (h[3] - 1e-4).abs() < 1e-18);
        assert_eq!(default_tauberian_h_grid(100.0).points()[0], 1.0);
        assert_eq!(default_tauberian_h_grid(0.0).points(), default_h_seq());
        for x0 in [0.3, 1.0, 7.0, -2.5] {
            let h0 = default_tauberian_h_grid(x0).points()[0];
            assert!(1.0 / h0 >= 2.0 * PI / x0.abs());
            assert!(1.0 / (10.0 * h0) < 2.0 * PI / x0.abs() || h0 == 1.0);
        }
    }
}
