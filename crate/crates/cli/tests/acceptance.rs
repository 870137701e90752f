//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p lebesgue-cli --test acceptance`.

#[path = "../../core/tests/support/oracles.rs"]
mod oracles;

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use lebesgue_core::corpus;
use lebesgue_core::functionals::{
    classify_conditions, tail_functional, verify_lemma2, verify_lemma3, weighted_mass, LemmaVerdict,
};
use lebesgue_core::harness::{
    abelian_sweep, default_condition_grid, default_h_seq, default_t_seq, default_tauberian_h_grid,
    default_x_grid, tauberian_check, Verdict,
};
use lebesgue_core::quad::integrate_finite;
use lebesgue_core::summability::{
    choose_truncation, lebesgue_mean, lebesgue_mean_truncated, mean_minus_partial, partial_integral,
};
use lebesgue_core::{ConditionClass, LabError};
use oracles::{ci_series, random_case, si_series};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn closed_form_suite() -> Check {
    let f = corpus::get("box").map_err(err)?;
    let mut worst: f64 = 0.0;
    for x in [0.0, 0.5, 1.0, PI, 10.0] {
        let exact = if x == 0.0 { 2.0 } else { 2.0 * x.sin() / x };
        for t in [1.0, 3.0, 50.0] {
            let r = partial_integral(&f, x, t, 1e-10).map_err(err)?;
            let e = (r.value.re - exact).abs().max(r.value.im.abs());
            worst = worst.max(e);
            ensure(e <= 1e-8, || format!("I_T({x}) at T={t} off by {e:e}"))?;
        }
    }
    let mut worst_mean: f64 = 0.0;
    for h in [1.0, 0.1, 0.01] {
        let r = lebesgue_mean(&f, 0.0, h, 1e-10, 1e-10).map_err(err)?;
        let e = (r.value.re - 2.0 * si_series(h) / h).abs();
        worst_mean = worst_mean.max(e);
        ensure(e <= 1e-8, || format!("mean at h={h} off by {e:e}"))?;
    }
    Ok(format!(
        "max |I_T - 2sin(x)/x| = {worst:.1e}, max |mean - 2Si(h)/h| = {worst_mean:.1e}"
    ))
}

fn abelian_embodiment() -> Check {
    let mut parts = Vec::new();
    for name in ["gaussian", "box", "exp_abs", "log_damped"] {
        let f = corpus::get(name).map_err(err)?;
        let r = abelian_sweep(&f, &default_x_grid(), &default_h_seq(), 1e-8).map_err(err)?;
        ensure(r.verdict == Verdict::Converging, || {
            format!(
                "{name}: verdict {} with sup|D| {:?}",
                r.verdict.as_str(),
                r.sup_abs_d
            )
        })?;
        parts.push(format!(
            "{name} {:.2e}->{:.2e}",
            r.sup_abs_d[0],
            r.sup_abs_d[r.sup_abs_d.len() - 1]
        ));
    }
    let f = corpus::get("box").map_err(err)?;
    let r = abelian_sweep(&f, &[0.0], &default_h_seq(), 1e-12).map_err(err)?;
    let mut ratios = Vec::new();
    for (&h, &s) in r.h_seq.iter().zip(&r.sup_abs_d) {
        let ratio = s / (h * h / 9.0);
        ensure((0.5..=2.0).contains(&ratio), || {
            format!("box h={h}: sup {s:e} vs h^2/9")
        })?;
        ratios.push(format!("{ratio:.3}"));
    }
    Ok(format!(
        "converging: {}; box sup/(h^2/9) = [{}]",
        parts.join(", "),
        ratios.join(", ")
    ))
}

fn tauberian_embodiment() -> Check {
    let f = corpus::get("shifted_reciprocal").map_err(err)?;
    let h_seq = default_tauberian_h_grid(1.0).points();
    let r = tauberian_check(&f, 1.0, &default_t_seq(1.0), &h_seq, 1e-8).map_err(err)?;
    ensure(r.verdict == Verdict::Converging, || {
        format!("x0=1 verdict {} with |D| {:?}", r.verdict.as_str(), r.d_abs)
    })?;
    let d1 = mean_minus_partial(&f, 1.0, 1.0, 0.5e-8, 0.5e-8)
        .map_err(err)?
        .value
        .norm();
    let d3 = mean_minus_partial(&f, 1.0, 1e-3, 0.5e-8, 0.5e-8)
        .map_err(err)?
        .value
        .norm();
    ensure(d3 < 0.1 * d1, || {
        format!("|D(1,1e-3)| = {d3:e} vs |D(1,1)| = {d1:e}")
    })?;
    // ℓ = 2∫_0^∞ cos t/(1+t) dt = 2(−Ci(1) cos 1 − (Si(1) − π/2) sin 1)
    let ell = 2.0 * (-ci_series(1.0) * 1f64.cos() - (si_series(1.0) - PI / 2.0) * 1f64.sin());
    let at_zero = tauberian_check(&f, 0.0, &default_t_seq(0.0), &default_h_seq(), 1e-8);
    ensure(
        matches!(at_zero, Err(LabError::NoLimitDetected { .. })),
        || format!("x0=0 gave {:?}", at_zero.as_ref().map(|r| r.verdict)),
    )?;
    Ok(format!(
        "x0=1 converging, ell_hat = {:.7} (closed form {ell:.7}), |D(1,1e-3)|/|D(1,1)| = {:.3}; x0=0 no-limit-detected",
        r.ell_hat.re,
        d3 / d1
    ))
}

fn lemma2_embodiment() -> Check {
    let grid = default_condition_grid();
    for name in ["box", "gaussian", "exp_abs", "log_damped"] {
        let f = corpus::get(name).map_err(err)?;
        let r = verify_lemma2(&f, &grid, 1e-8).map_err(err)?;
        ensure(r.lemma2_verdict == LemmaVerdict::Pass, || {
            format!("{name}: {:?}, Q = {:?}", r.lemma2_verdict, r.q_values)
        })?;
    }
    Ok("pass on box, gaussian, exp_abs, log_damped over 40 points in [1, 1e4]".into())
}

fn lemma3_embodiment() -> Check {
    let grid = default_condition_grid();
    let mut checked = Vec::new();
    for f in corpus::all() {
        if f.condition_class == ConditionClass::DivergentM {
            continue;
        }
        let r = verify_lemma3(&f, 1.0, &grid, 1e-8).map_err(err)?;
        ensure(r.lemma3_verdict == LemmaVerdict::Pass, || {
            format!("{}: {:?}", f.name, r.lemma3_verdict)
        })?;
        for (&t, q) in grid.iter().zip(&r.q_values) {
            let q = q.ok_or_else(|| format!("{}: Q({t}) unavailable", f.name))?;
            ensure(q <= 4.0 * r.b_hat, || {
                format!("{}: Q({t}) = {q} > 4 B_hat = {}", f.name, 4.0 * r.b_hat)
            })?;
        }
        checked.push(f.name.clone());
    }
    let f = corpus::get("shifted_reciprocal").map_err(err)?;
    let m10 = weighted_mass(&f, 10.0, 1e-10).map_err(err)?;
    let q1 = tail_functional(&f, 1.0, 1e-10).map_err(err)?;
    let m10_exact = 2.0 - 2.0 * 11f64.ln() / 10.0;
    let q1_exact = 2.0 * 2f64.ln();
    ensure(
        (m10 - m10_exact).abs() <= 1e-5 && (m10 - 1.520421).abs() <= 1e-5,
        || format!("M(10) = {m10}"),
    )?;
    ensure(
        (q1 - q1_exact).abs() <= 1e-5 && (q1 - 1.386294).abs() <= 1e-5,
        || format!("Q(1) = {q1}"),
    )?;
    Ok(format!(
        "Q <= 4 B_hat on {}; M(10) = {m10:.7}, Q(1) = {q1:.7}",
        checked.join(", ")
    ))
}

fn negative_control() -> Check {
    let f = corpus::get("constant_one").map_err(err)?;
    let grid = default_condition_grid();
    let r = classify_conditions(&f, &grid, 1.0, 1e-10).map_err(err)?;
    ensure(r.classification == ConditionClass::DivergentM, || {
        format!("classified {}", r.classification)
    })?;
    let worst = grid
        .iter()
        .zip(&r.m_values)
        .map(|(&t, &m)| (m / t - 1.0).abs())
        .fold(0.0, f64::max);
    ensure(worst <= 1e-10, || format!("max |M/T - 1| = {worst:e}"))?;
    Ok(format!("divergent-M, max |M(T)/T - 1| = {worst:.1e}"))
}

fn quadrature_reliability() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51_6e_c0);
    let n = 1000;
    let (mut within_estimate, mut within_tol) = (0, 0);
    let mut misses = Vec::new();
    for _ in 0..n {
        let case = random_case(&mut rng);
        let r = integrate_finite(&case.f, case.a, case.b, &case.osc, case.tol).map_err(err)?;
        let e = (r.value - case.exact).norm();
        if e <= 10.0 * r.abs_error_estimate {
            within_estimate += 1;
        } else {
            misses.push(format!(
                "{} [{}, {}]: {e:e} vs {:e}",
                case.label, case.a, case.b, r.abs_error_estimate
            ));
        }
        if e <= case.tol {
            within_tol += 1;
        }
    }
    ensure(within_estimate == n, || {
        format!("{} misses: {}", misses.len(), misses.join("; "))
    })?;
    ensure(within_tol * 100 >= 99 * n, || {
        format!("{within_tol}/{n} within tol")
    })?;
    Ok(format!(
        "{within_estimate}/{n} within 10x estimate, {within_tol}/{n} within tol"
    ))
}

fn truncation_certificate() -> Check {
    let eps = 1e-6;
    let mut worst: f64 = 0.0;
    let mut checked = Vec::new();
    for f in corpus::all() {
        let certifiable =
            f.support_radius.is_some() || f.envelope.as_ref().is_some_and(|e| e.tail.is_some());
        if !certifiable {
            // outside the precondition: the operation must refuse
            let r = choose_truncation(&f, 0.1, eps);
            ensure(
                matches!(r, Err(LabError::TruncationUnachievable { .. })),
                || format!("{}: expected truncation-unachievable, got {r:?}", f.name),
            )?;
            checked.push(format!("{} refused", f.name));
            continue;
        }
        for h in [1e-1, 1e-2] {
            let t = choose_truncation(&f, h, eps).map_err(err)?;
            let once = lebesgue_mean_truncated(&f, 0.0, h, t, 1e-8).map_err(err)?;
            let twice = lebesgue_mean_truncated(&f, 0.0, h, 2.0 * t, 1e-8).map_err(err)?;
            let change = (twice.value - once.value).norm();
            worst = worst.max(change);
            ensure(change <= 2.0 * eps, || {
                format!("{} h={h}: change {change:e}", f.name)
            })?;
        }
        checked.push(f.name.clone());
    }
    Ok(format!(
        "max change {worst:.2e} <= 2e-6 on [{}]",
        checked.join(", ")
    ))
}

fn determinism() -> Check {
    let args = [
        "verify",
        "theorem2",
        "--function",
        "log_damped",
        "--x-grid",
        "linear:-10:10:41",
        "--h-seq",
        "geometric:1:0.001:4",
        "--format",
        "csv",
    ];
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_lebesgue"))
            .args(args)
            .output()
            .map_err(err)
    };
    let a = run()?;
    let b = run()?;
    ensure(
        a.status.code() == Some(0) && b.status.code() == Some(0),
        || format!("exit codes {:?} {:?}", a.status.code(), b.status.code()),
    )?;
    ensure(a.stdout == b.stdout, || "outputs differ".into())?;
    Ok(format!(
        "{} bytes identical across two runs, exit 0",
        a.stdout.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("closed-form suite", closed_form_suite),
        ("uniform Abelian sweep", abelian_embodiment),
        ("pointwise Tauberian check", tauberian_embodiment),
        ("tail functional vanishes", lemma2_embodiment),
        ("tail functional bounded by 4 B", lemma3_embodiment),
        ("negative control", negative_control),
        ("quadrature reliability", quadrature_reliability),
        ("truncation certificate", truncation_certificate),
        ("determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}  {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
