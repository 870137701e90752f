//! Independent reference values for tests: exact rational polynomial
//! integrals, elementary antiderivatives evaluated in cancellation-free
//! form, and the sine integral by its power series.

#![allow(dead_code)]

use lebesgue_core::quad::OscillationSpec;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

/// `Si(x) = Σ (−1)^k x^{2k+1} / ((2k+1)(2k+1)!)`, summed until the terms
/// stop mattering. Accurate to a few ulps for `|x| ≤ 4`.
pub fn si_series(x: f64) -> f64 {
    let mut sum = 0.0f64;
    let mut power = x; // x^{2k+1} / (2k+1)!
    let mut k = 0u32;
    loop {
        let n = f64::from(2 * k + 1);
        let term = power / n;
        sum += term;
        if term.abs() < 1e-20 * sum.abs().max(1e-300) {
            return sum;
        }
        power *= -x * x / ((n + 1.0) * (n + 2.0));
        k += 1;
    }
}

/// `Ci(x) = γ + ln x + Σ_{k≥1} (−1)^k x^{2k} / (2k (2k)!)` for `0 < x ≤ 4`.
pub fn ci_series(x: f64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let mut sum = 0.0f64;
    let mut power = 1.0f64; // x^{2k} / (2k)!
    let mut k = 1u32;
    loop {
        let n = f64::from(2 * k);
        power *= -x * x / ((n - 1.0) * n);
        let term = power / n;
        sum += term;
        if term.abs() < 1e-20 {
            return EULER_GAMMA + x.ln() + sum;
        }
        k += 1;
    }
}

/// `Σ c_k t^k` integrated exactly over `[a, b]` with rational arithmetic.
pub fn polynomial_integral_exact(coeffs: &[f64], a: f64, b: f64) -> f64 {
    let rat = |v: f64| BigRational::from_float(v).expect("finite");
    let (ra, rb) = (rat(a), rat(b));
    let mut pa = ra.clone();
    let mut pb = rb.clone();
    let mut total = BigRational::zero();
    for (k, &c) in coeffs.iter().enumerate() {
        let denom = BigRational::from_integer(BigInt::from(k + 1));
        total += rat(c) * (&pb - &pa) / denom;
        pa *= &ra;
        pb *= &rb;
    }
    total.to_f64().expect("representable")
}

/// One randomly drawn integral with a trusted reference value.
pub struct Case {
    pub label: &'static str,
    pub f: Box<dyn Fn(f64) -> Complex64 + Sync>,
    pub a: f64,
    pub b: f64,
    pub osc: OscillationSpec,
    pub tol: f64,
    pub exact: Complex64,
}

fn dyadic<R: Rng>(rng: &mut R, lo: i32, hi: i32) -> f64 {
    f64::from(rng.gen_range(lo..=hi)) / 16.0
}

fn interval<R: Rng>(rng: &mut R, radius: i32) -> (f64, f64) {
    loop {
        let a = dyadic(rng, -16 * radius, 16 * radius);
        let b = dyadic(rng, -16 * radius, 16 * radius);
        if a < b {
            return (a, b);
        }
    }
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Draw one case from a mix of smooth, oscillatory, discontinuous and
/// endpoint-singular integrands. Tolerances span `1e-10 ..= 1e-6`.
pub fn random_case<R: Rng>(rng: &mut R) -> Case {
    let tol = 10f64.powf(rng.gen_range(-10.0..=-6.0));
    match rng.gen_range(0..6) {
        0 => {
            let degree = rng.gen_range(0..=25);
            // coefficients m / 2^k keep |c_k t^k| ≤ 5 on [-2, 2]
            let coeffs: Vec<f64> = (0..=degree)
                .map(|k| f64::from(rng.gen_range(-5..=5)) / 2f64.powi(k))
                .collect();
            let (a, b) = interval(rng, 2);
            let exact = real(polynomial_integral_exact(&coeffs, a, b));
            let c = coeffs.clone();
            Case {
                label: "polynomial",
                f: Box::new(move |t| real(c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck))),
                a,
                b,
                osc: OscillationSpec::default(),
                tol,
                exact,
            }
        }
        1 => {
            let lambda = rng.gen_range(-1.5..=1.5);
            let (a, b) = interval(rng, 3);
            let exact = real((lambda * a).exp() * (lambda * (b - a)).exp_m1() / lambda);
            Case {
                label: "exponential",
                f: Box::new(move |t| real((lambda * t).exp())),
                a,
                b,
                osc: OscillationSpec::default(),
                tol,
                exact,
            }
        }
        2 => {
            let omega = rng.gen_range(0.1..=60.0);
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            let (a, b) = interval(rng, 5);
            // sin(ωb+φ) − sin(ωa+φ) without cancellation
            let exact = real(
                2.0 * (0.5 * omega * (a + b) + phase).cos() * (0.5 * omega * (b - a)).sin() / omega,
            );
            Case {
                label: "cosine",
                f: Box::new(move |t| real((omega * t + phase).cos())),
                a,
                b,
                osc: OscillationSpec::new(vec![omega], vec![]),
                tol,
                exact,
            }
        }
        3 => {
            let omega = rng.gen_range(0.1..=60.0);
            let (a, b) = interval(rng, 5);
            let mid = Complex64::new(0.0, 0.5 * omega * (a + b)).exp();
            let exact = mid * (2.0 * (0.5 * omega * (b - a)).sin() / omega);
            Case {
                label: "complex exponential",
                f: Box::new(move |t| Complex64::new(0.0, omega * t).exp()),
                a,
                b,
                osc: OscillationSpec::new(vec![omega], vec![]),
                tol,
                exact,
            }
        }
        4 => {
            let (a, b) = interval(rng, 4);
            let jump = a + (b - a) * rng.gen_range(0.05..0.95);
            let (lo, hi) = (
                f64::from(rng.gen_range(-4..=4)),
                f64::from(rng.gen_range(-4..=4)),
            );
            let exact = real(lo * (jump - a) + hi * (b - jump));
            Case {
                label: "step",
                f: Box::new(move |t| real(if t < jump { lo } else { hi })),
                a,
                b,
                osc: OscillationSpec::new(vec![], vec![jump]),
                tol,
                exact,
            }
        }
        _ => {
            let (a, b) = interval(rng, 2);
            let exact = real(2.0 / 3.0 * (b - a).powf(1.5));
            Case {
                label: "sqrt endpoint",
                f: Box::new(move |t| real((t - a).max(0.0).sqrt())),
                a,
                b,
                osc: OscillationSpec::default(),
                tol,
                exact,
            }
        }
    }
}
