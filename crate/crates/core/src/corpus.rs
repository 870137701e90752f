//! Built-in catalogue of test integrands.
//!
//! Every member is bounded on bounded intervals, so it is locally integrable;
//! several are deliberately *not* globally integrable. Each entry carries the
//! analytic metadata the numerical modules rely on: support, a monotone decay
//! envelope with its tail integral, condition class and closed forms.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type ComplexFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Status of a function under the growth conditions on
/// `M(T) = (1/T) ∫_{|t|<T} |t f(t)| dt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConditionClass {
    /// `M(T) → 0`.
    #[serde(rename = "vanishing-M")]
    VanishingM,
    /// `M(T) ≤ B` for all large `T`.
    #[serde(rename = "bounded-M")]
    BoundedM,
    /// `M(T)` unbounded.
    #[serde(rename = "divergent-M")]
    DivergentM,
}

impl ConditionClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ConditionClass::VanishingM => "vanishing-M",
            ConditionClass::BoundedM => "bounded-M",
            ConditionClass::DivergentM => "divergent-M",
        }
    }
}

impl fmt::Display for ConditionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed form of `∫_T^∞ E(u)/u du` for an envelope `E`.
#[derive(Clone)]
pub struct TailForm {
    eval: RealFn,
    /// True when `|f(±u)| = E(u)` beyond the envelope start and the formula
    /// is exact, so the tail may be added to a value instead of an error bound.
    pub exact: bool,
}

impl TailForm {
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }
}

/// Monotone majorant `|f(t)| ≤ E(|t|)` valid for `|t| ≥ from`.
#[derive(Clone)]
pub struct Envelope {
    pub from: f64,
    bound: RealFn,
    pub tail: Option<TailForm>,
    /// `f` is real, even, nonnegative and nonincreasing in `|t|` on `|t| ≥ from`.
    pub monotone_even: bool,
}

impl Envelope {
    pub fn bound(&self, u: f64) -> f64 {
        (self.bound)(u)
    }
}

/// A closed-form expression with a stated validity domain; evaluation
/// returns `None` outside that domain.
#[derive(Clone)]
pub struct Formula<A, R> {
    pub domain: &'static str,
    eval: Arc<dyn Fn(A) -> Option<R> + Send + Sync>,
}

impl<A, R> Formula<A, R> {
    fn new(domain: &'static str, eval: impl Fn(A) -> Option<R> + Send + Sync + 'static) -> Self {
        Self {
            domain,
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, arg: A) -> Option<R> {
        (self.eval)(arg)
    }
}

/// Known exact values, each optional.
#[derive(Clone, Default)]
pub struct ClosedForms {
    /// `I_T(x)`, argument `(x, T)`.
    pub partial_integral: Option<Formula<(f64, f64), Complex64>>,
    /// `M(T)`.
    pub weighted_mass: Option<Formula<f64, f64>>,
    /// `Q(T) = T ∫_{|t|>T} |f(t)/t| dt`.
    pub tail_functional: Option<Formula<f64, f64>>,
    /// `ℓ(x) = lim I_T(x)`.
    pub transform_limit: Option<Formula<f64, Complex64>>,
}

impl ClosedForms {
    fn available(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.partial_integral.is_some() {
            out.push("partial_integral");
        }
        if self.weighted_mass.is_some() {
            out.push("weighted_mass");
        }
        if self.tail_functional.is_some() {
            out.push("tail_functional");
        }
        if self.transform_limit.is_some() {
            out.push("transform_limit");
        }
        out
    }

    fn scaled(&self, c: f64) -> Self {
        fn scale1(f: &Option<Formula<f64, f64>>, c: f64) -> Option<Formula<f64, f64>> {
            f.clone().map(|f| {
                let domain = f.domain;
                Formula::new(domain, move |t| f.eval(t).map(|v| c * v))
            })
        }
        ClosedForms {
            partial_integral: self.partial_integral.clone().map(|f| {
                let domain = f.domain;
                Formula::new(domain, move |a| f.eval(a).map(|v| v * c))
            }),
            weighted_mass: scale1(&self.weighted_mass, c),
            tail_functional: scale1(&self.tail_functional, c),
            transform_limit: self.transform_limit.clone().map(|f| {
                let domain = f.domain;
                Formula::new(domain, move |x| f.eval(x).map(|v| v * c))
            }),
        }
    }
}

/// A named integrand `f: ℝ → ℂ` with its analytic metadata.
#[derive(Clone)]
pub struct TestFunction {
    pub name: String,
    pub description: String,
    eval: ComplexFn,
    /// Smallest `a` with `f(t) = 0` for `|t| > a`; `None` for infinite support.
    pub support_radius: Option<f64>,
    /// Points of discontinuity. The value at a jump is the midpoint of the
    /// one-sided limits.
    pub jump_points: Vec<f64>,
    pub envelope: Option<Envelope>,
    pub globally_integrable: bool,
    pub condition_class: ConditionClass,
    pub closed_forms: ClosedForms,
    /// `f` is real-valued and even.
    pub real_even: bool,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("support_radius", &self.support_radius)
            .field("jump_points", &self.jump_points)
            .field("globally_integrable", &self.globally_integrable)
            .field("condition_class", &self.condition_class)
            .finish_non_exhaustive()
    }
}

impl TestFunction {
    #[inline]
    pub fn eval(&self, t: f64) -> Complex64 {
        (self.eval)(t)
    }

    /// Panel boundaries required by the integrators: the jump points plus the
    /// origin, where corpus members built from `|t|` have a kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = self.jump_points.clone();
        pts.push(0.0);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// `c · f` for `c > 0`, with every piece of metadata rescaled.
    pub fn scaled(&self, c: f64) -> Result<TestFunction> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(LabError::InvalidParameter {
                name: "scale",
                value: c,
                reason: "must be positive and finite",
            });
        }
        let inner = self.eval.clone();
        let envelope = self.envelope.clone().map(|env| {
            let bound = env.bound.clone();
            Envelope {
                from: env.from,
                bound: Arc::new(move |u| c * bound(u)),
                tail: env.tail.map(|tail| {
                    let eval = tail.eval.clone();
                    TailForm {
                        eval: Arc::new(move |t| c * eval(t)),
                        exact: tail.exact,
                    }
                }),
                monotone_even: env.monotone_even,
            }
        });
        Ok(TestFunction {
            name: format!("{}*{}", c, self.name),
            description: format!("{} times {}", c, self.description),
            eval: Arc::new(move |t| inner(t) * c),
            support_radius: self.support_radius,
            jump_points: self.jump_points.clone(),
            envelope,
            globally_integrable: self.globally_integrable,
            condition_class: self.condition_class,
            closed_forms: self.closed_forms.scaled(c),
            real_even: self.real_even,
        })
    }

    pub fn summary(&self) -> FunctionSummary {
        FunctionSummary {
            name: self.name.clone(),
            description: self.description.clone(),
            support_radius: self.support_radius,
            jump_points: self.jump_points.clone(),
            envelope_from: self.envelope.as_ref().map(|e| e.from),
            envelope_tail: self.envelope.as_ref().and_then(|e| {
                e.tail
                    .as_ref()
                    .map(|t| if t.exact { "exact" } else { "bound" })
            }),
            globally_integrable: self.globally_integrable,
            condition_class: self.condition_class,
            closed_forms: self.closed_forms.available(),
        }
    }
}

/// Serializable catalogue row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionSummary {
    pub name: String,
    pub description: String,
    /// `null` means infinite support.
    pub support_radius: Option<f64>,
    pub jump_points: Vec<f64>,
    pub envelope_from: Option<f64>,
    pub envelope_tail: Option<&'static str>,
    pub globally_integrable: bool,
    pub condition_class: ConditionClass,
    pub closed_forms: Vec<&'static str>,
}

fn real(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> ComplexFn {
    Arc::new(move |t| Complex64::new(f(t), 0.0))
}

/// `2 sin(a x) / x`, continuous at `x = 0`.
fn two_sin_over(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        2.0 * a
    } else {
        2.0 * (a * x).sin() / x
    }
}

fn box_fn() -> TestFunction {
    TestFunction {
        name: "box".into(),
        description: "indicator of [-1, 1]".into(),
        eval: real(|t| {
            let a = t.abs();
            if a < 1.0 {
                1.0
            } else if a == 1.0 {
                0.5
            } else {
                0.0
            }
        }),
        support_radius: Some(1.0),
        jump_points: vec![-1.0, 1.0],
        envelope: Some(Envelope {
            from: 0.0,
            bound: Arc::new(|u| if u <= 1.0 { 1.0 } else { 0.0 }),
            tail: Some(TailForm {
                eval: Arc::new(|t| if t < 1.0 { -t.ln() } else { 0.0 }),
                exact: true,
            }),
            monotone_even: true,
        }),
        globally_integrable: true,
        condition_class: ConditionClass::VanishingM,
        closed_forms: ClosedForms {
            partial_integral: Some(Formula::new("all x, T > 0", |(x, t): (f64, f64)| {
                (t > 0.0).then(|| Complex64::new(two_sin_over(t.min(1.0), x), 0.0))
            })),
            weighted_mass: Some(Formula::new("T > 0", |t: f64| {
                (t > 0.0).then(|| t.min(1.0).powi(2) / t)
            })),
            tail_functional: Some(Formula::new("T > 0", |t: f64| {
                (t > 0.0).then(|| if t >= 1.0 { 0.0 } else { -2.0 * t * t.ln() })
            })),
            transform_limit: Some(Formula::new("all x", |x: f64| {
                Some(Complex64::new(two_sin_over(1.0, x), 0.0))
            })),
        },
        real_even: true,
    }
}

fn gaussian() -> TestFunction {
    TestFunction {
        name: "gaussian".into(),
        description: "exp(-t^2)".into(),
        eval: real(|t| (-t * t).exp()),
        support_radius: None,
        jump_points: vec![],
        envelope: Some(Envelope {
            from: 0.0,
            bound: Arc::new(|u| (-u * u).exp()),
            // ∫_T^∞ e^{-u²}/u du = E1(T²)/2 ≤ e^{-T²}/(2T²)
            tail: Some(TailForm {
                eval: Arc::new(|t| (-t * t).exp() / (2.0 * t * t)),
                exact: false,
            }),
            monotone_even: true,
        }),
        globally_integrable: true,
        condition_class: ConditionClass::VanishingM,
        closed_forms: ClosedForms {
            weighted_mass: Some(Formula::new("T > 0", |t: f64| {
                (t > 0.0).then(|| -(-t * t).exp_m1() / t)
            })),
            transform_limit: Some(Formula::new("all x", |x: f64| {
                Some(Complex64::new(PI.sqrt() * (-x * x / 4.0).exp(), 0.0))
            })),
            ..Default::default()
        },
        real_even: true,
    }
}

fn exp_abs() -> TestFunction {
    TestFunction {
        name: "exp_abs".into(),
        description: "exp(-|t|)".into(),
        eval: real(|t| (-t.abs()).exp()),
        support_radius: None,
        jump_points: vec![],
        envelope: Some(Envelope {
            from: 0.0,
            bound: Arc::new(|u| (-u).exp()),
            // ∫_T^∞ e^{-u}/u du = E1(T) ≤ e^{-T}/T
            tail: Some(TailForm {
                eval: Arc::new(|t| (-t).exp() / t),
                exact: false,
            }),
            monotone_even: true,
        }),
        globally_integrable: true,
        condition_class: ConditionClass::VanishingM,
        closed_forms: ClosedForms {
            partial_integral: Some(Formula::new("all x, T > 0", |(x, t): (f64, f64)| {
                (t > 0.0).then(|| {
                    let s = Complex64::new(1.0, -x);
                    let v = (Complex64::new(1.0, 0.0) - (-s * t).exp()) / s;
                    Complex64::new(2.0 * v.re, 0.0)
                })
            })),
            weighted_mass: Some(Formula::new("T > 0", |t: f64| {
                (t > 0.0).then(|| 2.0 * (1.0 - (1.0 + t) * (-t).exp()) / t)
            })),
            transform_limit: Some(Formula::new("all x", |x: f64| {
                Some(Complex64::new(2.0 / (1.0 + x * x), 0.0))
            })),
            ..Default::default()
        },
        real_even: true,
    }
}

fn shifted_reciprocal() -> TestFunction {
    TestFunction {
        name: "shifted_reciprocal".into(),
        description: "1/(1+|t|)".into(),
        eval: real(|t| 1.0 / (1.0 + t.abs())),
        support_radius: None,
        jump_points: vec![],
        envelope: Some(Envelope {
            from: 0.0,
            bound: Arc::new(|u| 1.0 / (1.0 + u)),
            tail: Some(TailForm {
                eval: Arc::new(|t| (1.0 / t).ln_1p()),
                exact: true,
            }),
            monotone_even: true,
        }),
        globally_integrable: false,
        condition_class: ConditionClass::BoundedM,
        closed_forms: ClosedForms {
            partial_integral: Some(Formula::new("x = 0, T > 0", |(x, t): (f64, f64)| {
                (x == 0.0 && t > 0.0).then(|| Complex64::new(2.0 * t.ln_1p(), 0.0))
            })),
            weighted_mass: Some(Formula::new("T > 0", |t: f64| {
                (t > 0.0).then(|| 2.0 * (1.0 - t.ln_1p() / t))
            })),
            tail_functional: Some(Formula::new("T > 0", |t: f64| {
                (t > 0.0).then(|| 2.0 * t * (1.0 / t).ln_1p())
            })),
            transform_limit: None,
        },
        real_even: true,
    }
}

fn log_damped() -> TestFunction {
    TestFunction {
        name: "log_damped".into(),
        description: "1/((1+|t|) ln(2+|t|))".into(),
        eval: real(|t| {
            let a = t.abs();
            1.0 / ((1.0 + a) * (2.0 + a).ln())
        }),
        support_radius: None,
        jump_points: vec![],
        envelope: Some(Envelope {
            from: 0.0,
            bound: Arc::new(|u| 1.0 / ((1.0 + u) * (2.0 + u).ln())),
            // ∫_T^∞ du/(u(1+u) ln(2+u)) ≤ ln(1+1/T)/ln(2+T)
            tail: Some(TailForm {
                eval: Arc::new(|t| (1.0 / t).ln_1p() / (2.0 + t).ln()),
                exact: false,
            }),
            monotone_even: true,
        }),
        globally_integrable: false,
        condition_class: ConditionClass::VanishingM,
        closed_forms: ClosedForms::default(),
        real_even: true,
    }
}

fn constant_one() -> TestFunction {
    TestFunction {
        name: "constant_one".into(),
        description: "1 (violates every growth condition)".into(),
        eval: real(|_| 1.0),
        support_radius: None,
        jump_points: vec![],
        envelope: Some(Envelope {
            from: 0.0,
            bound: Arc::new(|_| 1.0),
            tail: None,
            monotone_even: true,
        }),
        globally_integrable: false,
        condition_class: ConditionClass::DivergentM,
        closed_forms: ClosedForms {
            partial_integral: Some(Formula::new("all x, T > 0", |(x, t): (f64, f64)| {
                (t > 0.0).then(|| Complex64::new(two_sin_over(t, x), 0.0))
            })),
            weighted_mass: Some(Formula::new("T > 0", |t: f64| (t > 0.0).then_some(t))),
            ..Default::default()
        },
        real_even: true,
    }
}

fn zero() -> TestFunction {
    let zero1 = || Formula::new("T > 0", |t: f64| (t > 0.0).then_some(0.0));
    TestFunction {
        name: "zero".into(),
        description: "identically 0".into(),
        eval: real(|_| 0.0),
        support_radius: Some(0.0),
        jump_points: vec![],
        envelope: Some(Envelope {
            from: 0.0,
            bound: Arc::new(|_| 0.0),
            tail: Some(TailForm {
                eval: Arc::new(|_| 0.0),
                exact: true,
            }),
            monotone_even: true,
        }),
        globally_integrable: true,
        condition_class: ConditionClass::VanishingM,
        closed_forms: ClosedForms {
            partial_integral: Some(Formula::new("all x, T > 0", |(_, t): (f64, f64)| {
                (t > 0.0).then_some(Complex64::new(0.0, 0.0))
            })),
            weighted_mass: Some(zero1()),
            tail_functional: Some(zero1()),
            transform_limit: Some(Formula::new("all x", |_| Some(Complex64::new(0.0, 0.0)))),
        },
        real_even: true,
    }
}

fn catalogue() -> &'static [TestFunction] {
    static CATALOGUE: OnceLock<Vec<TestFunction>> = OnceLock::new();
    CATALOGUE.get_or_init(|| {
        let mut all = vec![
            box_fn(),
            constant_one(),
            exp_abs(),
            gaussian(),
            log_damped(),
            shifted_reciprocal(),
            zero(),
        ];
        all.sort_by(|a, b| a.name.cmp(&b.name));
        all
    })
}

/// Look up a catalogue entry by name.
pub fn get(name: &str) -> Result<TestFunction> {
    catalogue()
        .iter()
        .find(|f| f.name == name)
        .cloned()
        .ok_or_else(|| LabError::UnknownFunction {
            name: name.to_string(),
            available: names(),
        })
}

/// Catalogue names in lexicographic order.
pub fn names() -> Vec<String> {
    catalogue().iter().map(|f| f.name.clone()).collect()
}

/// Catalogue summaries in lexicographic order of name.
pub fn list() -> Vec<FunctionSummary> {
    catalogue().iter().map(TestFunction::summary).collect()
}

/// All catalogue entries, lexicographic by name.
pub fn all() -> Vec<TestFunction> {
    catalogue().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn box_entry() {
        let f = get("box").unwrap();
        assert_eq!(f.support_radius, Some(1.0));
        assert!(f.globally_integrable);
        assert_eq!(f.condition_class, ConditionClass::VanishingM);
        assert_eq!(f.eval(0.3).re, 1.0);
        assert_eq!(f.eval(1.0).re, 0.5);
        assert_eq!(f.eval(-1.0).re, 0.5);
        assert_eq!(f.eval(1.5).re, 0.0);
    }

    #[test]
    fn shifted_reciprocal_entry() {
        let f = get("shifted_reciprocal").unwrap();
        assert!(!f.globally_integrable);
        assert_eq!(f.condition_class, ConditionClass::BoundedM);
        let m = f.closed_forms.weighted_mass.as_ref().unwrap();
        let expected = 2.0 * (1.0 - 11f64.ln() / 10.0);
        assert!((m.eval(10.0).unwrap() - expected).abs() < 1e-15);
        assert!((m.eval(1e12).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn log_damped_entry() {
        let f = get("log_damped").unwrap();
        assert!(!f.globally_integrable);
        assert_eq!(f.condition_class, ConditionClass::VanishingM);
    }

    #[test]
    fn unknown_name_lists_available() {
        match get("nope") {
            Err(LabError::UnknownFunction { name, available }) => {
                assert_eq!(name, "nope");
                assert!(available.contains(&"box".to_string()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn list_is_sorted_and_complete() {
        let names: Vec<String> = list().into_iter().map(|s| s.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        for required in [
            "box",
            "gaussian",
            "exp_abs",
            "shifted_reciprocal",
            "log_damped",
            "constant_one",
        ] {
            assert!(names.iter().any(|n| n == required), "missing {required}");
        }
    }

    #[test]
    fn separating_members_exist() {
        let all = all();
        assert!(all
            .iter()
            .any(|f| !f.globally_integrable && f.condition_class == ConditionClass::VanishingM));
        assert!(all
            .iter()
            .any(|f| !f.globally_integrable && f.condition_class == ConditionClass::BoundedM));
    }

    #[test]
    fn gaussian_limit_at_zero() {
        let f = get("gaussian").unwrap();
        let l = f.closed_forms.transform_limit.as_ref().unwrap();
        assert!((l.eval(0.0).unwrap().re - PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn compact_support_vanishes_outside() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in all() {
            if let Some(a) = f.support_radius {
                for _ in 0..1000 {
                    let t: f64 = rng.gen_range(a..a + 100.0) + f64::EPSILON * (1.0 + a);
                    let t = if rng.gen_bool(0.5) { t } else { -t };
                    assert_eq!(f.eval(t), Complex64::new(0.0, 0.0), "{} at {t}", f.name);
                }
            }
        }
    }

    #[test]
    fn envelopes_dominate_and_values_finite() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in all() {
            let env = f.envelope.as_ref().expect("every entry has an envelope");
            for _ in 0..1000 {
                // log-uniform magnitudes cover both the core and far tail
                let mag = env.from + 10f64.powf(rng.gen_range(-3.0..6.0));
                let t = if rng.gen_bool(0.5) { mag } else { -mag };
                let v = f.eval(t);
                assert!(v.re.is_finite() && v.im.is_finite());
                assert!(
                    v.norm() <= env.bound(t.abs()) * (1.0 + 1e-15),
                    "{} at {t}",
                    f.name
                );
            }
        }
    }

    #[test]
    fn real_even_members_are_even() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for f in all().into_iter().filter(|f| f.real_even) {
            for _ in 0..200 {
                let t: f64 = rng.gen_range(-50.0..50.0);
                assert_eq!(f.eval(t), f.eval(-t));
                assert_eq!(f.eval(t).im, 0.0);
            }
        }
    }

    #[test]
    fn scaled_rescales_closed_forms() {
        let f = get("shifted_reciprocal").unwrap().scaled(3.0).unwrap();
        assert_eq!(f.eval(1.0).re, 1.5);
        let m = f
            .closed_forms
            .weighted_mass
            .as_ref()
            .unwrap()
            .eval(10.0)
            .unwrap();
        assert!((m - 3.0 * 2.0 * (1.0 - 11f64.ln() / 10.0)).abs() < 1e-14);
        assert!(get("box").unwrap().scaled(-1.0).is_err());
    }
}
