//! Adaptive quadrature on finite intervals and weighted infinite tails.
//!
//! Finite integrals are split into an initial partition that respects jump
//! points and caps every panel at half a period of the fastest oscillation.
//! Each panel is evaluated with a nested Gauss–Kronrod pair, then the panels
//! with the largest error estimates are bisected until the summed estimate
//! meets the tolerance. Reductions are compensated and run in a fixed order,
//! so results are bit-identical across runs and thread counts.

mod gauss_kronrod;
mod tail;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::sum::{ComplexSum, NeumaierSum};

use gauss_kronrod::{gk15, PanelEstimate};
pub use tail::{integrate_tail, TailWeight, DEFAULT_ENVELOPE_START};

/// Integrand evaluations per panel (15-point Kronrod rule).
pub const NODES_PER_PANEL: usize = gauss_kronrod::NODES_PER_PANEL;

/// Value and error estimate of one numerical integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub panels_used: usize,
    pub evaluations: usize,
    /// False when the tolerance could not be met; the value and estimate
    /// are still the best available.
    pub converged: bool,
}

impl QuadResult {
    pub fn zero() -> Self {
        QuadResult {
            value: Complex64::new(0.0, 0.0),
            abs_error_estimate: 0.0,
            panels_used: 0,
            evaluations: 0,
            converged: true,
        }
    }
}

/// Oscillatory content and discontinuities of an integrand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OscillationSpec {
    pub frequencies: Vec<f64>,
    pub jump_points: Vec<f64>,
}

impl OscillationSpec {
    pub fn new(frequencies: Vec<f64>, jump_points: Vec<f64>) -> Self {
        Self {
            frequencies,
            jump_points,
        }
    }

    pub fn max_frequency(&self) -> f64 {
        self.frequencies.iter().copied().fold(0.0, f64::max)
    }

    fn validate(&self) -> Result<()> {
        for &w in &self.frequencies {
            if !(w.is_finite() && w >= 0.0) {
                return Err(LabError::InvalidParameter {
                    name: "frequency",
                    value: w,
                    reason: "must be finite and nonnegative",
                });
            }
        }
        for &j in &self.jump_points {
            if !j.is_finite() {
                return Err(LabError::InvalidParameter {
                    name: "jump_point",
                    value: j,
                    reason: "must be finite",
                });
            }
        }
        Ok(())
    }
}

/// Tuning knobs for [`integrate_finite_with`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    /// Upper bound on panel width independent of oscillation.
    pub width_cap: f64,
    /// Maximum number of bisections after the initial partition.
    pub max_subdivisions: usize,
    /// Refuse initial partitions larger than this.
    pub max_initial_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            width_cap: f64::INFINITY,
            max_subdivisions: 200_000,
            max_initial_panels: 200_000_000,
        }
    }
}

/// A run of `count` equal panels covering `[a, b]`.
#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    count: usize,
}

impl Segment {
    fn panel(&self, i: usize) -> (f64, f64) {
        let len = self.b - self.a;
        let n = self.count as f64;
        let lo = if i == 0 {
            self.a
        } else {
            self.a + len * (i as f64 / n)
        };
        let hi = if i + 1 == self.count {
            self.b
        } else {
            self.a + len * ((i + 1) as f64 / n)
        };
        (lo, hi)
    }
}

fn validate_interval(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(LabError::InvalidInterval { a, b })
    }
}

fn segments(a: f64, b: f64, osc: &OscillationSpec, width_cap: f64) -> Vec<Segment> {
    let mut cuts: Vec<f64> = osc
        .jump_points
        .iter()
        .copied()
        .filter(|&j| j > a && j < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let omega = osc.max_frequency();
    let mut max_width = if omega > 0.0 {
        PI / omega
    } else {
        f64::INFINITY
    };
    max_width = max_width.min(width_cap);

    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut lo = a;
    for hi in cuts.into_iter().chain(std::iter::once(b)) {
        let len = hi - lo;
        let mut count = if max_width.is_finite() {
            ((len / max_width).ceil() as usize).max(1)
        } else {
            1
        };
        while len / count as f64 > max_width {
            count += 1;
        }
        out.push(Segment {
            a: lo,
            b: hi,
            count,
        });
        lo = hi;
    }
    out
}

/// Initial partition of `[a, b]`: boundaries at every interior jump point
/// and no panel wider than `π / max frequency` (or the width cap).
pub fn panelize(interval: (f64, f64), osc: &OscillationSpec) -> Result<Vec<(f64, f64)>> {
    panelize_with(interval, osc, f64::INFINITY)
}

pub fn panelize_with(
    interval: (f64, f64),
    osc: &OscillationSpec,
    width_cap: f64,
) -> Result<Vec<(f64, f64)>> {
    let (a, b) = interval;
    validate_interval(a, b)?;
    osc.validate()?;
    Ok(segments(a, b, osc, width_cap)
        .iter()
        .flat_map(|s| (0..s.count).map(move |i| s.panel(i)))
        .collect())
}

/// Heap entry ordered by error, ties broken by insertion sequence.
struct Pending {
    panel: PanelEstimate,
    seq: u64,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Pending {}
impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.panel
            .error
            .total_cmp(&other.panel.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

#[derive(Default)]
struct Chunk {
    value: ComplexSum,
    error: NeumaierSum,
    settled: usize,
    unsettled: Vec<PanelEstimate>,
}

const CHUNK: usize = 512;

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate_finite<F>(
    f: F,
    a: f64,
    b: f64,
    osc: &OscillationSpec,
    tol: f64,
) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    integrate_finite_with(f, a, b, osc, tol, &QuadOptions::default())
}

pub fn integrate_finite_with<F>(
    f: F,
    a: f64,
    b: f64,
    osc: &OscillationSpec,
    tol: f64,
    opts: &QuadOptions,
) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    validate_interval(a, b)?;
    osc.validate()?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(LabError::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "must be positive and finite",
        });
    }

    let segs = segments(a, b, osc, opts.width_cap);
    let mut offsets = Vec::with_capacity(segs.len() + 1);
    let mut total = 0usize;
    for s in &segs {
        offsets.push(total);
        total += s.count;
    }
    if total > opts.max_initial_panels {
        return Err(LabError::InvalidParameter {
            name: "initial_panels",
            value: total as f64,
            reason: "partition too fine; reduce the interval or frequencies",
        });
    }

    // Panels whose estimate is below this share are summed immediately and
    // never revisited; together they use at most a quarter of the budget.
    let settle_below = tol / (4.0 * total as f64);

    let panel_at = |idx: usize| -> (f64, f64) {
        let seg = offsets.partition_point(|&o| o <= idx) - 1;
        segs[seg].panel(idx - offsets[seg])
    };

    let n_chunks = total.div_ceil(CHUNK);
    let chunks: Vec<Chunk> = (0..n_chunks)
        .into_par_iter()
        .map(|c| -> Result<Chunk> {
            let mut out = Chunk::default();
            for idx in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let (lo, hi) = panel_at(idx);
                let p = gk15(&f, lo, hi)?;
                if p.error <= settle_below {
                    out.value.add(p.value);
                    out.error.add(p.error);
                    out.settled += 1;
                } else {
                    out.unsettled.push(p);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut settled_value = ComplexSum::new();
    let mut settled_error = NeumaierSum::new();
    let mut settled_count = 0usize;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<PanelEstimate> = Vec::new();
    let mut running_error = NeumaierSum::new();
    let mut seq = 0u64;
    for chunk in &chunks {
        settled_value.merge(&chunk.value);
        settled_error.merge(&chunk.error);
        settled_count += chunk.settled;
    }
    running_error.merge(&settled_error);
    for chunk in chunks {
        for p in chunk.unsettled {
            running_error.add(p.error);
            if p.refinable {
                heap.push(Pending { panel: p, seq });
                seq += 1;
            } else {
                frozen.push(p);
            }
        }
    }

    let mut evaluations = total * NODES_PER_PANEL;
    let mut subdivisions = 0usize;
    while running_error.value() > tol && subdivisions < opts.max_subdivisions {
        let Some(Pending { panel, .. }) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (panel.a + panel.b);
        if !(mid > panel.a && mid < panel.b) {
            frozen.push(panel);
            continue;
        }
        let left = gk15(&f, panel.a, mid)?;
        let right = gk15(&f, mid, panel.b)?;
        evaluations += 2 * NODES_PER_PANEL;
        subdivisions += 1;
        running_error.add(-panel.error);
        for child in [left, right] {
            running_error.add(child.error);
            if child.refinable {
                heap.push(Pending { panel: child, seq });
                seq += 1;
            } else {
                frozen.push(child);
            }
        }
    }

    let mut rest: Vec<PanelEstimate> = heap.into_iter().map(|p| p.panel).collect();
    rest.extend(frozen);
    rest.sort_by(|p, q| p.a.total_cmp(&q.a));

    let mut value = settled_value;
    let mut error = settled_error;
    for p in &rest {
        value.add(p.value);
        error.add(p.error);
    }
    let abs_error_estimate = error.value().max(0.0);

    Ok(QuadResult {
        value: value.value(),
        abs_error_estimate,
        panels_used: settled_count + rest.len(),
        evaluations,
        converged: abs_error_estimate <= tol,
    })
}
