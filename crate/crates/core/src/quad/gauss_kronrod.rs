//! 7-point Gauss / 15-point Kronrod nested pair on a single panel.

use num_complex::Complex64;

use crate::error::{LabError, Result};

pub(crate) const NODES_PER_PANEL: usize = 15;

// Kronrod abscissae; odd indices (and the centre) are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of one panel evaluation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PanelEstimate {
    pub a: f64,
    pub b: f64,
    pub value: Complex64,
    pub error: f64,
    /// False when the estimate is dominated by the roundoff floor, so that
    /// bisecting the panel cannot reduce it.
    pub refinable: bool,
}

#[inline]
fn sample<F>(f: &F, t: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let v = f(t);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(LabError::NonFiniteSample { t })
    }
}

pub(crate) fn gk15<F>(f: &F, a: f64, b: f64) -> Result<PanelEstimate>
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = sample(f, center)?;
    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = f_center.norm() * WGK[7];

    let mut fv1 = [Complex64::new(0.0, 0.0); 7];
    let mut fv2 = [Complex64::new(0.0, 0.0); 7];

    for (j, &wg) in WG.iter().take(3).enumerate() {
        let k = 2 * j + 1;
        let dx = half * XGK[k];
        let f1 = sample(f, center - dx)?;
        let f2 = sample(f, center + dx)?;
        fv1[k] = f1;
        fv2[k] = f2;
        res_gauss += (f1 + f2) * wg;
        res_kronrod += (f1 + f2) * WGK[k];
        res_abs += (f1.norm() + f2.norm()) * WGK[k];
    }
    for j in 0..4 {
        let k = 2 * j;
        let dx = half * XGK[k];
        let f1 = sample(f, center - dx)?;
        let f2 = sample(f, center + dx)?;
        fv1[k] = f1;
        fv2[k] = f2;
        res_kronrod += (f1 + f2) * WGK[k];
        res_abs += (f1.norm() + f2.norm()) * WGK[k];
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = (f_center - mean).norm() * WGK[7];
    for k in 0..7 {
        res_asc += ((fv1[k] - mean).norm() + (fv2[k] - mean).norm()) * WGK[k];
    }

    let abs_half = half.abs();
    let diff = ((res_kronrod - res_gauss) * half).norm();
    let value = res_kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;

    // QUADPACK-style rescaling of the Gauss/Kronrod difference.
    let mut truncation = diff;
    if res_asc != 0.0 && truncation != 0.0 {
        truncation = res_asc * (200.0 * truncation / res_asc).powf(1.5).min(1.0);
    }

    // Roundoff floor: accumulated rounding in the weighted sum plus the
    // effect of rounding the node positions, which grows with |center|/half.
    let eps = f64::EPSILON;
    let mut floor = 0.0;
    if res_abs > f64::MIN_POSITIVE / (50.0 * eps) {
        floor = 50.0 * eps * res_abs;
    }
    if abs_half > 0.0 {
        floor += 2.0 * eps * (center.abs() / abs_half + 1.0) * res_asc;
    }

    Ok(PanelEstimate {
        a,
        b,
        value,
        error: truncation.max(floor),
        refinable: truncation > floor,
    })
}
