//! Adaptive Gauss–Kronrod quadrature.
//!
//! The engine is a 7-15 pair with globally adaptive bisection: the interval
//! with the largest error estimate is split until the accumulated estimate
//! meets the requested tolerance. Improper upper limits are handled by the
//! compactifying substitution `r = t / (1 - t)`, which maps `[0, inf)` onto
//! `[0, 1)` and regularizes both polynomial-times-exponential tails and
//! boundary singularities.

use crate::error::FinslerError;
use crate::Result;

/// Tolerances and the subdivision budget for one integration call.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-14, max_subdivisions: 2000 }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }
}

/// Integration domain for radial integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    UnitInterval,
    UpTo(f64),
    HalfLine,
}

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights,
// with the embedded 7-point Gauss weights (QUADPACK dqk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.000_000_000_000_000_0,
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
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod panel; returns (estimate, error_bound).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut resabs = WGK[7] * fc.abs();
    let mut fv = [0.0; 15];
    fv[7] = fc;
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for (j, &w) in WGK.iter().enumerate().take(7) {
        resasc += w * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    let estimate = kronrod * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (estimate, err)
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (est, err) = gk15(&f, a, b);
    let mut intervals = vec![(a, b, est, err)];
    let mut total = est;
    let mut total_err = err;
    for _ in 0..spec.max_subdivisions {
        if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(total);
        }
        // split the interval with the largest error bound
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (ia, ib, iest, ierr) = intervals.swap_remove(worst);
        let mid = 0.5 * (ia + ib);
        if mid <= ia || mid >= ib {
            // interval no longer splittable in f64; accept its estimate
            intervals.push((ia, ib, iest, 0.0));
            total_err -= ierr;
            continue;
        }
        let (le, lerr) = gk15(&f, ia, mid);
        let (re, rerr) = gk15(&f, mid, ib);
        total += le + re - iest;
        total_err += lerr + rerr - ierr;
        intervals.push((ia, mid, le, lerr));
        intervals.push((mid, ib, re, rerr));
    }
    if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
        Ok(total)
    } else {
        Err(FinslerError::QuadratureFailure { estimate: total, error: total_err })
    }
}

/// Integrate `f(r) * weight(r)` over the given radial domain.
///
/// The half line is folded onto the unit interval by `r = t/(1-t)` with
/// Jacobian `(1-t)^{-2}`; see the module docs.
pub fn integrate_radial<F, W>(f: F, weight: W, domain: Domain, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
    W: Fn(f64) -> f64,
{
    let g = |r: f64| f(r) * weight(r);
    match domain {
        Domain::UnitInterval => integrate(g, 0.0, 1.0, spec),
        Domain::UpTo(upper) => {
            if !(upper > 0.0) {
                return Err(FinslerError::InvalidParams(format!(
                    "upper limit must be positive, got {upper}"
                )));
            }
            if upper <= 1.0 {
                integrate(g, 0.0, upper, spec)
            } else {
                // keep the unsubstituted part near zero where integrands may be singular
                let head = integrate(&g, 0.0, 1.0, spec)?;
                let tail = integrate(
                    |t: f64| {
                        let om = 1.0 - t;
                        g(t / om) / (om * om)
                    },
                    0.5,
                    upper / (1.0 + upper),
                    spec,
                )?;
                Ok(head + tail)
            }
        }
        Domain::HalfLine => {
            let head = integrate(&g, 0.0, 1.0, spec)?;
            let tail = integrate(
                |t: f64| {
                    let om = 1.0 - t;
                    let r = t / om;
                    let v = g(r);
                    if v == 0.0 {
                        0.0
                    } else {
                        v / (om * om)
                    }
                },
                0.5,
                1.0,
                spec,
            )?;
            Ok(head + tail)
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, x);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}
