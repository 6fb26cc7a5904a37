//! Central finite differences.
//!
//! Step sizes follow one convention: first derivatives use `H1 * scale`,
//! second derivatives `H2 * scale`, where `scale` is `max(1, |y|)` of the
//! argument being varied. The curvature pipeline additionally applies one
//! level of Richardson extrapolation to its stencils (the `_rich`
//! variants), which pushes truncation error below the cancellation floor
//! for analytically evaluated functions.

/// Step factor for first derivatives.
pub const H1: f64 = 1e-6;
/// Step factor for second derivatives.
pub const H2: f64 = 1e-4;

pub fn step_scale(v: &[f64]) -> f64 {
    crate::vecn::norm(v).max(1.0)
}

/// Central first derivative.
pub fn central1<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Central first derivative with one Richardson level: combines `D(h)` and
/// `D(h/2)` to cancel the `h^2` term.
pub fn central1_rich<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> f64 {
    let mut d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let full = d(h);
    let half = d(h / 2.0);
    (4.0 * half - full) / 3.0
}

/// Central second derivative.
pub fn central2<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// Central second derivative with one Richardson level.
pub fn central2_rich<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> f64 {
    let mut d = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    let full = d(h);
    let half = d(h / 2.0);
    (4.0 * half - full) / 3.0
}

/// Mixed second derivative on the four-point cross stencil.
pub fn mixed2<F: FnMut(f64, f64) -> f64>(mut f: F, x: f64, y: f64, hx: f64, hy: f64) -> f64 {
    (f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy))
        / (4.0 * hx * hy)
}

/// Mixed second derivative with one Richardson level.
pub fn mixed2_rich<F: FnMut(f64, f64) -> f64>(mut f: F, x: f64, y: f64, hx: f64, hy: f64) -> f64 {
    let mut d = |hx: f64, hy: f64| {
        (f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy))
            / (4.0 * hx * hy)
    };
    let full = d(hx, hy);
    let half = d(hx / 2.0, hy / 2.0);
    (4.0 * half - full) / 3.0
}

/// Gradient of a scalar field by perturbing one coordinate at a time.
pub fn gradient<F: FnMut(&[f64]) -> f64>(mut f: F, x: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len());
    let mut z = x.to_vec();
    for i in 0..x.len() {
        let xi = x[i];
        let g = central1(
            |t| {
                z[i] = t;
                let v = f(&z);
                z[i] = xi;
                v
            },
            xi,
            h,
        );
        out.push(g);
        z[i] = xi;
    }
    out
}

/// Hessian of a scalar field (symmetric by construction).
pub fn hessian<F: FnMut(&[f64]) -> f64>(mut f: F, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut m = vec![vec![0.0; n]; n];
    let mut z = x.to_vec();
    for i in 0..n {
        let xi = x[i];
        m[i][i] = central2(
            |t| {
                z[i] = t;
                let v = f(&z);
                z[i] = xi;
                v
            },
            xi,
            h,
        );
        z[i] = xi;
    }
    for i in 0..n {
        for j in 0..i {
            let (xi, xj) = (x[i], x[j]);
            let v = mixed2(
                |a, b| {
                    z[i] = a;
                    z[j] = b;
                    let v = f(&z);
                    z[i] = xi;
                    z[j] = xj;
                    v
                },
                xi,
                xj,
                h,
                h,
            );
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}
