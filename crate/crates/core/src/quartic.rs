//! Real roots of polynomials up to degree four.
//!
//! Quartic roots are isolated between the critical points (roots of the
//! derivative cubic) and extracted by bisection plus a Newton polish.
//! Tangential (double) roots do not produce sign changes, so critical
//! points where the polynomial nearly vanishes are admitted as roots as
//! well. Cubics use Cardano/trigonometric closed forms. Returned roots
//! are sorted ascending and deduplicated.

fn polish(roots: &mut [f64], c: &[f64; 5]) {
    for x in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(c, *x);
            if p == 0.0 || dp.abs() < 1e-300 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            // near multiple roots the residual is noise-level and Newton
            // steps wander; only accept steps that reduce the residual
            let cand = *x - step;
            if eval_with_derivative(c, cand).0.abs() < p.abs() {
                *x = cand;
            } else {
                break;
            }
        }
    }
}

fn eval_with_derivative(c: &[f64; 5], x: f64) -> (f64, f64) {
    let mut p = c[4];
    let mut dp = 0.0;
    for k in (0..4).rev() {
        dp = dp * x + p;
        p = p * x + c[k];
    }
    (p, dp)
}

fn dedupe_sorted(roots: &mut Vec<f64>) {
    roots.sort_by(|a, b| a.total_cmp(b));
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-7 * (1.0 + a.abs().max(b.abs())));
}

pub fn real_roots_quadratic(a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    let scale = a2.abs().max(a1.abs()).max(a0.abs());
    if scale == 0.0 || !scale.is_finite() {
        return vec![];
    }
    if a2.abs() < 1e-14 * scale {
        if a1 == 0.0 {
            return vec![];
        }
        return vec![-a0 / a1];
    }
    let disc = a1 * a1 - 4.0 * a2 * a0;
    let disc_tol = 1e-12 * (a1 * a1 + 4.0 * (a2 * a0).abs());
    if disc < -disc_tol {
        return vec![];
    }
    if disc <= disc_tol {
        return vec![-a1 / (2.0 * a2)];
    }
    let sq = disc.sqrt();
    let q = -0.5 * (a1 + a1.signum() * sq);
    let mut out = if q == 0.0 { vec![0.0] } else { vec![q / a2, a0 / q] };
    dedupe_sorted(&mut out);
    out
}

pub fn real_roots_cubic(a3: f64, a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    let max = a3.abs().max(a2.abs()).max(a1.abs()).max(a0.abs());
    if max == 0.0 || !max.is_finite() {
        return vec![];
    }
    if a3.abs() < 1e-12 * max {
        return real_roots_quadratic(a2, a1, a0);
    }
    let b = a2 / a3;
    let c = a1 / a3;
    let d = a0 / a3;
    // depressed cubic t^3 + p t + q with x = t - b/3
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    let disc_tol = 1e-13 * ((q / 2.0) * (q / 2.0) + (p / 3.0).abs().powi(3));
    let mut roots = if disc > disc_tol {
        let s = disc.sqrt();
        let u = (-q / 2.0 + s).cbrt();
        let v = (-q / 2.0 - s).cbrt();
        vec![u + v + shift]
    } else if disc >= -disc_tol {
        // repeated roots
        if p.abs() < 1e-300 {
            vec![shift]
        } else {
            let double = -3.0 * q / (2.0 * p);
            let simple = 3.0 * q / p;
            vec![double + shift, simple + shift]
        }
    } else {
        // three distinct real roots, trigonometric form
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift)
            .collect()
    };
    let coeffs = [a0, a1, a2, a3, 0.0];
    polish(&mut roots, &coeffs);
    dedupe_sorted(&mut roots);
    roots
}

/// All real roots of `a4 x^4 + a3 x^3 + a2 x^2 + a1 x + a0`, including
/// tangential double roots.
pub fn real_roots_quartic(a4: f64, a3: f64, a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    let all = [a0, a1, a2, a3, a4];
    if all.iter().any(|c| !c.is_finite()) {
        return vec![];
    }
    let max = all.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if max == 0.0 {
        return vec![];
    }
    let s = 1.0 / max;
    let c = [a0 * s, a1 * s, a2 * s, a3 * s, a4 * s];

    if c[4].abs() < 1e-10 {
        let mut roots = real_roots_cubic(c[3], c[2], c[1], c[0]);
        polish(&mut roots, &c);
        dedupe_sorted(&mut roots);
        return roots;
    }

    // Cauchy bound: all roots lie in [-bound, bound]
    let bound = 1.0 + (c[0].abs().max(c[1].abs()).max(c[2].abs()).max(c[3].abs())) / c[4].abs();

    // breakpoints: critical points inside the bound, plus the bound itself
    let mut brk = vec![-bound];
    let mut crits = real_roots_cubic(4.0 * c[4], 3.0 * c[3], 2.0 * c[2], c[1]);
    crits.retain(|t| t.abs() < bound);
    brk.extend(crits.iter().copied());
    brk.push(bound);
    brk.sort_by(|a, b| a.total_cmp(b));

    let eval = |x: f64| eval_with_derivative(&c, x).0;
    let mut roots: Vec<f64> = Vec::with_capacity(4);

    // sign changes between consecutive breakpoints
    for w in brk.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        if hi - lo < 1e-300 {
            continue;
        }
        let (flo, fhi) = (eval(lo), eval(hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo * fhi > 0.0 {
            continue;
        }
        let mut sign_lo = flo.signum();
        for _ in 0..120 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = eval(mid);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm.signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
            sign_lo = eval(lo).signum();
        }
        roots.push(0.5 * (lo + hi));
    }

    // tangential roots: critical points where the polynomial vanishes
    // to within the evaluation noise
    for t in &crits {
        let noise = 64.0 * f64::EPSILON
            * (c[0].abs()
                + c[1].abs() * t.abs()
                + c[2].abs() * t.powi(2)
                + c[3].abs() * t.abs().powi(3)
                + c[4].abs() * t.powi(4))
            .max(f64::MIN_POSITIVE);
        if eval(*t).abs() <= noise {
            roots.push(*t);
        }
    }

    polish(&mut roots, &c);
    // tangential roots drift under Newton (derivative vanishes); clamp any
    // non-finite survivors
    roots.retain(|x| x.is_finite());
    dedupe_sorted(&mut roots);
    roots
}

/// Evaluate the quartic at `x`, coefficients low-to-high.
pub fn eval_quartic(c: &[f64; 5], x: f64) -> f64 {
    (((c[4] * x + c[3]) * x + c[2]) * x + c[1]) * x + c[0]
}
