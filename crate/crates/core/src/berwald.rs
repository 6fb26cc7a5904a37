//! The projectively flat, zero-curvature metric on the open Euclidean unit
//! ball, with Lebesgue measure. All closed forms live here: the metric and
//! its `(alpha, beta)` decomposition, origin-based distances, the gradient
//! and Laplacian of the distance function, the analytic Legendre transform,
//! and the quartic equation solved by the co-metric.
//!
//! Writing `A = sqrt((1-|x|^2)|y|^2 + <x,y>^2)`, the metric is
//! `(A + <x,y>)^2 / ((1-|x|^2)^2 A)` and the geodesic coefficients are
//! `P y^i` with `P = (A + <x,y>)/(1-|x|^2)`.

use crate::ascent;
use crate::error::FinslerError;
use crate::quartic::{eval_quartic, real_roots_quartic};
use crate::space::{FinslerSpace, TangentVec};
use crate::vecn::{dot, norm, scale};
use crate::Result;

/// All closed forms blow up on the boundary; points this close to it are
/// rejected.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

/// Relative window around the sup-oracle lower bound inside which a
/// quartic root is considered admissible.
const ROOT_WINDOW: f64 = 1e-4;

/// Scaled-residual ceiling for the returned root.
const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerwaldSpace {
    dim: usize,
}

/// Diagnostic output of the quartic co-metric solve.
#[derive(Debug, Clone)]
pub struct QuarticCometric {
    pub value: f64,
    /// residual of the normalized quartic at the returned root, scaled by
    /// the largest coefficient
    pub scaled_residual: f64,
    /// refined sup-oracle lower bound used for root selection
    pub oracle_bound: f64,
    pub positive_roots: Vec<f64>,
    /// number of roots that fell inside the selection window; values
    /// above 1 indicate the admissible root was not unique
    pub admissible_count: usize,
}

impl BerwaldSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(FinslerError::InvalidParams("dimension must be at least 2".into()));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn guard(x: &[f64]) -> Result<f64> {
        let b = norm(x);
        if b < 1.0 - BOUNDARY_MARGIN {
            Ok(b)
        } else {
            Err(FinslerError::OutsideBall)
        }
    }

    fn radicand(x: &[f64], y: &[f64]) -> f64 {
        let b2 = dot(x, x);
        let xy = dot(x, y);
        ((1.0 - b2) * dot(y, y) + xy * xy).max(0.0).sqrt()
    }

    /// Metric evaluation; zero vectors map to zero.
    pub fn b_eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        Self::guard(x)?;
        if norm(y) == 0.0 {
            return Ok(0.0);
        }
        let b2 = dot(x, x);
        let a = Self::radicand(x, y);
        let xy = dot(x, y);
        let num = a + xy;
        Ok(num * num / ((1.0 - b2) * (1.0 - b2) * a))
    }

    /// Riemannian part and 1-form of the `(alpha, beta)` decomposition;
    /// the metric equals `alpha (1 + beta/alpha)^2`.
    pub fn alpha_beta(&self, x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
        Self::guard(x)?;
        let b2 = dot(x, x);
        let d2 = (1.0 - b2) * (1.0 - b2);
        Ok((Self::radicand(x, y) / d2, dot(x, y) / d2))
    }

    /// Projective factor of the spray, `G^i = P y^i`.
    pub fn spray_factor(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        Self::guard(x)?;
        Ok((Self::radicand(x, y) + dot(x, y)) / (1.0 - dot(x, x)))
    }

    /// Forward distance from the origin, `|x| / (1 - |x|)`.
    pub fn dist_from_origin(&self, x: &[f64]) -> Result<f64> {
        let b = Self::guard(x)?;
        Ok(b / (1.0 - b))
    }

    /// Backward distance to the origin, `|x| / (1 + |x|)`; always below 1.
    pub fn dist_to_origin(&self, x: &[f64]) -> Result<f64> {
        let b = Self::guard(x)?;
        Ok(b / (1.0 + b))
    }

    /// Gradient of `r(x) = dist_from_origin(x)`: `((1-|x|)^2/|x|) x`.
    pub fn grad_r(&self, x: &[f64]) -> Result<TangentVec> {
        let b = Self::guard(x)?;
        if b == 0.0 {
            return Err(FinslerError::AtOrigin);
        }
        let f = (1.0 - b) * (1.0 - b) / b;
        Ok(TangentVec { base: x.to_vec(), components: scale(x, f) })
    }

    /// Differential of the distance function, `dr_i = x_i / ((1-|x|)^2 |x|)`.
    pub fn dr_covector(&self, x: &[f64]) -> Result<Vec<f64>> {
        let b = Self::guard(x)?;
        if b == 0.0 {
            return Err(FinslerError::AtOrigin);
        }
        Ok(scale(x, 1.0 / ((1.0 - b) * (1.0 - b) * b)))
    }

    /// Laplacian of the distance function, `(n-1)/|x| + (n+1)|x| - 2n`.
    pub fn laplacian_r(&self, x: &[f64]) -> Result<f64> {
        let b = Self::guard(x)?;
        if b == 0.0 {
            return Err(FinslerError::AtOrigin);
        }
        Ok((self.dim as f64 - 1.0) / b + (self.dim as f64 + 1.0) * b - 2.0 * self.dim as f64)
    }

    /// Same Laplacian expressed in the distance variable,
    /// `(n-1)/r - (n+1)/(1+r)`.
    pub fn laplacian_r_of_r(n: f64, r: f64) -> f64 {
        (n - 1.0) / r - (n + 1.0) / (1.0 + r)
    }

    /// Analytic Legendre transform: `p_i = 2(a+b)^3 b_i / a^2 +
    /// (a-b)(a+b)^3 y_i / a^4` in lowered-index notation of the
    /// decomposition.
    pub fn legendre(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        Self::guard(x)?;
        if norm(y) == 0.0 {
            return Ok(vec![0.0; self.dim]);
        }
        let (alpha, beta) = self.alpha_beta(x, y)?;
        let b2 = dot(x, x);
        let om = 1.0 - b2;
        let d4 = om * om * om * om;
        let xy = dot(x, y);
        let apb = alpha + beta;
        let c_b = 2.0 * apb * apb * apb / (alpha * alpha);
        let c_y = (alpha - beta) * apb * apb * apb / (alpha * alpha * alpha * alpha);
        let mut p = vec![0.0; self.dim];
        for i in 0..self.dim {
            let b_i = x[i] / (om * om);
            let y_i = (om * y[i] + xy * x[i]) / d4;
            p[i] = c_b * b_i + c_y * y_i;
        }
        Ok(p)
    }

    /// Normalized quartic coefficients (low-to-high) for `u = F*/alpha*`,
    /// together with `alpha*`. Dividing the raw equation by `alpha*^6`
    /// keeps every coefficient O(1) up to the boundary.
    pub fn quartic_coefficients(&self, x: &[f64], xi: &[f64]) -> Result<([f64; 5], f64)> {
        let b = Self::guard(x)?;
        if norm(xi) == 0.0 {
            return Err(FinslerError::ZeroVector);
        }
        let b2 = b * b;
        let om = 1.0 - b2;
        let xxi = dot(x, xi);
        let alpha_star2 = om * om * om * (dot(xi, xi) - xxi * xxi);
        let alpha_star = alpha_star2.sqrt();
        let beta_star = om * om * xxi;
        let rho = beta_star / alpha_star;
        let c4 = 16.0 * b2 * om * om * (om + rho * rho);
        let c3 = 8.0 * ((10.0 * b2 - 1.0) * om * rho + (9.0 * b2 - 1.0) * rho * rho * rho);
        let c2 = (1.0 - 20.0 * b2 - 8.0 * b2 * b2)
            + 6.0 * (6.0 * b2 - 5.0) * rho * rho
            - 27.0 * rho * rho * rho * rho;
        let c1 = 12.0 * rho;
        let c0 = -1.0;
        Ok(([c0, c1, c2, c3, c4], alpha_star))
    }

    /// Co-metric by the quartic equation, with diagnostics.
    ///
    /// Root selection: all real roots of the normalized quartic are
    /// computed and polished; positive values no further than `ROOT_WINDOW`
    /// (relative) below a refined sup-oracle lower bound are admissible,
    /// and the smallest admissible value is returned. The oracle never
    /// exceeds the true co-metric, so the smallest admissible root is the
    /// co-metric branch rather than a spurious factor.
    pub fn cometric_quartic_detailed(&self, x: &[f64], xi: &[f64]) -> Result<QuarticCometric> {
        let (coeffs, alpha_star) = self.quartic_coefficients(x, xi)?;
        let roots = real_roots_quartic(coeffs[4], coeffs[3], coeffs[2], coeffs[1], coeffs[0]);
        let positive: Vec<f64> =
            roots.iter().map(|u| u * alpha_star).filter(|v| *v > 0.0).collect();
        if positive.is_empty() {
            return Err(FinslerError::NoAdmissibleRoot("quartic has no positive root".into()));
        }
        let bound = ascent::max_over_sphere(self.dim, 64, 1e-9, |y| {
            dot(xi, y) / self.b_eval_raw(x, y)
        })
        .0;
        let admissible: Vec<f64> = positive
            .iter()
            .copied()
            .filter(|v| *v >= bound * (1.0 - ROOT_WINDOW))
            .collect();
        let admissible_count =
            admissible.iter().filter(|v| (**v - bound).abs() <= ROOT_WINDOW * bound).count();
        let value = admissible.iter().copied().fold(f64::INFINITY, f64::min);
        if !value.is_finite() {
            return Err(FinslerError::NoAdmissibleRoot(format!(
                "no positive root at or above the oracle bound {bound:.6e}"
            )));
        }
        let max_coeff = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let scaled_residual = eval_quartic(&coeffs, value / alpha_star).abs() / max_coeff;
        if scaled_residual > RESIDUAL_TOL {
            return Err(FinslerError::NoAdmissibleRoot(format!(
                "scaled residual {scaled_residual:.3e} exceeds {RESIDUAL_TOL:.0e}"
            )));
        }
        Ok(QuarticCometric {
            value,
            scaled_residual,
            oracle_bound: bound,
            positive_roots: positive,
            admissible_count,
        })
    }

    /// Co-metric by the quartic equation (value only).
    pub fn cometric_quartic(&self, x: &[f64], xi: &[f64]) -> Result<f64> {
        Ok(self.cometric_quartic_detailed(x, xi)?.value)
    }

    /// Co-metric of the negated radial covector in the distance variable:
    /// `F*(x, -dr) = (1 + 2r)^2` at `r = dist_from_origin(x)`.
    pub fn cometric_neg_radial(r: f64) -> f64 {
        (1.0 + 2.0 * r) * (1.0 + 2.0 * r)
    }

    fn b_eval_raw(&self, x: &[f64], y: &[f64]) -> f64 {
        let b2 = dot(x, x);
        let a = Self::radicand(x, y);
        let xy = dot(x, y);
        let num = a + xy;
        num * num / ((1.0 - b2) * (1.0 - b2) * a)
    }

    /// Reversibility at a point, `((1+|x|)/(1-|x|))^2`.
    pub fn reversibility_at(&self, x: &[f64]) -> Result<f64> {
        let b = Self::guard(x)?;
        Ok(((1.0 + b) / (1.0 - b)).powi(2))
    }

    /// Wrap the closed forms into the generic space interface
    /// (Lebesgue density).
    pub fn space(&self) -> FinslerSpace {
        let this = *self;
        FinslerSpace::builder(self.dim, move |x, y| this.b_eval_raw(x, y))
            .domain(|x| norm(x) < 1.0 - BOUNDARY_MARGIN)
            .legendre(move |x, y| this.legendre(x, y).expect("domain checked"))
            .spray(move |x, y| {
                let p = (Self::radicand(x, y) + dot(x, y)) / (1.0 - dot(x, x));
                scale(y, p)
            })
            .cometric(move |x, xi| this.cometric_quartic(x, xi))
            .density(|_x| 1.0)
            .build()
    }
}
