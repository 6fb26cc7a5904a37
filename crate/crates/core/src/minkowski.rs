//! Minkowski norms on `R^n`: positively 1-homogeneous, strongly convex
//! norms with analytic gradients and Hessians for the built-in families.
//!
//! Three families are provided. `euclidean` and `ellipsoid` are symmetric;
//! `randers` adds a drift covector `b` with `|b| < 1` and is the stock
//! example of an asymmetric norm. Dual norms are closed-form for the
//! symmetric families and computed by a sup-oracle for `randers`.

use serde::{Deserialize, Serialize};

use crate::ascent;
use crate::error::FinslerError;
use crate::vecn::{add, dot, is_spd, mat_vec, norm, quadratic_form, scale, solve};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum NormKind {
    Euclidean,
    Ellipsoid { shape: Vec<Vec<f64>> },
    Randers { drift: Vec<f64> },
}

/// A Minkowski norm; immutable after construction and safe to share.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NormSpec", into = "NormSpec")]
pub struct MinkowskiNorm {
    dim: usize,
    kind: NormKind,
}

impl MinkowskiNorm {
    pub fn euclidean(dim: usize) -> Self {
        Self { dim, kind: NormKind::Euclidean }
    }

    /// `phi(y) = sqrt(y^T shape y)`; the shape matrix must be symmetric
    /// positive definite.
    pub fn ellipsoid(shape: Vec<Vec<f64>>) -> Result<Self> {
        let dim = shape.len();
        if dim < 1 || shape.iter().any(|row| row.len() != dim) {
            return Err(FinslerError::InvalidParams("shape must be square".into()));
        }
        if !is_spd(&shape) {
            return Err(FinslerError::InvalidParams(
                "ellipsoid shape must be symmetric positive definite".into(),
            ));
        }
        Ok(Self { dim, kind: NormKind::Ellipsoid { shape } })
    }

    /// `phi(y) = |y| + <b, y>`; requires `|b| < 1` for strong convexity.
    pub fn randers(drift: Vec<f64>) -> Result<Self> {
        if norm(&drift) >= 1.0 {
            return Err(FinslerError::InvalidParams(
                "randers drift must have euclidean norm < 1".into(),
            ));
        }
        let dim = drift.len();
        Ok(Self { dim, kind: NormKind::Randers { drift } })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    /// Norm evaluation; total (returns 0 at the origin).
    pub fn eval(&self, y: &[f64]) -> f64 {
        match &self.kind {
            NormKind::Euclidean => norm(y),
            NormKind::Ellipsoid { shape } => quadratic_form(shape, y, y).max(0.0).sqrt(),
            NormKind::Randers { drift } => norm(y) + dot(drift, y),
        }
    }

    /// Analytic gradient of `phi` at `y != 0`.
    pub fn grad(&self, y: &[f64]) -> Result<Vec<f64>> {
        let n = norm(y);
        if n == 0.0 {
            return Err(FinslerError::ZeroVector);
        }
        Ok(match &self.kind {
            NormKind::Euclidean => scale(y, 1.0 / n),
            NormKind::Ellipsoid { shape } => scale(&mat_vec(shape, y), 1.0 / self.eval(y)),
            NormKind::Randers { drift } => add(&scale(y, 1.0 / n), drift),
        })
    }

    /// Analytic Hessian of `phi^2 / 2` at `y != 0`; symmetric positive
    /// definite for admissible parameters.
    pub fn hessian_half_square(&self, y: &[f64]) -> Result<Vec<Vec<f64>>> {
        let yn = norm(y);
        if yn == 0.0 {
            return Err(FinslerError::ZeroVector);
        }
        let d = self.dim;
        Ok(match &self.kind {
            NormKind::Euclidean => crate::vecn::identity(d),
            NormKind::Ellipsoid { shape } => shape.clone(),
            NormKind::Randers { drift } => {
                let phi = self.eval(y);
                let yhat = scale(y, 1.0 / yn);
                let g = add(&yhat, drift);
                let mut m = vec![vec![0.0; d]; d];
                for i in 0..d {
                    for j in 0..d {
                        let proj = if i == j { 1.0 } else { 0.0 } - yhat[i] * yhat[j];
                        m[i][j] = g[i] * g[j] + phi * proj / yn;
                    }
                }
                m
            }
        })
    }

    /// Dual norm `phi*(eta) = sup_{y != 0} <eta, y> / phi(y)`.
    ///
    /// Closed forms for the symmetric families; the asymmetric family runs
    /// the deterministic sup-oracle (coarse grid plus local ascent).
    pub fn dual(&self, eta: &[f64]) -> f64 {
        if norm(eta) == 0.0 {
            return 0.0;
        }
        match &self.kind {
            NormKind::Euclidean => norm(eta),
            NormKind::Ellipsoid { shape } => {
                let inv_eta = solve(shape, eta).expect("shape is SPD");
                dot(eta, &inv_eta).max(0.0).sqrt()
            }
            NormKind::Randers { .. } => self.dual_oracle(eta, 1e-12),
        }
    }

    /// Sup-oracle for the dual norm; always a lower bound of the true value.
    pub fn dual_oracle(&self, eta: &[f64], step_tol: f64) -> f64 {
        ascent::max_over_sphere(self.dim, ascent::default_grid(self.dim), step_tol, |y| {
            dot(eta, y) / self.eval(y)
        })
        .0
    }

    /// Reversibility `sup phi(-y)/phi(y)`, by grid plus refinement.
    pub fn reversibility(&self) -> f64 {
        ascent::sup_ratio(self.dim, |y| self.eval(&scale(y, -1.0)) / self.eval(y))
    }

    pub fn is_reversible(&self) -> bool {
        matches!(self.kind, NormKind::Euclidean | NormKind::Ellipsoid { .. })
    }
}

/// On-disk form: `{"kind":"randers","b":[0.5,0]}` and friends.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum NormSpec {
    Euclidean { dim: usize },
    Ellipsoid { shape: Vec<Vec<f64>> },
    Randers { b: Vec<f64> },
}

impl TryFrom<NormSpec> for MinkowskiNorm {
    type Error = FinslerError;

    fn try_from(spec: NormSpec) -> Result<Self> {
        match spec {
            NormSpec::Euclidean { dim } => Ok(MinkowskiNorm::euclidean(dim)),
            NormSpec::Ellipsoid { shape } => MinkowskiNorm::ellipsoid(shape),
            NormSpec::Randers { b } => MinkowskiNorm::randers(b),
        }
    }
}

impl From<MinkowskiNorm> for NormSpec {
    fn from(n: MinkowskiNorm) -> Self {
        match n.kind {
            NormKind::Euclidean => NormSpec::Euclidean { dim: n.dim },
            NormKind::Ellipsoid { shape } => NormSpec::Ellipsoid { shape },
            NormKind::Randers { drift } => NormSpec::Randers { b: drift },
        }
    }
}
