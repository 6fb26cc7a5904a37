//! Polar densities of the model spaces and synthetic radial measure models.
//!
//! A polar density `h(r)` is the one-dimensional weight such that
//! `int f dm = int int f(r, y) h(r) dr dnu(y)` after the angular integral
//! has been carried out; with `f` radial this reduces every measure
//! integral in the crate to a single quadrature.

use crate::error::FinslerError;
use crate::special::{sk, unit_ball_volume};
use crate::Result;

/// Polar density of the unit-ball metric with Lebesgue measure:
/// `n omega_n r^(n-1) / (1+r)^(n+1)`.
pub fn polar_density_berwald(n: f64, r: f64) -> f64 {
    n * unit_ball_volume(n) * r.powf(n - 1.0) / (1.0 + r).powf(n + 1.0)
}

/// Polar density of a Funk body with Busemann–Hausdorff measure:
/// `n omega_n e^(-r) (1 - e^(-r))^(n-1)`. Independent of the body.
pub fn polar_density_funk(n: f64, r: f64) -> f64 {
    let e = (-r).exp();
    n * unit_ball_volume(n) * e * (1.0 - e).powf(n - 1.0)
}

/// Synthetic radial measure model with density
/// `angular_mass * e^(-(n-1) k r) * s_(-k^2)(r)^(n-1) * (1+r)^(-decay)`.
///
/// `angular_mass` plays the role of the integrated distortion at the base
/// point and defaults to `n omega_n`, which makes model outputs directly
/// comparable to the unit-ball spaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMeasureModel {
    pub n: f64,
    pub k: f64,
    pub decay: f64,
    pub angular_mass: f64,
}

impl RadialMeasureModel {
    pub fn new(n: f64, k: f64, decay: f64) -> Result<Self> {
        if n < 2.0 || k < 0.0 {
            return Err(FinslerError::InvalidParams(
                "model needs n >= 2 and k >= 0".into(),
            ));
        }
        let threshold = if k > 0.0 { 1.0 } else { n };
        if decay < threshold {
            return Err(FinslerError::InvalidParams(format!(
                "decay constant must be at least {threshold} for k = {k}"
            )));
        }
        Ok(Self { n, k, decay, angular_mass: n * unit_ball_volume(n) })
    }

    pub fn with_angular_mass(mut self, mass: f64) -> Self {
        self.angular_mass = mass;
        self
    }

    pub fn density(&self, r: f64) -> f64 {
        self.angular_mass
            * (-(self.n - 1.0) * self.k * r).exp()
            * sk(r, -self.k * self.k).powf(self.n - 1.0)
            * (1.0 + r).powf(-self.decay)
    }

    /// Exponent midpoint of the admissible window for the stretched test
    /// family on this model.
    pub fn default_mu(&self) -> f64 {
        if self.k > 0.0 {
            self.decay - 0.5
        } else {
            self.decay - self.n + 0.5
        }
    }

    /// Ratio against the comparison density `e^(-tau(r)) s_(-k^2)(r)^(n-1)`,
    /// monotone decreasing under the curvature conditions the model encodes.
    pub fn comparison_ratio(&self, tau: &dyn Fn(f64) -> f64, r: f64) -> f64 {
        comparison_ratio(&|r| self.density(r), tau, self.n, -self.k * self.k, r)
    }

    /// Lower bound for denominators `int |v|^rho r^varsigma dm` coming from
    /// the small-radius behavior of the density:
    /// `angular_mass / (2 e^rho) * eps^(n + varsigma)`.
    pub fn small_r_denominator_bound(&self, rho: f64, varsigma: f64, eps: f64) -> f64 {
        self.angular_mass / (2.0 * rho.exp()) * eps.powf(self.n + varsigma)
    }
}

/// Generic comparison ratio `density(r) / (e^(-tau(r)) s_k(r)^(n-1))`.
pub fn comparison_ratio(
    density: &dyn Fn(f64) -> f64,
    tau: &dyn Fn(f64) -> f64,
    n: f64,
    k: f64,
    r: f64,
) -> f64 {
    density(r) / ((-tau(r)).exp() * sk(r, k).powf(n - 1.0))
}
