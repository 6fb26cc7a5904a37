//! Funk metrics over strongly convex bodies `{phi < 1}` of a Minkowski
//! norm. The metric is defined implicitly by `F(x, y) = phi(y + x F(x, y))`
//! and solved by fixed-point iteration, which contracts at rate `phi(x)`.
//! The dual metric, distances from the origin, the Busemann–Hausdorff
//! density and the universal radial integral formula are closed forms.

use crate::error::FinslerError;
use crate::minkowski::MinkowskiNorm;
use crate::quadrature::{self, Domain, QuadratureSpec};
use crate::space::FinslerSpace;
use crate::special::unit_ball_volume;
use crate::vecn::{axpy, dot, mat_vec, norm, scale};
use crate::Result;

pub const BOUNDARY_MARGIN: f64 = 1e-12;

/// Which side of the substitution `t = 1 - e^{-r}` a radial integral uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialVariant {
    /// integrate over the norm value `t = phi(x)` on `[0, 1]`
    T,
    /// integrate over the distance `r = -ln(1 - t)` on `[0, inf)`
    R,
}

#[derive(Debug, Clone)]
pub struct FunkSpace {
    norm: MinkowskiNorm,
    volume: f64,
    bh_sigma: f64,
}

impl FunkSpace {
    pub fn new(norm: MinkowskiNorm) -> Result<Self> {
        let volume = Self::bh_volume(&norm)?;
        let bh_sigma = unit_ball_volume(norm.dim() as f64) / volume;
        Ok(Self { norm, volume, bh_sigma })
    }

    /// The Funk metric on the Euclidean unit ball.
    pub fn unit_ball(dim: usize) -> Result<Self> {
        Self::new(MinkowskiNorm::euclidean(dim))
    }

    pub fn dim(&self) -> usize {
        self.norm.dim()
    }

    pub fn norm(&self) -> &MinkowskiNorm {
        &self.norm
    }

    /// Lebesgue volume of the body, by polar integration of
    /// `phi(theta)^(-n)` over the direction sphere.
    pub fn bh_volume(norm: &MinkowskiNorm) -> Result<f64> {
        let n = norm.dim();
        match n {
            2 => {
                let m = 4096;
                let mut sum = 0.0;
                for i in 0..m {
                    let th = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
                    let phi = norm.eval(&[th.cos(), th.sin()]);
                    sum += phi.powi(-2);
                }
                Ok(sum * std::f64::consts::PI / m as f64)
            }
            3 => {
                let mu_nodes = quadrature::gauss_legendre(96);
                let m = 192;
                let mut sum = 0.0;
                for (mu, w) in mu_nodes {
                    let rho = (1.0 - mu * mu).max(0.0).sqrt();
                    let mut ring = 0.0;
                    for j in 0..m {
                        let th = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                        let phi = norm.eval(&[rho * th.cos(), rho * th.sin(), mu]);
                        ring += phi.powi(-3);
                    }
                    sum += w * ring * 2.0 * std::f64::consts::PI / m as f64;
                }
                Ok(sum / 3.0)
            }
            _ => Err(FinslerError::InvalidParams(format!(
                "body volume quadrature supports dimensions 2 and 3, got {n}"
            ))),
        }
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Lebesgue density of the Busemann–Hausdorff measure,
    /// `omega_n / vol(Omega)`.
    pub fn bh_sigma(&self) -> f64 {
        self.bh_sigma
    }

    fn check_point(&self, x: &[f64]) -> Result<f64> {
        let phi = self.norm.eval(x);
        if phi < 1.0 - BOUNDARY_MARGIN {
            Ok(phi)
        } else {
            Err(FinslerError::OutsideDomain)
        }
    }

    /// Metric evaluation by fixed-point iteration of
    /// `F <- phi(y + x F)`, started at `phi(y)`.
    pub fn f_eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        if norm(y) == 0.0 {
            return Ok(0.0);
        }
        let mut f = self.norm.eval(y);
        let mut settled = 0u8;
        for _ in 0..200_000 {
            let next = self.norm.eval(&axpy(y, f, x));
            let done = (next - f).abs() <= 1e-15 * next.abs();
            f = next;
            if done {
                settled += 1;
                // a couple of extra sweeps once the relative change stalls
                if settled >= 3 {
                    return Ok(f);
                }
            }
        }
        Ok(f)
    }

    /// Dual metric `F*(x, eta) = phi*(eta) - <eta, x>`.
    pub fn cometric(&self, x: &[f64], eta: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(self.norm.dual(eta) - dot(eta, x))
    }

    /// Distance from the origin, `-ln(1 - phi(x))`.
    pub fn dist_from_origin(&self, x: &[f64]) -> Result<f64> {
        let phi = self.check_point(x)?;
        Ok(-(1.0 - phi).ln())
    }

    /// Universal radial integral of `f(phi)` against the
    /// Busemann–Hausdorff measure; both variants agree for integrable `f`.
    pub fn radial_integral(
        &self,
        f: &(dyn Fn(f64) -> f64 + Sync),
        variant: RadialVariant,
        spec: &QuadratureSpec,
    ) -> Result<f64> {
        radial_integral(self.dim() as f64, f, variant, spec)
    }

    fn f_eval_raw(&self, x: &[f64], y: &[f64]) -> f64 {
        self.f_eval(x, y).unwrap_or(f64::NAN)
    }

    /// `(F, z, grad phi(z), D)` with `z = y + x F` and
    /// `D = 1 - <grad phi(z), x>`.
    fn implicit_pieces(&self, x: &[f64], y: &[f64]) -> Result<(f64, Vec<f64>, Vec<f64>, f64)> {
        let f = self.f_eval(x, y)?;
        let z = axpy(y, f, x);
        let grad = self.norm.grad(&z)?;
        let d = 1.0 - dot(&grad, x);
        Ok((f, z, grad, d))
    }

    /// Analytic Legendre transform from the implicit equation:
    /// `p_i = F phi_i(z) / D`.
    pub fn legendre(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        if norm(y) == 0.0 {
            return Ok(vec![0.0; self.dim()]);
        }
        let (f, _z, grad, d) = self.implicit_pieces(x, y)?;
        Ok(scale(&grad, f / d))
    }

    /// Analytic fundamental tensor, differentiated from the implicit
    /// equation; reduces to the norm Hessian at the origin.
    pub fn fundamental_tensor(&self, x: &[f64], y: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_point(x)?;
        if norm(y) == 0.0 {
            return Err(FinslerError::ZeroVector);
        }
        let n = self.dim();
        let (f, z, grad, d) = self.implicit_pieces(x, y)?;
        let h2 = self.norm.hessian_half_square(&z)?;
        // Hessian of phi itself at z: (H2 - grad grad^T)/phi(z), phi(z) = F
        let mut hphi = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                hphi[i][j] = (h2[i][j] - grad[i] * grad[j]) / f;
            }
        }
        let w = mat_vec(&hphi, x);
        let c = dot(x, &w);
        let fj: Vec<f64> = grad.iter().map(|phi_j| phi_j / d).collect();
        let mut g = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = (fj[j] * grad[i] + f * hphi[i][j] + f * w[i] * fj[j]) / d
                    + f * grad[i] * (w[j] + c * fj[j]) / (d * d);
            }
        }
        // symmetric analytically; average out roundoff
        for i in 0..n {
            for j in 0..i {
                let m = 0.5 * (g[i][j] + g[j][i]);
                g[i][j] = m;
                g[j][i] = m;
            }
        }
        Ok(g)
    }

    /// Wrap the closed forms into the generic space interface
    /// (Busemann–Hausdorff density).
    pub fn space(&self) -> FinslerSpace {
        let this = self.clone();
        let leg = self.clone();
        let tensor = self.clone();
        let spray = self.clone();
        let dual = self.clone();
        let domain_norm = self.norm.clone();
        let sigma = self.bh_sigma;
        FinslerSpace::builder(self.dim(), move |x, y| this.f_eval_raw(x, y))
            .domain(move |x| domain_norm.eval(x) < 1.0 - BOUNDARY_MARGIN)
            .legendre(move |x, y| leg.legendre(x, y).expect("domain checked"))
            .fundamental_tensor(move |x, y| tensor.fundamental_tensor(x, y).expect("domain checked"))
            .spray(move |x, y| scale(y, 0.5 * spray.f_eval_raw(x, y)))
            .cometric(move |x, eta| dual.cometric(x, eta))
            .density(move |_x| sigma)
            .build()
    }
}

/// Radial integral formula shared by every Funk body of dimension `n`:
/// `n omega_n int_0^1 f(t) t^(n-1) dt`
/// `= n omega_n int_0^inf f(1-e^-r) e^-r (1-e^-r)^(n-1) dr`.
/// `n` is a real parameter so the formula can be exercised generically.
pub fn radial_integral(
    n: f64,
    f: &(dyn Fn(f64) -> f64 + Sync),
    variant: RadialVariant,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let n_omega = n * unit_ball_volume(n);
    match variant {
        RadialVariant::T => quadrature::integrate_radial(
            |t| f(t) * t.powf(n - 1.0),
            |_| n_omega,
            Domain::UnitInterval,
            spec,
        ),
        RadialVariant::R => quadrature::integrate_radial(
            |r| {
                let e = (-r).exp();
                f(1.0 - e) * e * (1.0 - e).powf(n - 1.0)
            },
            |_| n_omega,
            Domain::HalfLine,
            spec,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_ball2() -> FunkSpace {
        FunkSpace::unit_ball(2).unwrap()
    }

    /// closed form on the Euclidean ball, used as a cross-check
    fn euclid_closed_form(x: &[f64], y: &[f64]) -> f64 {
        let b2 = dot(x, x);
        let xy = dot(x, y);
        let a = ((1.0 - b2) * dot(y, y) + xy * xy).sqrt();
        (a + xy) / (1.0 - b2)
    }

    #[test]
    fn f_eval_examples() {
        let sp = unit_ball2();
        // x = 0 reduces to the norm
        assert!((sp.f_eval(&[0.0, 0.0], &[3.0, 4.0]).unwrap() - 5.0).abs() < 1e-13);
        // closed form on the euclidean ball
        assert!((sp.f_eval(&[0.5, 0.0], &[1.0, 0.0]).unwrap() - 2.0).abs() < 1e-12);
        assert!((sp.f_eval(&[0.5, 0.0], &[-1.0, 0.0]).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(sp.f_eval(&[0.2, 0.1], &[0.0, 0.0]).unwrap(), 0.0);
        assert!(sp.f_eval(&[1.0, 0.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn implicit_residual_for_randers_body() {
        let sp = FunkSpace::new(MinkowskiNorm::randers(vec![0.5, 0.0]).unwrap()).unwrap();
        let x = [0.3, 0.0];
        let y = [1.0, 0.0];
        let f = sp.f_eval(&x, &y).unwrap();
        let residual = (sp.norm().eval(&axpy(&y, f, &x)) - f).abs();
        assert!(residual <= 1e-10, "residual {residual}");
    }

    #[test]
    fn closed_form_agreement_on_euclidean_ball() {
        let sp = unit_ball2();
        let cases = [
            ([0.3, 0.2], [1.0, -0.5]),
            ([0.0, 0.7], [0.2, 0.4]),
            ([-0.6, 0.1], [-1.0, 2.0]),
            ([0.9, 0.0], [0.3, 1.0]),
        ];
        for (x, y) in cases {
            let implicit = sp.f_eval(&x, &y).unwrap();
            let closed = euclid_closed_form(&x, &y);
            assert!((implicit - closed).abs() < 1e-9 * closed, "{implicit} vs {closed}");
        }
    }

    #[test]
    fn cometric_examples() {
        let sp = unit_ball2();
        assert!((sp.cometric(&[0.0, 0.0], &[3.0, 4.0]).unwrap() - 5.0).abs() < 1e-13);
        assert!((sp.cometric(&[0.5, 0.0], &[1.0, 0.0]).unwrap() - 0.5).abs() < 1e-13);
        // dr has unit co-length: dr = dphi/(1 - phi)
        for t in [0.2, 0.5, 0.8] {
            let x = [t, 0.0];
            let dr = [1.0 / (1.0 - t), 0.0];
            assert!((sp.cometric(&x, &dr).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn distance_examples() {
        let sp = unit_ball2();
        let t = 1.0 - (-1.0f64).exp();
        assert!((sp.dist_from_origin(&[t, 0.0]).unwrap() - 1.0).abs() < 1e-13);
        assert_eq!(sp.dist_from_origin(&[0.0, 0.0]).unwrap(), 0.0);
        assert!((sp.dist_from_origin(&[0.5, 0.0]).unwrap() - 2.0f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn bh_volume_examples() {
        let eu = MinkowskiNorm::euclidean(2);
        assert!((FunkSpace::bh_volume(&eu).unwrap() - std::f64::consts::PI).abs() < 1e-9);
        let ell = MinkowskiNorm::ellipsoid(vec![vec![4.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(
            (FunkSpace::bh_volume(&ell).unwrap() - std::f64::consts::PI / 2.0).abs() < 1e-9
        );
        let eu3 = MinkowskiNorm::euclidean(3);
        let want = 4.0 * std::f64::consts::PI / 3.0;
        assert!((FunkSpace::bh_volume(&eu3).unwrap() - want).abs() < 1e-8 * want);
    }

    #[test]
    fn bh_volume_randers_against_monte_carlo() {
        let norm = MinkowskiNorm::randers(vec![0.5, 0.0]).unwrap();
        let quad = FunkSpace::bh_volume(&norm).unwrap();
        // deterministic lattice membership count as a crude oracle
        let m = 2000;
        let mut hits = 0usize;
        for i in 0..m {
            for j in 0..m {
                let x = -2.0 + 4.0 * (i as f64 + 0.5) / m as f64;
                let y = -2.0 + 4.0 * (j as f64 + 0.5) / m as f64;
                if norm.eval(&[x, y]) < 1.0 {
                    hits += 1;
                }
            }
        }
        let grid = hits as f64 * 16.0 / (m * m) as f64;
        assert!((quad - grid).abs() < 1e-3 * quad.max(1.0), "{quad} vs {grid}");
        // the randers unit ball is an ellipsoid of volume omega_n / (1-|b|^2)^((n+1)/2)
        let closed = std::f64::consts::PI / 0.75f64.powf(1.5);
        assert!((quad - closed).abs() < 1e-8 * closed);
    }

    #[test]
    fn radial_integral_examples() {
        let sp = unit_ball2();
        let spec = QuadratureSpec::default();
        let mass = sp.radial_integral(&|_t| 1.0, RadialVariant::T, &spec).unwrap();
        assert!((mass - std::f64::consts::PI).abs() < 1e-11);

        // (1-t)^(iota p) with n=2, p=2, iota=0.5
        let f = |t: f64| (1.0 - t).powf(1.0);
        let by_t = sp.radial_integral(&f, RadialVariant::T, &spec).unwrap();
        let by_r = sp.radial_integral(&f, RadialVariant::R, &spec).unwrap();
        let want = std::f64::consts::PI / 3.0;
        assert!((by_t - want).abs() < 1e-11);
        assert!((by_t - by_r).abs() < 1e-9 * by_t);

        let scaled = 0.5f64.powi(2) * by_t;
        assert!((scaled - std::f64::consts::PI / 12.0).abs() < 1e-11);
    }

    #[test]
    fn legendre_satisfies_duality() {
        let sp = unit_ball2();
        for (x, y) in [([0.3, 0.2], [1.0, -0.5]), ([0.0, 0.6], [0.2, 0.4])] {
            let p = sp.legendre(&x, &y).unwrap();
            let f = sp.f_eval(&x, &y).unwrap();
            let fstar = sp.cometric(&x, &p).unwrap();
            assert!((fstar - f).abs() < 1e-10 * f, "{fstar} vs {f}");
        }
    }

    #[test]
    fn fundamental_tensor_euler_identity() {
        let sp = FunkSpace::new(MinkowskiNorm::randers(vec![0.3, -0.1]).unwrap()).unwrap();
        for (x, y) in [([0.2, 0.1], [0.7, -0.4]), ([0.0, 0.5], [1.0, 1.0])] {
            let g = sp.fundamental_tensor(&x, &y).unwrap();
            let f = sp.f_eval(&x, &y).unwrap();
            let gyy = crate::vecn::quadratic_form(&g, &y, &y);
            assert!((gyy - f * f).abs() < 1e-11 * f * f, "{gyy} vs {}", f * f);
            // g y = Legendre(y)
            let p = sp.legendre(&x, &y).unwrap();
            let gy = mat_vec(&g, &y);
            for i in 0..2 {
                assert!((gy[i] - p[i]).abs() < 1e-11 * p[i].abs().max(1.0));
            }
        }
    }

    #[test]
    fn fundamental_tensor_matches_finite_differences() {
        let sp = unit_ball2();
        let x = [0.4, 0.1];
        let y = [0.8, -0.3];
        let g = sp.fundamental_tensor(&x, &y).unwrap();
        let fd = crate::diff::hessian(
            |v| {
                let f = sp.f_eval(&x, v).unwrap();
                0.5 * f * f
            },
            &y,
            1e-4,
        );
        for i in 0..2 {
            for j in 0..2 {
                assert!((g[i][j] - fd[i][j]).abs() < 1e-5, "({i},{j}): {} vs {}", g[i][j], fd[i][j]);
            }
        }
    }
}
