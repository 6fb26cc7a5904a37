//! Point-dependent Finsler metrics and the generic machinery built on them:
//! fundamental tensor, Legendre transform and its inverse, co-metric oracle,
//! geodesic spray and integration, curvature, S-curvature, reversibility.
//!
//! A [`FinslerSpace`] couples a metric evaluation with a domain predicate
//! and optional closed-form hooks. Every operation falls back to finite
//! differences when a hook is absent, so the closed forms of the model
//! spaces can always be cross-validated against the generic path.

use crate::ascent;
use crate::diff;
use crate::error::FinslerError;
use crate::minkowski::MinkowskiNorm;
use crate::vecn::{self, dot, norm, scale};
use crate::Result;

/// Tangent vector anchored at a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVec {
    pub base: Vec<f64>,
    pub components: Vec<f64>,
}

/// Covector anchored at a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct Covec {
    pub base: Vec<f64>,
    pub components: Vec<f64>,
}

type DomainFn = dyn Fn(&[f64]) -> bool + Send + Sync;
type ScalarFn = dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync;
type VectorFn = dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync;
type MatrixFn = dyn Fn(&[f64], &[f64]) -> Vec<Vec<f64>> + Send + Sync;
type CometricFn = dyn Fn(&[f64], &[f64]) -> Result<f64> + Send + Sync;
type DensityFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// A Finsler metric on a domain of `R^n`. Immutable and shareable.
pub struct FinslerSpace {
    dim: usize,
    domain: Box<DomainFn>,
    metric: Box<ScalarFn>,
    legendre_hook: Option<Box<VectorFn>>,
    tensor_hook: Option<Box<MatrixFn>>,
    spray_hook: Option<Box<VectorFn>>,
    cometric_hook: Option<Box<CometricFn>>,
    density: Option<Box<DensityFn>>,
}

pub struct FinslerSpaceBuilder {
    space: FinslerSpace,
}

impl FinslerSpaceBuilder {
    pub fn domain(mut self, f: impl Fn(&[f64]) -> bool + Send + Sync + 'static) -> Self {
        self.space.domain = Box::new(f);
        self
    }
    pub fn legendre(mut self, f: impl Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.space.legendre_hook = Some(Box::new(f));
        self
    }
    pub fn fundamental_tensor(
        mut self,
        f: impl Fn(&[f64], &[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        self.space.tensor_hook = Some(Box::new(f));
        self
    }
    pub fn spray(mut self, f: impl Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.space.spray_hook = Some(Box::new(f));
        self
    }
    pub fn cometric(
        mut self,
        f: impl Fn(&[f64], &[f64]) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        self.space.cometric_hook = Some(Box::new(f));
        self
    }
    pub fn density(mut self, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.space.density = Some(Box::new(f));
        self
    }
    pub fn build(self) -> FinslerSpace {
        self.space
    }
}

impl FinslerSpace {
    pub fn builder(
        dim: usize,
        metric: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    ) -> FinslerSpaceBuilder {
        FinslerSpaceBuilder {
            space: FinslerSpace {
                dim,
                domain: Box::new(|_| true),
                metric: Box::new(metric),
                legendre_hook: None,
                tensor_hook: None,
                spray_hook: None,
                cometric_hook: None,
                density: None,
            },
        }
    }

    /// The flat space of a Minkowski norm, with the Lebesgue density.
    pub fn minkowski(norm: MinkowskiNorm) -> Self {
        let dim = norm.dim();
        let n_metric = norm.clone();
        let n_leg = norm.clone();
        let n_tensor = norm.clone();
        let n_dual = norm;
        Self::builder(dim, move |_x, y| n_metric.eval(y))
            .legendre(move |_x, y| {
                let phi = n_leg.eval(y);
                match n_leg.grad(y) {
                    Ok(g) => scale(&g, phi),
                    Err(_) => vec![0.0; y.len()],
                }
            })
            .fundamental_tensor(move |_x, y| {
                n_tensor.hessian_half_square(y).expect("y != 0 checked by caller")
            })
            .spray(move |_x, y| vec![0.0; y.len()])
            .cometric(move |_x, eta| Ok(n_dual.dual(eta)))
            .density(|_x| 1.0)
            .build()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (self.domain)(x)
    }

    pub fn has_density(&self) -> bool {
        self.density.is_some()
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(FinslerError::OutsideDomain)
        }
    }

    /// Metric evaluation `F(x, y)`; zero vectors map to zero.
    pub fn metric(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        if norm(y) == 0.0 {
            return Ok(0.0);
        }
        Ok((self.metric)(x, y))
    }

    fn metric_raw(&self, x: &[f64], y: &[f64]) -> f64 {
        (self.metric)(x, y)
    }

    /// Fundamental tensor `g_y`: analytic hook, Jacobian of an analytic
    /// Legendre hook, or second differences of `F^2/2` as a last resort.
    pub fn fundamental_tensor(&self, x: &[f64], y: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_point(x)?;
        if norm(y) == 0.0 {
            return Err(FinslerError::ZeroVector);
        }
        if let Some(hook) = &self.tensor_hook {
            return Ok(hook(x, y));
        }
        let h = diff::H1 * diff::step_scale(y);
        if let Some(leg) = &self.legendre_hook {
            // g_ij = d(Legendre_i)/dy^j, differentiated exactly one order
            let n = self.dim;
            let mut g = vec![vec![0.0; n]; n];
            let mut z = y.to_vec();
            for j in 0..n {
                let yj = y[j];
                for i in 0..n {
                    g[i][j] = diff::central1(
                        |t| {
                            z[j] = t;
                            let v = leg(x, &z)[i];
                            z[j] = yj;
                            v
                        },
                        yj,
                        h,
                    );
                }
                z[j] = yj;
            }
            // symmetrize away the finite-difference noise
            for i in 0..n {
                for j in 0..i {
                    let m = 0.5 * (g[i][j] + g[j][i]);
                    g[i][j] = m;
                    g[j][i] = m;
                }
            }
            return Ok(g);
        }
        let h2 = diff::H2 * diff::step_scale(y);
        Ok(diff::hessian(
            |v| {
                let f = self.metric_raw(x, v);
                0.5 * f * f
            },
            y,
            h2,
        ))
    }

    /// Legendre transform: covector with components `1/2 d(F^2)/dy^i`;
    /// maps the zero vector to the zero covector.
    pub fn legendre(&self, x: &[f64], y: &[f64]) -> Result<Covec> {
        self.check_point(x)?;
        if norm(y) == 0.0 {
            return Ok(Covec { base: x.to_vec(), components: vec![0.0; self.dim] });
        }
        if let Some(hook) = &self.legendre_hook {
            return Ok(Covec { base: x.to_vec(), components: hook(x, y) });
        }
        let h = diff::H1 * diff::step_scale(y);
        let comps = diff::gradient(
            |v| {
                let f = self.metric_raw(x, v);
                0.5 * f * f
            },
            y,
            h,
        );
        Ok(Covec { base: x.to_vec(), components: comps })
    }

    /// Inverse Legendre transform by damped Newton iteration, seeded from
    /// the sup-oracle maximizer. The Jacobian of the Legendre map is the
    /// fundamental tensor.
    pub fn legendre_inverse(&self, x: &[f64], xi: &[f64]) -> Result<TangentVec> {
        self.check_point(x)?;
        let xi_norm = norm(xi);
        if xi_norm == 0.0 {
            return Err(FinslerError::ZeroVector);
        }
        let (fstar, dir) = self.cometric_oracle_with_dir(x, xi, 1e-10)?;
        let f_dir = self.metric_raw(x, &dir);
        let mut y = scale(&dir, fstar / f_dir);
        let max_iter = 100;
        let mut res = vecn::sub(xi, &self.legendre(x, &y)?.components);
        for _ in 0..max_iter {
            if norm(&res) <= 1e-12 * xi_norm {
                return Ok(TangentVec { base: x.to_vec(), components: y });
            }
            let g = self.fundamental_tensor(x, &y)?;
            let step = vecn::solve(&g, &res).ok_or(FinslerError::NoConvergence(max_iter))?;
            let mut t = 1.0;
            let res_norm = norm(&res);
            loop {
                let cand = vecn::axpy(&y, t, &step);
                if norm(&cand) > 0.0 {
                    let cand_res = vecn::sub(xi, &self.legendre(x, &cand)?.components);
                    if norm(&cand_res) < res_norm || t < 1e-6 {
                        y = cand;
                        res = cand_res;
                        break;
                    }
                }
                t *= 0.5;
                if t < 1e-12 {
                    return Err(FinslerError::NoConvergence(max_iter));
                }
            }
        }
        if norm(&res) <= 1e-8 * xi_norm {
            Ok(TangentVec { base: x.to_vec(), components: y })
        } else {
            Err(FinslerError::NoConvergence(max_iter))
        }
    }

    /// Lower-bound oracle for the co-metric: coarse direction grid plus
    /// local ascent until the search step falls below `tol`.
    pub fn cometric_oracle(&self, x: &[f64], xi: &[f64], tol: f64) -> Result<f64> {
        Ok(self.cometric_oracle_with_dir(x, xi, tol)?.0)
    }

    pub fn cometric_oracle_with_dir(
        &self,
        x: &[f64],
        xi: &[f64],
        tol: f64,
    ) -> Result<(f64, Vec<f64>)> {
        self.check_point(x)?;
        if norm(xi) == 0.0 {
            return Ok((0.0, vec![0.0; self.dim]));
        }
        let (v, d) = ascent::max_over_sphere(self.dim, ascent::default_grid(self.dim), tol, |y| {
            dot(xi, y) / self.metric_raw(x, y)
        });
        Ok((v, d))
    }

    /// Co-metric `F*(x, xi)`: closed-form hook when present, oracle otherwise.
    pub fn cometric(&self, x: &[f64], xi: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        if norm(xi) == 0.0 {
            return Ok(0.0);
        }
        match &self.cometric_hook {
            Some(hook) => hook(x, xi),
            None => self.cometric_oracle(x, xi, 1e-10),
        }
    }

    /// Geodesic coefficients `G^i(x, y)`, positively 2-homogeneous in `y`.
    pub fn geodesic_coeffs(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        if norm(y) == 0.0 {
            return Err(FinslerError::ZeroVector);
        }
        if let Some(hook) = &self.spray_hook {
            return Ok(hook(x, y));
        }
        self.spray_generic(x, y)
    }

    /// Spray from first x-derivatives of the fundamental tensor:
    /// `G^i = 1/4 g^{il} (2 dg_jl/dx^k - dg_jk/dx^l) y^j y^k`.
    fn spray_generic(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim;
        let hx = diff::H1 * diff::step_scale(x);
        let g = self.fundamental_tensor(x, y)?;
        let mut dg = Vec::with_capacity(n); // dg[k][i][j] = dg_ij/dx^k
        let mut z = x.to_vec();
        for k in 0..n {
            let xk = x[k];
            let mut layer = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..=i {
                    let v = diff::central1(
                        |t| {
                            z[k] = t;
                            let gv = self
                                .fundamental_tensor(&z, y)
                                .map(|m| m[i][j])
                                .unwrap_or(f64::NAN);
                            z[k] = xk;
                            gv
                        },
                        xk,
                        hx,
                    );
                    layer[i][j] = v;
                    layer[j][i] = v;
                }
            }
            z[k] = xk;
            dg.push(layer);
        }
        let mut rhs = vec![0.0; n];
        for l in 0..n {
            let mut s = 0.0;
            for j in 0..n {
                for k in 0..n {
                    s += (2.0 * dg[k][j][l] - dg[l][j][k]) * y[j] * y[k];
                }
            }
            rhs[l] = 0.25 * s;
        }
        vecn::solve(&g, &rhs).ok_or(FinslerError::DegenerateFlag)
    }

    /// Fourth-order Runge–Kutta integration of the geodesic ODE
    /// `x'' + 2 G(x, x') = 0`; returns the states after every step,
    /// starting with the initial one.
    pub fn geodesic_integrate(
        &self,
        x0: &[f64],
        y0: &[f64],
        duration: f64,
        steps: usize,
    ) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
        self.check_point(x0)?;
        if norm(y0) == 0.0 {
            return Err(FinslerError::ZeroVector);
        }
        let h = duration / steps as f64;
        let mut out = Vec::with_capacity(steps + 1);
        let mut x = x0.to_vec();
        let mut v = y0.to_vec();
        out.push((x.clone(), v.clone()));
        let accel = |x: &[f64], v: &[f64], step: usize| -> Result<Vec<f64>> {
            if !self.contains(x) {
                return Err(FinslerError::LeftDomain(step));
            }
            Ok(scale(&self.geodesic_coeffs(x, v)?, -2.0))
        };
        for step in 0..steps {
            let a1 = accel(&x, &v, step)?;
            let x2 = vecn::axpy(&x, 0.5 * h, &v);
            let v2 = vecn::axpy(&v, 0.5 * h, &a1);
            let a2 = accel(&x2, &v2, step)?;
            let x3 = vecn::axpy(&x, 0.5 * h, &v2);
            let v3 = vecn::axpy(&v, 0.5 * h, &a2);
            let a3 = accel(&x3, &v3, step)?;
            let x4 = vecn::axpy(&x, h, &v3);
            let v4 = vecn::axpy(&v, h, &a3);
            let a4 = accel(&x4, &v4, step)?;
            for i in 0..self.dim {
                x[i] += h / 6.0 * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
                v[i] += h / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
            }
            if !self.contains(&x) {
                return Err(FinslerError::LeftDomain(step));
            }
            out.push((x.clone(), v.clone()));
        }
        Ok(out)
    }

    /// Curvature transform `R^i_k(x, y)` from nested central differences of
    /// the geodesic coefficients.
    pub fn riemann_transform(&self, x: &[f64], y: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_point(x)?;
        if norm(y) == 0.0 {
            return Err(FinslerError::ZeroVector);
        }
        let n = self.dim;
        let sx = diff::step_scale(x);
        let sy = diff::step_scale(y);
        let h1x = diff::H1 * sx;
        let h2x = diff::H2 * sx;
        let h1y = diff::H1 * sy;
        let h2y = diff::H2 * sy;

        let spray = |x: &[f64], y: &[f64]| -> Vec<f64> {
            self.geodesic_coeffs(x, y).unwrap_or_else(|_| vec![f64::NAN; n])
        };

        let g0 = spray(x, y);
        let mut xp = x.to_vec();
        let mut yp = y.to_vec();

        // dG^i/dx^k and dG^i/dy^j
        let mut dgdx = vec![vec![0.0; n]; n]; // [k][i]
        let mut dgdy = vec![vec![0.0; n]; n]; // [j][i]
        for k in 0..n {
            let xk = x[k];
            for i in 0..n {
                dgdx[k][i] = diff::central1_rich(
                    |t| {
                        xp[k] = t;
                        let v = spray(&xp, y)[i];
                        xp[k] = xk;
                        v
                    },
                    xk,
                    h1x,
                );
            }
            xp[k] = xk;
        }
        for j in 0..n {
            let yj = y[j];
            for i in 0..n {
                dgdy[j][i] = diff::central1_rich(
                    |t| {
                        yp[j] = t;
                        let v = spray(x, &yp)[i];
                        yp[j] = yj;
                        v
                    },
                    yj,
                    h1y,
                );
            }
            yp[j] = yj;
        }

        // d2G^i/dx^j dy^k
        let mut dxdy = vec![vec![vec![0.0; n]; n]; n]; // [j][k][i]
        for j in 0..n {
            for k in 0..n {
                let (xj, yk) = (x[j], y[k]);
                for i in 0..n {
                    dxdy[j][k][i] = diff::mixed2_rich(
                        |a, b| {
                            xp[j] = a;
                            yp[k] = b;
                            let v = spray(&xp, &yp)[i];
                            xp[j] = xj;
                            yp[k] = yk;
                            v
                        },
                        xj,
                        yk,
                        h2x,
                        h2y,
                    );
                }
                xp[j] = xj;
                yp[k] = yk;
            }
        }

        // d2G^i/dy^j dy^k
        let mut dydy = vec![vec![vec![0.0; n]; n]; n]; // [j][k][i]
        for j in 0..n {
            for k in 0..=j {
                let (yj, yk) = (y[j], y[k]);
                for i in 0..n {
                    let v = if j == k {
                        diff::central2_rich(
                            |t| {
                                yp[j] = t;
                                let v = spray(x, &yp)[i];
                                yp[j] = yj;
                                v
                            },
                            yj,
                            h2y,
                        )
                    } else {
                        diff::mixed2_rich(
                            |a, b| {
                                yp[j] = a;
                                yp[k] = b;
                                let v = spray(x, &yp)[i];
                                yp[j] = yj;
                                yp[k] = yk;
                                v
                            },
                            yj,
                            yk,
                            h2y,
                            h2y,
                        )
                    };
                    dydy[j][k][i] = v;
                    dydy[k][j][i] = v;
                }
                yp[j] = yj;
                yp[k] = yk;
            }
        }

        let mut r = vec![vec![0.0; n]; n];
        for i in 0..n {
            for k in 0..n {
                let mut v = 2.0 * dgdx[k][i];
                for j in 0..n {
                    v -= y[j] * dxdy[j][k][i];
                    v += 2.0 * g0[j] * dydy[j][k][i];
                    v -= dgdy[j][i] * dgdy[k][j];
                }
                r[i][k] = v;
            }
        }
        Ok(r)
    }

    /// Flag curvature of the flag spanned by pole `y` and edge `v`.
    pub fn flag_curvature(&self, x: &[f64], y: &[f64], v: &[f64]) -> Result<f64> {
        let g = self.fundamental_tensor(x, y)?;
        let r = self.riemann_transform(x, y)?;
        let rv = vecn::mat_vec(&r, v);
        let gyy = vecn::quadratic_form(&g, y, y);
        let gvv = vecn::quadratic_form(&g, v, v);
        let gyv = vecn::quadratic_form(&g, y, v);
        let denom = gyy * gvv - gyv * gyv;
        if denom < 1e-12 {
            return Err(FinslerError::DegenerateFlag);
        }
        Ok(vecn::quadratic_form(&g, &rv, v) / denom)
    }

    /// Ricci curvature: sum of flag curvatures over a `g_y`-orthonormal
    /// basis completed from `y` by Gram–Schmidt.
    pub fn ricci(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let g = self.fundamental_tensor(x, y)?;
        let r = self.riemann_transform(x, y)?;
        let f = self.metric(x, y)?;
        let f2 = f * f;
        let basis = gram_schmidt_gy(&g, y, f)?;
        let mut ric = 0.0;
        for e in basis.iter().skip(1) {
            let re = vecn::mat_vec(&r, e);
            ric += vecn::quadratic_form(&g, &re, e) / f2;
        }
        Ok(ric)
    }

    /// S-curvature `dG^i/dy^i - y^i d(ln sigma)/dx^i`; requires the
    /// measure density hook.
    pub fn s_curvature(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        if norm(y) == 0.0 {
            return Err(FinslerError::ZeroVector);
        }
        let density = self.density.as_ref().ok_or(FinslerError::MissingDensity)?;
        let n = self.dim;
        let h1y = diff::H1 * diff::step_scale(y);
        let mut trace = 0.0;
        let mut yp = y.to_vec();
        for i in 0..n {
            let yi = y[i];
            trace += diff::central1(
                |t| {
                    yp[i] = t;
                    let v = self.geodesic_coeffs(x, &yp).map(|g| g[i]).unwrap_or(f64::NAN);
                    yp[i] = yi;
                    v
                },
                yi,
                h1y,
            );
            yp[i] = yi;
        }
        let h1x = diff::H1 * diff::step_scale(x);
        let grad_ln_sigma = diff::gradient(|p| density(p).ln(), x, h1x);
        Ok(trace - dot(y, &grad_ln_sigma))
    }

    /// Reversibility at a point: `sup_y F(x,-y)/F(x,y)` by grid plus
    /// refinement.
    pub fn reversibility_at(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(ascent::sup_ratio(self.dim, |y| {
            self.metric_raw(x, &scale(y, -1.0)) / self.metric_raw(x, y)
        }))
    }
}

/// Gram–Schmidt in the inner product `g`, seeded with `y/F` and completed
/// by the canonical basis.
fn gram_schmidt_gy(g: &[Vec<f64>], y: &[f64], f: f64) -> Result<Vec<Vec<f64>>> {
    let n = y.len();
    let mut basis: Vec<Vec<f64>> = vec![scale(y, 1.0 / f)];
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        for b in &basis {
            let c = vecn::quadratic_form(g, &e, b);
            e = vecn::axpy(&e, -c, b);
        }
        let len2 = vecn::quadratic_form(g, &e, &e);
        if len2 > 1e-12 {
            basis.push(scale(&e, 1.0 / len2.sqrt()));
        }
    }
    if basis.len() != n {
        return Err(FinslerError::DegenerateFlag);
    }
    Ok(basis)
}
