//! Cross-validation of the two model spaces against the generic machinery:
//! curvature constants, S-curvature, geodesics, Legendre round trips,
//! co-metric closed forms vs. the sup-oracle.

use finsler_core::berwald::BerwaldSpace;
use finsler_core::funk::FunkSpace;
use finsler_core::minkowski::MinkowskiNorm;
use finsler_core::quadrature::{integrate, QuadratureSpec};
use finsler_core::space::FinslerSpace;
use finsler_core::vecn::{axpy, dot, norm, scale};

mod util;
use util::SampleRng;

fn sample_ball(rng: &mut SampleRng, dim: usize, rmax: f64) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..dim).map(|_| rng.uniform(-rmax, rmax)).collect();
        let n = norm(&x);
        if n < rmax && n > 1e-3 {
            return x;
        }
    }
}

fn sample_dir(rng: &mut SampleRng, dim: usize) -> Vec<f64> {
    loop {
        let y: Vec<f64> = (0..dim).map(|_| rng.uniform(-1.0, 1.0)).collect();
        if norm(&y) > 1e-2 {
            return y;
        }
    }
}

#[test]
fn berwald_fundamental_tensor_identity_at_origin() {
    let sp = BerwaldSpace::new(2).unwrap().space();
    let g = sp.fundamental_tensor(&[0.0, 0.0], &[0.7, -0.4]).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((g[i][j] - want).abs() < 1e-8, "g[{i}][{j}] = {}", g[i][j]);
        }
    }
}

#[test]
fn funk_fundamental_tensor_identity_at_origin() {
    let sp = FunkSpace::unit_ball(2).unwrap().space();
    let g = sp.fundamental_tensor(&[0.0, 0.0], &[0.4, 0.9]).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((g[i][j] - want).abs() < 1e-10, "g[{i}][{j}] = {}", g[i][j]);
        }
    }
}

#[test]
fn euler_identity_on_model_spaces() {
    let mut rng = SampleRng::new(11);
    let spaces = [BerwaldSpace::new(3).unwrap().space(), FunkSpace::unit_ball(3).unwrap().space()];
    for sp in &spaces {
        for _ in 0..100 {
            let x = sample_ball(&mut rng, 3, 0.85);
            let y = sample_dir(&mut rng, 3);
            let g = sp.fundamental_tensor(&x, &y).unwrap();
            let f = sp.metric(&x, &y).unwrap();
            let gyy = finsler_core::vecn::quadratic_form(&g, &y, &y);
            assert!(
                (gyy - f * f).abs() <= 1e-8 * f * f,
                "euler identity off: {gyy} vs {}",
                f * f
            );
        }
    }
}

#[test]
fn legendre_round_trip_and_duality() {
    let mut rng = SampleRng::new(23);
    let spaces = [
        FinslerSpace::minkowski(MinkowskiNorm::randers(vec![0.4, -0.2]).unwrap()),
        BerwaldSpace::new(2).unwrap().space(),
        FunkSpace::unit_ball(2).unwrap().space(),
    ];
    for sp in &spaces {
        for _ in 0..500 {
            let x = sample_ball(&mut rng, 2, 0.8);
            let y = sample_dir(&mut rng, 2);
            let f = sp.metric(&x, &y).unwrap();
            let p = sp.legendre(&x, &y).unwrap();
            // duality: F*(L(y)) = F(y)
            let fstar = sp.cometric(&x, &p.components).unwrap();
            assert!((fstar - f).abs() <= 1e-7 * f, "duality: {fstar} vs {f}");
            // round trip
            let back = sp.legendre_inverse(&x, &p.components).unwrap();
            for i in 0..2 {
                assert!(
                    (back.components[i] - y[i]).abs() <= 1e-7 * norm(&y).max(1.0),
                    "round trip: {:?} vs {:?}",
                    back.components,
                    y
                );
            }
        }
    }
}

#[test]
fn berwald_legendre_inverse_recovers_grad_r() {
    let b = BerwaldSpace::new(2).unwrap();
    let sp = b.space();
    for t in [0.2, 0.5, 0.8] {
        let x = [t, 0.1];
        let dr = b.dr_covector(&x).unwrap();
        let grad = sp.legendre_inverse(&x, &dr).unwrap();
        let want = b.grad_r(&x).unwrap();
        for i in 0..2 {
            assert!((grad.components[i] - want.components[i]).abs() < 1e-8);
        }
    }
}

#[test]
fn funk_legendre_inverse_of_dr_round_trips() {
    let f = FunkSpace::unit_ball(2).unwrap();
    let sp = f.space();
    let x = [0.5, 0.0];
    // dr = dphi / (1 - phi)
    let dr = [1.0 / 0.5, 0.0];
    let grad = sp.legendre_inverse(&x, &dr).unwrap();
    // gradient of r has unit metric length and points radially
    let len = sp.metric(&x, &grad.components).unwrap();
    assert!((len - 1.0).abs() < 1e-9);
    assert!(grad.components[1].abs() < 1e-9);
    let p = sp.legendre(&x, &grad.components).unwrap();
    for i in 0..2 {
        assert!((p.components[i] - dr[i]).abs() < 1e-8);
    }
}

#[test]
fn cometric_closed_forms_match_oracle() {
    let mut rng = SampleRng::new(37);
    let berwald = BerwaldSpace::new(2).unwrap().space();
    let funk = FunkSpace::unit_ball(2).unwrap().space();
    for sp in [&berwald, &funk] {
        for _ in 0..60 {
            let x = sample_ball(&mut rng, 2, 0.8);
            let xi = sample_dir(&mut rng, 2);
            let closed = sp.cometric(&x, &xi).unwrap();
            let oracle = sp.cometric_oracle(&x, &xi, 1e-10).unwrap();
            assert!(
                (closed - oracle).abs() <= 1e-5 * closed.max(1e-8),
                "closed {closed} vs oracle {oracle}"
            );
        }
    }
}

#[test]
fn berwald_cometric_radial_grid() {
    // unit co-length of dr across the radial grid, via the quartic solver
    let b = BerwaldSpace::new(3).unwrap();
    let sp = b.space();
    for k in 1..=9 {
        let t = 0.1 * k as f64;
        let x = [t, 0.0, 0.0];
        let dr = b.dr_covector(&x).unwrap();
        let v = sp.cometric(&x, &dr).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "|x| = {t}: {v}");
        let or = sp.cometric_oracle(&x, &dr, 1e-8).unwrap();
        assert!((or - 1.0).abs() < 1e-6, "oracle at |x| = {t}: {or}");
    }
}

#[test]
fn geodesic_coefficients_examples() {
    // flat space: zero spray
    let mink = FinslerSpace::minkowski(MinkowskiNorm::euclidean(2));
    assert!(mink.geodesic_coeffs(&[0.2, 0.1], &[1.0, 2.0]).unwrap().iter().all(|v| *v == 0.0));
    // unit-ball space: P = (1 + 0.5)/0.75 = 2 at x = (0.5, 0), y = e1
    let b = BerwaldSpace::new(2).unwrap().space();
    let g = b.geodesic_coeffs(&[0.5, 0.0], &[1.0, 0.0]).unwrap();
    assert!((g[0] - 2.0).abs() < 1e-12 && g[1].abs() < 1e-12);
    // spray is positively 2-homogeneous
    let y = [0.8, -0.6];
    let x = [0.1, 0.4];
    let g1 = b.geodesic_coeffs(&x, &y).unwrap();
    for lambda in [2.0, 0.5] {
        let g2 = b.geodesic_coeffs(&x, &scale(&y, lambda)).unwrap();
        for i in 0..2 {
            assert!((g2[i] - lambda * lambda * g1[i]).abs() < 1e-7 * g1[i].abs().max(1.0));
        }
    }
}

#[test]
fn funk_spray_matches_generic_fallback() {
    // closed-form P = F/2 against the spray assembled from tensor derivatives
    let funk = FunkSpace::unit_ball(2).unwrap();
    let with_hook = funk.space();
    let tensor_only = {
        let f = funk.clone();
        let f2 = funk.clone();
        FinslerSpace::builder(2, move |x, y| f.f_eval(x, y).unwrap_or(f64::NAN))
            .domain(|x| norm(x) < 1.0 - 1e-12)
            .fundamental_tensor(move |x, y| f2.fundamental_tensor(x, y).expect("domain checked"))
            .build()
    };
    for (x, y) in [([0.3, 0.1], [1.0, 0.5]), ([0.0, 0.5], [-0.4, 0.8])] {
        let hook = with_hook.geodesic_coeffs(&x, &y).unwrap();
        let generic = tensor_only.geodesic_coeffs(&x, &y).unwrap();
        for i in 0..2 {
            assert!(
                (hook[i] - generic[i]).abs() < 2e-5 * hook[i].abs().max(1.0),
                "component {i}: {} vs {}",
                hook[i],
                generic[i]
            );
        }
    }
}

#[test]
fn geodesics_of_the_model_spaces() {
    // unit-ball space from the origin: |gamma(t)| = t/(1+t)
    let b = BerwaldSpace::new(2).unwrap().space();
    let y0 = [1.0, 0.0];
    let traj = b.geodesic_integrate(&[0.0, 0.0], &y0, 3.0, 600).unwrap();
    for (k, (x, _v)) in traj.iter().enumerate() {
        let t = 3.0 * k as f64 / 600.0;
        assert!((norm(x) - t / (1.0 + t)).abs() < 1e-8, "t = {t}");
    }
    // funk ball from the origin: |gamma(t)| = 1 - e^-t
    let f = FunkSpace::unit_ball(2).unwrap().space();
    let traj = f.geodesic_integrate(&[0.0, 0.0], &[0.0, 1.0], 3.0, 600).unwrap();
    for (k, (x, _v)) in traj.iter().enumerate() {
        let t = 3.0 * k as f64 / 600.0;
        assert!((norm(x) - (1.0 - (-t).exp())).abs() < 1e-8, "t = {t}");
    }
}

#[test]
fn geodesic_speed_is_conserved() {
    let mut rng = SampleRng::new(99);
    let spaces = [BerwaldSpace::new(2).unwrap().space(), FunkSpace::unit_ball(2).unwrap().space()];
    for sp in &spaces {
        for _ in 0..5 {
            let x0 = sample_ball(&mut rng, 2, 0.3);
            let mut y0 = sample_dir(&mut rng, 2);
            // normalize to metric speed ~0.1 so T = 5 stays inside the ball
            let f = sp.metric(&x0, &y0).unwrap();
            y0 = scale(&y0, 0.1 / f);
            let traj = sp.geodesic_integrate(&x0, &y0, 5.0, 1000).unwrap();
            let speed0 = sp.metric(&x0, &y0).unwrap();
            for (x, v) in traj.iter().skip(1) {
                let s = sp.metric(x, v).unwrap();
                assert!((s - speed0).abs() <= 1e-6 * speed0, "speed drift: {s} vs {speed0}");
            }
        }
    }
}

#[test]
fn berwald_projective_flatness() {
    // trajectories stay on the straight line through x0 along y0
    let sp = BerwaldSpace::new(2).unwrap().space();
    let mut rng = SampleRng::new(7);
    for _ in 0..20 {
        let x0 = sample_ball(&mut rng, 2, 0.5);
        let y0 = sample_dir(&mut rng, 2);
        let traj = sp.geodesic_integrate(&x0, &y0, 2.0, 400).unwrap();
        let dir = scale(&y0, 1.0 / norm(&y0));
        for (x, _) in &traj {
            let d = finsler_core::vecn::sub(x, &x0);
            let off = dot(&d, &[-dir[1], dir[0]]);
            assert!(off.abs() <= 1e-6, "deviation from chord: {off}");
        }
    }
}

#[test]
fn berwald_distance_by_line_integral() {
    // integrating the metric along the segment 0 -> x reproduces |x|/(1-|x|)
    let b = BerwaldSpace::new(3).unwrap();
    let spec = QuadratureSpec::default();
    for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let x = [t / 3.0f64.sqrt(); 3];
        let len = integrate(
            |u| b.b_eval(&scale(&x, u), &x).unwrap(),
            0.0,
            1.0,
            &spec,
        )
        .unwrap();
        let want = b.dist_from_origin(&x).unwrap();
        assert!((len - want).abs() < 1e-8 * want.max(1.0), "|x| = {t}: {len} vs {want}");
    }
}

#[test]
fn funk_distance_by_line_integral() {
    let f = FunkSpace::unit_ball(2).unwrap();
    let spec = QuadratureSpec::default();
    let x = [0.5, 0.3];
    let len = integrate(|u| f.f_eval(&scale(&x, u), &x).unwrap(), 0.0, 1.0, &spec).unwrap();
    let want = f.dist_from_origin(&x).unwrap();
    assert!((len - want).abs() < 1e-8 * want.max(1.0));
}

#[test]
fn flag_curvature_constants() {
    let mut rng = SampleRng::new(5);
    // flatness of the unit-ball metric
    let b = BerwaldSpace::new(2).unwrap().space();
    for _ in 0..50 {
        let x = sample_ball(&mut rng, 2, 0.7);
        let y = sample_dir(&mut rng, 2);
        let v = sample_dir(&mut rng, 2);
        match b.flag_curvature(&x, &y, &v) {
            Ok(k) => assert!(k.abs() <= 1e-4, "flatness violated: {k}"),
            Err(finsler_core::FinslerError::DegenerateFlag) => {}
            Err(e) => panic!("{e}"),
        }
    }
    // constant -1/4 on the funk ball
    let f = FunkSpace::unit_ball(2).unwrap().space();
    for _ in 0..50 {
        let x = sample_ball(&mut rng, 2, 0.7);
        let y = sample_dir(&mut rng, 2);
        let v = sample_dir(&mut rng, 2);
        match f.flag_curvature(&x, &y, &v) {
            Ok(k) => assert!((k + 0.25).abs() <= 1e-3, "funk curvature: {k}"),
            Err(finsler_core::FinslerError::DegenerateFlag) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn funk_randers_body_keeps_constant_curvature() {
    let sp = FunkSpace::new(MinkowskiNorm::randers(vec![0.3, 0.0]).unwrap()).unwrap().space();
    let mut rng = SampleRng::new(13);
    for _ in 0..10 {
        let x = sample_ball(&mut rng, 2, 0.5);
        let y = sample_dir(&mut rng, 2);
        let v = sample_dir(&mut rng, 2);
        match sp.flag_curvature(&x, &y, &v) {
            Ok(k) => assert!((k + 0.25).abs() <= 1e-3, "randers funk curvature: {k}"),
            Err(finsler_core::FinslerError::DegenerateFlag) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn riemann_transform_annihilates_the_pole() {
    // R_y(y) = 0
    let spaces = [BerwaldSpace::new(2).unwrap().space(), FunkSpace::unit_ball(2).unwrap().space()];
    let mut rng = SampleRng::new(3);
    for sp in &spaces {
        for _ in 0..10 {
            let x = sample_ball(&mut rng, 2, 0.6);
            let y = sample_dir(&mut rng, 2);
            let r = sp.riemann_transform(&x, &y).unwrap();
            let ry = finsler_core::vecn::mat_vec(&r, &y);
            let scale_r = r.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-6);
            for c in &ry {
                assert!(c.abs() <= 1e-3 * scale_r * norm(&y), "R_y(y) = {ry:?}");
            }
        }
    }
}

#[test]
fn ricci_constants() {
    let mut rng = SampleRng::new(17);
    let b = BerwaldSpace::new(2).unwrap().space();
    let f = FunkSpace::unit_ball(2).unwrap().space();
    for _ in 0..10 {
        let x = sample_ball(&mut rng, 2, 0.6);
        let y = sample_dir(&mut rng, 2);
        let rb = b.ricci(&x, &y).unwrap();
        assert!(rb.abs() < 1e-3, "flat ricci: {rb}");
        let rf = f.ricci(&x, &y).unwrap();
        // n = 2: Ric = (n-1) K = -1/4
        assert!((rf + 0.25).abs() < 1e-3, "funk ricci: {rf}");
    }
}

#[test]
fn s_curvature_of_the_model_spaces() {
    let mut rng = SampleRng::new(29);
    for n in [2usize, 3] {
        let funk = FunkSpace::unit_ball(n).unwrap();
        let fsp = funk.space();
        for _ in 0..20 {
            let x = sample_ball(&mut rng, n, 0.7);
            let y = sample_dir(&mut rng, n);
            let s = fsp.s_curvature(&x, &y).unwrap();
            let f = fsp.metric(&x, &y).unwrap();
            let want = (n as f64 + 1.0) / 2.0;
            assert!((s / f - want).abs() <= 1e-4, "funk S/F (n={n}): {}", s / f);
        }
        let b = BerwaldSpace::new(n).unwrap();
        let bsp = b.space();
        for _ in 0..20 {
            let x = sample_ball(&mut rng, n, 0.7);
            let grad = b.grad_r(&x).unwrap();
            let s = bsp.s_curvature(&x, &grad.components).unwrap();
            let r = b.dist_from_origin(&x).unwrap();
            let normalized = s * (1.0 + r) / (n as f64 + 1.0);
            assert!((normalized - 1.0).abs() <= 1e-4, "radial S (n={n}): {normalized}");
        }
    }
}

#[test]
fn berwald_s_curvature_window() {
    // 0 < S/B < 2(n+1) across random samples
    let mut rng = SampleRng::new(41);
    for n in [2usize, 3] {
        let sp = BerwaldSpace::new(n).unwrap().space();
        let upper = 2.0 * (n as f64 + 1.0);
        for _ in 0..1000 {
            let x = sample_ball(&mut rng, n, 0.9);
            let y = sample_dir(&mut rng, n);
            let s = sp.s_curvature(&x, &y).unwrap();
            let f = sp.metric(&x, &y).unwrap();
            let ratio = s / f;
            assert!(ratio > 0.0 && ratio < upper, "S/B = {ratio} outside (0, {upper})");
        }
    }
}

#[test]
fn reversibility_of_the_model_spaces() {
    let b = BerwaldSpace::new(2).unwrap().space();
    let lam = b.reversibility_at(&[0.5, 0.0]).unwrap();
    assert!((lam - 9.0).abs() < 1e-7, "unit-ball reversibility: {lam}");

    // euclidean funk ball: lambda = (1 + |x|)/(1 - |x|) exactly
    let f = FunkSpace::unit_ball(2).unwrap().space();
    let lam = f.reversibility_at(&[0.5, 0.0]).unwrap();
    assert!((lam - 3.0).abs() < 1e-7, "funk reversibility: {lam}");

    // general body: containment in the closed-form interval
    let norm_r = MinkowskiNorm::randers(vec![0.2, 0.0]).unwrap();
    let lam_phi = norm_r.reversibility();
    let fr = FunkSpace::new(norm_r.clone()).unwrap();
    let sp = fr.space();
    for x in [[0.3, 0.0], [0.0, 0.4]] {
        let phi = norm_r.eval(&x);
        let lam = sp.reversibility_at(&x).unwrap();
        let lo = (1.0 + phi) / (1.0 - phi);
        let hi = (lam_phi + phi) / (1.0 - phi);
        assert!(
            lam >= lo - 1e-6 && lam <= hi + 1e-6,
            "lambda {lam} outside [{lo}, {hi}] at {x:?}"
        );
    }
}

#[test]
fn berwald_appendix_intermediate_identities() {
    // with p the Legendre image and t = 1 + beta/alpha:
    //   B^2 t^4 - 2 B^2 t^3 - 2 B beta* t + alpha*^2 = 0
    //   B t^3 - 3 B t^2 + 2(1 - b^2) B t + beta* = 0
    let b = BerwaldSpace::new(2).unwrap();
    let mut rng = SampleRng::new(53);
    for _ in 0..200 {
        let x = sample_ball(&mut rng, 2, 0.8);
        let y = sample_dir(&mut rng, 2);
        let bv = b.b_eval(&x, &y).unwrap();
        let (alpha, beta) = b.alpha_beta(&x, &y).unwrap();
        let t = 1.0 + beta / alpha;
        let p = b.legendre(&x, &y).unwrap();
        let b2 = dot(&x, &x);
        let om = 1.0 - b2;
        // alpha-inner products of the covector
        let pxp = dot(&p, &p);
        let pxx = dot(&p, &x);
        let alpha_star2 = om * om * om * (pxp - pxx * pxx);
        let beta_star = om * om * pxx;
        let id1 = bv * bv * t.powi(4) - 2.0 * bv * bv * t.powi(3) - 2.0 * bv * beta_star * t
            + alpha_star2;
        let id2 = bv * t.powi(3) - 3.0 * bv * t * t + 2.0 * (1.0 - b2) * bv * t + beta_star;
        let scale1 = (bv * bv * t.powi(4)).abs().max(alpha_star2.abs());
        let scale2 = (bv * t.powi(3)).abs().max(beta_star.abs()).max(1.0);
        assert!(id1.abs() <= 1e-8 * scale1, "first identity residual {}", id1 / scale1);
        assert!(id2.abs() <= 1e-8 * scale2, "second identity residual {}", id2 / scale2);
    }
}

#[test]
fn quartic_cometric_random_samples() {
    // scaled residual <= 1e-9 and oracle agreement <= 1e-5 over 1000 samples
    let b = BerwaldSpace::new(2).unwrap();
    let sp = b.space();
    let mut rng = SampleRng::new(61);
    let mut multi = 0usize;
    for _ in 0..1000 {
        let x = sample_ball(&mut rng, 2, 0.9);
        let xi = scale(&sample_dir(&mut rng, 2), 10f64.powf(rng.uniform(-1.0, 1.0)));
        let d = b.cometric_quartic_detailed(&x, &xi).unwrap();
        assert!(d.scaled_residual <= 1e-9, "residual {}", d.scaled_residual);
        let oracle = sp.cometric_oracle(&x, &xi, 1e-10).unwrap();
        assert!(
            (d.value - oracle).abs() <= 1e-5 * oracle,
            "quartic {} vs oracle {}",
            d.value,
            oracle
        );
        if d.admissible_count > 1 {
            multi += 1;
        }
    }
    assert_eq!(multi, 0, "admissible quartic root was not unique on {multi} samples");
}

#[test]
fn funk_implicit_residual_across_bodies() {
    let bodies = [
        MinkowskiNorm::euclidean(2),
        MinkowskiNorm::ellipsoid(vec![vec![2.0, 0.3], vec![0.3, 1.0]]).unwrap(),
        MinkowskiNorm::randers(vec![0.4, 0.1]).unwrap(),
    ];
    let mut rng = SampleRng::new(71);
    for body in bodies {
        let f = FunkSpace::new(body.clone()).unwrap();
        for _ in 0..300 {
            let x = loop {
                let c = sample_ball(&mut rng, 2, 0.95);
                if body.eval(&c) < 0.9 {
                    break c;
                }
            };
            let y = sample_dir(&mut rng, 2);
            let val = f.f_eval(&x, &y).unwrap();
            let residual = (body.eval(&axpy(&y, val, &x)) - val).abs();
            assert!(residual <= 1e-10 * val.max(1.0), "residual {residual}");
        }
    }
}
