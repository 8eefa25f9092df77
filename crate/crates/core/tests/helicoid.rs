mod common;

use std::f64::consts::PI;

use cmcsurf::elliptic::{complete_e, complete_k, complete_pi, jacobi_sncndn, Modulus};
use cmcsurf::helicoid::*;
use cmcsurf::kenmotsu::{fd_geometry, fd_geometry_with, FdNode, GridSpec, Stencil, SurfaceGrid};
use cmcsurf::lingeo::{MetricKind, Vec3};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn random_interior(rng: &mut StdRng) -> HelicoidParams {
    let mu = rng.gen_range(0.05..0.95);
    let b = rng.gen_range(1.0 + 1e-3..1.0 / mu - 1e-3);
    HelicoidParams::new(mu, b).unwrap()
}

fn fd_at(f: impl Fn(f64, f64) -> Vec3, u: f64, v: f64, h: f64, reference: Vec3) -> FdNode {
    let grid = GridSpec::new(5, 5, u - 2.0 * h, v - 2.0 * h, h, h);
    let s = SurfaceGrid::sample(grid, f);
    fd_geometry_with(&s, MetricKind::Euclidean, Stencil::Fourth, Some(|_, _| reference))
        .unwrap()
        .nodes[0]
}

#[test]
fn fd_mean_curvature_is_h() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..20 {
        let p = random_interior(&mut rng);
        for &(u, v) in &[(0.3, 0.1), (1.7, -0.6), (-2.4, 2.0)] {
            let frame = eval_frame(&p, u, v).unwrap();
            let node = fd_at(|u, v| eval_frame(&p, u, v).unwrap().x, u, v, 1e-3, frame.n);
            assert!(
                (node.mean - p.h()).abs() < 1e-6,
                "μ = {}, b = {}: H = {}",
                p.mu(),
                p.b(),
                node.mean
            );
            // the analytic Gauss map is the FD normal
            assert!((node.normal - frame.n).norm_e() < 1e-5);
        }
    }
}

#[test]
fn default_orientation_agrees_with_gauss_map() {
    let p = HelicoidParams::new(0.5, 1.3).unwrap();
    let grid = GridSpec::new(3, 3, 0.4 - 1e-3, 0.7 - 1e-3, 1e-3, 1e-3);
    let s = SurfaceGrid::sample(grid, |u, v| eval_frame(&p, u, v).unwrap().x);
    let node = fd_geometry(&s, MetricKind::Euclidean).unwrap().nodes[0];
    let n = gauss_map(&p, 0.4, 0.7).unwrap();
    assert!((node.normal - n).norm_e() < 1e-5);
}

#[test]
fn other_mean_curvatures_and_mirror() {
    for (mu, b, h, mirror) in [(0.5, 1.3, 1.5, false), (0.3, 2.0, -2.0, true), (0.7, 1.2, -0.5, true)] {
        let p = HelicoidParams::with_h(mu, b, h).unwrap().mirrored(mirror);
        let (u, v) = (0.9, 0.2);
        let n = gauss_map(&p, u, v).unwrap();
        let node = fd_at(|u, v| eval_frame(&p, u, v).unwrap().x, u, v, 1e-3, n);
        assert!((node.mean - h).abs() < 1e-6 * h.abs().max(1.0), "{mu} {b} {h}: {}", node.mean);
    }
}

#[test]
fn conformal_parameters() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..10 {
        let p = random_interior(&mut rng);
        let n = gauss_map(&p, 0.5, 0.5).unwrap();
        let node = fd_at(|u, v| eval_frame(&p, u, v).unwrap().x, 0.5, 0.5, 1e-3, n);
        let [e, f, g] = node.first;
        assert!(f.abs() < 1e-8 * e);
        assert!((e - g).abs() < 1e-8 * e);
    }
}

#[test]
fn fd_forms_match_closed_forms() {
    for mirror in [false, true] {
        let p = HelicoidParams::new(0.5, 1.3).unwrap().mirrored(mirror);
        for u in [0.2, 1.1, 2.6] {
            let v = 0.4;
            let frame = eval_frame(&p, u, v).unwrap();
            let node = fd_at(|u, v| eval_frame(&p, u, v).unwrap().x, u, v, 1e-3, frame.n);
            let forms = fundamental_forms(&p, u).scaled;
            for i in 0..3 {
                assert!((node.first[i] - forms.first[i]).abs() < 1e-6, "I[{i}]");
                assert!((node.second[i] - forms.second[i]).abs() < 1e-6, "II[{i}]");
            }
            // third form from the FD Gauss map
            let gauss = fd_at(|u, v| gauss_map(&p, u, v).unwrap(), u, v, 1e-3, frame.n);
            for i in 0..3 {
                assert!((gauss.first[i] - forms.third[i]).abs() < 1e-6, "III[{i}]");
            }
            // companion of −2H x (here −2H = 1, so it is x̌ itself)
            let comp = fd_at(|u, v| eval_frame(&p, u, v).unwrap().x_check, u, v, 1e-3, frame.n);
            for i in 0..3 {
                assert!((comp.first[i] - forms.companion_first[i]).abs() < 1e-6, "Ǐ[{i}]");
                assert!((comp.second[i] - forms.companion_second[i]).abs() < 1e-6, "ǏI[{i}]");
            }
        }
    }
}

#[test]
fn unscaled_forms_are_b_squared_times_scaled() {
    let p = HelicoidParams::new(0.4, 1.9).unwrap();
    let f = fundamental_forms(&p, 0.77);
    let b2 = p.b() * p.b();
    for i in 0..3 {
        assert!((f.unscaled.first[i] - b2 * f.scaled.first[i]).abs() < 1e-14);
        assert!((f.unscaled.third[i] - b2 * f.scaled.third[i]).abs() < 1e-14);
    }
}

#[test]
fn hopf_coefficient_is_constant() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..5 {
        let p = random_interior(&mut rng);
        let b2 = p.b() * p.b();
        let mut samples = Vec::new();
        for i in 0..8 {
            for j in 0..4 {
                let (u, v) = (-2.0 + 0.55 * i as f64, -1.0 + 0.7 * j as f64);
                let n = gauss_map(&p, u, v).unwrap();
                let node = fd_at(|u, v| eval_frame(&p, u, v).unwrap().x, u, v, 1e-3, n);
                samples.push(node.hopf() * 4.0 * p.h() * b2);
            }
        }
        let mean = samples.iter().sum::<Complex64>() / samples.len() as f64;
        let var = samples.iter().map(|q| (q - mean).norm_sqr()).sum::<f64>() / samples.len() as f64;
        assert!(var.sqrt() < 1e-8, "std-dev {}", var.sqrt());
        assert!((mean.norm() - b2 * (1.0 - p.mu() * p.mu())).abs() < 1e-7);
    }
}

#[test]
fn hopf_phase_doubles() {
    let p = HelicoidParams::new(0.5, 1.3).unwrap();
    let theta = hopf_phase(&p).unwrap();
    let (c, s) = (theta.cos(), theta.sin());
    assert!((c * c + s * s - 1.0).abs() < 1e-14);
    let q = fundamental_forms(&p, 0.0).scaled.hopf * (4.0 * p.h());
    let expected = Complex64::from_polar(1.0 - 0.25, 2.0 * theta);
    assert!((q - expected).norm() < 1e-14);
    assert!((-PI / 2.0..=0.0).contains(&theta));
}

#[test]
fn isothermic_rotation_diagonalises_hopf() {
    for (mu, b) in [(0.5, 1.3), (0.2, 3.0), (0.9, 1.05)] {
        let p = HelicoidParams::new(mu, b).unwrap();
        let m = isothermic_coords(&p).unwrap();
        let (c1, c2) = (p.c1(), p.c2());
        // 4H(II − HI) in (u, v): [[c₂−1, 2c₁], [2c₁, 1−c₂]]
        let s = [[c2 - 1.0, 2.0 * c1], [2.0 * c1, 1.0 - c2]];
        // the form in (x, y) with (u, v) = Mᵀ (x, y) is M S Mᵀ
        let mut t = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        t[i][j] += m[i][k] * s[k][l] * m[j][l];
                    }
                }
            }
        }
        assert!(t[0][1].abs() < 1e-14, "cross term {}", t[0][1]);
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        assert!((det - 1.0).abs() < 1e-14);
    }
}

#[test]
fn companion_has_constant_curvature() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..20 {
        let p = random_interior(&mut rng);
        let kk = complete_k(p.modulus()).unwrap();
        for t in [0.15, 0.5, 0.8, 1.3, 1.7] {
            // t avoids odd multiples of K
            let u = t * kk;
            let v = 0.3;
            let n = gauss_map(&p, u, v).unwrap();
            let node = fd_at(|u, v| eval_frame(&p, u, v).unwrap().x_check, u, v, 1e-3, n);
            let expected = 4.0 * p.h() * p.h();
            assert!((node.gauss - expected).abs() < 1e-4, "K = {}", node.gauss);
        }
    }
}

#[test]
fn companion_degenerates_on_the_cuspidal_edge() {
    let p = HelicoidParams::new(0.5, 1.3).unwrap();
    let kk = complete_k(p.modulus()).unwrap();
    let f = fundamental_forms(&p, kk).scaled.companion_first;
    assert!((f[0] * f[2] - f[1] * f[1]).abs() < 1e-14);
}

#[test]
fn quasi_periodicity_of_the_profile() {
    for (mu, b) in [(0.5, 1.3), (0.2, 4.0), (0.8, 1.1)] {
        let p = HelicoidParams::new(mu, b).unwrap();
        let k = Modulus::new(mu).unwrap();
        let kk = complete_k(k).unwrap();
        let ee = complete_e(k).unwrap();
        let pp = complete_pi(p.a() * p.a(), k).unwrap();
        for u in [-1.0, 0.3, 2.2] {
            let f0 = eval_frame(&p, u, 0.0).unwrap();
            let f1 = eval_frame(&p, u + 2.0 * kk, 0.0).unwrap();
            assert!((f1.g - f0.g - 2.0 * p.c1() * pp / p.b()).abs() < 1e-10);
            assert!((f1.n0.0 - f0.n0.0).norm() < 1e-10);
            assert!((f1.n0.1 + f0.n0.1).abs() < 1e-10);
            let (x0, z0) = f0.x0_check.unwrap();
            let (x1, z1) = f1.x0_check.unwrap();
            assert!((x1 + x0).norm() < 1e-10);
            let jump = 2.0 * (p.b() - 1.0 / p.b()) * kk - 2.0 * p.b() * ee;
            assert!((z1 - z0 - jump).abs() < 1e-10);
        }
    }
}

#[test]
fn gamma_ode() {
    let mut rng = StdRng::seed_from_u64(19);
    for _ in 0..20 {
        let p = random_interior(&mut rng);
        assert!(p.c2() > p.c1() * p.c1());
        for i in 0..50 {
            let s = -3.0 + 0.12 * i as f64;
            assert!(gamma_ode_residual(&p, s).abs() < 1e-10);
        }
    }
}

#[test]
fn axial_distance_stays_between_radii() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..10 {
        let p = random_interior(&mut rng);
        let r = radii(&p);
        let kk = complete_k(p.modulus()).unwrap();
        let n = 4000;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        let (mut clo, mut chi) = (f64::INFINITY, 0.0f64);
        for i in 0..=n {
            let u = 4.0 * kk * i as f64 / n as f64;
            let f = eval_frame(&p, u, 0.37).unwrap();
            let d = f.x.x.hypot(f.x.y);
            let dc = f.x_check.x.hypot(f.x_check.y);
            assert!(d >= r.inner - 1e-9 && d <= r.outer + 1e-9);
            assert!(dc >= r.companion_inner - 1e-9 && dc <= r.companion_outer + 1e-9);
            lo = lo.min(d);
            hi = hi.max(d);
            clo = clo.min(dc);
            chi = chi.max(dc);
        }
        assert!((lo - r.inner).abs() < 1e-3 && (hi - r.outer).abs() < 1e-3);
        assert!((clo - r.companion_inner).abs() < 1e-3 && (chi - r.companion_outer).abs() < 1e-3);
    }
}

#[test]
fn zero_inner_radius_puts_the_axis_on_the_surface() {
    let p = HelicoidParams::new(0.25, 2.0).unwrap();
    assert!(classify(&p).zero_inner_radius);
    let kk = complete_k(p.modulus()).unwrap();
    let f = eval_frame(&p, 2.0 * kk, 1.0).unwrap();
    assert!(f.x.x.hypot(f.x.y) < 1e-12);
}

#[test]
fn associated_family_shares_first_form() {
    for mu in [0.2, 0.5, 0.8] {
        let p1 = HelicoidParams::new(mu, 1.1).unwrap();
        let p2 = HelicoidParams::new(mu, 1.0 / mu - 0.05).unwrap();
        for u in [0.0, 0.6, 1.9, 3.3] {
            let (f1, f2) = (fundamental_forms(&p1, u), fundamental_forms(&p2, u));
            for i in 0..3 {
                assert!((f1.scaled.first[i] - f2.scaled.first[i]).abs() < 1e-12);
            }
            assert!((f1.scaled.hopf.norm() - f2.scaled.hopf.norm()).abs() < 1e-12);
        }
    }
}

#[test]
fn nodoid_boundary_is_continuous() {
    let p = HelicoidParams::new(0.5, 2.0).unwrap();
    let kk = complete_k(p.modulus()).unwrap();
    let before = eval_frame(&p, kk - 1e-9, 0.2).unwrap();
    let after = eval_frame(&p, kk + 1e-9, 0.2).unwrap();
    assert!((before.x - after.x).norm_e() < 1e-7);
    assert!((before.n - after.n).norm_e() < 1e-7);
    let at = eval_frame(&p, kk, 0.2).unwrap();
    assert!(at.x0_check.is_none());
    assert!(at.x.is_finite() && at.x_check.is_finite());
    // and matches the interior family as b → 1/μ
    let near = HelicoidParams::new(0.5, 2.0 - 1e-9).unwrap();
    for u in [0.3, 2.5, 5.0] {
        let a = eval_frame(&p, u, 0.2).unwrap();
        let b = eval_frame(&near, u, 0.2).unwrap();
        assert!((a.x - b.x).norm_e() < 1e-3, "u = {u}");
    }
    let n = gauss_map(&p, 2.5, 0.2).unwrap();
    let node = fd_at(|u, v| eval_frame(&p, u, v).unwrap().x, 2.5, 0.2, 1e-3, n);
    assert!((node.mean + 0.5).abs() < 1e-6);
}

#[test]
fn oracle_assembly_at_reference_point() {
    // independent evaluation: sn/cn/dn from the bisection amplitude,
    // E and Π from quadrature of their defining integrals
    let (mu, b, u, v) = (0.5f64, 1.3f64, 0.4f64, 0.7f64);
    let a = mu * b;
    let c1 = ((1.0 - a * a) * (b * b - 1.0)).sqrt();
    let phi = common::am_oracle(u, mu);
    let (sn, cn, dn) = common::sncndn_oracle(u, mu);
    let w = (1.0 - a * a * sn * sn).sqrt();
    let g = c1 / b * common::pi_oracle(phi, a * a, mu);
    let e = common::e_oracle(phi, mu);
    let rot = Complex64::from_polar(1.0, v / b + g);
    let first = rot * (Complex64::new(w, 0.0) + Complex64::new(b * cn * dn, -c1 * sn) * (a / w));
    let third = -a * sn + (b - 1.0 / b) * u - b * e + c1 * v / b;
    let p = HelicoidParams::new(mu, b).unwrap();
    let f = eval_frame(&p, u, v).unwrap();
    assert!((f.x - Vec3::new(first.re, first.im, third)).norm_e() < 1e-12);
    let s = jacobi_sncndn(u, p.modulus());
    assert!((s.sn - sn).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn pitch_radius_round_trip(mu in 0.0f64..=1.0, t in 0.0f64..=1.0, h in prop_oneof![Just(-0.5), -3.0f64..-0.1, 0.1f64..3.0]) {
        let bmax = if mu > 0.0 { (1.0 / mu).min(1e3) } else { 1e3 };
        let b = 1.0 + t * (bmax - 1.0);
        let p = HelicoidParams::with_h(mu, b, h).unwrap();
        let pr = pitch_radius(&p);
        let q = params_from_pitch_radius(pr, h).unwrap();
        prop_assert!((q.mu() - mu).abs() < 1e-12);
        prop_assert!((q.b() - b).abs() < 1e-12 * b);
        prop_assert!((mu_from_pitch_radii(pr, h) - mu).abs() < 1e-12);
        let s = (2.0 * h).abs();
        let ratio = ((pr.lambda * s).powi(2) + (pr.rho * s).powi(2)) / ((pr.lambda * s).powi(2) + (pr.r * s).powi(2));
        prop_assert!((ratio - ((1.0 - mu) / (1.0 + mu)).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn gauss_map_is_unit(mu in 0.0f64..1.0, t in 0.0f64..=1.0, u in -10.0f64..10.0, v in -10.0f64..10.0) {
        let b = 1.0 + t * (1.0 / mu.max(0.01) - 1.0).min(50.0);
        let p = HelicoidParams::new(mu, b.min(1.0 / mu.max(1e-9))).unwrap();
        let f = eval_frame(&p, u, v).unwrap();
        prop_assert!((f.n.norm_e() - 1.0).abs() < 1e-12);
        // −2H x − (n + companion part) is exactly zero by construction
        let back = f.x * (-2.0 * p.h()) - f.n - f.x_check * (-2.0 * p.h());
        prop_assert!(back.norm_e() < 1e-12 * (1.0 + f.x.norm_e()));
    }
}
