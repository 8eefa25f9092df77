//! Independent numerical oracles shared by the integration tests.
//!
//! Nothing here calls into the library's elliptic code: integrals come from
//! adaptive Gauss–Legendre quadrature and inverse functions from bisection.

#![allow(dead_code)]

use std::f64::consts::PI;

const GL_ORDER: usize = 20;

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl_panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

fn adapt(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    rule: &(Vec<f64>, Vec<f64>),
) -> f64 {
    let m = 0.5 * (a + b);
    let left = gl_panel(f, a, m, rule);
    let right = gl_panel(f, m, b, rule);
    let split = left + right;
    if (split - whole).abs() <= tol || depth == 0 {
        return split;
    }
    adapt(f, a, m, left, 0.5 * tol, depth - 1, rule) + adapt(f, m, b, right, 0.5 * tol, depth - 1, rule)
}

/// Adaptive composite Gauss–Legendre quadrature; a panel is accepted when
/// the one-level refinement changes it by less than its share of `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let rule = gauss_legendre(GL_ORDER);
    let whole = gl_panel(&f, a, b, &rule);
    adapt(&f, a, b, whole, tol, 40, &rule)
}

pub fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    integrate(f, a, b, 1e-14)
}

/// F(φ, k) from its defining integral.
pub fn f_oracle(phi: f64, k: f64) -> f64 {
    quad(|t| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, phi)
}

pub fn e_oracle(phi: f64, k: f64) -> f64 {
    quad(|t| (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, phi)
}

pub fn pi_oracle(phi: f64, n: f64, k: f64) -> f64 {
    quad(
        |t| {
            let s2 = t.sin().powi(2);
            1.0 / ((1.0 - n * s2) * (1.0 - k * k * s2).sqrt())
        },
        0.0,
        phi,
    )
}

pub fn k_oracle(k: f64) -> f64 {
    f_oracle(PI / 2.0, k)
}

pub fn ecomp_oracle(k: f64) -> f64 {
    e_oracle(PI / 2.0, k)
}

pub fn picomp_oracle(n: f64, k: f64) -> f64 {
    pi_oracle(PI / 2.0, n, k)
}

/// Root of a monotone function on [lo, hi] by bisection.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * (1.0 + lo.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// am(u, k) for 0 ≤ k < 1, by inverting the quadrature F.
pub fn am_oracle(u: f64, k: f64) -> f64 {
    // F(φ) ≥ φ and F(φ) ≤ φ/k', so am(u) ∈ [u k', u]
    let kp = (1.0 - k * k).sqrt();
    let (lo, hi) = if u >= 0.0 { (u * kp, u) } else { (u, u * kp) };
    if lo == hi {
        return lo;
    }
    bisect(|phi| f_oracle(phi, k) - u, lo, hi)
}

/// Standard-regime (sn, cn, dn) assembled from the quadrature amplitude.
pub fn sncndn_oracle(u: f64, k: f64) -> (f64, f64, f64) {
    let phi = am_oracle(u, k);
    let (s, c) = phi.sin_cos();
    (s, c, (1.0 - k * k * s * s).sqrt())
}
