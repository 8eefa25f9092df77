//! Helicoidal surfaces of constant mean curvature in Euclidean space.
//!
//! A helicoid is fixed by `(μ, b)` in the parameter region
//! `𝔐 = {0 ≤ μ ≤ 1, 1 ≤ b ≤ 1/μ}` and the mean curvature `H ≠ 0`.
//! With `a = μb`, `c₁ = √((1−a²)(b²−1))` and Jacobi functions taken at
//! `(u, μ)`:
//!
//! ```text
//! −2H x = e^{i(v/b + g(u))}·(n₀(u) + x̌₀(u)) + (0, c₁ v / b)
//! n₀   = (√(1 − a² sn²), −a sn)
//! x̌₀   = (a (b cn dn − i c₁ sn) / √(1 − a² sn²), (b − 1/b) u − b E(am u))
//! g    = (c₁/b) Π(am u, a², μ)
//! ```
//!
//! written in `ℂ × ℝ`. The Gauss map is `n = e^{i(v/b + g)} n₀` and the
//! constant Gaussian curvature companion is `x̌ = x + n/(2H)`.
//!
//! The boundary `b = 1/μ` (nodoids) is evaluated through the limit
//! `g → jπ` on the `j`-th branch of the amplitude, where the rotated
//! quantities are continuous even though `x̌₀` itself has poles.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elliptic::{self, ellint_e_am, ellint_pi, jacobi_am, jacobi_sncndn, EllipticError, Modulus};
use crate::lingeo::{from_complex_real, polar, Vec3};

/// Slack allowed on the constraints of `𝔐` before a parameter is rejected.
pub const PARAM_SLACK: f64 = 1e-12;

/// Relative tolerance for recognising the special boundary cases.
pub const CLASSIFY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum HelicoidError {
    #[error("(μ, b) = ({mu}, {b}) is outside 0 ≤ μ ≤ 1, 1 ≤ b ≤ 1/μ")]
    OutOfDomain { mu: f64, b: f64 },
    #[error("mean curvature must be non-zero and finite (got {0})")]
    ZeroMeanCurvature(f64),
    #[error("the Hopf differential vanishes on the sphere, so its phase is undefined")]
    UndefinedPhase,
    #[error("every direction is principal on the sphere; no isothermic rotation is singled out")]
    DegenerateIsothermic,
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

pub type Result<T> = std::result::Result<T, HelicoidError>;

/// One helicoid: `(μ, b) ∈ 𝔐` and `H ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelicoidParams {
    mu: f64,
    b: f64,
    h: f64,
    mirror: bool,
}

impl HelicoidParams {
    /// Parameters with the default mean curvature `H = −1/2`.
    pub fn new(mu: f64, b: f64) -> Result<Self> {
        Self::with_h(mu, b, -0.5)
    }

    pub fn with_h(mu: f64, b: f64, h: f64) -> Result<Self> {
        if !(h.is_finite() && h != 0.0) {
            return Err(HelicoidError::ZeroMeanCurvature(h));
        }
        let inside = (0.0..=1.0).contains(&mu)
            && b.is_finite()
            && b >= 1.0 - PARAM_SLACK
            && mu * b <= 1.0 + PARAM_SLACK;
        if !inside {
            return Err(HelicoidError::OutOfDomain { mu, b });
        }
        let b = b.max(1.0);
        // snap onto the nodoid boundary when within slack
        let b = if mu > 0.0 && mu * b > 1.0 { 1.0 / mu } else { b };
        Ok(Self {
            mu,
            b,
            h,
            mirror: false,
        })
    }

    /// The variant with `γ = +a sn` in place of `γ = −a sn`.
    pub fn mirrored(mut self, mirror: bool) -> Self {
        self.mirror = mirror;
        self
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn mirror(&self) -> bool {
        self.mirror
    }

    /// `a = μb ∈ [0, 1]`
    pub fn a(&self) -> f64 {
        (self.mu * self.b).min(1.0)
    }

    /// `c₁ = √((1 − a²)(b² − 1))`
    pub fn c1(&self) -> f64 {
        let a = self.a();
        ((1.0 - a * a) * (self.b * self.b - 1.0)).max(0.0).sqrt()
    }

    /// `c₂ = a² + b² − 1`
    pub fn c2(&self) -> f64 {
        let a = self.a();
        a * a + self.b * self.b - 1.0
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.mu).expect("μ is finite")
    }

    fn is_nodoid_boundary(&self) -> bool {
        self.mu > 0.0 && self.a() >= 1.0 - 1e-15
    }

    fn gamma_sign(&self) -> f64 {
        if self.mirror {
            -1.0
        } else {
            1.0
        }
    }
}

/// Position, Gauss map and companion at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceFrame {
    pub u: f64,
    pub v: f64,
    pub x: Vec3,
    pub n: Vec3,
    pub x_check: Vec3,
    /// Phase `g(u)`, normalised by `g(0) = 0`.
    pub g: f64,
    /// `n₀(u)` in `ℂ × ℝ`.
    pub n0: (Complex64, f64),
    /// `x̌₀(u)` in `ℂ × ℝ`; `None` on a pole of the nodoid formula.
    pub x0_check: Option<(Complex64, f64)>,
}

struct Profile {
    /// `e^{ig} n₀` first component
    n_rot: Complex64,
    n_z: f64,
    /// `e^{ig} x̌₀` first component
    xc_rot: Complex64,
    xc_z: f64,
    g: f64,
    n0: (Complex64, f64),
    x0: Option<(Complex64, f64)>,
}

fn profile(p: &HelicoidParams, u: f64) -> Result<Profile> {
    let k = p.modulus();
    let s = jacobi_sncndn(u, k);
    let (a, b, c1) = (p.a(), p.b, p.c1());
    let sign = p.gamma_sign();
    let w = (1.0 - a * a * s.sn * s.sn).max(0.0).sqrt();
    let n_z = -sign * a * s.sn;
    let xc_z = (b - 1.0 / b) * u - b * ellint_e_am(u, k)?;
    let n0 = (Complex64::new(w, 0.0), n_z);

    if p.is_nodoid_boundary() {
        // c₁ = 0 and the phase jumps by π each time am crosses π/2 + jπ,
        // which turns |cn| back into cn.
        let am = jacobi_am(u, k)?;
        let j = (am / PI).round();
        let g = j * PI;
        let x0 = (w > 1e-12).then(|| (Complex64::new(sign * b * s.cn * s.dn / w, 0.0), xc_z));
        return Ok(Profile {
            n_rot: Complex64::new(s.cn, 0.0),
            n_z,
            xc_rot: Complex64::new(sign * b * s.dn, 0.0),
            xc_z,
            g,
            n0,
            x0,
        });
    }

    let g = if c1 == 0.0 {
        0.0
    } else {
        c1 / b * ellint_pi(jacobi_am(u, k)?, a * a, k)?
    };
    let xc0 = Complex64::new(b * s.cn * s.dn, -c1 * s.sn) * (sign * a / w);
    let rot = polar(1.0, g);
    Ok(Profile {
        n_rot: rot * w,
        n_z,
        xc_rot: rot * xc0,
        xc_z,
        g,
        n0,
        x0: Some((xc0, xc_z)),
    })
}

/// Evaluate the helicoid, its Gauss map and its companion at `(u, v)`.
pub fn eval_frame(p: &HelicoidParams, u: f64, v: f64) -> Result<SurfaceFrame> {
    let pr = profile(p, u)?;
    let b = p.b;
    let spin = polar(1.0, v / b);
    let scale = -1.0 / (2.0 * p.h);
    let n = from_complex_real(spin * pr.n_rot, pr.n_z);
    let companion = from_complex_real(spin * pr.xc_rot, pr.xc_z + p.c1() * v / b);
    let x = (n + companion) * scale;
    Ok(SurfaceFrame {
        u,
        v,
        x,
        n,
        x_check: x + n / (2.0 * p.h),
        g: pr.g,
        n0: pr.n0,
        x0_check: pr.x0,
    })
}

/// Gauss map `n(u, v)`.
pub fn gauss_map(p: &HelicoidParams, u: f64, v: f64) -> Result<Vec3> {
    Ok(eval_frame(p, u, v)?.n)
}

/// Coefficients `(E, F, G)` of quadratic forms `E du² + 2F du dv + G dv²`.
pub type Quadratic = [f64; 3];

/// Fundamental forms in one choice of parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormCoefficients {
    pub first: Quadratic,
    pub second: Quadratic,
    pub third: Quadratic,
    /// `q` in `Q = q (du + i dv)²`, with `II − H·I = Re Q`.
    pub hopf: Complex64,
    /// First form of the companion of `−2H x`.
    pub companion_first: Quadratic,
    /// Second form of the companion of `−2H x`.
    pub companion_second: Quadratic,
}

impl FormCoefficients {
    fn scaled(&self, s: f64) -> Self {
        let m = |q: Quadratic| [q[0] * s, q[1] * s, q[2] * s];
        Self {
            first: m(self.first),
            second: m(self.second),
            third: m(self.third),
            hopf: self.hopf * s,
            companion_first: m(self.companion_first),
            companion_second: m(self.companion_second),
        }
    }
}

/// The forms at parameter `u` in two coordinate systems: `scaled` uses the
/// `(u, v)` of [`eval_frame`]; `unscaled` uses `(s, t) = (u/b, v/b)`, so
/// every coefficient there is `b²` times its scaled counterpart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub scaled: FormCoefficients,
    pub unscaled: FormCoefficients,
}

pub fn fundamental_forms(p: &HelicoidParams, u: f64) -> FundamentalForms {
    let s = jacobi_sncndn(u, p.modulus());
    let (a, b, h) = (p.a(), p.b, p.h);
    let (c1, c2) = (p.c1(), p.c2());
    let sign = p.gamma_sign();
    // (b dn + a cn)² for the parametrization of `eval_frame`; the mirror
    // image (a → −a) has (a cn − b dn)²
    let conformal = (b * s.dn + sign * a * s.cn).powi(2) / (4.0 * h * h);
    let first = [conformal, 0.0, conformal];
    let trace_free = [(c2 - 1.0) / (4.0 * h), c1 / (2.0 * h), -(c2 - 1.0) / (4.0 * h)];
    let second = [
        h * first[0] + trace_free[0],
        trace_free[1],
        h * first[2] + trace_free[2],
    ];
    let a2sn2 = a * a * s.sn * s.sn;
    let root = Complex64::new((b * b - 1.0).max(0.0).sqrt(), -(1.0 - a * a).max(0.0).sqrt());
    let cc = -sign * a * b * s.cn * s.dn;
    let unscaled = FormCoefficients {
        first,
        second,
        third: [c2 - a2sn2, c1, 1.0 - a2sn2],
        hopf: root * root / (4.0 * h),
        companion_first: [1.0 - a2sn2, -c1, c2 - a2sn2],
        companion_second: [cc, 0.0, cc],
    };
    FundamentalForms {
        scaled: unscaled.scaled(1.0 / (b * b)),
        unscaled,
    }
}

/// Phase `θ ∈ [−π/2, 0]` fixed by `cos θ = √((b²−1)/(b²(1−μ²)))` and
/// `sin θ = −√((1−μ²b²)/(b²(1−μ²)))`. In the scaled coordinates
/// `4HQ = (1 − μ²) e^{2iθ} (du + i dv)²`.
pub fn hopf_phase(p: &HelicoidParams) -> Result<f64> {
    let (mu, b) = (p.mu, p.b);
    if mu >= 1.0 {
        return Err(HelicoidError::UndefinedPhase);
    }
    let denom = b * b * (1.0 - mu * mu);
    let cos = ((b * b - 1.0) / denom).max(0.0).sqrt();
    let sin = -((1.0 - mu * mu * b * b) / denom).max(0.0).sqrt();
    Ok(libm::atan2(sin, cos))
}

/// Rotation `(x, y) = M (u, v)` after which both `I` and `II` are diagonal.
pub fn isothermic_coords(p: &HelicoidParams) -> Result<[[f64; 2]; 2]> {
    let (a, b) = (p.a(), p.b);
    let d = b * b - a * a;
    if d <= CLASSIFY_TOL {
        return Err(HelicoidError::DegenerateIsothermic);
    }
    let (c, s) = ((1.0 - a * a).max(0.0).sqrt(), (b * b - 1.0).max(0.0).sqrt());
    let r = d.sqrt();
    Ok([[c / r, -s / r], [s / r, c / r]])
}

/// Pitch (translation per radian of rotation), outer and inner radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PitchRadius {
    pub lambda: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub rho: f64,
}

pub fn pitch_radius(p: &HelicoidParams) -> PitchRadius {
    let s = 1.0 / (2.0 * p.h).abs();
    let mb2 = p.mu * p.b * p.b;
    PitchRadius {
        lambda: p.c1() * s,
        r: (1.0 + mb2) * s,
        rho: (1.0 - mb2).abs() * s,
    }
}

/// Inverse of [`pitch_radius`]; `rho` is not needed and is ignored.
pub fn params_from_pitch_radius(pr: PitchRadius, h: f64) -> Result<HelicoidParams> {
    if !(h.is_finite() && h != 0.0) {
        return Err(HelicoidError::ZeroMeanCurvature(h));
    }
    let s = (2.0 * h).abs();
    let (lambda, r) = (pr.lambda * s, pr.r * s);
    let outer = libm::hypot(lambda, r);
    let inner = libm::hypot(lambda, r - 2.0);
    HelicoidParams::with_h((outer - inner) / (outer + inner), 0.5 * (outer + inner), h)
}

/// `μ` from pitch and both radii (normalised to `H = −1/2`).
pub fn mu_from_pitch_radii(pr: PitchRadius, h: f64) -> f64 {
    let s = (2.0 * h).abs();
    let (lambda, r, rho) = (pr.lambda * s, pr.r * s, pr.rho * s);
    let outer = libm::hypot(lambda, r);
    let inner = libm::hypot(lambda, rho);
    (outer - inner) / (outer + inner)
}

/// Tight bounds on the distance to the axis, for `x` and for `x̌`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Radii {
    pub inner: f64,
    pub outer: f64,
    pub companion_inner: f64,
    pub companion_outer: f64,
}

pub fn radii(p: &HelicoidParams) -> Radii {
    let s = 1.0 / (2.0 * p.h).abs();
    let (mu, b) = (p.mu, p.b);
    Radii {
        inner: (1.0 - mu * b * b).abs() * s,
        outer: (1.0 + mu * b * b) * s,
        companion_inner: mu * b * (b * b - 1.0).max(0.0).sqrt() * s,
        companion_outer: mu * b * b * s,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HelicoidKind {
    Cylinder,
    Sphere,
    Unduloid,
    Nodoid,
    GenericHelicoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: HelicoidKind,
    /// `μb² = 1`: the axis lies on the surface.
    pub zero_inner_radius: bool,
}

pub fn classify(p: &HelicoidParams) -> Classification {
    let (mu, b) = (p.mu, p.b);
    let near = |x: f64, y: f64| (x - y).abs() <= CLASSIFY_TOL * (1.0 + y.abs());
    let kind = if mu == 0.0 {
        HelicoidKind::Cylinder
    } else if near(mu, 1.0) && near(b, 1.0) {
        HelicoidKind::Sphere
    } else if near(b, 1.0) {
        HelicoidKind::Unduloid
    } else if near(mu * b, 1.0) {
        HelicoidKind::Nodoid
    } else {
        HelicoidKind::GenericHelicoid
    };
    Classification {
        kind,
        zero_inner_radius: mu > 0.0 && near(mu * b * b, 1.0),
    }
}

/// At `μ = 0` every `b` gives the same cylinder; classification reports
/// the canonical representative `b = 1`.
pub fn canonical(p: &HelicoidParams) -> HelicoidParams {
    if p.mu == 0.0 {
        HelicoidParams { b: 1.0, ..*p }
    } else {
        *p
    }
}

/// `γ(s) = −a sn(b s, μ)` in the unscaled parameter, together with `γ′`.
pub fn gamma(p: &HelicoidParams, s: f64) -> (f64, f64) {
    let (a, b) = (p.a(), p.b);
    let j = jacobi_sncndn(b * s, p.modulus());
    (-a * j.sn, -a * b * j.cn * j.dn)
}

/// Residual of `(γ′)² = γ⁴ − (c₂ + 1) γ² + (c₂ − c₁²)` at `s`.
pub fn gamma_ode_residual(p: &HelicoidParams, s: f64) -> f64 {
    let (g, dg) = gamma(p, s);
    let (c1, c2) = (p.c1(), p.c2());
    dg * dg - (g.powi(4) - (c2 + 1.0) * g * g + (c2 - c1 * c1))
}

/// The quarter period `K(μ)`; divergent (an error) on the sphere.
pub fn quarter_period(p: &HelicoidParams) -> Result<f64> {
    Ok(elliptic::complete_k(p.modulus())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_is_enforced() {
        assert!(HelicoidParams::new(0.5, 2.5).is_err());
        assert!(HelicoidParams::new(0.5, 0.9).is_err());
        assert!(HelicoidParams::new(-0.1, 1.2).is_err());
        assert!(HelicoidParams::new(0.0, 1e6).is_ok());
        assert!(HelicoidParams::with_h(0.5, 1.5, 0.0).is_err());
        let p = HelicoidParams::new(0.5, 1.3).unwrap();
        assert_eq!(p.a(), 0.65);
        assert!((p.c1() - ((1.0 - 0.65f64.powi(2)) * (1.69 - 1.0)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cylinder_case() {
        let p = HelicoidParams::new(0.0, 1.7).unwrap();
        for &(u, v) in &[(0.0, 0.0), (1.3, -0.4), (-2.0, 5.0)] {
            let f = eval_frame(&p, u, v).unwrap();
            assert!((f.x.x.hypot(f.x.y) - 1.0).abs() < 1e-14);
            assert!(f.n.z.abs() < 1e-15);
            let phase = (v + p.c1() * u) / p.b();
            assert!((f.n.x - phase.cos()).abs() < 1e-13);
            assert!((f.n.y - phase.sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn sphere_has_radius_two() {
        let p = HelicoidParams::new(1.0, 1.0).unwrap();
        for &(u, v) in &[(0.0, 0.0), (0.7, 1.1), (-2.5, 3.0), (6.0, -1.0)] {
            let f = eval_frame(&p, u, v).unwrap();
            assert!((f.x.norm_e() - 2.0).abs() < 1e-13, "{:?}", f.x);
        }
    }

    #[test]
    fn gauss_map_z_is_minus_a_sn() {
        let p = HelicoidParams::new(0.5, 1.3).unwrap();
        for v in [0.0, 1.0, 2.0] {
            let n = gauss_map(&p, 0.8, v).unwrap();
            let sn = jacobi_sncndn(0.8, p.modulus()).sn;
            assert!((n.z + 0.65 * sn).abs() < 1e-15);
            assert!((n.norm_e() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn phase_examples() {
        let p = HelicoidParams::new(0.5, 1.0).unwrap();
        assert!((hopf_phase(&p).unwrap() + PI / 2.0).abs() < 1e-15);
        let p = HelicoidParams::new(0.5, 2.0).unwrap();
        assert_eq!(hopf_phase(&p).unwrap(), 0.0);
        assert!(hopf_phase(&HelicoidParams::new(1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn isothermic_examples() {
        let m = isothermic_coords(&HelicoidParams::new(0.5, 1.0).unwrap()).unwrap();
        assert_eq!(m, [[1.0, 0.0], [0.0, 1.0]]);
        let m = isothermic_coords(&HelicoidParams::new(0.5, 2.0).unwrap()).unwrap();
        assert_eq!(m, [[0.0, -1.0], [1.0, 0.0]]);
        assert!(isothermic_coords(&HelicoidParams::new(1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn pitch_radius_examples() {
        let pr = pitch_radius(&HelicoidParams::new(0.0, 1.0).unwrap());
        assert_eq!((pr.lambda, pr.r), (0.0, 1.0));
        let pr = pitch_radius(&HelicoidParams::new(1.0, 1.0).unwrap());
        assert_eq!((pr.lambda, pr.r), (0.0, 2.0));
    }

    #[test]
    fn radii_examples() {
        let r = radii(&HelicoidParams::new(0.5, 2f64.sqrt()).unwrap());
        assert!(r.inner.abs() < 1e-15);
        assert!((r.companion_inner - 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((r.companion_outer - 1.0).abs() < 1e-15);
        assert_eq!(radii(&HelicoidParams::new(0.3, 1.0).unwrap()).companion_inner, 0.0);
    }

    #[test]
    fn classify_examples() {
        let c = |mu, b| classify(&HelicoidParams::new(mu, b).unwrap());
        assert_eq!(c(0.0, 1.7).kind, HelicoidKind::Cylinder);
        assert_eq!(c(1.0, 1.0).kind, HelicoidKind::Sphere);
        assert_eq!(c(0.5, 1.0).kind, HelicoidKind::Unduloid);
        assert_eq!(c(0.25, 4.0).kind, HelicoidKind::Nodoid);
        assert_eq!(c(0.5, 1.2).kind, HelicoidKind::GenericHelicoid);
        assert!(!c(0.5, 1.2).zero_inner_radius);
        let z = c(0.25, 2.0);
        assert_eq!(z.kind, HelicoidKind::GenericHelicoid);
        assert!(z.zero_inner_radius);
        assert_eq!(canonical(&HelicoidParams::new(0.0, 1.7).unwrap()).b(), 1.0);
    }

    #[test]
    fn forms_at_origin() {
        let p = HelicoidParams::new(0.5, 1.3).unwrap();
        let f = fundamental_forms(&p, 0.0);
        let (a, b) = (p.a(), p.b());
        assert!((4.0 * p.h() * p.h() * f.unscaled.first[0] - (a + b).powi(2)).abs() < 1e-15);
        let m = fundamental_forms(&p.mirrored(true), 0.0);
        assert!((4.0 * p.h() * p.h() * m.unscaled.first[0] - (a - b).powi(2)).abs() < 1e-15);
        let mag = (4.0 * p.h() * f.unscaled.hopf).norm();
        assert!((mag - b * b * (1.0 - 0.25)).abs() < 1e-14);
        assert!(((4.0 * p.h() * f.scaled.hopf).norm() - 0.75).abs() < 1e-14);
    }
}
