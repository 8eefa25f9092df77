//! Rotational surfaces of constant mean curvature `H = −1/2` in Minkowski
//! space `(x, y, z)` with `⟨·,·⟩ = dx² + dy² − dz²`.
//!
//! Seven kinds, by causal character of the surface and of the rotation axis.
//! Each is written as `x = n + x̌` where `n` is a harmonic Gauss map built from
//! one of three profile families:
//!
//! * `σ = cs(u, k)`, `γ = ns(u, k)` with `γ² − σ² = 1` (any real `k²`),
//! * `s = k sn(u, k)`, `c = ±dn(u, k)` with `s² + c² = 1` (`k ≥ 0`),
//! * `φ = u` or `φ = sin(ku)/k`, with `σ = (φ − 1/φ)/2`, `γ = (φ + 1/φ)/2`.
//!
//! Profile poles (zeros of `sn`, `dn` or `φ`) are reported as
//! [`DelaunayError::Pole`] inside a window of half-width [`POLE_WINDOW`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elliptic::{complete_k, ellint_e_am, jacobi_sncndn, EllipticError, Modulus};
use crate::kenmotsu::Target;
use crate::lingeo::{
    from_complex_real, from_real_paracomplex, inner, polar, DomainSignature, MetricKind,
    Paracomplex, Vec3,
};

/// Half-width of the excluded window around a profile pole.
pub const POLE_WINDOW: f64 = 1e-6;

/// `|⟨x_v, x_v⟩|` below this marks a conical singularity.
pub const SINGULAR_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum DelaunayError {
    #[error("{kind} does not accept k² = {k2}")]
    Modulus { kind: DelaunayKind, k2: f64 },
    #[error("profile pole at u = {u} (within {POLE_WINDOW} of a zero of the denominator)")]
    Pole { u: f64 },
    #[error("[{from}, {to}] crosses the pole at u = {pole}; shift the interval by a multiple of the pole spacing {spacing}")]
    PoleCrossing {
        from: f64,
        to: f64,
        pole: f64,
        spacing: f64,
    },
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

pub type Result<T> = std::result::Result<T, DelaunayError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DelaunayKind {
    SpacelikeTimelikeAxis,
    TimelikeTimelikeAxis,
    SpacelikeSpacelikeAxis,
    TimelikeSpacelikeAxis1,
    TimelikeSpacelikeAxis2,
    SpacelikeLightlikeAxis,
    TimelikeLightlikeAxis,
}

impl DelaunayKind {
    pub const ALL: [DelaunayKind; 7] = [
        DelaunayKind::SpacelikeTimelikeAxis,
        DelaunayKind::TimelikeTimelikeAxis,
        DelaunayKind::SpacelikeSpacelikeAxis,
        DelaunayKind::TimelikeSpacelikeAxis1,
        DelaunayKind::TimelikeSpacelikeAxis2,
        DelaunayKind::SpacelikeLightlikeAxis,
        DelaunayKind::TimelikeLightlikeAxis,
    ];

    /// Kebab-case name, as used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            DelaunayKind::SpacelikeTimelikeAxis => "spacelike-timelike",
            DelaunayKind::TimelikeTimelikeAxis => "timelike-timelike",
            DelaunayKind::SpacelikeSpacelikeAxis => "spacelike-spacelike",
            DelaunayKind::TimelikeSpacelikeAxis1 => "timelike-spacelike-1",
            DelaunayKind::TimelikeSpacelikeAxis2 => "timelike-spacelike-2",
            DelaunayKind::SpacelikeLightlikeAxis => "spacelike-lightlike",
            DelaunayKind::TimelikeLightlikeAxis => "timelike-lightlike",
        }
    }

    pub fn from_name(s: &str) -> Option<DelaunayKind> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn is_spacelike(self) -> bool {
        matches!(
            self,
            DelaunayKind::SpacelikeTimelikeAxis
                | DelaunayKind::SpacelikeSpacelikeAxis
                | DelaunayKind::SpacelikeLightlikeAxis
        )
    }

    /// Conformal class of the parameter domain.
    pub fn signature(self) -> DomainSignature {
        if self.is_spacelike() {
            DomainSignature::Riemannian
        } else {
            DomainSignature::Lorentzian
        }
    }

    /// Where the Gauss map lives: `H²` for spacelike kinds, `S²₁` otherwise.
    pub fn target(self) -> Target {
        if self.is_spacelike() {
            Target::H2
        } else {
            Target::S21
        }
    }

    pub fn family(self) -> Family {
        match self {
            DelaunayKind::TimelikeSpacelikeAxis2 => Family::Circular,
            DelaunayKind::SpacelikeLightlikeAxis | DelaunayKind::TimelikeLightlikeAxis => {
                Family::Lightlike
            }
            _ => Family::Hyperbolic,
        }
    }

    /// Direction of the rotation axis.
    pub fn axis(self) -> Vec3 {
        match self {
            DelaunayKind::SpacelikeTimelikeAxis | DelaunayKind::TimelikeTimelikeAxis => Vec3::E3,
            DelaunayKind::SpacelikeLightlikeAxis | DelaunayKind::TimelikeLightlikeAxis => {
                Vec3::new(1.0, 0.0, 1.0)
            }
            _ => Vec3::E1,
        }
    }
}

impl fmt::Display for DelaunayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which harmonic-map equation the profile solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `(σ′γ − σγ′)′ − σγ = 0`
    Hyperbolic,
    /// `(s′c − sc′)′ + sc = 0`
    Circular,
    /// `(σ′γ − σγ′)′ + (σ − γ)² = 0`
    Lightlike,
}

/// Solution used for the lightlike-axis kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LightlikeVariant {
    /// `φ = u`
    PhiLinear,
    /// `φ = sin(ku)/k` (`sinh(κu)/κ` when `k² = −κ² < 0`)
    #[default]
    PhiSinusoidal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DelaunayProfile {
    kind: DelaunayKind,
    k2: f64,
    variant: LightlikeVariant,
    negative_c: bool,
}

/// Profile values with analytic derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileValues {
    /// `γ² − σ² = 1`
    Hyperbolic {
        sigma: f64,
        gamma: f64,
        dsigma: f64,
        dgamma: f64,
    },
    /// `s² + c² = 1`
    Circular { s: f64, c: f64, ds: f64, dc: f64 },
    /// `φ` and the `(σ, γ)` built from it
    Lightlike {
        phi: f64,
        dphi: f64,
        sigma: f64,
        gamma: f64,
        dsigma: f64,
        dgamma: f64,
    },
}

impl ProfileValues {
    /// `(σ, γ, σ′, γ′)`, or `(s, c, s′, c′)` for the circular family.
    pub fn pair(&self) -> [f64; 4] {
        match *self {
            ProfileValues::Hyperbolic {
                sigma,
                gamma,
                dsigma,
                dgamma,
            }
            | ProfileValues::Lightlike {
                sigma,
                gamma,
                dsigma,
                dgamma,
                ..
            } => [sigma, gamma, dsigma, dgamma],
            ProfileValues::Circular { s, c, ds, dc } => [s, c, ds, dc],
        }
    }
}

impl DelaunayProfile {
    /// Checks that `k²` is allowed for the kind: any finite value for the
    /// `cs/ns` family, `k² ≥ 0` for `(k sn, dn)`, and `k² ≠ 0` for the
    /// sinusoidal lightlike solution.
    pub fn new(kind: DelaunayKind, k2: f64) -> Result<Self> {
        let p = Self {
            kind,
            k2,
            variant: LightlikeVariant::default(),
            negative_c: false,
        };
        p.check()?;
        Ok(p)
    }

    pub fn with_variant(mut self, variant: LightlikeVariant) -> Result<Self> {
        self.variant = variant;
        self.check()?;
        Ok(self)
    }

    /// Use `c = −dn` instead of `c = dn` (circular family only).
    pub fn with_negative_c(mut self, negative: bool) -> Self {
        self.negative_c = negative;
        self
    }

    fn check(&self) -> Result<()> {
        let bad = !self.k2.is_finite()
            || match self.kind.family() {
                Family::Hyperbolic => false,
                Family::Circular => self.k2 < 0.0,
                Family::Lightlike => {
                    self.variant == LightlikeVariant::PhiSinusoidal && self.k2 == 0.0
                }
            };
        if bad {
            return Err(DelaunayError::Modulus {
                kind: self.kind,
                k2: self.k2,
            });
        }
        Ok(())
    }

    pub fn kind(&self) -> DelaunayKind {
        self.kind
    }

    pub fn k2(&self) -> f64 {
        self.k2
    }

    pub fn variant(&self) -> LightlikeVariant {
        self.variant
    }

    pub fn negative_c(&self) -> bool {
        self.negative_c
    }

    fn modulus(&self) -> Result<Modulus> {
        Ok(Modulus::from_k2(self.k2)?)
    }

    /// Spacing of the profile poles in `u`, or `None` if there is at most one.
    pub fn pole_spacing(&self) -> Result<Option<f64>> {
        let k2 = self.k2;
        Ok(match self.kind.family() {
            // zeros of sn(u, k)
            Family::Hyperbolic => Some(sn_zero_spacing(k2)?),
            // zeros of dn(u, k) exist only for k > 1: dn(u, k) = cn(ku, 1/k)
            Family::Circular if k2 > 1.0 => {
                Some(2.0 * complete_k(Modulus::from_k2(1.0 / k2)?)? / k2.sqrt())
            }
            Family::Circular => None,
            Family::Lightlike => match self.variant {
                LightlikeVariant::PhiSinusoidal if k2 > 0.0 => {
                    Some(std::f64::consts::PI / k2.sqrt())
                }
                _ => None,
            },
        })
    }

    /// Profile values and derivatives at `u`.
    pub fn values(&self, u: f64) -> Result<ProfileValues> {
        match self.kind.family() {
            Family::Hyperbolic => {
                let j = jacobi_sncndn(u, self.modulus()?);
                if j.sn.abs() < POLE_WINDOW {
                    return Err(DelaunayError::Pole { u });
                }
                let sn2 = j.sn * j.sn;
                Ok(ProfileValues::Hyperbolic {
                    sigma: j.cn / j.sn,
                    gamma: 1.0 / j.sn,
                    dsigma: -j.dn / sn2,
                    dgamma: -j.cn * j.dn / sn2,
                })
            }
            Family::Circular => {
                let j = jacobi_sncndn(u, self.modulus()?);
                let k = self.k2.sqrt();
                let sign = if self.negative_c { -1.0 } else { 1.0 };
                Ok(ProfileValues::Circular {
                    s: k * j.sn,
                    c: sign * j.dn,
                    ds: k * j.cn * j.dn,
                    dc: -sign * self.k2 * j.sn * j.cn,
                })
            }
            Family::Lightlike => {
                let (phi, dphi) = self.phi(u);
                if phi.abs() < POLE_WINDOW {
                    return Err(DelaunayError::Pole { u });
                }
                let inv2 = 1.0 / (phi * phi);
                Ok(ProfileValues::Lightlike {
                    phi,
                    dphi,
                    sigma: 0.5 * (phi - 1.0 / phi),
                    gamma: 0.5 * (phi + 1.0 / phi),
                    dsigma: 0.5 * dphi * (1.0 + inv2),
                    dgamma: 0.5 * dphi * (1.0 - inv2),
                })
            }
        }
    }

    fn phi(&self, u: f64) -> (f64, f64) {
        match self.variant {
            LightlikeVariant::PhiLinear => (u, 1.0),
            LightlikeVariant::PhiSinusoidal if self.k2 > 0.0 => {
                let k = self.k2.sqrt();
                (libm::sin(k * u) / k, libm::cos(k * u))
            }
            LightlikeVariant::PhiSinusoidal => {
                let k = (-self.k2).sqrt();
                (libm::sinh(k * u) / k, libm::cosh(k * u))
            }
        }
    }
}

fn sn_zero_spacing(k2: f64) -> Result<f64> {
    Ok(if k2 > 1.0 {
        2.0 * complete_k(Modulus::from_k2(1.0 / k2)?)? / k2.sqrt()
    } else if k2 < 0.0 {
        let alpha = (1.0 - k2).sqrt();
        2.0 * complete_k(Modulus::from_k2(-k2 / (1.0 - k2))?)? / alpha
    } else if k2 < 1.0 {
        2.0 * complete_k(Modulus::from_k2(k2)?)?
    } else {
        // sn(u, 1) = tanh u has a single zero
        f64::INFINITY
    })
}

// ---------------------------------------------------------------------------
// Harmonic-map residuals.

/// Centred difference of the bracket `B = a′b − ab′` minus or plus the
/// source term, for the equation of `family`, at every `u` in `us`.
/// `f(u)` returns `(a, b, a′, b′)`. Nodes where `f` fails are skipped.
pub fn residual_of<F>(family: Family, f: F, us: &[f64], h: f64) -> f64
where
    F: Fn(f64) -> Option<[f64; 4]>,
{
    let bracket = |u: f64| f(u).map(|[a, b, da, db]| da * b - a * db);
    let mut worst: f64 = 0.0;
    for &u in us {
        let (Some(plus), Some(minus), Some([a, b, _, _])) = (bracket(u + h), bracket(u - h), f(u))
        else {
            continue;
        };
        let db = (plus - minus) / (2.0 * h);
        let r = match family {
            Family::Hyperbolic => db - a * b,
            Family::Circular => db + a * b,
            Family::Lightlike => db + (a - b).powi(2),
        };
        worst = worst.max(r.abs());
    }
    worst
}

/// Largest harmonic-map residual of the profile over `us` with step `h`.
pub fn profile_residual(p: &DelaunayProfile, us: &[f64], h: f64) -> f64 {
    residual_of(p.kind.family(), |u| p.values(u).ok().map(|v| v.pair()), us, h)
}

/// `φφ″ − φ′² + 1` by centred differences.
pub fn phi_residual(p: &DelaunayProfile, us: &[f64], h: f64) -> f64 {
    us.iter()
        .map(|&u| {
            let (f, df) = p.phi(u);
            let d2 = (p.phi(u + h).0 - 2.0 * f + p.phi(u - h).0) / (h * h);
            (f * d2 - df * df + 1.0).abs()
        })
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Closed-form antiderivatives.

/// `cn dn / sn + E(am u)` in the standard regime.
fn z_term(u: f64, k2: f64) -> Result<f64> {
    let m = Modulus::from_k2(k2)?;
    let j = jacobi_sncndn(u, m);
    if j.sn.abs() < POLE_WINDOW {
        return Err(DelaunayError::Pole { u });
    }
    Ok(j.cn * j.dn / j.sn + ellint_e_am(u, m)?)
}

/// Antiderivative of `σ² = cs²(u, k)`, for any real `k²`.
pub fn int_sigma2(k2: f64, u: f64) -> Result<f64> {
    if k2 > 1.0 {
        let k = k2.sqrt();
        Ok((k2 - 1.0) * u - k * z_term(k * u, 1.0 / k2)?)
    } else if k2 < 0.0 {
        let alpha = (1.0 - k2).sqrt();
        Ok(-alpha * z_term(alpha * u, -k2 / (1.0 - k2))?)
    } else {
        Ok(-z_term(u, k2)?)
    }
}

/// Antiderivative of `γ² = ns²(u, k)`; equal to `u + ∫σ²`.
pub fn int_gamma2(k2: f64, u: f64) -> Result<f64> {
    Ok(u + int_sigma2(k2, u)?)
}

/// Antiderivative of `c² = dn²(u, k)`, `k ≥ 0`.
pub fn int_c2(k2: f64, u: f64) -> Result<f64> {
    if k2 < 0.0 {
        return Err(EllipticError::Domain { k2 }.into());
    }
    if k2 > 1.0 {
        let k = k2.sqrt();
        Ok((1.0 - k2) * u + k * ellint_e_am(k * u, Modulus::from_k2(1.0 / k2)?)?)
    } else {
        Ok(ellint_e_am(u, Modulus::from_k2(k2)?)?)
    }
}

/// Antiderivative of `1/φ²` for the lightlike solutions.
pub fn int_inv_phi2(variant: LightlikeVariant, k2: f64, u: f64) -> Result<f64> {
    let t = match variant {
        LightlikeVariant::PhiLinear => u,
        LightlikeVariant::PhiSinusoidal if k2 > 0.0 => libm::tan(k2.sqrt() * u) / k2.sqrt(),
        LightlikeVariant::PhiSinusoidal => libm::tanh((-k2).sqrt() * u) / (-k2).sqrt(),
    };
    if t.abs() < POLE_WINDOW {
        return Err(DelaunayError::Pole { u });
    }
    Ok(-1.0 / t)
}

/// The three profile integrals at `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedIntegrals {
    pub sigma2: f64,
    pub gamma2: f64,
    pub c2: Option<f64>,
}

pub fn closed_integrals(k2: f64, u: f64) -> Result<ClosedIntegrals> {
    let sigma2 = int_sigma2(k2, u)?;
    Ok(ClosedIntegrals {
        sigma2,
        gamma2: u + sigma2,
        c2: if k2 >= 0.0 { Some(int_c2(k2, u)?) } else { None },
    })
}

/// `∫_{u0}^{u1} σ² du`, refusing intervals that contain a pole.
pub fn definite_sigma2(k2: f64, u0: f64, u1: f64) -> Result<f64> {
    let spacing = sn_zero_spacing(k2)?;
    let (lo, hi) = if u0 <= u1 { (u0, u1) } else { (u1, u0) };
    let pole = if spacing.is_finite() {
        (lo / spacing).ceil() * spacing
    } else {
        0.0
    };
    if pole >= lo - POLE_WINDOW && pole <= hi + POLE_WINDOW {
        return Err(DelaunayError::PoleCrossing {
            from: u0,
            to: u1,
            pole,
            spacing,
        });
    }
    Ok(int_sigma2(k2, u1)? - int_sigma2(k2, u0)?)
}

// ---------------------------------------------------------------------------
// Null rotation about the lightlike axis (1, 0, 1).

pub type Mat3 = [[f64; 3]; 3];

/// Generator `A` of rotations fixing `(1, 0, 1)`.
pub const NULL_GENERATOR: Mat3 = [[0.0, -1.0, 0.0], [1.0, 0.0, -1.0], [0.0, -1.0, 0.0]];

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for (i, row) in c.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn mat_apply(a: &Mat3, x: Vec3) -> Vec3 {
    let r = |i: usize| a[i][0] * x.x + a[i][1] * x.y + a[i][2] * x.z;
    Vec3::new(r(0), r(1), r(2))
}

/// `exp(vA) = I + vA + v²A²/2`, exact since `A³ = 0`.
pub fn null_rotation(v: f64) -> Mat3 {
    let a = NULL_GENERATOR;
    let a2 = mat_mul(&a, &a);
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let id = if i == j { 1.0 } else { 0.0 };
            m[i][j] = id + v * a[i][j] + 0.5 * v * v * a2[i][j];
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Surfaces.

/// Rotation of the profile point `w` in the plane orthogonal to the axis,
/// and of the axis coordinate `t`.
fn rotate(kind: DelaunayKind, t: f64, w: f64, v: f64) -> Vec3 {
    match kind {
        DelaunayKind::SpacelikeTimelikeAxis | DelaunayKind::TimelikeTimelikeAxis => {
            from_complex_real(polar(w, v), t)
        }
        DelaunayKind::SpacelikeSpacelikeAxis | DelaunayKind::TimelikeSpacelikeAxis1 => {
            from_real_paracomplex(t, Paracomplex::exp_j(-v) * Paracomplex::new(0.0, w))
        }
        DelaunayKind::TimelikeSpacelikeAxis2 => {
            from_real_paracomplex(t, Paracomplex::exp_j(-v) * Paracomplex::new(w, 0.0))
        }
        DelaunayKind::SpacelikeLightlikeAxis | DelaunayKind::TimelikeLightlikeAxis => {
            unreachable!("lightlike kinds use the null rotation")
        }
    }
}

/// `(axis coordinate, orbit coordinate)` of `n` and of `x` at `v = 0`, for
/// the kinds rotating about a timelike or spacelike axis.
fn meridian(p: &DelaunayProfile, u: f64) -> Result<((f64, f64), (f64, f64))> {
    let k2 = p.k2;
    let vals = p.values(u)?;
    let [a, b, da, _] = vals.pair();
    Ok(match p.kind {
        DelaunayKind::SpacelikeTimelikeAxis => {
            let (sigma, gamma) = (a, b);
            ((gamma, sigma), (gamma + int_sigma2(k2, u)?, sigma + da / gamma))
        }
        DelaunayKind::TimelikeTimelikeAxis => {
            let (sigma, gamma) = (a, b);
            ((sigma, gamma), (sigma - int_gamma2(k2, u)?, gamma - da / gamma))
        }
        DelaunayKind::SpacelikeSpacelikeAxis => {
            let (sigma, gamma) = (a, b);
            ((sigma, gamma), (sigma - int_gamma2(k2, u)?, gamma - da / gamma))
        }
        DelaunayKind::TimelikeSpacelikeAxis1 => {
            let (sigma, gamma) = (a, b);
            ((gamma, sigma), (gamma + int_sigma2(k2, u)?, sigma + da / gamma))
        }
        DelaunayKind::TimelikeSpacelikeAxis2 => {
            let (s, c) = (a, b);
            if c.abs() < POLE_WINDOW {
                return Err(DelaunayError::Pole { u });
            }
            ((s, c), (s - int_c2(k2, u)?, c - da / c))
        }
        DelaunayKind::SpacelikeLightlikeAxis | DelaunayKind::TimelikeLightlikeAxis => {
            unreachable!("lightlike kinds use the null rotation")
        }
    })
}

/// Gauss map and surface point at `v = 0` for the lightlike kinds.
fn lightlike_meridian(p: &DelaunayProfile, u: f64) -> Result<(Vec3, Vec3)> {
    let [sigma, gamma, _, _] = p.values(u)?.pair();
    let j = int_inv_phi2(p.variant, p.k2, u)?;
    let (plus, minus) = (0.5 * (u + j), 0.5 * (u - j));
    Ok(match p.kind {
        DelaunayKind::SpacelikeLightlikeAxis => (
            Vec3::new(sigma, 0.0, gamma),
            Vec3::new(sigma - plus, 0.0, gamma - minus),
        ),
        _ => (
            Vec3::new(gamma, 0.0, sigma),
            Vec3::new(gamma - minus, 0.0, sigma - plus),
        ),
    })
}

/// Gauss map `n(u, v)`, on `H²` or `S²₁` according to the kind.
pub fn gauss_map(p: &DelaunayProfile, u: f64, v: f64) -> Result<Vec3> {
    match p.kind.family() {
        Family::Lightlike => {
            let (n, _) = lightlike_meridian(p, u)?;
            Ok(mat_apply(&null_rotation(v), n))
        }
        Family::Circular => {
            let [s, c, _, _] = p.values(u)?.pair();
            Ok(rotate(p.kind, s, c, v))
        }
        Family::Hyperbolic => {
            let ((t, w), _) = meridian(p, u)?;
            Ok(rotate(p.kind, t, w, v))
        }
    }
}

/// Surface point `x(u, v)` with `H = −1/2`.
pub fn eval_surface(p: &DelaunayProfile, u: f64, v: f64) -> Result<Vec3> {
    match p.kind.family() {
        Family::Lightlike => {
            let (_, x) = lightlike_meridian(p, u)?;
            Ok(mat_apply(&null_rotation(v), x))
        }
        _ => {
            let (_, (t, w)) = meridian(p, u)?;
            Ok(rotate(p.kind, t, w, v))
        }
    }
}

/// Profile curve: the surface at `v = 0`.
pub fn profile_curve(p: &DelaunayProfile, u: f64) -> Result<Vec3> {
    eval_surface(p, u, 0.0)
}

/// `⟨x_v, x_v⟩`, the conformal factor of the induced metric. It does not
/// depend on `v`; its sign is `+` when the rotation orbits are spacelike.
pub fn conformal_factor(p: &DelaunayProfile, u: f64) -> Result<f64> {
    let x = eval_surface(p, u, 0.0)?;
    let xv = match p.kind {
        DelaunayKind::SpacelikeTimelikeAxis | DelaunayKind::TimelikeTimelikeAxis => {
            Vec3::new(-x.y, x.x, 0.0)
        }
        DelaunayKind::SpacelikeSpacelikeAxis
        | DelaunayKind::TimelikeSpacelikeAxis1
        | DelaunayKind::TimelikeSpacelikeAxis2 => Vec3::new(0.0, -x.z, -x.y),
        _ => mat_apply(&NULL_GENERATOR, x),
    };
    Ok(inner(MetricKind::Lorentzian, xv, xv))
}

/// Whether `x` fails to be immersed at `u`: a pole of the profile or a
/// vanishing orbit (conical point).
pub fn is_singular(p: &DelaunayProfile, u: f64) -> bool {
    match conformal_factor(p, u) {
        Ok(f) => f.abs() < SINGULAR_TOL,
        Err(_) => true,
    }
}

/// The reflection `x ↔ z`.
pub fn reflect_xz(x: Vec3) -> Vec3 {
    Vec3::new(x.z, x.y, x.x)
}
