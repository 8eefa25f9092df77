//! Jacobi elliptic functions and Legendre-form elliptic integrals.
//!
//! All public functions take the *modulus* `k` through [`Modulus`], which
//! stores `k²` so that pure-imaginary moduli (`k² < 0`) are represented
//! exactly. Three regimes occur:
//!
//! * standard, `0 ≤ k² ≤ 1`: evaluated directly;
//! * reciprocal, `k² > 1`: reduced with `(u, k) ↦ (k·u, 1/k)`;
//! * imaginary, `k² < 0`: reduced with `(u, k) ↦ (α·u, β)` where
//!   `α = √(1−k²)` and `β = √(−k²/(1−k²))`.
//!
//! Jacobi functions are computed with the descending Landen (AGM) scheme,
//! which yields the *unwrapped* amplitude: `am(u + 2K) = am(u) + π`.
//! Incomplete integrals use Carlson's symmetric forms with periodic
//! extension, so `F`, `E` and `Π` are continuous in the amplitude and
//! `E(am(u), k)` is the Jacobi epsilon function on the whole line.

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

/// Default convergence tolerance of the AGM and Carlson iterations.
pub const DEFAULT_TOL: f64 = 1e-13;

const MAX_AGM_STEPS: usize = 64;
const MAX_CARLSON_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EllipticError {
    #[error("modulus must be finite (got k² = {0})")]
    NonFinite(f64),
    #[error("k² = {k2} lies outside the standard regime 0 ≤ k² ≤ 1")]
    Regime { k2: f64 },
    #[error("elliptic integral diverges for k² = {k2}")]
    Domain { k2: f64 },
    #[error("characteristic n = {n} places a pole of the integrand on the integration path")]
    Pole { n: f64 },
}

pub type Result<T> = std::result::Result<T, EllipticError>;

/// Which reduction a modulus needs before the standard algorithms apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `0 ≤ k² ≤ 1`
    Standard,
    /// `k² > 1`
    Reciprocal,
    /// `k² < 0`
    Imaginary,
}

/// An elliptic modulus, stored as `k²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    k2: f64,
}

impl Modulus {
    /// Real modulus `k` (only `k²` matters, so the sign of `k` is dropped).
    pub fn new(k: f64) -> Result<Self> {
        Self::from_k2(k * k).map_err(|_| EllipticError::NonFinite(k))
    }

    /// Modulus from its square; negative values give a pure-imaginary `k`.
    pub fn from_k2(k2: f64) -> Result<Self> {
        if !k2.is_finite() {
            return Err(EllipticError::NonFinite(k2));
        }
        Ok(Self { k2 })
    }

    /// Pure-imaginary modulus `k = iκ`.
    pub fn imaginary(kappa: f64) -> Result<Self> {
        Self::from_k2(-kappa * kappa)
    }

    pub fn k2(self) -> f64 {
        self.k2
    }

    /// `|k|` for a real modulus, `None` when `k` is imaginary.
    pub fn k(self) -> Option<f64> {
        (self.k2 >= 0.0).then(|| self.k2.sqrt())
    }

    pub fn regime(self) -> Regime {
        if self.k2 < 0.0 {
            Regime::Imaginary
        } else if self.k2 > 1.0 {
            Regime::Reciprocal
        } else {
            Regime::Standard
        }
    }

    fn require_standard(self) -> Result<f64> {
        match self.regime() {
            Regime::Standard => Ok(self.k2),
            _ => Err(EllipticError::Regime { k2: self.k2 }),
        }
    }
}

/// Argument bundle for the incomplete integrals: the Jacobi argument `u`,
/// its amplitude `phi` and a characteristic `n_char` for `Π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticArgs {
    pub u: f64,
    pub phi: f64,
    pub n_char: f64,
}

impl EllipticArgs {
    /// Fill in the amplitude `phi = am(u, k)`.
    pub fn from_argument(u: f64, n_char: f64, k: Modulus) -> Result<Self> {
        Ok(Self {
            u,
            phi: jacobi_am(u, k)?,
            n_char,
        })
    }

    pub fn f(&self, k: Modulus) -> Result<f64> {
        ellint_f(self.phi, k)
    }

    pub fn e(&self, k: Modulus) -> Result<f64> {
        ellint_e(self.phi, k)
    }

    pub fn pi(&self, k: Modulus) -> Result<f64> {
        ellint_pi(self.phi, self.n_char, k)
    }
}

/// Values of the three Jacobi functions at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnCnDn {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Result of [`reduce_modulus`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reduced {
    pub u: f64,
    pub k: Modulus,
    pub regime: Regime,
    /// Scale `α` (imaginary) or `k` (reciprocal) used in the transformation;
    /// `1` for the standard regime.
    pub scale: f64,
}

/// Map `(u, k)` to an equivalent argument in the standard regime.
///
/// Reciprocal: `(u, k) ↦ (k·u, 1/k)`, with
/// `sn(u,k) = sn(ku,1/k)/k`, `cn(u,k) = dn(ku,1/k)`, `dn(u,k) = cn(ku,1/k)`.
///
/// Imaginary: `(u, k) ↦ (α·u, β)`, with
/// `sn(u,k) = sd(αu,β)/α`, `cn(u,k) = cd(αu,β)`, `dn(u,k) = nd(αu,β)`.
///
/// Standard moduli pass through unchanged.
pub fn reduce_modulus(u: f64, k: Modulus) -> Reduced {
    match k.regime() {
        Regime::Standard => Reduced {
            u,
            k,
            regime: Regime::Standard,
            scale: 1.0,
        },
        Regime::Reciprocal => {
            let kk = k.k2.sqrt();
            Reduced {
                u: kk * u,
                k: Modulus { k2: 1.0 / k.k2 },
                regime: Regime::Reciprocal,
                scale: kk,
            }
        }
        Regime::Imaginary => {
            let alpha2 = 1.0 - k.k2;
            Reduced {
                u: alpha2.sqrt() * u,
                k: Modulus {
                    k2: -k.k2 / alpha2,
                },
                regime: Regime::Imaginary,
                scale: alpha2.sqrt(),
            }
        }
    }
}

/// Descending Landen sequence: returns the ratios `c_n / a_n` for
/// `n = 1..=N` and `a_N`.
fn landen(k2: f64, tol: f64) -> (Vec<f64>, f64) {
    let mut a = 1.0;
    let mut b = (1.0 - k2).sqrt();
    let mut c = k2.sqrt();
    let mut ratios = Vec::with_capacity(8);
    let mut extra = false;
    for _ in 0..MAX_AGM_STEPS {
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        // c_{n+1} = c_n² / (4 a_{n+1}) avoids the cancellation in (a - b)/2.
        c = c * c / (4.0 * a_next);
        a = a_next;
        b = b_next;
        ratios.push(c / a);
        if extra {
            break;
        }
        if c.abs() <= tol * a {
            // quadratic convergence: one more step pushes the error far below tol
            extra = true;
        }
    }
    (ratios, a)
}

fn am_standard(u: f64, k2: f64, tol: f64) -> f64 {
    if k2 == 0.0 {
        return u;
    }
    if k2 == 1.0 {
        return libm::atan(libm::sinh(u));
    }
    let (ratios, a_n) = landen(k2, tol);
    let mut phi = 2f64.powi(ratios.len() as i32) * a_n * u;
    for r in ratios.iter().rev() {
        phi = 0.5 * (phi + libm::asin(r * libm::sin(phi)));
    }
    phi
}

/// Jacobi amplitude `am(u, k)` on its continuous (unwrapped) branch.
pub fn jacobi_am(u: f64, k: Modulus) -> Result<f64> {
    jacobi_am_with(u, k, DEFAULT_TOL)
}

pub fn jacobi_am_with(u: f64, k: Modulus, tol: f64) -> Result<f64> {
    let k2 = k.require_standard()?;
    Ok(am_standard(u, k2, tol))
}

fn sncndn_standard(u: f64, k2: f64, tol: f64) -> SnCnDn {
    if k2 == 1.0 {
        let sech = 1.0 / libm::cosh(u);
        return SnCnDn {
            sn: libm::tanh(u),
            cn: sech,
            dn: sech,
        };
    }
    let phi = am_standard(u, k2, tol);
    let (sn, cn) = libm::sincos(phi);
    // dn² = k'² + k² cn² keeps full relative accuracy near k → 1, sn → ±1.
    let dn = ((1.0 - k2) + k2 * cn * cn).sqrt();
    SnCnDn { sn, cn, dn }
}

/// `(sn, cn, dn)(u, k)` for any real or pure-imaginary modulus.
pub fn jacobi_sncndn(u: f64, k: Modulus) -> SnCnDn {
    jacobi_sncndn_with(u, k, DEFAULT_TOL)
}

pub fn jacobi_sncndn_with(u: f64, k: Modulus, tol: f64) -> SnCnDn {
    let r = reduce_modulus(u, k);
    let SnCnDn { sn, cn, dn } = sncndn_standard(r.u, r.k.k2, tol);
    match r.regime {
        Regime::Standard => SnCnDn { sn, cn, dn },
        Regime::Reciprocal => SnCnDn {
            sn: sn / r.scale,
            cn: dn,
            dn: cn,
        },
        Regime::Imaginary => SnCnDn {
            sn: sn / (r.scale * dn),
            cn: cn / dn,
            dn: 1.0 / dn,
        },
    }
}

// ---------------------------------------------------------------------------
// Carlson symmetric integrals (duplication theorem + truncated series).

fn carlson_threshold(tol: f64) -> f64 {
    // series truncation error scales like the sixth power of the deviation
    libm::pow(tol * 1e-3, 1.0 / 6.0)
}

/// `R_C(x, y)` for `x ≥ 0`, `y > 0`.
fn rc(x: f64, y: f64, tol: f64) -> f64 {
    let errtol = carlson_threshold(tol);
    let (mut x, mut y) = (x, y);
    let mut ave = (x + 2.0 * y) / 3.0;
    let mut s = (y - ave) / ave;
    for _ in 0..MAX_CARLSON_STEPS {
        if s.abs() <= errtol {
            break;
        }
        let lambda = 2.0 * x.sqrt() * y.sqrt() + y;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        ave = (x + 2.0 * y) / 3.0;
        s = (y - ave) / ave;
    }
    (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / ave.sqrt()
}

/// `R_F(x, y, z)`; at most one argument may vanish.
pub(crate) fn rf(x: f64, y: f64, z: f64, tol: f64) -> f64 {
    let errtol = carlson_threshold(tol);
    let (mut x, mut y, mut z) = (x, y, z);
    let (mut ave, mut dx, mut dy, mut dz);
    let mut steps = 0;
    loop {
        ave = (x + y + z) / 3.0;
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) <= errtol || steps == MAX_CARLSON_STEPS {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        steps += 1;
    }
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / ave.sqrt()
}

/// `R_D(x, y, z)`; `z > 0` and at most one of `x, y` may vanish.
pub(crate) fn rd(x: f64, y: f64, z: f64, tol: f64) -> f64 {
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 6.0;
    const C3: f64 = 9.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.25 * C3;
    const C6: f64 = 1.5 * C4;
    let errtol = carlson_threshold(tol);
    let (mut x, mut y, mut z) = (x, y, z);
    let mut sum = 0.0;
    let mut fac = 1.0;
    let (mut ave, mut dx, mut dy, mut dz);
    let mut steps = 0;
    loop {
        ave = 0.2 * (x + y + 3.0 * z);
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) <= errtol || steps == MAX_CARLSON_STEPS {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lambda));
        fac *= 0.25;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        steps += 1;
    }
    let ea = dx * dy;
    let eb = dz * dz;
    let ec = ea - eb;
    let ed = ea - 6.0 * eb;
    let ee = ed + ec + ec;
    3.0 * sum
        + fac
            * (1.0
                + ed * (-C1 + C5 * ed - C6 * dz * ee)
                + dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea)))
            / (ave * ave.sqrt())
}

/// `R_J(x, y, z, p)` for `p > 0`; at most one of `x, y, z` may vanish.
pub(crate) fn rj(x: f64, y: f64, z: f64, p: f64, tol: f64) -> f64 {
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 3.0;
    const C3: f64 = 3.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.75 * C3;
    const C6: f64 = 1.5 * C4;
    const C7: f64 = 0.5 * C2;
    const C8: f64 = C3 + C3;
    let errtol = carlson_threshold(tol);
    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let mut sum = 0.0;
    let mut fac = 1.0;
    let (mut ave, mut dx, mut dy, mut dz, mut dp);
    let mut steps = 0;
    loop {
        ave = 0.2 * (x + y + z + 2.0 * p);
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        dp = (ave - p) / ave;
        let dev = dx.abs().max(dy.abs()).max(dz.abs()).max(dp.abs());
        if dev <= errtol || steps == MAX_CARLSON_STEPS {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        let alpha = (p * (sx + sy + sz) + sx * sy * sz).powi(2);
        let beta = p * (p + lambda).powi(2);
        sum += fac * rc(alpha, beta, tol);
        fac *= 0.25;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        p = 0.25 * (p + lambda);
        steps += 1;
    }
    let ea = dx * (dy + dz) + dy * dz;
    let eb = dx * dy * dz;
    let ec = dp * dp;
    let ed = ea - 3.0 * ec;
    let ee = eb + 2.0 * dp * (ea - ec);
    3.0 * sum
        + fac
            * (1.0
                + ed * (-C1 + C5 * ed - C6 * ee)
                + eb * (C7 + dp * (-C8 + dp * C4))
                + dp * ea * (C2 - dp * C3)
                - C2 * dp * ec)
            / (ave * ave.sqrt())
}

// ---------------------------------------------------------------------------
// Incomplete integrals.

/// Split `phi = j·π + r` with `r ∈ [−π/2, π/2]`.
fn split_amplitude(phi: f64) -> (f64, f64) {
    let j = (phi / PI).round();
    (j, phi - j * PI)
}

fn f_principal(r: f64, k2: f64, tol: f64) -> f64 {
    let (s, c) = libm::sincos(r);
    s * rf(c * c, 1.0 - k2 * s * s, 1.0, tol)
}

fn e_principal(r: f64, k2: f64, tol: f64) -> f64 {
    let (s, c) = libm::sincos(r);
    let (cc, dd) = (c * c, 1.0 - k2 * s * s);
    s * rf(cc, dd, 1.0, tol) - k2 * s * s * s * rd(cc, dd, 1.0, tol) / 3.0
}

fn pi_principal(r: f64, n: f64, k2: f64, tol: f64) -> f64 {
    let (s, c) = libm::sincos(r);
    let (cc, dd) = (c * c, 1.0 - k2 * s * s);
    let s3 = s * s * s;
    s * rf(cc, dd, 1.0, tol) + n * s3 * rj(cc, dd, 1.0, 1.0 - n * s * s, tol) / 3.0
}

fn check_unit_modulus(phi: f64, k2: f64) -> Result<()> {
    if k2 == 1.0 && phi.abs() >= FRAC_PI_2 {
        return Err(EllipticError::Domain { k2 });
    }
    Ok(())
}

/// Incomplete integral of the first kind `F(φ, k) = ∫₀^φ dθ / √(1 − k² sin²θ)`.
pub fn ellint_f(phi: f64, k: Modulus) -> Result<f64> {
    let k2 = k.require_standard()?;
    check_unit_modulus(phi, k2)?;
    let (j, r) = split_amplitude(phi);
    let whole = if j != 0.0 {
        2.0 * j * complete_k_with(k, DEFAULT_TOL)?
    } else {
        0.0
    };
    Ok(whole + f_principal(r, k2, DEFAULT_TOL))
}

/// Incomplete integral of the second kind `E(φ, k) = ∫₀^φ √(1 − k² sin²θ) dθ`.
pub fn ellint_e(phi: f64, k: Modulus) -> Result<f64> {
    let k2 = k.require_standard()?;
    check_unit_modulus(phi, k2)?;
    let (j, r) = split_amplitude(phi);
    let whole = if j != 0.0 {
        2.0 * j * complete_e_with(k, DEFAULT_TOL)?
    } else {
        0.0
    };
    Ok(whole + e_principal(r, k2, DEFAULT_TOL))
}

/// Incomplete integral of the third kind
/// `Π(φ, n, k) = ∫₀^φ dθ / ((1 − n sin²θ) √(1 − k² sin²θ))`.
///
/// Fails with [`EllipticError::Pole`] when `1 − n sin²θ` vanishes somewhere
/// on `[0, φ]`.
pub fn ellint_pi(phi: f64, n: f64, k: Modulus) -> Result<f64> {
    let k2 = k.require_standard()?;
    check_unit_modulus(phi, k2)?;
    if n >= 1.0 {
        let reach = if phi.abs() >= FRAC_PI_2 {
            1.0
        } else {
            libm::sin(phi).powi(2)
        };
        if n * reach >= 1.0 {
            return Err(EllipticError::Pole { n });
        }
        return Ok(pi_principal(phi, n, k2, DEFAULT_TOL));
    }
    let (j, r) = split_amplitude(phi);
    let whole = if j != 0.0 {
        2.0 * j * complete_pi(n, k)?
    } else {
        0.0
    };
    Ok(whole + pi_principal(r, n, k2, DEFAULT_TOL))
}

/// Jacobi epsilon function `E(am(u, k), k) = ∫₀^u dn²(t, k) dt`.
pub fn ellint_e_am(u: f64, k: Modulus) -> Result<f64> {
    let k2 = k.require_standard()?;
    if k2 == 1.0 {
        // E(gd u, 1) = sin(gd u)
        return Ok(libm::tanh(u));
    }
    ellint_e(jacobi_am(u, k)?, k)
}

// ---------------------------------------------------------------------------
// Complete integrals.

fn require_sub_unit(k: Modulus) -> Result<f64> {
    let k2 = k.require_standard()?;
    if k2 >= 1.0 {
        return Err(EllipticError::Domain { k2 });
    }
    Ok(k2)
}

/// Complete integral of the first kind, by the arithmetic-geometric mean.
pub fn complete_k(k: Modulus) -> Result<f64> {
    complete_k_with(k, DEFAULT_TOL)
}

pub fn complete_k_with(k: Modulus, tol: f64) -> Result<f64> {
    let k2 = require_sub_unit(k)?;
    let (mut a, mut b) = (1.0, (1.0 - k2).sqrt());
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= tol * a {
            break;
        }
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    Ok(PI / (a + b))
}

/// Complete integral of the second kind, `E = K·(1 − Σ 2^(n−1) c_n²)`.
pub fn complete_e(k: Modulus) -> Result<f64> {
    complete_e_with(k, DEFAULT_TOL)
}

pub fn complete_e_with(k: Modulus, tol: f64) -> Result<f64> {
    let k2 = require_sub_unit(k)?;
    let (mut a, mut b) = (1.0, (1.0 - k2).sqrt());
    let mut c2 = k2;
    let mut weight = 0.5;
    let mut sum = weight * c2;
    for _ in 0..MAX_AGM_STEPS {
        if c2.sqrt() <= tol * a {
            break;
        }
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        c2 = (0.5 * (a - b)).powi(2);
        a = a_next;
        b = b_next;
        weight *= 2.0;
        sum += weight * c2;
    }
    let kk = PI / (2.0 * a);
    Ok(kk * (1.0 - sum))
}

/// Complete integral of the third kind `Π(n, k)`, defined for `n < 1`.
pub fn complete_pi(n: f64, k: Modulus) -> Result<f64> {
    let k2 = require_sub_unit(k)?;
    if n >= 1.0 {
        return Err(EllipticError::Pole { n });
    }
    let kp2 = 1.0 - k2;
    Ok(rf(0.0, kp2, 1.0, DEFAULT_TOL) + n * rj(0.0, kp2, 1.0, 1.0 - n, DEFAULT_TOL) / 3.0)
}
