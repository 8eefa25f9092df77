//! Periods of helicoids and their companions.
//!
//! With `K = K(μ)`, `E = E(μ)` and `Π = Π(μ²b², μ)`,
//!
//! ```text
//! Φ(μ, b) = (c₁² Π + b² E + (1 − b²) K) / (π b c₁)
//! ```
//!
//! The companion closes up exactly when `Φ + 1/2 = q/p` is rational. It is then
//! invariant under `(u, v) → (u + 2mK, v + h)` with
//! `m = p`, `h = (2p/c₁)(b² E + (1 − b²) K)`, and the Gauss map picks up `(−1)^m`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elliptic::{complete_e, complete_k, complete_pi, EllipticError, Modulus};
use crate::helicoid::{eval_frame, HelicoidError, HelicoidParams};
use crate::lingeo::Vec3;

/// Distance from `b = 1` and `b = 1/μ` inside which the solver refuses to look.
pub const BOUNDARY_GUARD: f64 = 1e-6;
/// Default number of uniform scan points for sign changes.
pub const DEFAULT_SCAN: usize = 10_000;
pub const DEFAULT_P_MAX: u32 = 8;
pub const SCHEMA: &str = "period-solution/1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PeriodError {
    #[error("c₁ = 0 at (μ, b) = ({mu}, {b}): the surface is rotational and Φ is undefined")]
    Boundary { mu: f64, b: f64 },
    #[error("μ = {0} must lie strictly between 0 and 1")]
    Mu(f64),
    #[error("target {q}/{p} is not a positive rational")]
    Target { q: i64, p: i64 },
    #[error("cannot parse rational target {0:?}; expected q/p")]
    Parse(String),
    #[error(transparent)]
    Helicoid(#[from] HelicoidError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

pub type Result<T> = std::result::Result<T, PeriodError>;

/// `q/p` in lowest terms with `p > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub q: i64,
    pub p: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    pub fn new(q: i64, p: i64) -> Result<Self> {
        if p == 0 || q == 0 || (q < 0) != (p < 0) {
            return Err(PeriodError::Target { q, p });
        }
        let d = gcd(q, p);
        Ok(Self {
            q: q.abs() / d,
            p: p.abs() / d,
        })
    }

    pub fn value(self) -> f64 {
        self.q as f64 / self.p as f64
    }
}

impl std::str::FromStr for Rational {
    type Err = PeriodError;

    /// `"q/p"` or a bare integer `"q"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || PeriodError::Parse(s.to_string());
        let (q, p) = match s.trim().split_once('/') {
            Some((q, p)) => (q.trim().parse().map_err(|_| bad())?, p.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        Rational::new(q, p)
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.q, self.p)
    }
}

/// The complete integrals `K(μ)`, `E(μ)`, `Π(μ²b², μ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompleteIntegrals {
    pub k: f64,
    pub e: f64,
    pub pi: f64,
}

pub fn complete_integrals(mu: f64, b: f64) -> Result<CompleteIntegrals> {
    let m = Modulus::new(mu)?;
    Ok(CompleteIntegrals {
        k: complete_k(m)?,
        e: complete_e(m)?,
        pi: complete_pi(mu * mu * b * b, m)?,
    })
}

fn interior(mu: f64, b: f64) -> Result<HelicoidParams> {
    let p = HelicoidParams::new(mu, b)?;
    if p.c1() <= 0.0 || mu >= 1.0 {
        return Err(PeriodError::Boundary { mu, b });
    }
    Ok(p)
}

/// `Φ(μ, b)`.
pub fn phi(mu: f64, b: f64) -> Result<f64> {
    let p = interior(mu, b)?;
    let c1 = p.c1();
    let ci = complete_integrals(mu, b)?;
    Ok((c1 * c1 * ci.pi + b * b * ci.e + (1.0 - b * b) * ci.k) / (PI * b * c1))
}

/// `h = (2m/c₁)(b² E + (1 − b²) K)`.
pub fn translation(mu: f64, b: f64, m: u32) -> Result<f64> {
    let p = interior(mu, b)?;
    let ci = complete_integrals(mu, b)?;
    Ok(2.0 * m as f64 / p.c1() * (b * b * ci.e + (1.0 - b * b) * ci.k))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodSolution {
    pub mu: f64,
    pub b: f64,
    pub p: u32,
    pub q: u32,
    pub m: u32,
    pub h: f64,
    pub phi_value: f64,
    pub coorientable: bool,
    pub cuspidal_edges: u32,
}

impl PeriodSolution {
    /// The candidate `(m, h)` for target `q/p` at a given `b`; `b` need not solve anything.
    pub fn at(mu: f64, b: f64, target: Rational) -> Result<Self> {
        let m = target.p as u32;
        Ok(Self {
            mu,
            b,
            p: m,
            q: target.q as u32,
            m,
            h: translation(mu, b, m)?,
            phi_value: phi(mu, b)?,
            coorientable: m % 2 == 0,
            cuspidal_edges: m,
        })
    }

    pub fn target(&self) -> f64 {
        self.q as f64 / self.p as f64
    }

    /// `|Φ + 1/2 − q/p|`
    pub fn residual(&self) -> f64 {
        (self.phi_value + 0.5 - self.target()).abs()
    }

    pub fn params(&self) -> Result<HelicoidParams> {
        Ok(HelicoidParams::new(self.mu, self.b)?)
    }
}

/// A uniform sample of `Φ + 1/2` over `[1 + guard, 1/μ − guard]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiScan {
    pub mu: f64,
    pub b: Vec<f64>,
    pub value: Vec<f64>,
}

impl PhiScan {
    pub fn new(mu: f64, points: usize) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(PeriodError::Mu(mu));
        }
        let points = points.max(2);
        let (lo, hi) = (1.0 + BOUNDARY_GUARD, 1.0 / mu - BOUNDARY_GUARD);
        let step = (hi - lo) / (points - 1) as f64;
        let b: Vec<f64> = (0..points).map(|i| lo + step * i as f64).collect();
        let value = b.iter().map(|&b| phi(mu, b).map(|f| f + 0.5)).collect::<Result<_>>()?;
        Ok(Self { mu, b, value })
    }

    /// Observed `(min, max)` of `Φ + 1/2`. Empirical: the scan does not prove bounds.
    pub fn range(&self) -> (f64, f64) {
        self.value
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// Roots of `Φ + 1/2 = target`, refined by bisection, in increasing `b`.
    pub fn roots(&self, target: f64) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        for i in 0..self.b.len() - 1 {
            let (f0, f1) = (self.value[i] - target, self.value[i + 1] - target);
            if f0 == 0.0 {
                out.push(self.b[i]);
            } else if f0 * f1 < 0.0 {
                out.push(bisect(self.mu, target, self.b[i], self.b[i + 1], f0)?);
            }
        }
        if self.value.last().map(|v| v - target) == Some(0.0) {
            out.push(*self.b.last().unwrap());
        }
        Ok(out)
    }
}

fn bisect(mu: f64, target: f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Result<f64> {
    // run to adjacent floats: near the ends Φ is steep and a 1e-12 bracket leaves
    // residuals that the closure check sees after m periods
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = phi(mu, mid)? + 0.5 - target;
        if f == 0.0 {
            return Ok(mid);
        }
        if (f < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// All `b` with `Φ(μ, b) + 1/2 = q/p`. `(q, p)` is reduced to lowest terms first.
pub fn solve_b(mu: f64, q: i64, p: i64) -> Result<Vec<PeriodSolution>> {
    solve_b_with(&PhiScan::new(mu, DEFAULT_SCAN)?, Rational::new(q, p)?)
}

pub fn solve_b_with(scan: &PhiScan, target: Rational) -> Result<Vec<PeriodSolution>> {
    scan.roots(target.value())?
        .into_iter()
        .map(|b| PeriodSolution::at(scan.mu, b, target))
        .collect()
}

/// Every reduced `q/p` with `p ≤ p_max` inside `[lo, hi]`, ordered by value.
pub fn farey_targets(lo: f64, hi: f64, p_max: u32) -> Vec<Rational> {
    let mut out = Vec::new();
    for p in 1..=p_max.max(1) as i64 {
        let q_lo = (lo * p as f64).ceil().max(1.0) as i64;
        let q_hi = (hi * p as f64).floor() as i64;
        for q in q_lo..=q_hi {
            if gcd(q, p) == 1 {
                out.push(Rational { q, p });
            }
        }
    }
    out.sort_by(|a, b| (a.q * b.p).cmp(&(b.q * a.p)));
    out
}

/// Solve every Farey target with `p ≤ p_max` inside the scanned range, capped at `upper`.
pub fn search(scan: &PhiScan, p_max: u32, upper: Option<f64>) -> Result<Vec<PeriodSolution>> {
    let (lo, hi) = scan.range();
    let hi = upper.map_or(hi, |u| u.min(hi));
    let mut out = Vec::new();
    for t in farey_targets(lo, hi, p_max) {
        out.extend(solve_b_with(scan, t)?);
    }
    out.sort_by(|a, b| a.b.total_cmp(&b.b).then(a.p.cmp(&b.p)));
    Ok(out)
}

/// What one step `u → u + 2K` does to the profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiShift {
    /// `2K(μ)`
    pub u_step: f64,
    /// Increment of `g`: `2c₁Π/b` (π on the nodoid boundary, 0 on the unduloid).
    pub rotation: f64,
    /// Increment of the axial part of `x̌₀`: `2(b − 1/b)K − 2bE`.
    pub vertical: f64,
}

impl QuasiShift {
    /// Total rotation of `x̌` after `m` steps, including the `mπ` from the sign flip of `x̌₀`.
    pub fn rotation_after(&self, m: u32) -> f64 {
        m as f64 * (self.rotation + PI)
    }
}

pub fn quasi_shift(p: &HelicoidParams) -> Result<QuasiShift> {
    let (mu, b) = (p.mu(), p.b());
    let m = p.modulus();
    let k = complete_k(m)?;
    let e = complete_e(m)?;
    let a = p.a();
    let c1 = p.c1();
    let rotation = if c1 > 0.0 {
        2.0 * c1 * complete_pi(a * a, m)? / b
    } else if mu > 0.0 && a >= 1.0 - 1e-15 {
        PI
    } else {
        0.0
    };
    Ok(QuasiShift {
        u_step: 2.0 * k,
        rotation,
        vertical: 2.0 * (b - 1.0 / b) * k - 2.0 * b * e,
    })
}

/// Sample grid for closure checks: `nu × nv` points over one fundamental domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureGrid {
    pub nu: usize,
    pub nv: usize,
}

impl Default for ClosureGrid {
    fn default() -> Self {
        Self { nu: 64, nv: 64 }
    }
}

/// Sup-norm gaps, all Euclidean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureGaps {
    /// `x̌(u + 2mK, v + h) − x̌(u, v)`
    pub companion: f64,
    /// `x` under `(2mK, h)` for even `m`, `(4mK, h)` for odd `m`.
    pub cmc: f64,
    pub cmc_shift: [f64; 2],
    /// `x(u + 4mK, v + 2h) − x(u, v)`, two companion periods.
    pub cmc_double: f64,
    /// `n(u + 2mK, v + h) − (−1)^m n(u, v)`
    pub gauss_sign: f64,
}

impl ClosureGaps {
    pub fn max(&self) -> f64 {
        self.companion.max(self.cmc).max(self.gauss_sign)
    }

    /// Like [`max`](Self::max), but measures `x` over its true period: the
    /// doubled translation when `m` is odd.
    pub fn certified(&self, m: u32) -> f64 {
        let cmc = if m % 2 == 0 { self.cmc } else { self.cmc_double };
        self.companion.max(cmc).max(self.gauss_sign)
    }
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    (0..n).map(move |i| a + (b - a) * i as f64 / (n - 1) as f64)
}

pub fn verify_closure(sol: &PeriodSolution, grid: ClosureGrid) -> Result<ClosureGaps> {
    let p = sol.params()?;
    let k = complete_k(p.modulus())?;
    let m = sol.m as f64;
    let du = 2.0 * m * k;
    let cmc_du = if sol.m % 2 == 0 { du } else { 2.0 * du };
    let sign = if sol.m % 2 == 0 { 1.0 } else { -1.0 };
    let gap = |a: Vec3, b: Vec3| (a - b).norm_e();
    let mut out = ClosureGaps {
        companion: 0.0,
        cmc: 0.0,
        cmc_shift: [cmc_du, sol.h],
        cmc_double: 0.0,
        gauss_sign: 0.0,
    };
    for u in linspace(0.0, du, grid.nu) {
        for v in linspace(0.0, sol.h, grid.nv) {
            let base = eval_frame(&p, u, v)?;
            let once = eval_frame(&p, u + du, v + sol.h)?;
            let cmc = eval_frame(&p, u + cmc_du, v + sol.h)?;
            let twice = eval_frame(&p, u + 2.0 * du, v + 2.0 * sol.h)?;
            out.companion = out.companion.max(gap(once.x_check, base.x_check));
            out.gauss_sign = out.gauss_sign.max(gap(once.n, base.n * sign));
            out.cmc = out.cmc.max(gap(cmc.x, base.x));
            out.cmc_double = out.cmc_double.max(gap(twice.x, base.x));
        }
    }
    Ok(out)
}

/// One entry of a `period-solution/1` report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionEntry {
    pub mu: f64,
    pub b: f64,
    pub p: u32,
    pub q: u32,
    pub m: u32,
    pub h: f64,
    pub phi: f64,
    pub coorientable: bool,
    pub closure_gap: ClosureGaps,
}

impl SolutionEntry {
    pub fn new(sol: &PeriodSolution, gaps: ClosureGaps) -> Self {
        Self {
            mu: sol.mu,
            b: sol.b,
            p: sol.p,
            q: sol.q,
            m: sol.m,
            h: sol.h,
            phi: sol.phi_value,
            coorientable: sol.coorientable,
            closure_gap: gaps,
        }
    }
}

/// Scan metadata. `empirical` is always true: the range comes from sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanInfo {
    pub points: usize,
    pub b_range: [f64; 2],
    pub phi_plus_half_range: [f64; 2],
    pub empirical: bool,
}

impl From<&PhiScan> for ScanInfo {
    fn from(s: &PhiScan) -> Self {
        let (lo, hi) = s.range();
        Self {
            points: s.b.len(),
            b_range: [s.b[0], *s.b.last().unwrap()],
            phi_plus_half_range: [lo, hi],
            empirical: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub schema: String,
    pub mu: f64,
    pub targets: Vec<Rational>,
    pub scan: ScanInfo,
    pub solutions: Vec<SolutionEntry>,
}

impl PeriodReport {
    pub fn new(scan: &PhiScan, targets: Vec<Rational>, solutions: Vec<SolutionEntry>) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            mu: scan.mu,
            targets,
            scan: scan.into(),
            solutions,
        }
    }
}
