//! Vector algebra in Euclidean 3-space and Minkowski 3-space.
//!
//! The Lorentzian signature is `(+, +, −)` with the third slot timelike.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const E1: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const E2: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const E3: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Euclidean norm, regardless of the ambient metric.
    pub fn norm_e(self) -> f64 {
        inner(MetricKind::Euclidean, self, self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Componentwise maximum absolute value.
    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Euclidean,
    Lorentzian,
}

impl MetricKind {
    /// Sign of the third slot in the inner product.
    pub fn time_sign(self) -> f64 {
        match self {
            MetricKind::Euclidean => 1.0,
            MetricKind::Lorentzian => -1.0,
        }
    }
}

pub fn inner(m: MetricKind, a: Vec3, b: Vec3) -> f64 {
    a.x * b.x + a.y * b.y + m.time_sign() * a.z * b.z
}

/// Vector product compatible with `m`: `⟨a × b, c⟩_m = det(a, b, c)`.
pub fn cross(m: MetricKind, a: Vec3, b: Vec3) -> Vec3 {
    Vec3::new(
        a.y * b.z - b.y * a.z,
        a.z * b.x - b.z * a.x,
        m.time_sign() * (a.x * b.y - b.x * a.y),
    )
}

pub fn det3(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    a.x * (b.y * c.z - b.z * c.y) - a.y * (b.x * c.z - b.z * c.x) + a.z * (b.x * c.y - b.y * c.x)
}

/// Scale `v` so that `|⟨v, v⟩_m| = 1`. Lightlike vectors come back unchanged
/// as `None`.
pub fn normalize(m: MetricKind, v: Vec3) -> Option<Vec3> {
    let q = inner(m, v, v).abs();
    (q > 0.0 && q.is_finite()).then(|| v / q.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Lightlike,
}

/// Zero band for the Lorentzian norm, relative to the Euclidean size.
pub const LIGHTLIKE_TOL: f64 = 1e-10;

pub fn causal_character(v: Vec3) -> CausalCharacter {
    let q = inner(MetricKind::Lorentzian, v, v);
    let band = LIGHTLIKE_TOL * (1.0 + inner(MetricKind::Euclidean, v, v));
    if q.abs() < band {
        CausalCharacter::Lightlike
    } else if q > 0.0 {
        CausalCharacter::Spacelike
    } else {
        CausalCharacter::Timelike
    }
}

/// Paracomplex number `re + j·j_part` with `j² = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Paracomplex {
    pub re: f64,
    pub j: f64,
}

impl Paracomplex {
    pub const ONE: Paracomplex = Paracomplex { re: 1.0, j: 0.0 };
    pub const J: Paracomplex = Paracomplex { re: 0.0, j: 1.0 };

    pub const fn new(re: f64, j: f64) -> Self {
        Self { re, j }
    }

    /// `e^{jv} = cosh v + j sinh v`.
    pub fn exp_j(v: f64) -> Self {
        Self::new(libm::cosh(v), libm::sinh(v))
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.j)
    }

    /// `z·z̄ = re² − j²`, the indefinite squared modulus.
    pub fn norm_sqr(self) -> f64 {
        self.re * self.re - self.j * self.j
    }
}

impl Add for Paracomplex {
    type Output = Paracomplex;
    fn add(self, o: Paracomplex) -> Paracomplex {
        Paracomplex::new(self.re + o.re, self.j + o.j)
    }
}

impl Sub for Paracomplex {
    type Output = Paracomplex;
    fn sub(self, o: Paracomplex) -> Paracomplex {
        Paracomplex::new(self.re - o.re, self.j - o.j)
    }
}

impl Mul for Paracomplex {
    type Output = Paracomplex;
    fn mul(self, o: Paracomplex) -> Paracomplex {
        Paracomplex::new(self.re * o.re + self.j * o.j, self.re * o.j + self.j * o.re)
    }
}

impl Mul<f64> for Paracomplex {
    type Output = Paracomplex;
    fn mul(self, s: f64) -> Paracomplex {
        Paracomplex::new(self.re * s, self.j * s)
    }
}

/// Conformal class of the parameter domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainSignature {
    /// `[du² + dv²]`
    Riemannian,
    /// `[du² − dv²]`
    Lorentzian,
}

/// The vector-valued 1-form `P du + Q dv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorOneForm {
    pub p: Vec3,
    pub q: Vec3,
    pub signature: DomainSignature,
}

impl VectorOneForm {
    pub fn new(p: Vec3, q: Vec3, signature: DomainSignature) -> Self {
        Self { p, q, signature }
    }

    /// Evaluate on the tangent vector `(du, dv)`.
    pub fn apply(&self, du: f64, dv: f64) -> Vec3 {
        self.p * du + self.q * dv
    }
}

/// Hodge star: `*du = dv, *dv = −du` on a Riemannian domain and
/// `*du = dv, *dv = du` on a Lorentzian one.
pub fn hodge_star(f: VectorOneForm) -> VectorOneForm {
    match f.signature {
        DomainSignature::Riemannian => VectorOneForm::new(-f.q, f.p, f.signature),
        DomainSignature::Lorentzian => VectorOneForm::new(f.q, f.p, f.signature),
    }
}

/// `r e^{iθ}`. Uses `libm` so results do not depend on the build profile or the
/// platform's libm.
pub fn polar(r: f64, theta: f64) -> Complex64 {
    let (s, c) = libm::sincos(theta);
    Complex64::new(r * c, r * s)
}

/// `(X, x) ∈ ℂ × ℝ ↦ (Re X, Im X, x)`.
pub fn from_complex_real(big: Complex64, t: f64) -> Vec3 {
    Vec3::new(big.re, big.im, t)
}

pub fn to_complex_real(v: Vec3) -> (Complex64, f64) {
    (Complex64::new(v.x, v.y), v.z)
}

/// `(r, a + jb) ∈ ℝ × Č ↦ (r, a, b)`.
pub fn from_real_paracomplex(r: f64, w: Paracomplex) -> Vec3 {
    Vec3::new(r, w.re, w.j)
}

pub fn to_real_paracomplex(v: Vec3) -> (f64, Paracomplex) {
    (v.x, Paracomplex::new(v.y, v.z))
}

/// Euclidean vector product written in `ℂ × ℝ`:
/// `(X, x) × (Y, y) = (−i(X y − Y x), Im(X̄ Y))`.
pub fn cross_complex_real(a: (Complex64, f64), b: (Complex64, f64)) -> (Complex64, f64) {
    let (big_x, x) = a;
    let (big_y, y) = b;
    let first = -Complex64::i() * (big_x * y - big_y * x);
    (first, (big_x.conj() * big_y).im)
}

/// Euclidean inner product written in `ℂ × ℝ`.
pub fn inner_complex_real(a: (Complex64, f64), b: (Complex64, f64)) -> f64 {
    (a.0 * b.0.conj()).re + a.1 * b.1
}

#[cfg(test)]
mod tests {
    use super::*;
    use MetricKind::*;

    #[test]
    fn inner_examples() {
        assert_eq!(inner(Lorentzian, Vec3::E3, Vec3::E3), -1.0);
        let v = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(inner(Euclidean, v, v), 14.0);
        let null = Vec3::new(1.0, 0.0, 1.0);
        assert_eq!(inner(Lorentzian, null, null), 0.0);
    }

    #[test]
    fn cross_examples() {
        assert_eq!(cross(Euclidean, Vec3::E1, Vec3::E2), Vec3::E3);
        assert_eq!(cross(Lorentzian, Vec3::E1, Vec3::E2), -Vec3::E3);
        assert_eq!(cross(Lorentzian, Vec3::E2, Vec3::E3), Vec3::E1);
        assert_eq!(cross(Lorentzian, Vec3::E3, Vec3::E1), Vec3::E2);
    }

    #[test]
    fn hodge_examples() {
        let p = Vec3::new(1.0, 2.0, 3.0);
        let q = Vec3::new(-4.0, 0.5, 7.0);
        let r = VectorOneForm::new(p, q, DomainSignature::Riemannian);
        assert_eq!(hodge_star(r), VectorOneForm::new(-q, p, DomainSignature::Riemannian));
        assert_eq!(hodge_star(hodge_star(r)), VectorOneForm::new(-p, -q, r.signature));
        let l = VectorOneForm::new(p, q, DomainSignature::Lorentzian);
        assert_eq!(hodge_star(l), VectorOneForm::new(q, p, l.signature));
        assert_eq!(hodge_star(hodge_star(l)), l);
    }

    #[test]
    fn causal_examples() {
        assert_eq!(causal_character(Vec3::E3), CausalCharacter::Timelike);
        assert_eq!(causal_character(Vec3::E1), CausalCharacter::Spacelike);
        assert_eq!(
            causal_character(Vec3::new(1.0, 0.0, 1.0)),
            CausalCharacter::Lightlike
        );
        // the band scales with the Euclidean size
        assert_eq!(
            causal_character(Vec3::new(1e6, 0.0, 1e6 + 1e-5)),
            CausalCharacter::Lightlike
        );
    }

    #[test]
    fn complex_pair_round_trips() {
        let v = from_complex_real(Complex64::new(1.0, 0.0), 0.0);
        assert_eq!(v, Vec3::E1);
        let w = Vec3::new(0.3, -1.2, 4.0);
        let (c, t) = to_complex_real(w);
        assert_eq!(from_complex_real(c, t), w);
        let (r, z) = to_real_paracomplex(w);
        assert_eq!(from_real_paracomplex(r, z), w);
    }

    #[test]
    fn complex_cross_lemma_example() {
        let x = (Complex64::i(), 0.0);
        let y = (Complex64::new(1.0, 0.0), 0.0);
        let (c, t) = cross_complex_real(x, y);
        assert_eq!(from_complex_real(c, t), Vec3::new(0.0, 0.0, -1.0));
        assert_eq!(cross(Euclidean, Vec3::E2, Vec3::E1), Vec3::new(0.0, 0.0, -1.0));
    }

    #[test]
    fn exp_j_addition_law() {
        let (a, b) = (0.7, -1.9);
        let lhs = Paracomplex::exp_j(a + b);
        let rhs = Paracomplex::exp_j(a) * Paracomplex::exp_j(b);
        assert!((lhs.re - rhs.re).abs() < 1e-14 && (lhs.j - rhs.j).abs() < 1e-14);
        assert!((Paracomplex::exp_j(a).norm_sqr() - 1.0).abs() < 1e-14);
        assert_eq!(Paracomplex::J * Paracomplex::J, Paracomplex::ONE);
    }
}
