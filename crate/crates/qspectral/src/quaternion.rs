//! Quaternion arithmetic, the imaginary unit sphere, slices and conjugacy classes.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::QError;

/// Tolerance for membership-in-S checks (unit purely imaginary quaternions).
pub const TAU_UNIT: f64 = 1e-10;

/// A quaternion `q = a + b i + c j + d k`.
///
/// Plain value type; no normalization is ever applied implicitly.
/// JSON encoding is the 4-array `[a, b, c, d]`, in that exact order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(v: [f64; 4]) -> Self {
        Quaternion::new(v[0], v[1], v[2], v[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.a, q.b, q.c, q.d]
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion { a: 0.0, b: 0.0, c: 0.0, d: 0.0 };
    pub const ONE: Quaternion = Quaternion { a: 1.0, b: 0.0, c: 0.0, d: 0.0 };
    pub const I: Quaternion = Quaternion { a: 0.0, b: 1.0, c: 0.0, d: 0.0 };
    pub const J: Quaternion = Quaternion { a: 0.0, b: 0.0, c: 1.0, d: 0.0 };
    pub const K: Quaternion = Quaternion { a: 0.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Quaternion { a, b, c, d }
    }

    pub fn real(a: f64) -> Self {
        Quaternion::new(a, 0.0, 0.0, 0.0)
    }

    /// Re(q).
    pub fn re(self) -> f64 {
        self.a
    }

    /// Im(q) = b i + c j + d k as a quaternion.
    pub fn im(self) -> Quaternion {
        Quaternion::new(0.0, self.b, self.c, self.d)
    }

    /// `q̄ = a − bi − cj − dk`.
    pub fn conj(self) -> Quaternion {
        Quaternion::new(self.a, -self.b, -self.c, -self.d)
    }

    /// `|q| = √(a² + b² + c² + d²)`.
    pub fn modulus(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn norm_sq(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    /// `q⁻¹ = q̄ / |q|²`.
    pub fn inv(self) -> Result<Quaternion, QError> {
        let n2 = self.norm_sq();
        if n2 == 0.0 {
            return Err(QError::Domain("zero quaternion has no inverse".into()));
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    pub fn scale(self, r: f64) -> Quaternion {
        Quaternion::new(self.a * r, self.b * r, self.c * r, self.d * r)
    }

    pub fn is_zero(self) -> bool {
        self.a == 0.0 && self.b == 0.0 && self.c == 0.0 && self.d == 0.0
    }

    /// True if `q² = −1` within `tol`, i.e. q is a unit purely imaginary quaternion.
    pub fn is_imaginary_unit(self, tol: f64) -> bool {
        self.a.abs() <= tol && (self.modulus() - 1.0).abs() <= tol
    }

    /// The conjugacy class `[q] = Re(q) + |Im(q)| S` as a 2-sphere.
    pub fn conjugacy_class(self) -> EigenSphere {
        EigenSphere { re: self.a, rad: self.im().modulus() }
    }

    /// `s q s⁻¹`; stays on the conjugacy class of q.
    pub fn conjugate_by(self, s: Quaternion) -> Result<Quaternion, QError> {
        let s_inv = s.inv().map_err(|_| QError::Domain("conjugation by zero".into()))?;
        Ok(s * self * s_inv)
    }

    /// Euclidean dot product of the R^4 coordinates.
    pub fn dot(self, other: Quaternion) -> f64 {
        self.a * other.a + self.b * other.b + self.c * other.c + self.d * other.d
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.a, self.b, self.c, self.d)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    /// Hamilton product extending `i² = j² = k² = ijk = −1`.
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a * o.a - self.b * o.b - self.c * o.c - self.d * o.d,
            self.a * o.b + self.b * o.a + self.c * o.d - self.d * o.c,
            self.a * o.c - self.b * o.d + self.c * o.a + self.d * o.b,
            self.a * o.d + self.b * o.c - self.c * o.b + self.d * o.a,
        )
    }
}

/// A conjugacy class `[q]`: the 2-sphere `re + rad·S`. `rad = 0` is the real
/// singleton `{re}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenSphere {
    pub re: f64,
    pub rad: f64,
}

impl EigenSphere {
    pub fn new(re: f64, rad: f64) -> Self {
        EigenSphere { re, rad }
    }

    /// Euclidean distance in the (re, rad) half-plane.
    pub fn dist(self, other: EigenSphere) -> f64 {
        ((self.re - other.re).powi(2) + (self.rad - other.rad).powi(2)).sqrt()
    }

    /// A representative point of the sphere along the imaginary unit `u`.
    pub fn representative(self, u: Quaternion) -> Quaternion {
        Quaternion::real(self.re) + u.scale(self.rad)
    }
}

/// An ordered anticommuting triple (i, j, k = ij) fixing the slice C_i and the
/// basis {1, i, j, ij} of H.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceFrame {
    pub i: Quaternion,
    pub j: Quaternion,
    pub k: Quaternion,
}

impl SliceFrame {
    /// The frame built from the standard units i, j, k.
    pub fn standard() -> SliceFrame {
        SliceFrame { i: Quaternion::I, j: Quaternion::J, k: Quaternion::K }
    }

    /// Embed `α + β·i` (the slice C_i) into H.
    pub fn embed(self, re: f64, im: f64) -> Quaternion {
        Quaternion::real(re) + self.i.scale(im)
    }
}

/// Deterministically complete a unit imaginary quaternion to a frame (i, j, ij)
/// with ij = −ji.
///
/// The second unit is the normalized imaginary part of `u·e`, where `e` is the
/// coordinate axis least aligned with the imaginary vector of `u`. For purely
/// imaginary u, e this is the cross product of their imaginary 3-vectors, so
/// it is orthogonal to u and never degenerate.
pub fn complete_frame(u: Quaternion) -> Result<SliceFrame, QError> {
    if !u.is_imaginary_unit(TAU_UNIT) {
        return Err(QError::Domain(format!(
            "not a unit imaginary quaternion: {u} (|q|={}, Re={})",
            u.modulus(),
            u.re()
        )));
    }
    let axes = [Quaternion::I, Quaternion::J, Quaternion::K];
    let mut best = 0usize;
    let mut best_align = f64::INFINITY;
    for (idx, e) in axes.iter().enumerate() {
        let align = u.dot(*e).abs();
        if align < best_align {
            best_align = align;
            best = idx;
        }
    }
    let cross = (u * axes[best]).im();
    let j = cross.scale(1.0 / cross.modulus());
    let k = u * j;
    Ok(SliceFrame { i: u, j, k })
}

/// A nonzero `s` with `s⁻¹ u s = v` for unit imaginary u, v.
///
/// Closed form s = (u + v)/|u + v|; in the antipodal case v = −u any unit
/// imaginary orthogonal to u works, and the frame completion supplies a
/// deterministic one.
pub fn conjugator(u: Quaternion, v: Quaternion) -> Result<Quaternion, QError> {
    if !u.is_imaginary_unit(TAU_UNIT) || !v.is_imaginary_unit(TAU_UNIT) {
        return Err(QError::Domain("conjugator arguments must lie on S".into()));
    }
    let sum = u + v;
    let m = sum.modulus();
    if m > TAU_UNIT {
        Ok(sum.scale(1.0 / m))
    } else {
        Ok(complete_frame(u)?.j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(p: Quaternion, q: Quaternion, tol: f64) {
        assert!((p - q).modulus() <= tol, "{p} != {q}");
    }

    #[test]
    fn multiplication_table() {
        use Quaternion as Q;
        assert_eq!(Q::I * Q::I, -Q::ONE);
        assert_eq!(Q::J * Q::J, -Q::ONE);
        assert_eq!(Q::K * Q::K, -Q::ONE);
        assert_eq!(Q::I * Q::J, Q::K);
        assert_eq!(Q::J * Q::I, -Q::K);
        assert_eq!(Q::I * Q::J * Q::K, -Q::ONE);
    }

    #[test]
    fn unit_axiom() {
        let q = Quaternion::new(0.3, -1.5, 2.0, 0.7);
        assert_eq!(q * Quaternion::ONE, q);
        assert_eq!(Quaternion::ONE * q, q);
    }

    #[test]
    fn binomial_expansion() {
        // (1+i)(1+j) = 1 + i + j + k
        let p = Quaternion::ONE + Quaternion::I;
        let q = Quaternion::ONE + Quaternion::J;
        assert_eq!(p * q, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn conjugate_and_modulus() {
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(q.conj(), Quaternion::new(1.0, -2.0, -3.0, -4.0));
        assert_eq!(Quaternion::new(1.0, 1.0, 1.0, 1.0).modulus(), 2.0);
        // conj(q)·q = |q|²
        let p = q.conj() * q;
        assert_close(p, Quaternion::real(q.norm_sq()), 1e-12);
    }

    #[test]
    fn inverse() {
        assert_eq!(Quaternion::I.inv().unwrap(), -Quaternion::I);
        assert!(Quaternion::ZERO.inv().is_err());
        let q = Quaternion::new(0.5, -2.0, 1.0, 3.0);
        assert_close(q * q.inv().unwrap(), Quaternion::ONE, 1e-15);
    }

    #[test]
    fn conjugacy_classes() {
        assert_eq!(Quaternion::I.conjugacy_class(), EigenSphere::new(0.0, 1.0));
        assert_eq!(Quaternion::real(5.0).conjugacy_class(), EigenSphere::new(5.0, 0.0));
        let q = Quaternion::ONE + Quaternion::I.scale(2.0);
        assert_eq!(q.conjugacy_class(), EigenSphere::new(1.0, 2.0));
    }

    #[test]
    fn conjugation() {
        // j i j⁻¹ = −i
        let r = Quaternion::I.conjugate_by(Quaternion::J).unwrap();
        assert_close(r, -Quaternion::I, 1e-15);
        let q = Quaternion::new(0.1, 0.2, 0.3, 0.4);
        assert_close(q.conjugate_by(Quaternion::ONE).unwrap(), q, 0.0);
        let s = Quaternion::new(1.0, -2.0, 0.5, 0.25);
        assert_close(Quaternion::real(5.0).conjugate_by(s).unwrap(), Quaternion::real(5.0), 1e-14);
        assert!(q.conjugate_by(Quaternion::ZERO).is_err());
    }

    #[test]
    fn conjugation_preserves_class() {
        let q = Quaternion::new(0.4, 1.0, -0.5, 2.0);
        let s = Quaternion::new(-0.3, 0.8, 1.1, 0.2);
        let p = q.conjugate_by(s).unwrap();
        assert!(p.conjugacy_class().dist(q.conjugacy_class()) < 1e-13);
    }

    fn check_frame(f: SliceFrame) {
        assert_close(f.i * f.j, -(f.j * f.i), 1e-13);
        assert_close(f.k, f.i * f.j, 1e-13);
        assert!(f.j.is_imaginary_unit(1e-13));
        assert!(f.k.is_imaginary_unit(1e-13));
        assert!(f.i.dot(f.j).abs() < 1e-13);
        assert!(f.i.dot(f.k).abs() < 1e-13);
        assert!(f.j.dot(f.k).abs() < 1e-13);
    }

    #[test]
    fn frame_completion() {
        check_frame(complete_frame(Quaternion::I).unwrap());
        check_frame(complete_frame(Quaternion::K).unwrap());
        let u = (Quaternion::I + Quaternion::J).scale(1.0 / 2f64.sqrt());
        let f = complete_frame(u).unwrap();
        check_frame(f);
        assert!(u.dot(f.j).abs() < 1e-13);
        assert!(complete_frame(Quaternion::ONE).is_err());
    }

    #[test]
    fn frame_completion_deterministic() {
        let u = Quaternion::new(0.0, 0.6, 0.8, 0.0);
        let f1 = complete_frame(u).unwrap();
        let f2 = complete_frame(u).unwrap();
        assert_eq!(f1, f2);
    }

    #[test]
    fn conjugator_basic() {
        let s = conjugator(Quaternion::I, Quaternion::J).unwrap();
        assert_close(s, (Quaternion::I + Quaternion::J).scale(1.0 / 2f64.sqrt()), 1e-15);
        let r = Quaternion::I.conjugate_by(s.inv().unwrap()).unwrap();
        // s⁻¹ i s = j means conjugating by s⁻¹
        assert_close(r, Quaternion::J, 1e-15);
        // u = v: the closed form gives s = u, which conjugates u to itself
        let s = conjugator(Quaternion::I, Quaternion::I).unwrap();
        assert_close(
            Quaternion::I.conjugate_by(s.inv().unwrap()).unwrap(),
            Quaternion::I,
            1e-15,
        );
    }

    #[test]
    fn conjugator_antipodal() {
        let s = conjugator(Quaternion::I, -Quaternion::I).unwrap();
        let r = Quaternion::I.conjugate_by(s.inv().unwrap()).unwrap();
        assert_close(r, -Quaternion::I, 1e-13);
    }

    #[test]
    fn conjugator_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let rand_unit = |rng: &mut rand_chacha::ChaCha8Rng| {
                loop {
                    let v = Quaternion::new(
                        0.0,
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    );
                    let m = v.modulus();
                    if m > 1e-3 {
                        return v.scale(1.0 / m);
                    }
                }
            };
            let u = rand_unit(&mut rng);
            let v = rand_unit(&mut rng);
            let s = conjugator(u, v).unwrap();
            let got = u.conjugate_by(s.inv().unwrap()).unwrap();
            assert!((got - v).modulus() < 1e-12, "u={u} v={v} got={got}");
        }
    }

    #[test]
    fn modulus_multiplicative() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let mut q = || {
                Quaternion::new(
                    rng.gen_range(-5.0..5.0),
                    rng.gen_range(-5.0..5.0),
                    rng.gen_range(-5.0..5.0),
                    rng.gen_range(-5.0..5.0),
                )
            };
            let p = q();
            let r = q();
            let lhs = (p * r).modulus();
            let rhs = p.modulus() * r.modulus();
            assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * rhs);
        }
    }

    #[test]
    fn json_roundtrip() {
        let q = Quaternion::new(1.0, -2.5, 3.0, 0.125);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[1.0,-2.5,3.0,0.125]");
        let back: Quaternion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }
}
