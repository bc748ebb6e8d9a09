//! The slice complexification: quaternionic operators as structured 2n×2n
//! complex matrices and back.
//!
//! Basis convention: e₁..e_n, e₁j..e_n j, where (i, j, ij) is the slice frame.
//! An entry q = α + j·β with α, β ∈ C_i maps to the block form
//! `[[A1, −conj(A2)], [A2, conj(A1)]]`. This layout is fixed, never
//! configurable.

use num_complex::Complex64;

use crate::error::QError;
use crate::qspace::{QOperator, QVector};
use crate::quaternion::{Quaternion, SliceFrame};

/// Default block-structure tolerance for [`unchi`], scaled by ‖M‖_F.
pub const TAU_STRUCT: f64 = 1e-8;

/// A dense m×m complex matrix, row-major. Complex entries are frame-agnostic
/// (re, im) pairs; the frame only matters at split/reassembly boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub m: usize,
    pub entries: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(m: usize, entries: Vec<Complex64>) -> Result<Self, QError> {
        if entries.len() != m * m {
            return Err(QError::Dimension(format!("CMatrix: {} entries for m = {m}", entries.len())));
        }
        Ok(CMatrix { m, entries })
    }

    pub fn zero(m: usize) -> Self {
        CMatrix { m, entries: vec![Complex64::new(0.0, 0.0); m * m] }
    }

    pub fn identity(m: usize) -> Self {
        let mut out = Self::zero(m);
        for k in 0..m {
            out.entries[k * m + k] = Complex64::new(1.0, 0.0);
        }
        out
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.m + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.entries[row * self.m + col] = v;
    }

    pub fn mul(&self, other: &CMatrix) -> Result<CMatrix, QError> {
        if self.m != other.m {
            return Err(QError::Dimension(format!("mul: {} vs {}", self.m, other.m)));
        }
        let m = self.m;
        let mut out = CMatrix::zero(m);
        for r in 0..m {
            for c in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..m {
                    acc += self.get(r, t) * other.get(t, c);
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &CMatrix) -> Result<CMatrix, QError> {
        if self.m != other.m {
            return Err(QError::Dimension(format!("add: {} vs {}", self.m, other.m)));
        }
        Ok(CMatrix {
            m: self.m,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix, QError> {
        if self.m != other.m {
            return Err(QError::Dimension(format!("sub: {} vs {}", self.m, other.m)));
        }
        Ok(CMatrix {
            m: self.m,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix { m: self.m, entries: self.entries.iter().map(|e| e * s).collect() }
    }

    /// Conjugate transpose.
    pub fn hermitian_transpose(&self) -> CMatrix {
        let m = self.m;
        let mut out = CMatrix::zero(m);
        for r in 0..m {
            for c in 0..m {
                out.set(r, c, self.get(c, r).conj());
            }
        }
        out
    }

    pub fn norm_fro(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.sub(&self.hermitian_transpose()).unwrap().norm_fro()
            <= tol * self.norm_fro().max(f64::MIN_POSITIVE)
    }

    pub fn is_normal(&self, tol: f64) -> bool {
        let h = self.hermitian_transpose();
        let lhs = h.mul(self).unwrap();
        let rhs = self.mul(&h).unwrap();
        lhs.sub(&rhs).unwrap().norm_fro() <= tol * self.norm_fro().powi(2).max(f64::MIN_POSITIVE)
    }
}

/// Decompose `q = α + j·β` with α, β ∈ C_i, in the frame's basis {1, i, j, ij}.
///
/// The frame units are orthonormal in R⁴, so the coordinates are Euclidean
/// projections; with q = w + x·i + y·j + z·ij this gives α = w + x·i and
/// β = y − z·i (since j·(y − z·i) = y·j + z·ij).
pub fn split(q: Quaternion, frame: &SliceFrame) -> (Complex64, Complex64) {
    let w = q.dot(Quaternion::ONE);
    let x = q.dot(frame.i);
    let y = q.dot(frame.j);
    let z = q.dot(frame.k);
    (Complex64::new(w, x), Complex64::new(y, -z))
}

/// Reassemble a quaternion from its split pair in the given frame.
pub fn unsplit(alpha: Complex64, beta: Complex64, frame: &SliceFrame) -> Quaternion {
    Quaternion::real(alpha.re)
        + frame.i.scale(alpha.im)
        + frame.j.scale(beta.re)
        + frame.k.scale(-beta.im)
}

/// The matrix of T acting on H_i in the basis {e_m, e_m j}: a 2n×2n complex
/// matrix with blocks `[[A1, −conj(A2)], [A2, conj(A1)]]` where
/// T_kl = A1_kl + j·A2_kl.
pub fn chi(t: &QOperator, frame: &SliceFrame) -> CMatrix {
    let n = t.n;
    let mut out = CMatrix::zero(2 * n);
    for k in 0..n {
        for l in 0..n {
            let (a1, a2) = split(t.get(k, l), frame);
            out.set(k, l, a1);
            out.set(k, n + l, -a2.conj());
            out.set(n + k, l, a2);
            out.set(n + k, n + l, a1.conj());
        }
    }
    out
}

/// Coordinates of x in the basis {e_m, e_m j}: the 2n complex vector (ξ, η)
/// with x_m = ξ_m + j·η_m.
pub fn chi_vec(x: &QVector, frame: &SliceFrame) -> Vec<Complex64> {
    let n = x.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * n];
    for (m, &q) in x.components.iter().enumerate() {
        let (xi, eta) = split(q, frame);
        out[m] = xi;
        out[n + m] = eta;
    }
    out
}

/// Inverse of [`chi_vec`].
pub fn unchi_vec(v: &[Complex64], frame: &SliceFrame) -> Result<QVector, QError> {
    if v.len() % 2 != 0 {
        return Err(QError::Dimension("unchi_vec: odd length".into()));
    }
    let n = v.len() / 2;
    Ok(QVector::new((0..n).map(|m| unsplit(v[m], v[n + m], frame)).collect()))
}

/// Residual of the quaternionic block structure of a 2n×2n matrix
/// (how far lower-left/lower-right deviate from the conjugate pattern).
pub fn structure_residual(m: &CMatrix) -> Result<f64, QError> {
    if m.m % 2 != 0 {
        return Err(QError::Dimension("structure check needs even dimension".into()));
    }
    let n = m.m / 2;
    let mut acc = 0.0;
    for k in 0..n {
        for l in 0..n {
            let a1 = m.get(k, l);
            let b = m.get(k, n + l);
            let a2 = m.get(n + k, l);
            let d = m.get(n + k, n + l);
            acc += (d - a1.conj()).norm_sqr();
            acc += (b + a2.conj()).norm_sqr();
        }
    }
    Ok(acc.sqrt())
}

/// Descend a structured 2n×2n complex matrix to a quaternionic operator.
///
/// Errors when the block symmetry fails beyond `tau_struct·‖M‖_F`: such a
/// matrix is C_i-linear but not right quaternionic linear, which is exactly
/// what happens for spectral projections of non-axially-symmetric sets.
pub fn unchi(m: &CMatrix, frame: &SliceFrame, tau_struct: f64) -> Result<QOperator, QError> {
    let resid = structure_residual(m)?;
    let scale = m.norm_fro().max(f64::MIN_POSITIVE);
    if resid > tau_struct * scale {
        return Err(QError::Structure(format!(
            "block symmetry residual {resid:.3e} exceeds {:.3e}",
            tau_struct * scale
        )));
    }
    let n = m.m / 2;
    let mut t = QOperator::zero(n);
    for k in 0..n {
        for l in 0..n {
            // average the two witnesses of each block
            let a1 = (m.get(k, l) + m.get(n + k, n + l).conj()) * 0.5;
            let a2 = (m.get(n + k, l) - m.get(k, n + l).conj()) * 0.5;
            t.set(k, l, unsplit(a1, a2, frame));
        }
    }
    Ok(t)
}
