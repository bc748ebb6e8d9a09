//! Right quaternionic vectors and operators: the Hermitian scalar product,
//! slice inner products, adjoints, Q_q(T), and seeded test-data generators.
//!
//! Inner-product convention: `⟨x,y⟩ = Σ_k conj(y_k) x_k`, so right scalars
//! exit on the right of the first slot, `⟨xp, y⟩ = ⟨x,y⟩p`. Many texts use
//! the mirror convention; everything downstream depends on this one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::QError;
use crate::quaternion::{Quaternion, SliceFrame};

/// A vector in H^n with right scalar multiplication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QVector {
    pub components: Vec<Quaternion>,
}

impl QVector {
    pub fn new(components: Vec<Quaternion>) -> Self {
        QVector { components }
    }

    pub fn zero(n: usize) -> Self {
        QVector { components: vec![Quaternion::ZERO; n] }
    }

    /// Standard basis vector e_k.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zero(n);
        v.components[k] = Quaternion::ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn add(&self, other: &QVector) -> QVector {
        QVector::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        QVector::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(&a, &b)| a - b)
                .collect(),
        )
    }

    /// Right scalar multiplication x·q.
    pub fn scale_right(&self, q: Quaternion) -> QVector {
        QVector::new(self.components.iter().map(|&x| x * q).collect())
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt()
    }
}

/// Hermitian scalar product `⟨x,y⟩ = Σ_k conj(y_k) x_k`.
pub fn inner(x: &QVector, y: &QVector) -> Result<Quaternion, QError> {
    if x.dim() != y.dim() {
        return Err(QError::Dimension(format!("inner: {} vs {}", x.dim(), y.dim())));
    }
    let mut acc = Quaternion::ZERO;
    for (xk, yk) in x.components.iter().zip(&y.components) {
        acc = acc + yk.conj() * *xk;
    }
    Ok(acc)
}

/// Slice inner product `⟨x,y⟩_i = Re(⟨x,y⟩) − Re(⟨x,y⟩·i)·i`, valued in C_i.
pub fn slice_inner(x: &QVector, y: &QVector, frame: &SliceFrame) -> Result<Quaternion, QError> {
    let h = inner(x, y)?;
    let re = h.re();
    let im = -(h * frame.i).re();
    Ok(Quaternion::real(re) + frame.i.scale(im))
}

/// An n×n right-linear operator, acting by `(Tx)_k = Σ_l T_kl x_l`;
/// entries row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QOperator {
    pub n: usize,
    pub entries: Vec<Quaternion>,
}

impl QOperator {
    pub fn new(n: usize, entries: Vec<Quaternion>) -> Result<Self, QError> {
        if entries.len() != n * n {
            return Err(QError::Dimension(format!(
                "operator: {} entries for n = {n}",
                entries.len()
            )));
        }
        Ok(QOperator { n, entries })
    }

    pub fn zero(n: usize) -> Self {
        QOperator { n, entries: vec![Quaternion::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut t = Self::zero(n);
        for k in 0..n {
            t.entries[k * n + k] = Quaternion::ONE;
        }
        t
    }

    pub fn diagonal(diag: &[Quaternion]) -> Self {
        let n = diag.len();
        let mut t = Self::zero(n);
        for k in 0..n {
            t.entries[k * n + k] = diag[k];
        }
        t
    }

    pub fn get(&self, row: usize, col: usize) -> Quaternion {
        self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, q: Quaternion) {
        self.entries[row * self.n + col] = q;
    }

    pub fn apply(&self, x: &QVector) -> Result<QVector, QError> {
        if x.dim() != self.n {
            return Err(QError::Dimension(format!("apply: {} vs {}", self.n, x.dim())));
        }
        let mut out = QVector::zero(self.n);
        for k in 0..self.n {
            let mut acc = Quaternion::ZERO;
            for l in 0..self.n {
                acc = acc + self.get(k, l) * x.components[l];
            }
            out.components[k] = acc;
        }
        Ok(out)
    }

    /// Matrix product S·T (apply T first).
    pub fn compose(&self, other: &QOperator) -> Result<QOperator, QError> {
        if self.n != other.n {
            return Err(QError::Dimension(format!("compose: {} vs {}", self.n, other.n)));
        }
        let n = self.n;
        let mut out = QOperator::zero(n);
        for k in 0..n {
            for l in 0..n {
                let mut acc = Quaternion::ZERO;
                for m in 0..n {
                    acc = acc + self.get(k, m) * other.get(m, l);
                }
                out.set(k, l, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &QOperator) -> Result<QOperator, QError> {
        if self.n != other.n {
            return Err(QError::Dimension(format!("add: {} vs {}", self.n, other.n)));
        }
        Ok(QOperator {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &QOperator) -> Result<QOperator, QError> {
        if self.n != other.n {
            return Err(QError::Dimension(format!("sub: {} vs {}", self.n, other.n)));
        }
        Ok(QOperator {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    /// Real scaling `rT := Tr`; real scalars commute with operators.
    pub fn scale_real(&self, r: f64) -> QOperator {
        QOperator {
            n: self.n,
            entries: self.entries.iter().map(|&q| q.scale(r)).collect(),
        }
    }

    /// Conjugate transpose: `(T*)_kl = conj(T_lk)`.
    pub fn adjoint(&self) -> QOperator {
        let n = self.n;
        let mut out = QOperator::zero(n);
        for k in 0..n {
            for l in 0..n {
                out.set(k, l, self.get(l, k).conj());
            }
        }
        out
    }

    pub fn norm_fro(&self) -> f64 {
        self.entries.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt()
    }

    /// `‖T*T − TT*‖_F ≤ tol·‖T‖_F²`.
    pub fn is_normal(&self, tol: f64) -> bool {
        let adj = self.adjoint();
        let lhs = adj.compose(self).unwrap();
        let rhs = self.compose(&adj).unwrap();
        let scale = self.norm_fro().powi(2).max(f64::MIN_POSITIVE);
        lhs.sub(&rhs).unwrap().norm_fro() <= tol * scale
    }

    /// `Q_q(T) = T² − 2 Re(q) T + |q|² I`; depends on q only through (Re q, |q|).
    pub fn q_operator(&self, q: Quaternion) -> QOperator {
        let t2 = self.compose(self).unwrap();
        let lin = self.scale_real(-2.0 * q.re());
        let cst = QOperator::identity(self.n).scale_real(q.norm_sq());
        t2.add(&lin).unwrap().add(&cst).unwrap()
    }
}

/// Spectrum shape for [`random_normal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumProfile {
    /// Real diagonal: the result is self-adjoint.
    RealOnly,
    /// Generic quaternionic diagonal entries.
    Generic,
    /// A few distinct eigenspheres, each hit by several diagonal slots.
    ClusteredSpheres,
}

fn random_quaternion(rng: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

fn random_imaginary_unit(rng: &mut ChaCha8Rng) -> Quaternion {
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
}

/// Modified Gram–Schmidt with one reorthogonalization pass on the columns.
/// Returns Err when a column collapses below `tol` (rank-deficient draw).
fn gram_schmidt_columns(cols: &mut Vec<QVector>, tol: f64) -> Result<(), QError> {
    let ncols = cols.len();
    for k in 0..ncols {
        for _pass in 0..2 {
            for l in 0..k {
                let (head, tail) = cols.split_at_mut(k);
                let proj = inner(&tail[0], &head[l])?;
                let corr = head[l].scale_right(proj);
                tail[0] = tail[0].sub(&corr);
            }
        }
        let norm = cols[k].norm();
        if norm < tol {
            return Err(QError::Internal("rank-deficient draw in Gram-Schmidt".into()));
        }
        cols[k] = cols[k].scale_right(Quaternion::real(1.0 / norm));
    }
    Ok(())
}

fn operator_from_columns(cols: &[QVector]) -> QOperator {
    let n = cols.len();
    let mut t = QOperator::zero(n);
    for (l, col) in cols.iter().enumerate() {
        for k in 0..n {
            t.set(k, l, col.components[k]);
        }
    }
    t
}

/// A seeded random unitary via quaternionic Gram–Schmidt; retries on
/// rank-deficient draws, errors after 8 attempts.
pub fn random_unitary(n: usize, seed: u64) -> Result<QOperator, QError> {
    if n == 0 {
        return Err(QError::Dimension("n must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..8 {
        let mut cols: Vec<QVector> = (0..n)
            .map(|_| QVector::new((0..n).map(|_| random_quaternion(&mut rng)).collect()))
            .collect();
        if gram_schmidt_columns(&mut cols, 1e-8).is_ok() {
            return Ok(operator_from_columns(&cols));
        }
    }
    Err(QError::Convergence("random_unitary: repeated rank-deficient draws".into()))
}

/// A seeded random normal operator `U D U*` with diagonal quaternionic D.
pub fn random_normal(n: usize, seed: u64, profile: SpectrumProfile) -> Result<QOperator, QError> {
    let u = random_unitary(n, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let diag: Vec<Quaternion> = match profile {
        SpectrumProfile::RealOnly => (0..n)
            .map(|_| Quaternion::real(rng.gen_range(-2.0..2.0)))
            .collect(),
        SpectrumProfile::Generic => (0..n).map(|_| random_quaternion(&mut rng).scale(2.0)).collect(),
        SpectrumProfile::ClusteredSpheres => {
            let nspheres = rng.gen_range(1..=3.min(n));
            let spheres: Vec<(f64, f64)> = (0..nspheres)
                .map(|k| (k as f64 * 3.0 + rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0)))
                .collect();
            (0..n)
                .map(|_| {
                    let (re, rad) = spheres[rng.gen_range(0..nspheres)];
                    Quaternion::real(re) + random_imaginary_unit(&mut rng).scale(rad)
                })
                .collect()
        }
    };
    let d = QOperator::diagonal(&diag);
    u.compose(&d)?.compose(&u.adjoint())
}
