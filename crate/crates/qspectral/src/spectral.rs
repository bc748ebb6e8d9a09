//! Spherical spectrum, the quaternionic spectral measure, the T = A + JB
//! decomposition, reconstruction, and the polynomial calculus.
//!
//! The spectrum is computed through the slice route: eigenvalues of χ(T)
//! mapped to (Re λ, |Im λ|) spheres. The Q_q(T) invertibility definition is
//! kept as an independent oracle via [`q_residual`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eig::{self, EigDecomp};
use crate::error::QError;
use crate::qspace::{inner, QOperator, QVector};
use crate::quaternion::{EigenSphere, Quaternion, SliceFrame};
use crate::slice::{chi, unchi, CMatrix};

/// Sphere clustering tolerance in the (re, rad) half-plane, scaled by ‖T‖_F.
pub const TAU_SPHERE: f64 = 1e-7;
/// Default measure tolerance (projection axioms, commutation), relative.
pub const TAU_MEAS: f64 = 1e-8;
/// Default reconstruction tolerance, relative.
pub const TAU_REC: f64 = 1e-8;

/// σ_S(T) as a finite list of eigenspheres with quaternionic multiplicities.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphericalSpectrum {
    pub spheres: Vec<(EigenSphere, usize)>,
}

impl SphericalSpectrum {
    pub fn total_multiplicity(&self) -> usize {
        self.spheres.iter().map(|(_, m)| m).sum()
    }
}

/// Atomic quaternionic spectral measure: one orthogonal projection per
/// eigensphere, plus the frame it was built in.
#[derive(Debug, Clone)]
pub struct QSpectralMeasure {
    pub atoms: Vec<(EigenSphere, QOperator)>,
    pub frame: SliceFrame,
}

/// The T = A + JB decomposition: self-adjoint A, positive B, anti-self-adjoint
/// partial isometry J with (T − T*)/2 = JB.
#[derive(Debug, Clone)]
pub struct Tjb {
    pub a: QOperator,
    pub b: QOperator,
    pub j: QOperator,
}

/// An axially symmetric Borel set, given as a finite union of closed
/// rectangles in the (re, rad) half-plane. Membership of q depends only on
/// (Re q, |Im q|).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct AxSymSet {
    pub rects: Vec<Rect>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub rad_min: f64,
    pub rad_max: f64,
}

impl AxSymSet {
    pub fn empty() -> Self {
        AxSymSet { rects: Vec::new() }
    }

    /// A set covering everything (the whole half-plane up to huge bounds).
    pub fn everything() -> Self {
        AxSymSet {
            rects: vec![Rect {
                re_min: f64::NEG_INFINITY,
                re_max: f64::INFINITY,
                rad_min: 0.0,
                rad_max: f64::INFINITY,
            }],
        }
    }

    pub fn from_rect(re_min: f64, re_max: f64, rad_min: f64, rad_max: f64) -> Self {
        AxSymSet { rects: vec![Rect { re_min, re_max, rad_min, rad_max }] }
    }

    pub fn contains(&self, sphere: EigenSphere) -> bool {
        self.rects.iter().any(|r| {
            sphere.re >= r.re_min
                && sphere.re <= r.re_max
                && sphere.rad >= r.rad_min
                && sphere.rad <= r.rad_max
        })
    }

    pub fn union(&self, other: &AxSymSet) -> AxSymSet {
        let mut rects = self.rects.clone();
        rects.extend(other.rects.iter().copied());
        AxSymSet { rects }
    }
}

fn require_normal(t: &QOperator, tol: f64) -> Result<(), QError> {
    if !t.is_normal(tol.max(1e-10)) {
        return Err(QError::Domain("operator is not normal within tolerance".into()));
    }
    Ok(())
}

/// Single-linkage clustering of half-plane points; returns (sphere, indices).
fn cluster_halfplane(points: &[EigenSphere], tol: f64) -> Vec<(EigenSphere, Vec<usize>)> {
    let mut assigned = vec![false; points.len()];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for start in 0..points.len() {
        if assigned[start] {
            continue;
        }
        let mut members = vec![start];
        assigned[start] = true;
        let mut frontier = vec![start];
        while let Some(cur) = frontier.pop() {
            for next in 0..points.len() {
                if !assigned[next] && points[cur].dist(points[next]) <= tol {
                    assigned[next] = true;
                    members.push(next);
                    frontier.push(next);
                }
            }
        }
        clusters.push(members);
    }
    let mut out: Vec<(EigenSphere, Vec<usize>)> = clusters
        .into_iter()
        .map(|members| {
            let n = members.len() as f64;
            let re = members.iter().map(|&k| points[k].re).sum::<f64>() / n;
            let rad = members.iter().map(|&k| points[k].rad).sum::<f64>() / n;
            (EigenSphere::new(re, rad.max(0.0)), members)
        })
        .collect();
    out.sort_by(|a, b| (a.0.re, a.0.rad).partial_cmp(&(b.0.re, b.0.rad)).unwrap());
    out
}

/// Eigenvalues of χ(T) grouped into spheres. Shared by the spectrum and
/// measure routes so both see identical clusters.
fn sphere_clusters(
    dec: &EigDecomp,
    fro: f64,
    tau: f64,
) -> Vec<(EigenSphere, Vec<usize>)> {
    let points: Vec<EigenSphere> = dec
        .lambdas
        .iter()
        .map(|l| EigenSphere::new(l.re, l.im.abs()))
        .collect();
    cluster_halfplane(&points, tau.max(TAU_SPHERE * fro.max(1.0)))
}

/// σ_S(T) with quaternionic multiplicities. Every sphere carries an even
/// number of χ-eigenvalues — a non-real sphere contributes conjugate pairs,
/// and a real eigenvalue's eigenspace has complex dimension twice its
/// quaternionic dimension — so quaternionic multiplicity is half the complex
/// count in both cases.
pub fn spherical_spectrum(
    t: &QOperator,
    frame: &SliceFrame,
    tau: f64,
) -> Result<SphericalSpectrum, QError> {
    require_normal(t, tau)?;
    let m = chi(t, frame);
    let dec = eig::eig_normal(&m, eig::TAU_EIG)?;
    let fro = t.norm_fro();
    let clusters = sphere_clusters(&dec, fro, tau * fro);
    let mut spheres = Vec::with_capacity(clusters.len());
    for (sphere, members) in clusters {
        let cmult = members.len();
        if cmult % 2 != 0 {
            return Err(QError::Internal(format!(
                "sphere ({}, {}) has odd complex multiplicity {cmult}",
                sphere.re, sphere.rad
            )));
        }
        let real_sphere = sphere.rad <= TAU_SPHERE * fro.max(1.0);
        let sphere = if real_sphere { EigenSphere::new(sphere.re, 0.0) } else { sphere };
        spheres.push((sphere, cmult / 2));
    }
    Ok(SphericalSpectrum { spheres })
}

/// Smallest singular value of χ(Q_q(T)): ≈ 0 iff q ∈ σ_S(T). The independent
/// oracle for the spherical spectrum.
pub fn q_residual(t: &QOperator, q: Quaternion, frame: &SliceFrame) -> Result<f64, QError> {
    let qq = t.q_operator(q);
    let m = chi(&qq, frame);
    let gram = m.hermitian_transpose().mul(&m)?;
    let dec = eig::eig_hermitian(&gram, eig::TAU_EIG)?;
    let smallest = dec
        .lambdas
        .iter()
        .map(|l| l.re)
        .fold(f64::INFINITY, f64::min);
    Ok(smallest.max(0.0).sqrt())
}

/// The complex spectral measure of T_i: eigenvalue clusters of χ(T) in C_i
/// with their complex projections. Clusters here are per complex point, not
/// per sphere, so a non-real cluster on one half-plane yields a projection
/// that fails the quaternionic structure check.
pub fn slice_measure(
    t: &QOperator,
    frame: &SliceFrame,
    tau: f64,
) -> Result<Vec<(Complex64, CMatrix)>, QError> {
    require_normal(t, tau)?;
    let m = chi(t, frame);
    let dec = eig::eig_normal(&m, eig::TAU_EIG)?;
    let fro = t.norm_fro().max(1.0);
    let tol = (tau * fro).max(TAU_SPHERE * fro);

    let mut assigned = vec![false; dec.lambdas.len()];
    let mut out = Vec::new();
    for start in 0..dec.lambdas.len() {
        if assigned[start] {
            continue;
        }
        let mut members = vec![start];
        assigned[start] = true;
        let mut frontier = vec![start];
        while let Some(cur) = frontier.pop() {
            for next in 0..dec.lambdas.len() {
                if !assigned[next] && (dec.lambdas[cur] - dec.lambdas[next]).norm() <= tol {
                    assigned[next] = true;
                    members.push(next);
                    frontier.push(next);
                }
            }
        }
        let center = members.iter().map(|&k| dec.lambdas[k]).sum::<Complex64>()
            / members.len() as f64;
        let proj = eig::eigenprojection(&dec, |k| members.contains(&k));
        out.push((center, proj));
    }
    out.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
    Ok(out)
}

/// The quaternionic spectral measure: per eigensphere, select every
/// χ-eigenvalue on the sphere (both half-planes), project, and descend the
/// projection through the structure check.
pub fn spectral_measure(
    t: &QOperator,
    frame: &SliceFrame,
    tau: f64,
) -> Result<QSpectralMeasure, QError> {
    require_normal(t, tau)?;
    let m = chi(t, frame);
    let dec = eig::eig_normal(&m, eig::TAU_EIG)?;
    let fro = t.norm_fro();
    let clusters = sphere_clusters(&dec, fro, tau * fro);
    let mut atoms = Vec::with_capacity(clusters.len());
    for (sphere, members) in clusters {
        let proj = eig::eigenprojection(&dec, |k| members.contains(&k));
        let p = unchi(&proj, frame, crate::slice::TAU_STRUCT).map_err(|e| {
            QError::Internal(format!(
                "projection of symmetric selection failed structure check \
                 (tolerance misconfiguration?): {e}"
            ))
        })?;
        atoms.push((sphere, p));
    }
    Ok(QSpectralMeasure { atoms, frame: *frame })
}

/// E(Ω): the sum of atom projections whose sphere lies in Ω.
pub fn evaluate(measure: &QSpectralMeasure, omega: &AxSymSet) -> QOperator {
    let n = measure.atoms.first().map(|(_, p)| p.n).unwrap_or(0);
    let mut acc = QOperator::zero(n);
    for (sphere, p) in &measure.atoms {
        if omega.contains(*sphere) {
            acc = acc.add(p).unwrap();
        }
    }
    acc
}

/// T = A + JB with A = (T + T*)/2, B = Σ rad_k P_k, J = N·B⁺ where
/// N = (T − T*)/2 and B⁺ inverts B on its range. J is zero on ker B.
pub fn tjb_decompose(t: &QOperator, frame: &SliceFrame, tau: f64) -> Result<Tjb, QError> {
    let measure = spectral_measure(t, frame, tau)?;
    let a = t.add(&t.adjoint())?.scale_real(0.5);
    let n_part = t.sub(&t.adjoint())?.scale_real(0.5);
    let dim = t.n;
    let mut b = QOperator::zero(dim);
    let mut b_pinv = QOperator::zero(dim);
    let rad_floor = tau.max(TAU_MEAS) * t.norm_fro().max(1.0);
    for (sphere, p) in &measure.atoms {
        b = b.add(&p.scale_real(sphere.rad))?;
        if sphere.rad > rad_floor {
            b_pinv = b_pinv.add(&p.scale_real(1.0 / sphere.rad))?;
        }
    }
    let j = n_part.compose(&b_pinv)?;
    Ok(Tjb { a, b, j })
}

/// Reconstruct T from its measure and J:
/// `T_rec = Σ_k (P_k·re_k + J·P_k·rad_k)`.
pub fn reconstruct(measure: &QSpectralMeasure, j: &QOperator) -> Result<QOperator, QError> {
    let n = j.n;
    let mut acc = QOperator::zero(n);
    for (sphere, p) in &measure.atoms {
        acc = acc.add(&p.scale_real(sphere.re))?;
        if sphere.rad != 0.0 {
            acc = acc.add(&j.compose(p)?.scale_real(sphere.rad))?;
        }
    }
    Ok(acc)
}

/// A real bivariate polynomial `P(X, Y) = Σ c·X^dx·Y^dy`, evaluated as
/// p(T) = P(T, T*) and p(λ) = P(λ, λ̄).
#[derive(Debug, Clone)]
pub struct BivariatePoly {
    /// (x degree, y degree, coefficient)
    pub terms: Vec<(u32, u32, f64)>,
}

impl BivariatePoly {
    pub fn constant(c: f64) -> Self {
        BivariatePoly { terms: vec![(0, 0, c)] }
    }

    /// P = X.
    pub fn x() -> Self {
        BivariatePoly { terms: vec![(1, 0, 1.0)] }
    }

    pub fn eval_complex(&self, lambda: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(dx, dy, c)| lambda.powu(dx) * lambda.conj().powu(dy) * c)
            .sum()
    }
}

/// p(T) = P(T, T*) in the operator algebra; T and T* commute for normal T so
/// the monomial order is immaterial there.
pub fn poly_apply(t: &QOperator, p: &BivariatePoly) -> Result<QOperator, QError> {
    let n = t.n;
    let adj = t.adjoint();
    let mut acc = QOperator::zero(n);
    for &(dx, dy, c) in &p.terms {
        let mut term = QOperator::identity(n);
        for _ in 0..dx {
            term = term.compose(t)?;
        }
        for _ in 0..dy {
            term = term.compose(&adj)?;
        }
        acc = acc.add(&term.scale_real(c))?;
    }
    Ok(acc)
}

/// |p(λ)| for λ = re + rad·i on the sphere; constant over the sphere since
/// P has real coefficients.
pub fn poly_on_sphere(p: &BivariatePoly, sphere: EigenSphere) -> f64 {
    p.eval_complex(Complex64::new(sphere.re, sphere.rad)).norm()
}

/// Compress T to range(P) for a projection P commuting with T: orthonormal
/// quaternionic basis of the range by Gram–Schmidt on the columns of P, then
/// the r×r matrix of T in that basis.
pub fn restrict(t: &QOperator, p: &QOperator, tau: f64) -> Result<QOperator, QError> {
    if t.n != p.n {
        return Err(QError::Dimension(format!("restrict: {} vs {}", t.n, p.n)));
    }
    let n = t.n;
    let rank_tol = tau.max(1e-8) * p.norm_fro().max(1.0);
    let mut basis: Vec<QVector> = Vec::new();
    for col in 0..n {
        let mut v = QVector::new((0..n).map(|row| p.get(row, col)).collect());
        for _pass in 0..2 {
            for q in &basis {
                let coeff = inner(&v, q)?;
                v = v.sub(&q.scale_right(coeff));
            }
        }
        let norm = v.norm();
        if norm > rank_tol {
            basis.push(v.scale_right(Quaternion::real(1.0 / norm)));
        }
    }
    if basis.is_empty() {
        return Err(QError::Internal(format!(
            "restrict: projection has numerical rank 0 (column norms all below {rank_tol:.3e})"
        )));
    }
    let r = basis.len();
    let mut out = QOperator::zero(r);
    for (l, ql) in basis.iter().enumerate() {
        let tql = t.apply(ql)?;
        for (k, qk) in basis.iter().enumerate() {
            out.set(k, l, inner(&tql, qk)?);
        }
    }
    Ok(out)
}
