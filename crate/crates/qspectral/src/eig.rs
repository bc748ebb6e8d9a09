//! Eigendecomposition of complex Hermitian and normal matrices.
//!
//! Cyclic Jacobi with complex plane rotations for the Hermitian case; the
//! normal case splits M = H₁ + i·H₂ into commuting Hermitian parts,
//! diagonalizes H₁, then diagonalizes H₂ compressed to each eigenvalue
//! cluster of H₁.

use num_complex::Complex64;

use crate::error::QError;
use crate::slice::CMatrix;

/// Default relative decomposition tolerance.
pub const TAU_EIG: f64 = 1e-10;
/// Relative gap below which H₁ eigenvalues are grouped into one cluster
/// before the H₂ stage.
pub const TAU_CLUSTER: f64 = 1e-7;

const MAX_SWEEPS: usize = 30;

/// Unitary U and eigenvalues with `M U = U diag(lambdas)`; eigenvalues sorted
/// by (Re, Im) ascending.
#[derive(Debug, Clone)]
pub struct EigDecomp {
    pub u: CMatrix,
    pub lambdas: Vec<Complex64>,
}

impl EigDecomp {
    pub fn dim(&self) -> usize {
        self.u.m
    }

    /// ‖M U − U diag(λ)‖_F.
    pub fn residual(&self, m: &CMatrix) -> f64 {
        let mu = m.mul(&self.u).unwrap();
        let mut acc = 0.0;
        let dim = self.dim();
        for r in 0..dim {
            for c in 0..dim {
                let d = mu.get(r, c) - self.u.get(r, c) * self.lambdas[c];
                acc += d.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// ‖UᴴU − I‖_F.
    pub fn unitarity_residual(&self) -> f64 {
        let g = self.u.hermitian_transpose().mul(&self.u).unwrap();
        g.sub(&CMatrix::identity(self.dim())).unwrap().norm_fro()
    }
}

fn off_diagonal_norm(h: &CMatrix) -> f64 {
    let m = h.m;
    let mut acc = 0.0;
    for r in 0..m {
        for c in 0..m {
            if r != c {
                acc += h.get(r, c).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation annihilating H[p][q], applied in place to H
/// (two-sided) and accumulated into U (right multiplication).
fn jacobi_rotate(h: &mut CMatrix, u: &mut CMatrix, p: usize, q: usize) {
    let b = h.get(p, q);
    let app = h.get(p, p).re;
    let aqq = h.get(q, q).re;
    let babs = b.norm();
    if babs == 0.0 {
        return;
    }
    // phase factor pulling the pivot onto the real axis
    let phase = b / babs;
    let half = phase.sqrt();

    let tau = (aqq - app) / (2.0 * babs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // V = diag(half, conj(half)) · [[c, s], [−s, c]]
    let vpp = half * c;
    let vpq = half * s;
    let vqp = -half.conj() * s;
    let vqq = half.conj() * c;

    let m = h.m;
    // H ← Vᴴ H (rows p, q)
    for col in 0..m {
        let hp = h.get(p, col);
        let hq = h.get(q, col);
        h.set(p, col, vpp.conj() * hp + vqp.conj() * hq);
        h.set(q, col, vpq.conj() * hp + vqq.conj() * hq);
    }
    // H ← H V and U ← U V (columns p, q)
    for row in 0..m {
        let hp = h.get(row, p);
        let hq = h.get(row, q);
        h.set(row, p, hp * vpp + hq * vqp);
        h.set(row, q, hp * vpq + hq * vqq);

        let up = u.get(row, p);
        let uq = u.get(row, q);
        u.set(row, p, up * vpp + uq * vqp);
        u.set(row, q, up * vpq + uq * vqq);
    }
}

fn sort_by_re_im(lambdas: &mut Vec<Complex64>, u: &mut CMatrix) {
    let m = u.m;
    let mut order: Vec<usize> = (0..lambdas.len()).collect();
    order.sort_by(|&a, &b| {
        (lambdas[a].re, lambdas[a].im)
            .partial_cmp(&(lambdas[b].re, lambdas[b].im))
            .unwrap()
    });
    let sorted: Vec<Complex64> = order.iter().map(|&k| lambdas[k]).collect();
    let mut unew = CMatrix::zero(m);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..m {
            unew.set(r, dst, u.get(r, src));
        }
    }
    *lambdas = sorted;
    *u = unew;
}

/// Diagonalize a Hermitian matrix by cyclic complex Jacobi sweeps.
pub fn eig_hermitian(h: &CMatrix, tau_eig: f64) -> Result<EigDecomp, QError> {
    let scale = h.norm_fro().max(f64::MIN_POSITIVE);
    if !h.is_hermitian(tau_eig) {
        return Err(QError::Domain(format!(
            "eig_hermitian: input is not Hermitian within {tau_eig:.1e} relative"
        )));
    }
    let m = h.m;
    // symmetrize to kill roundoff asymmetry; pivots then stay exactly real
    let mut work = h.add(&h.hermitian_transpose()).unwrap().scale(Complex64::new(0.5, 0.0));
    for k in 0..m {
        let d = work.get(k, k);
        work.set(k, k, Complex64::new(d.re, 0.0));
    }
    let mut u = CMatrix::identity(m);

    // rounding in the rotations themselves floors the off-diagonal norm near
    // m·ε·‖H‖, so anything tighter can never be reached for larger m
    let stop = (m as f64).max(4.0) * f64::EPSILON * scale;
    let mut converged = off_diagonal_norm(&work) <= stop;
    for _sweep in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                jacobi_rotate(&mut work, &mut u, p, q);
            }
        }
        converged = off_diagonal_norm(&work) <= stop;
    }
    if !converged {
        return Err(QError::Convergence(format!(
            "eig_hermitian: off-diagonal norm {:.3e} after {MAX_SWEEPS} sweeps (target {stop:.3e})",
            off_diagonal_norm(&work)
        )));
    }
    let mut lambdas: Vec<Complex64> =
        (0..m).map(|k| Complex64::new(work.get(k, k).re, 0.0)).collect();
    sort_by_re_im(&mut lambdas, &mut u);
    Ok(EigDecomp { u, lambdas })
}

/// Extract columns `cols` of U as an m×s matrix (row-major, rectangular).
fn columns(u: &CMatrix, cols: &[usize]) -> Vec<Complex64> {
    let m = u.m;
    let s = cols.len();
    let mut out = vec![Complex64::new(0.0, 0.0); m * s];
    for (cj, &c) in cols.iter().enumerate() {
        for r in 0..m {
            out[r * s + cj] = u.get(r, c);
        }
    }
    out
}

/// Diagonalize a normal matrix through its commuting Hermitian parts.
pub fn eig_normal(mat: &CMatrix, tau_eig: f64) -> Result<EigDecomp, QError> {
    let scale = mat.norm_fro().max(f64::MIN_POSITIVE);
    if !mat.is_normal(tau_eig.max(1e-12)) {
        return Err(QError::Domain("eig_normal: input is not normal within tolerance".into()));
    }
    let m = mat.m;
    let mh = mat.hermitian_transpose();
    let h1 = mat.add(&mh).unwrap().scale(Complex64::new(0.5, 0.0));
    let h2 = mat.sub(&mh).unwrap().scale(Complex64::new(0.0, -0.5));

    let dec1 = eig_hermitian(&h1, tau_eig)?;

    // group H1 eigenvalues whose gap is below the cluster threshold
    let tau_c = TAU_CLUSTER * scale;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for k in 0..m {
        let start_new = match clusters.last() {
            Some(cl) => {
                let prev = dec1.lambdas[*cl.last().unwrap()].re;
                (dec1.lambdas[k].re - prev).abs() > tau_c
            }
            None => true,
        };
        if start_new {
            clusters.push(vec![k]);
        } else {
            clusters.last_mut().unwrap().push(k);
        }
    }

    let mut u = CMatrix::zero(m);
    let mut lambdas = vec![Complex64::new(0.0, 0.0); m];
    let mut out_col = 0usize;
    for cluster in &clusters {
        let s = cluster.len();
        let w = columns(&dec1.u, cluster); // m×s
        // compress both parts onto the cluster subspace
        let mut c2 = CMatrix::zero(s);
        let mut c1 = CMatrix::zero(s);
        for a in 0..s {
            for b in 0..s {
                let mut acc2 = Complex64::new(0.0, 0.0);
                let mut acc1 = Complex64::new(0.0, 0.0);
                for r in 0..m {
                    let mut h2w = Complex64::new(0.0, 0.0);
                    let mut h1w = Complex64::new(0.0, 0.0);
                    for t in 0..m {
                        h2w += h2.get(r, t) * w[t * s + b];
                        h1w += h1.get(r, t) * w[t * s + b];
                    }
                    acc2 += w[r * s + a].conj() * h2w;
                    acc1 += w[r * s + a].conj() * h1w;
                }
                c2.set(a, b, acc2);
                c1.set(a, b, acc1);
            }
        }
        // H2 compressed to an H1 eigenspace is Hermitian up to commutator error
        let dec2 = eig_hermitian(&c2, (10.0 * tau_eig).max(1e-9)).map_err(|e| {
            QError::Internal(format!("eig_normal: cluster of size {s} failed: {e}"))
        })?;
        // refined real parts: Rayleigh quotients of the rotated cluster basis
        let c1v = c1.mul(&dec2.u).unwrap();
        let vh = dec2.u.hermitian_transpose();
        for k in 0..s {
            let mut re = Complex64::new(0.0, 0.0);
            for t in 0..s {
                re += vh.get(k, t) * c1v.get(t, k);
            }
            lambdas[out_col + k] = Complex64::new(re.re, dec2.lambdas[k].re);
        }
        // U columns: W · V
        for k in 0..s {
            for r in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..s {
                    acc += w[r * s + t] * dec2.u.get(t, k);
                }
                u.set(r, out_col + k, acc);
            }
        }
        out_col += s;
    }

    let mut dec = EigDecomp { u, lambdas };
    sort_by_re_im(&mut dec.lambdas, &mut dec.u);

    let resid = dec.residual(mat);
    if resid > 50.0 * tau_eig * scale {
        return Err(QError::Convergence(format!(
            "eig_normal: joint residual {resid:.3e} exceeds {:.3e}",
            50.0 * tau_eig * scale
        )));
    }
    Ok(dec)
}

/// Spectral projection `P = U D_sel Uᴴ` onto the selected eigenvalue indices.
pub fn eigenprojection<F: Fn(usize) -> bool>(dec: &EigDecomp, select: F) -> CMatrix {
    let m = dec.dim();
    let mut p = CMatrix::zero(m);
    for k in 0..m {
        if !select(k) {
            continue;
        }
        for r in 0..m {
            for c in 0..m {
                let v = p.get(r, c) + dec.u.get(r, k) * dec.u.get(c, k).conj();
                p.set(r, c, v);
            }
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(m: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut h = CMatrix::zero(m);
        for r in 0..m {
            h.set(r, r, c(rng.gen_range(-2.0..2.0), 0.0));
            for col in (r + 1)..m {
                let v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                h.set(r, col, v);
                h.set(col, r, v.conj());
            }
        }
        h
    }

    fn random_normal_c(m: usize, seed: u64) -> CMatrix {
        // unitary from Jacobi of a Hermitian draw, times complex diagonal
        let h = random_hermitian(m, seed);
        let dec = eig_hermitian(&h, TAU_EIG).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        let mut d = CMatrix::zero(m);
        for k in 0..m {
            d.set(k, k, c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
        }
        dec.u.mul(&d).unwrap().mul(&dec.u.hermitian_transpose()).unwrap()
    }

    #[test]
    fn hermitian_identity() {
        let dec = eig_hermitian(&CMatrix::identity(4), TAU_EIG).unwrap();
        for l in &dec.lambdas {
            assert!((l - c(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn hermitian_2x2_closed_form() {
        let h = CMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let dec = eig_hermitian(&h, TAU_EIG).unwrap();
        assert!((dec.lambdas[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((dec.lambdas[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn hermitian_random_residuals() {
        for seed in 0..10u64 {
            let h = random_hermitian(16, seed);
            let dec = eig_hermitian(&h, TAU_EIG).unwrap();
            assert!(dec.residual(&h) <= 1e-11 * h.norm_fro(), "seed {seed}");
            assert!(dec.unitarity_residual() <= 1e-12);
            for l in &dec.lambdas {
                assert_eq!(l.im, 0.0);
            }
        }
    }

    #[test]
    fn hermitian_rejects_nonhermitian() {
        let h = CMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(eig_hermitian(&h, TAU_EIG), Err(QError::Domain(_))));
    }

    #[test]
    fn off_diagonal_decreases_per_sweep() {
        let h = random_hermitian(12, 5);
        let mut work = h.clone();
        let mut u = CMatrix::identity(12);
        let mut prev = off_diagonal_norm(&work);
        for _ in 0..6 {
            for p in 0..12 {
                for q in (p + 1)..12 {
                    jacobi_rotate(&mut work, &mut u, p, q);
                }
            }
            let cur = off_diagonal_norm(&work);
            assert!(cur <= prev + 1e-12 * h.norm_fro());
            prev = cur;
        }
        assert!(prev <= 1e-8 * h.norm_fro());
    }

    #[test]
    fn normal_diagonal_permutation() {
        let m = CMatrix::new(2, vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]).unwrap();
        let dec = eig_normal(&m, TAU_EIG).unwrap();
        assert!((dec.lambdas[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((dec.lambdas[1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn normal_rotation_2x2() {
        let m =
            CMatrix::new(2, vec![c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let dec = eig_normal(&m, TAU_EIG).unwrap();
        assert!((dec.lambdas[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((dec.lambdas[1] - c(0.0, 1.0)).norm() < 1e-12);
        assert!(dec.residual(&m) < 1e-12);
    }

    #[test]
    fn normal_random_residuals() {
        for seed in 0..10u64 {
            let m = random_normal_c(12, seed);
            let dec = eig_normal(&m, TAU_EIG).unwrap();
            assert!(dec.residual(&m) <= 1e-10 * m.norm_fro(), "seed {seed}");
            assert!(dec.unitarity_residual() <= 1e-11);
        }
    }

    #[test]
    fn normal_with_degenerate_real_parts() {
        // i and −i share H1 eigenvalue 0: the cluster stage must separate them
        let m = CMatrix::new(
            4,
            vec![
                c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0),
                c(0.0, 0.0), c(0.0, -1.0), c(0.0, 0.0), c(0.0, 0.0),
                c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0),
                c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0),
            ],
        )
        .unwrap();
        let dec = eig_normal(&m, TAU_EIG).unwrap();
        assert!((dec.lambdas[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((dec.lambdas[1] - c(0.0, 1.0)).norm() < 1e-12);
        assert!((dec.lambdas[2] - c(0.0, 1.0)).norm() < 1e-12);
        assert!((dec.lambdas[3] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn normal_rejects_nonnormal() {
        let m = CMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(eig_normal(&m, TAU_EIG), Err(QError::Domain(_))));
    }

    #[test]
    fn projection_closed_form() {
        let h = CMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let dec = eig_hermitian(&h, TAU_EIG).unwrap();
        // select λ = 1 (index 1 after ascending sort)
        let p = eigenprojection(&dec, |k| k == 1);
        for (got, want) in p.entries.iter().zip([0.5, 0.5, 0.5, 0.5]) {
            assert!((got - c(want, 0.0)).norm() < 1e-14);
        }
        let all = eigenprojection(&dec, |_| true);
        assert!(all.sub(&CMatrix::identity(2)).unwrap().norm_fro() < 1e-13);
        let none = eigenprojection(&dec, |_| false);
        assert!(none.norm_fro() == 0.0);
    }

    #[test]
    fn projections_idempotent_orthogonal() {
        let m = random_normal_c(8, 3);
        let dec = eig_normal(&m, TAU_EIG).unwrap();
        let p1 = eigenprojection(&dec, |k| k < 4);
        let p2 = eigenprojection(&dec, |k| k >= 4);
        assert!(p1.mul(&p1).unwrap().sub(&p1).unwrap().norm_fro() <= 2.0 * TAU_EIG);
        assert!(p1.sub(&p1.hermitian_transpose()).unwrap().norm_fro() <= 2.0 * TAU_EIG);
        assert!(p1.mul(&p2).unwrap().norm_fro() <= 2.0 * TAU_EIG);
    }
}
