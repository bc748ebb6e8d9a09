//! Shared test helpers: an eigenvalue oracle independent of the Jacobi path
//! (characteristic polynomial + Durand-Kerner root finding), and random
//! complex test matrices.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qspectral::eig;
use qspectral::slice::CMatrix;

/// Characteristic polynomial coefficients of M by Faddeev-LeVerrier:
/// returns c with det(λI − M) = λ^m + c[0]λ^{m−1} + ... + c[m−1].
pub fn char_poly(m: &CMatrix) -> Vec<Complex64> {
    let dim = m.m;
    let mut coeffs = Vec::with_capacity(dim);
    let mut aux = CMatrix::identity(dim);
    for k in 1..=dim {
        aux = m.mul(&aux).unwrap();
        let trace: Complex64 = (0..dim).map(|r| aux.get(r, r)).sum();
        let c = -trace / k as f64;
        coeffs.push(c);
        for r in 0..dim {
            aux.set(r, r, aux.get(r, r) + c);
        }
    }
    coeffs
}

/// All roots of λ^m + c[0]λ^{m−1} + ... + c[m−1] by Durand-Kerner iteration.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let deg = coeffs.len();
    if deg == 0 {
        return Vec::new();
    }
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for &c in coeffs {
            acc = acc * z + c;
        }
        acc
    };
    // distinct non-real starting points on a circle above the root bound
    let bound = 1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4;
            Complex64::from_polar(bound * 0.7, angle)
        })
        .collect();
    for _iter in 0..500 {
        let mut moved: f64 = 0.0;
        for k in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for l in 0..deg {
                if l != k {
                    denom *= roots[k] - roots[l];
                }
            }
            let delta = eval(roots[k]) / denom;
            roots[k] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-13 * bound {
            break;
        }
    }
    roots
}

/// Greedy multiset match; returns the worst pairing distance.
pub fn match_multisets(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut remaining: Vec<Complex64> = b.to_vec();
    let mut worst: f64 = 0.0;
    for x in a {
        let (idx, dist) = remaining
            .iter()
            .enumerate()
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
            .unwrap();
        worst = worst.max(dist);
        remaining.swap_remove(idx);
    }
    worst
}

pub fn random_hermitian(m: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = CMatrix::zero(m);
    for r in 0..m {
        h.set(r, r, Complex64::new(rng.gen_range(-2.0..2.0), 0.0));
        for c in (r + 1)..m {
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            h.set(r, c, v);
            h.set(c, r, v.conj());
        }
    }
    h
}

/// Random normal complex matrix U·diag·Uᴴ with U from a Hermitian draw.
pub fn random_normal_c(m: usize, seed: u64) -> CMatrix {
    let h = random_hermitian(m, seed);
    let dec = eig::eig_hermitian(&h, eig::TAU_EIG).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut d = CMatrix::zero(m);
    for k in 0..m {
        d.set(k, k, Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
    }
    dec.u.mul(&d).unwrap().mul(&dec.u.hermitian_transpose()).unwrap()
}
