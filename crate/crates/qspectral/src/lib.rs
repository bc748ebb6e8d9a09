//! Finite-dimensional spectral theory over the quaternions.
//!
//! Computes the spherical spectrum, the quaternionic spectral measure, and
//! the T = A + JB decomposition of bounded normal right-linear operators on
//! right quaternionic Hilbert spaces H^n, by embedding operators into
//! structured 2n×2n complex matrices (the slice complexification) and
//! diagonalizing there with a self-contained Jacobi eigensolver.
//!
//! Conventions fixed throughout:
//! - scalars act on the right: `x·q`, `T(xq) = (Tx)q`;
//! - `⟨x,y⟩ = Σ_k conj(y_k) x_k`, so `⟨xp,y⟩ = ⟨x,y⟩p`;
//! - the slice basis is e₁..e_n, e₁j..e_n j, giving χ(T) the block form
//!   `[[A1, −conj(A2)], [A2, conj(A1)]]`;
//! - eigenvalues sort by (Re, Im) ascending.

pub mod eig;
pub mod error;
pub mod io;
pub mod qspace;
pub mod quaternion;
pub mod slice;
pub mod spectral;
pub mod verify;

pub use error::QError;
pub use qspace::{QOperator, QVector};
pub use quaternion::{EigenSphere, Quaternion, SliceFrame};
