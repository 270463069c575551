//! Small dense matrices for the one- and two-qubit gates used throughout.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;

pub type C64 = Complex64;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

pub fn identity() -> Matrix2<C64> {
    Matrix2::identity()
}

pub fn hadamard() -> Matrix2<C64> {
    let h = c(FRAC_1_SQRT_2, 0.0);
    Matrix2::new(h, h, h, -h)
}

/// Phase gate `K = diag(1, i)`.
pub fn phase_k() -> Matrix2<C64> {
    Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0))
}

pub fn sigma_x() -> Matrix2<C64> {
    Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
}

pub fn sigma_y() -> Matrix2<C64> {
    Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
}

pub fn sigma_z() -> Matrix2<C64> {
    Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
}

/// `Λ(e^{iθ}) = diag(1, e^{iθ})`.
pub fn phase_shift(theta: f64) -> Matrix2<C64> {
    Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), cis(theta))
}

/// The order-3 Clifford `T = e^{iπ/4} K H`, cycling `X → Z → Y → X`.
pub fn t_op() -> Matrix2<C64> {
    phase_k() * hadamard() * cis(FRAC_PI_4)
}

/// `A = (σx + σy)/√2`, the involution whose eigenstates are `|A_0⟩`, `|A_1⟩`.
pub fn a_op() -> Matrix2<C64> {
    (sigma_x() + sigma_y()) * c(FRAC_1_SQRT_2, 0.0)
}

/// `W = diag(1, e^{iπ/4})`, with `WσzW† = σz` and `WσxW† = A`.
pub fn w_op() -> Matrix2<C64> {
    phase_shift(FRAC_PI_4)
}

/// `m·σ` for a real 3-vector `m`.
pub fn bloch_operator(m: [f64; 3]) -> Matrix2<C64> {
    sigma_x() * c(m[0], 0.0) + sigma_y() * c(m[1], 0.0) + sigma_z() * c(m[2], 0.0)
}

/// Controlled-NOT with the first (most significant) qubit as control.
pub fn cnot() -> Matrix4<C64> {
    let o = c(1.0, 0.0);
    let z = c(0.0, 0.0);
    Matrix4::new(o, z, z, z, z, o, z, z, z, z, z, o, z, z, o, z)
}

/// `U M U†`.
pub fn conjugate(u: &Matrix2<C64>, m: &Matrix2<C64>) -> Matrix2<C64> {
    u * m * u.adjoint()
}

/// Largest entrywise deviation of `U†U` from the identity.
pub fn unitarity_error(u: &DMatrix<C64>) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let prod = u.adjoint() * u;
    let mut worst = 0.0f64;
    for (i, j) in (0..u.nrows()).flat_map(|i| (0..u.nrows()).map(move |j| (i, j))) {
        let want = if i == j { 1.0 } else { 0.0 };
        worst = worst.max((prod[(i, j)] - c(want, 0.0)).norm());
    }
    worst
}

pub fn max_abs_diff(a: &Matrix2<C64>, b: &Matrix2<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Removes the global phase: scales so that the first entry of largest
/// modulus is real and positive.
pub fn canonical_phase(m: &Matrix2<C64>) -> Matrix2<C64> {
    let mut best = m[(0, 0)];
    for v in m.iter() {
        if v.norm() > best.norm() + 1e-9 {
            best = *v;
        }
    }
    if best.norm() == 0.0 {
        return *m;
    }
    m * (best.conj() / best.norm())
}

/// `a = e^{iφ} b` for some phase `φ`, within `tol`.
pub fn equal_up_to_phase(a: &Matrix2<C64>, b: &Matrix2<C64>, tol: f64) -> bool {
    // tr(b† a) = 2 e^{iφ} when a = e^{iφ} b and both are unitary.
    let t = (b.adjoint() * a).trace();
    if t.norm() < 1e-12 {
        return false;
    }
    let phase = t / t.norm();
    max_abs_diff(a, &(b * phase)) < tol
}
