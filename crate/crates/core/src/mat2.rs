//! Dense 2×2 complex matrices.
//!
//! Every operator in the qubit model (Hamiltonian, propagator, metric,
//! projectors, density matrices) is a [`Mat2C`]. The type is `Copy` and all
//! arithmetic is done by hand on the four entries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Complex 2-vector, `[c0, c1]` in the computational basis.
pub type Vec2C = [Complex64; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major 2×2 complex matrix.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat2C {
    pub m: [[Complex64; 2]; 2],
}

impl Mat2C {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    /// Matrix with real entries.
    pub const fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(d, 0.0),
        )
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn sigma_x() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    pub const fn sigma_y() -> Self {
        Self::new(ZERO, Complex64::new(0.0, -1.0), I, ZERO)
    }

    pub const fn sigma_z() -> Self {
        Self::new(ONE, ZERO, ZERO, Complex64::new(-1.0, 0.0))
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &Vec2C, v: &Vec2C) -> Self {
        Self::new(
            u[0] * v[0].conj(),
            u[0] * v[1].conj(),
            u[1] * v[0].conj(),
            u[1] * v[1].conj(),
        )
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.m[0][0].conj(),
            self.m[1][0].conj(),
            self.m[0][1].conj(),
            self.m[1][1].conj(),
        )
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::new(
            f(self.m[0][0]),
            f(self.m[0][1]),
            f(self.m[1][0]),
            f(self.m[1][1]),
        )
    }

    /// Inverse via the adjugate; `None` when `|det|` is below `1e-300`.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() < 1e-300 {
            return None;
        }
        let inv = det.inv();
        Some(Self::new(
            self.m[1][1] * inv,
            -self.m[0][1] * inv,
            -self.m[1][0] * inv,
            self.m[0][0] * inv,
        ))
    }

    pub fn apply(&self, v: &Vec2C) -> Vec2C {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// `⟨u|A|v⟩`.
    pub fn sandwich(&self, u: &Vec2C, v: &Vec2C) -> Complex64 {
        let av = self.apply(v);
        u[0].conj() * av[0] + u[1].conj() * av[1]
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn norm_1(&self) -> f64 {
        let c0 = self.m[0][0].norm() + self.m[1][0].norm();
        let c1 = self.m[0][1].norm() + self.m[1][1].norm();
        c0.max(c1)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).norm_max()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (*self * self.adjoint()).max_abs_diff(&Self::identity()) <= tol
    }

    /// True when the Hermitian part is positive-definite with smallest
    /// eigenvalue above `tol`, and the matrix is Hermitian within `tol`.
    pub fn is_positive_definite(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.hermitian_eigenvalues().0 > tol
    }

    /// Eigenvalues of a general 2×2 matrix from its characteristic polynomial.
    pub fn eigenvalues(&self) -> (Complex64, Complex64) {
        let half_tr = self.trace() * 0.5;
        let disc = (half_tr * half_tr - self.det()).sqrt();
        (half_tr + disc, half_tr - disc)
    }

    /// Ascending eigenvalues of the Hermitian part `(A + A†)/2`.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let b = (self.m[0][1] + self.m[1][0].conj()) * 0.5;
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        (mean - radius, mean + radius)
    }
}

impl Add for Mat2C {
    type Output = Mat2C;
    fn add(self, rhs: Mat2C) -> Mat2C {
        Mat2C::new(
            self.m[0][0] + rhs.m[0][0],
            self.m[0][1] + rhs.m[0][1],
            self.m[1][0] + rhs.m[1][0],
            self.m[1][1] + rhs.m[1][1],
        )
    }
}

impl Sub for Mat2C {
    type Output = Mat2C;
    fn sub(self, rhs: Mat2C) -> Mat2C {
        Mat2C::new(
            self.m[0][0] - rhs.m[0][0],
            self.m[0][1] - rhs.m[0][1],
            self.m[1][0] - rhs.m[1][0],
            self.m[1][1] - rhs.m[1][1],
        )
    }
}

impl Neg for Mat2C {
    type Output = Mat2C;
    fn neg(self) -> Mat2C {
        self.map(|z| -z)
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, rhs: Mat2C) -> Mat2C {
        let a = &self.m;
        let b = &rhs.m;
        Mat2C::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<Complex64> for Mat2C {
    type Output = Mat2C;
    fn mul(self, rhs: Complex64) -> Mat2C {
        self.scale(rhs)
    }
}

impl Mul<f64> for Mat2C {
    type Output = Mat2C;
    fn mul(self, rhs: f64) -> Mat2C {
        self.scale_real(rhs)
    }
}

impl fmt::Debug for Mat2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (Mat2C::sigma_x(), Mat2C::sigma_y(), Mat2C::sigma_z());
        assert!((x * x).max_abs_diff(&Mat2C::identity()) < 1e-15);
        assert!((x * y).max_abs_diff(&z.scale(I)) < 1e-15);
        assert!((y * z).max_abs_diff(&x.scale(I)) < 1e-15);
        for p in [x, y, z] {
            assert!(p.is_hermitian(0.0));
            assert!(p.is_unitary(1e-15));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = Mat2C::new(
            Complex64::new(1.0, 2.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.3, 1.0),
            Complex64::new(2.0, -1.0),
        );
        let inv = a.inverse().unwrap();
        assert!((a * inv).max_abs_diff(&Mat2C::identity()) < 1e-14);
        assert!(Mat2C::zero().inverse().is_none());
    }

    #[test]
    fn eigenvalues_of_jordan_block() {
        let j = Mat2C::real(2.0, 1.0, 0.0, 2.0);
        let (a, b) = j.eigenvalues();
        assert!((a - 2.0).norm() < 1e-15 && (b - 2.0).norm() < 1e-15);
    }

    #[test]
    fn hermitian_eigenvalues_sorted() {
        let h = Mat2C::new(ONE * 2.0, I, -I, ONE * 2.0);
        assert_eq!(h.hermitian_eigenvalues(), (1.0, 3.0));
        assert!(h.is_positive_definite(1e-12));
        assert!(!Mat2C::sigma_z().is_positive_definite(1e-12));
    }

    #[test]
    fn norms() {
        let a = Mat2C::real(1.0, -2.0, 3.0, 0.5);
        assert_eq!(a.norm_max(), 3.0);
        assert_eq!(a.norm_1(), 4.0);
    }
}
