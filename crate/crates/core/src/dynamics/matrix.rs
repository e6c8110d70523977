//! Dense 2×2 complex matrices and the Pauli basis.

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeSeq, Serializer};
use std::ops::{Add, Mul, Neg, Sub};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// A 2×2 complex matrix stored row-major: `[m00, m01, m10, m11]`.
///
/// Propagators, gates and `Y = W†U` all use this type; operations that
/// produce propagators keep `‖U†U − I‖_max ≤ 1e-12`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [Complex64; 4]);

impl Mat2 {
    pub const fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Self([m00, m01, m10, m11])
    }

    pub const fn identity() -> Self {
        Self([ONE, ZERO, ZERO, ONE])
    }

    pub const fn zeros() -> Self {
        Self([ZERO; 4])
    }

    pub const fn sigma_x() -> Self {
        Self([ZERO, ONE, ONE, ZERO])
    }

    pub const fn sigma_y() -> Self {
        Self([ZERO, Complex64::new(0.0, -1.0), I, ZERO])
    }

    pub const fn sigma_z() -> Self {
        Self([ONE, ZERO, ZERO, Complex64::new(-1.0, 0.0)])
    }

    pub fn diag(d0: Complex64, d1: Complex64) -> Self {
        Self([d0, ZERO, ZERO, d1])
    }

    /// `c0·I + cx·σx + cy·σy + cz·σz` with complex coefficients.
    pub fn from_pauli(c0: Complex64, cx: Complex64, cy: Complex64, cz: Complex64) -> Self {
        Self([c0 + cz, cx - I * cy, cx + I * cy, c0 - cz])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[2 * row + col]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0] + self.0[3]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    pub fn dagger(&self) -> Self {
        let [a, b, c, d] = self.0;
        Self([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    /// `Tr(self · other)` without forming the product.
    #[inline]
    pub fn trace_product(&self, other: &Mat2) -> Complex64 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = other.0;
        a * e + b * g + c * f + d * h
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.dagger() * *self - Mat2::identity()).max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (*self - self.dagger()).max_abs() <= tol
    }

    /// Real-valued `[re, im]` pairs, row-major.
    pub fn to_pairs(&self) -> [[f64; 2]; 4] {
        self.0.map(|z| [z.re, z.im])
    }
}

impl Default for Mat2 {
    fn default() -> Self {
        Self::identity()
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    #[inline]
    fn mul(self, rhs: Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o += r;
        }
        Mat2(out)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o -= r;
        }
        Mat2(out)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        Mat2(self.0.map(|z| -z))
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(4))?;
        for pair in self.to_pairs() {
            seq.serialize_element(&pair)?;
        }
        seq.end()
    }
}
