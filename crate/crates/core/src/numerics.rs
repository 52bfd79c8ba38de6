//! Closed-form linear algebra for 2x2 complex matrices.
//!
//! A 2x2 matrix splits as `m = a*I + B` with `a = tr(m)/2` and `B`
//! traceless, and `B^2 = lambda^2 * I` with `lambda^2 = -det(B)`.
//! That gives the exponential
//!
//! ```text
//! exp(-i m t) = e^{-i a t} [ cos(lambda t) I - i sin(lambda t)/lambda * B ]
//! ```
//!
//! evaluated here with the two scalar exponents fused,
//! `e^{-i a t} cos(lambda t) = (e^{-i(a-lambda)t} + e^{-i(a+lambda)t})/2`,
//! so that a decaying prefactor and a growing cosh never meet as
//! `0 * inf`. The eigenproblem solves the characteristic polynomial
//! with the dominant root picked first and the other recovered from the
//! determinant, which keeps the small eigenvalue of a stiff propagator
//! accurate in relative terms.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub type C64 = Complex64;

/// `|lambda t|` below which `sin(z)/z` switches to its power series;
/// the truncation error of the series at this point is ~1e-25 relative.
const SERIES_THRESHOLD: f64 = 1e-6;

/// Relative eigenvalue gap below which `eig2` reports a degeneracy.
const DEGENERACY_TOL: f64 = 1e-9;

/// Dense 2x2 complex matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a11: C64,
    pub a12: C64,
    pub a21: C64,
    pub a22: C64,
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 {
        a11: C64::ZERO,
        a12: C64::ZERO,
        a21: C64::ZERO,
        a22: C64::ZERO,
    };

    pub const IDENTITY: Mat2 = Mat2 {
        a11: C64::ONE,
        a12: C64::ZERO,
        a21: C64::ZERO,
        a22: C64::ONE,
    };

    pub fn new(a11: C64, a12: C64, a21: C64, a22: C64) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn diag(a: C64, b: C64) -> Self {
        Mat2::new(a, C64::ZERO, C64::ZERO, b)
    }

    pub fn trace(&self) -> C64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> C64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn conj_transpose(&self) -> Mat2 {
        Mat2::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    pub fn is_finite(&self) -> bool {
        [self.a11, self.a12, self.a21, self.a22]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entrywise modulus of the difference to `other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        [
            self.a11 - other.a11,
            self.a12 - other.a12,
            self.a21 - other.a21,
            self.a22 - other.a22,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }
}

impl std::ops::Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 + rhs.a11,
            self.a12 + rhs.a12,
            self.a21 + rhs.a21,
            self.a22 + rhs.a22,
        )
    }
}

impl std::ops::Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 - rhs.a11,
            self.a12 - rhs.a12,
            self.a21 - rhs.a21,
            self.a22 - rhs.a22,
        )
    }
}

impl std::ops::Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 * rhs.a11 + self.a12 * rhs.a21,
            self.a11 * rhs.a12 + self.a12 * rhs.a22,
            self.a21 * rhs.a11 + self.a22 * rhs.a21,
            self.a21 * rhs.a12 + self.a22 * rhs.a22,
        )
    }
}

impl std::ops::Mul<C64> for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: C64) -> Mat2 {
        Mat2::new(self.a11 * rhs, self.a12 * rhs, self.a21 * rhs, self.a22 * rhs)
    }
}

impl std::ops::Mul<[C64; 2]> for Mat2 {
    type Output = [C64; 2];
    fn mul(self, v: [C64; 2]) -> [C64; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }
}

/// `sin(z)/z`, with the series `1 - z^2/6 + z^4/120` below the
/// cancellation threshold.
fn sin_over(z: C64) -> C64 {
    if z.norm() < SERIES_THRESHOLD {
        let z2 = z * z;
        C64::ONE - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Closed-form `exp(-i m t)`.
///
/// `t` may be zero or negative. Errors only on non-finite input.
pub fn mat2_exp(m: Mat2, t: f64) -> Result<Mat2> {
    if !m.is_finite() {
        return Err(Error::NonFinite("mat2_exp: matrix entries"));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("mat2_exp: duration t"));
    }
    let a = m.trace() * 0.5;
    let b = m - Mat2::diag(a, a);
    let lambda = (-b.det()).sqrt();
    let z = lambda * t;

    // alpha*I + beta*B with alpha = e^{-iat} cos z, beta = -i e^{-iat} sin(z)/lambda.
    let (alpha, beta) = if z.norm() < SERIES_THRESHOLD {
        let phase = (-C64::I * a * t).exp();
        (phase * z.cos(), -C64::I * t * phase * sin_over(z))
    } else {
        let p = (-C64::I * (a - lambda) * t).exp();
        let q = (-C64::I * (a + lambda) * t).exp();
        ((p + q) * 0.5, (q - p) / (2.0 * lambda))
    };

    Ok(Mat2::new(
        alpha + beta * b.a11,
        beta * b.a12,
        beta * b.a21,
        alpha + beta * b.a22,
    ))
}

/// Eigendecomposition of a 2x2 complex matrix.
#[derive(Clone, Copy, Debug)]
pub struct Eig2 {
    /// Eigenvalues ordered by descending modulus; on a degeneracy both
    /// entries equal `tr/2`, the exact double root.
    pub values: [C64; 2],
    /// Unit eigenvectors, `vectors[k]` belonging to `values[k]`. For a
    /// defective matrix the single eigenvector is returned twice.
    pub vectors: [[C64; 2]; 2],
    /// Set when the eigenvalue gap is below `1e-9 * (1 + spectral scale)`.
    pub degenerate: bool,
}

fn unit_eigenvector(m: &Mat2, lambda: C64) -> [C64; 2] {
    // Null vector of (m - lambda I): either (a12, lambda - a11) or
    // (lambda - a22, a21); take the better conditioned of the two.
    let va = [m.a12, lambda - m.a11];
    let vb = [lambda - m.a22, m.a21];
    let na = va[0].norm_sqr() + va[1].norm_sqr();
    let nb = vb[0].norm_sqr() + vb[1].norm_sqr();
    let scale = m.a11.norm() + m.a12.norm() + m.a21.norm() + m.a22.norm() + lambda.norm();
    let floor = (scale * 1e-15).powi(2);
    let v = if na >= nb { va } else { vb };
    let n = na.max(nb);
    if n <= floor {
        // (m - lambda I) is numerically zero: scalar matrix, any vector works.
        return [C64::ONE, C64::ZERO];
    }
    let inv = 1.0 / n.sqrt();
    [v[0] * inv, v[1] * inv]
}

/// Eigenvalues and unit eigenvectors via the characteristic polynomial.
///
/// The dominant root is formed without cancellation and the second as
/// `det / dominant`, so both stay accurate relative to their own size.
pub fn eig2(m: &Mat2) -> Result<Eig2> {
    if !m.is_finite() {
        return Err(Error::NonFinite("eig2: matrix entries"));
    }
    let h = m.trace() * 0.5;
    let det = m.det();
    let mut s = (h * h - det).sqrt();
    if (h.conj() * s).re < 0.0 {
        s = -s;
    }
    let big = h + s;
    let small = if big.norm() > 0.0 { det / big } else { big };
    let scale = big.norm().max(small.norm());
    let degenerate = (big - small).norm() < DEGENERACY_TOL * (1.0 + scale);

    if degenerate {
        let v = if (*m - Mat2::diag(h, h)).max_abs_diff(&Mat2::ZERO) <= 1e-15 * (1.0 + scale) {
            // Scalar matrix: full eigenspace.
            return Ok(Eig2 {
                values: [h, h],
                vectors: [[C64::ONE, C64::ZERO], [C64::ZERO, C64::ONE]],
                degenerate: true,
            });
        } else {
            unit_eigenvector(m, h)
        };
        return Ok(Eig2 {
            values: [h, h],
            vectors: [v, v],
            degenerate: true,
        });
    }

    Ok(Eig2 {
        values: [big, small],
        vectors: [unit_eigenvector(m, big), unit_eigenvector(m, small)],
        degenerate: false,
    })
}
