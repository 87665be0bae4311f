//! Exact SU(2) arithmetic on scalar–vector components.
//!
//! A unitary is stored as a real 4-tuple `(r0, r)` with the matrix view
//!
//! ```text
//! U = r0 * I + i * (r_x * sigma_x + r_y * sigma_y + r_z * sigma_z)
//!   = [ r0 + i r_z    r_y + i r_x ]
//!     [ -r_y + i r_x  r0 - i r_z  ]
//! ```
//!
//! and the unit-norm constraint `r0^2 + |r|^2 = 1` (det U = 1). The global
//! phase is physical state here: `U` and `-U` are distinct elements and
//! [`gate_fidelity`] distinguishes them. Products of many rotations drift
//! off the unit sphere only through rounding; compositions renormalize
//! whenever the squared norm strays further than `1e-13` from one.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Squared-norm drift tolerated before a composition result is rescaled
/// back onto the unit sphere.
const RENORM_THRESHOLD: f64 = 1e-13;

/// Acceptable deviation of `|axis|` from one in [`Unitary2::from_axis_angle`].
const UNIT_AXIS_TOLERANCE: f64 = 1e-9;

/// A real 3-vector in the Pauli basis, used both for rotation axes and for
/// Bloch vectors being transported.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    /// The zero vector.
    pub const ZERO: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 0.0 };
    /// Unit vector along x.
    pub const X: BlochVector = BlochVector { x: 1.0, y: 0.0, z: 0.0 };
    /// Unit vector along y.
    pub const Y: BlochVector = BlochVector { x: 0.0, y: 1.0, z: 0.0 };
    /// Unit vector along z.
    pub const Z: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 1.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    /// Euclidean inner product.
    pub fn dot(self, other: BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Right-handed cross product `self x other`.
    pub fn cross(self, other: BlochVector) -> BlochVector {
        BlochVector {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    /// Euclidean length.
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Same direction, unit length. The caller must not pass the zero
    /// vector; lengths anywhere near machine zero have no direction left.
    pub fn normalized(self) -> BlochVector {
        let n = self.norm();
        debug_assert!(n > 0.0, "cannot normalize a zero vector");
        self.scaled(1.0 / n)
    }

    /// Scalar multiple.
    pub fn scaled(self, k: f64) -> BlochVector {
        BlochVector { x: k * self.x, y: k * self.y, z: k * self.z }
    }
}

impl std::ops::Add for BlochVector {
    type Output = BlochVector;
    fn add(self, rhs: BlochVector) -> BlochVector {
        BlochVector { x: self.x + rhs.x, y: self.y + rhs.y, z: self.z + rhs.z }
    }
}

impl std::ops::Sub for BlochVector {
    type Output = BlochVector;
    fn sub(self, rhs: BlochVector) -> BlochVector {
        BlochVector { x: self.x - rhs.x, y: self.y - rhs.y, z: self.z - rhs.z }
    }
}

impl std::ops::Neg for BlochVector {
    type Output = BlochVector;
    fn neg(self) -> BlochVector {
        BlochVector { x: -self.x, y: -self.y, z: -self.z }
    }
}

/// An SU(2) element in scalar–vector form. See the module docs for the
/// storage convention and matrix view.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2 {
    r0: f64,
    r: BlochVector,
}

impl Unitary2 {
    /// The identity operator.
    pub const IDENTITY: Unitary2 = Unitary2 { r0: 1.0, r: BlochVector::ZERO };

    /// `exp(i * a * (axis . sigma)) = cos(a) I + i sin(a) (axis . sigma)`.
    ///
    /// `axis` must be unit length to within `1e-9`; `half_angle` is the
    /// coefficient `a` above, i.e. half the Bloch-sphere rotation angle.
    pub fn from_axis_angle(axis: BlochVector, half_angle: f64) -> Result<Self> {
        let norm = axis.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_AXIS_TOLERANCE {
            return Err(Error::NonUnitDirection { norm });
        }
        let (sin, cos) = half_angle.sin_cos();
        Ok(Unitary2 { r0: cos, r: axis.scaled(sin) })
    }

    /// `exp(i * a * sigma_x)`.
    pub fn rotation_x(a: f64) -> Self {
        let (sin, cos) = a.sin_cos();
        Unitary2 { r0: cos, r: BlochVector::new(sin, 0.0, 0.0) }
    }

    /// `exp(i * a * sigma_y)`.
    pub fn rotation_y(a: f64) -> Self {
        let (sin, cos) = a.sin_cos();
        Unitary2 { r0: cos, r: BlochVector::new(0.0, sin, 0.0) }
    }

    /// `exp(i * a * sigma_z)`.
    pub fn rotation_z(a: f64) -> Self {
        let (sin, cos) = a.sin_cos();
        Unitary2 { r0: cos, r: BlochVector::new(0.0, 0.0, sin) }
    }

    /// Builds an element from raw components, rescaling onto the unit
    /// sphere when rounding has pushed the squared norm more than
    /// `1e-13` away from one. Intended for results of exact formulas and
    /// numerically projected matrices, not arbitrary 4-tuples.
    pub(crate) fn from_components(r0: f64, r: BlochVector) -> Self {
        let norm_sq = r0 * r0 + r.dot(r);
        if (norm_sq - 1.0).abs() > RENORM_THRESHOLD {
            let inv = 1.0 / norm_sq.sqrt();
            Unitary2 { r0: r0 * inv, r: r.scaled(inv) }
        } else {
            Unitary2 { r0, r }
        }
    }

    /// Scalar component `r0 = Re tr(U) / 2`.
    pub fn r0(self) -> f64 {
        self.r0
    }

    /// Vector component `r` with `U = r0 I + i r . sigma`.
    pub fn r(self) -> BlochVector {
        self.r
    }

    /// The product `self * rhs` (apply `rhs` first when the operands are
    /// time-evolution operators).
    ///
    /// In scalar–vector components the product is
    /// `(a0 b0 - a . b, a0 b + b0 a - a x b)`; the negated cross term is
    /// fixed by the matrix view `U = r0 I + i r . sigma` together with
    /// `sigma_j sigma_k = i eps_{jkl} sigma_l` (for j != k), and is the
    /// mirror image of the Hamilton quaternion rule.
    pub fn compose(self, rhs: Unitary2) -> Unitary2 {
        let r0 = self.r0 * rhs.r0 - self.r.dot(rhs.r);
        let r = rhs.r.scaled(self.r0) + self.r.scaled(rhs.r0) - self.r.cross(rhs.r);
        Unitary2::from_components(r0, r)
    }

    /// Hermitian adjoint (= inverse): `(r0, r) -> (r0, -r)`.
    pub fn dagger(self) -> Unitary2 {
        Unitary2 { r0: self.r0, r: -self.r }
    }

    /// Transports a Bloch vector: returns `w` with
    /// `U (v . sigma) U^dagger = w . sigma`. Expanding the product gives
    ///
    /// ```text
    /// w = (r0^2 - |r|^2) v + 2 (r . v) r + 2 r0 (v x r)
    /// ```
    ///
    /// which is a proper rotation, so `|w| = |v|` and the global sign of
    /// `U` drops out.
    pub fn conjugate_bloch(self, v: BlochVector) -> BlochVector {
        let coeff = self.r0 * self.r0 - self.r.dot(self.r);
        v.scaled(coeff) + self.r.scaled(2.0 * self.r.dot(v)) + v.cross(self.r).scaled(2.0 * self.r0)
    }

    /// The matrix view, rows indexed first.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let Unitary2 { r0, r } = self;
        [
            [Complex64::new(r0, r.z), Complex64::new(r.y, r.x)],
            [Complex64::new(-r.y, r.x), Complex64::new(r0, -r.z)],
        ]
    }

    /// Largest entrywise distance `max_ij |A_ij - B_ij|` between the two
    /// matrix views. Sensitive to global phase, like [`gate_fidelity`].
    pub fn entrywise_distance(self, other: Unitary2) -> f64 {
        let a = self.matrix();
        let b = other.matrix();
        let mut worst = 0.0f64;
        for row in 0..2 {
            for col in 0..2 {
                worst = worst.max((a[row][col] - b[row][col]).norm());
            }
        }
        worst
    }

    /// Projects a numerically computed, nearly unitary 2x2 matrix onto
    /// SU(2) by reading off its scalar–vector components entrywise
    /// (averaging the redundant entries) and rescaling to unit norm.
    ///
    /// For a matrix within `eps` of an SU(2) element the result is within
    /// `O(eps)` of it; the anti-Hermitian/traceless residue that a general
    /// perturbation adds is simply discarded by the component averaging.
    pub fn project_from_matrix(m: &[[Complex64; 2]; 2]) -> Unitary2 {
        let r0 = 0.5 * (m[0][0].re + m[1][1].re);
        let r = BlochVector::new(
            0.5 * (m[0][1].im + m[1][0].im),
            0.5 * (m[0][1].re - m[1][0].re),
            0.5 * (m[0][0].im - m[1][1].im),
        );
        let norm = (r0 * r0 + r.dot(r)).sqrt();
        let inv = 1.0 / norm;
        Unitary2 { r0: r0 * inv, r: r.scaled(inv) }
    }
}

/// Phase-sensitive gate fidelity
/// `F(A, B) = Re tr(A^dagger B) / 2 = a0 b0 + a . b`, ranging over
/// `[-1, 1]` with `F = 1` exactly when `A = B` (including global sign) and
/// `F = -1` when `A = -B`.
///
/// For nearby gates `1 - F = |dq|^2 / 2` where `dq` is the difference of
/// the component 4-tuples, so infidelity is quadratic in parameter error.
pub fn gate_fidelity(a: Unitary2, b: Unitary2) -> f64 {
    a.r0() * b.r0() + a.r().dot(b.r())
}
