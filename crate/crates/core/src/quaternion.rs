//! Hamilton quaternions over a real backend and their realification.
//!
//! Coordinates are `(a, b, c, d)` for `a + bi + cj + dk`. The complex field
//! embeds as `x + yi ↦ (x, y, 0, 0)`; the distinguished `j = (0,0,1,0)`
//! conjugates that copy of ℂ.

use std::ops::{Add, Mul, Neg, Sub};

use crate::matrix::Matrix;
use crate::scalar::{Complex, Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Quaternion<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> Quaternion<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Quaternion { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Quaternion::new(T::from_i64(a), T::from_i64(b), T::from_i64(c), T::from_i64(d))
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0, 0)
    }
    pub fn one() -> Self {
        Self::from_ints(1, 0, 0, 0)
    }
    pub fn i() -> Self {
        Self::from_ints(0, 1, 0, 0)
    }
    pub fn j() -> Self {
        Self::from_ints(0, 0, 1, 0)
    }
    pub fn k() -> Self {
        Self::from_ints(0, 0, 0, 1)
    }

    /// The basis `1, i, j, k` in coordinate order.
    pub fn basis() -> [Self; 4] {
        [Self::one(), Self::i(), Self::j(), Self::k()]
    }

    pub fn real(x: T) -> Self {
        Quaternion::new(x, T::zero(), T::zero(), T::zero())
    }

    pub fn from_complex(z: &Complex<T>) -> Self {
        Quaternion::new(z.re.clone(), z.im.clone(), T::zero(), T::zero())
    }

    pub fn from_coords(v: &[T]) -> Self {
        Quaternion::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())
    }

    pub fn coords(&self) -> [T; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }

    /// Write `self = z + w·j` with `z, w` complex.
    pub fn complex_parts(&self) -> (Complex<T>, Complex<T>) {
        (Complex::new(self.a.clone(), self.b.clone()), Complex::new(self.c.clone(), self.d.clone()))
    }

    pub fn from_complex_parts(z: &Complex<T>, w: &Complex<T>) -> Self {
        Quaternion::new(z.re.clone(), z.im.clone(), w.re.clone(), w.im.clone())
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.a.clone(), -self.b.clone(), -self.c.clone(), -self.d.clone())
    }

    /// Reduced norm `a² + b² + c² + d²`.
    pub fn norm(&self) -> T {
        self.coords().iter().fold(T::zero(), |acc, x| acc + x.clone() * x.clone())
    }

    /// Reduced trace `2a`.
    pub fn reduced_trace(&self) -> T {
        self.a.clone() + self.a.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(Field::is_zero)
    }

    pub fn is_pure(&self) -> bool {
        self.a.is_zero()
    }

    pub fn scale(&self, s: &T) -> Self {
        Quaternion::new(
            self.a.clone() * s.clone(),
            self.b.clone() * s.clone(),
            self.c.clone() * s.clone(),
            self.d.clone() * s.clone(),
        )
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            None
        } else {
            Some(self.conj().scale(&(T::one() / n)))
        }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.coords().iter().zip(other.coords().iter()).all(|(x, y)| x.approx_eq(y))
    }

    /// 4×4 matrix of `v ↦ v·h` on coordinate columns. Composition law:
    /// `R_{h₁h₂} = R_{h₂} · R_{h₁}`.
    pub fn right_mult_matrix(&self) -> Matrix<T> {
        let cols: Vec<Vec<T>> =
            Self::basis().iter().map(|e| (e.clone() * self.clone()).coords().to_vec()).collect();
        Matrix::from_columns(4, &cols)
    }

    /// 4×4 matrix of `v ↦ h·v` on coordinate columns; `L_{h₁h₂} = L_{h₁} L_{h₂}`.
    pub fn left_mult_matrix(&self) -> Matrix<T> {
        let cols: Vec<Vec<T>> =
            Self::basis().iter().map(|e| (self.clone() * e.clone()).coords().to_vec()).collect();
        Matrix::from_columns(4, &cols)
    }
}

/// Hamilton product.
pub fn quat_mul<T: Scalar>(x: &Quaternion<T>, y: &Quaternion<T>) -> Quaternion<T> {
    let (a1, b1, c1, d1) = (x.a.clone(), x.b.clone(), x.c.clone(), x.d.clone());
    let (a2, b2, c2, d2) = (y.a.clone(), y.b.clone(), y.c.clone(), y.d.clone());
    Quaternion::new(
        a1.clone() * a2.clone() - b1.clone() * b2.clone() - c1.clone() * c2.clone() - d1.clone() * d2.clone(),
        a1.clone() * b2.clone() + b1.clone() * a2.clone() + c1.clone() * d2.clone() - d1.clone() * c2.clone(),
        a1.clone() * c2.clone() - b1.clone() * d2.clone() + c1.clone() * a2.clone() + d1.clone() * b2.clone(),
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )
}

pub fn quat_conj<T: Scalar>(x: &Quaternion<T>) -> Quaternion<T> {
    x.conj()
}

pub fn reduced_trace<T: Scalar>(x: &Quaternion<T>) -> T {
    x.reduced_trace()
}

pub fn right_mult_matrix<T: Scalar>(h: &Quaternion<T>) -> Matrix<T> {
    h.right_mult_matrix()
}

impl<T: Scalar> Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        quat_mul(&self, &rhs)
    }
}

impl<T: Scalar> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Quaternion::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c, self.d + rhs.d)
    }
}

impl<T: Scalar> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Quaternion::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c, self.d - rhs.d)
    }
}

impl<T: Scalar> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Quaternion::new(-self.a, -self.b, -self.c, -self.d)
    }
}
