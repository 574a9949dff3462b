//! The unitary group of a hermitian module, its extension by form-reversing
//! elements, Lie algebras and random elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{combine, constrained_span, inverse};
use crate::matrix::Matrix;
use crate::module::HermitianModule;
use crate::scalar::Scalar;

/// Retry bound for random generation.
pub const MAX_RETRIES: usize = 16;

/// A pair `(g, δ)`: `δ = 1` for form-preserving module automorphisms,
/// `δ = −1` for maps reversing the form and conjugating the action.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedElement<T> {
    pub g: Matrix<T>,
    pub delta: i8,
}

impl<T: Scalar> ExtendedElement<T> {
    pub fn new(g: Matrix<T>, delta: i8) -> Self {
        ExtendedElement { g, delta }
    }

    pub fn identity(n: usize) -> Self {
        ExtendedElement { g: Matrix::identity(n), delta: 1 }
    }

    /// Product without membership checks.
    pub fn compose(&self, other: &Self) -> Self {
        ExtendedElement { g: &self.g * &other.g, delta: self.delta * other.delta }
    }

    pub fn inverse(&self) -> Option<Self> {
        Some(ExtendedElement { g: inverse(&self.g)?, delta: self.delta })
    }
}

fn check_size<T: Scalar>(e: &HermitianModule<T>, g: &Matrix<T>) -> Result<()> {
    if g.shape() != (e.dim(), e.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "element is {}×{}, module has dimension {}",
            g.rows(),
            g.cols(),
            e.dim()
        )));
    }
    Ok(())
}

fn commutes_with_quaternions<T: Scalar>(e: &HermitianModule<T>, g: &Matrix<T>) -> bool {
    (g * &e.ri).approx_eq(&(&e.ri * g)) && (g * &e.rj).approx_eq(&(&e.rj * g))
}

pub fn is_in_u<T: Scalar>(e: &HermitianModule<T>, g: &Matrix<T>) -> Result<bool> {
    is_in_breve_u_within(e, &ExtendedElement::new(g.clone(), 1), T::TOLERANCE)
}

pub fn is_in_breve_u<T: Scalar>(e: &HermitianModule<T>, x: &ExtendedElement<T>) -> Result<bool> {
    is_in_breve_u_within(e, x, T::TOLERANCE)
}

/// Membership with an explicit relative tolerance for the float backend;
/// ignored by the exact backend.
pub fn is_in_breve_u_within<T: Scalar>(e: &HermitianModule<T>, x: &ExtendedElement<T>, tol: f64) -> Result<bool> {
    Ok(membership_defects(e, x, tol)?.is_empty())
}

/// The membership conditions that `x` violates, each with its deviation.
pub fn membership_defects<T: Scalar>(e: &HermitianModule<T>, x: &ExtendedElement<T>, tol: f64) -> Result<Vec<String>> {
    let g = &x.g;
    check_size(e, g)?;
    if x.delta != 1 && x.delta != -1 {
        return Err(Error::BadParams(format!("delta must be ±1, got {}", x.delta)));
    }
    let mut defects = Vec::new();
    let mut require = |lhs: Matrix<T>, rhs: &Matrix<T>, what: String| {
        if !lhs.close_to(rhs, tol) {
            defects.push(format!("{what} (deviation {:.3e})", lhs.inf_norm_diff(rhs)));
        }
    };
    if inverse(g).is_none() {
        return Ok(vec!["g is singular".into()]);
    }
    require(g * &e.ri, &(&e.ri * g), "g does not commute with Ri".into());
    require(g * &e.rj, &(&e.rj * g), "g does not commute with Rj".into());
    let gt = g.transpose();
    let twisted = (x.delta == -1).then(|| e.twist());
    let targets = twisted.as_ref().map_or(&e.rho, |t| &t.rho);
    for (a, (r, target)) in e.rho.iter().zip(targets).enumerate() {
        require(g * r, &(target * g), format!("action of basis element {a} is not intertwined"));
    }
    for (a, b) in e.gram.iter().enumerate() {
        let target = if x.delta == 1 { b.clone() } else { b.transpose() };
        require(&(&gt * b) * g, &target, format!("Gram matrix {a} is not carried to its target"));
    }
    Ok(defects)
}

/// `(g₁g₂, δ₁δ₂)` for members of the extended group.
pub fn extended_mul<T: Scalar>(
    e: &HermitianModule<T>,
    x: &ExtendedElement<T>,
    y: &ExtendedElement<T>,
) -> Result<ExtendedElement<T>> {
    for z in [x, y] {
        if !is_in_breve_u(e, z)? {
            return Err(Error::NotMember("factor of a product".into()));
        }
    }
    Ok(x.compose(y))
}

pub fn extended_inv<T: Scalar>(e: &HermitianModule<T>, x: &ExtendedElement<T>) -> Result<ExtendedElement<T>> {
    if !is_in_breve_u(e, x)? {
        return Err(Error::NotMember("element to invert".into()));
    }
    x.inverse().ok_or_else(|| Error::NotMember("singular element".into()))
}

/// The map `φ^τ : E₂ → E₁` with `⟨φu, v⟩_{E₂} = ⟨u, φ^τ v⟩_{E₁}`, for an
/// algebra-linear `φ : E₁ → E₂`.
pub fn tau_adjoint<T: Scalar>(
    e1: &HermitianModule<T>,
    e2: &HermitianModule<T>,
    phi: &Matrix<T>,
) -> Result<Matrix<T>> {
    if phi.shape() != (e2.dim(), e1.dim()) {
        return Err(Error::DimensionMismatch("map does not go from E₁ to E₂".into()));
    }
    let f1 = e1.trace_form();
    let f1_inv = inverse(&f1).ok_or(Error::DegenerateForm)?;
    Ok(&(&f1_inv * &phi.transpose()) * &e2.trace_form())
}

/// All `n×n` matrix units.
pub(crate) fn matrix_units<T: Scalar>(n: usize) -> Vec<Matrix<T>> {
    (0..n * n)
        .map(|k| {
            let mut m = Matrix::zeros(n, n);
            m[(k / n, k % n)] = T::one();
            m
        })
        .collect()
}

/// Basis of the endomorphisms commuting with the algebra and quaternion
/// actions.
pub fn commutant_basis<T: Scalar>(e: &HermitianModule<T>) -> Vec<Matrix<T>> {
    let units = matrix_units::<T>(e.dim());
    let mut ops: Vec<&Matrix<T>> = vec![&e.ri, &e.rj];
    ops.extend(e.rho.iter());
    let images: Vec<Vec<Matrix<T>>> =
        ops.iter().map(|m| units.iter().map(|x| x.commutator(m)).collect()).collect();
    constrained_span(&units, &images)
}

/// Basis of the Lie algebra of the unitary group: commutant elements that
/// are skew for the form.
pub fn lie_algebra_basis<T: Scalar>(e: &HermitianModule<T>) -> Vec<Matrix<T>> {
    let comm = commutant_basis(e);
    let phi = e.trace_form();
    let skew: Vec<Matrix<T>> = comm.iter().map(|x| &(&x.transpose() * &phi) + &(&phi * x)).collect();
    constrained_span(&comm, &[skew])
}

/// Is `x` in the Lie algebra of the unitary group?
pub fn is_in_lie_algebra<T: Scalar>(e: &HermitianModule<T>, x: &Matrix<T>) -> Result<bool> {
    check_size(e, x)?;
    let phi = e.trace_form();
    Ok(commutes_with_quaternions(e, x)
        && e.rho.iter().all(|r| (x * r).approx_eq(&(r * x)))
        && (&x.transpose() * &phi).approx_eq(&-&(&phi * x)))
}

/// `(1 − X)(1 + X)⁻¹`, if `1 + X` is invertible.
pub fn cayley<T: Scalar>(x: &Matrix<T>) -> Option<Matrix<T>> {
    let id = Matrix::identity(x.rows());
    Some(&(&id - x) * &inverse(&(&id + x))?)
}

/// A random small rational combination of `basis`: coefficients in
/// `{−3..3}/{1..4}`.
pub fn random_combination<T: Scalar>(basis: &[Matrix<T>], n: usize, rng: &mut ChaCha8Rng) -> Matrix<T> {
    if basis.is_empty() {
        return Matrix::zeros(n, n);
    }
    let coeffs: Vec<T> = basis
        .iter()
        .map(|_| T::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=4)))
        .collect();
    combine(basis, &coeffs)
}

/// Cayley transform of a random Lie algebra element, retrying when `1 + X`
/// is singular.
pub fn random_from_lie_basis<T: Scalar>(basis: &[Matrix<T>], n: usize, rng: &mut ChaCha8Rng) -> Result<Matrix<T>> {
    for _ in 0..MAX_RETRIES {
        if let Some(g) = cayley(&random_combination(basis, n, rng)) {
            return Ok(g);
        }
    }
    Err(Error::RetriesExhausted(MAX_RETRIES))
}

pub fn random_group_element<T: Scalar>(e: &HermitianModule<T>, seed: u64) -> Result<Matrix<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_from_lie_basis(&lie_algebra_basis(e), e.dim(), &mut rng)
}

/// Random invertible module automorphism (not necessarily form-preserving),
/// used to produce isomorphic copies of a module.
pub fn random_intertwiner<T: Scalar>(basis: &[Matrix<T>], n: usize, rng: &mut ChaCha8Rng) -> Result<Matrix<T>> {
    for _ in 0..MAX_RETRIES {
        let g = &Matrix::identity(n) + &random_combination(basis, n, rng);
        if inverse(&g).is_some() {
            return Ok(g);
        }
    }
    Err(Error::RetriesExhausted(MAX_RETRIES))
}
