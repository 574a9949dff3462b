//! Explicit isomorphisms between a module and its twist.
//!
//! On each standard model a single right-ℍ-linear map reverses the form
//! and conjugates the algebra action. The same map works when every line
//! of the model carries a central multiple of its standard form, so
//! arbitrary modules are handled through a classification frame that is
//! orthogonal but not normalized.

use crate::algebra::FactorKind;
use crate::classify::scaled_frame;
use crate::error::{no_solution, Result};
use crate::group::{is_in_breve_u_within, ExtendedElement};
use crate::linalg::inverse;
use crate::matrix::Matrix;
use crate::module::HermitianModule;
use crate::pipeline::FLOAT_RESIDUAL_TOLERANCE;
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;
use crate::standard::{repeat_block, Params};

/// `(x, y) ↦ (y, sign·x)` on two halves of `2·half` quaternion coordinates.
fn half_swap<T: Scalar>(half: usize, sign: i64) -> Matrix<T> {
    let n = 4 * half;
    let mut m = Matrix::zeros(2 * n, 2 * n);
    m.set_block(0, n, &Matrix::identity(n));
    m.set_block(n, 0, &Matrix::scalar(n, T::from_i64(sign)));
    m
}

/// The twist isomorphism of a standard simple module: `g` with
/// `⟨gu, gv⟩ = ⟨v, u⟩` and `g ρ(a) = ρ(a^τ) g`.
pub fn standard_twist_map<T: Scalar>(kind: FactorKind, epsilon: i8, params: Params) -> Matrix<T> {
    let qdim = params.quaternionic_dim(kind, epsilon);
    let left = |q: Quaternion<T>| repeat_block(&q.left_mult_matrix(), qdim);
    match kind {
        FactorKind::RId | FactorKind::CId if epsilon == 1 => Matrix::identity(4 * qdim),
        FactorKind::RId | FactorKind::CId => left(Quaternion::i()),
        FactorKind::CConj => left(Quaternion::j()),
        FactorKind::RxRSwap => half_swap(qdim / 2, 1),
        FactorKind::CxCSwap => half_swap(qdim / 2, -1),
    }
}

/// An element `(g, −1)` of the extended group of `e`, verified.
pub fn build_twist_isomorphism<T: Scalar>(e: &HermitianModule<T>) -> Result<ExtendedElement<T>> {
    let (invariants, frame) = scaled_frame(e)?;
    let blocks: Vec<Matrix<T>> = e
        .algebra
        .factors()
        .iter()
        .zip(&invariants)
        .map(|(&kind, &params)| standard_twist_map(kind, e.epsilon, params))
        .collect();
    let frame_inv = inverse(&frame).ok_or_else(|| no_solution("twist frame inverse"))?;
    let g = &(&frame * &Matrix::block_diag(&blocks)) * &frame_inv;
    let x = ExtendedElement::new(g, -1);
    if !is_in_breve_u_within(e, &x, FLOAT_RESIDUAL_TOLERANCE)? {
        return Err(no_solution("twist isomorphism check"));
    }
    Ok(x)
}
