//! Independent search for form-reversing conjugators.
//!
//! The conditions `g x = x⁻¹ g`, `g R_i = R_i g`, `g R_j = R_j g` and
//! `g ρ(a) = ρ(a^τ) g` are linear in `g`; the remaining condition
//! `gᵀ B_α g = B_αᵀ` is quadratic and is attacked by damped Gauss–Newton
//! from random starting points inside the linear solution space.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{is_in_breve_u_within, matrix_units, ExtendedElement};
use crate::linalg::{combine, constrained_span, inverse};
use crate::matrix::Matrix;
use crate::module::HermitianModule;
use crate::pipeline::FLOAT_RESIDUAL_TOLERANCE;

/// Damped Gauss–Newton iterations per start.
const ITERATIONS: usize = 200;
/// Residual below which a start counts as converged.
const CONVERGED: f64 = 1e-13;

/// Basis of `{g : g x = x⁻¹ g, g R_i = R_i g, g R_j = R_j g, g ρ(a) = ρ(a^τ) g}`.
pub fn linear_solution_space(e: &HermitianModule<f64>, x: &Matrix<f64>) -> Result<Vec<Matrix<f64>>> {
    let x_inv = inverse(x).ok_or_else(|| Error::NotMember("singular element".into()))?;
    let units = matrix_units::<f64>(e.dim());
    let twisted = e.twist();
    let mut pairs: Vec<(&Matrix<f64>, &Matrix<f64>)> = vec![(&e.ri, &e.ri), (&e.rj, &e.rj), (x, &x_inv)];
    pairs.extend(e.rho.iter().zip(&twisted.rho));
    let images: Vec<Vec<Matrix<f64>>> = pairs
        .iter()
        .map(|(right, left)| units.iter().map(|g| &(g * *right) - &(*left * g)).collect())
        .collect();
    Ok(constrained_span(&units, &images))
}

/// Stacked entries of `gᵀ B_α g − B_αᵀ` over all `α`.
fn residual(e: &HermitianModule<f64>, g: &Matrix<f64>) -> DVector<f64> {
    let gt = g.transpose();
    let entries: Vec<f64> = e
        .gram
        .iter()
        .flat_map(|b| (&(&(&gt * b) * g) - &b.transpose()).data().to_vec())
        .collect();
    DVector::from_vec(entries)
}

fn jacobian(e: &HermitianModule<f64>, g: &Matrix<f64>, space: &[Matrix<f64>]) -> DMatrix<f64> {
    let gt = g.transpose();
    let cols: Vec<DVector<f64>> = space
        .iter()
        .map(|h| {
            let ht = h.transpose();
            let entries: Vec<f64> = e
                .gram
                .iter()
                .flat_map(|b| (&(&(&ht * b) * g) + &(&(&gt * b) * h)).data().to_vec())
                .collect();
            DVector::from_vec(entries)
        })
        .collect();
    DMatrix::from_columns(&cols)
}

/// Levenberg–Marquardt from `c`; returns the final coefficients and residual norm.
fn descend(e: &HermitianModule<f64>, space: &[Matrix<f64>], mut c: Vec<f64>) -> (Vec<f64>, f64) {
    let m = space.len();
    let mut g = combine(space, &c);
    let mut r = residual(e, &g);
    let mut damping = 1e-3;
    for _ in 0..ITERATIONS {
        let norm = r.norm();
        if norm < CONVERGED {
            break;
        }
        let j = jacobian(e, &g, space);
        let jt = j.transpose();
        let normal = &jt * &j;
        let rhs = -(&jt * &r);
        let mut improved = false;
        for _ in 0..20 {
            let damped = &normal + DMatrix::<f64>::identity(m, m) * (damping * (1.0 + normal.diagonal().max()));
            let Some(step) = damped.lu().solve(&rhs) else { break };
            let trial: Vec<f64> = c.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let trial_g = combine(space, &trial);
            let trial_r = residual(e, &trial_g);
            if trial_r.norm() < norm {
                c = trial;
                g = trial_g;
                r = trial_r;
                damping = (damping / 3.0).max(1e-15);
                improved = true;
                break;
            }
            damping *= 4.0;
        }
        if !improved {
            break;
        }
    }
    let norm = r.norm();
    (c, norm)
}

/// Search for `(g, −1)` in the extended group with `g x g⁻¹ = x⁻¹`, trying
/// up to `budget` random starts. `BudgetExhausted` is inconclusive.
pub fn brute_force_conjugator(
    e: &HermitianModule<f64>,
    x: &Matrix<f64>,
    budget: usize,
    seed: u64,
) -> Result<ExtendedElement<f64>> {
    let space = linear_solution_space(e, x)?;
    if space.is_empty() {
        return Err(Error::BudgetExhausted(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let start: Vec<f64> = (0..space.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (c, norm) = descend(e, &space, start);
        if norm > FLOAT_RESIDUAL_TOLERANCE {
            continue;
        }
        let candidate = ExtendedElement::new(combine(&space, &c), -1);
        if is_in_breve_u_within(e, &candidate, FLOAT_RESIDUAL_TOLERANCE)? {
            return Ok(candidate);
        }
    }
    Err(Error::BudgetExhausted(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FactorKind;
    use crate::group::random_group_element;
    use crate::scalar::Rational;
    use crate::standard::{standard_module, Params};

    #[test]
    fn identity_on_positive_line() {
        let e = standard_module::<f64>(FactorKind::RId, 1, Params::Signature(1, 0)).unwrap();
        let x = Matrix::identity(4);
        let g = brute_force_conjugator(&e, &x, 10, 1).unwrap();
        assert!(is_in_breve_u_within(&e, &g, 1e-9).unwrap());
    }

    #[test]
    fn random_sp11_element() {
        let e = standard_module::<Rational>(FactorKind::RId, 1, Params::Signature(1, 1)).unwrap();
        let x = random_group_element(&e, 3).unwrap().to_f64();
        let ef = e.to_f64();
        let g = brute_force_conjugator(&ef, &x, 1000, 2).unwrap();
        let x_inv = inverse(&x).unwrap();
        let conj = &(&g.g * &x) * &inverse(&g.g).unwrap();
        assert!(conj.inf_norm_diff(&x_inv) < FLOAT_RESIDUAL_TOLERANCE);
    }
}
