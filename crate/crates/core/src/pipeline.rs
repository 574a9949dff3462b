//! Conjugating a unitary element to its inverse inside the extended group.
//!
//! For `x = su` the module is re-read over the algebra generated by `s`,
//! the logarithm of `u` is completed to an sl₂ action, and on every
//! isotypic component a twist isomorphism of the multiplicity module is
//! tensored with `v_k ↦ (−1)^k v_k`. The resulting `g` reverses the form,
//! inverts `s` and `u`, and so inverts `x`.

use crate::algebra::{decompose_involutive, Decomposition, DEFAULT_CLUSTER_RADIUS};
use crate::error::{no_solution, Error, Result};
use crate::group::{is_in_breve_u, is_in_breve_u_within, is_in_lie_algebra, is_in_u, ExtendedElement};
use crate::linalg::inverse;
use crate::matrix::Matrix;
use crate::module::HermitianModule;
use crate::poly::squarefree_charpoly;
use crate::scalar::Scalar;
use crate::sl2::{isotypic_decompose, jacobson_morozov, sign_intertwiner};
use crate::twist::build_twist_isomorphism;

/// Residual bound for float verification.
pub const FLOAT_RESIDUAL_TOLERANCE: f64 = 1e-8;

/// `x = su = us` with `s` semisimple and `u` unipotent.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanPair<T> {
    pub s: Matrix<T>,
    pub u: Matrix<T>,
}

/// Semisimple part of `x` by Newton's iteration `s ← s − p(s)p′(s)⁻¹` on
/// the squarefree part `p` of the characteristic polynomial.
pub fn semisimple_part<T: Scalar>(x: &Matrix<T>) -> Result<Matrix<T>> {
    let n = x.rows();
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let p = squarefree_charpoly(x, DEFAULT_CLUSTER_RADIUS);
    let dp = p.derivative();
    let scale = 1f64.max(x.max_magnitude());
    let settled = |m: &Matrix<T>| {
        if T::EXACT {
            m.is_zero()
        } else {
            m.max_magnitude() <= 1e-11 * scale.powi(p.degree().unwrap_or(0) as i32)
        }
    };
    let bound = (usize::BITS - n.leading_zeros()) as usize + 2;
    let mut s = x.clone();
    for _ in 0..=bound {
        let ps = p.eval_matrix(&s);
        if settled(&ps) {
            return Ok(s);
        }
        let step = inverse(&dp.eval_matrix(&s)).ok_or_else(|| no_solution("Newton step"))?;
        s = &s - &(&ps * &step);
    }
    if settled(&p.eval_matrix(&s)) {
        Ok(s)
    } else {
        Err(no_solution("Newton iteration for the semisimple part"))
    }
}

pub fn is_unipotent<T: Scalar>(u: &Matrix<T>) -> bool {
    let n = u.rows();
    (u - &Matrix::identity(n)).pow(n).approx_eq(&Matrix::zeros(n, n))
}

fn is_nilpotent<T: Scalar>(x: &Matrix<T>) -> bool {
    x.pow(x.rows()).approx_eq(&Matrix::zeros(x.rows(), x.rows()))
}

/// Multiplicative Jordan decomposition of a unitary element.
pub fn jordan_decompose<T: Scalar>(e: &HermitianModule<T>, x: &Matrix<T>) -> Result<JordanPair<T>> {
    if !is_in_u(e, x)? {
        return Err(Error::NotMember("element to decompose".into()));
    }
    let s = semisimple_part(x)?;
    let u = &inverse(&s).ok_or_else(|| no_solution("inverting the semisimple part"))? * x;
    let pair = JordanPair { s, u };
    let commute = (&pair.s * &pair.u).approx_eq(&(&pair.u * &pair.s));
    if !commute || !is_unipotent(&pair.u) || !is_in_u(e, &pair.s)? || !is_in_u(e, &pair.u)? {
        return Err(no_solution("Jordan decomposition check"));
    }
    Ok(pair)
}

/// `log u = Σ (−1)^{k+1}(u − 1)^k / k`.
pub fn nilpotent_log<T: Scalar>(u: &Matrix<T>) -> Result<Matrix<T>> {
    let n = u.rows();
    let m = u - &Matrix::identity(n);
    if !is_nilpotent(&m) {
        return Err(Error::NotNilpotent);
    }
    let mut out = Matrix::zeros(n, n);
    let mut power = Matrix::identity(n);
    for k in 1..=n {
        power = &power * &m;
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out = &out + &power.scale(&T::from_ratio(sign, k as i64));
    }
    Ok(out)
}

/// `exp N = Σ N^k / k!`.
pub fn nilpotent_exp<T: Scalar>(x: &Matrix<T>) -> Result<Matrix<T>> {
    if !is_nilpotent(x) {
        return Err(Error::NotNilpotent);
    }
    let n = x.rows();
    let mut out = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=n {
        term = (&term * x).scale(&T::from_ratio(1, k as i64));
        out = &out + &term;
    }
    Ok(out)
}

/// The module re-read over the involutive algebra generated by extra
/// commuting operators together with the original action.
#[derive(Clone, Debug)]
pub struct RestrictedModule<T> {
    pub decomposition: Decomposition<T>,
    pub module: HermitianModule<T>,
}

/// Re-read `e` over the algebra generated by `ops` and its action, keeping
/// the real trace form.
pub fn restrict_to_operators<T: Scalar>(e: &HermitianModule<T>, ops: &[Matrix<T>]) -> Result<RestrictedModule<T>> {
    let mut gens = ops.to_vec();
    gens.extend(e.rho.iter().cloned());
    let phi = e.trace_form();
    let decomposition = decompose_involutive(&gens, &phi, DEFAULT_CLUSTER_RADIUS)?;
    let module = HermitianModule::from_trace_form(
        decomposition.algebra.clone(),
        e.epsilon,
        decomposition.basis_images.clone(),
        e.ri.clone(),
        e.rj.clone(),
        &phi,
    )?;
    module.ensure_valid()?;
    Ok(RestrictedModule { decomposition, module })
}

/// The restriction for a semisimple unitary `s`: generators `s, s⁻¹`.
pub fn build_restriction<T: Scalar>(e: &HermitianModule<T>, s: &Matrix<T>) -> Result<RestrictedModule<T>> {
    let s_inv = inverse(s).ok_or_else(|| Error::NotMember("singular semisimple part".into()))?;
    restrict_to_operators(e, &[s.clone(), s_inv])
}

/// Membership in the extended group of the restricted module:
/// `(g, δ)` in the extended group of `e` with `g s g⁻¹ = s^δ`.
pub fn is_in_restricted_group<T: Scalar>(
    e: &HermitianModule<T>,
    s: &Matrix<T>,
    x: &ExtendedElement<T>,
) -> Result<bool> {
    if !is_in_breve_u(e, x)? {
        return Ok(false);
    }
    let target = if x.delta == 1 {
        s.clone()
    } else {
        inverse(s).ok_or_else(|| Error::NotMember("singular semisimple part".into()))?
    };
    Ok((&x.g * s).approx_eq(&(&target * &x.g)))
}

/// A form-reversing `g` on `m` with `g n g⁻¹ = −n` that conjugates the
/// action of `m`'s algebra through its involution.
pub fn negate_nilpotent<T: Scalar>(m: &HermitianModule<T>, n: &Matrix<T>, log: &mut Vec<String>) -> Result<Matrix<T>> {
    if !is_in_lie_algebra(m, n)? {
        return Err(no_solution("nilpotent part outside the restricted Lie algebra"));
    }
    let triple = jacobson_morozov(m, n)?;
    let comps = isotypic_decompose(m, &triple)?;
    let mut chains = Vec::new();
    let mut blocks = Vec::new();
    for c in &comps {
        let inner = build_twist_isomorphism(&c.circle_module)?;
        log.push(format!(
            "sl2 component d={} multiplicity dim {}",
            c.d,
            c.circle_module.dim()
        ));
        chains.push(c.chain_basis(&triple));
        blocks.push(sign_intertwiner::<T>(c.d).kron(&inner.g));
    }
    let w = Matrix::hstack(&chains.iter().collect::<Vec<_>>());
    let w_inv = inverse(&w).ok_or_else(|| no_solution("isotypic basis"))?;
    let g = &(&w * &Matrix::block_diag(&blocks)) * &w_inv;
    if !is_in_breve_u_within(m, &ExtendedElement::new(g.clone(), -1), FLOAT_RESIDUAL_TOLERANCE)? {
        return Err(no_solution("twist isomorphism leaks across algebra factors"));
    }
    Ok(g)
}

/// Output of the conjugator with the residual of the defining identity.
#[derive(Clone, Debug)]
pub struct Conjugator<T> {
    pub element: ExtendedElement<T>,
    /// `‖g x g⁻¹ − target‖_∞`.
    pub residual: f64,
    pub stage_log: Vec<String>,
}

fn residual<T: Scalar>(g: &Matrix<T>, x: &Matrix<T>, target: &Matrix<T>) -> Result<f64> {
    let g_inv = inverse(g).ok_or_else(|| no_solution("inverting the conjugator"))?;
    Ok((&(g * x) * &g_inv).to_f64().inf_norm_diff(&target.to_f64()))
}

fn accept<T: Scalar>(g: &Matrix<T>, x: &Matrix<T>, target: &Matrix<T>) -> Result<f64> {
    let r = residual(g, x, target)?;
    let ok = if T::EXACT { (g * x) == (target * g) } else { r <= FLOAT_RESIDUAL_TOLERANCE };
    if ok {
        Ok(r)
    } else {
        Err(no_solution(&format!("final verification (residual {r:.3e})")))
    }
}

/// `(g, −1)` in the extended group with `g x g⁻¹ = x⁻¹`.
pub fn mvw_conjugator<T: Scalar>(e: &HermitianModule<T>, x: &Matrix<T>) -> Result<Conjugator<T>> {
    let mut log = Vec::new();
    let pair = jordan_decompose(e, x)?;
    log.push(format!(
        "jordan: semisimple part {}, unipotent part {}",
        if pair.s.approx_eq(&Matrix::identity(e.dim())) { "trivial" } else { "nontrivial" },
        if pair.u.approx_eq(&Matrix::identity(e.dim())) { "trivial" } else { "nontrivial" },
    ));
    let restricted = build_restriction(e, &pair.s)?;
    let kinds: Vec<String> = restricted.module.algebra.factors().iter().map(|k| k.to_string()).collect();
    log.push(format!("restriction: factors [{}]", kinds.join(", ")));
    let n = nilpotent_log(&pair.u)?;
    let g = negate_nilpotent(&restricted.module, &n, &mut log)?;
    let element = ExtendedElement::new(g, -1);
    if !is_in_breve_u_within(e, &element, FLOAT_RESIDUAL_TOLERANCE)? {
        return Err(no_solution("membership of the conjugator"));
    }
    let s_inv = inverse(&pair.s).ok_or_else(|| no_solution("inverting s"))?;
    let u_inv = inverse(&pair.u).ok_or_else(|| no_solution("inverting u"))?;
    accept(&element.g, &pair.s, &s_inv)?;
    accept(&element.g, &pair.u, &u_inv)?;
    let x_inv = inverse(x).ok_or_else(|| no_solution("inverting x"))?;
    let residual = accept(&element.g, x, &x_inv)?;
    log.push(format!("verified: residual {residual:.3e}"));
    Ok(Conjugator { element, residual, stage_log: log })
}

/// Additive Jordan decomposition `X = S + N`.
pub fn additive_jordan<T: Scalar>(x: &Matrix<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    let s = semisimple_part(x)?;
    let n = x - &s;
    if !is_nilpotent(&n) || !(&s * &n).approx_eq(&(&n * &s)) {
        return Err(no_solution("additive Jordan decomposition check"));
    }
    Ok((s, n))
}

/// `(g, −1)` in the extended group with `g X g⁻¹ = −X`, for `X` in the Lie
/// algebra.
pub fn lie_negator<T: Scalar>(e: &HermitianModule<T>, x: &Matrix<T>) -> Result<Conjugator<T>> {
    if !is_in_lie_algebra(e, x)? {
        return Err(Error::NotMember("element of the Lie algebra".into()));
    }
    let mut log = Vec::new();
    let (s, n) = additive_jordan(x)?;
    let restricted = restrict_to_operators(e, &[s])?;
    let kinds: Vec<String> = restricted.module.algebra.factors().iter().map(|k| k.to_string()).collect();
    log.push(format!("restriction: factors [{}]", kinds.join(", ")));
    let g = negate_nilpotent(&restricted.module, &n, &mut log)?;
    let element = ExtendedElement::new(g, -1);
    if !is_in_breve_u_within(e, &element, FLOAT_RESIDUAL_TOLERANCE)? {
        return Err(no_solution("membership of the negator"));
    }
    let residual = accept(&element.g, x, &-x)?;
    log.push(format!("verified: residual {residual:.3e}"));
    Ok(Conjugator { element, residual, stage_log: log })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FactorKind;
    use crate::group::{lie_algebra_basis, random_group_element};
    use crate::scalar::Rational;
    use crate::sl2::reconstruct;
    use crate::standard::{standard_module, Params};

    #[test]
    fn log_exp_roundtrip() {
        let n = Matrix::<Rational>::from_fn(4, 4, |r, c| if c == r + 1 { Rational::from_integer((r as i64 + 2).into()) } else { Rational::from_integer(0.into()) });
        let u = nilpotent_exp(&n).unwrap();
        assert_eq!(nilpotent_log(&u).unwrap(), n);
        assert_eq!(nilpotent_log(&Matrix::<Rational>::identity(3)).unwrap(), Matrix::zeros(3, 3));
        assert!(nilpotent_exp(&Matrix::<Rational>::identity(2)).is_err());
    }

    #[test]
    fn jordan_of_simple_elements() {
        let e = standard_module::<Rational>(FactorKind::RId, 1, Params::Signature(1, 1)).unwrap();
        let id = Matrix::<Rational>::identity(8);
        assert_eq!(jordan_decompose(&e, &-&id).unwrap(), JordanPair { s: -&id, u: id.clone() });
        let g = random_group_element(&e, 5).unwrap();
        let p = jordan_decompose(&e.to_f64(), &g.to_f64()).unwrap();
        assert!((&p.s * &p.u).close_to(&g.to_f64(), 1e-9));
    }

    #[test]
    fn unipotent_in_sp11() {
        let b = standard_module::<Rational>(FactorKind::RId, -1, Params::Rank(1)).unwrap();
        let (m, t) = reconstruct(&[(2, b)]).unwrap();
        let u = nilpotent_exp(&t.e).unwrap();
        let c = mvw_conjugator(&m, &u).unwrap();
        assert_eq!(c.residual, 0.0);
        let x = &u * &u;
        assert!(mvw_conjugator(&m, &x).is_ok());
    }

    #[test]
    fn identity_and_zero() {
        let e = standard_module::<Rational>(FactorKind::RId, -1, Params::Rank(2)).unwrap();
        let c = mvw_conjugator(&e, &Matrix::identity(8)).unwrap();
        assert_eq!(c.element.delta, -1);
        let z = lie_negator(&e, &Matrix::zeros(8, 8)).unwrap();
        assert!(is_in_breve_u(&e, &z.element).unwrap());
        let x = lie_algebra_basis(&e)[0].clone();
        let f = lie_negator(&e.to_f64(), &x.to_f64()).unwrap();
        assert!(f.residual <= FLOAT_RESIDUAL_TOLERANCE);
    }

    #[test]
    fn float_random_elements() {
        let e = standard_module::<Rational>(FactorKind::RId, 1, Params::Signature(1, 1)).unwrap();
        for seed in 0..3 {
            let x = random_group_element(&e, seed).unwrap().to_f64();
            let c = mvw_conjugator(&e.to_f64(), &x).unwrap();
            assert!(c.residual <= FLOAT_RESIDUAL_TOLERANCE);
        }
    }
}
