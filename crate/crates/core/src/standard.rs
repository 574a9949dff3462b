//! Standard models of the simple hermitian modules.
//!
//! Real coordinates of `ℍᴺ` are ordered coordinate-major: index `4·c + q`
//! holds component `q ∈ {1, i, j, k}` of quaternion coordinate `c`.

use std::fmt;

use crate::algebra::{FactorKind, InvolutiveAlgebra};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::HermitianModule;
use crate::quaternion::Quaternion;
use crate::scalar::{Complex, Field, Scalar};

/// Isomorphism invariant of a simple module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Params {
    Signature(usize, usize),
    Rank(usize),
}

impl Params {
    /// Number of quaternion coordinates in the standard model.
    pub fn quaternionic_dim(self, kind: FactorKind, epsilon: i8) -> usize {
        match (self, kind) {
            (Params::Signature(p, q), _) => p + q,
            (Params::Rank(n), FactorKind::CId) if epsilon == 1 => 2 * n,
            (Params::Rank(n), FactorKind::RxRSwap | FactorKind::CxCSwap) => 2 * n,
            (Params::Rank(n), _) => n,
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Params::Signature(p, q) => write!(f, "({p},{q})"),
            Params::Rank(n) => write!(f, "{n}"),
        }
    }
}

/// Whether the invariant of `(kind, ε)` is a signature.
pub fn takes_signature(kind: FactorKind, epsilon: i8) -> bool {
    matches!((kind, epsilon), (FactorKind::RId, 1) | (FactorKind::CConj, _))
}

fn check_params(kind: FactorKind, epsilon: i8, params: Params) -> Result<()> {
    if epsilon != 1 && epsilon != -1 {
        return Err(Error::BadParams(format!("epsilon must be ±1, got {epsilon}")));
    }
    let ok = matches!(params, Params::Signature(..)) == takes_signature(kind, epsilon);
    if ok {
        Ok(())
    } else {
        Err(Error::BadParams(format!(
            "{kind} with epsilon {epsilon} takes {}",
            if takes_signature(kind, epsilon) { "a signature (p, q)" } else { "a rank n" }
        )))
    }
}

/// Signs `+1` (p times) then `−1` (q times).
fn signs(params: Params) -> Vec<i64> {
    match params {
        Params::Signature(p, q) => std::iter::repeat_n(1, p).chain(std::iter::repeat_n(-1, q)).collect(),
        Params::Rank(n) => vec![1; n],
    }
}

/// `⟨a + bj, c + dj⟩ = ad − bc`.
pub fn skew_pairing<T: Scalar>(h: &Quaternion<T>, g: &Quaternion<T>) -> Complex<T> {
    let (a, b) = h.complex_parts();
    let (c, d) = g.complex_parts();
    a * d - b * c
}

/// `⟨a + bj, c + dj⟩ = a c̄ + b d̄`.
pub fn hermitian_pairing<T: Scalar>(h: &Quaternion<T>, g: &Quaternion<T>) -> Complex<T> {
    let (a, b) = h.complex_parts();
    let (c, d) = g.complex_parts();
    a * c.conj() + b * d.conj()
}

fn complex_coords<T: Scalar>(z: Complex<T>) -> Vec<T> {
    vec![z.re, z.im]
}

/// Block-diagonal `blocks` copies of a 4×4 matrix.
pub fn repeat_block<T: Scalar>(m: &Matrix<T>, blocks: usize) -> Matrix<T> {
    Matrix::block_diag(&vec![m.clone(); blocks])
}

/// Quaternion vector of the real basis vector `idx`.
fn basis_vector<T: Scalar>(dim: usize, idx: usize) -> Vec<Quaternion<T>> {
    let mut v = vec![Quaternion::zero(); dim];
    v[idx / 4] = Quaternion::basis()[idx % 4].clone();
    v
}

/// Read real coordinates as quaternion coordinates.
pub fn to_quaternions<T: Scalar>(v: &[T]) -> Vec<Quaternion<T>> {
    v.chunks(4).map(Quaternion::from_coords).collect()
}

pub fn from_quaternions<T: Scalar>(v: &[Quaternion<T>]) -> Vec<T> {
    v.iter().flat_map(|q| q.coords()).collect()
}

type Form<T> = dyn Fn(&[Quaternion<T>], &[Quaternion<T>]) -> Vec<T>;

fn gram_from_form<T: Scalar>(qdim: usize, adim: usize, form: &Form<T>) -> Vec<Matrix<T>> {
    let n = 4 * qdim;
    let mut gram = vec![Matrix::zeros(n, n); adim];
    for r in 0..n {
        let u = basis_vector::<T>(qdim, r);
        for c in 0..n {
            let v = basis_vector::<T>(qdim, c);
            for (a, x) in form(&u, &v).into_iter().enumerate() {
                gram[a][(r, c)] = x;
            }
        }
    }
    gram
}

fn block_projector<T: Scalar>(qdim: usize, from: usize, to: usize, m: &Matrix<T>) -> Matrix<T> {
    Matrix::block_diag(
        &(0..qdim)
            .map(|c| if (from..to).contains(&c) { m.clone() } else { Matrix::zeros(4, 4) })
            .collect::<Vec<_>>(),
    )
}

/// The standard simple module of the given kind, sign and invariant.
pub fn standard_module<T: Scalar>(kind: FactorKind, epsilon: i8, params: Params) -> Result<HermitianModule<T>> {
    check_params(kind, epsilon, params)?;
    let qdim = params.quaternionic_dim(kind, epsilon);
    let algebra = InvolutiveAlgebra::<T>::new(&[kind])?;
    let ri = repeat_block(&Quaternion::<T>::i().right_mult_matrix(), qdim);
    let rj = repeat_block(&Quaternion::<T>::j().right_mult_matrix(), qdim);
    let id = Matrix::<T>::identity(4 * qdim);
    let left_i = repeat_block(&Quaternion::<T>::i().left_mult_matrix(), qdim);
    let s = signs(params);
    let eps = T::from_i64(epsilon as i64);
    let half = qdim / 2;
    let (rho, form): (Vec<Matrix<T>>, Box<Form<T>>) = match kind {
        FactorKind::RId if epsilon == 1 => (
            vec![id],
            Box::new(move |u, v| {
                let total = (0..u.len()).fold(Quaternion::zero(), |acc, c| {
                    acc + (u[c].conj() * v[c].clone()).scale(&T::from_i64(s[c]))
                });
                vec![total.reduced_trace()]
            }),
        ),
        FactorKind::RId => (
            vec![id],
            Box::new(|u, v| {
                let total = (0..u.len())
                    .fold(Quaternion::zero(), |acc, c| acc + u[c].conj() * Quaternion::j() * v[c].clone());
                vec![total.reduced_trace()]
            }),
        ),
        FactorKind::CId if epsilon == 1 => (
            vec![id, left_i],
            Box::new(move |u, v| {
                let total = (0..half).fold(Complex::zero(), |acc: Complex<T>, c| {
                    acc + skew_pairing(&u[c], &v[half + c]) - skew_pairing(&u[half + c], &v[c])
                });
                complex_coords(total)
            }),
        ),
        FactorKind::CId => (
            vec![id, left_i],
            Box::new(|u, v| {
                let total =
                    (0..u.len()).fold(Complex::zero(), |acc: Complex<T>, c| acc + skew_pairing(&u[c], &v[c]));
                complex_coords(total)
            }),
        ),
        FactorKind::CConj => (
            vec![id, left_i],
            Box::new(move |u, v| {
                let total = (0..u.len()).fold(Complex::zero(), |acc: Complex<T>, c| {
                    acc + hermitian_pairing(&u[c], &v[c]) * Complex::real(T::from_i64(s[c]))
                });
                let total = if epsilon == 1 { total } else { total * Complex::i() };
                complex_coords(total)
            }),
        ),
        FactorKind::RxRSwap => {
            let one = Matrix::identity(4);
            (
                vec![block_projector(qdim, 0, half, &one), block_projector(qdim, half, qdim, &one)],
                Box::new(move |u, v| {
                    let first = (0..half).fold(Quaternion::zero(), |acc, c| acc + u[c].conj() * v[half + c].clone());
                    let second = (0..half).fold(Quaternion::zero(), |acc, c| acc + v[c].conj() * u[half + c].clone());
                    vec![first.reduced_trace(), eps.clone() * second.reduced_trace()]
                }),
            )
        }
        FactorKind::CxCSwap => {
            let one = Matrix::identity(4);
            let li = Quaternion::<T>::i().left_mult_matrix();
            (
                vec![
                    block_projector(qdim, 0, half, &one),
                    block_projector(qdim, 0, half, &li),
                    block_projector(qdim, half, qdim, &one),
                    block_projector(qdim, half, qdim, &li),
                ],
                Box::new(move |u, v| {
                    let first = (0..half)
                        .fold(Complex::zero(), |acc: Complex<T>, c| acc + skew_pairing(&u[c], &v[half + c]));
                    let second = (0..half)
                        .fold(Complex::zero(), |acc: Complex<T>, c| acc + skew_pairing(&v[c], &u[half + c]));
                    let second = second * Complex::real(eps.clone());
                    vec![first.re, first.im, second.re, second.im]
                }),
            )
        }
    };
    let gram = gram_from_form(qdim, algebra.dim(), form.as_ref());
    HermitianModule::new(algebra, epsilon, rho, ri, rj, gram)
}

/// Orthogonal direct sum of simple modules over the product of their
/// algebras, in the given factor order.
pub fn direct_sum<T: Scalar>(parts: &[HermitianModule<T>]) -> Result<HermitianModule<T>> {
    let first = parts.first().ok_or(Error::EmptyAlgebra)?;
    if parts.iter().any(|p| p.epsilon != first.epsilon) {
        return Err(Error::BadParams("summands have different epsilon".into()));
    }
    let kinds: Vec<FactorKind> = parts.iter().flat_map(|p| p.algebra.factors().to_vec()).collect();
    let algebra = InvolutiveAlgebra::new(&kinds)?;
    let dims: Vec<usize> = parts.iter().map(HermitianModule::dim).collect();
    let n: usize = dims.iter().sum();
    let embed = |k: usize, m: &Matrix<T>| {
        let off: usize = dims[..k].iter().sum();
        let mut out = Matrix::zeros(n, n);
        out.set_block(off, off, m);
        out
    };
    let mut rho = Vec::new();
    let mut gram = Vec::new();
    for (k, p) in parts.iter().enumerate() {
        rho.extend(p.rho.iter().map(|m| embed(k, m)));
        gram.extend(p.gram.iter().map(|m| embed(k, m)));
    }
    let ri = Matrix::block_diag(&parts.iter().map(|p| p.ri.clone()).collect::<Vec<_>>());
    let rj = Matrix::block_diag(&parts.iter().map(|p| p.rj.clone()).collect::<Vec<_>>());
    HermitianModule::new(algebra, first.epsilon, rho, ri, rj, gram)
}

/// Standard module over a product algebra.
pub fn standard_product<T: Scalar>(epsilon: i8, factors: &[(FactorKind, Params)]) -> Result<HermitianModule<T>> {
    let parts = factors
        .iter()
        .map(|&(k, p)| standard_module(k, epsilon, p))
        .collect::<Result<Vec<_>>>()?;
    direct_sum(&parts)
}

/// All parameter values with entries in `0..=max` for a row of the table.
pub fn small_params(kind: FactorKind, epsilon: i8, max: usize) -> Vec<Params> {
    if takes_signature(kind, epsilon) {
        (0..=max).flat_map(|p| (0..=max).map(move |q| Params::Signature(p, q))).collect()
    } else {
        (0..=max).map(Params::Rank).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    #[test]
    fn every_row_validates() {
        for kind in FactorKind::ALL {
            for eps in [1i8, -1] {
                for p in small_params(kind, eps, 2) {
                    let e = standard_module::<Rational>(kind, eps, p).unwrap();
                    let rep = e.validate();
                    assert!(rep.is_valid(), "{kind} {eps} {p}:\n{rep}");
                }
            }
        }
    }

    #[test]
    fn real_dimensions() {
        let d = |k, e, p| standard_module::<Rational>(k, e, p).unwrap().dim();
        assert_eq!(d(FactorKind::RId, 1, Params::Signature(1, 1)), 8);
        assert_eq!(d(FactorKind::RId, -1, Params::Rank(1)), 4);
        assert_eq!(d(FactorKind::RxRSwap, -1, Params::Rank(1)), 8);
        assert_eq!(d(FactorKind::CId, 1, Params::Rank(1)), 8);
        assert_eq!(d(FactorKind::CxCSwap, 1, Params::Rank(2)), 16);
    }

    #[test]
    fn form_values() {
        let e = standard_module::<Rational>(FactorKind::RId, 1, Params::Signature(1, 0)).unwrap();
        let e1 = from_quaternions(&[Quaternion::one()]);
        assert_eq!(e.eval_form(&e1, &e1).unwrap(), vec![rat(2, 1)]);
        let s = standard_module::<Rational>(FactorKind::RId, -1, Params::Rank(1)).unwrap();
        let uj = from_quaternions(&[Quaternion::j()]);
        // tr(1̄·j·j) = −2
        assert_eq!(s.eval_form(&e1, &uj).unwrap(), vec![rat(-2, 1)]);
    }

    #[test]
    fn wrong_param_shape_rejected() {
        assert!(standard_module::<Rational>(FactorKind::RId, 1, Params::Rank(1)).is_err());
        assert!(standard_module::<Rational>(FactorKind::CId, 1, Params::Signature(1, 0)).is_err());
        assert!(standard_module::<Rational>(FactorKind::RId, 0, Params::Rank(1)).is_err());
    }

    #[test]
    fn constructed_violations_are_reported() {
        let e = standard_module::<Rational>(FactorKind::RId, 1, Params::Signature(1, 0)).unwrap();
        let mut bad = e.clone();
        bad.rj = bad.ri.clone();
        let rep = bad.validate();
        assert!(!rep.is_valid());
        assert!(rep.failures().any(|c| c.name == "right quaternion action"));

        let mut bad = standard_module::<Rational>(FactorKind::CConj, 1, Params::Signature(1, 0)).unwrap();
        bad.gram[1][(0, 0)] = rat(1, 1);
        assert!(bad.validate().failures().any(|c| c.name == "epsilon symmetry"));
    }

    #[test]
    fn direct_sum_validates() {
        let e = standard_product::<Rational>(
            1,
            &[(FactorKind::RId, Params::Signature(1, 0)), (FactorKind::CConj, Params::Signature(0, 1)), (FactorKind::RxRSwap, Params::Rank(1))],
        )
        .unwrap();
        assert!(e.validate().is_valid());
        assert_eq!(e.dim(), 4 + 4 + 8);
        let (sub, _) = e.factor_summand(1).unwrap();
        assert!(sub.approx_eq(&standard_module(FactorKind::CConj, 1, Params::Signature(0, 1)).unwrap()));
    }

    #[test]
    fn twist_is_an_involution() {
        for kind in FactorKind::ALL {
            for eps in [1i8, -1] {
                for p in small_params(kind, eps, 1) {
                    let e = standard_module::<Rational>(kind, eps, p).unwrap();
                    let t = e.twist();
                    assert!(t.validate().is_valid());
                    assert_eq!(t.twist(), e);
                }
            }
        }
        let e = standard_module::<Rational>(FactorKind::RId, 1, Params::Signature(2, 1)).unwrap();
        assert_eq!(e.twist(), e);
    }
}
