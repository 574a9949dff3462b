//! sl₂ actions on hermitian modules: the irreducible models, completion of
//! a nilpotent element to a triple, and the isotypic decomposition.
//!
//! The irreducible model of dimension `d` has basis `v₀ … v_{d−1}` with
//! `H v_k = (d−1−2k) v_k`, `F v_k = v_{k+1}`, `E v_k = k(d−k) v_{k−1}` and
//! invariant form `⟨v_k, v_{d−1−k}⟩ = (−1)^k`.

use crate::error::{no_solution, Error, Result};
use crate::group::lie_algebra_basis;
use crate::linalg::{kernel, solve_in_span};
use crate::matrix::Matrix;
use crate::module::HermitianModule;
use crate::scalar::Scalar;

/// Images `(H, E, F)` of the standard basis of sl₂.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Triple<T> {
    pub h: Matrix<T>,
    pub e: Matrix<T>,
    pub f: Matrix<T>,
}

impl<T: Scalar> Sl2Triple<T> {
    pub fn zero(n: usize) -> Self {
        Sl2Triple { h: Matrix::zeros(n, n), e: Matrix::zeros(n, n), f: Matrix::zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    /// `[H,E] = 2E`, `[H,F] = −2F`, `[E,F] = H`.
    pub fn brackets_hold(&self) -> bool {
        let two = T::from_i64(2);
        self.h.commutator(&self.e).approx_eq(&self.e.scale(&two))
            && self.h.commutator(&self.f).approx_eq(&self.f.scale(&-two))
            && self.e.commutator(&self.f).approx_eq(&self.h)
    }

    /// Whether the triple is an action on `m`: brackets hold and each
    /// element commutes with the structure maps and is skew for every Gram
    /// coordinate.
    pub fn acts_on(&self, m: &HermitianModule<T>) -> bool {
        if self.dim() != m.dim() || !self.brackets_hold() {
            return false;
        }
        [&self.h, &self.e, &self.f].iter().all(|x| {
            let commutes = m.rho.iter().chain([&m.ri, &m.rj]).all(|r| (*x * r).approx_eq(&(r * *x)));
            let skew = m.gram.iter().all(|b| (&x.transpose() * b).approx_eq(&-&(b * *x)));
            commutes && skew
        })
    }

    /// The action on the twisted module: `H` kept, `E` and `F` negated.
    pub fn twist(&self) -> Self {
        Sl2Triple { h: self.h.clone(), e: -&self.e, f: -&self.f }
    }
}

/// The irreducible model of dimension `d` and its invariant form.
pub fn irreducible<T: Scalar>(d: usize) -> Result<(Sl2Triple<T>, Matrix<T>)> {
    if d == 0 {
        return Err(Error::BadParams("sl2 module dimension must be positive".into()));
    }
    let di = d as i64;
    let h = Matrix::from_fn(d, d, |r, c| {
        if r == c { T::from_i64(di - 1 - 2 * c as i64) } else { T::zero() }
    });
    let f = Matrix::from_fn(d, d, |r, c| if r == c + 1 { T::one() } else { T::zero() });
    let e = Matrix::from_fn(d, d, |r, c| {
        if c == r + 1 { T::from_i64(c as i64 * (di - c as i64)) } else { T::zero() }
    });
    let form = Matrix::from_fn(d, d, |r, c| {
        if r + c == d - 1 { T::from_i64(if r % 2 == 0 { 1 } else { -1 }) } else { T::zero() }
    });
    Ok((Sl2Triple { h, e, f }, form))
}

/// `v_k ↦ (−1)^k v_k`, which intertwines the model with its twist.
pub fn sign_intertwiner<T: Scalar>(d: usize) -> Matrix<T> {
    Matrix::from_fn(d, d, |r, c| {
        if r != c {
            T::zero()
        } else if r % 2 == 0 {
            T::one()
        } else {
            -T::one()
        }
    })
}

fn is_nilpotent<T: Scalar>(x: &Matrix<T>) -> bool {
    x.pow(x.rows()).is_zero()
}

/// Complete a nilpotent element `e` of the Lie algebra of `m` to a triple
/// inside that Lie algebra.
pub fn jacobson_morozov<T: Scalar>(m: &HermitianModule<T>, e: &Matrix<T>) -> Result<Sl2Triple<T>> {
    let n = m.dim();
    if e.shape() != (n, n) {
        return Err(Error::DimensionMismatch("nilpotent element has the wrong size".into()));
    }
    if !is_nilpotent(e) {
        return Err(Error::NotNilpotent);
    }
    if e.is_zero() {
        return Ok(Sl2Triple::zero(n));
    }
    let lie = lie_algebra_basis(m);
    let two = T::from_i64(2);
    let ad_e: Vec<Matrix<T>> = lie.iter().map(|x| e.commutator(x)).collect();
    let ad_e2: Vec<Matrix<T>> = ad_e.iter().map(|x| e.commutator(x)).collect();
    let z = solve_in_span(&lie, &[ad_e2], &[e.scale(&-two.clone())])
        .ok_or_else(|| no_solution("Jacobson-Morozov neutral element"))?;
    let h = e.commutator(&z);
    let weight: Vec<Matrix<T>> = lie.iter().map(|x| &h.commutator(x) + &x.scale(&two)).collect();
    let f = solve_in_span(&lie, &[ad_e, weight], &[h.clone(), Matrix::zeros(n, n)])
        .ok_or_else(|| no_solution("Jacobson-Morozov lowering element"))?;
    let triple = Sl2Triple { h, e: e.clone(), f };
    if !triple.acts_on(m) {
        return Err(no_solution("Jacobson-Morozov triple check"));
    }
    Ok(triple)
}

/// The part of a module on which sl₂ acts through the `d`-dimensional
/// irreducible: highest weight vectors and the multiplicity module.
#[derive(Clone, Debug)]
pub struct IsotypicComponent<T> {
    pub d: usize,
    /// Columns span `ker E ∩ ker(H − (d−1))`.
    pub highest_weight_basis: Matrix<T>,
    /// The multiplicity space with form `⟨u, w⟩ = ⟨u, F^{d−1} w⟩`, of sign
    /// `(−1)^{d−1}ε`.
    pub circle_module: HermitianModule<T>,
}

impl<T: Scalar> IsotypicComponent<T> {
    /// Columns `K, FK, …, F^{d−1}K` for `K` the highest weight basis.
    pub fn chain_basis(&self, triple: &Sl2Triple<T>) -> Matrix<T> {
        let mut blocks = vec![self.highest_weight_basis.clone()];
        for _ in 1..self.d {
            let next = &triple.f * blocks.last().expect("nonempty");
            blocks.push(next);
        }
        Matrix::hstack(&blocks.iter().collect::<Vec<_>>())
    }
}

pub fn isotypic_decompose<T: Scalar>(
    m: &HermitianModule<T>,
    triple: &Sl2Triple<T>,
) -> Result<Vec<IsotypicComponent<T>>> {
    if !triple.acts_on(m) {
        return Err(Error::InvalidModule("triple is not an sl2 action on the module".into()));
    }
    let n = m.dim();
    let mut out = Vec::new();
    let mut covered = 0;
    for d in 1..=n {
        let shifted = &triple.h - &Matrix::scalar(n, T::from_i64(d as i64 - 1));
        let k = kernel(&Matrix::vstack(&[&triple.e, &shifted]));
        if k.cols() == 0 {
            continue;
        }
        let lower = triple.f.pow(d - 1);
        let gram: Vec<Matrix<T>> = m.gram.iter().map(|b| b * &lower).collect();
        let mut circle = m.restrict_to(&k, m.algebra.clone(), &m.rho, &gram)?;
        circle.epsilon = if d % 2 == 0 { -m.epsilon } else { m.epsilon };
        circle.ensure_valid()?;
        covered += d * k.cols();
        out.push(IsotypicComponent { d, highest_weight_basis: k, circle_module: circle });
    }
    if covered != n {
        return Err(Error::InvalidModule(format!(
            "isotypic components cover {covered} of {n} dimensions"
        )));
    }
    Ok(out)
}

/// The module `⊕ M_d ⊗ F_d` with the product forms and its sl₂ action.
/// Real coordinates of `M ⊗ F_d` are ordered weight-major.
pub fn reconstruct<T: Scalar>(components: &[(usize, HermitianModule<T>)]) -> Result<(HermitianModule<T>, Sl2Triple<T>)> {
    let mut parts = Vec::new();
    let mut triples = Vec::new();
    for (d, c) in components {
        let (model, form) = irreducible::<T>(*d)?;
        let eps = if d % 2 == 0 { -c.epsilon } else { c.epsilon };
        let id_d = Matrix::<T>::identity(*d);
        let id_m = Matrix::<T>::identity(c.dim());
        let lift = |x: &Matrix<T>| id_d.kron(x);
        parts.push(HermitianModule::new(
            c.algebra.clone(),
            eps,
            c.rho.iter().map(lift).collect(),
            lift(&c.ri),
            lift(&c.rj),
            c.gram.iter().map(|b| form.kron(b)).collect(),
        )?);
        triples.push(Sl2Triple { h: model.h.kron(&id_m), e: model.e.kron(&id_m), f: model.f.kron(&id_m) });
    }
    let module = HermitianModule::orthogonal_sum(&parts)?;
    let diag = |pick: fn(&Sl2Triple<T>) -> &Matrix<T>| {
        Matrix::block_diag(&triples.iter().map(|t| pick(t).clone()).collect::<Vec<_>>())
    };
    let triple = Sl2Triple { h: diag(|t| &t.h), e: diag(|t| &t.e), f: diag(|t| &t.f) };
    Ok((module, triple))
}
