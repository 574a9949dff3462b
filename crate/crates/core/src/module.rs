//! Quaternionic hermitian modules in realified form.
//!
//! A module is a real vector space `E` with the action `rho[b]` of each
//! standard basis element of the algebra, the right quaternion action `Ri`,
//! `Rj`, and one Gram matrix per real coordinate of the algebra-valued form:
//! `coord_α ⟨u, v⟩ = uᵀ gram[α] v`.

use std::fmt;

use crate::algebra::{AlgebraElement, InvolutiveAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{column_space, combine, inverse, rank, restrict};
use crate::matrix::Matrix;
use crate::quaternion::Quaternion;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianModule<T> {
    pub algebra: InvolutiveAlgebra<T>,
    pub epsilon: i8,
    pub rho: Vec<Matrix<T>>,
    pub ri: Matrix<T>,
    pub rj: Matrix<T>,
    pub gram: Vec<Matrix<T>>,
}

/// One named axiom check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn record(&mut self, name: &'static str, witness: Option<String>) {
        self.checks.push(Check { name, passed: witness.is_none(), witness });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.witness {
                None => writeln!(f, "{:<22} ok", c.name)?,
                Some(w) => writeln!(f, "{:<22} FAILED: {w}", c.name)?,
            }
        }
        Ok(())
    }
}

fn mismatch<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, what: String) -> Option<String> {
    if a.approx_eq(b) {
        None
    } else {
        Some(format!("{what} (deviation {:.3e})", a.inf_norm_diff(b)))
    }
}

impl<T: Scalar> HermitianModule<T> {
    /// Assemble a module, checking only shapes.
    pub fn new(
        algebra: InvolutiveAlgebra<T>,
        epsilon: i8,
        rho: Vec<Matrix<T>>,
        ri: Matrix<T>,
        rj: Matrix<T>,
        gram: Vec<Matrix<T>>,
    ) -> Result<Self> {
        if epsilon != 1 && epsilon != -1 {
            return Err(Error::BadParams(format!("epsilon must be ±1, got {epsilon}")));
        }
        let n = ri.rows();
        let d = algebra.dim();
        if rho.len() != d || gram.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "algebra has dimension {d} but {} action and {} Gram matrices were given",
                rho.len(),
                gram.len()
            )));
        }
        if rho.iter().chain(&gram).chain([&ri, &rj]).any(|m| m.shape() != (n, n)) {
            return Err(Error::DimensionMismatch(format!("all structure matrices must be {n}×{n}")));
        }
        Ok(HermitianModule { algebra, epsilon, rho, ri, rj, gram })
    }

    /// Build the module whose real trace form `Σ t_α B_α` is `trace_form`,
    /// where `t` is the trace functional of the algebra.
    pub fn from_trace_form(
        algebra: InvolutiveAlgebra<T>,
        epsilon: i8,
        rho: Vec<Matrix<T>>,
        ri: Matrix<T>,
        rj: Matrix<T>,
        trace_form: &Matrix<T>,
    ) -> Result<Self> {
        let d = algebra.dim();
        let pairing = Matrix::from_fn(d, d, |g, b| {
            let prod = algebra.mul(&algebra.basis_element(g), &algebra.basis_element(b)).expect("basis");
            algebra.trace(&prod).expect("basis")
        });
        let pinv = inverse(&pairing).ok_or_else(|| Error::NotSemisimple("trace pairing is degenerate".into()))?;
        let pulled: Vec<Matrix<T>> = rho.iter().map(|r| &r.transpose() * trace_form).collect();
        let gram = (0..d).map(|b| combine(&pulled, &pinv.row(b))).collect();
        HermitianModule::new(algebra, epsilon, rho, ri, rj, gram)
    }

    pub fn dim(&self) -> usize {
        self.ri.rows()
    }

    pub fn eps(&self) -> T {
        T::from_i64(self.epsilon as i64)
    }

    /// Right multiplication by `k = ij`.
    pub fn rk(&self) -> Matrix<T> {
        &self.rj * &self.ri
    }

    /// Matrix of `v ↦ v·h`.
    pub fn right_mult(&self, h: &Quaternion<T>) -> Matrix<T> {
        let n = self.dim();
        combine(&[Matrix::identity(n), self.ri.clone(), self.rj.clone(), self.rk()], &h.coords())
    }

    /// Matrix of the action of an algebra element.
    pub fn act(&self, a: &[T]) -> Matrix<T> {
        if self.rho.is_empty() {
            return Matrix::zeros(self.dim(), self.dim());
        }
        combine(&self.rho, a)
    }

    /// The real trace form `Φ = Σ t_α B_α`; `u ↦ Φ u` identifies `E` with its
    /// real dual.
    pub fn trace_form(&self) -> Matrix<T> {
        let n = self.dim();
        if self.gram.is_empty() {
            return Matrix::zeros(n, n);
        }
        combine(&self.gram, self.algebra.trace_functional())
    }

    /// Adjoint of an algebra-linear endomorphism for the form:
    /// `⟨M u, v⟩ = ⟨u, τ(M) v⟩`.
    pub fn adjoint(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        let phi = self.trace_form();
        let inv = inverse(&phi).ok_or(Error::DegenerateForm)?;
        Ok(&(&inv * &m.transpose()) * &phi)
    }

    pub fn eval_form(&self, u: &[T], v: &[T]) -> Result<AlgebraElement<T>> {
        if u.len() != self.dim() || v.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vectors of length {} and {}, module dimension {}",
                u.len(),
                v.len(),
                self.dim()
            )));
        }
        Ok(self.gram.iter().map(|b| b.bilinear(u, v)).collect())
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let n = self.dim();
        let id = Matrix::<T>::identity(n);
        let alg = &self.algebra;
        let d = alg.dim();

        let ri2 = &self.ri * &self.ri;
        let rj2 = &self.rj * &self.rj;
        let anti = &(&self.ri * &self.rj) + &(&self.rj * &self.ri);
        rep.record(
            "right quaternion action",
            mismatch(&ri2, &-&id, "Ri² ≠ −1".into())
                .or_else(|| mismatch(&rj2, &-&id, "Rj² ≠ −1".into()))
                .or_else(|| mismatch(&anti, &Matrix::zeros(n, n), "RiRj ≠ −RjRi".into())),
        );

        let mut w = mismatch(&self.act(&alg.one()), &id, "action of 1 is not the identity".into());
        for b in 0..d {
            if w.is_some() {
                break;
            }
            let r = &self.rho[b];
            w = mismatch(&(r * &self.ri), &(&self.ri * r), format!("basis element {b} does not commute with Ri"))
                .or_else(|| {
                    mismatch(&(r * &self.rj), &(&self.rj * r), format!("basis element {b} does not commute with Rj"))
                });
            for c in 0..d {
                if w.is_some() {
                    break;
                }
                let prod = alg.mul(&alg.basis_element(b), &alg.basis_element(c)).expect("basis");
                w = mismatch(&(r * &self.rho[c]), &self.act(&prod), format!("action is not multiplicative on ({b}, {c})"));
            }
        }
        rep.record("bimodule", w);

        let mut w = None;
        'outer: for b in 0..d {
            let lhs_base = self.rho[b].transpose();
            let l = alg.mult_matrix(b);
            for a in 0..d {
                let lhs = &lhs_base * &self.gram[a];
                let rhs = combine(&self.gram, &l.row(a));
                w = mismatch(&lhs, &rhs, format!("⟨e_{b} u, v⟩ ≠ e_{b}⟨u, v⟩ in coordinate {a}"));
                if w.is_some() {
                    break 'outer;
                }
            }
        }
        rep.record("linearity", w);

        let tgram: Vec<Matrix<T>> = self.gram.iter().map(Matrix::transpose).collect();
        let inv = alg.involution_matrix();
        let mut w = None;
        for a in 0..d {
            let rhs = combine(&tgram, &inv.row(a)).scale(&self.eps());
            w = mismatch(&self.gram[a], &rhs, format!("⟨u, v⟩ ≠ ε⟨v, u⟩^τ in coordinate {a}"));
            if w.is_some() {
                break;
            }
        }
        rep.record("epsilon symmetry", w);

        let mut w = None;
        for (a, b) in self.gram.iter().enumerate() {
            w = mismatch(&(&self.ri.transpose() * b), &-&(b * &self.ri), format!("⟨ui, v⟩ ≠ ⟨u, v(−i)⟩ in coordinate {a}"))
                .or_else(|| {
                    mismatch(&(&self.rj.transpose() * b), &-&(b * &self.rj), format!("⟨uj, v⟩ ≠ ⟨u, v(−j)⟩ in coordinate {a}"))
                });
            if w.is_some() {
                break;
            }
        }
        rep.record("quaternion symmetry", w);

        let stacked = Matrix::vstack(&self.gram.iter().collect::<Vec<_>>());
        let r = if n == 0 { 0 } else { rank(&stacked) };
        rep.record("nondegenerate", (r != n).then(|| format!("stacked Gram rank {r} < {n}")));
        rep
    }

    /// Error unless every axiom holds.
    pub fn ensure_valid(&self) -> Result<()> {
        let rep = self.validate();
        let first = rep.failures().next().cloned();
        match first {
            None => Ok(()),
            Some(c) => Err(Error::InvalidModule(format!("{}: {}", c.name, c.witness.unwrap_or_default()))),
        }
    }

    /// The twisted module: action through the involution, arguments of the
    /// form swapped.
    pub fn twist(&self) -> HermitianModule<T> {
        let inv = self.algebra.involution_matrix();
        let rho = (0..self.algebra.dim()).map(|b| combine(&self.rho, &inv.col(b))).collect();
        HermitianModule {
            algebra: self.algebra.clone(),
            epsilon: self.epsilon,
            rho,
            ri: self.ri.clone(),
            rj: self.rj.clone(),
            gram: self.gram.iter().map(Matrix::transpose).collect(),
        }
    }

    /// Image of the module under an invertible `g`, so that `g` becomes an
    /// isometry from `self` onto the result.
    pub fn transport(&self, g: &Matrix<T>) -> Result<HermitianModule<T>> {
        let gi = inverse(g).ok_or_else(|| Error::BadParams("basis change is singular".into()))?;
        let conj = |m: &Matrix<T>| &(g * m) * &gi;
        let git = gi.transpose();
        Ok(HermitianModule {
            algebra: self.algebra.clone(),
            epsilon: self.epsilon,
            rho: self.rho.iter().map(conj).collect(),
            ri: conj(&self.ri),
            rj: conj(&self.rj),
            gram: self.gram.iter().map(|b| &(&git * b) * &gi).collect(),
        })
    }

    /// Restrict to the subspace spanned by the columns of `basis`, which must
    /// be stable under every structure map. The algebra is replaced by
    /// `algebra`, whose basis element `b` acts as `rho[b]` (given on the
    /// ambient space) and whose coordinate `a` is read off `gram[a]`.
    pub fn restrict_to(
        &self,
        basis: &Matrix<T>,
        algebra: InvolutiveAlgebra<T>,
        rho: &[Matrix<T>],
        gram: &[Matrix<T>],
    ) -> Result<HermitianModule<T>> {
        let res = |m: &Matrix<T>| {
            restrict(basis, m).ok_or_else(|| Error::InvalidModule("subspace is not stable".into()))
        };
        let bt = basis.transpose();
        HermitianModule::new(
            algebra,
            self.epsilon,
            rho.iter().map(res).collect::<Result<_>>()?,
            res(&self.ri)?,
            res(&self.rj)?,
            gram.iter().map(|g| &(&bt * g) * basis).collect(),
        )
    }

    /// The summand cut out by simple factor `f`, as a module over that
    /// factor alone, together with the basis (columns) of the summand.
    pub fn factor_summand(&self, f: usize) -> Result<(HermitianModule<T>, Matrix<T>)> {
        let kind = self.algebra.factors()[f];
        let off = self.algebra.offsets()[f];
        let d = kind.real_dim();
        let basis = column_space(&self.act(&self.algebra.factor_unit(f)));
        let sub = self.restrict_to(
            &basis,
            InvolutiveAlgebra::new(&[kind])?,
            &self.rho[off..off + d],
            &self.gram[off..off + d],
        )?;
        Ok((sub, basis))
    }

    /// Orthogonal direct sum of modules over the same algebra.
    pub fn orthogonal_sum(parts: &[HermitianModule<T>]) -> Result<HermitianModule<T>> {
        let first = parts.first().ok_or_else(|| Error::BadParams("empty direct sum".into()))?;
        if parts.iter().any(|p| p.epsilon != first.epsilon || p.algebra != first.algebra) {
            return Err(Error::BadParams("summands differ in algebra or epsilon".into()));
        }
        let diag = |pick: &dyn Fn(&HermitianModule<T>) -> Matrix<T>| {
            Matrix::block_diag(&parts.iter().map(pick).collect::<Vec<_>>())
        };
        let d = first.algebra.dim();
        HermitianModule::new(
            first.algebra.clone(),
            first.epsilon,
            (0..d).map(|b| diag(&|p| p.rho[b].clone())).collect(),
            diag(&|p| p.ri.clone()),
            diag(&|p| p.rj.clone()),
            (0..d).map(|a| diag(&|p| p.gram[a].clone())).collect(),
        )
    }

    pub fn to_f64(&self) -> HermitianModule<f64> {
        self.map_matrices(Matrix::to_f64)
    }

    /// The same module with every structure matrix passed through `f`.
    pub fn map_matrices<U: Scalar>(&self, f: impl Fn(&Matrix<T>) -> Matrix<U>) -> HermitianModule<U> {
        HermitianModule {
            algebra: self.algebra.map_backend(),
            epsilon: self.epsilon,
            rho: self.rho.iter().map(&f).collect(),
            ri: f(&self.ri),
            rj: f(&self.rj),
            gram: self.gram.iter().map(&f).collect(),
        }
    }

    /// True if both modules carry numerically equal structure.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.algebra.factors() == other.algebra.factors()
            && self.epsilon == other.epsilon
            && self.ri.approx_eq(&other.ri)
            && self.rj.approx_eq(&other.rj)
            && self.rho.iter().zip(&other.rho).all(|(a, b)| a.approx_eq(b))
            && self.gram.iter().zip(&other.gram).all(|(a, b)| a.approx_eq(b))
    }
}

/// Check that `t` is an isomorphism of modules from `src` to `dst`
/// intertwining action, right quaternion action and form.
pub fn is_isometry<T: Scalar>(t: &Matrix<T>, src: &HermitianModule<T>, dst: &HermitianModule<T>) -> bool {
    if t.shape() != (dst.dim(), src.dim()) || src.algebra.factors() != dst.algebra.factors() {
        return false;
    }
    let tt = t.transpose();
    (&t.clone() * &src.ri).approx_eq(&(&dst.ri * t))
        && (t * &src.rj).approx_eq(&(&dst.rj * t))
        && src.rho.iter().zip(&dst.rho).all(|(a, b)| (t * a).approx_eq(&(b * t)))
        && src.gram.iter().zip(&dst.gram).all(|(a, b)| a.approx_eq(&(&(&tt * b) * t)))
}

/// `⟨u, v⟩ − ε⟨v, u⟩^τ`, which vanishes on valid modules.
pub fn symmetry_defect<T: Scalar>(e: &HermitianModule<T>, u: &[T], v: &[T]) -> Result<AlgebraElement<T>> {
    let uv = e.eval_form(u, v)?;
    let vu = e.algebra.apply_involution(&e.eval_form(v, u)?)?;
    Ok(uv.iter().zip(vu).map(|(a, b)| a.clone() - e.eps() * b).collect())
}

/// Convenience accessor mirroring [`Field::is_zero`] on algebra elements.
pub fn is_zero_element<T: Scalar>(a: &[T]) -> bool {
    a.iter().all(Field::is_zero)
}
