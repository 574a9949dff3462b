//! Commutative involutive real algebras: the five simple kinds, finite
//! products of them, and splitting a concrete matrix algebra into factors.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{cluster_eigenvalues, eigenvalues_f64, inverse, rank};
use crate::matrix::Matrix;
use crate::poly::{gaussian_root, squarefree_charpoly};
use crate::scalar::{Complex, Field, Scalar};

/// Default cluster radius for float spectral splitting.
pub const DEFAULT_CLUSTER_RADIUS: f64 = 1e-7;
/// Largest denominator tried when recovering an exact eigenvalue.
const MAX_ROOT_DENOMINATOR: i64 = 1_000_000_000_000;

/// The simple commutative involutive algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorKind {
    /// ℝ with the identity.
    RId,
    /// ℂ with the identity.
    CId,
    /// ℂ with complex conjugation.
    CConj,
    /// ℝ×ℝ with the coordinate swap.
    RxRSwap,
    /// ℂ×ℂ with the coordinate swap.
    CxCSwap,
}

impl FactorKind {
    pub const ALL: [FactorKind; 5] =
        [FactorKind::RId, FactorKind::CId, FactorKind::CConj, FactorKind::RxRSwap, FactorKind::CxCSwap];

    pub fn tag(self) -> &'static str {
        match self {
            FactorKind::RId => "R_id",
            FactorKind::CId => "C_id",
            FactorKind::CConj => "C_conj",
            FactorKind::RxRSwap => "RxR_swap",
            FactorKind::CxCSwap => "CxC_swap",
        }
    }

    pub fn real_dim(self) -> usize {
        match self {
            FactorKind::RId => 1,
            FactorKind::CId | FactorKind::CConj | FactorKind::RxRSwap => 2,
            FactorKind::CxCSwap => 4,
        }
    }

    pub fn is_swap(self) -> bool {
        matches!(self, FactorKind::RxRSwap | FactorKind::CxCSwap)
    }

    pub fn is_complex(self) -> bool {
        matches!(self, FactorKind::CId | FactorKind::CConj | FactorKind::CxCSwap)
    }

    /// Involution in the standard basis: `[1]`, `[1, i]`, `[e₁, e₂]` or
    /// `[e₁, i·e₁, e₂, i·e₂]`.
    pub fn involution_matrix<T: Scalar>(self) -> Matrix<T> {
        let o = T::one();
        let z = T::zero();
        match self {
            FactorKind::RId => Matrix::identity(1),
            FactorKind::CId => Matrix::identity(2),
            FactorKind::CConj => Matrix::from_rows(&[vec![o.clone(), z.clone()], vec![z, -o]]),
            FactorKind::RxRSwap => Matrix::from_rows(&[vec![z.clone(), o.clone()], vec![o, z]]),
            FactorKind::CxCSwap => {
                let mut m = Matrix::zeros(4, 4);
                m[(0, 2)] = o.clone();
                m[(1, 3)] = o.clone();
                m[(2, 0)] = o.clone();
                m[(3, 1)] = o;
                m
            }
        }
    }

    /// Coordinates of `e_a · e_b` in the standard basis.
    fn product(self, a: usize, b: usize) -> Vec<i64> {
        let mut out = vec![0; self.real_dim()];
        match self {
            FactorKind::RId => out[0] = 1,
            FactorKind::CId | FactorKind::CConj => complex_unit_product(&mut out, 0, a, b),
            FactorKind::RxRSwap => {
                if a == b {
                    out[a] = 1;
                }
            }
            FactorKind::CxCSwap => {
                if a / 2 == b / 2 {
                    complex_unit_product(&mut out, 2 * (a / 2), a % 2, b % 2);
                }
            }
        }
        out
    }
}

fn complex_unit_product(out: &mut [i64], offset: usize, a: usize, b: usize) {
    match (a, b) {
        (0, 0) => out[offset] = 1,
        (1, 1) => out[offset] = -1,
        _ => out[offset + 1] = 1,
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FactorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FactorKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::Parse(format!("unknown algebra kind `{s}`")))
    }
}

/// Coordinates of an algebra element in the standard real basis.
pub type AlgebraElement<T> = Vec<T>;

/// A finite product of simple involutive algebras in their standard bases.
#[derive(Clone, Debug, PartialEq)]
pub struct InvolutiveAlgebra<T> {
    factors: Vec<FactorKind>,
    offsets: Vec<usize>,
    dim: usize,
    involution: Matrix<T>,
    /// `mult[b]` is the matrix of `x ↦ e_b · x`.
    mult: Vec<Matrix<T>>,
    trace: Vec<T>,
}

impl<T: Scalar> InvolutiveAlgebra<T> {
    pub fn new(factors: &[FactorKind]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyAlgebra);
        }
        let mut offsets = Vec::new();
        let mut dim = 0;
        for k in factors {
            offsets.push(dim);
            dim += k.real_dim();
        }
        let involution =
            Matrix::block_diag(&factors.iter().map(|k| k.involution_matrix::<T>()).collect::<Vec<_>>());
        let mut mult = vec![Matrix::zeros(dim, dim); dim];
        for (k, &off) in factors.iter().zip(&offsets) {
            let d = k.real_dim();
            for a in 0..d {
                for b in 0..d {
                    for (c, v) in k.product(a, b).into_iter().enumerate() {
                        if v != 0 {
                            mult[off + a][(off + c, off + b)] = T::from_i64(v);
                        }
                    }
                }
            }
        }
        let trace = mult.iter().map(Matrix::trace).collect();
        Ok(InvolutiveAlgebra { factors: factors.to_vec(), offsets, dim, involution, mult, trace })
    }

    pub fn factors(&self) -> &[FactorKind] {
        &self.factors
    }

    /// First real coordinate of each factor.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn involution_matrix(&self) -> &Matrix<T> {
        &self.involution
    }

    /// Row vector of the regular-representation trace.
    pub fn trace_functional(&self) -> &[T] {
        &self.trace
    }

    /// Matrix of left multiplication by the basis element `b`.
    pub fn mult_matrix(&self, b: usize) -> &Matrix<T> {
        &self.mult[b]
    }

    pub fn basis_element(&self, b: usize) -> AlgebraElement<T> {
        (0..self.dim).map(|i| if i == b { T::one() } else { T::zero() }).collect()
    }

    pub fn one(&self) -> AlgebraElement<T> {
        self.factors
            .iter()
            .zip(&self.offsets)
            .fold(vec![T::zero(); self.dim], |mut acc, (k, &off)| {
                for (i, v) in factor_unit(*k).into_iter().enumerate() {
                    acc[off + i] = v;
                }
                acc
            })
    }

    /// Unit of factor `f`, as an element of the whole algebra.
    pub fn factor_unit(&self, f: usize) -> AlgebraElement<T> {
        let mut out = vec![T::zero(); self.dim];
        for (i, v) in factor_unit::<T>(self.factors[f]).into_iter().enumerate() {
            out[self.offsets[f] + i] = v;
        }
        out
    }

    fn check_len(&self, a: &[T]) -> Result<()> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "algebra element has {} coordinates, expected {}",
                a.len(),
                self.dim
            )));
        }
        Ok(())
    }

    pub fn mul(&self, a: &[T], b: &[T]) -> Result<AlgebraElement<T>> {
        self.check_len(a)?;
        self.check_len(b)?;
        let mut out = vec![T::zero(); self.dim];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.mult[i].mul_vec(b)) {
                *o = o.clone() + ai.clone() * v;
            }
        }
        Ok(out)
    }

    pub fn apply_involution(&self, a: &[T]) -> Result<AlgebraElement<T>> {
        self.check_len(a)?;
        Ok(self.involution.mul_vec(a))
    }

    pub fn trace(&self, a: &[T]) -> Result<T> {
        self.check_len(a)?;
        Ok(a.iter().zip(&self.trace).fold(T::zero(), |acc, (x, t)| acc + x.clone() * t.clone()))
    }

    pub fn map_backend<U: Scalar>(&self) -> InvolutiveAlgebra<U> {
        InvolutiveAlgebra::new(&self.factors).expect("nonempty")
    }
}

fn factor_unit<T: Scalar>(k: FactorKind) -> Vec<T> {
    let mut v = vec![T::zero(); k.real_dim()];
    v[0] = T::one();
    match k {
        FactorKind::RxRSwap => v[1] = T::one(),
        FactorKind::CxCSwap => v[2] = T::one(),
        _ => {}
    }
    v
}

pub fn standard_algebra<T: Scalar>(kinds: &[FactorKind]) -> Result<InvolutiveAlgebra<T>> {
    InvolutiveAlgebra::new(kinds)
}

pub fn apply_involution<T: Scalar>(alg: &InvolutiveAlgebra<T>, a: &[T]) -> Result<AlgebraElement<T>> {
    alg.apply_involution(a)
}

/// A commutative matrix algebra split into simple involutive factors.
#[derive(Clone, Debug)]
pub struct Decomposition<T> {
    pub algebra: InvolutiveAlgebra<T>,
    /// Unit of each factor (for swap factors, the sum of the swapped pair).
    pub idempotents: Vec<Matrix<T>>,
    /// Matrix realizing each standard basis element of `algebra`.
    pub basis_images: Vec<Matrix<T>>,
}

impl<T: Scalar> Decomposition<T> {
    /// Realization of an algebra element.
    pub fn realize(&self, a: &[T]) -> Matrix<T> {
        crate::linalg::combine(&self.basis_images, a)
    }
}

/// Split the commutative algebra generated by `gens` (together with the
/// identity) into simple involutive factors. The involution is the adjoint
/// `M ↦ Φ⁻¹ Mᵀ Φ` for the invertible matrix `form`.
pub fn decompose_involutive<T: Scalar>(
    gens: &[Matrix<T>],
    form: &Matrix<T>,
    cluster_radius: f64,
) -> Result<Decomposition<T>> {
    let n = form.rows();
    let form_inv = inverse(form).ok_or(Error::DegenerateForm)?;
    let tau = |m: &Matrix<T>| &(&form_inv * &m.transpose()) * form;
    for (a, x) in gens.iter().enumerate() {
        if x.shape() != (n, n) {
            return Err(Error::DimensionMismatch("generator size differs from form".into()));
        }
        for y in &gens[a + 1..] {
            if !x.commutator(y).approx_eq(&Matrix::zeros(n, n)) {
                return Err(Error::BadParams("generators do not commute".into()));
            }
        }
    }
    let mut span = algebra_span(gens, n);
    // unit-size spanning elements for the float spectrum
    if !T::EXACT {
        for m in &mut span {
            *m = m.scale(&T::from_f64(1.0 / m.max_magnitude()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut last_err = Error::NotSemisimple("no generic element separates the factors".into());
    for _ in 0..16 {
        let coeffs: Vec<T> = (0..span.len()).map(|_| T::from_i64(rng.gen_range(-4..=4))).collect();
        let z = crate::linalg::combine(&span, &coeffs);
        match split_by_element(&z, gens, cluster_radius) {
            Ok(blocks) => {
                let blocks = if T::EXACT { blocks } else { blocks.into_iter().map(refine_block).collect() };
                return assemble(blocks, &tau, n);
            }
            Err(e @ Error::NotExactlySplittable) => return Err(e),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// Basis (as matrices) of the unital algebra generated by commuting `gens`.
fn algebra_span<T: Scalar>(gens: &[Matrix<T>], n: usize) -> Vec<Matrix<T>> {
    let mut basis = vec![Matrix::identity(n)];
    let mut frontier = 0;
    while frontier < basis.len() {
        let b = basis[frontier].clone();
        frontier += 1;
        for g in gens {
            let cand = &b * g;
            let mut stacked: Vec<Vec<T>> = basis.iter().map(Matrix::vectorize).collect();
            stacked.push(cand.vectorize());
            if rank(&Matrix::from_rows(&stacked).transpose()) == stacked.len() {
                basis.push(cand);
            }
        }
    }
    basis
}

/// One real block found by spectral splitting.
enum Block<T> {
    Real(Matrix<T>),
    /// Idempotent and complex structure on its image.
    Complex(Matrix<T>, Matrix<T>),
}

fn split_by_element<T: Scalar>(z: &Matrix<T>, gens: &[Matrix<T>], radius: f64) -> Result<Vec<Block<T>>> {
    let n = z.rows();
    let mut clusters = cluster_eigenvalues(&eigenvalues_f64(&z.to_f64()), radius);
    clusters.sort_by(|a, b| a.0 .0.total_cmp(&b.0 .0).then(a.0 .1.total_cmp(&b.0 .1)));
    let mut lambdas: Vec<Complex<T>> = Vec::new();
    let charpoly = if T::EXACT { Some(squarefree_charpoly(z, radius)) } else { None };
    for ((re, im), _) in &clusters {
        let scale = 1f64.max(re.abs()).max(im.abs());
        let im = if im.abs() <= radius * scale { 0.0 } else { *im };
        if let Some(p) = &charpoly {
            let root = gaussian_root(p, (*re, im), MAX_ROOT_DENOMINATOR).ok_or(Error::NotExactlySplittable)?;
            // a badly conditioned multiple root can split into several clusters
            if !lambdas.contains(&root) {
                lambdas.push(root);
            }
        } else {
            lambdas.push(Complex::new(T::from_f64(*re), T::from_f64(im)));
        }
    }
    let zc = z.complexify();
    let id = Matrix::<Complex<T>>::identity(n);
    let lagrange = |lambdas: &[Complex<T>]| -> Vec<Matrix<Complex<T>>> {
        lambdas
            .iter()
            .enumerate()
            .map(|(a, la)| {
                let mut p = id.clone();
                for (b, mu) in lambdas.iter().enumerate() {
                    if a != b {
                        let factor = (&zc - &Matrix::scalar(n, mu.clone())).scale(&(Complex::one() / (la.clone() - mu.clone())));
                        p = &p * &factor;
                    }
                }
                p
            })
            .collect()
    };
    let projectors = lagrange(&lambdas);
    let check = |ok: bool, msg: &str| -> Result<()> {
        if ok {
            Ok(())
        } else if T::EXACT {
            Err(Error::NotExactlySplittable)
        } else {
            Err(Error::NotSemisimple(msg.to_string()))
        }
    };
    let tol = 1e-6;
    let total = projectors.iter().fold(Matrix::zeros(n, n), |acc, p| &acc + p);
    check(total.close_to(&id, tol), "projectors do not sum to the identity")?;
    for (p, la) in projectors.iter().zip(&lambdas) {
        check((p * p).close_to(p, tol), "projector is not idempotent")?;
        check((&zc * p).close_to(&p.scale(la), tol), "element is not semisimple")?;
    }
    for g in gens {
        let gc = g.complexify();
        for p in &projectors {
            let gp = &gc * p;
            let c = gp.trace() / p.trace();
            if !gp.close_to(&p.scale(&c), tol) {
                return Err(Error::NotSemisimple("generic element does not separate the factors".into()));
            }
        }
    }
    let mut blocks = Vec::new();
    let mut used = vec![false; lambdas.len()];
    for a in 0..lambdas.len() {
        if used[a] {
            continue;
        }
        used[a] = true;
        if lambdas[a].is_real() {
            blocks.push(Block::Real(projectors[a].real_part()));
            continue;
        }
        let partner = (0..lambdas.len())
            .find(|&b| !used[b] && (lambdas[b].clone() - lambdas[a].conj()).is_zero())
            .ok_or_else(|| Error::NotSemisimple("eigenvalue without conjugate".into()))?;
        used[partner] = true;
        let p = &projectors[a] + &projectors[partner];
        let diff = &projectors[a] - &projectors[partner];
        let j = diff.scale(&Complex::i());
        blocks.push(Block::Complex(p.real_part(), j.real_part()));
    }
    Ok(blocks)
}

/// Newton steps `P ← 3P² − 2P³` and `J ← (J − J⁻¹)/2` (inverse taken on
/// the image of `P`), pulling float idempotents and complex structures
/// back onto `P² = P` and `J² = −P`.
fn refine_block<T: Scalar>(block: Block<T>) -> Block<T> {
    const STEPS: usize = 4;
    let refine_idempotent = |mut p: Matrix<T>| {
        for _ in 0..STEPS {
            let p2 = &p * &p;
            let p3 = &p2 * &p;
            p = &p2.scale(&T::from_i64(3)) - &p3.scale(&T::from_i64(2));
        }
        p
    };
    match block {
        Block::Real(p) => Block::Real(refine_idempotent(p)),
        Block::Complex(p, j) => {
            let p = refine_idempotent(p);
            let n = p.rows();
            let q = &Matrix::identity(n) - &p;
            let mut j = &(&p * &j) * &p;
            for _ in 0..STEPS {
                let Some(shifted) = inverse(&(&j + &q)) else { break };
                let j_inv = &shifted - &q;
                j = (&j - &j_inv).scale(&T::from_ratio(1, 2));
            }
            Block::Complex(p, j)
        }
    }
}

fn assemble<T: Scalar>(
    blocks: Vec<Block<T>>,
    tau: &dyn Fn(&Matrix<T>) -> Matrix<T>,
    n: usize,
) -> Result<Decomposition<T>> {
    let idem = |b: &Block<T>| match b {
        Block::Real(p) | Block::Complex(p, _) => p.clone(),
    };
    let mut used = vec![false; blocks.len()];
    let mut kinds = Vec::new();
    let mut idempotents = Vec::new();
    let mut images = Vec::new();
    for a in 0..blocks.len() {
        if used[a] {
            continue;
        }
        used[a] = true;
        let p = idem(&blocks[a]);
        let tp = tau(&p);
        if tp.approx_eq(&p) {
            match &blocks[a] {
                Block::Real(p) => {
                    kinds.push(FactorKind::RId);
                    images.push(p.clone());
                }
                Block::Complex(p, j) => {
                    let tj = tau(j);
                    if tj.approx_eq(j) {
                        kinds.push(FactorKind::CId);
                    } else if tj.approx_eq(&-j) {
                        kinds.push(FactorKind::CConj);
                    } else {
                        return Err(Error::NotSemisimple("involution is not an algebra map on a factor".into()));
                    }
                    images.push(p.clone());
                    images.push(j.clone());
                }
            }
            idempotents.push(p);
            continue;
        }
        let b = (0..blocks.len())
            .find(|&b| !used[b] && idem(&blocks[b]).approx_eq(&tp))
            .ok_or_else(|| Error::NotSemisimple("involution does not permute the factors".into()))?;
        used[b] = true;
        match &blocks[a] {
            Block::Real(p) => {
                kinds.push(FactorKind::RxRSwap);
                images.push(p.clone());
                images.push(tp.clone());
            }
            Block::Complex(p, j) => {
                kinds.push(FactorKind::CxCSwap);
                images.extend([p.clone(), j.clone(), tp.clone(), tau(j)]);
            }
        }
        idempotents.push(&p + &tp);
    }
    let total = idempotents.iter().fold(Matrix::zeros(n, n), |acc, p| &acc + p);
    if !total.close_to(&Matrix::identity(n), 1e-6) {
        return Err(Error::NotSemisimple("factor units do not sum to the identity".into()));
    }
    Ok(Decomposition { algebra: InvolutiveAlgebra::new(&kinds)?, idempotents, basis_images: images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn all_products_hold<T: Scalar>(alg: &InvolutiveAlgebra<T>) {
        let d = alg.dim();
        let inv = alg.involution_matrix();
        assert!((inv * inv).approx_eq(&Matrix::identity(d)));
        for a in 0..d {
            for b in 0..d {
                let ea = alg.basis_element(a);
                let eb = alg.basis_element(b);
                let ab = alg.mul(&ea, &eb).unwrap();
                let lhs = alg.apply_involution(&ab).unwrap();
                let rhs = alg
                    .mul(&alg.apply_involution(&ea).unwrap(), &alg.apply_involution(&eb).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
                assert_eq!(ab, alg.mul(&eb, &ea).unwrap());
            }
        }
        let t = alg.trace(&alg.one()).unwrap();
        assert_eq!(t, T::from_i64(d as i64));
        let one = alg.one();
        for a in 0..d {
            assert_eq!(alg.mul(&one, &alg.basis_element(a)).unwrap(), alg.basis_element(a));
            let ea = alg.basis_element(a);
            assert_eq!(alg.trace(&alg.apply_involution(&ea).unwrap()).unwrap(), alg.trace(&ea).unwrap());
        }
    }

    #[test]
    fn standard_kinds_are_involutive() {
        for k in FactorKind::ALL {
            all_products_hold(&InvolutiveAlgebra::<Rational>::new(&[k]).unwrap());
        }
        all_products_hold(&InvolutiveAlgebra::<Rational>::new(&FactorKind::ALL).unwrap());
    }

    #[test]
    fn involution_examples() {
        let a = InvolutiveAlgebra::<Rational>::new(&[FactorKind::RxRSwap]).unwrap();
        assert_eq!(a.apply_involution(&[rat(3, 1), rat(5, 1)]).unwrap(), vec![rat(5, 1), rat(3, 1)]);
        let c = InvolutiveAlgebra::<Rational>::new(&[FactorKind::CConj]).unwrap();
        assert_eq!(c.involution_matrix(), &Matrix::from_rows(&[vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(-1, 1)]]));
        assert!(InvolutiveAlgebra::<Rational>::new(&[]).is_err());
        assert!(a.apply_involution(&[rat(1, 1)]).is_err());
        assert_eq!("CxC_swap".parse::<FactorKind>().unwrap(), FactorKind::CxCSwap);
    }

    fn r(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(&rows.iter().map(|row| row.iter().map(|x| rat(*x, 1)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn decompose_examples() {
        let id = r(&[&[1, 0], &[0, 1]]);
        let d = decompose_involutive(&[id.clone()], &id, DEFAULT_CLUSTER_RADIUS).unwrap();
        assert_eq!(d.algebra.factors(), &[FactorKind::RId]);

        let rot = r(&[&[0, -1], &[1, 0]]);
        let d = decompose_involutive(&[rot.clone()], &id, DEFAULT_CLUSTER_RADIUS).unwrap();
        assert_eq!(d.algebra.factors(), &[FactorKind::CConj]);

        let s = Matrix::from_rows(&[vec![rat(2, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 2)]]);
        let swap = r(&[&[0, 1], &[1, 0]]);
        let d = decompose_involutive(&[s.clone()], &swap, DEFAULT_CLUSTER_RADIUS).unwrap();
        assert_eq!(d.algebra.factors(), &[FactorKind::RxRSwap]);
        let sum = d.idempotents.iter().fold(Matrix::zeros(2, 2), |a, p| &a + p);
        assert_eq!(sum, id);
        let df = decompose_involutive(&[s.to_f64()], &swap.to_f64(), DEFAULT_CLUSTER_RADIUS).unwrap();
        assert_eq!(df.algebra.factors(), &[FactorKind::RxRSwap]);
    }

    #[test]
    fn irrational_spectrum_rejected_exactly() {
        let id = r(&[&[1, 0], &[0, 1]]);
        let m = r(&[&[1, 1], &[1, -1]]);
        assert!(matches!(decompose_involutive(&[m.clone()], &id, DEFAULT_CLUSTER_RADIUS), Err(Error::NotExactlySplittable)));
        assert!(decompose_involutive(&[m.to_f64()], &id.to_f64(), DEFAULT_CLUSTER_RADIUS).is_ok());
        let nil = r(&[&[0, 1], &[0, 0]]);
        assert!(decompose_involutive(&[nil], &id, DEFAULT_CLUSTER_RADIUS).is_err());
    }

    #[test]
    fn realization_is_multiplicative() {
        // rotation generating ℂ acting on ℝ⁴ twice, with an identity involution
        let rot = r(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, 2]]);
        let id = Matrix::identity(4);
        let d = decompose_involutive(&[rot], &id, DEFAULT_CLUSTER_RADIUS).unwrap();
        let alg = &d.algebra;
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                let prod = alg.mul(&alg.basis_element(a), &alg.basis_element(b)).unwrap();
                assert_eq!(&d.basis_images[a] * &d.basis_images[b], d.realize(&prod));
            }
        }
    }
}
