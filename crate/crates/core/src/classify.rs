//! Classification of hermitian modules, with explicit isometries onto the
//! standard models.
//!
//! Every search below returns a frame: the images in `E` of the standard
//! model's real basis vectors. The isometry `E → standard` is its inverse.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::FactorKind;
use crate::error::{no_solution, Error, Result};
use crate::linalg::{inverse, kernel, rank};
use crate::matrix::Matrix;
use crate::module::{is_isometry, HermitianModule};
use crate::numtheory::{sum_of_four_squares, sum_of_two_squares};
use crate::quaternion::Quaternion;
use crate::scalar::{csqrt, Complex, Field, Scalar};
use crate::standard::{standard_product, standard_module, Params};

/// Random candidates tried when no simple pivot works.
const RANDOM_PIVOT_TRIES: usize = 3000;

/// Quaternion-valued form `Q` with `tr(Q(u, v) h) = ⟨u, v h⟩`, stored as
/// one real Gram matrix per quaternion coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionicForm<T> {
    pub parts: [Matrix<T>; 4],
}

impl<T: Scalar> QuaternionicForm<T> {
    pub fn eval(&self, u: &[T], v: &[T]) -> Quaternion<T> {
        let [a, b, c, d] = &self.parts;
        Quaternion::new(a.bilinear(u, v), b.bilinear(u, v), c.bilinear(u, v), d.bilinear(u, v))
    }

    /// The real form `tr Q`.
    pub fn contract(&self) -> Matrix<T> {
        self.parts[0].scale(&T::from_i64(2))
    }
}

fn require_kind<T: Scalar>(e: &HermitianModule<T>, kinds: &[FactorKind]) -> Result<FactorKind> {
    match e.algebra.factors() {
        [k] if kinds.contains(k) => Ok(*k),
        other => Err(Error::WrongAlgebra(format!(
            "expected one of {:?}, got {:?}",
            kinds.iter().map(|k| k.tag()).collect::<Vec<_>>(),
            other.iter().map(|k| k.tag()).collect::<Vec<_>>()
        ))),
    }
}

/// Quaternion-valued form of a module over `ℝ`.
pub fn transfer_quaternionic_form<T: Scalar>(e: &HermitianModule<T>) -> Result<QuaternionicForm<T>> {
    require_kind(e, &[FactorKind::RId])?;
    let phi = e.trace_form();
    let half = T::from_ratio(-1, 2);
    Ok(QuaternionicForm {
        parts: [
            phi.scale(&T::from_ratio(1, 2)),
            (&phi * &e.ri).scale(&half),
            (&phi * &e.rj).scale(&half),
            (&phi * &e.rk()).scale(&half),
        ],
    })
}

/// The complex subspace `F = {v : a·v = v·a for a ∈ ℂ}` of a module over
/// `ℂ`, with its complex-valued form.
#[derive(Clone, Debug)]
pub struct ComplexFixedSpace<T> {
    /// Complex basis of `F`, as vectors of `E`.
    pub basis: Vec<Vec<T>>,
    /// `gram[(k, l)] = ⟨f_k, f_l⟩_F`.
    pub gram: Matrix<Complex<T>>,
}

/// `v·z` for `v ∈ F` (where `z` acts through the algebra).
fn cmul<T: Scalar>(e: &HermitianModule<T>, v: &[T], z: &Complex<T>) -> Vec<T> {
    let iv = e.rho[1].mul_vec(v);
    v.iter().zip(iv).map(|(a, b)| a.clone() * z.re.clone() + b * z.im.clone()).collect()
}

fn axpy<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    x.iter().zip(y).map(|(a, b)| a.clone() + b.clone()).collect()
}

fn sub<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect()
}

/// The complex form on `F`: `⟨f, f'⟩_E` for conjugation, `⟨f, f'·j⟩_E` for
/// the identity involution.
fn f_form<T: Scalar>(e: &HermitianModule<T>, u: &[T], v: &[T]) -> Complex<T> {
    let v = if e.algebra.factors()[0] == FactorKind::CId { e.rj.mul_vec(v) } else { v.to_vec() };
    Complex::new(e.gram[0].bilinear(u, &v), e.gram[1].bilinear(u, &v))
}

/// Greedy basis of the span of `cols` modulo a closure operation: a vector
/// is kept when it together with `orbit(v)` raises the rank by `step`.
fn greedy_basis<T: Scalar>(cols: &[Vec<T>], orbit: impl Fn(&[T]) -> Vec<Vec<T>>, step: usize) -> Vec<Vec<T>> {
    let mut chosen: Vec<Vec<T>> = Vec::new();
    let mut spanned: Vec<Vec<T>> = Vec::new();
    let mut r = 0;
    for c in cols {
        let mut trial = spanned.clone();
        trial.extend(orbit(c));
        let n = c.len();
        let rt = rank(&Matrix::from_columns(n, &trial));
        if rt == r + step {
            chosen.push(c.clone());
            spanned = trial;
            r = rt;
        }
    }
    chosen
}

/// Right-ℍ basis of the span of `cols`.
pub fn quaternionic_basis<T: Scalar>(e: &HermitianModule<T>, cols: &[Vec<T>]) -> Vec<Vec<T>> {
    let rk = e.rk();
    greedy_basis(cols, |v| vec![v.to_vec(), e.ri.mul_vec(v), e.rj.mul_vec(v), rk.mul_vec(v)], 4)
}

fn frame_of<T: Scalar>(e: &HermitianModule<T>, vs: &[Vec<T>]) -> Matrix<T> {
    let rk = e.rk();
    let cols: Vec<Vec<T>> = vs
        .iter()
        .flat_map(|v| [v.clone(), e.ri.mul_vec(v), e.rj.mul_vec(v), rk.mul_vec(v)])
        .collect();
    Matrix::from_columns(e.dim(), &cols)
}

pub fn complex_fixed_space<T: Scalar>(e: &HermitianModule<T>) -> Result<ComplexFixedSpace<T>> {
    require_kind(e, &[FactorKind::CId, FactorKind::CConj])?;
    let n = e.dim();
    let i_act = &e.rho[1];
    let fspace = kernel(&(i_act - &e.ri));
    if 2 * fspace.cols() != n {
        return Err(Error::InvalidModule(format!(
            "fixed space has real dimension {}, expected {}",
            fspace.cols(),
            n / 2
        )));
    }
    let basis = greedy_basis(&fspace.columns(), |v| vec![v.to_vec(), i_act.mul_vec(v)], 2);
    let mut both: Vec<Vec<T>> = fspace.columns();
    both.extend(fspace.columns().iter().map(|v| e.rj.mul_vec(v)));
    if rank(&Matrix::from_columns(n, &both)) != n {
        return Err(Error::InvalidModule("F and F·j do not span the module".into()));
    }
    let m = basis.len();
    let gram = Matrix::from_fn(m, m, |k, l| f_form(e, &basis[k], &basis[l]));
    Ok(ComplexFixedSpace { basis, gram })
}

/// The two halves of a module over a swap algebra.
#[derive(Clone, Debug)]
pub struct SplitPair<T> {
    /// Columns spanning `e₁E`.
    pub first: Matrix<T>,
    /// Columns spanning `e₂E`.
    pub second: Matrix<T>,
    /// `firstᵀ B_{e₁} second`: the pairing between the halves.
    pub pairing: Matrix<T>,
}

pub fn split_idempotents<T: Scalar>(e: &HermitianModule<T>) -> Result<SplitPair<T>> {
    let kind = require_kind(e, &[FactorKind::RxRSwap, FactorKind::CxCSwap])?;
    let half = kind.real_dim() / 2;
    let first = crate::linalg::column_space(&e.rho[0]);
    let second = crate::linalg::column_space(&e.rho[half]);
    if first.cols() != second.cols() || first.cols() + second.cols() != e.dim() {
        return Err(Error::InvalidModule(format!(
            "halves have real dimensions {} and {}",
            first.cols(),
            second.cols()
        )));
    }
    let pairing = &(&first.transpose() * &e.gram[0]) * &second;
    if rank(&pairing) != first.cols() {
        return Err(Error::DegenerateForm);
    }
    Ok(SplitPair { first, second, pairing })
}

/// Result of classifying a module: invariants per simple factor, and an
/// isometry onto the standard module with those invariants.
#[derive(Clone, Debug)]
pub struct ClassificationResult<T> {
    pub invariants: Vec<Params>,
    pub isometry: Matrix<T>,
    pub standard: HermitianModule<T>,
}

/// How far a classification frame is normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Normalization {
    /// Lines carry exactly the standard form.
    Standard,
    /// Lines carry a nonzero central multiple of the standard form; over
    /// the rationals this avoids square roots and sums of squares.
    Scaled,
}

fn frames<T: Scalar>(e: &HermitianModule<T>, mode: Normalization) -> Result<(Vec<Params>, Matrix<T>)> {
    e.ensure_valid()?;
    let nf = e.algebra.factors().len();
    let mut invariants = Vec::new();
    let mut frames = Vec::new();
    for f in 0..nf {
        let (sub, basis) = if nf == 1 {
            (e.clone(), Matrix::identity(e.dim()))
        } else {
            e.factor_summand(f)?
        };
        let (params, frame) = classify_simple(&sub, mode)?;
        invariants.push(params);
        frames.push(&basis * &frame);
    }
    Ok((invariants, Matrix::hstack(&frames.iter().collect::<Vec<_>>())))
}

pub fn classify_with_isometry<T: Scalar>(e: &HermitianModule<T>) -> Result<ClassificationResult<T>> {
    let (invariants, frame) = frames(e, Normalization::Standard)?;
    let factors: Vec<(FactorKind, Params)> =
        e.algebra.factors().iter().copied().zip(invariants.iter().copied()).collect();
    let standard = standard_product(e.epsilon, &factors)?;
    let isometry = if e.dim() == 0 {
        Matrix::zeros(0, 0)
    } else {
        inverse(&frame).ok_or_else(|| no_solution("classification frame"))?
    };
    if !is_isometry(&isometry, e, &standard) {
        return Err(no_solution("classification isometry check"));
    }
    Ok(ClassificationResult { invariants, isometry, standard })
}

/// Invariants and a frame `F` whose columns are `v, vi, vj, vk` for an
/// orthogonal family of lines, each carrying a nonzero central multiple
/// of the standard form of its factor. In these coordinates `E` is the
/// standard module with rescaled lines.
pub fn scaled_frame<T: Scalar>(e: &HermitianModule<T>) -> Result<(Vec<Params>, Matrix<T>)> {
    frames(e, Normalization::Scaled)
}

/// Invariants only. The invariants are discrete, so when an exact frame
/// would need square roots they are read off the floating-point copy.
pub fn classify<T: Scalar>(e: &HermitianModule<T>) -> Result<Vec<Params>> {
    match scaled_frame(e) {
        Err(Error::NeedsIrrational(_)) if T::EXACT => Ok(scaled_frame(&e.to_f64())?.0),
        other => Ok(other?.0),
    }
}

fn classify_simple<T: Scalar>(e: &HermitianModule<T>, mode: Normalization) -> Result<(Params, Matrix<T>)> {
    let kind = e.algebra.factors()[0];
    match (kind, e.epsilon) {
        (FactorKind::RId, 1) => hermitian_quaternionic(e, mode),
        (FactorKind::RId, _) => skew_quaternionic(e, mode),
        (FactorKind::CId, 1) => complex_symplectic(e),
        (FactorKind::CId, _) => complex_orthogonal(e, mode),
        (FactorKind::CConj, _) => complex_hermitian(e, mode),
        _ => swap_pair(e, kind),
    }
}

/// Pick a vector `w[a] + Σ w[b]·m_b` accepted by `score`, replacing
/// `w[a]`. Exact backends take the first acceptable candidate, floats the
/// best scoring among the simple ones.
fn find_pivot<T: Scalar, M: Clone>(
    w: &[Vec<T>],
    multipliers: &[M],
    mul: &dyn Fn(&[T], &M) -> Vec<T>,
    random_multiplier: &dyn Fn(&mut ChaCha8Rng) -> M,
    score: &dyn Fn(&[T]) -> Option<f64>,
) -> Option<(usize, Vec<T>)> {
    let mut best: Option<(f64, usize, Vec<T>)> = None;
    let consider = |a: usize, v: Vec<T>, best: &mut Option<(f64, usize, Vec<T>)>| -> bool {
        if let Some(s) = score(&v) {
            if T::EXACT {
                *best = Some((s, a, v));
                return true;
            }
            if best.as_ref().is_none_or(|b| s > b.0) {
                *best = Some((s, a, v));
            }
        }
        false
    };
    for a in 0..w.len() {
        if consider(a, w[a].clone(), &mut best) {
            return best.map(|b| (b.1, b.2));
        }
    }
    for a in 0..w.len() {
        for b in 0..w.len() {
            if a == b {
                continue;
            }
            for m in multipliers {
                if consider(a, axpy(&w[a], &mul(&w[b], m)), &mut best) {
                    return best.map(|b| (b.1, b.2));
                }
            }
        }
    }
    if best.is_some() {
        return best.map(|b| (b.1, b.2));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..RANDOM_PIVOT_TRIES {
        let a = rng.gen_range(0..w.len());
        let mut v = w[a].clone();
        for (b, wb) in w.iter().enumerate() {
            if b != a {
                v = axpy(&v, &mul(wb, &random_multiplier(&mut rng)));
            }
        }
        if consider(a, v, &mut best) {
            break;
        }
    }
    best.map(|b| (b.1, b.2))
}

fn quaternion_multipliers<T: Scalar>() -> Vec<Quaternion<T>> {
    let mut out = Vec::new();
    for (a, b, c, d) in [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1), (2, 0, 0, 0), (-1, 0, 0, 0)] {
        out.push(Quaternion::from_ints(a, b, c, d));
    }
    out
}

fn random_quaternion<T: Scalar>(rng: &mut ChaCha8Rng) -> Quaternion<T> {
    let mut r = || rng.gen_range(-2..=2);
    Quaternion::from_ints(r(), r(), r(), r())
}

fn complex_multipliers<T: Scalar>() -> Vec<Complex<T>> {
    [(1, 0), (0, 1), (1, 1), (1, -1), (2, 0), (-1, 0), (2, 1)]
        .iter()
        .map(|&(a, b)| Complex::new(T::from_i64(a), T::from_i64(b)))
        .collect()
}

fn random_complex<T: Scalar>(rng: &mut ChaCha8Rng) -> Complex<T> {
    Complex::new(T::from_i64(rng.gen_range(-3..=3)), T::from_i64(rng.gen_range(-3..=3)))
}

fn full_basis<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    Matrix::<T>::identity(n).columns()
}

/// Quaternion `c` with `N(c) = t`, for `t > 0`.
fn quaternion_of_norm<T: Scalar>(t: &T) -> Option<Quaternion<T>> {
    if T::EXACT {
        let s = sum_of_four_squares(&t.to_rational()?)?;
        Some(Quaternion::new(
            T::from_rational(&s[0]),
            T::from_rational(&s[1]),
            T::from_rational(&s[2]),
            T::from_rational(&s[3]),
        ))
    } else {
        Some(Quaternion::real(t.sqrt()?))
    }
}

/// Complex `z` with `|z|² = t`, for `t > 0`.
fn complex_of_norm<T: Scalar>(t: &T) -> Option<Complex<T>> {
    if T::EXACT {
        let (a, b) = sum_of_two_squares(&t.to_rational()?)?;
        Some(Complex::new(T::from_rational(&a), T::from_rational(&b)))
    } else {
        Some(Complex::real(t.sqrt()?))
    }
}

/// Some `c` with `c̄ q c = j`, for a pure quaternion `q ≠ 0`.
pub fn rescale_to_j<T: Scalar>(q: &Quaternion<T>) -> Option<Quaternion<T>> {
    let c0 = rotate_to_j(q)?;
    let r = q.norm().sqrt()?;
    let t = T::one() / (r * c0.norm());
    let m = complex_of_norm(&t)?;
    let c = c0 * Quaternion::new(m.re, T::zero(), m.im, T::zero());
    (c.conj() * q.clone() * c.clone()).approx_eq(&Quaternion::j()).then_some(c)
}

/// Some `c` with `c̄ q c` a positive multiple of `j`, for a pure quaternion
/// `q ≠ 0` whose norm is a square in the backend.
pub fn rotate_to_j<T: Scalar>(q: &Quaternion<T>) -> Option<Quaternion<T>> {
    if q.is_zero() || !q.a.is_zero() {
        return None;
    }
    let r = q.norm().sqrt()?;
    let u = q.scale(&(T::one() / r));
    let s = u + Quaternion::j();
    Some(if s.norm().magnitude() > 1e-6 { s } else { Quaternion::i() })
}

fn right_mul_vec<T: Scalar>(e: &HermitianModule<T>, v: &[T], h: &Quaternion<T>) -> Vec<T> {
    e.right_mult(h).mul_vec(v)
}

fn hermitian_quaternionic<T: Scalar>(e: &HermitianModule<T>, mode: Normalization) -> Result<(Params, Matrix<T>)> {
    let q = transfer_quaternionic_form(e)?;
    let mut w = quaternionic_basis(e, &full_basis(e.dim()));
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    let mul = |v: &[T], h: &Quaternion<T>| right_mul_vec(e, v, h);
    let normalize = mode == Normalization::Standard;
    while !w.is_empty() {
        let score = |v: &[T]| {
            let r = q.eval(v, v).a;
            if r.is_zero() {
                return None;
            }
            if T::EXACT && normalize && quaternion_of_norm(&(T::one() / r.abs())).is_none() {
                return None;
            }
            Some(r.magnitude())
        };
        let (a, mut v) = find_pivot(&w, &quaternion_multipliers(), &mul, &random_quaternion, &score)
            .ok_or(Error::DegenerateForm)?;
        let r = q.eval(&v, &v).a;
        if normalize {
            let c = quaternion_of_norm(&(T::one() / r.abs()))
                .ok_or_else(|| Error::NeedsIrrational("normalizing a hermitian vector".into()))?;
            v = mul(&v, &c);
        }
        let r_inv = T::one() / q.eval(&v, &v).a;
        w.remove(a);
        for x in w.iter_mut() {
            let h = q.eval(&v, x).scale(&r_inv);
            *x = sub(x, &mul(&v, &h));
        }
        if r.is_negative() {
            neg.push(v);
        } else {
            pos.push(v);
        }
    }
    let params = Params::Signature(pos.len(), neg.len());
    pos.extend(neg);
    Ok((params, frame_of(e, &pos)))
}

fn skew_quaternionic<T: Scalar>(e: &HermitianModule<T>, mode: Normalization) -> Result<(Params, Matrix<T>)> {
    let q = transfer_quaternionic_form(e)?;
    let mut w = quaternionic_basis(e, &full_basis(e.dim()));
    let mut out = Vec::new();
    let mul = |v: &[T], h: &Quaternion<T>| right_mul_vec(e, v, h);
    let rescale = |s: &Quaternion<T>| match mode {
        Normalization::Standard => rescale_to_j(s),
        Normalization::Scaled => rotate_to_j(s),
    };
    while !w.is_empty() {
        let score = |v: &[T]| {
            let s = q.eval(v, v);
            if s.is_zero() {
                return None;
            }
            if T::EXACT && rescale(&s).is_none() {
                return None;
            }
            Some(s.norm().magnitude())
        };
        let (a, v) = find_pivot(&w, &quaternion_multipliers(), &mul, &random_quaternion, &score)
            .ok_or_else(|| Error::NeedsIrrational("finding a skew-hermitian vector of value j".into()))?;
        let c = rescale(&q.eval(&v, &v))
            .ok_or_else(|| Error::NeedsIrrational("rescaling a skew-hermitian vector".into()))?;
        let v = mul(&v, &c);
        let value_inv = q.eval(&v, &v).inverse().ok_or(Error::DegenerateForm)?;
        w.remove(a);
        for x in w.iter_mut() {
            let h = value_inv.clone() * q.eval(&v, x);
            *x = sub(x, &mul(&v, &h));
        }
        out.push(v);
    }
    Ok((Params::Rank(out.len()), frame_of(e, &out)))
}

fn complex_hermitian<T: Scalar>(e: &HermitianModule<T>, mode: Normalization) -> Result<(Params, Matrix<T>)> {
    let fs = complex_fixed_space(e)?;
    let twist = if e.epsilon == 1 { Complex::one() } else { -Complex::i() };
    let h = |u: &[T], v: &[T]| f_form(e, u, v) * twist.clone();
    let mul = |v: &[T], z: &Complex<T>| cmul(e, v, z);
    let normalize = mode == Normalization::Standard;
    let mut w = fs.basis;
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    while !w.is_empty() {
        let score = |v: &[T]| {
            let r = h(v, v).re;
            if r.is_zero() {
                return None;
            }
            if T::EXACT && normalize && complex_of_norm(&(T::one() / r.abs())).is_none() {
                return None;
            }
            Some(r.magnitude())
        };
        let (a, mut v) = find_pivot(&w, &complex_multipliers(), &mul, &random_complex, &score)
            .ok_or_else(|| Error::NeedsIrrational("normalizing a hermitian vector".into()))?;
        let r = h(&v, &v).re;
        if normalize {
            let z = complex_of_norm(&(T::one() / r.abs()))
                .ok_or_else(|| Error::NeedsIrrational("normalizing a hermitian vector".into()))?;
            v = mul(&v, &z);
        }
        let r_inv = Complex::real(T::one() / h(&v, &v).re);
        w.remove(a);
        for x in w.iter_mut() {
            let c = h(x, &v) * r_inv.clone();
            *x = sub(x, &mul(&v, &c));
        }
        if r.is_negative() {
            neg.push(v);
        } else {
            pos.push(v);
        }
    }
    let params = Params::Signature(pos.len(), neg.len());
    pos.extend(neg);
    Ok((params, frame_of(e, &pos)))
}

fn complex_orthogonal<T: Scalar>(e: &HermitianModule<T>, mode: Normalization) -> Result<(Params, Matrix<T>)> {
    let fs = complex_fixed_space(e)?;
    let g = |u: &[T], v: &[T]| f_form(e, u, v);
    let mul = |v: &[T], z: &Complex<T>| cmul(e, v, z);
    let normalize = mode == Normalization::Standard;
    let mut w = fs.basis;
    let mut done = Vec::new();
    let mut pending: Vec<(Vec<T>, Complex<T>)> = Vec::new();
    while !w.is_empty() {
        let square = |v: &[T]| {
            let r = g(v, v);
            (!r.is_zero() && csqrt(&r).is_some()).then(|| r.magnitude())
        };
        let nonzero = |v: &[T]| {
            let r = g(v, v);
            (!r.is_zero()).then(|| r.magnitude())
        };
        let found = if normalize {
            find_pivot(&w, &complex_multipliers(), &mul, &random_complex, &square)
                .or_else(|| find_pivot(&w, &complex_multipliers(), &mul, &random_complex, &nonzero))
        } else {
            find_pivot(&w, &complex_multipliers(), &mul, &random_complex, &nonzero)
        };
        let (a, v) = found.ok_or(Error::DegenerateForm)?;
        let r = g(&v, &v);
        w.remove(a);
        for x in w.iter_mut() {
            let c = g(x, &v) / r.clone();
            *x = sub(x, &mul(&v, &c));
        }
        if !normalize {
            done.push(v);
            continue;
        }
        match csqrt(&r) {
            Some(s) => done.push(mul(&v, &(Complex::one() / s))),
            None => pending.push((v, r)),
        }
    }
    while let Some((x, r1)) = pending.pop() {
        let partner = pending
            .iter()
            .position(|(_, r2)| csqrt(&(r2.clone() / r1.clone())).is_some())
            .ok_or_else(|| Error::NeedsIrrational("normalizing an orthogonal basis".into()))?;
        let (y, r2) = pending.remove(partner);
        let t = csqrt(&(r2 / r1.clone())).expect("checked");
        let y = mul(&y, &(Complex::one() / t));
        let iy = mul(&y, &Complex::i());
        let p = axpy(&x, &iy);
        let qv = sub(&x, &iy);
        let half_q = mul(&qv, &(Complex::one() / (r1 * Complex::from_i64(4))));
        done.push(axpy(&p, &half_q));
        done.push(mul(&sub(&p, &half_q), &Complex::i()));
    }
    Ok((Params::Rank(done.len()), frame_of(e, &done)))
}

fn complex_symplectic<T: Scalar>(e: &HermitianModule<T>) -> Result<(Params, Matrix<T>)> {
    let fs = complex_fixed_space(e)?;
    let g = |u: &[T], v: &[T]| f_form(e, u, v);
    let mul = |v: &[T], z: &Complex<T>| cmul(e, v, z);
    let mut w = fs.basis;
    let (mut vs, mut ws) = (Vec::new(), Vec::new());
    while !w.is_empty() {
        let v = w.remove(0);
        let b = w
            .iter()
            .enumerate()
            .filter(|(_, x)| !g(&v, x).is_zero())
            .max_by(|x, y| g(&v, x.1).magnitude().total_cmp(&g(&v, y.1).magnitude()))
            .map(|(b, _)| b)
            .ok_or(Error::DegenerateForm)?;
        let x = w.remove(b);
        let wv = mul(&x, &(Complex::one() / g(&v, &x)));
        for x in w.iter_mut() {
            let a = g(x, &wv);
            let c = g(x, &v);
            *x = axpy(&sub(x, &mul(&v, &a)), &mul(&wv, &c));
        }
        vs.push(v);
        ws.push(wv);
    }
    let n = vs.len();
    vs.extend(ws);
    Ok((Params::Rank(n), frame_of(e, &vs)))
}

fn swap_pair<T: Scalar>(e: &HermitianModule<T>, kind: FactorKind) -> Result<(Params, Matrix<T>)> {
    let sp = split_idempotents(e)?;
    let n = sp.first.cols() / 4;
    let std = standard_module::<T>(kind, e.epsilon, Params::Rank(n))?;
    let cols = sp.first.columns();
    let first_basis = if kind == FactorKind::RxRSwap {
        quaternionic_basis(e, &cols)
    } else {
        let fixed = kernel(&(&e.rho[1] - &e.ri));
        let fixed_in_first: Vec<Vec<T>> = fixed.columns().iter().map(|v| e.rho[0].mul_vec(v)).collect();
        greedy_basis(&fixed_in_first, |v| vec![v.to_vec(), e.rho[1].mul_vec(v)], 2)
    };
    if first_basis.len() != n {
        return Err(Error::InvalidModule("first half is not free of the expected rank".into()));
    }
    let x = frame_of(e, &first_basis);
    let m = &(&x.transpose() * &e.gram[0]) * &sp.second;
    let std_first = Matrix::<T>::identity(8 * n).submatrix(0, 0, 8 * n, 4 * n);
    let std_second = Matrix::<T>::identity(8 * n).submatrix(0, 4 * n, 8 * n, 4 * n);
    let target = &(&std_first.transpose() * &std.gram[0]) * &std_second;
    let y = &sp.second * &crate::linalg::solve(&m, &target).ok_or(Error::DegenerateForm)?;
    Ok((Params::Rank(n), Matrix::hstack(&[&x, &y])))
}
