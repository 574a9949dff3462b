//! Test elements for the conjugation pipeline.
//!
//! Exact samples are built from an sl₂ action transported into a standard
//! model: unipotents `exp(cE)`, split semisimple elements `Cayley(cH)`, and
//! products with semisimple elements of the centralizer. Semisimple
//! elements are kept only when their spectrum lies in `ℚ(i)`, which is
//! what the exact backend can split.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FactorKind, DEFAULT_CLUSTER_RADIUS};
use crate::classify::classify_with_isometry;
use crate::error::{no_solution, Result};
use crate::group::{cayley, is_in_lie_algebra, is_in_u, lie_algebra_basis, random_combination, random_from_lie_basis};
use crate::linalg::{eigenvalues_f64, inverse};
use crate::matrix::Matrix;
use crate::module::HermitianModule;
use crate::pipeline::nilpotent_exp;
use crate::poly::{gaussian_root, squarefree_charpoly, Poly};
use crate::scalar::{Field, Rational, Scalar};
use crate::sl2::{reconstruct, Sl2Triple};
use crate::standard::{small_params, standard_module, Params};

/// Attempts per eligible semisimple element.
const ELIGIBLE_TRIES: usize = 200;
/// Largest denominator tried when recovering an exact eigenvalue.
const ROOT_DENOMINATOR: i64 = 1_000_000_000;

/// One of the groups used in the verification runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupModel {
    pub name: &'static str,
    pub kind: FactorKind,
    pub epsilon: i8,
    pub params: Params,
}

impl GroupModel {
    pub fn module<T: Scalar>(&self) -> Result<HermitianModule<T>> {
        standard_module(self.kind, self.epsilon, self.params)
    }
}

pub fn group_models() -> Vec<GroupModel> {
    let g = |name, kind, epsilon, params| GroupModel { name, kind, epsilon, params };
    vec![
        g("Sp(1,1)", FactorKind::RId, 1, Params::Signature(1, 1)),
        g("O*(2)", FactorKind::RId, -1, Params::Rank(1)),
        g("O*(4)", FactorKind::RId, -1, Params::Rank(2)),
        g("GL1(H)", FactorKind::RxRSwap, 1, Params::Rank(1)),
        g("GL2(H)", FactorKind::RxRSwap, 1, Params::Rank(2)),
        g("U(1,1)", FactorKind::CConj, 1, Params::Signature(1, 1)),
        g("Sp2(C)", FactorKind::CId, 1, Params::Rank(1)),
        g("O2(C)", FactorKind::CId, -1, Params::Rank(2)),
    ]
}

/// How a sample was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    Unipotent,
    SplitSemisimple,
    Semisimple,
    Mixed,
}

impl std::fmt::Display for SampleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SampleKind::Unipotent => "unipotent",
            SampleKind::SplitSemisimple => "split semisimple",
            SampleKind::Semisimple => "semisimple",
            SampleKind::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

/// An sl₂ action on a standard module together with the Lie algebra of
/// the multiplicity modules, all in the standard coordinates.
#[derive(Clone, Debug)]
pub struct NilpotentFrame {
    pub triple: Sl2Triple<Rational>,
    /// Lie elements commuting with the triple.
    pub centralizer: Vec<Matrix<Rational>>,
}

/// Whether `m` is semisimple with spectrum in `ℚ(i)`: every root of the
/// squarefree characteristic polynomial is recovered exactly from the
/// float spectrum, and the real factors `x − a`, `x² − 2ax + a² + b²`
/// built from them annihilate `m`.
pub fn semisimple_over_gaussian_rationals(m: &Matrix<Rational>) -> bool {
    if m.rows() == 0 {
        return true;
    }
    let p = squarefree_charpoly(m, DEFAULT_CLUSTER_RADIUS);
    let mut roots: Vec<(Rational, Rational)> = Vec::new();
    for (re, im) in eigenvalues_f64(&m.to_f64()) {
        let Some(z) = gaussian_root(&p, (re, im.abs()), ROOT_DENOMINATOR) else {
            return false;
        };
        if !roots.contains(&(z.re.clone(), z.im.clone())) {
            roots.push((z.re, z.im));
        }
    }
    let mut annihilator = Poly::one();
    for (a, b) in roots {
        let factor = if b.is_zero() {
            Poly::linear(a)
        } else {
            let two = Rational::from_i64(2);
            Poly::new(vec![&a * &a + &b * &b, -(two * &a), Rational::one()])
        };
        annihilator = annihilator.mul(&factor);
    }
    annihilator.eval_matrix(m).is_zero()
}

/// A Lie element from `basis` with spectrum in `ℚ(i)`, using sparse small
/// combinations.
pub fn eligible_lie_element(basis: &[Matrix<Rational>], n: usize, rng: &mut ChaCha8Rng) -> Option<Matrix<Rational>> {
    if basis.is_empty() {
        return None;
    }
    for _ in 0..ELIGIBLE_TRIES {
        let terms = rng.gen_range(1..=2.min(basis.len()));
        let mut x = Matrix::zeros(n, n);
        for _ in 0..terms {
            let b = &basis[rng.gen_range(0..basis.len())];
            x = &x + &b.scale(&Rational::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3)));
        }
        if !x.is_zero() && semisimple_over_gaussian_rationals(&x) {
            return Some(x);
        }
    }
    None
}

/// Find an sl₂ action with nonzero nilpotent on the given standard model,
/// built from two-dimensional irreducibles tensored with a multiplicity
/// module and transported by the classification isometry.
pub fn nilpotent_frame(kind: FactorKind, epsilon: i8, params: Params) -> Result<Option<NilpotentFrame>> {
    let target = standard_module::<Rational>(kind, epsilon, params)?;
    let qdim = params.quaternionic_dim(kind, epsilon);
    for circle_params in small_params(kind, -epsilon, qdim) {
        let cdim = circle_params.quaternionic_dim(kind, -epsilon);
        if cdim == 0 || 2 * cdim > qdim {
            continue;
        }
        for rest_params in small_params(kind, epsilon, qdim) {
            if 2 * cdim + rest_params.quaternionic_dim(kind, epsilon) != qdim {
                continue;
            }
            let circle = standard_module::<Rational>(kind, -epsilon, circle_params)?;
            let mut parts = vec![(2, circle.clone())];
            if rest_params.quaternionic_dim(kind, epsilon) > 0 {
                parts.push((1, standard_module::<Rational>(kind, epsilon, rest_params)?));
            }
            let (m, triple) = reconstruct(&parts)?;
            let Ok(result) = classify_with_isometry(&m) else {
                continue;
            };
            if result.invariants != vec![params] {
                continue;
            }
            let t = &result.isometry;
            let t_inv = inverse(t).ok_or_else(|| no_solution("classification isometry"))?;
            let move_in = |x: &Matrix<Rational>| &(t * x) * &t_inv;
            let triple =
                Sl2Triple { h: move_in(&triple.h), e: move_in(&triple.e), f: move_in(&triple.f) };
            let id_2 = Matrix::<Rational>::identity(2);
            let mut centralizer: Vec<Matrix<Rational>> = lie_algebra_basis(&circle)
                .iter()
                .map(|y| {
                    let mut full = Matrix::zeros(m.dim(), m.dim());
                    full.set_block(0, 0, &id_2.kron(y));
                    move_in(&full)
                })
                .collect();
            if parts.len() == 2 {
                let rest = &parts[1].1;
                let offset = 2 * circle.dim();
                centralizer.extend(lie_algebra_basis(rest).iter().map(|y| {
                    let mut full = Matrix::zeros(m.dim(), m.dim());
                    full.set_block(offset, offset, y);
                    move_in(&full)
                }));
            }
            debug_assert!(triple.acts_on(&target));
            return Ok(Some(NilpotentFrame { triple, centralizer }));
        }
    }
    Ok(None)
}

/// [`nilpotent_frame`] for an arbitrary module with one simple factor,
/// moved over by its classification isometry. `None` when the module has
/// several factors, no exact classification, or no nonzero nilpotent.
pub fn module_nilpotent_frame(e: &HermitianModule<Rational>) -> Result<Option<NilpotentFrame>> {
    let [kind] = e.algebra.factors() else {
        return Ok(None);
    };
    let Ok(result) = classify_with_isometry(e) else {
        return Ok(None);
    };
    let Some(frame) = nilpotent_frame(*kind, e.epsilon, result.invariants[0])? else {
        return Ok(None);
    };
    let t = &result.isometry;
    let t_inv = inverse(t).ok_or_else(|| no_solution("classification isometry"))?;
    let pull = |x: &Matrix<Rational>| &(&t_inv * x) * t;
    Ok(Some(NilpotentFrame {
        triple: Sl2Triple { h: pull(&frame.triple.h), e: pull(&frame.triple.e), f: pull(&frame.triple.f) },
        centralizer: frame.centralizer.iter().map(pull).collect(),
    }))
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = loop {
        let v = rng.gen_range(-3..=3);
        if v != 0 {
            break v;
        }
    };
    Rational::from_ratio(num, rng.gen_range(1..=3))
}

/// A random conjugating element of `U(e)` with small entries.
fn conjugator_element(basis: &[Matrix<Rational>], n: usize, rng: &mut ChaCha8Rng) -> Result<(Matrix<Rational>, Matrix<Rational>)> {
    let h = if basis.is_empty() {
        Matrix::identity(n)
    } else {
        let b = &basis[rng.gen_range(0..basis.len())];
        cayley(&b.scale(&small_rational(rng))).unwrap_or_else(|| Matrix::identity(n))
    };
    let h_inv = inverse(&h).ok_or_else(|| no_solution("conjugating element"))?;
    Ok((h, h_inv))
}

/// `count` exact-eligible elements of `U(e)`, cycling through the sample
/// kinds available on this model, each conjugated by a random group
/// element. Deterministic in `seed`.
pub fn exact_group_samples(
    e: &HermitianModule<Rational>,
    frame: Option<&NilpotentFrame>,
    count: usize,
    seed: u64,
) -> Result<Vec<(SampleKind, Matrix<Rational>)>> {
    let n = e.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = lie_algebra_basis(e);
    let kinds: &[SampleKind] = if frame.is_some() {
        &[SampleKind::Unipotent, SampleKind::SplitSemisimple, SampleKind::Mixed, SampleKind::Semisimple]
    } else {
        &[SampleKind::Semisimple]
    };
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > count * ELIGIBLE_TRIES {
            return Err(crate::error::Error::RetriesExhausted(attempts));
        }
        let kind = kinds[out.len() % kinds.len()];
        let x = match (kind, frame) {
            (SampleKind::Unipotent, Some(f)) => nilpotent_exp(&f.triple.e.scale(&small_rational(&mut rng)))?,
            (SampleKind::SplitSemisimple, Some(f)) => match cayley(&f.triple.h.scale(&small_rational(&mut rng))) {
                Some(s) => s,
                None => continue,
            },
            (SampleKind::Mixed, Some(f)) => {
                let s = if f.centralizer.is_empty() {
                    Matrix::scalar(n, Rational::from_i64(-1))
                } else {
                    let Some(y) = eligible_lie_element(&f.centralizer, n, &mut rng) else { continue };
                    let Some(s) = cayley(&y) else { continue };
                    s
                };
                &s * &nilpotent_exp(&f.triple.e.scale(&small_rational(&mut rng)))?
            }
            _ => {
                let Some(y) = eligible_lie_element(&basis, n, &mut rng) else { continue };
                let Some(s) = cayley(&y) else { continue };
                if rng.gen_bool(0.5) {
                    -&s
                } else {
                    s
                }
            }
        };
        let (h, h_inv) = conjugator_element(&basis, n, &mut rng)?;
        let x = &(&h * &x) * &h_inv;
        if !is_in_u(e, &x)? {
            return Err(no_solution("constructed sample is not unitary"));
        }
        out.push((kind, x));
    }
    Ok(out)
}

/// `count` Lie elements that the exact backend can negate: nilpotents
/// `cE`, split `cH`, and sums `cE + Y` with `Y` in the centralizer (a
/// further nilpotent when the centralizer is zero).
pub fn exact_lie_samples(
    e: &HermitianModule<Rational>,
    frame: Option<&NilpotentFrame>,
    count: usize,
    seed: u64,
) -> Result<Vec<(SampleKind, Matrix<Rational>)>> {
    let n = e.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = lie_algebra_basis(e);
    let kinds: &[SampleKind] = if frame.is_some() {
        &[SampleKind::Unipotent, SampleKind::SplitSemisimple, SampleKind::Mixed, SampleKind::Semisimple]
    } else {
        &[SampleKind::Semisimple]
    };
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > count * ELIGIBLE_TRIES {
            return Err(crate::error::Error::RetriesExhausted(attempts));
        }
        let kind = kinds[out.len() % kinds.len()];
        let x = match (kind, frame) {
            (SampleKind::Unipotent, Some(f)) => f.triple.e.scale(&small_rational(&mut rng)),
            (SampleKind::SplitSemisimple, Some(f)) => f.triple.h.scale(&small_rational(&mut rng)),
            (SampleKind::Mixed, Some(f)) => {
                let nilpotent = f.triple.e.scale(&small_rational(&mut rng));
                if f.centralizer.is_empty() {
                    nilpotent
                } else {
                    let Some(y) = eligible_lie_element(&f.centralizer, n, &mut rng) else { continue };
                    &y + &nilpotent
                }
            }
            _ => {
                let Some(y) = eligible_lie_element(&basis, n, &mut rng) else { continue };
                y
            }
        };
        let (h, h_inv) = conjugator_element(&basis, n, &mut rng)?;
        let x = &(&h * &x) * &h_inv;
        if !is_in_lie_algebra(e, &x)? {
            return Err(no_solution("constructed Lie sample is not in the Lie algebra"));
        }
        out.push((kind, x));
    }
    Ok(out)
}

/// `count` Cayley-random elements of `U(e)`.
pub fn float_group_samples<T: Scalar>(e: &HermitianModule<T>, count: usize, seed: u64) -> Result<Vec<Matrix<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = lie_algebra_basis(e);
    (0..count).map(|_| random_from_lie_basis(&basis, e.dim(), &mut rng)).collect()
}

/// `count` random Lie elements.
pub fn float_lie_samples<T: Scalar>(e: &HermitianModule<T>, count: usize, seed: u64) -> Vec<Matrix<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = lie_algebra_basis(e);
    (0..count).map(|_| random_combination(&basis, e.dim(), &mut rng)).collect()
}
