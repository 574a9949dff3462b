//! Univariate polynomials (ascending coefficients) and their matrix evaluation.

use crate::linalg::{cluster_eigenvalues, eigenvalues_f64};
use crate::matrix::Matrix;
use crate::scalar::{convergents, Complex, Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Field> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Field::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![T::one()] }
    }

    /// `x - a`
    pub fn linear(a: T) -> Self {
        Poly::new(vec![-a, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Poly::new(self.coeffs.iter().map(|c| c.clone() / lc.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
                        + other.coeffs.get(i).cloned().unwrap_or_else(T::zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![T::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() / lc.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].clone() - c.clone() * dc.clone();
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix<T>) -> Matrix<T> {
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * m) + &Matrix::scalar(n, c.clone());
        }
        acc
    }
}

impl<T: Scalar> Poly<T> {
    pub fn eval_complex(&self, z: &Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(), |acc, c| acc * z.clone() + Complex::real(c.clone()))
    }
}

/// Relative distance within which a convergent may stand for the float
/// approximation of a root.
const ROOT_MATCH: f64 = 1e-6;

/// The root of `p` in `ℚ(i)` near a float approximation, found among
/// continued fraction convergents of its coordinates and checked exactly.
/// Early convergents can be other roots of `p`, so candidates far from the
/// approximation are skipped.
pub fn gaussian_root<T: Scalar>(p: &Poly<T>, approx: (f64, f64), max_den: i64) -> Option<Complex<T>> {
    let res = convergents(approx.0, max_den);
    let ims = if approx.1 == 0.0 { vec![T::zero().to_rational()?] } else { convergents(approx.1, max_den) };
    let candidate = |a: usize, b: usize| Complex::new(T::from_rational(&res[a]), T::from_rational(&ims[b]));
    let reach = ROOT_MATCH * 1f64.max(approx.0.abs()).max(approx.1.abs());
    let near = |c: &Complex<T>| (c.re.to_f64() - approx.0).hypot(c.im.to_f64() - approx.1) <= reach;
    for total in 0..res.len() + ims.len() {
        for a in 0..res.len().min(total + 1) {
            let b = total - a;
            if b >= ims.len() {
                continue;
            }
            let c = candidate(a, b);
            if near(&c) && p.eval_complex(&c).is_zero() {
                return Some(c);
            }
        }
    }
    None
}

/// Faddeev–LeVerrier characteristic polynomial `det(x·1 - M)`.
pub fn charpoly_exact<T: Field>(m: &Matrix<T>) -> Poly<T> {
    let n = m.rows();
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut mk = Matrix::zeros(n, n);
    let mut c = T::one();
    for k in 1..=n {
        mk = &(m * &mk) + &Matrix::scalar(n, c.clone());
        let amk = m * &mk;
        c = -(amk.trace() / T::from_i64(k as i64));
        coeffs[n - k] = c.clone();
    }
    Poly::new(coeffs)
}

/// Real polynomial with the given complex roots (conjugate pairs expected).
pub fn poly_from_roots<T: Scalar>(roots: &[(f64, f64)]) -> Poly<T> {
    let mut re = vec![1.0f64];
    let mut im = vec![0.0f64];
    for &(a, b) in roots {
        let mut nre = vec![0.0; re.len() + 1];
        let mut nim = vec![0.0; im.len() + 1];
        for i in 0..re.len() {
            nre[i + 1] += re[i];
            nim[i + 1] += im[i];
            nre[i] -= a * re[i] - b * im[i];
            nim[i] -= a * im[i] + b * re[i];
        }
        re = nre;
        im = nim;
    }
    Poly::new(re.into_iter().map(T::from_f64).collect())
}

/// The squarefree part of the characteristic polynomial of `m`
/// (product of `x - λ` over distinct eigenvalues). Exact backends use
/// `p / gcd(p, p')`; floats cluster eigenvalue estimates.
pub fn squarefree_charpoly<T: Scalar>(m: &Matrix<T>, cluster_radius: f64) -> Poly<T> {
    if T::EXACT {
        let p = charpoly_exact(m);
        let g = p.gcd(&p.derivative());
        return p.div_rem(&g).0.monic();
    }
    let ev = eigenvalues_f64(&m.to_f64());
    let clusters = cluster_eigenvalues(&ev, cluster_radius);
    let roots: Vec<(f64, f64)> = clusters.iter().map(|(c, _)| *c).collect();
    poly_from_roots(&symmetrize_roots(&roots))
}

/// Force a root list to be closed under conjugation (float clusters of a
/// real matrix may drift slightly).
fn symmetrize_roots(roots: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (a, b) = roots[i];
        if b.abs() <= 1e-7 * 1f64.max(a.abs()) {
            out.push((a, 0.0));
            continue;
        }
        let partner = (0..roots.len()).filter(|&j| !used[j]).min_by(|&x, &y| {
            let dx = (roots[x].0 - a).powi(2) + (roots[x].1 + b).powi(2);
            let dy = (roots[y].0 - a).powi(2) + (roots[y].1 + b).powi(2);
            dx.total_cmp(&dy)
        });
        if let Some(j) = partner {
            used[j] = true;
            let re = (a + roots[j].0) / 2.0;
            let im = (b.abs() + roots[j].1.abs()) / 2.0;
            out.push((re, im));
            out.push((re, -im));
        } else {
            out.push((a, 0.0));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|x| rat(*x, 1)).collect())
    }

    #[test]
    fn gcd_and_division() {
        // (x-1)^2 (x+2)
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]));
        let g = f.gcd(&f.derivative());
        assert_eq!(g, p(&[-1, 1]));
        let (q, r) = f.div_rem(&p(&[2, 1]));
        assert!(r.is_zero());
        assert_eq!(q, p(&[1, -2, 1]));
    }

    #[test]
    fn charpoly_of_companion() {
        let m = Matrix::from_rows(&[vec![rat(0, 1), rat(-2, 1)], vec![rat(1, 1), rat(3, 1)]]);
        assert_eq!(charpoly_exact(&m), p(&[2, -3, 1]));
        assert!(charpoly_exact(&m).eval_matrix(&m).is_zero());
    }

    #[test]
    fn squarefree_part_of_jordan_block() {
        let m = Matrix::from_rows(&[
            vec![rat(2, 1), rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(2, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(3, 1)],
        ]);
        assert_eq!(squarefree_charpoly(&m, 1e-7), p(&[-2, 1]).mul(&p(&[-3, 1])));
        let f = squarefree_charpoly(&m.to_f64(), 1e-7);
        assert_eq!(f.degree(), Some(2));
    }
}
