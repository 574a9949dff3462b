//! Rank, kernels, solves and spectra.
//!
//! Exact backends use fraction-exact Gauss–Jordan elimination; the float
//! backend routes through `nalgebra` (SVD for rank decisions, Schur for
//! spectra).

use nalgebra::DMatrix;

use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};

/// Relative singular-value cutoff for float rank decisions.
pub const FLOAT_RANK_TOLERANCE: f64 = 1e-8;

/// Reduced row echelon form; returns the reduced matrix and pivot columns.
pub fn rref<T: Field>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<T>> = (0..rows).map(|i| m.row(i)).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let pick = if T::EXACT {
            (r..rows).find(|&i| !a[i][c].is_zero())
        } else {
            (r..rows)
                .filter(|&i| !a[i][c].is_zero())
                .max_by(|&x, &y| a[x][c].magnitude().total_cmp(&a[y][c].magnitude()))
        };
        let Some(p) = pick else { continue };
        a.swap(r, p);
        let inv = T::one() / a[r][c].clone();
        for x in a[r].iter_mut().skip(c) {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (Matrix::from_rows(&a).reshaped_or_empty(rows, cols), pivots)
}

impl<T: Field> Matrix<T> {
    fn reshaped_or_empty(self, rows: usize, cols: usize) -> Self {
        if rows == 0 {
            Matrix::zeros(0, cols)
        } else {
            self
        }
    }
}

fn exact_kernel<T: Field>(m: &Matrix<T>) -> Matrix<T> {
    let n = m.cols();
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut out = Matrix::zeros(n, free.len());
    for (k, &f) in free.iter().enumerate() {
        out[(f, k)] = T::one();
        for (row, &p) in pivots.iter().enumerate() {
            out[(p, k)] = -r[(row, f)].clone();
        }
    }
    out
}

fn to_na(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

fn from_na(m: &DMatrix<f64>) -> Matrix<f64> {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// The most accurate of several SVD runs with different convergence
/// thresholds; any single threshold occasionally returns wrong factors.
fn accurate_svd(a: DMatrix<f64>) -> nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn> {
    let candidates = [1e-17, f64::EPSILON, 1e-14]
        .into_iter()
        .filter_map(|eps| a.clone().try_svd(true, true, eps, 100_000))
        .chain(std::iter::once(a.clone().svd(true, true)));
    let recompose_error = |s: &nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>| {
        s.clone().recompose().map_or(f64::INFINITY, |r| (r - &a).abs().max())
    };
    candidates
        .min_by(|x, y| recompose_error(x).total_cmp(&recompose_error(y)))
        .expect("at least one candidate")
}

/// Float SVD returning (U, singular values, Vᵀ) with enough rows padded so
/// that Vᵀ is square.
fn full_svd(m: &Matrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let (rows, cols) = m.shape();
    let padded_rows = rows.max(cols);
    let mut a = DMatrix::<f64>::zeros(padded_rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            a[(i, j)] = m[(i, j)];
        }
    }
    let svd = accurate_svd(a);
    let u = svd.u.expect("svd u");
    let vt = svd.v_t.expect("svd v_t");
    (u, svd.singular_values.iter().copied().collect(), vt)
}

fn float_cutoff(sv: &[f64]) -> f64 {
    FLOAT_RANK_TOLERANCE * sv.iter().copied().fold(1.0, f64::max)
}

/// Basis of the right kernel, as columns.
pub fn kernel<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    if T::EXACT || m.cols() == 0 {
        return exact_kernel(m);
    }
    if m.rows() == 0 {
        return Matrix::identity(m.cols());
    }
    let (_, sv, vt) = full_svd(&m.to_f64());
    let cut = float_cutoff(&sv);
    let null: Vec<usize> = (0..m.cols()).filter(|&i| sv.get(i).is_none_or(|s| *s <= cut)).collect();
    Matrix::from_fn(m.cols(), null.len(), |i, k| T::from_f64(vt[(null[k], i)]))
}

pub fn rank<T: Scalar>(m: &Matrix<T>) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    if T::EXACT {
        return rref(m).1.len();
    }
    let (_, sv, _) = full_svd(&m.to_f64());
    let cut = float_cutoff(&sv);
    sv.iter().filter(|s| **s > cut).count()
}

/// Basis of the column space (a subset of the columns for exact input,
/// an orthonormal basis for floats).
pub fn column_space<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    if m.cols() == 0 || m.rows() == 0 {
        return Matrix::zeros(m.rows(), 0);
    }
    if T::EXACT {
        let (_, pivots) = rref(m);
        return m.select_columns(&pivots);
    }
    let f = m.to_f64();
    let svd = accurate_svd(to_na(&f));
    let u = svd.u.expect("svd u");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let cut = float_cutoff(&sv);
    let keep: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > cut).collect();
    Matrix::from_fn(m.rows(), keep.len(), |i, k| T::from_f64(u[(i, keep[k])]))
}

/// Some solution `X` of `A X = B`, or `None` if the system is inconsistent.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Option<Matrix<T>> {
    assert_eq!(a.rows(), b.rows(), "solve: row mismatch");
    let n = a.cols();
    if T::EXACT {
        let aug = Matrix::hstack(&[a, b]);
        let (r, pivots) = rref(&aug);
        if pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut x = Matrix::zeros(n, b.cols());
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols() {
                x[(p, j)] = r[(row, n + j)].clone();
            }
        }
        return Some(x);
    }
    if n == 0 {
        return if b.is_zero() { Some(Matrix::zeros(0, b.cols())) } else { None };
    }
    let af = a.to_f64();
    let bf = b.to_f64();
    let (u, sv, vt) = full_svd(&af);
    let cut = float_cutoff(&sv);
    // x = V Σ⁺ Uᵀ b, with rows of the padded system beyond a.rows() equal to 0.
    let mut x = DMatrix::<f64>::zeros(n, b.cols());
    for (k, s) in sv.iter().enumerate() {
        if *s <= cut {
            continue;
        }
        for j in 0..b.cols() {
            let mut coef = 0.0;
            for i in 0..a.rows() {
                coef += u[(i, k)] * bf[(i, j)];
            }
            coef /= s;
            for i in 0..n {
                x[(i, j)] += vt[(k, i)] * coef;
            }
        }
    }
    let xm = from_na(&x);
    let resid = &(&af * &xm) - &bf;
    let scale = 1f64.max(bf.max_magnitude()).max(af.max_magnitude() * xm.max_magnitude());
    if resid.max_magnitude() > 1e-7 * scale {
        return None;
    }
    Some(Matrix::from_f64(&xm))
}

pub fn inverse<T: Scalar>(m: &Matrix<T>) -> Option<Matrix<T>> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    if n == 0 {
        return Some(Matrix::zeros(0, 0));
    }
    if T::EXACT {
        let aug = Matrix::hstack(&[m, &Matrix::identity(n)]);
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        return Some(r.submatrix(0, n, n, n));
    }
    let f = m.to_f64();
    let inv = to_na(&f).try_inverse()?;
    let inv = from_na(&inv);
    let check = &(&f * &inv) - &Matrix::identity(n);
    if check.max_magnitude() > 1e-6 {
        return None;
    }
    Some(Matrix::from_f64(&inv))
}

/// Matrix of `op` restricted to the invariant subspace spanned by the columns
/// of `basis`: the unique `R` with `op · basis = basis · R`.
pub fn restrict<T: Scalar>(basis: &Matrix<T>, op: &Matrix<T>) -> Option<Matrix<T>> {
    solve(basis, &(op * basis))
}

/// Kernel of the stacked linear map `X ↦ (L_1(X), L_2(X), ...)` restricted
/// to the span of `span`, returned as combinations of the span elements.
/// Each constraint is given by its values on the span elements.
pub fn constrained_span<T: Scalar>(span: &[Matrix<T>], images: &[Vec<Matrix<T>>]) -> Vec<Matrix<T>> {
    if span.is_empty() {
        return Vec::new();
    }
    let mut rows: Vec<Vec<T>> = Vec::new();
    for constraint in images {
        let flat: Vec<Vec<T>> = constraint.iter().map(Matrix::vectorize).collect();
        let len = flat.first().map_or(0, Vec::len);
        for e in 0..len {
            let row: Vec<T> = flat.iter().map(|v| v[e].clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    let coeffs = if rows.is_empty() {
        Matrix::identity(span.len())
    } else {
        kernel(&Matrix::from_rows(&rows))
    };
    (0..coeffs.cols())
        .map(|k| combine(span, &coeffs.col(k)))
        .collect()
}

/// Some `Σ c_k span_k` with `Σ c_k L_j(span_k) = targets_j` for every
/// constraint `j`, where `images[j][k] = L_j(span_k)`.
pub fn solve_in_span<T: Scalar>(
    span: &[Matrix<T>],
    images: &[Vec<Matrix<T>>],
    targets: &[Matrix<T>],
) -> Option<Matrix<T>> {
    if span.is_empty() {
        return None;
    }
    let mut cols: Vec<Vec<T>> = vec![Vec::new(); span.len()];
    let mut rhs: Vec<T> = Vec::new();
    for (constraint, target) in images.iter().zip(targets) {
        for (col, m) in cols.iter_mut().zip(constraint) {
            col.extend(m.vectorize());
        }
        rhs.extend(target.vectorize());
    }
    let a = Matrix::from_columns(rhs.len(), &cols);
    let c = solve(&a, &Matrix::column(&rhs))?;
    Some(combine(span, &c.col(0)))
}

/// `Σ c_k M_k`.
pub fn combine<T: Field>(mats: &[Matrix<T>], coeffs: &[T]) -> Matrix<T> {
    let (r, c) = mats[0].shape();
    let mut out = Matrix::zeros(r, c);
    for (m, a) in mats.iter().zip(coeffs) {
        if a.is_zero() {
            continue;
        }
        out = &out + &m.scale(a);
    }
    out
}

/// Iteration bound for one Schur decomposition attempt.
const SCHUR_MAX_ITERATIONS: usize = 20_000;

/// Complex eigenvalues of a real matrix as `(re, im)` pairs (float
/// estimate); all NaN if the Schur iteration does not converge.
pub fn eigenvalues_f64(m: &Matrix<f64>) -> Vec<(f64, f64)> {
    if m.rows() == 0 {
        return Vec::new();
    }
    let a = to_na(m);
    for eps in [f64::EPSILON, 1e-14, 1e-12, 1e-10, 1e-8] {
        if let Some(schur) = nalgebra::Schur::try_new(a.clone(), eps, SCHUR_MAX_ITERATIONS) {
            return schur.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
        }
    }
    vec![(f64::NAN, f64::NAN); m.rows()]
}

/// Group eigenvalue estimates into clusters of radius `radius` (relative to
/// `max(1, |λ|)`), returning cluster means and sizes.
pub fn cluster_eigenvalues(vals: &[(f64, f64)], radius: f64) -> Vec<((f64, f64), usize)> {
    let mut clusters: Vec<((f64, f64), usize)> = Vec::new();
    for &(re, im) in vals {
        let scale = 1f64.max((re * re + im * im).sqrt());
        if let Some(c) = clusters.iter_mut().find(|((cr, ci), _)| {
            ((cr - re).powi(2) + (ci - im).powi(2)).sqrt() <= radius * scale
        }) {
            let n = c.1 as f64;
            c.0 = ((c.0 .0 * n + re) / (n + 1.0), (c.0 .1 * n + im) / (n + 1.0));
            c.1 += 1;
        } else {
            clusters.push(((re, im), 1));
        }
    }
    clusters
}
