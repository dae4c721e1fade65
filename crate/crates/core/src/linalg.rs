//! Dense complex linear algebra for small bipartite operators.
//!
//! Composite indices follow a fixed convention everywhere in the crate:
//! `|i> (x) |j>` on an `n x k` space maps to index `i * k + j` (first factor
//! major, second factor minor). [`tensor_product`], [`partial_trace`] and
//! [`partial_transpose`] all use it.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_JACOBI_SWEEPS: usize = 100;

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = &self[(i, j)];
                write!(f, "{:+.6?}{:+.6?}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, rejecting empty shapes and
    /// non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "empty shape {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be non-empty");
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<T>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    /// Column matrix holding `v`.
    pub fn column_vector(v: &[Complex<T>]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// Outer product `|v><v|`.
    pub fn projector(v: &[Complex<T>]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn from_columns(columns: &[Vec<Complex<T>>]) -> Self {
        let rows = columns[0].len();
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm()))
    }

    /// Largest entry modulus of `self - self^dagger`.
    pub fn hermiticity_deviation(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut dev = T::zero();
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(m + m^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * half
        })
    }

    /// Largest entry modulus of `m^dagger m - 1`.
    pub fn unitarity_deviation(&self) -> T {
        let prod = &self.adjoint() * self;
        prod.max_abs_diff(&Self::identity(self.cols))
    }

    pub fn check_unitary(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "unitary must be square, got {}x{}",
                self.rows, self.cols
            )));
        }
        let dev = self.unitarity_deviation();
        if dev > T::lit(T::tolerances().unitary) {
            return Err(Error::NotUnitary {
                deviation: dev.as_f64(),
            });
        }
        Ok(())
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[l * rhs.cols..(l + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Dimensions `n x k` of a bipartite space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct BipartiteDims {
    n: usize,
    k: usize,
}

impl BipartiteDims {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 || k < 2 {
            return Err(Error::DimensionMismatch(format!(
                "bipartite factors must be at least 2, got {n}x{k}"
            )));
        }
        Ok(Self { n, k })
    }

    /// Shorthand for the `2 x k` spaces the bounds operate on.
    pub fn qubit_by(k: usize) -> Result<Self> {
        Self::new(2, k)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn total(&self) -> usize {
        self.n * self.k
    }

    /// Composite index of `|i> (x) |j>`.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.k + j
    }

    fn check_square<T: Real>(&self, m: &ComplexMatrix<T>) -> Result<()> {
        if m.rows() != self.total() || m.cols() != self.total() {
            return Err(Error::DimensionMismatch(format!(
                "expected {0}x{0} operator for dims {1}x{2}, got {3}x{4}",
                self.total(),
                self.n,
                self.k,
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for BipartiteDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n, self.k)
    }
}

/// Which factor of a bipartite space an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// Eigenvalues (descending) with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigensystem<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> Eigensystem<T> {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let fv: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|l| v[(i, l)] * v[(j, l)].conj() * fv[l]).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.reconstruct_with(|l| l)
    }

    pub fn min_value(&self) -> T {
        *self.values.last().expect("non-empty spectrum")
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// The input is symmetrized before the iteration when it is Hermitian within
/// tolerance.
pub fn hermitian_eigensystem<T: Real>(m: &ComplexMatrix<T>) -> Result<Eigensystem<T>> {
    check_hermitian(m)?;
    jacobi(&m.hermitian_part(), true).map(|(values, vectors)| Eigensystem {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Eigenvalues (descending) of a Hermitian matrix.
pub fn hermitian_eigenvalues<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    check_hermitian(m)?;
    jacobi(&m.hermitian_part(), false).map(|(values, _)| values)
}

fn check_hermitian<T: Real>(m: &ComplexMatrix<T>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let dev = m.hermiticity_deviation();
    if dev > T::herm_tol() {
        return Err(Error::NonHermitian {
            deviation: dev.as_f64(),
        });
    }
    Ok(())
}

fn jacobi<T: Real>(
    m: &ComplexMatrix<T>,
    want_vectors: bool,
) -> Result<(Vec<T>, Option<ComplexMatrix<T>>)> {
    let n = m.rows();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)].im = T::zero();
    }
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let frob2: T = a.data.iter().map(|z| z.norm_sqr()).sum();
    let eps = T::epsilon();
    let target = eps * eps * frob2;

    let mut converged = n == 1;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let off: T = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off <= target || off == T::zero() {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, v.as_mut(), p, q);
            }
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure {
            sweeps: MAX_JACOBI_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.partial_cmp(&a[(x, x)].re).expect("finite"));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.map(|v| ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]));
    Ok((values, vectors))
}

/// One Jacobi rotation annihilating `a[p][q]`.
///
/// The off-diagonal entry is first made real with a phase on column `q`, then
/// a real Givens rotation is applied; `J = diag(1, conj(e)) * R`.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: Option<&mut ComplexMatrix<T>>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == T::zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tiny = T::epsilon() * T::lit(1e-3) * (app.abs() + aqq.abs());
    if mag <= tiny {
        a[(p, q)] = Complex::zero();
        a[(q, p)] = Complex::zero();
        return;
    }
    let e = apq / mag;
    let theta = (aqq - app) / (mag + mag);
    let t = if theta == T::zero() {
        T::one()
    } else {
        theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let ec = e.conj();
    let n = a.rows();

    // A <- A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - ec * akq * s;
        a[(k, q)] = akp * s + ec * akq * c;
    }
    // A <- J^dagger A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - e * aqk * s;
        a[(q, k)] = apk * s + e * aqk * c;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)].im = T::zero();
    a[(q, q)].im = T::zero();

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * c - ec * vkq * s;
            v[(k, q)] = vkp * s + ec * vkq * c;
        }
    }
}

/// Kronecker product, first operand major.
pub fn tensor_product<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Kronecker product of two vectors.
pub fn tensor_vec<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Traces out `factor`, returning the reduced operator on the other one.
pub fn partial_trace<T: Real>(
    rho: &ComplexMatrix<T>,
    dims: BipartiteDims,
    factor: Factor,
) -> Result<ComplexMatrix<T>> {
    dims.check_square(rho)?;
    let (n, k) = (dims.n(), dims.k());
    Ok(match factor {
        Factor::Second => ComplexMatrix::from_fn(n, n, |a, b| {
            (0..k)
                .map(|j| rho[(dims.index(a, j), dims.index(b, j))])
                .sum()
        }),
        Factor::First => ComplexMatrix::from_fn(k, k, |a, b| {
            (0..n)
                .map(|i| rho[(dims.index(i, a), dims.index(i, b))])
                .sum()
        }),
    })
}

/// Transposes the indices of the second factor.
pub fn partial_transpose<T: Real>(
    rho: &ComplexMatrix<T>,
    dims: BipartiteDims,
) -> Result<ComplexMatrix<T>> {
    dims.check_square(rho)?;
    let k = dims.k();
    Ok(ComplexMatrix::from_fn(
        dims.total(),
        dims.total(),
        |r, c| {
            let (i, j) = (r / k, r % k);
            let (ip, jp) = (c / k, c % k);
            rho[(dims.index(i, jp), dims.index(ip, j))]
        },
    ))
}

/// Principal square root of a positive-semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-psd_tol, 0)` are clamped to zero.
pub fn matrix_sqrt_psd<T: Real>(rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let es = hermitian_eigensystem(rho)?;
    check_psd_spectrum(&es.values)?;
    Ok(es.reconstruct_with(|l| l.max(T::zero()).sqrt()))
}

/// Fails with `NotPsd` if the smallest eigenvalue is below `-psd_tol`.
pub fn check_psd_spectrum<T: Real>(values: &[T]) -> Result<()> {
    let min = values.iter().copied().fold(T::infinity(), T::min);
    if min < -T::psd_tol() {
        return Err(Error::NotPsd {
            min_eigenvalue: min.as_f64(),
        });
    }
    Ok(())
}

/// Singular values (descending) by one-sided Jacobi orthogonalization.
///
/// Small singular values carry absolute error of order `eps * |m|`, unlike
/// square roots of eigenvalues of `m^dagger m`.
pub fn singular_values<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    // work on the orientation with at most as many columns as rows
    let tall;
    let m = if m.cols() > m.rows() {
        tall = m.adjoint();
        &tall
    } else {
        m
    };
    let (rows, cols) = (m.rows(), m.cols());
    let mut cs: Vec<Vec<Complex<T>>> = (0..cols).map(|j| m.column(j)).collect();
    let eps = T::epsilon();
    let negligible = eps * eps * norm_sqr(&m.data);
    let orth_tol = eps * T::lit(rows as f64);
    let mut converged = cols == 1;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha = norm_sqr(&cs[p]);
                let beta = norm_sqr(&cs[q]);
                let gamma = inner(&cs[p], &cs[q]);
                let mag = gamma.norm();
                if mag == T::zero()
                    || mag <= orth_tol * (alpha * beta).sqrt()
                    || alpha.min(beta) <= negligible
                {
                    continue;
                }
                rotated = true;
                let e = gamma / mag;
                let theta = (beta - alpha) / (mag + mag);
                let t = if theta == T::zero() {
                    T::one()
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let ec = e.conj();
                for r in 0..rows {
                    let ap = cs[p][r];
                    let aq = cs[q][r];
                    cs[p][r] = ap * c - ec * aq * s;
                    cs[q][r] = ap * s + ec * aq * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure {
            sweeps: MAX_JACOBI_SWEEPS,
        });
    }
    let mut sv: Vec<T> = cs.iter().map(|c| norm_sqr(c).sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(sv)
}

pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_hermitian, random_matrix, random_psd, random_vector, rng};

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn bell_projector() -> M {
        let s = 0.5f64.sqrt();
        M::projector(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)])
    }

    #[test]
    fn singular_values_of_complex_symmetric_matrix() {
        // once cycled forever under a too strict orthogonality threshold
        let rows = [
            [
                c(-0.003170, -0.142504),
                c(-0.047489, 0.055321),
                c(-0.035704, -0.063573),
                c(0.112765, 0.004071),
            ],
            [
                c(-0.047489, 0.055321),
                c(0.127930, -0.122320),
                c(-0.022873, -0.013399),
                c(0.044094, 0.021922),
            ],
            [
                c(-0.035704, -0.063573),
                c(-0.022873, -0.013399),
                c(-0.090589, 0.100637),
                c(-0.007851, 0.038399),
            ],
            [
                c(0.112765, 0.004071),
                c(0.044094, 0.021922),
                c(-0.007851, 0.038399),
                c(0.012801, -0.012914),
            ],
        ];
        let m = M::from_row_major(4, 4, rows.concat()).unwrap();
        let sv = singular_values(&m).unwrap();
        let gram = hermitian_eigenvalues(&(&m.adjoint() * &m)).unwrap();
        for (s, l) in sv.iter().zip(&gram) {
            assert!((s * s - l).abs() < 1e-12);
        }
    }

    #[test]
    fn eigensystem_of_identity() {
        let es = hermitian_eigensystem(&M::identity(4)).unwrap();
        assert_eq!(es.values, vec![1.0; 4]);
    }

    #[test]
    fn eigensystem_of_diagonal_sorted_descending() {
        let es = hermitian_eigensystem(&M::from_real_diagonal(&[1.0, 3.0, -2.0])).unwrap();
        assert_eq!(es.values, vec![3.0, 1.0, -2.0]);
        assert_eq!(es.vectors.column(0)[1].norm(), 1.0);
        assert_eq!(es.vectors.column(1)[0].norm(), 1.0);
        assert_eq!(es.vectors.column(2)[2].norm(), 1.0);
    }

    #[test]
    fn eigensystem_reconstructs_random_hermitian() {
        let mut r = rng(11);
        for n in [2, 3, 4, 6, 9, 12] {
            let h = random_hermitian(&mut r, n);
            let es = hermitian_eigensystem(&h).unwrap();
            assert!(es.reconstruct().max_abs_diff(&h) < 1e-9, "n = {n}");
            assert!(es.vectors.unitarity_deviation() < 1e-10);
            assert!(es.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn eigensystem_rejects_non_hermitian() {
        let mut m = M::identity(2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            hermitian_eigensystem(&m),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn eigensystem_rejects_rectangular() {
        let m = M::zeros(2, 3);
        assert!(matches!(
            hermitian_eigensystem(&m),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn constructor_rejects_nan() {
        let err = M::from_row_major(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let dims = BipartiteDims::new(2, 3).unwrap();
        let zero = M::from_real_diagonal(&[1.0, 0.0]);
        let mixed = M::identity(3).scale(1.0 / 3.0);
        let rho = tensor_product(&zero, &mixed);
        let reduced = partial_trace(&rho, dims, Factor::Second).unwrap();
        assert!(reduced.max_abs_diff(&zero) < 1e-15);
        let other = partial_trace(&rho, dims, Factor::First).unwrap();
        assert!(other.max_abs_diff(&mixed) < 1e-15);
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let reduced = partial_trace(&bell_projector(), dims, Factor::Second).unwrap();
        assert!(reduced.max_abs_diff(&M::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mut r = rng(3);
        let dims = BipartiteDims::new(2, 3).unwrap();
        for _ in 0..20 {
            let rho = random_psd(&mut r, 6);
            for f in [Factor::First, Factor::Second] {
                let red = partial_trace(&rho, dims, f).unwrap();
                assert!((red.trace() - rho.trace()).norm() < 1e-12);
                let es = hermitian_eigensystem(&red).unwrap();
                assert!(es.min_value() > -1e-10);
            }
        }
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        let dims = BipartiteDims::new(2, 3).unwrap();
        assert!(partial_trace(&M::identity(4), dims, Factor::First).is_err());
    }

    #[test]
    fn partial_transpose_of_product_stays_psd() {
        let mut r = rng(5);
        let dims = BipartiteDims::new(2, 3).unwrap();
        let a = random_psd(&mut r, 2);
        let b = random_psd(&mut r, 3);
        let pt = partial_transpose(&tensor_product(&a, &b), dims).unwrap();
        assert!(pt.max_abs_diff(&tensor_product(&a, &b.transpose())) < 1e-15);
        assert!(hermitian_eigensystem(&pt).unwrap().min_value() > -1e-12);
    }

    #[test]
    fn partial_transpose_of_bell_has_negative_half() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let pt = partial_transpose(&bell_projector(), dims).unwrap();
        let min = hermitian_eigensystem(&pt).unwrap().min_value();
        assert!((min + 0.5).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_is_involutive() {
        let mut r = rng(8);
        let dims = BipartiteDims::new(2, 4).unwrap();
        let rho = random_psd(&mut r, 8);
        let twice = partial_transpose(&partial_transpose(&rho, dims).unwrap(), dims).unwrap();
        assert_eq!(twice, rho);
        let pt = partial_transpose(&rho, dims).unwrap();
        assert!(pt.hermiticity_deviation() < 1e-15);
        assert!((pt.trace() - rho.trace()).norm() < 1e-14);
    }

    #[test]
    fn sqrt_of_simple_matrices() {
        let s = matrix_sqrt_psd(&M::identity(3)).unwrap();
        assert!(s.max_abs_diff(&M::identity(3)) < 1e-15);
        let s = matrix_sqrt_psd(&M::from_real_diagonal(&[4.0, 1.0, 0.0])).unwrap();
        assert!(s.max_abs_diff(&M::from_real_diagonal(&[2.0, 1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn sqrt_squares_back() {
        let mut r = rng(21);
        for n in [2, 4, 6] {
            let rho = random_psd(&mut r, n);
            let s = matrix_sqrt_psd(&rho).unwrap();
            assert!((&s * &s).max_abs_diff(&rho) < 1e-8);
            assert!(hermitian_eigensystem(&s).unwrap().min_value() >= 0.0);
        }
    }

    #[test]
    fn sqrt_clamps_tiny_negative_and_rejects_large() {
        let s = matrix_sqrt_psd(&M::from_real_diagonal(&[1.0, -1e-12])).unwrap();
        assert_eq!(s[(1, 1)], c(0.0, 0.0));
        let err = matrix_sqrt_psd(&M::from_real_diagonal(&[1.0, -1e-6])).unwrap_err();
        assert!(matches!(err, Error::NotPsd { .. }));
    }

    #[test]
    fn tensor_product_conventions() {
        let i6 = tensor_product(&M::identity(2), &M::identity(3));
        assert_eq!(i6, M::identity(6));
        let d = tensor_product(&M::from_real_diagonal(&[1.0, 2.0]), &M::identity(3));
        assert_eq!(d, M::from_real_diagonal(&[1.0, 1.0, 1.0, 2.0, 2.0, 2.0]));
    }

    #[test]
    fn tensor_product_mixed_product_rule() {
        let mut r = rng(13);
        let a = random_matrix(&mut r, 2, 2);
        let b = random_matrix(&mut r, 3, 3);
        let v = random_matrix(&mut r, 2, 1).column(0);
        let w = random_matrix(&mut r, 3, 1).column(0);
        let lhs = tensor_product(&a, &b).mul_vec(&tensor_vec(&v, &w));
        let rhs = tensor_vec(&a.mul_vec(&v), &b.mul_vec(&w));
        let diff = lhs
            .iter()
            .zip(&rhs)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn tensor_product_is_associative() {
        let mut r = rng(17);
        for _ in 0..10 {
            let a = random_matrix(&mut r, 2, 2);
            let b = random_matrix(&mut r, 3, 2);
            let c = random_matrix(&mut r, 2, 3);
            let left = tensor_product(&tensor_product(&a, &b), &c);
            let right = tensor_product(&a, &tensor_product(&b, &c));
            assert!(left.max_abs_diff(&right) < 1e-12);
        }
    }

    #[test]
    fn singular_values_match_eigenvalues_of_gram() {
        let mut r = rng(31);
        for (rows, cols) in [(4, 4), (4, 2), (3, 1), (6, 3)] {
            let a = random_matrix(&mut r, rows, cols);
            let sv = singular_values(&a).unwrap();
            let gram = hermitian_eigensystem(&(&a.adjoint() * &a)).unwrap();
            for (s, l) in sv.iter().zip(&gram.values) {
                assert!((s * s - l).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_values_resolve_rank_deficiency() {
        let mut r = rng(32);
        let v = random_vector(&mut r, 4);
        let w = random_vector(&mut r, 3);
        let outer = M::from_fn(4, 3, |i, j| v[i] * w[j].conj());
        let sv = singular_values(&outer).unwrap();
        assert!((sv[0] - norm_sqr(&v).sqrt() * norm_sqr(&w).sqrt()).abs() < 1e-13);
        assert!(sv[1] < 1e-14 && sv[2] < 1e-14);
    }

    #[test]
    fn works_in_single_precision() {
        let h = ComplexMatrix::<f32>::from_real_diagonal(&[2.0, 5.0]);
        let es = hermitian_eigensystem(&h).unwrap();
        assert_eq!(es.values, vec![5.0, 2.0]);
        let mut r = rng(1);
        let h64 = random_hermitian(&mut r, 5);
        let h32 = ComplexMatrix::from_fn(5, 5, |i, j| {
            let z = h64[(i, j)];
            Complex::new(z.re as f32, z.im as f32)
        });
        let es = hermitian_eigensystem(&h32).unwrap();
        assert!(es.reconstruct().max_abs_diff(&h32) < 1e-5);
    }
}
