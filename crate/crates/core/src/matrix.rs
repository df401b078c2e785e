//! Dense complex matrices and the Hermitian spectral kernels.
//!
//! Every matrix in the crate (generators, metrics, pseudo-hermitian operators,
//! their hermitized partners) is a [`ComplexMatrix`]. Values are immutable:
//! all operations return fresh matrices.
//!
//! The eigensolver is a cyclic complex Jacobi method. Each rotation first
//! removes the phase of the pivot `A[p][q]` and then applies a real Givens
//! rotation, so the accumulated transform stays exactly unitary up to
//! rounding. Jacobi is slower than tridiagonal QL for large `N` but the
//! matrices handled here are at most a few hundred rows, and it delivers
//! eigenvectors with small componentwise residuals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{Real, Tolerances};

const MAX_JACOBI_SWEEPS: usize = 100;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T: Real = f64> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "({:+.6}{:+.6}i) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[inline]
fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, rejecting empty shapes and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(n_rows, n_cols, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[Vec<T>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| c(x, T::zero())).collect())
                .collect(),
        )
    }

    /// Unchecked constructor for internal use where entries are finite by construction.
    pub(crate) fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| czero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Complex::from(T::one()) } else { czero() })
    }

    pub fn from_diag(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { Complex::from(values[i]) } else { czero() })
    }

    pub fn from_diag_complex(values: &[Complex<T>]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { czero() })
    }

    /// `|i><j|` in an `n`-dimensional space (0-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        Self::from_fn(n, n, |r, s| {
            if r == i && s == j {
                Complex::from(T::one())
            } else {
                czero()
            }
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.cols + j]
    }

    /// Row-major view of the entries.
    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    /// Returns a copy with a single entry replaced.
    pub fn with_entry(&self, i: usize, j: usize, value: Complex<T>) -> Result<Self> {
        if i >= self.rows || j >= self.cols {
            return Err(Error::Shape(format!("index ({i}, {j}) outside {}x{}", self.rows, self.cols)));
        }
        let mut data = self.data.clone();
        data[i * self.cols + j] = value;
        Self::new(self.rows, self.cols, data)
    }

    fn require_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::Shape(format!("{what} requires a square matrix, got {}x{}", self.rows, self.cols)))
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    fn zip_with(&self, other: &Self, what: &str, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    /// Standard matrix product.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "matmul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut data = vec![czero(); n * p];
        for i in 0..n {
            for k in 0..m {
                let a = self.data[i * m + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &other.data[k * p..(k + 1) * p];
                for (out, &b) in data[i * p..(i + 1) * p].iter_mut().zip(row) {
                    *out = *out + a * b;
                }
            }
        }
        Ok(Self { rows: n, cols: p, data })
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("matrix has {} columns, vector has {} entries", self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(czero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    pub fn trace(&self) -> Result<Complex<T>> {
        let n = self.require_square("trace")?;
        Ok((0..n).fold(czero(), |acc, i| acc + self.get(i, i)))
    }

    /// Integer power for square matrices (`k = 0` gives the identity).
    pub fn powi(&self, k: usize) -> Result<Self> {
        let n = self.require_square("powi")?;
        let mut out = Self::identity(n);
        for _ in 0..k {
            out = out.matmul(self)?;
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `‖A − A†‖_F ≤ tol · max(1, ‖A‖_F)`. Non-square matrices are never Hermitian.
    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && self.hermiticity_defect() <= tol * T::one().max(self.frobenius_norm())
    }

    /// `‖A − A†‖_F` for square matrices.
    pub fn hermiticity_defect(&self) -> T {
        let n = self.rows;
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + (self.get(i, j) - self.get(j, i).conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self.get(i, j) + self.get(j, i).conj()) * half)
    }

    /// `(A − A†)/2`.
    pub fn antihermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self.get(i, j) - self.get(j, i).conj()) * half)
    }

    /// Eigendecomposition of a Hermitian matrix; eigenvalues ascending.
    ///
    /// The input must satisfy `‖H − H†‖_F ≤ tol·max(1, ‖H‖_F)`; its Hermitian
    /// part is what gets diagonalized.
    pub fn hermitian_eig(&self, tol: T) -> Result<HermitianEigen<T>> {
        let n = self.require_square("hermitian_eig")?;
        if !self.is_hermitian(tol) {
            return Err(Error::Contract(format!(
                "hermitian_eig on non-Hermitian input (defect {:e})",
                self.hermiticity_defect().as_f64()
            )));
        }
        jacobi_eig(self.hermitian_part(), n)
    }

    /// Square root of a Hermitian positive-definite matrix and its inverse.
    pub fn sqrt_spd(&self, tol: &Tolerances<T>) -> Result<(Self, Self)> {
        let eig = self.hermitian_eig(tol.eig)?;
        let lowest = eig.eigenvalues[0];
        if lowest <= tol.pd {
            return Err(Error::NotPositiveDefinite {
                eigenvalue: lowest.as_f64(),
            });
        }
        let root = eig.apply_fn(|x| Complex::from(x.sqrt()));
        let inverse_root = eig.apply_fn(|x| Complex::from(x.sqrt().recip()));
        Ok((root, inverse_root))
    }

    /// `exp(−i t H)` for Hermitian `H`, via its eigendecomposition.
    pub fn exp_antihermitian_from(&self, t: T, tol: T) -> Result<Self> {
        let eig = self.hermitian_eig(tol)?;
        Ok(eig.apply_fn(|x| {
            let phase = -t * x;
            c(phase.cos(), phase.sin())
        }))
    }

    /// Determinant via LU factorization with partial pivoting.
    pub fn determinant(&self) -> Result<Complex<T>> {
        let n = self.require_square("determinant")?;
        let mut a = self.data.clone();
        let mut det = Complex::from(T::one());
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().partial_cmp(&a[y * n + col].norm()).unwrap())
                .unwrap();
            let p = a[pivot * n + col];
            if p.norm() == T::zero() {
                return Ok(czero());
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                det = -det;
            }
            det = det * p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                for k in col..n {
                    let v = a[col * n + k];
                    a[r * n + k] = a[r * n + k] - factor * v;
                }
            }
        }
        Ok(det)
    }
}

/// `AB − BA`.
pub fn commutator<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    square_pair(a, b)?;
    a.matmul(b)?.checked_sub(&b.matmul(a)?)
}

/// `AB + BA`.
pub fn anticommutator<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    square_pair(a, b)?;
    a.matmul(b)?.checked_add(&b.matmul(a)?)
}

fn square_pair<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<()> {
    if !a.is_square() || !b.is_square() || a.rows != b.rows {
        return Err(Error::Shape(format!(
            "expected square matrices of equal size, got {}x{} and {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(())
}

/// Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen<T: Real = f64> {
    pub eigenvalues: Vec<T>,
    /// Columns are the eigenvectors, in eigenvalue order.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `Q f(Λ) Q†`.
    pub fn apply_fn(&self, f: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let n = self.eigenvalues.len();
        let fvals: Vec<Complex<T>> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        let q = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(czero(), |acc, k| acc + q.get(i, k) * fvals[k] * q.get(j, k).conj())
        })
    }

    /// `Q Λ Q†`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.apply_fn(Complex::from)
    }
}

fn jacobi_eig<T: Real>(a: ComplexMatrix<T>, n: usize) -> Result<HermitianEigen<T>> {
    let mut a = a.data;
    let mut v = ComplexMatrix::<T>::identity(n).data;
    let total: T = a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let eps = T::epsilon();
    let off_norm = |a: &[Complex<T>]| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s = s + a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = n == 1 || total == T::zero();
    let mut sweeps = 0;
    while !converged {
        if off_norm(&a) <= eps * total {
            converged = true;
            break;
        }
        if sweeps == MAX_JACOBI_SWEEPS {
            break;
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let z = a[p * n + q];
                let mag = z.norm();
                if mag <= eps * eps * total {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // Rotation W = diag(1, e^{-iφ}) · G, where G is the real Jacobi
                // rotation zeroing the phase-stripped pivot.
                let phase = z / mag;
                let theta = (aqq - app) / (T::lit(2.0) * mag);
                let t = if theta >= T::zero() {
                    (theta + (T::one() + theta * theta).sqrt()).recip()
                } else {
                    -(-theta + (T::one() + theta * theta).sqrt()).recip()
                };
                let cs = (T::one() + t * t).sqrt().recip();
                let sn = t * cs;
                let w_pp = Complex::from(cs);
                let w_pq = Complex::from(sn);
                let w_qp = phase.conj() * (-sn);
                let w_qq = phase.conj() * cs;
                // A ← A W
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * w_pp + akq * w_qp;
                    a[k * n + q] = akp * w_pq + akq * w_qq;
                }
                // A ← W† A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = w_pp.conj() * apk + w_qp.conj() * aqk;
                    a[q * n + k] = w_pq.conj() * apk + w_qq.conj() * aqk;
                }
                a[p * n + q] = czero();
                a[q * n + p] = czero();
                a[p * n + p] = Complex::from(a[p * n + p].re);
                a[q * n + q] = Complex::from(a[q * n + q].re);
                // V ← V W
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * w_pp + vkq * w_qp;
                    v[k * n + q] = vkp * w_pq + vkq * w_qq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi eigensolver did not converge in {MAX_JACOBI_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.partial_cmp(&a[j * n + j].re).unwrap());
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[i * n + order[j]]);
    Ok(HermitianEigen { eigenvalues, vectors })
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    /// Panics on shape mismatch; use [`ComplexMatrix::checked_add`] for a fallible sum.
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        self.checked_add(rhs).expect("matrix add shape mismatch")
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        self.checked_sub(rhs).expect("matrix sub shape mismatch")
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    /// Panics on shape mismatch; use [`ComplexMatrix::matmul`] for a fallible product.
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs).expect("matmul shape mismatch")
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr<T> {
    rows: usize,
    cols: usize,
    data: Vec<[T; 2]>,
}

impl<T: Real + Serialize> Serialize for ComplexMatrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for ComplexMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::<T>::deserialize(deserializer)?;
        let data = repr.data.into_iter().map(|[re, im]| c(re, im)).collect();
        ComplexMatrix::new(repr.rows, repr.cols, data).map_err(serde::de::Error::custom)
    }
}
