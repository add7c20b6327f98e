//! Small dense complex matrices and a Schur-based eigensolver.
//!
//! Reduction to upper Hessenberg form uses Householder reflections; the
//! Hessenberg matrix is then driven to triangular form by single-shift
//! implicit QR sweeps with Wilkinson shifts. For a normal (in particular
//! unitary) input the triangular factor is diagonal, so the accumulated Schur
//! vectors are already an orthonormal eigenbasis.

use std::ops::{Index, IndexMut, Mul};

use num_traits::{One, Zero};

use crate::error::{Result, SnakeError};
use crate::scalar::{Cx, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Cx::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Cx::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
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

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn column(&self, j: usize) -> Vec<Cx<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[Cx<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Leading `n x n` block.
    pub fn leading_block(&self, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| self[(i, j)])
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// `max |M M^H - I|`.
    pub fn unitarity_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.rows {
                let mut acc: Cx<T> = self
                    .row(i)
                    .iter()
                    .zip(self.row(j))
                    .map(|(a, b)| *a * b.conj())
                    .fold(Cx::zero(), |s, x| s + x);
                if i == j {
                    acc -= Cx::one();
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn matvec(&self, v: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Cx::zero(), |s, (a, b)| s + *a * *b)
            })
            .collect()
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = Cx<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;
    fn mul(self, rhs: &DenseMatrix<T>) -> DenseMatrix<T> {
        assert_eq!(self.cols, rhs.rows);
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Tolerance used for unitarity and residual contracts: `1e-10` in `f64`.
pub fn unitary_tolerance<T: Real>() -> T {
    T::epsilon() * T::lit(4.5e5)
}

/// Complex Schur decomposition `A = Q T Q^H`.
#[derive(Debug, Clone)]
pub struct Schur<T> {
    pub q: DenseMatrix<T>,
    pub t: DenseMatrix<T>,
}

impl<T: Real> Schur<T> {
    pub fn eigenvalues(&self) -> Vec<Cx<T>> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }
}

/// Rotation `R = [[c, s], [-conj(s), c]]` with real `c` such that
/// `R [x; y] = [r; 0]`.
fn givens<T: Real>(x: Cx<T>, y: Cx<T>) -> (T, Cx<T>) {
    let ax = x.norm();
    let ay = y.norm();
    let nu = ax.hypot(ay);
    if nu.is_zero() {
        return (T::one(), Cx::zero());
    }
    if ax.is_zero() {
        return (T::zero(), Cx::one());
    }
    let phase = x / ax;
    (ax / nu, phase * y.conj() / nu)
}

fn rotate_rows<T: Real>(
    m: &mut DenseMatrix<T>,
    k: usize,
    c: T,
    s: Cx<T>,
    cols: std::ops::Range<usize>,
) {
    for j in cols {
        let x = m[(k, j)];
        let y = m[(k + 1, j)];
        m[(k, j)] = x * c + s * y;
        m[(k + 1, j)] = -s.conj() * x + y * c;
    }
}

/// `M <- M R^H` on columns `k, k+1`.
fn rotate_cols<T: Real>(
    m: &mut DenseMatrix<T>,
    k: usize,
    c: T,
    s: Cx<T>,
    rows: std::ops::Range<usize>,
) {
    for i in rows {
        let x = m[(i, k)];
        let y = m[(i, k + 1)];
        m[(i, k)] = x * c + y * s.conj();
        m[(i, k + 1)] = -x * s + y * c;
    }
}

fn hessenberg_reduce<T: Real>(a: &mut DenseMatrix<T>, q: &mut DenseMatrix<T>) {
    let n = a.rows();
    let two = T::lit(2.0);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Cx<T>> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let xnorm = x.iter().map(|v| v.norm_sqr()).sum::<T>().sqrt();
        if xnorm.is_zero() {
            continue;
        }
        let phase = if x[0].is_zero() {
            Cx::one()
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vv = v.iter().map(|c| c.norm_sqr()).sum::<T>();
        if vv.is_zero() {
            continue;
        }
        let scale = two / vv;
        // A <- H A
        for j in k..n {
            let s = v.iter().enumerate().fold(Cx::zero(), |acc, (l, vl)| {
                acc + vl.conj() * a[(k + 1 + l, j)]
            });
            let s = s * scale;
            for (l, vl) in v.iter().enumerate() {
                a[(k + 1 + l, j)] -= s * vl;
            }
        }
        // A <- A H, Q <- Q H
        for m in [&mut *a, &mut *q] {
            for i in 0..n {
                let s = v
                    .iter()
                    .enumerate()
                    .fold(Cx::zero(), |acc, (l, vl)| acc + m[(i, k + 1 + l)] * vl);
                let s = s * scale;
                for (l, vl) in v.iter().enumerate() {
                    m[(i, k + 1 + l)] -= s * vl.conj();
                }
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = Cx::zero();
        }
    }
}

fn wilkinson_shift<T: Real>(a: Cx<T>, b: Cx<T>, c: Cx<T>, d: Cx<T>) -> Cx<T> {
    let half = T::lit(0.5);
    let mean = (a + d) * half;
    let diff = (a - d) * half;
    let disc = (diff * diff + b * c).sqrt();
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur form of a square matrix.
pub fn schur<T: Real>(a: &DenseMatrix<T>) -> Result<Schur<T>> {
    if !a.is_square() {
        return Err(SnakeError::InvalidSize(format!(
            "eigenproblem needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut t = a.clone();
    let mut q = DenseMatrix::identity(n);
    if n <= 1 {
        return Ok(Schur { q, t });
    }
    hessenberg_reduce(&mut t, &mut q);

    let eps = T::epsilon();
    let scale = t.data.iter().map(|c| c.norm()).fold(T::zero(), T::max);
    let max_sweeps = 60 * n;
    let mut sweeps = 0;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = t[(l, l)].norm() + t[(l - 1, l - 1)].norm();
            if s.is_zero() {
                s = scale;
            }
            if t[(l, l - 1)].norm() <= eps * s {
                t[(l, l - 1)] = Cx::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if sweeps >= max_sweeps {
            return Err(SnakeError::NoConvergence { iterations: sweeps });
        }
        sweeps += 1;
        since_deflation += 1;

        let mu = if since_deflation.is_multiple_of(6) {
            // Exceptional shift breaks symmetric stalls such as the cyclic
            // permutation, where the Wilkinson shift is an exact fixed point.
            let angle = T::lit(1.7 * since_deflation as f64);
            t[(hi, hi)] + Cx::from_polar(T::lit(0.75) * t[(hi, hi - 1)].norm(), angle)
        } else {
            wilkinson_shift(
                t[(hi - 1, hi - 1)],
                t[(hi - 1, hi)],
                t[(hi, hi - 1)],
                t[(hi, hi)],
            )
        };

        for k in l..hi {
            let (x, y) = if k == l {
                (t[(l, l)] - mu, t[(l + 1, l)])
            } else {
                (t[(k, k - 1)], t[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let first_col = if k == l { l } else { k - 1 };
            rotate_rows(&mut t, k, c, s, first_col..n);
            rotate_cols(&mut t, k, c, s, 0..(k + 3).min(hi + 1));
            rotate_cols(&mut q, k, c, s, 0..n);
            if k > l {
                t[(k + 1, k - 1)] = Cx::zero();
            }
        }
    }
    Ok(Schur { q, t })
}

/// Eigenvalues of a general square matrix (diagonal of its Schur form).
pub fn eigenvalues<T: Real>(a: &DenseMatrix<T>) -> Result<Vec<Cx<T>>> {
    Ok(schur(a)?.eigenvalues())
}

/// Eigenpairs of a unitary matrix.
#[derive(Debug, Clone)]
pub struct UnitaryEigen<T> {
    pub values: Vec<Cx<T>>,
    /// Orthonormal eigenvectors as columns; the first non-negligible
    /// component of each column is real and non-negative.
    pub vectors: DenseMatrix<T>,
}

/// Eigen-decomposition of a unitary matrix.
pub fn eigen_unitary<T: Real>(a: &DenseMatrix<T>) -> Result<UnitaryEigen<T>> {
    let tol = unitary_tolerance::<T>();
    if !a.is_square() {
        return Err(SnakeError::InvalidSize(format!(
            "eigenproblem needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let defect = a.unitarity_defect();
    if !(defect <= tol) {
        return Err(SnakeError::NotUnitary {
            defect: defect.to_f64_lossy(),
        });
    }
    let Schur { q, t } = schur(a)?;
    let n = a.rows();
    let values: Vec<Cx<T>> = (0..n).map(|i| t[(i, i)]).collect();
    let mut vectors = q;
    let tiny = T::epsilon() * T::lit(64.0);
    for j in 0..n {
        if let Some(k) = (0..n).find(|&i| vectors[(i, j)].norm() > tiny) {
            let v = vectors[(k, j)];
            let rot = v.conj() / v.norm();
            for i in 0..n {
                vectors[(i, j)] *= rot;
            }
            vectors[(k, j)] = Cx::new(vectors[(k, j)].norm(), T::zero());
        }
    }
    for (j, &lambda) in values.iter().enumerate() {
        let v = vectors.column(j);
        let av = a.matvec(&v);
        let res = av
            .iter()
            .zip(&v)
            .map(|(x, y)| (*x - lambda * *y).norm_sqr())
            .sum::<T>()
            .sqrt();
        if !(res <= tol) {
            return Err(SnakeError::NoConvergence { iterations: 60 * n });
        }
    }
    Ok(UnitaryEigen { values, vectors })
}
