//! Generating sequences and snake-shaped Givens factorizations.
//!
//! A generating sequence `s_1..s_m` fixes the order in which the factors
//! `G_{0,1}, G_{1,2}, ...` are multiplied: starting from `G_{0,1}`, factor `k`
//! is appended on the right when `s_k = 0` and prepended on the left when
//! `s_k = 1`. The result is always `(left factors, descending) * (G_{0,1},
//! right factors ascending)`.

use std::collections::VecDeque;

use num_traits::One;

use crate::error::{Result, SnakeError};
use crate::linalg::DenseMatrix;
use crate::scalar::{real, Cx, Real};
use crate::schur::SchurSequence;

/// Bits `s_1..s_m` with their partial sums `p_0..p_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratingSequence {
    bits: Vec<bool>,
    p: Vec<usize>,
}

impl GeneratingSequence {
    /// From `s_1..s_m`; every entry must be 0 or 1.
    pub fn new(bits: &[i64]) -> Result<Self> {
        let bools = bits
            .iter()
            .enumerate()
            .map(|(i, &b)| match b {
                0 => Ok(false),
                1 => Ok(true),
                value => Err(SnakeError::InvalidBit {
                    index: i + 1,
                    value,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(bools))
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        let mut p = Vec::with_capacity(bits.len() + 1);
        p.push(0);
        for &b in &bits {
            let last = *p.last().unwrap();
            p.push(last + b as usize);
        }
        Self { bits, p }
    }

    /// Polynomial ordering `1, z, z^2, ...`: every bit zero.
    pub fn hessenberg(m: usize) -> Self {
        Self::from_bools(vec![false; m])
    }

    /// Ordering `1, z, z^-1, z^2, z^-2, ...`: `s_k = (k + 1) mod 2`.
    pub fn cmv(m: usize) -> Self {
        Self::from_bools((1..=m).map(|k| k % 2 == 0).collect())
    }

    /// Recovers the sequence from an ordered list of exponents `r_0..r_m`.
    ///
    /// `r_0` must be 0 and every prefix `{r_0..r_n}` must be a contiguous
    /// integer range, so each new exponent extends the current range by one
    /// at either end.
    pub fn from_monomials(exponents: &[i64]) -> Result<Self> {
        let Some(&first) = exponents.first() else {
            return Err(SnakeError::InvalidMonomialOrder {
                index: 0,
                reason: "empty monomial list".into(),
            });
        };
        if first != 0 {
            return Err(SnakeError::InvalidMonomialOrder {
                index: 0,
                reason: format!("list must start with exponent 0, found {first}"),
            });
        }
        let (mut lo, mut hi) = (0i64, 0i64);
        let mut bits = Vec::with_capacity(exponents.len() - 1);
        for (n, &r) in exponents.iter().enumerate().skip(1) {
            if r == hi + 1 {
                hi = r;
                bits.push(false);
            } else if r == lo - 1 {
                lo = r;
                bits.push(true);
            } else {
                let prefix = exponents[..=n]
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                return Err(SnakeError::InvalidMonomialOrder {
                    index: n,
                    reason: format!("prefix {{{prefix}}} is not a contiguous range"),
                });
            }
        }
        Ok(Self::from_bools(bits))
    }

    /// Number of stored bits `m`.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `s_n` for `1 <= n <= m`. `s_0` is taken as 0; callers that care about
    /// index 0 special-case it.
    pub fn bit(&self, n: usize) -> u8 {
        if n == 0 {
            0
        } else {
            self.bits[n - 1] as u8
        }
    }

    pub fn bits(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| b as u8).collect()
    }

    pub fn p(&self, n: usize) -> usize {
        self.p[n]
    }

    pub fn ps(&self) -> &[usize] {
        &self.p
    }

    /// Exponent `r_n` of the n-th orthogonalized monomial.
    pub fn exponent(&self, n: usize) -> i64 {
        if self.bit(n) == 0 {
            n as i64 - self.p[n] as i64
        } else {
            -(self.p[n] as i64)
        }
    }

    pub fn exponents(&self) -> Vec<i64> {
        (0..=self.len()).map(|n| self.exponent(n)).collect()
    }

    /// Exponent range `[-p_n, n - p_n]` spanned after `n` steps.
    pub fn span(&self, n: usize) -> (i64, i64) {
        (-(self.p[n] as i64), n as i64 - self.p[n] as i64)
    }

    /// Every bit inverted (mirror image of the snake).
    pub fn flipped(&self) -> Self {
        Self::from_bools(self.bits.iter().map(|b| !b).collect())
    }

    /// First `m` bits.
    pub fn prefix(&self, m: usize) -> Self {
        Self::from_bools(self.bits[..m].to_vec())
    }

    /// Copy with one more bit appended.
    pub fn extended(&self, bit: bool) -> Self {
        let mut bits = self.bits.clone();
        bits.push(bit);
        Self::from_bools(bits)
    }

    /// Longest run of consecutive `value` bits.
    pub fn longest_run(&self, value: bool) -> usize {
        let mut best = 0;
        let mut cur = 0;
        for &b in &self.bits {
            if b == value {
                cur += 1;
                best = best.max(cur);
            } else {
                cur = 0;
            }
        }
        best
    }
}

pub fn shape_from_monomials(exponents: &[i64]) -> Result<GeneratingSequence> {
    GeneratingSequence::from_monomials(exponents)
}

pub fn hessenberg_shape(m: usize) -> GeneratingSequence {
    GeneratingSequence::hessenberg(m)
}

pub fn cmv_shape(m: usize) -> GeneratingSequence {
    GeneratingSequence::cmv(m)
}

/// Identity except for a 2x2 block on rows and columns `k, k+1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensFactor<T> {
    pub k: usize,
    pub block: [[Cx<T>; 2]; 2],
    canonical: bool,
}

impl<T: Real> GivensFactor<T> {
    /// `[[conj(a), rho], [rho, -a]]`.
    pub fn canonical(k: usize, alpha: Cx<T>) -> Self {
        let rho = real(crate::schur::complementary(alpha));
        Self {
            k,
            block: [[alpha.conj(), rho], [rho, -alpha]],
            canonical: true,
        }
    }

    /// Arbitrary block; flagged non-canonical.
    pub fn with_block(k: usize, block: [[Cx<T>; 2]; 2]) -> Self {
        Self {
            k,
            block,
            canonical: false,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn determinant(&self) -> Cx<T> {
        let b = &self.block;
        b[0][0] * b[1][1] - b[0][1] * b[1][0]
    }

    /// `max |B B^H - I|` over the 2x2 block.
    pub fn unitarity_defect(&self) -> T {
        let b = &self.block;
        let mut worst = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = b[i][0] * b[j][0].conj() + b[i][1] * b[j][1].conj();
                if i == j {
                    acc -= Cx::one();
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// `block * diag(1, d)`.
    pub fn times_diag(mut self, d: Cx<T>) -> Self {
        self.block[0][1] *= d;
        self.block[1][1] *= d;
        self.canonical = false;
        self
    }

    /// `diag(1, d) * block`.
    pub fn diag_times(mut self, d: Cx<T>) -> Self {
        self.block[1][0] = d * self.block[1][0];
        self.block[1][1] = d * self.block[1][1];
        self.canonical = false;
        self
    }

    /// `M <- G M` (rows `k, k+1`).
    pub fn apply_left(&self, m: &mut DenseMatrix<T>) {
        let (k, b) = (self.k, &self.block);
        for c in 0..m.cols() {
            let x = m[(k, c)];
            let y = m[(k + 1, c)];
            m[(k, c)] = b[0][0] * x + b[0][1] * y;
            m[(k + 1, c)] = b[1][0] * x + b[1][1] * y;
        }
    }

    /// `M <- M G` (columns `k, k+1`).
    pub fn apply_right(&self, m: &mut DenseMatrix<T>) {
        let (k, b) = (self.k, &self.block);
        for r in 0..m.rows() {
            let x = m[(r, k)];
            let y = m[(r, k + 1)];
            m[(r, k)] = x * b[0][0] + y * b[1][0];
            m[(r, k + 1)] = x * b[0][1] + y * b[1][1];
        }
    }
}

/// Dense `dim x dim` product of `factors` taken left to right.
pub fn product_of_factors<T: Real>(factors: &[GivensFactor<T>], dim: usize) -> DenseMatrix<T> {
    let mut m = DenseMatrix::identity(dim);
    for f in factors {
        f.apply_right(&mut m);
    }
    m
}

/// Snake-shaped product of the canonical factors `G_{0,1} .. G_{m,m+1}`,
/// where `m` is the length of the generating sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SnakeFactorization<T> {
    schur: SchurSequence<T>,
    gen: GeneratingSequence,
    order: Vec<usize>,
    left_count: usize,
}

/// Builds the snake by the left/right insertion recipe. The Schur sequence
/// must provide `alpha_0..alpha_m`; extra parameters are kept but unused by
/// the factor order.
pub fn build_snake<T: Real>(
    schur: &SchurSequence<T>,
    gen: &GeneratingSequence,
) -> Result<SnakeFactorization<T>> {
    let m = gen.len();
    if schur.len() < m + 1 {
        return Err(SnakeError::LengthMismatch {
            what: "snake factorization (alpha_0..alpha_m)",
            needed: m + 1,
            available: schur.len(),
        });
    }
    let mut order = VecDeque::with_capacity(m + 1);
    order.push_back(0);
    let mut left_count = 0;
    for k in 1..=m {
        if gen.bit(k) == 1 {
            order.push_front(k);
            left_count += 1;
        } else {
            order.push_back(k);
        }
    }
    Ok(SnakeFactorization {
        schur: schur.clone(),
        gen: gen.clone(),
        order: order.into(),
        left_count,
    })
}

impl<T: Real> SnakeFactorization<T> {
    pub fn schur(&self) -> &SchurSequence<T> {
        &self.schur
    }

    pub fn gen(&self) -> &GeneratingSequence {
        &self.gen
    }

    /// Number of factors, `m + 1`.
    pub fn factor_count(&self) -> usize {
        self.gen.len() + 1
    }

    /// Factor indices in product order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Left product, in product order (descending indices).
    pub fn left_factors(&self) -> &[usize] {
        &self.order[..self.left_count]
    }

    /// Right product, in product order (starts with 0, ascending).
    pub fn right_factors(&self) -> &[usize] {
        &self.order[self.left_count..]
    }

    /// Order of the iterate `S^(k)`: the factors with index `<= k`.
    pub fn iterate_order(&self, k: usize) -> Vec<usize> {
        self.order.iter().copied().filter(|&i| i <= k).collect()
    }

    pub fn factor(&self, k: usize) -> GivensFactor<T> {
        GivensFactor::canonical(k, self.schur.alpha(k))
    }

    /// 2x2 block of `G_{k,k+1}`.
    pub fn block(&self, k: usize) -> [[Cx<T>; 2]; 2] {
        self.factor(k).block
    }

    /// `(m+2) x (m+2)` product of `G_{0,1}..G_{m,m+1}` in snake order.
    ///
    /// Entry `(i, j)` agrees with the infinite matrix whenever
    /// `max(i, j) <= m - 1`.
    pub fn materialize_window(&self, m: usize) -> Result<DenseMatrix<T>> {
        if m > self.gen.len() {
            return Err(SnakeError::IndexOutOfRange {
                index: m,
                limit: self.gen.len(),
            });
        }
        let factors: Vec<_> = self
            .iterate_order(m)
            .into_iter()
            .map(|k| self.factor(k))
            .collect();
        Ok(product_of_factors(&factors, m + 2))
    }
}

impl<T: Real> GivensFactor<T> {
    /// Dense `dim x dim` form.
    pub fn to_dense(&self, dim: usize) -> DenseMatrix<T> {
        let mut m = DenseMatrix::identity(dim);
        self.apply_left(&mut m);
        m
    }
}
