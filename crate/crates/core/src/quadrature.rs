//! Para-unitary truncations and Szegő quadrature.
//!
//! The `n x n` truncation keeps factors `0..n-2` of the snake and folds a
//! unimodular phase `c` into factor `n-2`: on its right when `s_{n-1} = 0`,
//! on its left when `s_{n-1} = 1`. With `c = e^{i theta}` the result is
//! unitary and its spectral data form an `n`-point rule exact on
//! `span{z^j : |j| <= n-1}`; with `c = conj(alpha_{n-1})` it is the leading
//! block of the infinite matrix.

use num_traits::Zero;

use crate::error::{Result, SnakeError};
use crate::laurent::LaurentPoly;
use crate::linalg::DenseMatrix;
use crate::scalar::{canonical_arg, Cx, Real};
use crate::snake::{product_of_factors, GivensFactor, SnakeFactorization};

pub use crate::linalg::{eigen_unitary, UnitaryEigen};

#[derive(Debug, Clone, PartialEq)]
pub struct ParaUnitaryTruncation<T> {
    pub n: usize,
    pub theta: T,
    pub matrix: DenseMatrix<T>,
}

fn check_size<T: Real>(snake: &SnakeFactorization<T>, n: usize) -> Result<()> {
    if n < 2 {
        return Err(SnakeError::InvalidSize(format!(
            "truncation size must be at least 2, got {n}"
        )));
    }
    if n - 1 > snake.gen().len() {
        return Err(SnakeError::LengthMismatch {
            what: "truncation (bits s_1..s_{n-1})",
            needed: n - 1,
            available: snake.gen().len(),
        });
    }
    Ok(())
}

/// Factors `0..n-2` in snake order with `c` folded into factor `n-2`.
fn folded_product<T: Real>(snake: &SnakeFactorization<T>, n: usize, c: Cx<T>) -> DenseMatrix<T> {
    let last = n - 2;
    let right_side = snake.gen().bit(n - 1) == 0;
    let factors: Vec<GivensFactor<T>> = snake
        .iterate_order(last)
        .into_iter()
        .map(|k| {
            let f = snake.factor(k);
            match (k == last, right_side) {
                (false, _) => f,
                (true, true) => f.times_diag(c),
                (true, false) => f.diag_times(c),
            }
        })
        .collect();
    product_of_factors(&factors, n)
}

/// Unitary `n x n` truncation with absorbed phase `e^{i theta}`.
pub fn truncate_para_unitary<T: Real>(
    snake: &SnakeFactorization<T>,
    n: usize,
    theta: T,
) -> Result<ParaUnitaryTruncation<T>> {
    check_size(snake, n)?;
    Ok(ParaUnitaryTruncation {
        n,
        theta,
        matrix: folded_product(snake, n, Cx::from_polar(T::one(), theta)),
    })
}

/// Leading `n x n` block of the infinite matrix, obtained by folding
/// `conj(alpha_{n-1})` in place of the phase. Not unitary unless
/// `|alpha_{n-1}| = 1`.
pub fn principal_truncation<T: Real>(
    snake: &SnakeFactorization<T>,
    n: usize,
) -> Result<DenseMatrix<T>> {
    check_size(snake, n)?;
    Ok(folded_product(snake, n, snake.schur().alpha(n - 1).conj()))
}

/// Nodes on the unit circle and positive weights, sorted by argument in
/// `[-pi, pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub n: usize,
    pub theta: T,
    pub nodes: Vec<Cx<T>>,
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    /// `sum_j lambda_j f(z_j)`.
    pub fn apply(&self, f: &LaurentPoly<T>) -> Result<Cx<T>> {
        let mut acc = Cx::zero();
        for (&z, &w) in self.nodes.iter().zip(&self.weights) {
            acc += f.eval(z)? * w;
        }
        Ok(acc)
    }

    /// `I_n(z^j)`.
    pub fn monomial(&self, j: i64) -> Cx<T> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Cx::zero(), |acc, (&z, &w)| {
                acc + crate::scalar::cpowi(z, j) * w
            })
    }

    pub fn weight_sum(&self) -> T {
        self.weights.iter().copied().sum()
    }

    /// Largest `||z_j| - 1|`.
    pub fn max_modulus_defect(&self) -> T {
        self.nodes
            .iter()
            .map(|z| (z.norm() - T::one()).abs())
            .fold(T::zero(), T::max)
    }

    /// Smallest distance between two nodes (infinite for a single node).
    pub fn min_node_gap(&self) -> T {
        let mut gap = T::infinity();
        for (a, za) in self.nodes.iter().enumerate() {
            for zb in &self.nodes[a + 1..] {
                gap = gap.min((*za - *zb).norm());
            }
        }
        gap
    }

    /// Largest deviation between paired nodes and weights of two sorted rules.
    pub fn max_deviation(&self, other: &Self) -> T {
        if self.nodes.len() != other.nodes.len() {
            return T::infinity();
        }
        let nodes = self
            .nodes
            .iter()
            .zip(&other.nodes)
            .map(|(a, b)| (*a - *b).norm());
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (*a - *b).abs());
        nodes.chain(weights).fold(T::zero(), T::max)
    }
}

/// `sum_j lambda_j f(z_j)`.
pub fn apply_rule<T: Real>(rule: &QuadratureRule<T>, f: &LaurentPoly<T>) -> Result<Cx<T>> {
    rule.apply(f)
}

/// Tolerance for folding arguments near `+pi` onto `-pi` before sorting.
fn sort_snap<T: Real>() -> T {
    T::epsilon().sqrt()
}

/// `n`-point rule from the spectrum of the para-unitary truncation; weights
/// are squared moduli of first eigenvector components.
pub fn szego_quadrature<T: Real>(
    snake: &SnakeFactorization<T>,
    n: usize,
    theta: T,
) -> Result<QuadratureRule<T>> {
    let trunc = truncate_para_unitary(snake, n, theta)?;
    let UnitaryEigen { values, vectors } = eigen_unitary(&trunc.matrix)?;
    let snap = sort_snap::<T>();
    let mut pairs: Vec<(T, Cx<T>, T)> = values
        .iter()
        .enumerate()
        .map(|(j, &z)| (canonical_arg(z, snap), z, vectors[(0, j)].norm_sqr()))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    Ok(QuadratureRule {
        n,
        theta,
        nodes: pairs.iter().map(|p| p.1).collect(),
        weights: pairs.iter().map(|p| p.2).collect(),
    })
}
