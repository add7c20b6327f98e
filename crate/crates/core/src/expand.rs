//! Closed-form entries of a snake-shaped factorization.
//!
//! Entry `(i, j)` is read off the path between row `i` on the left of the
//! snake and column `j` on its right. The path is monotone exactly when the
//! bits strictly between `i` and `j` all point the same way (zeros above the
//! diagonal, ones below). A monotone path with outer segments `r`, `t` gives
//!
//! ```text
//! S[i][j] = x_r * prod_{k strictly between r and t} rho_k * y_t
//! ```
//!
//! with `x_r = G_r[i - r][b]`, `y_t = G_t[1 - b][j - t]`, `b = [r < t]`; a
//! single-segment path (`r == t`) reads `G_r[i - r][j - t]` directly.

use std::ops::Range;

use num_traits::Zero;

use crate::error::{Result, SnakeError};
use crate::linalg::DenseMatrix;
use crate::scalar::{real, Cx, Real};
use crate::snake::{GeneratingSequence, SnakeFactorization};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDescriptor {
    pub i: usize,
    pub j: usize,
    /// Outer segment on the row side.
    pub r: usize,
    /// Outer segment on the column side.
    pub t: usize,
    /// Inner segments, each contributing its `rho`.
    pub inner: Range<usize>,
    /// `Some(0)` if `r > t`, `Some(1)` if `r < t`, `None` for a single segment.
    pub b: Option<u8>,
    pub monotone: bool,
}

/// Path descriptor for entry `(i, j)`; needs `i, j <= gen.len()`.
pub fn path(gen: &GeneratingSequence, i: usize, j: usize) -> Result<PathDescriptor> {
    let limit = gen.len();
    for index in [i, j] {
        if index > limit {
            return Err(SnakeError::IndexOutOfRange { index, limit });
        }
    }
    // G_{-1,0} does not exist: index 0 always pins the outer segment to 0.
    let r = if i == 0 || gen.bit(i) == 1 { i } else { i - 1 };
    let t = if j == 0 || gen.bit(j) == 0 { j } else { j - 1 };
    let (inner, b) = match r.cmp(&t) {
        std::cmp::Ordering::Greater => (t + 1..r, Some(0)),
        std::cmp::Ordering::Less => (r + 1..t, Some(1)),
        std::cmp::Ordering::Equal => (r..r, None),
    };
    let monotone = match i.cmp(&j) {
        std::cmp::Ordering::Equal => true,
        std::cmp::Ordering::Less => (i + 1..j).all(|k| gen.bit(k) == 0),
        std::cmp::Ordering::Greater => (j + 1..i).all(|k| gen.bit(k) == 1),
    };
    Ok(PathDescriptor {
        i,
        j,
        r,
        t,
        inner,
        b,
        monotone,
    })
}

/// Entry `(i, j)` of the infinite matrix. Valid for `max(i, j) <= m` where
/// `m` is the length of the snake's generating sequence.
pub fn entry<T: Real>(snake: &SnakeFactorization<T>, i: usize, j: usize) -> Result<Cx<T>> {
    let p = path(snake.gen(), i, j)?;
    Ok(entry_on_path(snake, &p))
}

pub(crate) fn entry_on_path<T: Real>(snake: &SnakeFactorization<T>, p: &PathDescriptor) -> Cx<T> {
    if !p.monotone {
        return Cx::zero();
    }
    let gr = snake.block(p.r);
    match p.b {
        None => gr[p.i - p.r][p.j - p.t],
        Some(b) => {
            let b = b as usize;
            let gt = snake.block(p.t);
            let schur = snake.schur();
            let rho: T = p.inner.clone().fold(T::one(), |acc, k| acc * schur.rho(k));
            gr[p.i - p.r][b] * real(rho) * gt[1 - b][p.j - p.t]
        }
    }
}

/// Structural `(lower, upper)` bandwidths: one plus the longest run of ones,
/// respectively zeros, in the stored bits.
pub fn bandwidths(gen: &GeneratingSequence) -> (usize, usize) {
    (1 + gen.longest_run(true), 1 + gen.longest_run(false))
}

/// `n x n` leading block of the infinite matrix, entry by entry.
pub fn expand_dense<T: Real>(snake: &SnakeFactorization<T>, n: usize) -> Result<DenseMatrix<T>> {
    if n > snake.gen().len() + 1 {
        return Err(SnakeError::IndexOutOfRange {
            index: n - 1,
            limit: snake.gen().len(),
        });
    }
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let p = path(snake.gen(), i, j)?;
            out[(i, j)] = entry_on_path(snake, &p);
        }
    }
    Ok(out)
}

/// Measured `(lower, upper)` bandwidths of a dense matrix: the largest
/// `i - j`, resp. `j - i`, over entries with modulus above `threshold`.
pub fn measured_bandwidths<T: Real>(m: &DenseMatrix<T>, threshold: T) -> (usize, usize) {
    let mut lower = 0;
    let mut upper = 0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if m[(i, j)].norm() > threshold {
                if i > j {
                    lower = lower.max(i - j);
                } else {
                    upper = upper.max(j - i);
                }
            }
        }
    }
    (lower, upper)
}
