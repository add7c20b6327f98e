use crate::error::{Result, SnakeError};
use crate::scalar::{cpowi, Cx, Real};
use num_traits::Zero;

/// Laurent polynomial `sum_k coeffs[k] * z^(lowest + k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly<T> {
    lowest: i64,
    coeffs: Vec<Cx<T>>,
}

impl<T: Real> LaurentPoly<T> {
    pub fn new(lowest: i64, coeffs: Vec<Cx<T>>) -> Self {
        Self { lowest, coeffs }
    }

    pub fn zero() -> Self {
        Self {
            lowest: 0,
            coeffs: Vec::new(),
        }
    }

    /// `c * z^e`.
    pub fn monomial(e: i64, c: Cx<T>) -> Self {
        Self {
            lowest: e,
            coeffs: vec![c],
        }
    }

    /// From an ordinary polynomial coefficient list, shifted by `z^shift`.
    pub fn from_poly(coeffs: &[Cx<T>], shift: i64) -> Self {
        Self {
            lowest: shift,
            coeffs: coeffs.to_vec(),
        }
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    /// Highest stored exponent; `lowest - 1` for the empty polynomial.
    pub fn highest(&self) -> i64 {
        self.lowest + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    /// Coefficient of `z^e` (zero outside the stored range).
    pub fn coeff(&self, e: i64) -> Cx<T> {
        let k = e - self.lowest;
        if k < 0 || k as usize >= self.coeffs.len() {
            Cx::zero()
        } else {
            self.coeffs[k as usize]
        }
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Iterates `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Cx<T>)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, &c)| (self.lowest + k as i64, c))
    }

    /// Multiplication by `z^k`.
    pub fn shifted(&self, k: i64) -> Self {
        Self {
            lowest: self.lowest + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scaled(&self, c: Cx<T>) -> Self {
        Self {
            lowest: self.lowest,
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: Cx<T>, other: &Self) -> Self {
        if other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.scaled(c);
        }
        let lo = self.lowest.min(other.lowest);
        let hi = self.highest().max(other.highest());
        let coeffs = (lo..=hi)
            .map(|e| self.coeff(e) + c * other.coeff(e))
            .collect();
        Self { lowest: lo, coeffs }
    }

    /// Point evaluation. Rejects `z = 0` whenever a negative power is present.
    pub fn eval(&self, z: Cx<T>) -> Result<Cx<T>> {
        if self.lowest < 0 && z.is_zero() {
            return Err(SnakeError::ZeroArgument);
        }
        // Horner on the non-negative part, then the leading shift.
        let mut acc = Cx::<T>::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        Ok(acc * cpowi(z, self.lowest))
    }

    /// Largest coefficient-wise distance, over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let lo = self.lowest.min(other.lowest);
        let hi = self.highest().max(other.highest());
        (lo..=hi)
            .map(|e| (self.coeff(e) - other.coeff(e)).norm())
            .fold(T::zero(), T::max)
    }
}
