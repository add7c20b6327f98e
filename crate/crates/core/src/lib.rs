//! Infinite unitary matrices as snake-shaped products of Givens factors
//! parameterized by Schur parameters, their closed-form entries, and Szegő
//! quadrature from para-unitary truncations.
//!
//! Every numeric type is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

// `!(x < bound)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expand;
pub mod laurent;
pub mod linalg;
pub mod oracle;
pub mod quadrature;
pub mod scalar;
pub mod schur;
pub mod snake;

pub use error::{Result, SnakeError};
pub use expand::{bandwidths, entry, expand_dense, measured_bandwidths, path, PathDescriptor};
pub use laurent::LaurentPoly;
pub use linalg::{eigen_unitary, DenseMatrix, UnitaryEigen};
pub use oracle::{
    gram_schmidt_laurent, inner_product, matrix_entry_oracle, moments, moments_from_schur,
    moments_on_grid, schur_from_moments, LaurentOracle, MeasureSpec, MomentTable,
};
pub use quadrature::{
    apply_rule, principal_truncation, szego_quadrature, truncate_para_unitary,
    ParaUnitaryTruncation, QuadratureRule,
};
pub use scalar::{canonical_arg, Cx, Real};
pub use schur::{evaluate_phi, laurent_basis, szego_polynomials, PolynomialPair, SchurSequence};
pub use snake::{
    build_snake, cmv_shape, hessenberg_shape, shape_from_monomials, GeneratingSequence,
    GivensFactor, SnakeFactorization,
};

pub type C64 = num_complex::Complex64;
pub type SchurSequence64 = SchurSequence<f64>;
pub type SnakeFactorization64 = SnakeFactorization<f64>;
pub type GivensFactor64 = GivensFactor<f64>;
pub type DenseMatrix64 = DenseMatrix<f64>;
pub type LaurentPoly64 = LaurentPoly<f64>;
pub type MeasureSpec64 = MeasureSpec<f64>;
pub type MomentTable64 = MomentTable<f64>;
pub type QuadratureRule64 = QuadratureRule<f64>;
pub type ParaUnitaryTruncation64 = ParaUnitaryTruncation<f64>;
