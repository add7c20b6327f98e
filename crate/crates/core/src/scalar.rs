//! Scalar abstraction shared by every module.
//!
//! All numerical routines are written once over a real field `T` and work on
//! `Complex<T>` values. `f64` is the workhorse; `f32` compiles and runs with
//! correspondingly looser accuracy.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar type the library is generic over.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + NumAssign
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Every `Real` can represent (a rounding of)
    /// any finite `f64`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + LowerExp
        + Default
        + NumAssign
        + Sum
        + Send
        + Sync
        + 'static
{
}

/// Complex number over the library scalar.
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn real<T: Real>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

/// `z^e` for a possibly negative exponent, by repeated squaring.
pub fn cpowi<T: Real>(z: Cx<T>, e: i64) -> Cx<T> {
    let mut base = if e < 0 { z.inv() } else { z };
    let mut k = e.unsigned_abs();
    let mut acc = Complex::new(T::one(), T::zero());
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base = base * base;
        k >>= 1;
    }
    acc
}

/// Principal argument mapped into `[-pi, pi)`. Arguments within `snap` of
/// `+pi` are folded to `-pi` so that nodes sitting on the negative real axis
/// sort deterministically regardless of the sign of rounding noise.
pub fn canonical_arg<T: Real>(z: Cx<T>, snap: T) -> T {
    let a = z.im.atan2(z.re);
    if a >= T::PI() - snap {
        a - T::PI() - T::PI()
    } else {
        a
    }
}
