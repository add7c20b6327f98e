//! Ground truth that never touches a Givens factor: measures on the circle,
//! their trigonometric moments, Gram-Schmidt over ordered monomials, Schur
//! parameters recovered from moments, and matrix entries as inner products.
//!
//! Moment convention: `mu_j = <z^j, 1> = integral of z^{-j} dmu`, so that
//! `<f, g> = sum_{a,b} conj(f_a) g_b mu_{a-b}`.

use num_traits::{One, Zero};

use crate::error::{Result, SnakeError};
use crate::laurent::LaurentPoly;
use crate::linalg::DenseMatrix;
use crate::scalar::{real, Cx, Real};
use crate::schur::SchurSequence;
use crate::snake::GeneratingSequence;

const MIN_GRID: usize = 4096;
const MAX_GRID: usize = 1 << 18;

/// Probability measure on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec<T> {
    /// Normalized arc length `d theta / 2 pi`.
    Lebesgue,
    /// Constant Schur parameters `alpha_k = a` for every `k`.
    Geronimus { a: Cx<T> },
    /// `d theta / (2 pi |phi_L(e^{i theta})|^2)`: Schur parameters equal the
    /// prefix, then vanish.
    BernsteinSzego { prefix: SchurSequence<T> },
    /// Discrete measure: `(theta, weight)` pairs, weights normalized to sum 1.
    Grid { points: Vec<(T, T)> },
}

impl<T: Real> MeasureSpec<T> {
    pub fn geronimus(a: Cx<T>) -> Result<Self> {
        if !(a.norm() < T::one()) {
            return Err(SnakeError::InvalidMeasure(format!(
                "Geronimus parameter must satisfy |a| < 1, got {}",
                a.norm()
            )));
        }
        Ok(Self::Geronimus { a })
    }

    pub fn bernstein_szego(prefix: SchurSequence<T>) -> Self {
        Self::BernsteinSzego { prefix }
    }

    /// Validates `theta in [-pi, pi)` and positive weights; rescales the
    /// weights to total mass 1.
    pub fn grid(points: Vec<(T, T)>) -> Result<Self> {
        if points.is_empty() {
            return Err(SnakeError::InvalidMeasure(
                "grid measure has no points".into(),
            ));
        }
        let mut total = T::zero();
        for (k, &(theta, w)) in points.iter().enumerate() {
            if !(theta >= -T::PI() && theta < T::PI()) {
                return Err(SnakeError::InvalidMeasure(format!(
                    "grid point {k}: theta = {theta} outside [-pi, pi)"
                )));
            }
            if !(w > T::zero()) || !w.is_finite() {
                return Err(SnakeError::InvalidMeasure(format!(
                    "grid point {k}: weight {w} is not positive"
                )));
            }
            total += w;
        }
        Ok(Self::Grid {
            points: points.into_iter().map(|(t, w)| (t, w / total)).collect(),
        })
    }

    /// Schur parameters `alpha_0..alpha_{len-1}`. Known in closed form for the
    /// analytic families; recovered from moments for grids.
    pub fn schur_parameters(&self, len: usize) -> Result<SchurSequence<T>> {
        match self {
            Self::Lebesgue => Ok(SchurSequence::zeros(len)),
            Self::Grid { .. } => schur_from_moments(&moments(self, len + 1)?, len),
            Self::Geronimus { a } => SchurSequence::new(vec![*a; len]),
            Self::BernsteinSzego { prefix } => Ok(prefix.resized(len)),
        }
    }

    /// Density with respect to `d theta / 2 pi`, when it has a closed form.
    pub fn density(&self, theta: T) -> Option<T> {
        match self {
            Self::Lebesgue => Some(T::one()),
            Self::BernsteinSzego { prefix } => {
                Some(bernstein_szego_density(prefix.alphas(), theta))
            }
            Self::Geronimus { .. } | Self::Grid { .. } => None,
        }
    }
}

/// `prod rho_k^2 / |Phi_L(e^{i theta})|^2` with `Phi_L` the monic polynomial,
/// evaluated by its own monic recursion.
fn bernstein_szego_density<T: Real>(alphas: &[Cx<T>], theta: T) -> T {
    let z = Cx::from_polar(T::one(), theta);
    let mut monic = Cx::<T>::one();
    let mut reversed = Cx::<T>::one();
    let mut norm2 = T::one();
    for &a in alphas {
        let zm = z * monic;
        monic = zm - a.conj() * reversed;
        reversed -= a * zm;
        norm2 *= T::one() - a.norm_sqr();
    }
    norm2 / monic.norm_sqr()
}

/// Moments `mu_j`, `-jmax <= j <= jmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable<T> {
    jmax: usize,
    mu: Vec<Cx<T>>,
}

impl<T: Real> MomentTable<T> {
    /// From the non-negative half `mu_0..mu_jmax`; the rest follows by
    /// conjugate symmetry and `mu_0` is pinned to exactly 1.
    pub fn from_nonnegative(half: &[Cx<T>]) -> Result<Self> {
        let Some(&mu0) = half.first() else {
            return Err(SnakeError::InvalidSize("moment table needs mu_0".into()));
        };
        if !(mu0.re > T::zero()) {
            return Err(SnakeError::InvalidMeasure("mu_0 must be positive".into()));
        }
        let jmax = half.len() - 1;
        let scale = mu0.re.recip();
        let mut mu = vec![Cx::zero(); 2 * jmax + 1];
        mu[jmax] = Cx::one();
        for j in 1..=jmax {
            let v = half[j] * scale;
            mu[jmax + j] = v;
            mu[jmax - j] = v.conj();
        }
        Ok(Self { jmax, mu })
    }

    pub fn jmax(&self) -> usize {
        self.jmax
    }

    pub fn get(&self, j: i64) -> Result<Cx<T>> {
        if j.unsigned_abs() as usize > self.jmax {
            return Err(SnakeError::InsufficientMoments {
                exponent: j,
                jmax: self.jmax,
            });
        }
        Ok(self.mu[(j + self.jmax as i64) as usize])
    }

    /// `(mu_{a-b})_{0 <= a,b <= n}`.
    pub fn toeplitz(&self, n: usize) -> Result<DenseMatrix<T>> {
        if n > self.jmax {
            return Err(SnakeError::InsufficientMoments {
                exponent: n as i64,
                jmax: self.jmax,
            });
        }
        Ok(DenseMatrix::from_fn(n + 1, n + 1, |a, b| {
            self.mu[(a as i64 - b as i64 + self.jmax as i64) as usize]
        }))
    }

    /// Cholesky test of the `(n+1) x (n+1)` Toeplitz matrix.
    pub fn check_positive_definite(&self, n: usize) -> Result<()> {
        let t = self.toeplitz(n)?;
        let dim = n + 1;
        let mut l = DenseMatrix::<T>::zeros(dim, dim);
        let floor = T::epsilon() * T::lit(dim as f64);
        for j in 0..dim {
            let mut d = t[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !(d > floor) {
                return Err(SnakeError::NotPositiveDefinite { order: j });
            }
            let djj = d.sqrt();
            l[(j, j)] = real(djj);
            for i in j + 1..dim {
                let mut s = t[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(())
    }
}

/// Trigonometric moments up to `jmax`.
///
/// Lebesgue and grid measures are exact. Bernstein-Szegő and Geronimus
/// measures are integrated on uniform grids (see [`moments_on_grid`]); when
/// a zero of the underlying polynomial sits so close to the circle that no
/// affordable grid certifies the result, the table is taken from
/// [`moments_from_schur`] instead, which is exact for these families.
pub fn moments<T: Real>(measure: &MeasureSpec<T>, jmax: usize) -> Result<MomentTable<T>> {
    match (moments_on_grid(measure, jmax), measure) {
        (Err(SnakeError::NonConvergentGrid { .. }), MeasureSpec::BernsteinSzego { prefix }) => {
            moments_from_schur(prefix.alphas(), jmax)
        }
        (Err(SnakeError::NonConvergentGrid { .. }), MeasureSpec::Geronimus { a }) => {
            moments_from_schur(&vec![*a; jmax], jmax)
        }
        (result, _) => result,
    }
}

/// Moments by quadrature only: composite trapezoid rule on uniform grids of
/// at least 4096 points, doubled until two successive grids agree to
/// `512 eps`. Geronimus measures are integrated through their Bernstein-Szegő
/// truncation at depth `jmax`, which leaves `mu_0..mu_jmax` unchanged.
pub fn moments_on_grid<T: Real>(measure: &MeasureSpec<T>, jmax: usize) -> Result<MomentTable<T>> {
    let half = match measure {
        MeasureSpec::Lebesgue => {
            let mut h = vec![Cx::zero(); jmax + 1];
            h[0] = Cx::one();
            h
        }
        MeasureSpec::Grid { points } => (0..=jmax)
            .map(|j| {
                points.iter().fold(Cx::zero(), |acc, &(theta, w)| {
                    acc + Cx::from_polar(w, -T::lit(j as f64) * theta)
                })
            })
            .collect(),
        MeasureSpec::Geronimus { a } => integrate_density(&vec![*a; jmax], jmax)?,
        MeasureSpec::BernsteinSzego { prefix } => integrate_density(prefix.alphas(), jmax)?,
    };
    MomentTable::from_nonnegative(&half)
}

/// Moments `mu_0..mu_jmax` of the measure whose Schur parameters start with
/// `alphas` (zero beyond its end), from the monic recursion and
/// `<1, Phi_k> = 0` for `k >= 1`:
/// `mu_{-k} = -sum_{b<k} [z^b]Phi_k mu_{-b}`.
pub fn moments_from_schur<T: Real>(alphas: &[Cx<T>], jmax: usize) -> Result<MomentTable<T>> {
    let mut monic = vec![Cx::<T>::one()];
    let mut reversed = vec![Cx::<T>::one()];
    // neg[b] = mu_{-b}
    let mut neg = vec![Cx::<T>::one()];
    for k in 0..jmax {
        let a = alphas.get(k).copied().unwrap_or_else(Cx::zero);
        if !(a.norm() < T::one()) {
            return Err(SnakeError::InvalidSchurParameter {
                index: k,
                modulus: a.norm().to_f64_lossy(),
            });
        }
        let mut next = vec![Cx::zero(); k + 2];
        let mut next_rev = vec![Cx::zero(); k + 2];
        for b in 0..=k {
            next[b + 1] += monic[b];
            next[b] -= a.conj() * reversed[b];
            next_rev[b] += reversed[b];
            next_rev[b + 1] -= a * monic[b];
        }
        let mu = -(0..=k)
            .map(|b| next[b] * neg[b])
            .fold(Cx::zero(), |x, y| x + y);
        neg.push(mu);
        monic = next;
        reversed = next_rev;
    }
    let half: Vec<Cx<T>> = neg.iter().map(|m| m.conj()).collect();
    MomentTable::from_nonnegative(&half)
}

/// Target absolute accuracy of every moment.
fn moment_tolerance<T: Real>() -> T {
    T::epsilon() * T::lit(512.0)
}

/// `acc[j] += scale * w(theta) e^{-ij theta}` for `j = 0..=jmax`.
fn accumulate<T: Real>(alphas: &[Cx<T>], theta: T, scale: T, acc: &mut [Cx<T>]) {
    let step = Cx::from_polar(T::one(), -theta);
    let mut term = real(bernstein_szego_density(alphas, theta) * scale);
    for slot in acc.iter_mut() {
        *slot += term;
        term *= step;
    }
}

fn trapezoid<T: Real>(alphas: &[Cx<T>], jmax: usize, points: usize) -> Vec<Cx<T>> {
    let step = T::TAU() / T::lit(points as f64);
    let inv = T::lit(points as f64).recip();
    let mut acc = vec![Cx::<T>::zero(); jmax + 1];
    for k in 0..points {
        accumulate(alphas, step * T::lit(k as f64), inv, &mut acc);
    }
    acc
}

/// Trapezoid moments of the Bernstein-Szegő density, doubling the grid
/// until two successive grids agree.
fn integrate_density<T: Real>(alphas: &[Cx<T>], jmax: usize) -> Result<Vec<Cx<T>>> {
    let tol = moment_tolerance::<T>();
    let mut points = MIN_GRID.max((4 * jmax + 4).next_power_of_two());
    let mut prev = trapezoid(alphas, jmax, points);
    loop {
        points *= 2;
        let next = trapezoid(alphas, jmax, points);
        let change = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max);
        if change <= tol {
            return Ok(next);
        }
        if points >= MAX_GRID {
            return Err(SnakeError::NonConvergentGrid {
                points,
                change: change.to_f64_lossy(),
            });
        }
        prev = next;
    }
}

/// `<f, g> = sum conj(f_a) g_b mu_{a-b}`; conjugate-linear in `f`.
pub fn inner_product<T: Real>(
    table: &MomentTable<T>,
    f: &LaurentPoly<T>,
    g: &LaurentPoly<T>,
) -> Result<Cx<T>> {
    let mut acc = Cx::zero();
    for (a, fa) in f.terms() {
        if fa.is_zero() {
            continue;
        }
        let fa = fa.conj();
        for (b, gb) in g.terms() {
            acc += fa * gb * table.get(a - b)?;
        }
    }
    Ok(acc)
}

/// Orthonormal Laurent polynomials `psi_0..psi_n` for the monomial order
/// fixed by `gen`, by classical Gram-Schmidt with one reorthogonalization
/// pass. The coefficient of the newly added monomial comes out real
/// positive because no earlier basis element contains that power.
pub fn gram_schmidt_laurent<T: Real>(
    table: &MomentTable<T>,
    gen: &GeneratingSequence,
    n: usize,
) -> Result<Vec<LaurentPoly<T>>> {
    if n > gen.len() {
        return Err(SnakeError::IndexOutOfRange {
            index: n,
            limit: gen.len(),
        });
    }
    let (lo, hi) = gen.span(n);
    let needed = (hi - lo) as usize;
    if needed > table.jmax() {
        return Err(SnakeError::InsufficientMoments {
            exponent: needed as i64,
            jmax: table.jmax(),
        });
    }
    let tiny = T::epsilon() * T::epsilon();
    let mut basis: Vec<LaurentPoly<T>> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut v = LaurentPoly::monomial(gen.exponent(k), Cx::one());
        for _pass in 0..2 {
            for q in &basis {
                let c = inner_product(table, q, &v)?;
                v = v.axpy(-c, q);
            }
        }
        let norm2 = inner_product(table, &v, &v)?.re;
        if !(norm2 > tiny) {
            return Err(SnakeError::SingularGram {
                index: k,
                residual: norm2.to_f64_lossy(),
            });
        }
        basis.push(v.scaled(real(norm2.sqrt().recip())));
    }
    Ok(basis)
}

/// `alpha_0..alpha_{n-1}` from moments: with `phi_{k+1}` the orthonormal
/// polynomial of degree `k+1` and `kappa_{k+1}` its leading coefficient,
/// `conj(alpha_k) = -phi_{k+1}(0) / kappa_{k+1}`.
pub fn schur_from_moments<T: Real>(table: &MomentTable<T>, n: usize) -> Result<SchurSequence<T>> {
    table.check_positive_definite(n)?;
    let phis = gram_schmidt_laurent(table, &GeneratingSequence::hessenberg(n), n)?;
    let alphas = phis[1..]
        .iter()
        .map(|phi| {
            let kappa = phi.coeff(phi.highest());
            -(phi.coeff(0) / kappa).conj()
        })
        .collect();
    SchurSequence::new(alphas)
}

/// Orthonormal basis bundled with its moment table for repeated entry
/// queries.
#[derive(Debug, Clone)]
pub struct LaurentOracle<T> {
    table: MomentTable<T>,
    basis: Vec<LaurentPoly<T>>,
}

impl<T: Real> LaurentOracle<T> {
    pub fn new(table: MomentTable<T>, gen: &GeneratingSequence, n: usize) -> Result<Self> {
        let basis = gram_schmidt_laurent(&table, gen, n)?;
        Ok(Self { table, basis })
    }

    pub fn basis(&self) -> &[LaurentPoly<T>] {
        &self.basis
    }

    /// `<psi_i, z psi_j>`.
    pub fn entry(&self, i: usize, j: usize) -> Result<Cx<T>> {
        let limit = self.basis.len() - 1;
        for index in [i, j] {
            if index > limit {
                return Err(SnakeError::IndexOutOfRange { index, limit });
            }
        }
        inner_product(&self.table, &self.basis[i], &self.basis[j].shifted(1))
    }

    /// Leading `n x n` block of the multiplication operator.
    pub fn matrix(&self, n: usize) -> Result<DenseMatrix<T>> {
        let mut out = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.entry(i, j)?;
            }
        }
        Ok(out)
    }
}

/// `<psi_i, z psi_j>` from Gram-Schmidt output and moments alone.
pub fn matrix_entry_oracle<T: Real>(
    table: &MomentTable<T>,
    gen: &GeneratingSequence,
    i: usize,
    j: usize,
) -> Result<Cx<T>> {
    LaurentOracle::new(table.clone(), gen, i.max(j))?.entry(i, j)
}
