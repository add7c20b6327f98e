//! Schur parameters, Szegő polynomials and the orthonormal Laurent basis.
//!
//! Szegő polynomials are generated from the two-term recursion
//!
//! ```text
//! [ z phi_k    ]   [ conj(a_k)  rho_k ] [ phi_k^*   ]
//! [ phi_{k+1}^*] = [ rho_k      -a_k  ] [ phi_{k+1} ]
//! ```
//!
//! whose coefficient matrix is exactly the 2x2 block of the Givens factor
//! `G_{k,k+1}`. Solving for the degree `k+1` pair gives
//! `phi_{k+1} = (z phi_k - conj(a_k) phi_k^*) / rho_k` and
//! `phi_{k+1}^* = (phi_k^* - a_k z phi_k) / rho_k`.

use num_traits::{One, Zero};

use crate::error::{Result, SnakeError};
use crate::laurent::LaurentPoly;
use crate::scalar::{cpowi, Cx, Real};
use crate::snake::GeneratingSequence;

/// Finite sequence of Schur (Verblunsky) parameters, all strictly inside the
/// unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurSequence<T> {
    alphas: Vec<Cx<T>>,
}

impl<T: Real> SchurSequence<T> {
    /// Validates `|alpha_k| < 1` for every entry.
    pub fn new(alphas: Vec<Cx<T>>) -> Result<Self> {
        for (index, a) in alphas.iter().enumerate() {
            let modulus = a.norm();
            if !(modulus < T::one()) {
                return Err(SnakeError::InvalidSchurParameter {
                    index,
                    modulus: modulus.to_f64_lossy(),
                });
            }
        }
        Ok(Self { alphas })
    }

    /// `m` vanishing parameters (normalized Lebesgue measure).
    pub fn zeros(m: usize) -> Self {
        Self {
            alphas: vec![Cx::zero(); m],
        }
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn alphas(&self) -> &[Cx<T>] {
        &self.alphas
    }

    pub fn alpha(&self, k: usize) -> Cx<T> {
        self.alphas[k]
    }

    /// Complementary parameter `sqrt(1 - |alpha_k|^2)`, always in `(0, 1]`.
    pub fn rho(&self, k: usize) -> T {
        complementary(self.alphas[k])
    }

    pub fn rhos(&self) -> Vec<T> {
        self.alphas.iter().map(|&a| complementary(a)).collect()
    }

    /// Copy extended with zeros (or cut) to exactly `len` entries.
    pub fn resized(&self, len: usize) -> Self {
        let mut alphas = self.alphas.clone();
        alphas.resize(len, Cx::zero());
        Self { alphas }
    }
}

pub(crate) fn complementary<T: Real>(a: Cx<T>) -> T {
    (T::one() - a.norm_sqr()).sqrt()
}

/// Reversed-conjugated coefficient list: `p^*(z) = z^n conj(p(1/conj z))`.
pub fn dual<T: Real>(coeffs: &[Cx<T>]) -> Vec<Cx<T>> {
    coeffs.iter().rev().map(|c| c.conj()).collect()
}

/// An orthonormal Szegő polynomial together with its dual, both stored as
/// ascending coefficient lists of length `degree + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPair<T> {
    phi: Vec<Cx<T>>,
    phi_star: Vec<Cx<T>>,
}

impl<T: Real> PolynomialPair<T> {
    /// `phi_0 = phi_0^* = 1`.
    pub fn one() -> Self {
        Self {
            phi: vec![Cx::one()],
            phi_star: vec![Cx::one()],
        }
    }

    /// Builds the pair from `phi`; the dual is derived, never supplied.
    pub fn from_phi(phi: Vec<Cx<T>>) -> Self {
        let phi_star = dual(&phi);
        Self { phi, phi_star }
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn phi(&self) -> &[Cx<T>] {
        &self.phi
    }

    pub fn phi_star(&self) -> &[Cx<T>] {
        &self.phi_star
    }

    /// Leading coefficient of `phi` (real positive for orthonormal pairs).
    pub fn leading(&self) -> Cx<T> {
        self.phi[self.phi.len() - 1]
    }

    /// `(phi(z), phi^*(z))` by Horner.
    pub fn eval(&self, z: Cx<T>) -> (Cx<T>, Cx<T>) {
        (horner(&self.phi, z), horner(&self.phi_star, z))
    }
}

fn horner<T: Real>(c: &[Cx<T>], z: Cx<T>) -> Cx<T> {
    c.iter().rev().fold(Cx::zero(), |acc, &a| acc * z + a)
}

/// One step of the Szegő recursion on coefficient lists.
pub fn szego_step<T: Real>(pair: &PolynomialPair<T>, alpha: Cx<T>) -> Result<PolynomialPair<T>> {
    if !(alpha.norm() < T::one()) {
        return Err(SnakeError::InvalidSchurParameter {
            index: pair.degree(),
            modulus: alpha.norm().to_f64_lossy(),
        });
    }
    let k = pair.degree();
    let inv_rho = complementary(alpha).recip();
    let ac = alpha.conj();
    let zphi = |j: usize| if j == 0 { Cx::zero() } else { pair.phi[j - 1] };
    let star = |j: usize| if j > k { Cx::zero() } else { pair.phi_star[j] };

    let phi = (0..=k + 1)
        .map(|j| (zphi(j) - ac * star(j)) * inv_rho)
        .collect();
    let phi_star = (0..=k + 1)
        .map(|j| (star(j) - alpha * zphi(j)) * inv_rho)
        .collect();
    Ok(PolynomialPair { phi, phi_star })
}

/// Coefficients of `(phi_n, phi_n^*)`.
pub fn szego_polynomials<T: Real>(schur: &SchurSequence<T>, n: usize) -> Result<PolynomialPair<T>> {
    check_degree(schur, n)?;
    let mut pair = PolynomialPair::one();
    for k in 0..n {
        pair = szego_step(&pair, schur.alpha(k))?;
    }
    Ok(pair)
}

/// `(phi_n(z), phi_n^*(z))` by running the recursion on values.
pub fn evaluate_phi<T: Real>(
    schur: &SchurSequence<T>,
    n: usize,
    z: Cx<T>,
) -> Result<(Cx<T>, Cx<T>)> {
    check_degree(schur, n)?;
    let mut phi = Cx::one();
    let mut star = Cx::one();
    for (k, &a) in schur.alphas()[..n].iter().enumerate() {
        let inv_rho = schur.rho(k).recip();
        let zphi = z * phi;
        phi = (zphi - a.conj() * star) * inv_rho;
        star = (star - a * zphi) * inv_rho;
    }
    Ok((phi, star))
}

/// `psi_n(z) = z^{-p_n} phi_n(z)` if `s_n = 0`, else `z^{-p_n} phi_n^*(z)`.
pub fn laurent_basis<T: Real>(
    schur: &SchurSequence<T>,
    gen: &GeneratingSequence,
    n: usize,
    z: Cx<T>,
) -> Result<Cx<T>> {
    if z.is_zero() {
        return Err(SnakeError::ZeroArgument);
    }
    check_index(gen, n)?;
    let (phi, star) = evaluate_phi(schur, n, z)?;
    let base = if gen.bit(n) == 0 { phi } else { star };
    Ok(base * cpowi(z, -(gen.p(n) as i64)))
}

/// Coefficient form of [`laurent_basis`].
pub fn laurent_basis_poly<T: Real>(
    schur: &SchurSequence<T>,
    gen: &GeneratingSequence,
    n: usize,
) -> Result<LaurentPoly<T>> {
    check_index(gen, n)?;
    let pair = szego_polynomials(schur, n)?;
    let coeffs = if gen.bit(n) == 0 {
        pair.phi()
    } else {
        pair.phi_star()
    };
    Ok(LaurentPoly::from_poly(coeffs, -(gen.p(n) as i64)))
}

fn check_degree<T: Real>(schur: &SchurSequence<T>, n: usize) -> Result<()> {
    if n > schur.len() {
        return Err(SnakeError::LengthMismatch {
            what: "Szego polynomial degree",
            needed: n,
            available: schur.len(),
        });
    }
    Ok(())
}

fn check_index(gen: &GeneratingSequence, n: usize) -> Result<()> {
    if n > gen.len() {
        return Err(SnakeError::IndexOutOfRange {
            index: n,
            limit: gen.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn construction_and_rho() {
        let s = SchurSequence::new(vec![c(0.0, 0.0); 3]).unwrap();
        assert_eq!(s.rhos(), vec![1.0, 1.0, 1.0]);
        let s = SchurSequence::new(vec![c(0.6, 0.0)]).unwrap();
        assert!((s.rho(0) - 0.8).abs() < 1e-15);
        assert_eq!(
            SchurSequence::new(vec![c(1.0, 0.0)]),
            Err(SnakeError::InvalidSchurParameter {
                index: 0,
                modulus: 1.0
            })
        );
        assert!(matches!(
            SchurSequence::new(vec![c(0.1, 0.0), c(0.0, -1.2)]),
            Err(SnakeError::InvalidSchurParameter { index: 1, .. })
        ));
        assert!(SchurSequence::new(vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn step_free_case() {
        let p = szego_step(&PolynomialPair::one(), c(0.0, 0.0)).unwrap();
        assert_eq!(p.phi(), &[c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(p.phi_star(), &[c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn step_with_point_six() {
        let p = szego_step(&PolynomialPair::one(), c(0.6, 0.0)).unwrap();
        // phi_1 = (z - 0.6)/0.8, phi_1^* = (1 - 0.6 z)/0.8
        let want_phi = [c(-0.75, 0.0), c(1.25, 0.0)];
        let want_star = [c(1.25, 0.0), c(-0.75, 0.0)];
        for k in 0..2 {
            assert!((p.phi()[k] - want_phi[k]).norm() < 1e-15);
            assert!((p.phi_star()[k] - want_star[k]).norm() < 1e-15);
        }
        // Both rows of the recursion hold identically in z.
        for z in [c(0.3, -1.1), c(2.0, 0.5), c(-0.7, 0.0)] {
            let (phi1, star1) = p.eval(z);
            let g = [[c(0.6, 0.0), c(0.8, 0.0)], [c(0.8, 0.0), c(-0.6, 0.0)]];
            let top = g[0][0] * 1.0 + g[0][1] * phi1;
            let bottom = g[1][0] * 1.0 + g[1][1] * phi1;
            assert!((top - z).norm() < 1e-14);
            assert!((bottom - star1).norm() < 1e-14);
        }
    }

    #[test]
    fn evaluate_examples() {
        let s = SchurSequence::<f64>::zeros(5);
        let (phi, star) = evaluate_phi(&s, 5, c(0.0, 1.0)).unwrap();
        assert!((phi - c(0.0, 1.0)).norm() < 1e-15);
        assert!((star - c(1.0, 0.0)).norm() < 1e-15);

        let s = SchurSequence::new(vec![c(0.6, 0.0)]).unwrap();
        let (phi, star) = evaluate_phi(&s, 1, c(1.0, 0.0)).unwrap();
        assert!((phi - c(0.5, 0.0)).norm() < 1e-15);
        assert!((star - c(0.5, 0.0)).norm() < 1e-15);

        assert!(matches!(
            evaluate_phi(&s, 2, c(1.0, 0.0)),
            Err(SnakeError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn laurent_basis_examples() {
        let s = SchurSequence::new(vec![c(0.3, 0.1), c(-0.2, 0.4), c(0.1, 0.0)]).unwrap();
        let hess = GeneratingSequence::hessenberg(3);
        let z = c(0.4, 0.9);
        for n in 0..=3 {
            let psi = laurent_basis(&s, &hess, n, z).unwrap();
            let (phi, _) = evaluate_phi(&s, n, z).unwrap();
            assert!((psi - phi).norm() < 1e-15);
        }

        let free = SchurSequence::<f64>::zeros(3);
        let cmv = GeneratingSequence::cmv(3);
        let z = c(0.6, 0.8);
        let psi2 = laurent_basis(&free, &cmv, 2, z).unwrap();
        assert!((psi2 - z.inv()).norm() < 1e-15);

        assert_eq!(
            laurent_basis(&free, &cmv, 1, c(0.0, 0.0)),
            Err(SnakeError::ZeroArgument)
        );
    }

    fn arb_alpha() -> impl Strategy<Value = Complex64> {
        (0.0..0.95f64, -3.2..3.2f64).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    fn arb_schur(max: usize) -> impl Strategy<Value = SchurSequence<f64>> {
        prop::collection::vec(arb_alpha(), 1..=max).prop_map(|v| SchurSequence::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn rho_identity_within_ulps(a in arb_alpha()) {
            let s = SchurSequence::new(vec![a]).unwrap();
            let rho = s.rho(0);
            let defect = (rho * rho + a.norm_sqr() - 1.0).abs();
            prop_assert!(defect <= 4.0 * f64::EPSILON);
            prop_assert!(rho > 0.0 && rho <= 1.0);
        }

        #[test]
        fn dual_is_an_involution(v in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 1..12)) {
            let p: Vec<Complex64> = v.into_iter().map(|(a, b)| c(a, b)).collect();
            prop_assert_eq!(dual(&dual(&p)), p);
        }

        #[test]
        fn recursion_preserves_duality_and_normalization(s in arb_schur(16)) {
            let pair = szego_polynomials(&s, s.len()).unwrap();
            prop_assert_eq!(dual(pair.phi()), pair.phi_star().to_vec());
            let lead = pair.leading();
            prop_assert!(lead.re > 0.0 && lead.im.abs() <= 1e-12 * lead.re);
        }

        #[test]
        fn equal_modulus_on_circle(s in arb_schur(24), t in -3.2..3.2f64) {
            let z = Complex64::from_polar(1.0, t);
            let (phi, star) = evaluate_phi(&s, s.len(), z).unwrap();
            prop_assert!((phi.norm() - star.norm()).abs() <= 1e-12 * phi.norm().max(1.0));
        }

        #[test]
        fn value_and_coefficient_recursions_agree(
            s in arb_schur(32),
            ts in prop::collection::vec(-3.2..3.2f64, 32),
        ) {
            let pair = szego_polynomials(&s, s.len()).unwrap();
            // Horner error scales with the coefficient 1-norm, not the value.
            let scale: f64 = pair.phi().iter().map(|c| c.norm()).sum();
            for t in ts {
                let z = Complex64::from_polar(1.0, t);
                let (a, b) = evaluate_phi(&s, s.len(), z).unwrap();
                let (ca, cb) = pair.eval(z);
                prop_assert!((a - ca).norm() <= 1e-13 * scale);
                prop_assert!((b - cb).norm() <= 1e-13 * scale);
            }
        }
    }
}
