//! Complex scalar utilities: the primitive N-th root of unity, ω-deformed
//! factorials and binomials, dense complex polynomials with companion-matrix
//! root extraction, and the Lagrange form of the inverse Vandermonde matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// ω = exp(2πi/N), the primitive N-th root of unity with minimal positive
/// argument. Every phase in the crate is a power of this ω.
pub fn root_of_unity(n: u32) -> Result<Complex64> {
    if n < 2 {
        return Err(Error::Config(format!("N must be >= 2, got {n}")));
    }
    Ok(Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / n as f64))
}

/// ω^k with the exponent reduced mod N before exponentiation, so that large
/// positive or negative k never degrade the unit modulus.
pub fn omega_pow(n: u32, k: i64) -> Complex64 {
    let m = k.rem_euclid(n as i64);
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * m as f64 / n as f64)
}

/// ω-deformed integer [m] = (1 - ω^m)/(1 - ω).
pub fn omega_int(m: i64, n: u32) -> Complex64 {
    let omega = omega_pow(n, 1);
    (Complex64::new(1.0, 0.0) - omega_pow(n, m)) / (Complex64::new(1.0, 0.0) - omega)
}

/// ω-deformed factorial [m]! = prod_{i=1}^{m} [i].
///
/// Factors [i] vanish at i ≡ 0 mod N, so m >= N is rejected: a silent zero
/// here would zero every downstream ratio.
pub fn omega_factorial(m: u32, n: u32) -> Result<Complex64> {
    if m >= n {
        return Err(Error::Domain(format!(
            "omega factorial [{m}]! undefined for m >= N = {n} (vanishing factor)"
        )));
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 1..=m as i64 {
        acc *= omega_int(i, n);
    }
    Ok(acc)
}

/// ω-deformed (Gaussian) binomial via the product form
/// prod_{i=1}^{lower} (1 - ω^{upper-lower+i}) / (1 - ω^i).
///
/// Out-of-range indices (lower < 0 or lower > upper) give an empty
/// coefficient and return zero rather than erroring. The product form is
/// valid for upper as large as 2(N-1); a vanishing numerator factor
/// correctly yields zero there.
pub fn gauss_binomial(upper: i64, lower: i64, n: u32) -> Complex64 {
    if lower < 0 || lower > upper {
        return Complex64::new(0.0, 0.0);
    }
    debug_assert!(lower < n as i64, "lower index must stay below N");
    let one = Complex64::new(1.0, 0.0);
    let mut acc = one;
    for i in 1..=lower {
        let num = one - omega_pow(n, upper - lower + i);
        let den = one - omega_pow(n, i);
        acc *= num / den;
    }
    acc
}

/// Dense complex polynomial, coefficients in ascending degree order.
///
/// Trailing exact zeros are trimmed on construction so the leading
/// coefficient of a nonzero polynomial is always nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct CPolynomial {
    coeffs: Vec<Complex64>,
}

impl CPolynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(|c| c.norm() == 0.0) == Some(true) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        CPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        CPolynomial {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        }
    }

    pub fn one() -> Self {
        CPolynomial {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// Monic polynomial prod_i (z - roots[i]).
    pub fn from_roots(roots: &[Complex64]) -> Self {
        // ascending coefficients, multiplied up one factor (z - root) at a time
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &root in roots {
            coeffs.push(Complex64::new(0.0, 0.0));
            for i in (0..coeffs.len() - 1).rev() {
                let c = coeffs[i];
                coeffs[i + 1] += c;
                coeffs[i] = -root * c;
            }
        }
        CPolynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].norm() == 0.0
    }

    pub fn coeff(&self, i: usize) -> Complex64 {
        self.coeffs
            .get(i)
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> CPolynomial {
        if self.coeffs.len() == 1 {
            return CPolynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * i as f64)
            .collect();
        CPolynomial::new(coeffs)
    }

    pub fn scale(&self, s: Complex64) -> CPolynomial {
        CPolynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &CPolynomial) -> CPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) + other.coeff(i)).collect();
        CPolynomial::new(coeffs)
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Roots of a complex polynomial: eigenvalues of the companion matrix,
/// polished with two Newton steps, returned sorted by (re, im).
///
/// Degree 1 and 2 are solved in closed form. Near-coincident roots are
/// rejected because the Lagrange inversion downstream presupposes simple
/// roots.
pub fn poly_roots(p: &CPolynomial) -> Result<Vec<Complex64>> {
    let deg = p.degree();
    if deg == 0 || p.leading().norm() == 0.0 {
        return Err(Error::Domain(
            "root extraction needs degree >= 1 with nonzero leading coefficient".into(),
        ));
    }
    let lead = p.leading();
    let monic: Vec<Complex64> = p.coeffs().iter().map(|c| c / lead).collect();

    let mut roots: Vec<Complex64> = match deg {
        1 => vec![-monic[0]],
        2 => {
            let (c, b) = (monic[0], monic[1]);
            let disc = (b * b - 4.0 * c).sqrt();
            // pick the larger-magnitude branch first to avoid cancellation
            let q = if (b + disc).norm() >= (b - disc).norm() {
                -(b + disc) / 2.0
            } else {
                -(b - disc) / 2.0
            };
            vec![q, c / q]
        }
        _ => {
            let mut comp = DMatrix::<Complex64>::zeros(deg, deg);
            for i in 1..deg {
                comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
            }
            for i in 0..deg {
                comp[(i, deg - 1)] = -monic[i];
            }
            crate::eigen::eigenvalues(&comp)?
        }
    };

    // Newton polish
    let dp = p.derivative();
    for z in roots.iter_mut() {
        for _ in 0..2 {
            let d = dp.eval(*z);
            if d.norm() > 1e-300 {
                *z -= p.eval(*z) / d;
            }
        }
    }

    let scale = p.max_coeff_norm();
    let residuals: Vec<f64> = roots
        .iter()
        .map(|&z| p.eval(z).norm() / (scale * z.norm().max(1.0).powi(deg as i32)))
        .collect();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    if max_residual > tol::TOL_ROOT {
        return Err(Error::RootsNotConverged {
            max_residual,
            residuals,
        });
    }

    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let sep = (roots[i] - roots[j]).norm();
            if sep < tol::TOL_ROOT_SEPARATION * roots[i].norm().max(1.0) {
                return Err(Error::DegenerateRoots { i, j, sep });
            }
        }
    }

    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(roots)
}

/// Coefficients β_{j,n} of the Lagrange cardinal polynomials
/// f_j(z) = prod_{l≠j} (z - z_l)/(z_j - z_l) = sum_n β_{j,n} z^n,
/// i.e. the inverse of the Vandermonde matrix of the given roots.
#[derive(Clone, Debug)]
pub struct BetaMatrix {
    rows: Vec<Vec<Complex64>>,
    roots: Vec<Complex64>,
}

impl BetaMatrix {
    /// β_{j,n} with 0-based j in [0, r), n in [0, r).
    pub fn beta(&self, j: usize, n: usize) -> Complex64 {
        self.rows[j][n]
    }

    pub fn r(&self) -> usize {
        self.rows.len()
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    /// Max residual over both orthogonality relations:
    /// sum_n β_{j,n} z_k^n = δ_{jk} and sum_k z_k^n β_{k,m} = δ_{nm}.
    pub fn orthogonality_residual(&self) -> f64 {
        let r = self.r();
        let mut worst = 0.0f64;
        for j in 0..r {
            for k in 0..r {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut zp = Complex64::new(1.0, 0.0);
                for n in 0..r {
                    acc += self.rows[j][n] * zp;
                    zp *= self.roots[k];
                }
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).norm());
            }
        }
        for n in 0..r {
            for m in 0..r {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..r {
                    acc += self.roots[k].powu(n as u32) * self.rows[k][m];
                }
                let target = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }
}

/// Build β from pairwise-distinct roots.
pub fn lagrange_beta(roots: &[Complex64]) -> Result<BetaMatrix> {
    let r = roots.len();
    if r == 0 {
        return Err(Error::Domain("need at least one root".into()));
    }
    for i in 0..r {
        for j in i + 1..r {
            let sep = (roots[i] - roots[j]).norm();
            if sep < tol::TOL_ROOT_SEPARATION * roots[i].norm().max(1.0) {
                return Err(Error::DegenerateRoots { i, j, sep });
            }
        }
    }
    let mut rows = Vec::with_capacity(r);
    for j in 0..r {
        let others: Vec<Complex64> = roots
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != j)
            .map(|(_, &z)| z)
            .collect();
        let numerator = CPolynomial::from_roots(&others);
        let denom: Complex64 = others
            .iter()
            .map(|&z| roots[j] - z)
            .product();
        let mut row: Vec<Complex64> = (0..r).map(|n| numerator.coeff(n) / denom).collect();
        row.truncate(r);
        rows.push(row);
    }
    Ok(BetaMatrix {
        rows,
        roots: roots.to_vec(),
    })
}

/// Residual of the power-sum recursion n*L_n = sum_{j=1}^n d_j L_{n-j}
/// with d_n = -sum_i z_i^{-n}; returns the maximum over n = 1..deg.
pub fn newton_identity_check(lambda: &[Complex64], roots: &[Complex64]) -> f64 {
    let r = roots.len();
    let d: Vec<Complex64> = (1..=r)
        .map(|n| -roots.iter().map(|z| z.powi(-(n as i32))).sum::<Complex64>())
        .collect();
    let mut worst = 0.0f64;
    for n in 1..lambda.len() {
        let mut rhs = Complex64::new(0.0, 0.0);
        for j in 1..=n.min(r) {
            rhs += d[j - 1] * lambda[n - j];
        }
        let lhs = lambda[n] * n as f64;
        worst = worst.max((lhs - rhs).norm());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn root_of_unity_quarter_turn() {
        let w = root_of_unity(4).unwrap();
        assert!((w - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn root_of_unity_nth_power_is_one() {
        for n in 2..12 {
            let w = root_of_unity(n).unwrap();
            assert!((w.powu(n) - c(1.0, 0.0)).norm() < 1e-14);
            if n >= 3 {
                assert!(w.im > 0.0);
            }
        }
    }

    #[test]
    fn root_of_unity_cubic_geometric_sum() {
        let w = root_of_unity(3).unwrap();
        assert!((c(1.0, 0.0) + w + w * w).norm() < 1e-15);
    }

    #[test]
    fn root_of_unity_rejects_small_n() {
        assert!(root_of_unity(1).is_err());
    }

    #[test]
    fn omega_factorial_base_cases() {
        assert!((omega_factorial(0, 5).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((omega_factorial(1, 5).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn omega_factorial_two_at_n3() {
        let w = root_of_unity(3).unwrap();
        let expect = c(1.0, 0.0) + w;
        assert!((omega_factorial(2, 3).unwrap() - expect).norm() < 1e-15);
    }

    #[test]
    fn omega_factorial_rejects_vanishing() {
        assert!(omega_factorial(3, 3).is_err());
    }

    #[test]
    fn gauss_binomial_edges() {
        for n in 2..7u32 {
            for upper in 0..n as i64 {
                assert!((gauss_binomial(upper, 0, n) - c(1.0, 0.0)).norm() < 1e-15);
                assert!((gauss_binomial(upper, upper, n) - c(1.0, 0.0)).norm() < 1e-14);
            }
        }
        assert_eq!(gauss_binomial(2, 3, 4), c(0.0, 0.0));
        assert_eq!(gauss_binomial(2, -1, 4), c(0.0, 0.0));
    }

    #[test]
    fn gauss_binomial_two_choose_one_at_n3() {
        let w = root_of_unity(3).unwrap();
        assert!((gauss_binomial(2, 1, 3) - (c(1.0, 0.0) + w)).norm() < 1e-15);
    }

    #[test]
    fn gauss_binomial_ratio_form_matches_product_form() {
        // [upper over lower] = [upper]! / ([lower]! [upper-lower]!)
        for n in 2..8u32 {
            for upper in 0..n {
                for lower in 0..=upper {
                    let ratio = omega_factorial(upper, n).unwrap()
                        / (omega_factorial(lower, n).unwrap()
                            * omega_factorial(upper - lower, n).unwrap());
                    let prod = gauss_binomial(upper as i64, lower as i64, n);
                    assert!(
                        (ratio - prod).norm() < 1e-13,
                        "N={n} upper={upper} lower={lower}"
                    );
                }
            }
        }
    }

    #[test]
    fn gauss_binomial_reflection_identity() {
        // [N-1-n over v] = (-1)^v ω^{-nv - v(v+1)/2} [v+n over v]
        for n_mod in 2..9u32 {
            for nn in 0..n_mod as i64 {
                for v in 0..n_mod as i64 {
                    if nn + v > n_mod as i64 - 1 {
                        continue;
                    }
                    let lhs = gauss_binomial(n_mod as i64 - 1 - nn, v, n_mod);
                    let sign = if v % 2 == 0 { 1.0 } else { -1.0 };
                    let phase = omega_pow(n_mod, -(nn * v) - v * (v + 1) / 2);
                    let rhs = sign * phase * gauss_binomial(v + nn, v, n_mod);
                    assert!(
                        (lhs - rhs).norm() < crate::tol::TOL_SFACTOR,
                        "N={n_mod} n={nn} v={v}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn poly_roots_symmetric_pair() {
        let p = CPolynomial::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let roots = poly_roots(&p).unwrap();
        assert!((roots[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((roots[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn poly_roots_quadratic_formula_case() {
        let p = CPolynomial::new(vec![c(1.0, 0.0), c(7.0, 0.0), c(1.0, 0.0)]);
        let roots = poly_roots(&p).unwrap();
        let s5 = 5.0f64.sqrt();
        assert!((roots[0] - c((-7.0 - 3.0 * s5) / 2.0, 0.0)).norm() < 1e-12);
        assert!((roots[1] - c((-7.0 + 3.0 * s5) / 2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn poly_roots_constructed_factors() {
        let p = CPolynomial::from_roots(&[c(2.0, 0.0), c(0.5, 0.0)]);
        let roots = poly_roots(&p).unwrap();
        assert!((roots[0] - c(0.5, 0.0)).norm() < 1e-12);
        assert!((roots[1] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn poly_roots_rejects_degenerate() {
        let p = CPolynomial::from_roots(&[c(1.0, 2.0), c(1.0, 2.0)]);
        assert!(matches!(
            poly_roots(&p),
            Err(Error::DegenerateRoots { .. })
        ));
    }

    #[test]
    fn lagrange_beta_single_root() {
        let b = lagrange_beta(&[c(-1.0, 0.0)]).unwrap();
        assert!((b.beta(0, 0) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn lagrange_beta_hand_example() {
        let b = lagrange_beta(&[c(2.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!((b.beta(0, 0) - c(-1.0 / 3.0, 0.0)).norm() < 1e-14);
        assert!((b.beta(0, 1) - c(2.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn lagrange_beta_orthogonality() {
        let roots = [c(2.0, 0.0), c(0.5, 1.0), c(-1.5, -0.3), c(0.2, 2.0)];
        let b = lagrange_beta(&roots).unwrap();
        assert!(b.orthogonality_residual() < crate::tol::TOL_VDM);
    }

    #[test]
    fn newton_identity_single_root() {
        // P = 1 + z, z_1 = -1: d_1 = 1, residual 0
        let res = newton_identity_check(&[c(1.0, 0.0), c(1.0, 0.0)], &[c(-1.0, 0.0)]);
        assert!(res < 1e-15);
    }

    #[test]
    fn newton_identity_reciprocal_quadratic() {
        // P = 1 + 7z + z^2: d_1 = 7, d_2 = -47
        let p = CPolynomial::new(vec![c(1.0, 0.0), c(7.0, 0.0), c(1.0, 0.0)]);
        let roots = poly_roots(&p).unwrap();
        let d1: Complex64 = -roots.iter().map(|z| 1.0 / z).sum::<Complex64>();
        let d2: Complex64 = -roots.iter().map(|z| 1.0 / (z * z)).sum::<Complex64>();
        assert!((d1 - c(7.0, 0.0)).norm() < 1e-10);
        assert!((d2 - c(-47.0, 0.0)).norm() < 1e-9);
        let res = newton_identity_check(p.coeffs(), &roots);
        assert!(res < 1e-10);
    }

    #[test]
    fn from_roots_reconstructs_coefficients() {
        let roots = [c(0.3, 0.4), c(-1.2, 0.1), c(2.0, -0.5)];
        let p = CPolynomial::from_roots(&roots);
        let found = poly_roots(&p).unwrap();
        let rebuilt = CPolynomial::from_roots(&found);
        for i in 0..=p.degree() {
            assert!((p.coeff(i) - rebuilt.coeff(i)).norm() < 1e-9 * p.max_coeff_norm());
        }
    }
}
