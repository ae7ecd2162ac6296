//! The Drinfeld polynomial P(z), its root data, and the analytic spectrum.
//!
//! P(z) = sum_n L_n z^n has exact integer coefficients: L_n counts the
//! compositions of nN into L parts bounded by N-1, i.e. the t^(nN)
//! coefficient of ((1-t^N)/(1-t))^L. Its r = L(N-1)/N simple roots z_j come
//! in reciprocal pairs and label the sl2 modes of the degenerate ground
//! sector. Each mode carries an angle θ_j defined by
//!   2 cosh 2θ_j = k' + 1/k' - k^2 t_p^N z_j / k',
//! and the analytic transfer-matrix eigenvalues over spin patterns ξ are
//!   G(λ_q, ξ) = prod_j (A_j - ξ_j B_j),
//!   A_j = ρ cosh θ_j (1 - 1/λ_q),  B_j = ρ sinh θ_j (1 + 1/λ_q),
//! with ρ^2 = N^(1/r) k'/k^2.

use num_complex::Complex64;

use crate::curve::{CurvePoint, ModelConfig};
use crate::error::{Error, Result};
use crate::numerics::{lagrange_beta, poly_roots, BetaMatrix, CPolynomial};

/// Integer coefficients of P(z), ascending, length r + 1.
pub fn compute_p(n: u32, l: u32) -> Result<Vec<i64>> {
    if n < 2 || l == 0 || !l.is_multiple_of(n) {
        return Err(Error::Config(format!(
            "need N >= 2 and L a positive multiple of N, got N = {n}, L = {l}"
        )));
    }
    // coefficients of (1 + t + ... + t^(N-1))^L by iterated convolution
    let mut poly: Vec<i64> = vec![1];
    for _ in 0..l {
        let mut next = vec![0i64; poly.len() + n as usize - 1];
        for (i, &c) in poly.iter().enumerate() {
            for d in 0..n as usize {
                next[i + d] += c;
            }
        }
        poly = next;
    }
    let r = (l * (n - 1) / n) as usize;
    Ok((0..=r).map(|i| poly[i * n as usize]).collect())
}

/// Everything derived from P(z) at a fixed coupling: roots, reciprocal
/// pairing, Lagrange data, series-inverse coefficients, mode angles, and
/// the spectral scale ρ.
#[derive(Clone, Debug)]
pub struct DrinfeldData {
    pub n: u32,
    pub l: u32,
    pub r: usize,
    pub kprime: Complex64,
    pub k: Complex64,
    pub lambda_p: Complex64,
    /// t_p^N of the vertical rapidity, from λ_p alone.
    pub t_p_n: Complex64,
    pub lambda_int: Vec<i64>,
    pub lambda: Vec<Complex64>,
    pub roots: Vec<Complex64>,
    /// pairing[m] = m* with z_{m*} z_m = 1; fixed points allowed at z = -1.
    pub pairing: Vec<usize>,
    pub pairing_residual: f64,
    /// Modes with z_m^2 = 1 (paired with themselves).
    pub self_paired: Vec<usize>,
    pub beta: BetaMatrix,
    /// S_0..S_{r-1}: coefficients of the power-series inverse of P.
    pub s_coeffs: Vec<Complex64>,
    pub theta: Vec<Complex64>,
    pub rho: Complex64,
    /// d_1..d_r with d_n = -sum_j z_j^{-n}.
    pub d: Vec<Complex64>,
}

impl DrinfeldData {
    pub fn p_poly(&self) -> CPolynomial {
        CPolynomial::new(self.lambda.clone())
    }

    /// |prod(-z_l) - 1|.
    pub fn root_product_residual(&self) -> f64 {
        let prod: Complex64 = self.roots.iter().map(|z| -z).product();
        (prod - 1.0).norm()
    }
}

fn canonical_theta(c: Complex64) -> Complex64 {
    let mut theta = c.acosh() / 2.0;
    if theta.re < 0.0 || (theta.re == 0.0 && theta.im < 0.0) {
        theta = -theta;
    }
    theta
}

pub fn build_drinfeld(cfg: &ModelConfig) -> Result<DrinfeldData> {
    cfg.validate()?;
    let (n, l) = (cfg.n, cfg.l);
    let r = cfg.r();
    let lambda_int = compute_p(n, l)?;
    let lambda: Vec<Complex64> = lambda_int
        .iter()
        .map(|&c| Complex64::new(c as f64, 0.0))
        .collect();
    let p = CPolynomial::new(lambda.clone());
    let roots = poly_roots(&p)?;

    let mut pairing = vec![0usize; r];
    let mut pairing_residual = 0.0f64;
    for m in 0..r {
        let (best, res) = roots
            .iter()
            .enumerate()
            .map(|(k, z)| (k, (roots[m] * z - 1.0).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        pairing[m] = best;
        pairing_residual = pairing_residual.max(res);
    }
    for m in 0..r {
        if pairing[pairing[m]] != m {
            return Err(Error::PairingFailed(pairing_residual));
        }
    }
    if pairing_residual > 1e-6 {
        return Err(Error::PairingFailed(pairing_residual));
    }
    let self_paired: Vec<usize> = (0..r).filter(|&m| pairing[m] == m).collect();

    let beta = lagrange_beta(&roots)?;
    let s_coeffs: Vec<Complex64> = (0..r)
        .map(|nn| {
            (0..r)
                .map(|i| roots[i].powi(-(nn as i32)) * beta.beta(i, 0))
                .sum()
        })
        .collect();
    let d: Vec<Complex64> = (1..=r)
        .map(|nn| -roots.iter().map(|z| z.powi(-(nn as i32))).sum::<Complex64>())
        .collect();

    let kprime = cfg.kprime;
    let k = cfg.k();
    let lambda_p = cfg.lambda_p;
    let one = Complex64::new(1.0, 0.0);
    let t_p_n = (one - kprime / lambda_p) * (one - kprime * lambda_p) / (k * k);
    let k2 = k * k;
    let theta: Vec<Complex64> = roots
        .iter()
        .map(|&z| {
            let c = (kprime + 1.0 / kprime - k2 * t_p_n * z / kprime) / 2.0;
            canonical_theta(c)
        })
        .collect();
    let rho = (n as f64).powf(1.0 / (2.0 * r as f64)) * (kprime / k2).sqrt();

    Ok(DrinfeldData {
        n,
        l,
        r,
        kprime,
        k,
        lambda_p,
        t_p_n,
        lambda_int,
        lambda,
        roots,
        pairing,
        pairing_residual,
        self_paired,
        beta,
        s_coeffs,
        theta,
        rho,
        d,
    })
}

/// Per-mode eigenvalue building blocks at a horizontal rapidity λ_q.
pub fn ab_values(dd: &DrinfeldData, j: usize, lambda_q: Complex64) -> (Complex64, Complex64) {
    let inv = 1.0 / lambda_q;
    let a = dd.rho * dd.theta[j].cosh() * (Complex64::new(1.0, 0.0) - inv);
    let b = dd.rho * dd.theta[j].sinh() * (Complex64::new(1.0, 0.0) + inv);
    (a, b)
}

/// G(λ_q, ξ) = prod_j (A_j - ξ_j B_j) for a spin pattern ξ in {±1}^r.
pub fn analytic_eigenvalue(dd: &DrinfeldData, pattern: &[i8], lambda_q: Complex64) -> Complex64 {
    assert_eq!(pattern.len(), dd.r, "pattern length must equal r");
    let mut acc = Complex64::new(1.0, 0.0);
    for (j, &xi) in pattern.iter().enumerate() {
        let (a, b) = ab_values(dd, j, lambda_q);
        acc *= a - (xi as f64) * b;
    }
    acc
}

#[derive(Clone, Debug)]
pub struct FunctionalReport {
    /// Relative residual of G(λ)G(1/λ) against N t_p^(rN) prod((t_q/t_p)^N - z_j).
    pub residual_rel: f64,
    /// Max relative spread of G(λ,ξ)G(1/λ,ξ) over all 2^r patterns.
    pub pattern_deviation: f64,
}

/// The eigenvalue product identity at λ_q, plus its pattern independence.
pub fn functional_check(dd: &DrinfeldData, lambda_q: Complex64) -> Result<FunctionalReport> {
    if lambda_q.norm() == 0.0 {
        return Err(Error::SingularPoint("lambda_q = 0".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let t_q_n = (one - dd.kprime / lambda_q) * (one - dd.kprime * lambda_q) / (dd.k * dd.k);
    let ratio = t_q_n / dd.t_p_n;
    let rhs = dd.t_p_n.powu(dd.r as u32)
        * dd.n as f64
        * dd
            .roots
            .iter()
            .map(|&z| ratio - z)
            .product::<Complex64>();

    let r = dd.r;
    let mut products = Vec::with_capacity(1 << r);
    for bits in 0..(1usize << r) {
        let pattern: Vec<i8> = (0..r)
            .map(|j| if bits >> (r - 1 - j) & 1 == 1 { -1 } else { 1 })
            .collect();
        let g1 = analytic_eigenvalue(dd, &pattern, lambda_q);
        let g2 = analytic_eigenvalue(dd, &pattern, 1.0 / lambda_q);
        products.push(g1 * g2);
    }
    let all_minus = products[(1 << r) - 1];
    let residual_rel = (all_minus - rhs).norm() / rhs.norm().max(1e-300);
    let scale = products.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let pattern_deviation = products
        .iter()
        .map(|p| (p - all_minus).norm())
        .fold(0.0, f64::max)
        / scale.max(1e-300);
    Ok(FunctionalReport {
        residual_rel,
        pattern_deviation,
    })
}

/// Vertical rapidity point for this data set (λ_p, principal branches).
pub fn vertical_point(dd: &DrinfeldData) -> Result<CurvePoint> {
    if (dd.lambda_p - 1.0).norm() < 1e-14 {
        crate::curve::si_point(dd.kprime, dd.n)
    } else {
        crate::curve::point_from_lambda(dd.kprime, dd.lambda_p, dd.n)
    }
}
