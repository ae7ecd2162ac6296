//! Rapidity points on the chiral Potts curve and the model configuration.
//!
//! A point carries (x, y, μ) with λ = μ^N and t = xy, subject to
//!   k x^N = 1 - k'/λ,   k y^N = 1 - k' λ,   k^2 = 1 - k'^2,
//! which imply k^2 t^N = 1 + k'^2 - k'(λ + 1/λ). The vertical rapidity
//! defaults to the superintegrable choice λ_p = 1, x_p = y_p, μ_p = 1.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::omega_pow;
use crate::tol;

#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub root: f64,
    pub linalg: f64,
    pub spec: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root: tol::TOL_ROOT,
            linalg: tol::TOL_VDM,
            spec: tol::TOL_SPECTRUM,
        }
    }
}

/// Global run configuration: lattice shape, charge sector, coupling.
#[derive(Clone, Copy, Debug)]
pub struct ModelConfig {
    pub n: u32,
    pub l: u32,
    pub q_charge: i32,
    pub kprime: Complex64,
    pub lambda_p: Complex64,
    pub tol: Tolerances,
    pub seed: u64,
}

impl ModelConfig {
    pub fn new(n: u32, l: u32, kprime: Complex64) -> Self {
        ModelConfig {
            n,
            l,
            q_charge: 0,
            kprime,
            lambda_p: Complex64::new(1.0, 0.0),
            tol: Tolerances::default(),
            seed: 42,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("N must be >= 2, got {}", self.n)));
        }
        if self.l == 0 || !self.l.is_multiple_of(self.n) {
            return Err(Error::Config(format!(
                "L must be a positive multiple of N, got L = {}, N = {}",
                self.l, self.n
            )));
        }
        if self.kprime.norm() == 0.0 {
            return Err(Error::Config("k' must be nonzero".into()));
        }
        let k2 = Complex64::new(1.0, 0.0) - self.kprime * self.kprime;
        if k2.norm() < 1e-12 {
            return Err(Error::Config("k' = +-1 makes k vanish".into()));
        }
        if self.lambda_p.norm() == 0.0 {
            return Err(Error::Config("lambda_p must be nonzero".into()));
        }
        let dim = self.basis_dim_checked().ok_or_else(|| {
            Error::Config(format!(
                "sector dimension N^(L-1) overflows for N = {}, L = {}",
                self.n, self.l
            ))
        })?;
        if dim > tol::BASIS_CAP {
            return Err(Error::Config(format!(
                "sector dimension N^(L-1) = {dim} exceeds cap {}",
                tol::BASIS_CAP
            )));
        }
        Ok(())
    }

    /// Number of modes r = L(N-1)/N.
    pub fn r(&self) -> usize {
        (self.l as usize * (self.n as usize - 1)) / self.n as usize
    }

    /// k with k^2 = 1 - k'^2, principal square root.
    pub fn k(&self) -> Complex64 {
        (Complex64::new(1.0, 0.0) - self.kprime * self.kprime).sqrt()
    }

    pub fn basis_dim_checked(&self) -> Option<usize> {
        (self.n as usize).checked_pow(self.l - 1)
    }

    pub fn basis_dim(&self) -> usize {
        self.basis_dim_checked().expect("validated config")
    }
}

/// A rapidity (x, y, μ) with cached λ = μ^N and the lattice size N.
#[derive(Clone, Copy, Debug)]
pub struct CurvePoint {
    pub x: Complex64,
    pub y: Complex64,
    pub mu: Complex64,
    pub lambda: Complex64,
    pub n: u32,
}

impl CurvePoint {
    pub fn t(&self) -> Complex64 {
        self.x * self.y
    }

    pub fn x_n(&self) -> Complex64 {
        self.x.powu(self.n)
    }

    pub fn y_n(&self) -> Complex64 {
        self.y.powu(self.n)
    }

    pub fn t_n(&self) -> Complex64 {
        self.x_n() * self.y_n()
    }

    /// Max residual of the two defining curve constraints.
    pub fn residual(&self, kprime: Complex64) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        let k = (one - kprime * kprime).sqrt();
        let rx = (k * self.x_n() - (one - kprime / self.lambda)).norm();
        let ry = (k * self.y_n() - (one - kprime * self.lambda)).norm();
        rx.max(ry)
    }
}

/// The superintegrable vertical rapidity: λ_p = 1, μ_p = 1, x_p = y_p.
pub fn si_point(kprime: Complex64, n: u32) -> Result<CurvePoint> {
    let one = Complex64::new(1.0, 0.0);
    let k2 = one - kprime * kprime;
    if k2.norm() < 1e-12 {
        return Err(Error::Config("k' = +-1 makes k vanish".into()));
    }
    let k = k2.sqrt();
    let x = ((one - kprime) / k).powf(1.0 / n as f64);
    Ok(CurvePoint {
        x,
        y: x,
        mu: one,
        lambda: one,
        n,
    })
}

/// Point with prescribed λ; all fractional powers principal.
pub fn point_from_lambda(kprime: Complex64, lambda: Complex64, n: u32) -> Result<CurvePoint> {
    let one = Complex64::new(1.0, 0.0);
    if lambda.norm() == 0.0 {
        return Err(Error::SingularPoint("lambda = 0".into()));
    }
    let k2 = one - kprime * kprime;
    if k2.norm() < 1e-12 {
        return Err(Error::Config("k' = +-1 makes k vanish".into()));
    }
    let k = k2.sqrt();
    let fx = one - kprime / lambda;
    let fy = one - kprime * lambda;
    if fx.norm() < 1e-12 {
        return Err(Error::SingularPoint(format!(
            "1 - k'/lambda vanishes at lambda = {lambda}"
        )));
    }
    if fy.norm() < 1e-12 {
        return Err(Error::SingularPoint(format!(
            "1 - k'*lambda vanishes at lambda = {lambda}"
        )));
    }
    Ok(CurvePoint {
        x: (fx / k).powf(1.0 / n as f64),
        y: (fy / k).powf(1.0 / n as f64),
        mu: lambda.powf(1.0 / n as f64),
        lambda,
        n,
    })
}

fn weight_factor(num: Complex64, den: Complex64, what: &str, j: i64) -> Result<Complex64> {
    if den.norm() < 1e-13 {
        // a numerator vanishing in lockstep cancels exactly (q on top of p)
        if (num - den).norm() < 1e-13 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        return Err(Error::SingularPoint(format!(
            "weight denominator {what} w^{j} vanishes"
        )));
    }
    Ok(num / den)
}

/// Boltzmann weight W_pq(m) = (μ_p/μ_q)^m prod_{j=1}^m (y_q - x_p ω^j)/(y_p - x_q ω^j).
pub fn weight_w(p: &CurvePoint, q: &CurvePoint, m: u32) -> Result<Complex64> {
    let n = p.n;
    let mut acc = (p.mu / q.mu).powu(m);
    for j in 1..=m as i64 {
        let num = q.y - p.x * omega_pow(n, j);
        let den = p.y - q.x * omega_pow(n, j);
        acc *= weight_factor(num, den, "y_p - x_q", j)?;
    }
    Ok(acc)
}

/// Conjugate weight Wb_p'q(m) = (μ_q/μ_p)^m prod_{j=1}^m (ω y_p - x_q ω^j)/(y_q - x_p ω^j).
pub fn weight_wbar(p: &CurvePoint, q: &CurvePoint, m: u32) -> Result<Complex64> {
    let n = p.n;
    let mut acc = (q.mu / p.mu).powu(m);
    for j in 1..=m as i64 {
        let num = p.y * omega_pow(n, 1) - q.x * omega_pow(n, j);
        let den = q.y - p.x * omega_pow(n, j);
        acc *= weight_factor(num, den, "y_q - x_p", j)?;
    }
    Ok(acc)
}

/// N-periodicity of the weights: returns (|W(N)/W(0) - 1|, |Wb(N)/Wb(0) - 1|).
/// Both vanish exactly when p and q sit on the same curve. At q = p the
/// conjugate product telescopes to 1 identically, so that case is answered
/// directly rather than through the 0/0 factor pair.
pub fn weight_periodicity_check(p: &CurvePoint, q: &CurvePoint) -> Result<(f64, f64)> {
    let same_point =
        (p.x - q.x).norm() < 1e-14 && (p.y - q.y).norm() < 1e-14 && (p.mu - q.mu).norm() < 1e-14;
    let w_full = weight_w(p, q, p.n)?;
    let wb_res = if same_point {
        0.0
    } else {
        (weight_wbar(p, q, p.n)? - 1.0).norm()
    };
    Ok(((w_full - 1.0).norm(), wb_res))
}

/// Draw λ_q from the annulus 0.5 <= |λ| <= 2, avoiding the construction
/// singularities {0, k', 1/k'}, the vertical-point images {λ_p, 1/λ_p},
/// and the degenerate values ±1 where the mode amplitudes collapse.
pub fn sample_lambda_q<R: Rng>(
    rng: &mut R,
    kprime: Complex64,
    lambda_p: Complex64,
) -> Complex64 {
    let excluded = [
        Complex64::new(0.0, 0.0),
        kprime,
        1.0 / kprime,
        lambda_p,
        1.0 / lambda_p,
    ];
    loop {
        let ln_r = rng.gen_range(0.5f64.ln()..2.0f64.ln());
        let arg = rng.gen_range(0.0..std::f64::consts::TAU);
        let lambda = Complex64::from_polar(ln_r.exp(), arg);
        if excluded.iter().any(|&e| (lambda - e).norm() < 1e-3) {
            continue;
        }
        if (lambda - 1.0).norm() < 5e-2 || (lambda + 1.0).norm() < 5e-2 {
            continue;
        }
        return lambda;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const KP: Complex64 = Complex64::new(0.3, 0.0);

    #[test]
    fn si_point_values() {
        let p = si_point(KP, 3).unwrap();
        assert!((p.x - Complex64::new(0.9019707, 0.0)).norm() < 1e-6);
        assert!((p.x_n() - Complex64::new(0.7337994, 0.0)).norm() < 1e-6);
        assert!((p.lambda - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((p.t_n() - Complex64::new(0.7 / 1.3, 0.0)).norm() < 1e-12);
        assert!(p.residual(KP) < tol::TOL_CURVE);
    }

    #[test]
    fn si_point_rejects_unit_kprime() {
        assert!(si_point(Complex64::new(1.0, 0.0), 3).is_err());
    }

    #[test]
    fn point_from_lambda_values() {
        let q = point_from_lambda(KP, Complex64::new(2.0, 0.0), 3).unwrap();
        let k = (Complex64::new(1.0, 0.0) - KP * KP).sqrt();
        assert!((q.y_n() - Complex64::new(0.4, 0.0) / k).norm() < 1e-12);
        assert!((q.x_n() - Complex64::new(0.85, 0.0) / k).norm() < 1e-12);
        assert!(q.residual(KP) < tol::TOL_CURVE);
    }

    #[test]
    fn point_from_lambda_matches_si_at_unity() {
        let a = si_point(KP, 4).unwrap();
        let b = point_from_lambda(KP, Complex64::new(1.0, 0.0), 4).unwrap();
        assert!((a.x - b.x).norm() < 1e-14);
        assert!((a.y - b.y).norm() < 1e-14);
        assert!((a.mu - b.mu).norm() < 1e-14);
    }

    #[test]
    fn point_from_lambda_rejects_singular() {
        assert!(point_from_lambda(KP, 1.0 / KP, 3).is_err());
        assert!(point_from_lambda(KP, KP, 3).is_err());
        assert!(point_from_lambda(KP, Complex64::new(0.0, 0.0), 3).is_err());
    }

    #[test]
    fn weight_periodicity_same_point() {
        let p = si_point(KP, 3).unwrap();
        let (rw, rwb) = weight_periodicity_check(&p, &p).unwrap();
        assert!(rw < 1e-14);
        assert!(rwb < 1e-14);
    }

    #[test]
    fn weight_periodicity_on_curve_lambda_two() {
        let p = si_point(KP, 3).unwrap();
        let q = point_from_lambda(KP, Complex64::new(2.0, 0.0), 3).unwrap();
        let (rw, rwb) = weight_periodicity_check(&p, &q).unwrap();
        assert!(rw < tol::TOL_PERIODICITY, "W residual {rw}");
        assert!(rwb < tol::TOL_PERIODICITY, "Wbar residual {rwb}");
    }

    #[test]
    fn weight_periodicity_random_on_curve_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = si_point(KP, 3).unwrap();
        for _ in 0..20 {
            let lam = sample_lambda_q(&mut rng, KP, Complex64::new(1.0, 0.0));
            let q = point_from_lambda(KP, lam, 3).unwrap();
            let (rw, rwb) = weight_periodicity_check(&p, &q).unwrap();
            assert!(rw < tol::TOL_PERIODICITY && rwb < tol::TOL_PERIODICITY);
        }
    }

    #[test]
    fn weight_periodicity_detects_off_curve() {
        let p = si_point(KP, 3).unwrap();
        let mut q = point_from_lambda(KP, Complex64::new(2.0, 0.0), 3).unwrap();
        q.y += Complex64::new(1e-3, 0.0);
        let (rw, _) = weight_periodicity_check(&p, &q).unwrap();
        assert!(rw > 1e-4, "off-curve violation must be visible, got {rw}");
    }

    #[test]
    fn w_at_zero_is_one() {
        let p = si_point(KP, 5).unwrap();
        let q = point_from_lambda(KP, Complex64::new(1.7, 0.4), 5).unwrap();
        assert!((weight_w(&p, &q, 0).unwrap() - 1.0).norm() < 1e-15);
        assert!((weight_w(&p, &p, 3).unwrap() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn config_validation() {
        let mut cfg = ModelConfig::new(3, 4, KP);
        assert!(cfg.validate().is_err());
        cfg.l = 6;
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.r(), 4);
        cfg.l = 15;
        assert!(cfg.validate().is_err()); // 3^14 over the cap
    }
}
