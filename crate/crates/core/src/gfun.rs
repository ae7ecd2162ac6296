//! The combinatorial engine behind the ladder vectors: constrained ω-binomial
//! sums K_m / Kbar_m over edge configurations, their generating function, the
//! ladder polynomials G and Gbar, and the Gram polynomials h_k / hbar_k.
//!
//! Two independent routes exist for every quantity and are cross-checked:
//! the defining brute-force sums over bounded compositions, and the closed
//! product/a-sum forms. Each serves as the oracle for the other.

use num_complex::Complex64;

use crate::drinfeld::DrinfeldData;
use crate::error::{Error, Result};
use crate::numerics::{gauss_binomial, omega_pow, CPolynomial};

/// An edge configuration (n_1, ..., n_L) with 0 <= n_j <= N-1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeConfig {
    n: Vec<u8>,
    modulus: u32,
}

impl EdgeConfig {
    pub fn new(n: Vec<u8>, modulus: u32) -> Result<Self> {
        if n.iter().any(|&v| v as u32 >= modulus) {
            return Err(Error::Domain(format!(
                "edge values must lie in 0..{}",
                modulus
            )));
        }
        Ok(EdgeConfig { n, modulus })
    }

    pub fn values(&self) -> &[u8] {
        &self.n
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn charge(&self) -> u32 {
        self.n.iter().map(|&v| v as u32).sum()
    }

    /// Prefix sums N_j = sum_{l<j} n_l for 1-based site j in [1, L].
    pub fn prefix_sums(&self) -> Vec<u32> {
        let mut acc = 0u32;
        let mut out = Vec::with_capacity(self.len());
        for &v in &self.n {
            out.push(acc);
            acc += v as u32;
        }
        out
    }

    /// Suffix sums Nbar_j = sum_{l>j} n_l for 1-based site j in [1, L].
    pub fn suffix_sums(&self) -> Vec<u32> {
        let mut acc = 0u32;
        let mut out = vec![0u32; self.len()];
        for j in (0..self.len()).rev() {
            out[j] = acc;
            acc += self.n[j] as u32;
        }
        out
    }

    /// sum_j j * n_j with 1-based j.
    pub fn site_moment(&self) -> i64 {
        self.n
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as i64 + 1) * v as i64)
            .sum()
    }

    /// The complementary configuration {N-1-n_j}.
    pub fn complement(&self) -> EdgeConfig {
        EdgeConfig {
            n: self
                .n
                .iter()
                .map(|&v| (self.modulus - 1 - v as u32) as u8)
                .collect(),
            modulus: self.modulus,
        }
    }
}

/// All configurations of length l with the given exact charge, lexicographic.
pub fn enumerate_configs_with_charge(n: u32, l: u32, charge: u32) -> Vec<EdgeConfig> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; l as usize];
    fn rec(
        n: u32,
        l: usize,
        site: usize,
        remaining: u32,
        cur: &mut Vec<u8>,
        out: &mut Vec<EdgeConfig>,
    ) {
        let cap = (l - site) as u32 * (n - 1);
        if remaining > cap {
            return;
        }
        if site == l {
            out.push(EdgeConfig {
                n: cur.clone(),
                modulus: n,
            });
            return;
        }
        for v in 0..=(n - 1).min(remaining) {
            cur[site] = v as u8;
            rec(n, l, site + 1, remaining - v, cur, out);
        }
        cur[site] = 0;
    }
    rec(n, l as usize, 0, charge, &mut cur, &mut out);
    out
}

fn constrained_sum(conf: &EdgeConfig, m: u32, phases: &[u32]) -> Complex64 {
    let n = conf.modulus;
    let mut total = Complex64::new(0.0, 0.0);
    // depth-first over compositions of m into l parts bounded by N-1,
    // multiplying site weights as we descend
    fn rec(
        conf: &EdgeConfig,
        phases: &[u32],
        n: u32,
        site: usize,
        remaining: u32,
        weight: Complex64,
        total: &mut Complex64,
    ) {
        let l = conf.len();
        let cap = (l - site) as u32 * (n - 1);
        if remaining > cap {
            return;
        }
        if site == l {
            *total += weight;
            return;
        }
        let nj = conf.values()[site] as i64;
        for v in 0..=(n - 1).min(remaining) {
            let w = gauss_binomial(nj + v as i64, v as i64, n)
                * omega_pow(n, v as i64 * phases[site] as i64);
            if w.norm() != 0.0 {
                rec(conf, phases, n, site + 1, remaining - v, weight * w, total);
            }
        }
    }
    rec(conf, phases, n, 0, m, Complex64::new(1.0, 0.0), &mut total);
    total
}

/// K_m(conf) = sum over compositions {n'_j} of m, parts <= N-1, of
/// prod_j [n_j + n'_j over n'_j] ω^{n'_j N_j}.
pub fn k_coeff(conf: &EdgeConfig, m: u32) -> Complex64 {
    constrained_sum(conf, m, &conf.prefix_sums())
}

/// Same sum with suffix phases Nbar_j.
pub fn kbar_coeff(conf: &EdgeConfig, m: u32) -> Complex64 {
    constrained_sum(conf, m, &conf.suffix_sums())
}

fn gen_function_with_phases(
    conf: &EdgeConfig,
    t: Complex64,
    phases: &[u32],
) -> Result<Complex64> {
    let n = conf.modulus;
    let charge = conf.charge();
    if !charge.is_multiple_of(n) {
        return Err(Error::UnsupportedCharge { charge, n });
    }
    let k = charge / n;
    let one = Complex64::new(1.0, 0.0);
    let tn = t.powu(n);
    let mut acc = (one - tn).powi(-(k as i32));
    for &ph in phases {
        let den = one - t * omega_pow(n, ph as i64);
        if den.norm() < 1e-12 {
            return Err(Error::PoleProximity(format!(
                "1 - t w^{ph} vanishes at t = {t}"
            )));
        }
        acc *= (one - tn) / den;
    }
    Ok(acc)
}

/// Generating function g(conf, t) = (1-t^N)^{-k} prod_j (1-t^N)/(1 - t ω^{N_j})
/// for charge kN; equals sum_m K_m(conf) t^m.
pub fn gen_function(conf: &EdgeConfig, t: Complex64) -> Result<Complex64> {
    gen_function_with_phases(conf, t, &conf.prefix_sums())
}

/// Suffix-phase variant, the generating function of Kbar_m.
pub fn gen_function_bar(conf: &EdgeConfig, t: Complex64) -> Result<Complex64> {
    gen_function_with_phases(conf, t, &conf.suffix_sums())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GKind {
    Forward,
    Bar,
}

fn g_len(n: u32, l: u32, q: u32, charge: u32) -> usize {
    let r = (l * (n - 1) / n) as usize;
    if charge == 0 {
        // full ladder: coefficients K_{lN} up to l = r
        r + 1
    } else {
        // charge N: degree m_Q - 1 with m_Q = floor((rN - Q)/N)
        ((r as u32 * n).saturating_sub(q) / n) as usize
    }
}

/// Ladder polynomial G_Q(conf, z) = sum_l K_{Q+lN}(conf) z^l (or the Kbar
/// variant), assembled coefficientwise from the constrained sums.
///
/// Supported charges: N (the sector ladder) and 0 (the route to P(z):
/// for the all-zero configuration (1-z) Gbar(z) telescopes to P(z) once the
/// charge-one pole factor is included, and the full ladder here runs to z^r).
pub fn g_poly(q: u32, conf: &EdgeConfig, kind: GKind) -> Result<CPolynomial> {
    let n = conf.modulus;
    let charge = conf.charge();
    if charge != 0 && charge != n {
        return Err(Error::UnsupportedCharge { charge, n });
    }
    let len = g_len(n, conf.len() as u32, q, charge);
    let coeffs: Vec<Complex64> = (0..len)
        .map(|ell| {
            let m = q + ell as u32 * n;
            match kind {
                GKind::Forward => k_coeff(conf, m),
                GKind::Bar => kbar_coeff(conf, m),
            }
        })
        .collect();
    Ok(CPolynomial::new(coeffs))
}

/// Closed a-sum form: G_Q(conf, t^N) = (1/N) sum_a (t ω^a)^{-Q} g(conf, t ω^a).
pub fn g_closed_eval(q: u32, conf: &EdgeConfig, kind: GKind, t: Complex64) -> Result<Complex64> {
    let n = conf.modulus;
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..n {
        let ta = t * omega_pow(n, a as i64);
        let g = match kind {
            GKind::Forward => gen_function(conf, ta)?,
            GKind::Bar => gen_function_bar(conf, ta)?,
        };
        acc += ta.powi(-(q as i32)) * g;
    }
    Ok(acc / n as f64)
}

/// Gram polynomial of the ladder:
///   forward: h_k(z) = sum_conf Gbar(conf, z_k) G(conf, z)
///   bar:     hbar_k(z) = sum_conf Gbar(conf, z) G(conf, z_k)
/// summed over charge-N configurations; both equal
/// β_{k,0}^{-1} prod_{l != k} (z - z_l).
pub fn h_poly(k_index: usize, dd: &DrinfeldData, kind: GKind) -> Result<CPolynomial> {
    if k_index >= dd.r {
        return Err(Error::Domain(format!(
            "mode index {k_index} out of range 0..{}",
            dd.r
        )));
    }
    let zk = dd.roots[k_index];
    let mut acc = CPolynomial::zero();
    for conf in enumerate_configs_with_charge(dd.n, dd.l, dd.n) {
        let g = g_poly(0, &conf, GKind::Forward)?;
        let gbar = g_poly(0, &conf, GKind::Bar)?;
        let term = match kind {
            GKind::Forward => g.scale(gbar.eval(zk)),
            GKind::Bar => gbar.scale(g.eval(zk)),
        };
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// The product form both Gram polynomials must equal.
pub fn h_product_form(k_index: usize, dd: &DrinfeldData) -> CPolynomial {
    let others: Vec<Complex64> = dd
        .roots
        .iter()
        .enumerate()
        .filter(|(l, _)| *l != k_index)
        .map(|(_, &z)| z)
        .collect();
    CPolynomial::from_roots(&others).scale(1.0 / dd.beta.beta(k_index, 0))
}

#[derive(Clone, Debug)]
pub struct GramReport {
    /// raw[m][k] = β_m β_k z_k sum_conf Gbar(conf, z_m) G(conf, z_k)
    pub raw: Vec<Vec<Complex64>>,
    /// max |raw[m][k] + δ_{mk}|
    pub max_residual: f64,
}

/// Bilinear Gram matrix of the ladder vectors; must equal -identity.
pub fn gram_check(dd: &DrinfeldData) -> Result<GramReport> {
    let r = dd.r;
    let configs = enumerate_configs_with_charge(dd.n, dd.l, dd.n);
    // per configuration, evaluate both ladders at every root
    let mut g_at = vec![vec![Complex64::new(0.0, 0.0); r]; configs.len()];
    let mut gbar_at = vec![vec![Complex64::new(0.0, 0.0); r]; configs.len()];
    for (ci, conf) in configs.iter().enumerate() {
        let g = g_poly(0, conf, GKind::Forward)?;
        let gbar = g_poly(0, conf, GKind::Bar)?;
        for (j, &z) in dd.roots.iter().enumerate() {
            g_at[ci][j] = g.eval(z);
            gbar_at[ci][j] = gbar.eval(z);
        }
    }
    let mut raw = vec![vec![Complex64::new(0.0, 0.0); r]; r];
    let mut max_residual = 0.0f64;
    for m in 0..r {
        for k in 0..r {
            let mut s = Complex64::new(0.0, 0.0);
            for ci in 0..configs.len() {
                s += gbar_at[ci][m] * g_at[ci][k];
            }
            let val = dd.beta.beta(m, 0) * dd.beta.beta(k, 0) * dd.roots[k] * s;
            raw[m][k] = val;
            let delta = if m == k { 1.0 } else { 0.0 };
            max_residual = max_residual.max((val + delta).norm());
        }
    }
    Ok(GramReport { raw, max_residual })
}

#[derive(Clone, Debug)]
pub struct LeadingCoeffReport {
    /// per mode: relative residual of the direct sum
    /// sum_conf ω^{-sum_m m n_m} G(conf, z_k) against -1/β_{k,0}
    pub direct: Vec<f64>,
    /// per mode: relative residual of the z^{r-1} coefficient of hbar_k
    /// against +1/β_{k,0}
    pub leading: Vec<f64>,
    /// per mode: relative residual of direct sum + leading coefficient
    pub cross: Vec<f64>,
}

/// Leading-coefficient limit of hbar_k, in both formulations.
///
/// The z^{r-1} coefficient equals +1/β_{k,0} (the product form is monic
/// times β^{-1}); the phase-weighted direct sum carries the opposite sign,
/// sum_conf ω^{-Σ m n_m} G(conf, z_k) = -1/β_{k,0}, because the top
/// coefficient of the conjugate ladder is -ω^{-Σ m n_m}.
pub fn leading_coeff_check(dd: &DrinfeldData) -> Result<LeadingCoeffReport> {
    let r = dd.r;
    let configs = enumerate_configs_with_charge(dd.n, dd.l, dd.n);
    let mut direct = Vec::with_capacity(r);
    let mut leading = Vec::with_capacity(r);
    let mut cross = Vec::with_capacity(r);
    for k in 0..r {
        let zk = dd.roots[k];
        let mut dsum = Complex64::new(0.0, 0.0);
        for conf in &configs {
            let g = g_poly(0, conf, GKind::Forward)?;
            dsum += omega_pow(dd.n, -conf.site_moment()) * g.eval(zk);
        }
        let target = 1.0 / dd.beta.beta(k, 0);
        let hbar = h_poly(k, dd, GKind::Bar)?;
        let lead = hbar.coeff(r - 1);
        let scale = target.norm().max(1e-300);
        direct.push((dsum + target).norm() / scale);
        leading.push((lead - target).norm() / scale);
        cross.push((dsum + lead).norm() / scale);
    }
    Ok(LeadingCoeffReport {
        direct,
        leading,
        cross,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::ModelConfig;
    use crate::drinfeld::build_drinfeld;
    use crate::tol;

    fn conf(n: u32, vals: &[u8]) -> EdgeConfig {
        EdgeConfig::new(vals.to_vec(), n).unwrap()
    }

    #[test]
    fn edge_config_sums() {
        let c = conf(3, &[2, 1, 0, 1]);
        assert_eq!(c.charge(), 4);
        assert_eq!(c.prefix_sums(), vec![0, 2, 3, 3]);
        assert_eq!(c.suffix_sums(), vec![2, 1, 1, 0]);
        assert_eq!(c.site_moment(), 8);
        let charge = c.charge();
        let pre = c.prefix_sums();
        let suf = c.suffix_sums();
        for j in 0..c.len() {
            assert_eq!(pre[j] + c.values()[j] as u32 + suf[j], charge);
        }
    }

    #[test]
    fn enumeration_counts() {
        // charge-3 configs with entries <= 2: 7 at L=3, 50 at L=6
        assert_eq!(enumerate_configs_with_charge(3, 3, 3).len(), 7);
        assert_eq!(enumerate_configs_with_charge(3, 6, 3).len(), 50);
        assert_eq!(enumerate_configs_with_charge(4, 4, 4).len(), 31);
    }

    #[test]
    fn k_coeff_base_cases() {
        let zeros = conf(3, &[0, 0, 0]);
        assert!((k_coeff(&zeros, 0) - 1.0).norm() < 1e-15);
        assert!((k_coeff(&zeros, 1) - 3.0).norm() < 1e-14);
        assert!((kbar_coeff(&zeros, 0) - 1.0).norm() < 1e-15);
        // all-zero config: prefix and suffix phases both vanish
        for m in 0..=6 {
            assert!((k_coeff(&zeros, m) - kbar_coeff(&zeros, m)).norm() < 1e-13);
        }
    }

    #[test]
    fn kbar_direct_enumeration_oracle() {
        // independent oracle: literal loop over all compositions
        let c = conf(3, &[2, 1, 0]);
        let n = 3u32;
        let suf = c.suffix_sums();
        for m in 0..=4u32 {
            let mut brute = Complex64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    for d in 0..n {
                        if a + b + d != m {
                            continue;
                        }
                        let parts = [a, b, d];
                        let mut w = Complex64::new(1.0, 0.0);
                        for j in 0..3 {
                            w *= gauss_binomial(
                                c.values()[j] as i64 + parts[j] as i64,
                                parts[j] as i64,
                                n,
                            ) * omega_pow(n, parts[j] as i64 * suf[j] as i64);
                        }
                        brute += w;
                    }
                }
            }
            assert!((kbar_coeff(&c, m) - brute).norm() < 1e-13, "m = {m}");
        }
    }

    #[test]
    fn gen_function_all_zeros() {
        // ((1-t^3)/(1-t))^3 = (1+t+t^2)^3; t coefficient is 3
        let zeros = conf(3, &[0, 0, 0]);
        let t = Complex64::new(0.1, 0.05);
        let g = gen_function(&zeros, t).unwrap();
        let poly = (Complex64::new(1.0, 0.0) + t + t * t).powu(3);
        assert!((g - poly).norm() < 1e-13);
        assert!((gen_function(&zeros, Complex64::new(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn gen_function_taylor_matches_k_coeff() {
        // series oracle: numerically differentiate via small-circle averaging
        let c = conf(3, &[1, 1, 1]);
        let radius = 0.15;
        let samples = 64usize;
        let mmax = 6u32; // (N-1)L - N = 3, padded to see zeros beyond
        let mut series = vec![Complex64::new(0.0, 0.0); mmax as usize + 1];
        for s in 0..samples {
            let t = Complex64::from_polar(radius, std::f64::consts::TAU * s as f64 / samples as f64);
            let g = gen_function(&c, t).unwrap();
            for (m, acc) in series.iter_mut().enumerate() {
                *acc += g * t.powi(-(m as i32)) / samples as f64;
            }
        }
        for m in 0..=mmax {
            let expect = k_coeff(&c, m);
            assert!(
                (series[m as usize] - expect).norm() < 1e-9,
                "m = {m}: {} vs {expect}",
                series[m as usize]
            );
        }
    }

    #[test]
    fn g_poly_sector_shape() {
        let c = conf(3, &[1, 1, 1]);
        let g = g_poly(0, &c, GKind::Forward).unwrap();
        assert!((g.coeff(0) - 1.0).norm() < 1e-15); // K_0 = 1
        assert!(g.degree() <= 1); // r - 1 = 1 at (3,3)
    }

    #[test]
    fn g_poly_closed_form_agreement() {
        // a-sum route vs coefficient route at random t, all charge-N configs
        for (n, l) in [(3u32, 3u32), (4, 4)] {
            for c in enumerate_configs_with_charge(n, l, n) {
                for (i, kind) in [GKind::Forward, GKind::Bar].into_iter().enumerate() {
                    let poly = g_poly(0, &c, kind).unwrap();
                    for s in 0..5 {
                        let t = Complex64::from_polar(
                            0.35 + 0.08 * s as f64,
                            0.9 * s as f64 + 0.3 + i as f64,
                        );
                        let closed = g_closed_eval(0, &c, kind, t).unwrap();
                        let z = t.powu(n);
                        assert!(
                            (poly.eval(z) - closed).norm() < tol::TOL_GSERIES,
                            "config {:?} kind {kind:?}",
                            c.values()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn g_poly_charge_zero_reproduces_p() {
        // full charge-0 ladder on the all-zero config = P(z) coefficients
        for (n, l) in [(3u32, 3u32), (4, 4), (3, 6)] {
            let zeros = EdgeConfig::new(vec![0u8; l as usize], n).unwrap();
            let g = g_poly(0, &zeros, GKind::Bar).unwrap();
            let p = crate::drinfeld::compute_p(n, l).unwrap();
            assert_eq!(g.degree(), p.len() - 1);
            for (i, &c) in p.iter().enumerate() {
                assert!((g.coeff(i) - c as f64).norm() < 1e-11 * c.max(1) as f64);
            }
        }
    }

    #[test]
    fn gbar_conjugation_at_real_t() {
        let c = conf(3, &[1, 0, 2, 0, 0, 0]);
        for s in 0..10 {
            let t = Complex64::new(0.05 + 0.06 * s as f64, 0.0);
            let z = t.powu(3);
            let g = g_poly(0, &c, GKind::Forward).unwrap().eval(z);
            let gbar = g_poly(0, &c, GKind::Bar).unwrap().eval(z);
            assert!((gbar - g.conj()).norm() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn q_one_ladder_matches_closed_form() {
        // nonzero spin-shift index on a charge-N config
        let c = conf(3, &[1, 1, 1]);
        let g = g_poly(1, &c, GKind::Forward).unwrap();
        for s in 0..4 {
            let t = Complex64::from_polar(0.3 + 0.1 * s as f64, 1.1 * s as f64 + 0.2);
            let closed = g_closed_eval(1, &c, GKind::Forward, t).unwrap();
            assert!((g.eval(t.powu(3)) - closed).norm() < 1e-10);
        }
    }

    #[test]
    fn h_poly_matches_product_form() {
        for (n, l) in [(3u32, 3u32), (4, 4)] {
            let dd = build_drinfeld(&ModelConfig::new(n, l, Complex64::new(0.3, 0.0))).unwrap();
            for k in 0..dd.r {
                let target = h_product_form(k, &dd);
                for kind in [GKind::Forward, GKind::Bar] {
                    let h = h_poly(k, &dd, kind).unwrap();
                    let scale = target.max_coeff_norm();
                    for i in 0..dd.r {
                        assert!(
                            (h.coeff(i) - target.coeff(i)).norm() < tol::TOL_HPOLY * scale,
                            "({n},{l}) mode {k} coeff {i} kind {kind:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn h_poly_vanishes_at_other_roots() {
        let dd = build_drinfeld(&ModelConfig::new(3, 3, Complex64::new(0.3, 0.0))).unwrap();
        for k in 0..dd.r {
            let h = h_poly(k, &dd, GKind::Forward).unwrap();
            for j in 0..dd.r {
                if j != k {
                    assert!(h.eval(dd.roots[j]).norm() < 1e-8);
                }
            }
            // value at the origin: -1/(β_k z_k)
            let expect = -1.0 / (dd.beta.beta(k, 0) * dd.roots[k]);
            assert!((h.eval(Complex64::new(0.0, 0.0)) - expect).norm() < 1e-8 * expect.norm());
        }
    }

    #[test]
    fn gram_is_minus_identity() {
        for (n, l) in [(3u32, 3u32), (4, 4)] {
            let dd = build_drinfeld(&ModelConfig::new(n, l, Complex64::new(0.3, 0.0))).unwrap();
            let rep = gram_check(&dd).unwrap();
            assert!(
                rep.max_residual < tol::TOL_GRAM,
                "({n},{l}): residual {}",
                rep.max_residual
            );
        }
    }

    #[test]
    fn gram_r1_single_entry() {
        let dd = build_drinfeld(&ModelConfig::new(2, 2, Complex64::new(0.3, 0.0))).unwrap();
        let rep = gram_check(&dd).unwrap();
        assert_eq!(rep.raw.len(), 1);
        assert!((rep.raw[0][0] + 1.0).norm() < 1e-12);
    }

    #[test]
    fn leading_coefficients() {
        for (n, l) in [(2u32, 2u32), (3, 3), (4, 4)] {
            let dd = build_drinfeld(&ModelConfig::new(n, l, Complex64::new(0.3, 0.0))).unwrap();
            let rep = leading_coeff_check(&dd).unwrap();
            for k in 0..dd.r {
                assert!(rep.direct[k] < tol::TOL_LEADING, "({n},{l}) direct {k}");
                assert!(rep.leading[k] < tol::TOL_LEADING, "({n},{l}) leading {k}");
                assert!(rep.cross[k] < tol::TOL_LEADING, "({n},{l}) cross {k}");
            }
        }
    }
}
