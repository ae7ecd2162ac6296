//! Acceptance suite: every exit criterion at its stated tolerance, one
//! pass/fail line per criterion (run with `--nocapture` to see them).

use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use potts_core::curve::{point_from_lambda, sample_lambda_q, si_point, ModelConfig};
use potts_core::drinfeld::{build_drinfeld, compute_p, functional_check};
use potts_core::gfun::{gram_check, h_poly, h_product_form, leading_coeff_check, GKind};
use potts_core::rotation::{build_rotation_set, factor_check};
use potts_core::sector::{
    charge_vanishing_check, element_checks, intertwine_full_check, ratio_checks, spectrum_match,
};
use potts_core::tol;
use potts_core::transfer::enumerate_basis;

const KP: Complex64 = Complex64::new(0.3, 0.0);
const KP44: Complex64 = Complex64::new(0.5, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

const CONFIGS: [(u32, u32, Complex64); 3] = [(3, 3, KP), (4, 4, KP44), (3, 6, KP)];

fn report(criterion: &str, ok: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn seeded_lambdas(n_samples: usize, kprime: Complex64, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_samples)
        .map(|_| sample_lambda_q(&mut rng, kprime, ONE))
        .collect()
}

#[test]
fn criterion_01_drinfeld_polynomial() {
    let t0 = Instant::now();
    let lam33 = compute_p(3, 3).unwrap();
    let dt33 = t0.elapsed();
    let ok33 = lam33 == vec![1, 7, 1];

    let mut sym_ok = true;
    let mut worst_dt = dt33;
    for (n, l) in [(4u32, 4u32), (3, 6)] {
        let t0 = Instant::now();
        let lam = compute_p(n, l).unwrap();
        worst_dt = worst_dt.max(t0.elapsed());
        let r = lam.len() - 1;
        sym_ok &= (0..=r).all(|i| lam[i] == lam[r - i]) && lam[0] == 1 && lam[r] == 1;
    }
    let fast = worst_dt.as_secs_f64() < 0.1;
    report(
        "01 drinfeld_polynomial",
        ok33 && sym_ok && fast,
        &format!("(3,3) = {lam33:?}, palindromic at (4,4)/(3,6), worst {worst_dt:?}"),
    );
}

#[test]
fn criterion_02_root_structure() {
    let mut worst_pair = 0.0f64;
    let mut worst_prod = 0.0f64;
    for (n, l, kp) in CONFIGS {
        let dd = build_drinfeld(&ModelConfig::new(n, l, kp)).unwrap();
        worst_pair = worst_pair.max(dd.pairing_residual);
        worst_prod = worst_prod.max(dd.root_product_residual());
    }
    report(
        "02 root_structure",
        worst_pair <= tol::TOL_PAIRING && worst_prod <= tol::TOL_ROOT_PRODUCT,
        &format!("pairing {worst_pair:.3e} <= 1e-10, product {worst_prod:.3e} <= 1e-10"),
    );
}

#[test]
fn criterion_03_newton_identities() {
    let mut worst = 0.0f64;
    for (n, l, kp) in CONFIGS {
        let dd = build_drinfeld(&ModelConfig::new(n, l, kp)).unwrap();
        let scale = dd.lambda_int.iter().map(|&c| c as f64).fold(0.0, f64::max);
        let res = potts_core::numerics::newton_identity_check(&dd.lambda, &dd.roots) / scale;
        worst = worst.max(res);
    }
    report(
        "03 newton_identities",
        worst <= tol::TOL_NEWTON,
        &format!("max scaled residual {worst:.3e} <= 1e-10"),
    );
}

#[test]
fn criterion_04_gram_orthogonality() {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for (n, l, kp) in [(3u32, 3u32, KP), (4, 4, KP44)] {
        let dd = build_drinfeld(&ModelConfig::new(n, l, kp)).unwrap();
        worst = worst.max(gram_check(&dd).unwrap().max_residual);
    }
    let dt = t0.elapsed();
    report(
        "04 gram_orthogonality",
        worst <= tol::TOL_GRAM && dt.as_secs_f64() < 1.0,
        &format!("max residual {worst:.3e} <= 1e-8 in {dt:?}"),
    );
}

#[test]
fn criterion_05_gram_polynomials() {
    let mut worst_coeff = 0.0f64;
    let mut worst_lead = 0.0f64;
    for (n, l, kp) in [(3u32, 3u32, KP), (4, 4, KP44)] {
        let dd = build_drinfeld(&ModelConfig::new(n, l, kp)).unwrap();
        for k in 0..dd.r {
            let target = h_product_form(k, &dd);
            let scale = target.max_coeff_norm();
            for kind in [GKind::Forward, GKind::Bar] {
                let h = h_poly(k, &dd, kind).unwrap();
                for i in 0..dd.r {
                    worst_coeff =
                        worst_coeff.max((h.coeff(i) - target.coeff(i)).norm() / scale);
                }
            }
        }
        let lead = leading_coeff_check(&dd).unwrap();
        for k in 0..dd.r {
            worst_lead = worst_lead
                .max(lead.direct[k])
                .max(lead.leading[k])
                .max(lead.cross[k]);
        }
    }
    report(
        "05 gram_polynomials",
        worst_coeff <= tol::TOL_HPOLY && worst_lead <= tol::TOL_LEADING,
        &format!("coefficients {worst_coeff:.3e} <= 1e-8, leading {worst_lead:.3e} <= 1e-10"),
    );
}

#[test]
fn criterion_06_closed_form_elements() {
    let mut worst = 0.0f64;
    let mut worst_vanish = 0.0f64;
    for (n, l, kp, samples) in [(3u32, 3u32, KP, 5usize), (4, 4, KP44, 2)] {
        let dd = build_drinfeld(&ModelConfig::new(n, l, kp)).unwrap();
        let basis = enumerate_basis(n, l).unwrap();
        let p = si_point(kp, n).unwrap();
        for lam in seeded_lambdas(samples, kp, 42) {
            let q = point_from_lambda(kp, lam, n).unwrap();
            for chk in element_checks(&dd, &basis, &p, &q).unwrap() {
                worst = worst.max(chk.residual);
            }
            worst_vanish = worst_vanish.max(charge_vanishing_check(&basis, &p, &q).unwrap());
        }
    }
    report(
        "06 closed_form_elements",
        worst <= tol::TOL_ELEMENTS && worst_vanish <= tol::TOL_VANISHING,
        &format!("elements {worst:.3e} <= 1e-10, vanishing {worst_vanish:.3e} <= 1e-12"),
    );
}

#[test]
fn criterion_07_ratio_identities() {
    let mut worst = 0.0f64;
    for (n, l, kp) in [(3u32, 3u32, KP), (4, 4, KP44)] {
        let dd = build_drinfeld(&ModelConfig::new(n, l, kp)).unwrap();
        let basis = enumerate_basis(n, l).unwrap();
        let p = si_point(kp, n).unwrap();
        for lam in seeded_lambdas(5, kp, 43) {
            let q = point_from_lambda(kp, lam, n).unwrap();
            for res in ratio_checks(&dd, &basis, &p, &q).unwrap() {
                worst = worst.max(res.residual);
            }
        }
    }
    report(
        "07 ratio_identities",
        worst <= tol::TOL_RATIO,
        &format!("max relative residual {worst:.3e} <= 1e-8"),
    );
}

#[test]
fn criterion_08_functional_relation() {
    let mut worst_rel = 0.0f64;
    let mut worst_dev = 0.0f64;
    for (n, l, kp) in CONFIGS {
        let dd = build_drinfeld(&ModelConfig::new(n, l, kp)).unwrap();
        for lam in seeded_lambdas(5, kp, 44) {
            let rep = functional_check(&dd, lam).unwrap();
            worst_rel = worst_rel.max(rep.residual_rel);
            worst_dev = worst_dev.max(rep.pattern_deviation);
        }
    }
    report(
        "08 functional_relation",
        worst_rel <= tol::TOL_FUNCTIONAL && worst_dev <= tol::TOL_PATTERN_INDEP,
        &format!("relation {worst_rel:.3e} <= 1e-8, pattern spread {worst_dev:.3e} <= 1e-12"),
    );
}

#[test]
fn criterion_09_spectral_inclusion() {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    let mut total_patterns = 0usize;
    for (n, l, kp) in CONFIGS {
        let dd = build_drinfeld(&ModelConfig::new(n, l, kp)).unwrap();
        let basis = enumerate_basis(n, l).unwrap();
        let p = si_point(kp, n).unwrap();
        let lam = seeded_lambdas(1, kp, 45)[0];
        let q = point_from_lambda(kp, lam, n).unwrap();
        let frame = spectrum_match(&dd, &basis, &p, &q).unwrap();
        assert!(!frame.degenerate_q, "({n},{l}): degenerate sample");
        assert!(
            frame.entries.iter().all(|e| !e.collision),
            "({n},{l}): collision in matching"
        );
        total_patterns += frame.entries.len();
        worst = worst.max(frame.max_rel_err);
        assert!(
            (frame.c_estimate - ONE).norm() < 1e-6,
            "({n},{l}): c = {}",
            frame.c_estimate
        );
    }
    let dt = t0.elapsed();
    report(
        "09 spectral_inclusion",
        worst <= tol::TOL_SPECTRUM && dt.as_secs_f64() < 10.0 && total_patterns == 4 + 8 + 16,
        &format!("{total_patterns} analytic squares matched, worst {worst:.3e} <= 1e-6, {dt:?}"),
    );
}

#[test]
fn criterion_10_rotation_suite() {
    let mut worst = 0.0f64;
    let mut worst_q_indep = 0.0f64;
    for (n, l, kp) in CONFIGS {
        let dd = build_drinfeld(&ModelConfig::new(n, l, kp)).unwrap();
        let set = build_rotation_set(&dd).unwrap();
        for lam in seeded_lambdas(5, kp, 46) {
            let q = point_from_lambda(kp, lam, n).unwrap();
            for mode in &set.modes {
                worst = worst.max(factor_check(&dd, mode, &q).unwrap().max());
            }
        }
        // the rotations carry no q dependence: re-solving must reproduce them
        let again = build_rotation_set(&dd).unwrap();
        for (a, b) in set.modes.iter().zip(&again.modes) {
            worst_q_indep = worst_q_indep
                .max(a.s.sub(&b.s).norm() / a.s.norm())
                .max(a.r.sub(&b.r).norm() / a.r.norm());
        }
    }
    report(
        "10 rotation_suite",
        worst <= tol::TOL_ROTATION && worst_q_indep <= tol::TOL_ROTATION,
        &format!("identities {worst:.3e} <= 1e-9, q-independence {worst_q_indep:.3e} <= 1e-9"),
    );
}

#[test]
fn criterion_11_intertwining() {
    let mut worst = 0.0f64;
    for (n, l, kp) in [(3u32, 3u32, KP), (4, 4, KP44)] {
        let dd = build_drinfeld(&ModelConfig::new(n, l, kp)).unwrap();
        let basis = enumerate_basis(n, l).unwrap();
        let p = si_point(kp, n).unwrap();
        let set = build_rotation_set(&dd).unwrap();
        for lam in seeded_lambdas(2, kp, 47) {
            let q = point_from_lambda(kp, lam, n).unwrap();
            let rep = intertwine_full_check(&dd, &set, &basis, &p, &q).unwrap();
            worst = worst.max(rep.max_residual);
            assert_eq!(rep.per_pattern.len(), 1 << dd.r);
        }
    }
    report(
        "11 intertwining",
        worst <= tol::TOL_INTERTWINE,
        &format!("all patterns, three identities each, worst {worst:.3e} <= 1e-7"),
    );
}
