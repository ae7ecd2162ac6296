//! Shared fixtures for the pipeline benchmarks.

use num_complex::Complex64;
use potts_core::curve::{point_from_lambda, si_point, CurvePoint, ModelConfig};
use potts_core::drinfeld::{build_drinfeld, DrinfeldData};
use potts_core::transfer::{enumerate_basis, SectorBasis};

pub struct Fixture {
    pub cfg: ModelConfig,
    pub dd: DrinfeldData,
    pub basis: SectorBasis,
    pub p: CurvePoint,
    pub q: CurvePoint,
}

pub fn fixture(n: u32, l: u32, kprime: f64) -> Fixture {
    let kp = Complex64::new(kprime, 0.0);
    let cfg = ModelConfig::new(n, l, kp);
    let dd = build_drinfeld(&cfg).expect("drinfeld data");
    let basis = enumerate_basis(n, l).expect("basis");
    let p = si_point(kp, n).expect("vertical point");
    let q = point_from_lambda(kp, Complex64::new(1.7, 0.6), n).expect("horizontal point");
    Fixture { cfg, dd, basis, p, q }
}
