//! Superintegrable N-state chiral Potts model, ground-state sector (Q = 0):
//! dense transfer matrices over the edge-variable basis, the Drinfeld
//! polynomial and its analytic spectrum, explicit ladder eigenvectors, the
//! mode-factorized rotation operators, and brute-force verification of the
//! identities connecting them — all at desk scale.
//!
//! The crate is organized around the verification pipeline:
//!
//! - [`numerics`]: ω-deformed combinatorial scalars, complex polynomials,
//!   root extraction, Vandermonde/Lagrange inversion.
//! - [`curve`]: rapidity points (x, y, μ) on the chiral Potts curve.
//! - [`drinfeld`]: P(z), root pairing, mode angles θ_j, analytic eigenvalues.
//! - [`gfun`]: constrained ω-binomial sums, ladder polynomials G/Gbar, Gram
//!   polynomials h_k and their closed forms.
//! - [`transfer`]: dense construction of the two transfer-matrix families
//!   over the charge-0 edge basis.
//! - [`sector`]: explicit ground-sector vectors, spectral matching, ratio
//!   identities, end-to-end intertwining.
//! - [`rotation`]: per-mode 2x2 rotation solutions and the assembled
//!   2^r-dimensional representation.

pub mod curve;
pub mod drinfeld;
pub mod eigen;
pub mod error;
pub mod gfun;
pub mod numerics;
pub mod rotation;
pub mod sector;
pub mod tol;
pub mod transfer;

pub use curve::{CurvePoint, ModelConfig, Tolerances};
pub use drinfeld::DrinfeldData;
pub use error::{Error, Result};
pub use gfun::EdgeConfig;
pub use numerics::{BetaMatrix, CPolynomial};
pub use sector::{SectorFrame, SectorVector, SpinPattern};
pub use transfer::{SectorBasis, TransferMatrix};
