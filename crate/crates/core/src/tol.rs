//! Central tolerance constants used by the verification checks.
//!
//! Each constant is the threshold a named identity check is asserted at;
//! the per-check choice balances double-precision rounding against the
//! depth of the computation chain (polynomial root extraction, Gram sums
//! over configuration sets, dense non-Hermitian eigendecomposition).

/// Polynomial root residual scale: |p(z)| <= TOL_ROOT * max|coeff| * max(1,|z|)^deg.
pub const TOL_ROOT: f64 = 1e-12;

/// Root pairing z_m * z_{m*} = 1 residual.
pub const TOL_PAIRING: f64 = 1e-10;

/// Product-of-roots normalization prod(-z_l) = 1.
pub const TOL_ROOT_PRODUCT: f64 = 1e-10;

/// Newton power-sum identities n*L_n = sum d_j L_{n-j}, scaled by max|L|.
pub const TOL_NEWTON: f64 = 1e-10;

/// Vandermonde inversion orthogonality (both relations), r <= 8.
pub const TOL_VDM: f64 = 1e-11;

/// omega-binomial reflection identity, exact arithmetic up to rounding.
pub const TOL_SFACTOR: f64 = 1e-13;

/// On-curve constraint residuals for constructed rapidity points.
pub const TOL_CURVE: f64 = 1e-12;

/// Weight periodicity W(n+N)/W(n) = 1 on-curve.
pub const TOL_PERIODICITY: f64 = 1e-12;

/// Gram orthogonality of the ladder vectors.
pub const TOL_GRAM: f64 = 1e-8;

/// Gram polynomial h_k coefficientwise match to the product form.
pub const TOL_HPOLY: f64 = 1e-8;

/// Leading-coefficient limit of hbar_k (relative).
pub const TOL_LEADING: f64 = 1e-10;

/// Generating-function route vs coefficient route for G polynomials.
pub const TOL_GSERIES: f64 = 1e-10;

/// Closed-form matrix elements vs brute-force contractions (relative).
pub const TOL_ELEMENTS: f64 = 1e-10;

/// Charge-sector selection rules: forbidden entries, scaled by matrix norm.
pub const TOL_VANISHING: f64 = 1e-12;

/// Translation invariance commutator, scaled by matrix norm.
pub const TOL_TRANSLATION: f64 = 1e-10;

/// Commuting-family commutator, scaled by the product of norms.
pub const TOL_COMMUTING: f64 = 1e-8;

/// Matrix-element ratio identities (relative).
pub const TOL_RATIO: f64 = 1e-8;

/// Functional relation for the eigenvalue product (relative).
pub const TOL_FUNCTIONAL: f64 = 1e-8;

/// Spin-pattern independence of the eigenvalue product (relative).
pub const TOL_PATTERN_INDEP: f64 = 1e-12;

/// Analytic eigenvalue squares located in the numeric spectrum (relative).
pub const TOL_SPECTRUM: f64 = 1e-6;

/// Rotation-algebra identity residuals (relative, operand-scaled).
pub const TOL_ROTATION: f64 = 1e-9;

/// End-to-end intertwining residuals, scaled by ||T|| * ||X||.
pub const TOL_INTERTWINE: f64 = 1e-7;

/// Hard cap on the sector dimension N^(L-1).
pub const BASIS_CAP: usize = 100_000;

/// Minimum separation treated as a distinct-root guarantee.
pub const TOL_ROOT_SEPARATION: f64 = 1e-8;
