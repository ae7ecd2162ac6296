//! Per-mode rotation algebra and the assembled 2^r representation.
//!
//! In the mode basis (index 0 = ξ = +1, index 1 = ξ = -1) the generators are
//! H = diag(1, -1), E+ = upper matrix unit, E- = lower matrix unit. Each mode
//! carries scalars (X, Y, Z) linear in 1/λ_q, 2x2 matrices M and N with unit
//! determinant, and rotations S_j, R_j = (S_j^{-1})^T solving
//!
//!   S_j (cosh θ_j 1 - sinh θ_j H) R_j^{-1} =  M,
//!   S_j (cosh θ_j 1 + sinh θ_j H) R_j^{-1} = -N,
//!
//! so that S_j (A_j - H B_j) R_j^{-1} = X_j - H Y_j + (E+ + E-) Z_j.
//!
//! The per-mode scale ε_j is fixed by the algebra only up to sign, and the
//! 2^r product representation reproduces the lattice transfer matrix only up
//! to one measurable constant κ with κ^2 = (-1)^r / λ_p^r: the Ω-row closed
//! forms pin |κ| = 1 and its phase. κ is computed here exactly, canonicalized
//! by an ε sign flip when possible (even r), and reported; the sector
//! intertwining carries it explicitly.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::curve::CurvePoint;
use crate::drinfeld::{ab_values, DrinfeldData};
use crate::error::{Error, Result};

/// Minimal dense complex 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C2 {
    pub a: [[Complex64; 2]; 2],
}

impl C2 {
    pub fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        C2 {
            a: [[a11, a12], [a21, a22]],
        }
    }

    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        C2::new(z, z, z, z)
    }

    pub fn identity() -> Self {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        C2::new(o, z, z, o)
    }

    pub fn diag(d1: Complex64, d2: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        C2::new(d1, z, z, d2)
    }

    pub fn mul(&self, other: &C2) -> C2 {
        let mut out = C2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.a[i][j] = self.a[i][0] * other.a[0][j] + self.a[i][1] * other.a[1][j];
            }
        }
        out
    }

    pub fn det(&self) -> Complex64 {
        self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0]
    }

    pub fn inverse(&self) -> Result<C2> {
        let d = self.det();
        if d.norm() < 1e-300 {
            return Err(Error::Domain("singular 2x2 matrix".into()));
        }
        Ok(C2::new(
            self.a[1][1] / d,
            -self.a[0][1] / d,
            -self.a[1][0] / d,
            self.a[0][0] / d,
        ))
    }

    pub fn transpose(&self) -> C2 {
        C2::new(self.a[0][0], self.a[1][0], self.a[0][1], self.a[1][1])
    }

    pub fn scale(&self, s: Complex64) -> C2 {
        C2::new(
            self.a[0][0] * s,
            self.a[0][1] * s,
            self.a[1][0] * s,
            self.a[1][1] * s,
        )
    }

    pub fn sub(&self, other: &C2) -> C2 {
        C2::new(
            self.a[0][0] - other.a[0][0],
            self.a[0][1] - other.a[0][1],
            self.a[1][0] - other.a[1][0],
            self.a[1][1] - other.a[1][1],
        )
    }

    pub fn add(&self, other: &C2) -> C2 {
        C2::new(
            self.a[0][0] + other.a[0][0],
            self.a[0][1] + other.a[0][1],
            self.a[1][0] + other.a[1][0],
            self.a[1][1] + other.a[1][1],
        )
    }

    pub fn norm(&self) -> f64 {
        self.a
            .iter()
            .flatten()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// ε_j pair: returns (ε̄_j, ε_j) with k'(1/z_j - 1) λ_p ε̄_j² = 1 and
/// ε_j = ρ ε̄_j, principal square roots.
pub fn epsilon(dd: &DrinfeldData, j: usize) -> Result<(Complex64, Complex64)> {
    let z = dd.roots[j];
    if (z - 1.0).norm() < 1e-10 {
        return Err(Error::SingularMode {
            j,
            reason: "z_j = 1 makes the mode scale ε_j singular".into(),
        });
    }
    let denom = dd.kprime * (1.0 / z - 1.0) * dd.lambda_p;
    let eps_bar = (1.0 / denom).sqrt();
    Ok((eps_bar, dd.rho * eps_bar))
}

/// The mode matrices M and N with unit determinant.
pub fn mn_matrices(dd: &DrinfeldData, j: usize, eps_bar: Complex64) -> (C2, C2) {
    let z = dd.roots[j];
    let kp = dd.kprime;
    let lp = dd.lambda_p;
    let m = C2::new(
        -eps_bar * kp * lp / z,
        -eps_bar * kp * lp,
        -eps_bar * kp * lp,
        eps_bar * (z - 1.0 - kp * z * lp),
    );
    let n = C2::new(
        eps_bar * (lp / z - lp + kp),
        eps_bar * kp,
        eps_bar * kp,
        eps_bar * kp,
    );
    (m, n)
}

/// Solve for (S_j, R_j): s22 is the principal root of T*_22 / (2 sinh 2θ),
/// the remaining entries follow, and R_j is the transpose of the inverse.
pub fn solve_rotations(
    dd: &DrinfeldData,
    j: usize,
    m: &C2,
    n: &C2,
) -> Result<(C2, C2)> {
    let theta = dd.theta[j];
    let sinh2 = (theta * 2.0).sinh();
    if sinh2.norm() < 1e-12 {
        return Err(Error::SingularMode {
            j,
            reason: "sinh 2θ_j = 0: rotation degenerate".into(),
        });
    }
    let ep = theta.exp();
    let em = (-theta).exp();
    let t_star_22 = m.a[1][1] * ep + n.a[1][1] * em;
    let t_star_12 = m.a[0][1] * ep + n.a[0][1] * em;
    if t_star_22.norm() < 1e-12 {
        return Err(Error::SingularMode {
            j,
            reason: "T*_22 = 0: s_22 undefined".into(),
        });
    }
    let s22 = (t_star_22 / (2.0 * sinh2)).sqrt();
    let s12 = t_star_12 / t_star_22 * s22;
    if s12.norm() < 1e-300 {
        return Err(Error::SingularMode {
            j,
            reason: "s_12 = 0: s_21 undefined".into(),
        });
    }
    let e2p = (theta * 2.0).exp();
    let e2m = (theta * -2.0).exp();
    let s21 = (e2m - dd.kprime) / (2.0 * s12 * sinh2);
    let s11 = (e2p - dd.kprime) / (2.0 * s22 * sinh2);
    let s = C2::new(s11, s12, s21, s22);
    let r = C2::new(s22, -s21, -s12, s11);
    Ok((s, r))
}

/// One solved mode.
#[derive(Clone, Debug)]
pub struct ModeMatrices {
    pub j: usize,
    pub theta: Complex64,
    pub eps_bar: Complex64,
    pub eps: Complex64,
    pub m: C2,
    pub nmat: C2,
    pub s: C2,
    pub r: C2,
}

/// All modes plus the lattice-representation constant κ.
#[derive(Clone, Debug)]
pub struct RotationSet {
    pub modes: Vec<ModeMatrices>,
    /// <Ω|T|Ω> closed form divided by prod_j (X_j + Y_j); λ_q-independent.
    pub kappa: Complex64,
    /// Mode whose ε sign was flipped to canonicalize κ, if any.
    pub flipped: Option<usize>,
}

fn kappa_from_eps(dd: &DrinfeldData, eps_prod: Complex64) -> Complex64 {
    // <Ω|T_0|Ω> = N^{1-L/2} y_p^{rN} P(w) and prod(X_j+Y_j) =
    // prod(ε_j) k^r y_p^{rN} (-1)^r P(w), so κ = N^{1-L/2} / (prod ε · k^r (-1)^r).
    let sign = if dd.r.is_multiple_of(2) { 1.0 } else { -1.0 };
    (dd.n as f64).powf(1.0 - dd.l as f64 / 2.0)
        / (eps_prod * dd.k.powu(dd.r as u32) * sign)
}

/// Build every mode and canonicalize the ε signs: at even r the sign of one
/// ε can always bring κ to +1; at odd r κ stays at ±i and is reported.
pub fn build_rotation_set(dd: &DrinfeldData) -> Result<RotationSet> {
    let mut modes = Vec::with_capacity(dd.r);
    for j in 0..dd.r {
        let (eps_bar, eps) = epsilon(dd, j)?;
        let (m, nmat) = mn_matrices(dd, j, eps_bar);
        let (s, r) = solve_rotations(dd, j, &m, &nmat)?;
        modes.push(ModeMatrices {
            j,
            theta: dd.theta[j],
            eps_bar,
            eps,
            m,
            nmat,
            s,
            r,
        });
    }
    let eps_prod: Complex64 = modes.iter().map(|m| m.eps).product();
    let mut kappa = kappa_from_eps(dd, eps_prod);
    let mut flipped = None;
    let needs_flip = if dd.r.is_multiple_of(2) {
        kappa.re < 0.0
    } else {
        kappa.im < 0.0
    };
    if needs_flip {
        let j = dd.r - 1;
        let mm = &mut modes[j];
        mm.eps_bar = -mm.eps_bar;
        mm.eps = -mm.eps;
        let (m, nmat) = mn_matrices(dd, j, mm.eps_bar);
        let (s, r) = solve_rotations(dd, j, &m, &nmat)?;
        mm.m = m;
        mm.nmat = nmat;
        mm.s = s;
        mm.r = r;
        kappa = -kappa;
        flipped = Some(j);
    }
    Ok(RotationSet {
        modes,
        kappa,
        flipped,
    })
}

/// (X_j, Y_j, Z_j) of the forward transfer matrix at q.
pub fn xyz(dd: &DrinfeldData, mode: &ModeMatrices, q: &CurvePoint) -> (Complex64, Complex64, Complex64) {
    let z = dd.roots[mode.j];
    let eps = mode.eps;
    let k = dd.k;
    let ypn = vertical_y_n(dd);
    let xpn = vertical_x_n(dd);
    let sum = eps * k * (ypn * z - q.x_n());
    let diff = eps * dd.lambda_p / q.lambda * k * (q.y_n() / z - xpn);
    let zval = eps * k * (ypn - q.x_n());
    ((sum + diff) / 2.0, (sum - diff) / 2.0, zval)
}

/// (X̄_j, Ȳ_j, Z̄_j) of That(y_q, x_q): linear in λ_q.
pub fn xyz_bar(dd: &DrinfeldData, mode: &ModeMatrices, q: &CurvePoint) -> (Complex64, Complex64, Complex64) {
    let z = dd.roots[mode.j];
    let eps = mode.eps;
    let k = dd.k;
    let xpn = vertical_x_n(dd);
    let ypn = vertical_y_n(dd);
    let sum = eps * dd.lambda_p * k * (xpn - q.y_n() / z);
    let diff = eps * q.lambda * k * (q.x_n() - ypn * z);
    let zval = -eps * dd.lambda_p * k * (xpn - q.y_n());
    ((sum + diff) / 2.0, (sum - diff) / 2.0, zval)
}

/// (X'_j, Y'_j, Z'_j) of That(x_q, y_q): linear in 1/λ_q.
pub fn xyz_prime(dd: &DrinfeldData, mode: &ModeMatrices, q: &CurvePoint) -> (Complex64, Complex64, Complex64) {
    let z = dd.roots[mode.j];
    let eps = mode.eps;
    let k = dd.k;
    let xpn = vertical_x_n(dd);
    let ypn = vertical_y_n(dd);
    let sum = eps * dd.lambda_p * k * (xpn - q.x_n() / z);
    let diff = eps / q.lambda * k * (q.y_n() - ypn * z);
    let zval = -eps * dd.lambda_p * k * (xpn - q.x_n());
    ((sum + diff) / 2.0, (sum - diff) / 2.0, zval)
}

fn vertical_x_n(dd: &DrinfeldData) -> Complex64 {
    (Complex64::new(1.0, 0.0) - dd.kprime / dd.lambda_p) / dd.k
}

fn vertical_y_n(dd: &DrinfeldData) -> Complex64 {
    (Complex64::new(1.0, 0.0) - dd.kprime * dd.lambda_p) / dd.k
}

/// 2x2 factor X·1 - Y·H + Z·(E+ + E-) = [[X-Y, Z], [Z, X+Y]].
pub fn mode_factor(x: Complex64, y: Complex64, z: Complex64) -> C2 {
    C2::new(x - y, z, z, x + y)
}

/// Residuals of the per-mode identities at a horizontal point q; every entry
/// is scaled by the magnitude of the operands it compares.
#[derive(Clone, Debug)]
pub struct FactorReport {
    pub so_srj: f64,
    pub so_srf: f64,
    pub transfer_fwd: f64,
    pub transfer_hat_yx: f64,
    pub transfer_hat_xy: f64,
    pub invdet: f64,
    pub consist: f64,
    pub lam_theta: f64,
    pub sj3: f64,
    pub tid: f64,
    pub srj4: f64,
    pub z_two_forms: f64,
    pub det_s: f64,
    pub det_r: f64,
    pub r_is_transposed_inverse: f64,
    pub mn_dets: f64,
}

impl FactorReport {
    pub fn max(&self) -> f64 {
        [
            self.so_srj,
            self.so_srf,
            self.transfer_fwd,
            self.transfer_hat_yx,
            self.transfer_hat_xy,
            self.invdet,
            self.consist,
            self.lam_theta,
            self.sj3,
            self.tid,
            self.srj4,
            self.z_two_forms,
            self.det_s,
            self.det_r,
            self.r_is_transposed_inverse,
            self.mn_dets,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn factor_check(dd: &DrinfeldData, mode: &ModeMatrices, q: &CurvePoint) -> Result<FactorReport> {
    let theta = mode.theta;
    let one = Complex64::new(1.0, 0.0);
    let ch = theta.cosh();
    let sh = theta.sinh();
    let r_inv = mode.r.inverse()?;
    let s_inv = mode.s.inverse()?;

    // S (ch 1 ∓ sh H) R^{-1} = M / -N
    let lhs_m = mode.s.mul(&C2::diag(ch - sh, ch + sh)).mul(&r_inv);
    let lhs_n = mode.s.mul(&C2::diag(ch + sh, ch - sh)).mul(&r_inv);
    let so_srj = (lhs_m.sub(&mode.m).norm() / mode.m.norm().max(1.0))
        .max(lhs_n.add(&mode.nmat).norm() / mode.nmat.norm().max(1.0));

    // R (ch 1 - sh H) S^{-1} = -N^{-1}, R (ch 1 + sh H) S^{-1} = M^{-1}
    let m_inv = mode.m.inverse()?;
    let n_inv = mode.nmat.inverse()?;
    let lhs_f1 = mode.r.mul(&C2::diag(ch - sh, ch + sh)).mul(&s_inv);
    let lhs_f2 = mode.r.mul(&C2::diag(ch + sh, ch - sh)).mul(&s_inv);
    let so_srf = (lhs_f1.add(&n_inv).norm() / n_inv.norm().max(1.0))
        .max(lhs_f2.sub(&m_inv).norm() / m_inv.norm().max(1.0));

    // transfer factor identities at q
    let (a, b) = ab_values(dd, mode.j, q.lambda);
    let (ab_bar_a, ab_bar_b) = ab_values(dd, mode.j, 1.0 / q.lambda);
    let (x, y, z) = xyz(dd, mode, q);
    let (xb, yb, zb) = xyz_bar(dd, mode, q);
    let (xp, yp, zp) = xyz_prime(dd, mode, q);

    let fwd_lhs = mode.s.mul(&C2::diag(a - b, a + b)).mul(&r_inv);
    let fwd_rhs = mode_factor(x, y, z);
    let transfer_fwd = fwd_lhs.sub(&fwd_rhs).norm() / fwd_rhs.norm().max(1.0);

    let hat_yx_lhs = mode
        .r
        .mul(&C2::diag(ab_bar_a - ab_bar_b, ab_bar_a + ab_bar_b))
        .mul(&s_inv);
    let hat_yx_rhs = mode_factor(xb, yb, zb);
    let transfer_hat_yx = hat_yx_lhs.sub(&hat_yx_rhs).norm() / hat_yx_rhs.norm().max(1.0);

    let hat_xy_lhs = mode.r.mul(&C2::diag(a - b, a + b)).mul(&s_inv);
    let hat_xy_rhs = mode_factor(xp, yp, zp);
    let transfer_hat_xy = hat_xy_lhs.sub(&hat_xy_rhs).norm() / hat_xy_rhs.norm().max(1.0);

    // determinant invariant X² - Y² - Z² = A² - B²
    let lhs_d = x * x - y * y - z * z;
    let rhs_d = a * a - b * b;
    let invdet = (lhs_d - rhs_d).norm() / rhs_d.norm().max(1.0);

    // consistency: 2 cosh 2θ = 2 m12 n12 - m11 n22 - m22 n11
    let c2 = (theta * 2.0).cosh() * 2.0;
    let rhs_c = 2.0 * mode.m.a[0][1] * mode.nmat.a[0][1]
        - mode.m.a[0][0] * mode.nmat.a[1][1]
        - mode.m.a[1][1] * mode.nmat.a[0][0];
    let consist = (c2 - rhs_c).norm() / c2.norm().max(1.0);

    // λ_p + 1/λ_p = 2 cosh 2θ / z - (k' + 1/k')(1/z - 1)
    let zr = dd.roots[mode.j];
    let lam_lhs = dd.lambda_p + 1.0 / dd.lambda_p;
    let lam_rhs = c2 / zr - (dd.kprime + 1.0 / dd.kprime) * (1.0 / zr - one);
    let lam_theta = (lam_lhs - lam_rhs).norm() / lam_lhs.norm().max(1.0);

    // product identities for the rotation entries
    let e2p = (theta * 2.0).exp();
    let e2m = (theta * -2.0).exp();
    let sinh2 = (theta * 2.0).sinh();
    let sj3_1 = mode.s.a[0][0] * mode.s.a[1][1] - (e2p - dd.kprime) / (2.0 * sinh2);
    let sj3_2 = mode.s.a[0][1] * mode.s.a[1][0] - (e2m - dd.kprime) / (2.0 * sinh2);
    let sj3 = sj3_1.norm().max(sj3_2.norm());

    // T/T* identities
    let ep = theta.exp();
    let em = (-theta).exp();
    let t = |i: usize, k: usize| mode.m.a[i][k] * em + mode.nmat.a[i][k] * ep;
    let ts = |i: usize, k: usize| mode.m.a[i][k] * ep + mode.nmat.a[i][k] * em;
    let tid1 = t(0, 1) * ts(0, 1) + (e2m - dd.kprime) * (e2p - dd.kprime);
    let tid2 = t(0, 0) * ts(1, 1) + (e2p - dd.kprime) * (e2p - dd.kprime);
    let tid3 = t(1, 1) * ts(0, 0) + (e2m - dd.kprime) * (e2m - dd.kprime);
    let tid_scale = (e2p - dd.kprime).norm_sqr().max(1.0);
    let tid = tid1.norm().max(tid2.norm()).max(tid3.norm()) / tid_scale;

    // single free parameter: r22/s22 = -T11/(e^{2θ} - k') = (e^{2θ} - k')/T*22
    let ratio = mode.r.a[1][1] / mode.s.a[1][1];
    let srj4_1 = ratio + t(0, 0) / (e2p - dd.kprime);
    let srj4_2 = ratio - (e2p - dd.kprime) / ts(1, 1);
    let srj4 = srj4_1.norm().max(srj4_2.norm()) / ratio.norm().max(1.0);

    // both closed forms of Z_j agree on-curve
    let z_alt = mode.eps * dd.lambda_p / q.lambda * dd.k * (q.y_n() - vertical_x_n(dd));
    let z_two_forms = (z - z_alt).norm() / z.norm().max(1.0);

    let det_s = (mode.s.det() - one).norm();
    let det_r = (mode.r.det() - one).norm();
    let r_expect = mode.s.inverse()?.transpose();
    let r_is_transposed_inverse = mode.r.sub(&r_expect).norm() / r_expect.norm().max(1.0);
    let mn_dets = (mode.m.det() - one).norm().max((mode.nmat.det() - one).norm());

    Ok(FactorReport {
        so_srj,
        so_srf,
        transfer_fwd,
        transfer_hat_yx,
        transfer_hat_xy,
        invdet,
        consist,
        lam_theta,
        sj3,
        tid,
        srj4,
        z_two_forms,
        det_s,
        det_r,
        r_is_transposed_inverse,
        mn_dets,
    })
}

fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

fn c2_to_dmatrix(m: &C2) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[m.a[0][0], m.a[0][1], m.a[1][0], m.a[1][1]])
}

/// Assembled 2^r representation at q: the three transfer factors plus the
/// rotation products, mode 1 as the most significant pattern bit.
#[derive(Clone, Debug)]
pub struct AssembledReps {
    pub t_rep: DMatrix<Complex64>,
    pub that_xy_rep: DMatrix<Complex64>,
    pub that_yx_rep: DMatrix<Complex64>,
    pub r_rep: DMatrix<Complex64>,
    pub s_rep: DMatrix<Complex64>,
    /// diag over patterns of prod_j (A_j - ξ_j B_j)
    pub eig_diag: DMatrix<Complex64>,
    pub eig_diag_inv_lambda: DMatrix<Complex64>,
}

pub fn assemble_sector(dd: &DrinfeldData, set: &RotationSet, q: &CurvePoint) -> Result<AssembledReps> {
    let mut t_rep = DMatrix::<Complex64>::identity(1, 1);
    let mut that_xy = DMatrix::<Complex64>::identity(1, 1);
    let mut that_yx = DMatrix::<Complex64>::identity(1, 1);
    let mut r_rep = DMatrix::<Complex64>::identity(1, 1);
    let mut s_rep = DMatrix::<Complex64>::identity(1, 1);
    let mut d_a = DMatrix::<Complex64>::identity(1, 1);
    let mut d_abar = DMatrix::<Complex64>::identity(1, 1);
    for mode in &set.modes {
        let (x, y, z) = xyz(dd, mode, q);
        let (xb, yb, zb) = xyz_bar(dd, mode, q);
        let (xp, yp, zp) = xyz_prime(dd, mode, q);
        let (a, b) = ab_values(dd, mode.j, q.lambda);
        let (abar, bbar) = ab_values(dd, mode.j, 1.0 / q.lambda);
        t_rep = kron(&t_rep, &c2_to_dmatrix(&mode_factor(x, y, z)));
        that_xy = kron(&that_xy, &c2_to_dmatrix(&mode_factor(xp, yp, zp)));
        that_yx = kron(&that_yx, &c2_to_dmatrix(&mode_factor(xb, yb, zb)));
        r_rep = kron(&r_rep, &c2_to_dmatrix(&mode.r));
        s_rep = kron(&s_rep, &c2_to_dmatrix(&mode.s));
        d_a = kron(&d_a, &c2_to_dmatrix(&C2::diag(a - b, a + b)));
        d_abar = kron(&d_abar, &c2_to_dmatrix(&C2::diag(abar - bbar, abar + bbar)));
    }
    Ok(AssembledReps {
        t_rep,
        that_xy_rep: that_xy,
        that_yx_rep: that_yx,
        r_rep,
        s_rep,
        eig_diag: d_a,
        eig_diag_inv_lambda: d_abar,
    })
}
