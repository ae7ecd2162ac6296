//! Machine-readable run reports: JSON with stable key order, byte-identical
//! across runs with the same configuration and seed. Wall-clock timing is
//! opt-in (`--timing`) because it breaks byte-level reproducibility.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

pub const REPORT_VERSION: &str = concat!("potts-", env!("CARGO_PKG_VERSION"), "/report-1");

fn c64(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub n: u32,
    pub l: u32,
    pub q_charge: i32,
    pub kprime: [f64; 2],
    pub lambda_p: [f64; 2],
    pub samples: usize,
    pub tol_spec: f64,
    pub tol_linalg: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DrinfeldSummary {
    pub r: usize,
    pub lambda: Vec<i64>,
    pub roots: Vec<[f64; 2]>,
    pub pairing: Vec<usize>,
    pub self_paired: Vec<usize>,
    pub theta: Vec<[f64; 2]>,
    pub rho: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<[f64; 2]>,
}

impl DrinfeldSummary {
    pub fn from_data(dd: &potts_core::DrinfeldData, kappa: Option<Complex64>) -> Self {
        DrinfeldSummary {
            r: dd.r,
            lambda: dd.lambda_int.clone(),
            roots: dd.roots.iter().copied().map(c64).collect(),
            pairing: dd.pairing.clone(),
            self_paired: dd.self_paired.clone(),
            theta: dd.theta.iter().copied().map(c64).collect(),
            rho: c64(dd.rho),
            kappa: kappa.map(c64),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// Identity tag the check verifies.
    pub anchor: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn graded(name: &str, anchor: &str, max_residual: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.to_string(),
            anchor: anchor.to_string(),
            max_residual,
            tolerance,
            status: if max_residual <= tolerance {
                Status::Pass
            } else {
                Status::Fail
            },
            note: None,
        }
    }

    pub fn with_note(mut self, note: String) -> Self {
        self.note = Some(note);
        self
    }

    pub fn downgrade_to_warn(mut self) -> Self {
        if self.status == Status::Fail {
            self.status = Status::Warn;
        }
        self
    }

    pub fn into_warn(mut self) -> Self {
        self.status = Status::Warn;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRow {
    pub sample: usize,
    pub lambda_q: [f64; 2],
    pub pattern: String,
    pub analytic_sq: [f64; 2],
    pub matched: [f64; 2],
    pub rel_err: f64,
}

impl SpectrumRow {
    pub fn new(
        sample: usize,
        lambda_q: Complex64,
        pattern: String,
        analytic_sq: Complex64,
        matched: Complex64,
        rel_err: f64,
    ) -> Self {
        SpectrumRow {
            sample,
            lambda_q: c64(lambda_q),
            pattern,
            analytic_sq: c64(analytic_sq),
            matched: c64(matched),
            rel_err,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub total_ms: f64,
    pub per_suite_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub drinfeld: DrinfeldSummary,
    pub checks: Vec<CheckRecord>,
    pub spectrum: Vec<SpectrumRow>,
    pub timing: Option<Timing>,
    pub version: String,
    pub seed: u64,
}

impl RunReport {
    pub fn finalize(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self.spectrum
            .sort_by(|a, b| (a.sample, &a.pattern).cmp(&(b.sample, &b.pattern)));
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn spectrum_csv(&self) -> String {
        let mut out = String::from(
            "sample,lambda_q_re,lambda_q_im,pattern,analytic_sq_re,analytic_sq_im,matched_re,matched_im,rel_err\n",
        );
        for row in &self.spectrum {
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.3e}\n",
                row.sample,
                row.lambda_q[0],
                row.lambda_q[1],
                row.pattern,
                row.analytic_sq[0],
                row.analytic_sq[1],
                row.matched[0],
                row.matched[1],
                row.rel_err
            ));
        }
        out
    }

    pub fn summary_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:<7} {:<34} [{}] residual {:.3e} <= {:.1e}{}\n",
                format!("{:?}", c.status).to_lowercase(),
                c.name,
                c.anchor,
                c.max_residual,
                c.tolerance,
                c.note
                    .as_ref()
                    .map(|n| format!("  ({n})"))
                    .unwrap_or_default()
            ));
        }
        out
    }
}
