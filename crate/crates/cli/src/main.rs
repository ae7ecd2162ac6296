//! Batch driver: configure a model, run verification suites, emit reports.
//!
//! Exit codes: 0 all checks pass (warnings allowed), 1 at least one check
//! failed, 2 invalid configuration.

mod report;
mod runner;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use potts_core::curve::ModelConfig;
use report::{ConfigEcho, DrinfeldSummary, RunReport, Timing};
use runner::Runner;

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => re
            .trim()
            .parse::<f64>()
            .map(|r| Complex64::new(r, 0.0))
            .map_err(|e| e.to_string()),
        [re, im] => {
            let re = re.trim().parse::<f64>().map_err(|e| e.to_string())?;
            let im = im.trim().parse::<f64>().map_err(|e| e.to_string())?;
            Ok(Complex64::new(re, im))
        }
        _ => Err("expected \"re\" or \"re,im\"".into()),
    }
}

#[derive(Args, Debug, Clone)]
struct CommonOpts {
    /// Number of spin states per site.
    #[arg(long = "N")]
    n: u32,

    /// Chain length; must be a multiple of N.
    #[arg(long = "L")]
    l: u32,

    /// Spin-shift charge index of the built matrices.
    #[arg(long = "Q", default_value_t = 0)]
    q: i32,

    /// Coupling k' as "re" or "re,im".
    #[arg(long, value_parser = parse_complex, default_value = "0.3")]
    kprime: Complex64,

    /// Vertical rapidity parameter as "re" or "re,im".
    #[arg(long = "lambda-p", value_parser = parse_complex, default_value = "1")]
    lambda_p: Complex64,

    /// Number of seeded horizontal sample points per suite.
    #[arg(long, default_value_t = 5)]
    samples: usize,

    /// RNG seed for the sample points.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Spectral matching tolerance.
    #[arg(long = "tol-spec", default_value_t = potts_core::tol::TOL_SPECTRUM)]
    tol_spec: f64,

    /// Linear-algebra tolerance (Vandermonde inversion and friends).
    #[arg(long = "tol-linalg", default_value_t = potts_core::tol::TOL_VDM)]
    tol_linalg: f64,

    /// Write the report to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report format: "json" (full report) or "csv" (spectrum table only).
    #[arg(long, default_value = "json")]
    format: String,

    /// Record wall-clock timings (breaks byte-level report reproducibility).
    #[arg(long, default_value_t = false)]
    timing: bool,

    /// Dump the transfer matrix at the first sample point (CSV + header).
    #[arg(long = "dump-matrix")]
    dump_matrix: Option<PathBuf>,

    /// Dump the explicit sector vectors per pattern (CSV blocks), r <= 3.
    #[arg(long = "dump-vectors")]
    dump_vectors: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Root data, ladder combinatorics, and Gram identities.
    Drinfeld(CommonOpts),
    /// Analytic eigenvalue squares located in the dense product spectrum.
    Spectrum(CommonOpts),
    /// Closed-form matrix elements and transfer-matrix structure.
    Elements(CommonOpts),
    /// Per-mode rotation algebra and the assembled representation.
    Rotations(CommonOpts),
    /// Everything, including the end-to-end intertwining.
    Verify(CommonOpts),
}

#[derive(Parser, Debug)]
#[command(
    name = "potts",
    about = "Superintegrable chiral Potts ground-sector verification toolkit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn model_config(opts: &CommonOpts) -> ModelConfig {
    let mut cfg = ModelConfig::new(opts.n, opts.l, opts.kprime);
    cfg.q_charge = opts.q;
    cfg.lambda_p = opts.lambda_p;
    cfg.seed = opts.seed;
    cfg.tol.spec = opts.tol_spec;
    cfg.tol.linalg = opts.tol_linalg;
    cfg
}

fn execute(name: &str, opts: &CommonOpts) -> anyhow::Result<ExitCode> {
    let cfg = model_config(opts);
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return Ok(ExitCode::from(2));
    }
    let total = Instant::now();
    let runner = match Runner::new(cfg, opts.samples) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(2));
        }
    };

    let mut checks = Vec::new();
    let mut spectrum = Vec::new();
    let mut per_suite = std::collections::BTreeMap::new();

    let wanted: &[&str] = match name {
        "verify" => &["drinfeld", "elements", "spectrum", "rotations", "intertwine"],
        other => std::slice::from_ref(match other {
            "drinfeld" => &"drinfeld",
            "elements" => &"elements",
            "spectrum" => &"spectrum",
            "rotations" => &"rotations",
            _ => unreachable!(),
        }),
    };
    for suite in wanted {
        let t0 = Instant::now();
        match *suite {
            "drinfeld" => checks.extend(runner.drinfeld_suite()?),
            "elements" => checks.extend(runner.elements_suite()?),
            "spectrum" => {
                let (c, rows) = runner.spectrum_suite()?;
                checks.extend(c);
                spectrum = rows;
            }
            "rotations" => checks.extend(runner.rotations_suite()?),
            "intertwine" => checks.extend(runner.intertwine_suite()?),
            _ => unreachable!(),
        }
        per_suite.insert(suite.to_string(), t0.elapsed().as_secs_f64() * 1e3);
    }
    if name == "drinfeld" {
        println!("Lambda = {:?}", runner.dd.lambda_int);
    }

    if let Some(path) = &opts.dump_matrix {
        runner.dump_matrix(path)?;
    }
    if let Some(path) = &opts.dump_vectors {
        runner.dump_vectors(path)?;
    }

    let mut rep = RunReport {
        config: ConfigEcho {
            n: runner.cfg.n,
            l: runner.cfg.l,
            q_charge: runner.cfg.q_charge,
            kprime: [runner.cfg.kprime.re, runner.cfg.kprime.im],
            lambda_p: [runner.cfg.lambda_p.re, runner.cfg.lambda_p.im],
            samples: opts.samples,
            tol_spec: opts.tol_spec,
            tol_linalg: opts.tol_linalg,
        },
        drinfeld: DrinfeldSummary::from_data(&runner.dd, Some(runner.rotations.kappa)),
        checks,
        spectrum,
        timing: opts.timing.then(|| Timing {
            total_ms: total.elapsed().as_secs_f64() * 1e3,
            per_suite_ms: per_suite,
        }),
        version: report::REPORT_VERSION.to_string(),
        seed: opts.seed,
    };
    rep.finalize();

    let body = match opts.format.as_str() {
        "json" => rep.to_json(),
        "csv" => rep.spectrum_csv(),
        other => {
            eprintln!("error: unknown format {other:?} (expected json or csv)");
            return Ok(ExitCode::from(2));
        }
    };
    match &opts.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(body.as_bytes())?;
            eprint!("{}", rep.summary_lines());
            eprintln!("report written to {}", path.display());
        }
        None => {
            print!("{body}");
            eprint!("{}", rep.summary_lines());
        }
    }

    Ok(if rep.any_failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, opts) = match &cli.command {
        Command::Drinfeld(o) => ("drinfeld", o),
        Command::Spectrum(o) => ("spectrum", o),
        Command::Elements(o) => ("elements", o),
        Command::Rotations(o) => ("rotations", o),
        Command::Verify(o) => ("verify", o),
    };
    match execute(name, opts) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
