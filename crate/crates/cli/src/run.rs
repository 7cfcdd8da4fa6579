//! Execution of a [`RunConfig`]: batch simulation, verification and
//! tabulation, with every artifact written under `out_dir`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use fracdiff::ctrw::{simulate_ctrw, CtrwPath};
use fracdiff::mittag_leffler::ml_laplace;
use fracdiff::quad::QuadConfig;
use fracdiff::sampling::{JumpLaw, RngStream, WaitingTimeLaw};
use fracdiff::scaling_limits::{
    default_asymptotic_grid, lemma1_mu, lemma2_lambda, respeed_waiting_lt, universality_sweep, verify_lemma1, verify_lemma2, LemmaReport,
    ScalingFactors,
};
use fracdiff::stats::{variance_doubling_test, Moments};
use fracdiff::subordination::{sample_subordinated_position, simulate_subordination, subordination_integral_density, SubordinationPath};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, Mode, RunConfig};
use crate::plot::{emit_plot_script, Axes};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tolerance of the asymptotic ratio checks at the smallest grid point.
const LEMMA_REL_TOL: f64 = 0.02;

/// Ratio tolerance for a law whose ratio approaches 1 like `z^order`.
fn lemma_tolerance(grid: &[f64], order: f64) -> f64 {
    let z = grid.iter().copied().fold(f64::INFINITY, f64::min);
    LEMMA_REL_TOL.max(2.0 * z.powf(order))
}
/// Tolerance of the exact transform identities.
const IDENTITY_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    /// False iff some emitted verification record failed.
    pub pass: bool,
}

#[derive(Serialize)]
struct ManifestParams {
    alpha: f64,
    theta: f64,
    beta: f64,
}

#[derive(Serialize)]
struct Manifest<'a> {
    mode: &'a str,
    params: ManifestParams,
    #[serde(rename = "N")]
    n_steps: usize,
    #[serde(rename = "T")]
    op_horizon: f64,
    horizon: f64,
    n_paths: usize,
    seed: u64,
    stream_id: u64,
    version: &'a str,
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRecord {
    pub check: &'static str,
    pub law: String,
    pub grid_point: f64,
    pub ratio: f64,
    pub pass: bool,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn write_jsonl<T: Serialize>(path: &Path, records: &[T]) -> Result<()> {
    let mut out = create(path)?;
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn write_manifest(cfg: &RunConfig) -> Result<PathBuf> {
    let m = Manifest {
        mode: cfg.mode.as_str(),
        params: ManifestParams {
            alpha: cfg.alpha,
            theta: cfg.theta,
            beta: cfg.beta,
        },
        n_steps: cfg.n_steps,
        op_horizon: cfg.op_horizon,
        horizon: cfg.horizon,
        n_paths: cfg.n_paths,
        seed: cfg.seed,
        stream_id: cfg.stream_id,
        version: VERSION,
    };
    let path = cfg.out_dir.join("manifest.jsonl");
    write_jsonl(&path, &[m])?;
    Ok(path)
}

pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out_dir).with_context(|| format!("creating {}", cfg.out_dir.display()))?;
    let mut outcome = match cfg.mode {
        Mode::Subordinate => run_subordinate(cfg)?,
        Mode::Ctrw => run_ctrw(cfg)?,
        Mode::Sample => run_sample(cfg)?,
        Mode::Verify => run_verify(cfg)?,
        Mode::Density => run_density(cfg)?,
    };
    outcome.files.push(write_manifest(cfg)?);
    Ok(outcome)
}

fn path_file(cfg: &RunConfig, stem: &str, i: usize) -> PathBuf {
    cfg.out_dir.join(format!("{stem}_{i:06}.{}", cfg.format.extension()))
}

#[derive(Serialize)]
struct SubordinationRow {
    n: usize,
    t_star: f64,
    t: f64,
    x: f64,
}

fn write_subordination(path: &SubordinationPath, format: Format, file: &Path) -> Result<()> {
    let mut out = create(file)?;
    match format {
        Format::Csv => path.write_csv(&mut out)?,
        Format::Jsonl => {
            for (n, ((&t_star, &t), &x)) in path.t_star().iter().zip(path.t_phys()).zip(path.x()).enumerate() {
                serde_json::to_writer(&mut out, &SubordinationRow { n, t_star, t, x })?;
                out.write_all(b"\n")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CtrwRow {
    n: usize,
    t: f64,
    x: f64,
}

fn write_ctrw(path: &CtrwPath, format: Format, file: &Path) -> Result<()> {
    let mut out = create(file)?;
    match format {
        Format::Csv => path.write_csv(&mut out)?,
        Format::Jsonl => {
            let rows = std::iter::once((&0.0, &0.0)).chain(path.t_events().iter().zip(path.x_positions()));
            for (n, (&t, &x)) in rows.enumerate() {
                serde_json::to_writer(&mut out, &CtrwRow { n, t, x })?;
                out.write_all(b"\n")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn plots(cfg: &RunConfig, files: &[PathBuf], axes: &[Axes]) -> Result<Vec<PathBuf>> {
    if !cfg.plot {
        return Ok(Vec::new());
    }
    if cfg.format != Format::Csv {
        bail!("plot scripts read csv trajectories; rerun with --format csv");
    }
    axes.iter()
        .map(|&a| emit_plot_script(files, a, cfg.plot_stride, &cfg.out_dir))
        .collect()
}

fn run_subordinate(cfg: &RunConfig) -> Result<RunOutcome> {
    let p = cfg.params()?;
    let files = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let rng = RngStream::new(cfg.seed, cfg.stream_id + i as u64);
            let path = simulate_subordination(&p, cfg.n_steps, cfg.op_horizon, rng)?;
            let file = path_file(cfg, "path", i);
            write_subordination(&path, cfg.format, &file)?;
            Ok(file)
        })
        .collect::<Result<Vec<_>>>()?;
    let scripts = plots(cfg, &files, &Axes::ALL)?;
    Ok(RunOutcome {
        files: files.into_iter().chain(scripts).collect(),
        pass: true,
    })
}

fn run_ctrw(cfg: &RunConfig) -> Result<RunOutcome> {
    let (wait, jump) = (cfg.waiting_law(), cfg.jump_law());
    let files = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let rng = RngStream::new(cfg.seed, cfg.stream_id + i as u64);
            let path = simulate_ctrw(&wait, &jump, cfg.horizon, rng)?;
            let file = path_file(cfg, "ctrw", i);
            write_ctrw(&path, cfg.format, &file)?;
            Ok(file)
        })
        .collect::<Result<Vec<_>>>()?;
    let scripts = plots(cfg, &files, &[Axes::TX])?;
    Ok(RunOutcome {
        files: files.into_iter().chain(scripts).collect(),
        pass: true,
    })
}

#[derive(Serialize)]
struct SampleSummary {
    t: f64,
    n: u64,
    mean: f64,
    variance: f64,
    std_error_of_variance: f64,
    nonconvergent: Option<bool>,
}

fn run_sample(cfg: &RunConfig) -> Result<RunOutcome> {
    let p = cfg.params()?;
    let xs = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(cfg.seed, cfg.stream_id + i as u64);
            Ok(sample_subordinated_position(&p, cfg.horizon, &mut rng)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let file = cfg.out_dir.join(format!("samples.{}", cfg.format.extension()));
    let mut out = create(&file)?;
    match cfg.format {
        Format::Csv => {
            writeln!(out, "i,x")?;
            for (i, x) in xs.iter().enumerate() {
                writeln!(out, "{i},{x:?}")?;
            }
        }
        Format::Jsonl => {
            for (i, &x) in xs.iter().enumerate() {
                serde_json::to_writer(&mut out, &serde_json::json!({ "i": i, "x": x }))?;
                out.write_all(b"\n")?;
            }
        }
    }
    out.flush()?;

    let m = Moments::from_slice(&xs);
    let n = xs.len();
    let nonconvergent = if n >= 16 {
        Some(variance_doubling_test(&xs, &[n / 4, n / 2, n])?.nonconvergent)
    } else {
        None
    };
    let summary = SampleSummary {
        t: cfg.horizon,
        n: m.count(),
        mean: m.mean(),
        variance: m.variance(),
        std_error_of_variance: m.variance_std_error(),
        nonconvergent,
    };
    let summary_file = cfg.out_dir.join("summary.jsonl");
    write_jsonl(&summary_file, &[summary])?;
    Ok(RunOutcome {
        files: vec![file, summary_file],
        pass: true,
    })
}

fn run_density(cfg: &RunConfig) -> Result<RunOutcome> {
    let p = cfg.params()?;
    let qcfg = QuadConfig::with_tol(1e-10, 1e-8);
    let step = (cfg.x_max - cfg.x_min) / (cfg.x_points - 1) as f64;
    let rows = (0..cfg.x_points)
        .into_par_iter()
        .map(|i| {
            let x = cfg.x_min + i as f64 * step;
            let u = subordination_integral_density(&p, x, cfg.horizon, qcfg)?;
            Ok((x, u.value, u.est_error))
        })
        .collect::<Result<Vec<_>>>()?;
    let file = cfg.out_dir.join(format!("density.{}", cfg.format.extension()));
    let mut out = create(&file)?;
    match cfg.format {
        Format::Csv => {
            writeln!(out, "x,u,est_error")?;
            for (x, u, e) in &rows {
                writeln!(out, "{x:?},{u:?},{e:?}")?;
            }
        }
        Format::Jsonl => {
            for &(x, u, est_error) in &rows {
                serde_json::to_writer(&mut out, &serde_json::json!({ "x": x, "u": u, "est_error": est_error }))?;
                out.write_all(b"\n")?;
            }
        }
    }
    out.flush()?;
    Ok(RunOutcome {
        files: vec![file],
        pass: true,
    })
}

fn lemma_records(check: &'static str, report: LemmaReport) -> impl Iterator<Item = VerifyRecord> {
    report.records.into_iter().map(move |r| VerifyRecord {
        check,
        law: r.law,
        grid_point: r.grid_point,
        ratio: r.ratio,
        pass: r.pass,
    })
}

/// Every transform-domain check: both asymptotic Lemmata over the shipped
/// laws (including the configured `α`, `β`), the Mittag-Leffler fixed
/// point, universality of a Pareto waiting law and the well-scaled relation.
pub fn verification_records(cfg: &RunConfig) -> Result<Vec<VerifyRecord>> {
    let grid = default_asymptotic_grid();
    let mut records = Vec::new();

    let jumps = [
        JumpLaw::TwoPoint,
        JumpLaw::Gaussian { sigma2: 2.0 },
        JumpLaw::SymmetricStable { alpha: cfg.alpha },
        JumpLaw::SymmetricPareto { alpha: 1.5, x0: 1.0 },
    ];
    for jump in &jumps {
        let tol = lemma_tolerance(&grid, cfg.alpha);
        records.extend(lemma_records("lemma1", verify_lemma1(jump, &grid, tol)?));
    }

    let waits = [
        WaitingTimeLaw::Exponential { m: 1.0 },
        WaitingTimeLaw::MittagLeffler { beta: cfg.beta },
        WaitingTimeLaw::Pareto { beta: 0.5, t0: 1.0 },
        WaitingTimeLaw::ExtremalStable { beta: cfg.beta },
    ];
    for wait in &waits {
        let tol = lemma_tolerance(&grid, cfg.beta);
        records.extend(lemma_records("lemma2", verify_lemma2(wait, &grid, tol)?));
    }

    for &beta in &[0.3, 0.6, 0.9, cfg.beta] {
        let law = format!("mittag_leffler(beta={beta})");
        for &tau in &[10.0f64, 1.0, 0.1, 1e-3] {
            for &s in &[0.1, 1.0, 10.0] {
                let r = respeed_waiting_lt(|u| ml_laplace(beta, u), tau, tau.powf(beta), s);
                let want = ml_laplace(beta, s);
                records.push(VerifyRecord {
                    check: "ml_invariance",
                    law: format!("{law},tau={tau}"),
                    grid_point: s,
                    ratio: r / want,
                    pass: (r - want).abs() <= IDENTITY_TOL,
                });
            }
        }
    }

    let s_grid: Vec<f64> = (0..=40).map(|k| 10f64.powf(-1.0 + k as f64 / 20.0)).collect();
    let sweep = universality_sweep(
        &WaitingTimeLaw::Pareto { beta: 0.6, t0: 1.0 },
        &s_grid,
        &[1e-1, 1e-2, 1e-3, 1e-4],
        0.02,
    )?;
    records.extend(sweep.records.into_iter().map(|r| VerifyRecord {
        check: "universality",
        law: r.law,
        grid_point: r.tau,
        ratio: 1.0 + r.sup_deviation,
        pass: r.pass,
    }));

    let jump = JumpLaw::SymmetricStable { alpha: cfg.alpha };
    let wait = WaitingTimeLaw::MittagLeffler { beta: cfg.beta };
    let (lambda, mu) = (lemma2_lambda(&wait)?, lemma1_mu(&jump)?);
    for &h in &[1e-1, 1e-2, 1e-3] {
        let f = ScalingFactors::well_scaled(cfg.alpha, cfg.beta, lambda, mu, h)?;
        let r = f.ratio(cfg.alpha, cfg.beta);
        records.push(VerifyRecord {
            check: "well_scaled",
            law: format!("{}+{}", wait.name(), jump.name()),
            grid_point: h,
            ratio: r,
            pass: (r - 1.0).abs() < 1e-14,
        });
    }
    Ok(records)
}

fn run_verify(cfg: &RunConfig) -> Result<RunOutcome> {
    let records = verification_records(cfg)?;
    let file = cfg.out_dir.join("verify.jsonl");
    write_jsonl(&file, &records)?;
    Ok(RunOutcome {
        files: vec![file],
        pass: records.iter().all(|r| r.pass),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_verification_passes() {
        let records = verification_records(&RunConfig::default()).unwrap();
        let failed: Vec<_> = records.iter().filter(|r| !r.pass).collect();
        assert!(failed.is_empty(), "{failed:?}");
        for check in ["lemma1", "lemma2", "ml_invariance", "universality", "well_scaled"] {
            assert!(records.iter().any(|r| r.check == check), "{check}");
        }
    }

    #[test]
    fn verification_passes_across_parameters() {
        for (alpha, beta) in [(2.0, 1.0), (0.3, 0.2), (1.0, 0.5), (1.9, 0.99)] {
            let cfg = RunConfig {
                alpha,
                beta,
                ..RunConfig::default()
            };
            let failed: Vec<_> = verification_records(&cfg).unwrap().into_iter().filter(|r| !r.pass).collect();
            assert!(failed.is_empty(), "({alpha}, {beta}): {failed:?}");
        }
    }
}
