//! Subcommand dispatch and all file emission.
//!
//! Every invocation creates a fresh run directory `run-<unix-secs>-seed<n>`
//! under the output root, writes its artifacts there (plain text, CSV, and
//! the ALP1 binary snapshot format only), and finishes with `manifest.txt`:
//! the resolved configuration echo, the artifact version, the seed, start
//! and end wall-clock stamps, and a SHA-256 inventory of every other emitted
//! file. Output **content** is a deterministic function of (configuration,
//! seed, version); only the wall-clock fields of the manifest vary.
//!
//! Exit-status convention (mapped in `main`): checked scientific assertions
//! that fail are collected in [`DispatchResult::failures`] (exit 1);
//! configuration and environment problems surface as errors (exit 2).

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use alp_core::ensemble::EnsembleSpec;
use alp_core::experiments::{self, ExperimentReport, Verdict};
use alp_core::field::VectorField;
use alp_core::flows;
use alp_core::inequality::{self, InequalityReport};
use alp_core::norms::{self, Exponent, NormSpec};
use alp_core::snapshot;
use alp_core::solver::{self, HaltReason};
use alp_core::{Error, FilterBank64, Result, SpectralField64, VectorField64};
use sha2::{Digest, Sha256};

use crate::config::{ExperimentKind, InitialData, RunConfig, VerifyTarget};

/// The five supported subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Decompose,
    Norms,
    Verify,
    Solve,
    Experiment,
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subcommand::Decompose => "decompose",
            Subcommand::Norms => "norms",
            Subcommand::Verify => "verify",
            Subcommand::Solve => "solve",
            Subcommand::Experiment => "experiment",
        })
    }
}

/// Where the run wrote its artifacts and which checked assertions failed.
#[derive(Debug)]
pub struct DispatchResult {
    pub dir: PathBuf,
    pub failures: Vec<String>,
}

impl DispatchResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Collects emitted files and their SHA-256 checksums for the manifest.
struct Emitter {
    dir: PathBuf,
    inventory: Vec<(String, String)>,
}

impl Emitter {
    fn emit(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        std::fs::write(self.dir.join(name), bytes)?;
        let digest = Sha256::digest(bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inventory.push((name.to_string(), hex));
        Ok(())
    }
}

fn unix_millis() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

fn create_run_dir(out_root: &Path, seed: u64) -> Result<PathBuf> {
    std::fs::create_dir_all(out_root)?;
    let stamp = unix_millis() / 1000;
    let mut suffix = 0u32;
    loop {
        let name = if suffix == 0 {
            format!("run-{stamp}-seed{seed}")
        } else {
            format!("run-{stamp}-seed{seed}-{suffix}")
        };
        let dir = out_root.join(name);
        match std::fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => suffix += 1,
            Err(e) => return Err(e.into()),
        }
    }
}

/// Initial data for `solve` and `experiment`. `scaled = false` keeps the
/// flow's natural size (the small-data scan applies its own amplitudes).
fn initial_field(cfg: &RunConfig, seed: u64, scaled: bool) -> Result<VectorField64> {
    let grid = cfg.solver.grid;
    if cfg.initial == InitialData::SingleMode {
        let n = grid.n();
        for (i, &k) in cfg.mode.iter().enumerate() {
            let max = (n[i] as i64 - 1) / 2;
            if k.abs() > max {
                return Err(Error::InvalidArgument(format!(
                    "mode component {k} exceeds the largest unaliased frequency {max} of grid {}",
                    grid
                )));
            }
        }
    }
    let base: VectorField64 = match cfg.initial {
        InitialData::Zero => VectorField::zero(grid),
        InitialData::TaylorGreen => flows::taylor_green(grid, 1.0),
        InitialData::Shear => flows::shear(grid, 1.0),
        InitialData::SingleMode => flows::single_mode(grid, cfg.mode, 1.0),
        InitialData::Random => EnsembleSpec::new(grid, 1, seed).sample(0),
    };
    if scaled && cfg.amplitude > 0.0 {
        Ok(flows::scale_to_h0s(&base, cfg.solver.s, cfg.amplitude))
    } else {
        Ok(base)
    }
}

/// Run one subcommand, emitting all artifacts under a fresh run directory.
pub fn dispatch(
    sub: Subcommand,
    cfg: &RunConfig,
    seed: u64,
    out_root: &Path,
) -> Result<DispatchResult> {
    let start = unix_millis();
    let dir = create_run_dir(out_root, seed)?;
    let mut emitter = Emitter { dir: dir.clone(), inventory: Vec::new() };
    let failures = match sub {
        Subcommand::Decompose => run_decompose(cfg, seed, &mut emitter)?,
        Subcommand::Norms => run_norms(cfg, seed, &mut emitter)?,
        Subcommand::Verify => run_verify(cfg, seed, &mut emitter)?,
        Subcommand::Solve => run_solve(cfg, seed, &mut emitter)?,
        Subcommand::Experiment => run_experiment(cfg, seed, &mut emitter)?,
    };

    let mut manifest = String::new();
    manifest.push_str(&format!("artifact=alp {}\n", env!("CARGO_PKG_VERSION")));
    manifest.push_str(&format!("subcommand={sub}\n"));
    manifest.push_str(&format!("seed={seed}\n"));
    manifest.push_str(&format!("start-unix-ms={start}\n"));
    manifest.push_str(&format!("end-unix-ms={}\n", unix_millis()));
    manifest.push_str(&format!("status={}\n", if failures.is_empty() { "pass" } else { "fail" }));
    manifest.push_str("[config]\n");
    manifest.push_str(&cfg.echo());
    manifest.push_str("[files]\n");
    for (name, hash) in &emitter.inventory {
        manifest.push_str(&format!("{hash}  {name}\n"));
    }
    std::fs::write(dir.join("manifest.txt"), manifest)?;
    Ok(DispatchResult { dir, failures })
}

/// Relative tolerance for the dyadic reconstruction checks run by
/// `decompose`.
pub const RECONSTRUCTION_TOL: f64 = 1e-12;

fn run_decompose(cfg: &RunConfig, seed: u64, emitter: &mut Emitter) -> Result<Vec<String>> {
    let bank = FilterBank64::new(cfg.solver.grid);
    let samples: Vec<VectorField64> = cfg.ensemble(seed).samples();
    let mut blocks = String::from("family,sample,j,block_l2\n");
    let mut recon = String::from("family,sample,defect_rel\n");
    let mut failures = Vec::new();
    for (i, u) in samples.iter().enumerate() {
        let norm = u.l2_norm();
        for (family, jmax) in [("iso", bank.jmax_iso()), ("vert", bank.jmax_vert())] {
            let mut sum: Option<VectorField64> = None;
            for j in -1..=jmax {
                let block = u.map_components(true, |c| match family {
                    "iso" => bank.block_iso(c, j),
                    _ => bank.block_vert(c, j),
                });
                blocks.push_str(&format!("{family},{i},{j},{}\n", block.l2_norm()));
                sum = Some(match sum {
                    None => block,
                    Some(acc) => acc.add(&block)?,
                });
            }
            let defect = match sum {
                Some(acc) => u.sub(&acc)?.l2_norm() / norm.max(f64::MIN_POSITIVE),
                None => 0.0,
            };
            recon.push_str(&format!("{family},{i},{defect:e}\n"));
            if defect > RECONSTRUCTION_TOL {
                failures.push(format!(
                    "sample {i}: {family} blocks reconstruct with relative defect {defect:e} \
                     (tolerance {RECONSTRUCTION_TOL:e})"
                ));
            }
        }
    }
    emitter.emit("decompose.csv", blocks.as_bytes())?;
    emitter.emit("reconstruction.csv", recon.as_bytes())?;
    Ok(failures)
}

fn run_norms(cfg: &RunConfig, seed: u64, emitter: &mut Emitter) -> Result<Vec<String>> {
    let samples: Vec<VectorField64> = cfg.ensemble(seed).samples();
    let s = cfg.solver.s;
    let spec = NormSpec::vertical(s);
    let mut csv = String::from("sample,l2,h0s,hs,gradh_h0s,linfv_l2h,gradh_linfv_l2h\n");
    let mut failures = Vec::new();
    for (i, u) in samples.iter().enumerate() {
        let row = [
            u.l2_norm(),
            norms::vec_norm_aniso(u, spec),
            norms::vec_norm_iso(u, s),
            norms::vec_gradh_norm_aniso(u, spec),
            norms::linf_v_l2_h(u),
            norms::gradh_linf_v_l2_h(u),
        ];
        if row.iter().any(|x| !x.is_finite()) {
            failures.push(format!("sample {i}: non-finite norm"));
        }
        csv.push_str(&format!(
            "{i},{},{},{},{},{},{}\n",
            row[0], row[1], row[2], row[3], row[4], row[5]
        ));
    }
    emitter.emit("norms.csv", csv.as_bytes())?;
    Ok(failures)
}

/// Merge per-scale reports of one family into a single report.
fn merged(reports: Vec<InequalityReport>) -> Result<Option<InequalityReport>> {
    let mut iter = reports.into_iter();
    let Some(mut acc) = iter.next() else { return Ok(None) };
    for r in iter {
        acc.merge(r)?;
    }
    Ok(Some(acc))
}

/// Run the selected inequality families on the seeded ensemble and emit one
/// CSV. Families with a provable constant (interpolation; the `L²` dyadic
/// block bound) are asserted; the rest are empirical and only reported.
fn run_verify(cfg: &RunConfig, seed: u64, emitter: &mut Emitter) -> Result<Vec<String>> {
    let grid = cfg.solver.grid;
    let s = cfg.solver.s;
    let bank = FilterBank64::new(grid);
    // Inequality checks use the structured-plus-random verification ensemble
    // so empirical worst-case constants stay comparable across resolutions.
    let samples: Vec<VectorField64> =
        alp_core::ensemble::verification_ensemble(grid, cfg.samples, seed);
    let comp0: Vec<SpectralField64> = samples.iter().map(|u| u.comp(0).clone()).collect();
    let comp1: Vec<SpectralField64> = samples.iter().map(|u| u.comp(1).clone()).collect();
    let two = Exponent::Finite(2.0);

    let want = |t: VerifyTarget| cfg.target == VerifyTarget::All || cfg.target == t;
    let mut reports: Vec<InequalityReport> = Vec::new();
    let mut failures = Vec::new();

    if want(VerifyTarget::Bernstein) {
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        let mut embed = Vec::new();
        for q in 0..bank.jmax_vert() {
            let [u, l, e] = inequality::verify_bernstein(&bank, &samples, q, 1, two, two, Exponent::Inf)
                .try_into()
                .expect("three bernstein families");
            upper.push(u);
            lower.push(l);
            embed.push(e);
        }
        for family in [upper, lower, embed] {
            if let Some(r) = merged(family)? {
                reports.push(r);
            }
        }
    }
    if want(VerifyTarget::BlockBound) {
        let mut per_scale = Vec::new();
        for j in -1..=bank.jmax_vert() {
            per_scale.push(inequality::verify_uniform_block_bound(&bank, &samples, j, two, two));
        }
        if let Some(r) = merged(per_scale)? {
            if r.worst_ratio() > 1.0 + 1e-12 {
                failures.push(format!(
                    "{}: worst ratio {} exceeds the provable constant 1 (+1e-12 rounding)",
                    r.name,
                    r.worst_ratio()
                ));
            }
            reports.push(r);
        }
    }
    if want(VerifyTarget::Commutator) {
        let mut per_scale = Vec::new();
        for j in 0..=bank.jmax_vert() {
            per_scale.push(inequality::verify_commutator(&bank, &comp0, &comp1, j)?);
        }
        if let Some(r) = merged(per_scale)? {
            reports.push(r);
        }
    }
    if want(VerifyTarget::ProductLaw) {
        // Pair each transport field with its cyclic successor so both
        // ensembles are div-free and deterministic.
        let shifted: Vec<VectorField64> = (0..samples.len())
            .map(|i| samples[(i + 1) % samples.len()].clone())
            .collect();
        reports.push(inequality::verify_product_law(&samples, &shifted, s)?);
        reports.push(inequality::verify_product_law_self(&samples, s)?);
    }
    if want(VerifyTarget::Trilinear) {
        let decompose = samples.len().min(2);
        reports.push(inequality::verify_trilinear(&bank, &samples, s, decompose)?);
    }
    if want(VerifyTarget::Divfree) {
        let (grad, block) = inequality::verify_divfree(&bank, &samples, s)?;
        reports.push(grad);
        reports.push(block);
    }
    if want(VerifyTarget::GagliardoNirenberg) {
        reports.push(inequality::verify_gagliardo_nirenberg(&comp0)?);
    }
    if want(VerifyTarget::Interpolation) {
        let r = inequality::verify_interpolation(&samples, 0.0, 1.0, 0.0, 1.0, 0.5)?;
        if r.worst_ratio() > 1.0 + 1e-10 {
            failures.push(format!(
                "{}: worst ratio {} exceeds the provable constant 1 (+1e-10 rounding)",
                r.name,
                r.worst_ratio()
            ));
        }
        reports.push(r);
    }

    for r in &reports {
        if !r.worst_ratio().is_finite() {
            failures.push(format!("{}: non-finite worst ratio", r.name));
        }
    }
    let mut csv = Vec::new();
    inequality::write_reports_csv(&mut csv, &reports)?;
    emitter.emit("inequalities.csv", &csv)?;

    let mut summary = String::from("family,samples,skipped,worst_ratio\n");
    for r in &reports {
        summary.push_str(&format!(
            "{},{},{},{}\n",
            r.name,
            r.samples(),
            r.skipped,
            r.worst_ratio()
        ));
    }
    emitter.emit("summary.csv", summary.as_bytes())?;
    Ok(failures)
}

fn run_solve(cfg: &RunConfig, seed: u64, emitter: &mut Emitter) -> Result<Vec<String>> {
    let u0 = initial_field(cfg, seed, true)?;
    let result = solver::run(&cfg.solver, &u0)?;
    let mut csv = Vec::new();
    solver::write_diagnostics_csv(&mut csv, &result.diagnostics)?;
    emitter.emit("diagnostics.csv", &csv)?;

    let mut state = Vec::new();
    snapshot::write_snapshot(&mut state, &result.state)?;
    emitter.emit("final.alp", &state)?;
    for (step, field) in &result.snapshots {
        let mut bytes = Vec::new();
        snapshot::write_snapshot(&mut bytes, field)?;
        emitter.emit(&format!("snapshot-{step:06}.alp"), &bytes)?;
    }

    let failures = match result.halt {
        HaltReason::Completed => Vec::new(),
        HaltReason::NonFinite { t } => vec![format!("state lost finiteness at t = {t}")],
        HaltReason::BlowupThreshold { t } => {
            vec![format!("blow-up functional crossed its threshold at t = {t}")]
        }
    };
    Ok(failures)
}

fn run_experiment(cfg: &RunConfig, seed: u64, emitter: &mut Emitter) -> Result<Vec<String>> {
    let Some(kind) = cfg.experiment else {
        return Err(Error::InvalidArgument(
            "the experiment subcommand needs an `experiment=` key (one of small-data-decay, \
             splitting-scheme, ns-propagation, rossby-sweep, baseline-consistency)"
                .into(),
        ));
    };
    let report: ExperimentReport = match kind {
        ExperimentKind::SmallDataDecay => {
            let base = initial_field(cfg, seed, false)?;
            experiments::exp_small_data_decay(&cfg.solver, &base, &cfg.amplitudes)?
        }
        ExperimentKind::SplittingScheme => {
            let u0 = initial_field(cfg, seed, true)?;
            experiments::exp_splitting_scheme(&cfg.solver, &u0, cfg.n_cut, &cfg.epsilons, cfg.smallness)?
        }
        ExperimentKind::NsPropagation => {
            let u0 = initial_field(cfg, seed, true)?;
            experiments::exp_ns_propagation(&cfg.solver, &u0)?
        }
        ExperimentKind::RossbySweep => {
            let u0 = initial_field(cfg, seed, true)?;
            experiments::exp_rossby_sweep(&cfg.solver, &u0, &cfg.epsilons)?
        }
        ExperimentKind::BaselineConsistency => {
            let u0 = initial_field(cfg, seed, true)?;
            let diff = experiments::rossby_baseline_consistency(&cfg.solver, &u0)?;
            let mut report = ExperimentReport {
                name: "baseline-consistency".into(),
                verdicts: Vec::new(),
                scalars: vec![("max-difference".into(), diff)],
                series: Vec::new(),
            };
            report.verdicts.push(Verdict {
                name: "fast-rotation-matches-rotation-free".into(),
                pass: diff <= experiments::BASELINE_CONSISTENCY_TOL,
                detail: format!(
                    "max |H^s| series / final-state difference {diff:.3e}, tolerance {:.1e}",
                    experiments::BASELINE_CONSISTENCY_TOL
                ),
            });
            report
        }
    };

    let mut verdicts = Vec::new();
    experiments::write_verdicts(&mut verdicts, &report)?;
    emitter.emit("verdicts.txt", &verdicts)?;
    let mut scalars = Vec::new();
    experiments::write_scalars_csv(&mut scalars, &report)?;
    emitter.emit("scalars.csv", &scalars)?;
    let mut series = Vec::new();
    experiments::write_series_dat(&mut series, &report)?;
    emitter.emit("series.dat", &series)?;

    Ok(report
        .verdicts
        .iter()
        .filter(|v| !v.pass)
        .map(|v| format!("{}: {}", v.name, v.detail))
        .collect())
}
