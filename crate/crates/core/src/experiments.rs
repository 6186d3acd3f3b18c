//! Scripted desk-scale studies of the solver's qualitative behavior.
//!
//! Each experiment drives [`crate::solver`] runs, reduces the diagnostics to
//! named verdicts, scalars and plot-ready series, and never weakens a failed
//! assertion: a violated bound is reported as a failing [`Verdict`].
//!
//! * [`exp_small_data_decay`] — scans initial amplitudes and checks the
//!   discrete energy ledger `‖u(t)‖²_{H^{0,s}} + 2ν_h Σ dt ‖∇_h u‖²_{H^{0,s}}`
//!   for monotone decay, reporting the empirical smallness threshold.
//! * [`exp_splitting_scheme`] — splits the data as `u0 = S_N u0 + (I - S_N)
//!   u0`, runs the linear system for `v = S_N u0` under an `x1`-dependent
//!   rotation axis, asserts the frequency-localization invariant
//!   `v = S^{x2,x3}_N v`, bounds the perturbation `w = u - v`, reports the
//!   uniform-in-ε healthy horizon, and runs a deliberate hypothesis-violating
//!   negative control (an `x2`-dependent axis) that must break the invariant.
//! * [`exp_ns_propagation`] — rotation-free runs checked against the
//!   self-referential Gronwall envelope `‖u(t)‖²_{H^s} ≤ ‖u_0‖²_{H^s}
//!   exp(C ∫ ν_h^{-3}(ν_h² + ‖u‖²_{L^∞_v L²_h}) ‖∇_h u‖²_{L^∞_v L²_h})` with
//!   the frozen constant [`GRONWALL_CONSTANT`].
//! * [`exp_rossby_sweep`] — sweeps ε, checks the ledger stays monotone
//!   uniformly, and fits the logarithmic growth of the `H^s` envelope
//!   against `1/ε`; [`rossby_baseline_consistency`] confirms the ε → ∞
//!   limit coincides with the rotation-free system.
//!
//! All reports are deterministic functions of the configuration and initial
//! data; sweep members never share mutable state.

use std::io::Write;

use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::filter::FilterBank;
use crate::flows;
use crate::norms::{self, NormSpec};
use crate::rotation::{Dependence, RotationSpec};
use crate::scalar::Scalar;
use crate::solver::{run, DiagnosticsRow, HaltReason, SolverConfig, Stepper};

/// Allowed per-step rise of the energy ledger, as a multiple of
/// `dt² · ‖u_0‖²_{H^{0,s}}`. The discrete ledger of an exactly decaying flow
/// still rises by `O(dt²)` per step from the left-endpoint quadrature of the
/// dissipation integral and the scheme's local error; rises beyond this slack
/// indicate a genuine energy-estimate violation.
pub const LEDGER_SLACK_COEFF: f64 = 50.0;

/// Relative tolerance for the frequency-localization invariant
/// `‖v - S^{x2,x3}_N v‖ ≤ tol · ‖v‖` of the linear splitting system.
pub const FREQ_INVARIANT_TOL: f64 = 1e-10;

/// The negative control (an `x2`-dependent rotation axis) must push the
/// frequency-localization defect above this floor to prove the invariant
/// check is not vacuous.
pub const NEGATIVE_CONTROL_FLOOR: f64 = 1e-4;

/// Tolerance for [`rossby_baseline_consistency`]: with small data over a
/// short horizon, the `ε = 10⁶` run and the rotation-free run agree to this
/// level (the residual scales like `(t/ε) ‖u‖`).
pub const BASELINE_CONSISTENCY_TOL: f64 = 1e-8;

/// Frozen Gronwall envelope constant, calibrated once on the reference run
/// in `gronwall_constant_upper_bounds_reference_run` (Taylor–Green data at
/// `‖u_0‖_{H^{0,s}} = 5 ν_h`, `ν_h = 0.05`, `16³`, `dt = 0.02`, `t ∈ [0, 2]`)
/// and then kept fixed; the test fails if the calibration drifts above it.
pub const GRONWALL_CONSTANT: f64 = 5.0;

/// One named pass/fail outcome with a human-readable explanation.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// A plot-ready series of `(x, y)` points.
#[derive(Clone, Debug)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Result of one experiment: verdicts, named scalars and series.
#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub name: String,
    pub verdicts: Vec<Verdict>,
    pub scalars: Vec<(String, f64)>,
    pub series: Vec<Series>,
}

impl ExperimentReport {
    fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), verdicts: Vec::new(), scalars: Vec::new(), series: Vec::new() }
    }

    fn verdict(&mut self, name: impl Into<String>, pass: bool, detail: String) {
        self.verdicts.push(Verdict { name: name.into(), pass, detail });
    }

    fn scalar(&mut self, name: impl Into<String>, value: f64) {
        self.scalars.push((name.into(), value));
    }

    fn push_series(&mut self, name: impl Into<String>, points: Vec<(f64, f64)>) {
        self.series.push(Series { name: name.into(), points });
    }

    /// True when every verdict passed.
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

/// Plain-text verdict lines: `PASS <name>: <detail>` / `FAIL <name>: <detail>`.
pub fn write_verdicts<W: Write>(w: &mut W, report: &ExperimentReport) -> Result<()> {
    for v in &report.verdicts {
        writeln!(w, "{} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail)?;
    }
    writeln!(w, "{} {}", if report.passed() { "PASS" } else { "FAIL" }, report.name)?;
    Ok(())
}

/// Scalars as CSV rows `name,value`.
pub fn write_scalars_csv<W: Write>(w: &mut W, report: &ExperimentReport) -> Result<()> {
    writeln!(w, "name,value")?;
    for (name, value) in &report.scalars {
        writeln!(w, "{name},{value}")?;
    }
    Ok(())
}

/// All series in one gnuplot-ready file: blocks of `x y` pairs separated by
/// blank lines, each preceded by a `# name` comment.
pub fn write_series_dat<W: Write>(w: &mut W, report: &ExperimentReport) -> Result<()> {
    for series in &report.series {
        writeln!(w, "# {}", series.name)?;
        for (x, y) in &series.points {
            writeln!(w, "{x} {y}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Energy ledger `‖u‖²_{H^{0,s}} + 2 ν_h Σ dt ‖∇_h u‖²_{H^{0,s}}` at one row.
fn ledger(row: &DiagnosticsRow) -> f64 {
    row.h0s * row.h0s + row.dissipation_cum
}

/// Largest one-step increase of the energy ledger across a run.
pub fn ledger_max_rise(rows: &[DiagnosticsRow]) -> f64 {
    rows.windows(2).map(|w| ledger(&w[1]) - ledger(&w[0])).fold(0.0, f64::max)
}

/// Ledger slack allowed per step for a run started at `‖u_0‖_{H^{0,s}} = h0`.
pub fn ledger_tolerance(dt: f64, h0: f64) -> f64 {
    LEDGER_SLACK_COEFF * dt * dt * h0 * h0
}

fn describe_halt(halt: HaltReason) -> Option<String> {
    match halt {
        HaltReason::Completed => None,
        HaltReason::NonFinite { t } => Some(format!("run lost finiteness at t = {t}")),
        HaltReason::BlowupThreshold { t } => {
            Some(format!("blow-up functional crossed its threshold at t = {t}"))
        }
    }
}

/// Scan initial amplitudes (`H^{0,s}` norms of rescaled copies of `base`) and
/// check the energy ledger stays monotone within [`ledger_tolerance`]. The
/// report carries one verdict per amplitude, a per-amplitude ledger series,
/// and the scalar `empirical-threshold` — the largest passing amplitude.
pub fn exp_small_data_decay<T: Scalar>(
    config: &SolverConfig,
    base: &VectorField<T>,
    amplitudes: &[f64],
) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("small-data-decay");
    let mut threshold = 0.0;
    for &a in amplitudes {
        let u0 = flows::scale_to_h0s(base, config.s, a);
        let result = run(config, &u0)?;
        let rise = ledger_max_rise(&result.diagnostics);
        let tol = ledger_tolerance(config.dt, a);
        let mut pass = rise <= tol;
        let mut detail = format!("max per-step ledger rise {rise:.3e}, tolerance {tol:.3e}");
        if let Some(halt) = describe_halt(result.halt) {
            pass = false;
            detail = format!("{detail}; {halt}");
        }
        report.verdict(format!("ledger-monotone-amp={a}"), pass, detail);
        if pass && a > threshold {
            threshold = a;
        }
        report.push_series(
            format!("ledger-amp={a}"),
            result.diagnostics.iter().map(|r| (r.t, ledger(r))).collect(),
        );
    }
    report.scalar("empirical-threshold", threshold);
    Ok(report)
}

/// Relative `(x2, x3)` frequency-localization defect `‖v - S^{x2,x3}_N v‖ / ‖v‖`.
fn localization_defect<T: Scalar>(bank: &FilterBank<T>, v: &VectorField<T>, n_cut: i32) -> f64 {
    let trimmed = v.map_components(true, |c| bank.low_pass_x2x3(c, n_cut));
    let denom = v.l2_norm().to_f64_lossy();
    if denom == 0.0 {
        return 0.0;
    }
    v.sub(&trimmed).expect("same grid").l2_norm().to_f64_lossy() / denom
}

/// Drive the linear system from `v0` under the given rotation, recording the
/// localization defect at every output time. Returns `(defect series,
/// state series)`; the state series is kept only when `keep_states` is set.
fn run_linear_localized<T: Scalar>(
    config: &SolverConfig,
    bank: &FilterBank<T>,
    v0: &VectorField<T>,
    n_cut: i32,
    keep_states: bool,
) -> Result<(Vec<(f64, f64)>, Vec<VectorField<T>>)> {
    let stepper = Stepper::new(config);
    let n_steps = (config.t_end / config.dt).round() as usize;
    let mut v = v0.clone();
    let mut defects = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::new();
    defects.push((0.0, localization_defect(bank, &v, n_cut)));
    if keep_states {
        states.push(v.clone());
    }
    for i in 0..n_steps {
        v = stepper.step(&v, i as f64 * config.dt)?;
        defects.push(((i + 1) as f64 * config.dt, localization_defect(bank, &v, n_cut)));
        if keep_states {
            states.push(v.clone());
        }
    }
    Ok((defects, states))
}

/// Splitting-scheme experiment for an `x1`-dependent (or constant) rotation
/// axis.
///
/// The data splits as `u0 = S_N u0 + (I - S_N) u0` with the isotropic
/// low-pass `S_N` at `n_cut`. Per sweep member ε:
///
/// * the linear system (transport disabled) evolves `v = S_N u0`; the defect
///   `‖v - S^{x2,x3}_N v‖ / ‖v‖` must stay at rounding level
///   ([`FREQ_INVARIANT_TOL`]) — multiplication by functions of `(t, x1)`
///   cannot create `(k2, k3)` content;
/// * the full system evolves `u` from `u0` in lockstep; the perturbation
///   `w = u - v` must obey `‖w(t)‖_{H^{0,s}} ≤ 2 max(‖w(0)‖_{H^{0,s}},
///   smallness · ν_h)` through the horizon, and the largest time where the
///   bound still holds is reported as the healthy horizon `T(ε)`.
///
/// A negative control reruns the linear system under a deliberately
/// `x2`-dependent axis at a fast rotation (ε ≤ 0.01, horizon ≥ 1); its
/// defect must exceed [`NEGATIVE_CONTROL_FLOOR`], proving the invariant
/// check has teeth.
///
/// Scalars: `horizon-eps=<ε>` per member, `horizon-variation`
/// (max−min)/max, `w-bound`, and `negative-control-defect`.
pub fn exp_splitting_scheme<T: Scalar>(
    config: &SolverConfig,
    u0: &VectorField<T>,
    n_cut: i32,
    epsilons: &[f64],
    smallness: f64,
) -> Result<ExperimentReport> {
    if config.rotation.dependence() == Dependence::X1X2 {
        return Err(Error::InvalidArgument(
            "the splitting scheme requires a rotation axis depending on (t, x1) only; \
             the configured axis varies with x2"
                .into(),
        ));
    }
    if epsilons.is_empty() {
        return Err(Error::InvalidArgument("the splitting scheme needs at least one ε".into()));
    }
    if n_cut < 0 {
        return Err(Error::InvalidArgument(
            "the isotropic cutoff S_N needs N ≥ 0 to keep any data".into(),
        ));
    }
    let bank = FilterBank::new(config.grid);
    let spec = NormSpec::vertical(config.s);
    let v0 = u0.map_components(true, |c| bank.low_pass_iso(c, n_cut));
    let w0 = norms::vec_norm_aniso(&u0.sub(&v0)?, spec).to_f64_lossy();
    let bound = 2.0 * w0.max(smallness * config.nu_h);

    let mut report = ExperimentReport::new("splitting-scheme");
    report.scalar("w-bound", bound);
    report.scalar("w-initial", w0);

    let n_steps = (config.t_end / config.dt).round() as usize;
    let mut horizons = Vec::new();
    for &eps in epsilons {
        let mut lin = config.clone();
        lin.nonlinear = false;
        lin.epsilon = eps;
        let mut full = config.clone();
        full.nonlinear = true;
        full.epsilon = eps;

        let lin_stepper = Stepper::new(&lin);
        let full_stepper = Stepper::new(&full);
        let mut v = v0.clone();
        let mut u = u0.clone();
        let mut defect_max = localization_defect(&bank, &v, n_cut);
        let mut defects = vec![(0.0, defect_max)];
        let mut w_series = vec![(0.0, w0)];
        let mut horizon = config.t_end;
        let mut violated = false;
        for i in 0..n_steps {
            let t = i as f64 * config.dt;
            v = lin_stepper.step(&v, t)?;
            u = full_stepper.step(&u, t)?;
            let t_next = (i + 1) as f64 * config.dt;
            let defect = localization_defect(&bank, &v, n_cut);
            defect_max = defect_max.max(defect);
            defects.push((t_next, defect));
            let w = norms::vec_norm_aniso(&u.sub(&v)?, spec).to_f64_lossy();
            w_series.push((t_next, w));
            if !violated && w > bound {
                horizon = t;
                violated = true;
            }
        }
        report.verdict(
            format!("frequency-invariant-eps={eps}"),
            defect_max <= FREQ_INVARIANT_TOL,
            format!("max defect {defect_max:.3e}, tolerance {FREQ_INVARIANT_TOL:.1e}"),
        );
        report.verdict(
            format!("perturbation-bounded-eps={eps}"),
            !violated,
            format!("‖w‖ bound {bound:.3e} held through t = {horizon}"),
        );
        report.scalar(format!("horizon-eps={eps}"), horizon);
        report.push_series(format!("defect-eps={eps}"), defects);
        report.push_series(format!("w-eps={eps}"), w_series);
        horizons.push(horizon);
    }

    let h_max = horizons.iter().cloned().fold(f64::MIN, f64::max);
    let h_min = horizons.iter().cloned().fold(f64::MAX, f64::min);
    report.scalar("horizon-variation", if h_max > 0.0 { (h_max - h_min) / h_max } else { 0.0 });

    // Negative control: an x2-dependent axis must visibly break localization.
    // The sidebands it creates scale like Bessel functions of the per-step
    // angle β dt/ε, so the control is pinned to a fast rotation (ε ≤ 0.01)
    // over at least a unit horizon regardless of the sweep parameters. The
    // data gets a probe mode with vertical frequency just inside the flat
    // region of the trimming operator, so the violation is detectable even
    // when the caller's data has little vertical content.
    let mut control = config.clone();
    control.nonlinear = false;
    control.rotation = RotationSpec::BetaPlane { beta: 0.5 };
    control.epsilon = epsilons.iter().cloned().fold(f64::MAX, f64::min).min(0.01);
    control.t_end = config.t_end.max(1.0);
    let k3_probe = {
        let k3_max = (config.grid.n()[2] as i64 - 1) / 2;
        k3_max.min((1i64 << (n_cut + 1)) - 1).max(1)
    };
    let probe_amp = {
        let v_norm = v0.l2_norm().to_f64_lossy();
        if v_norm > 0.0 {
            0.25 * v_norm
        } else {
            1.0
        }
    };
    let probe = flows::single_mode(config.grid, [0, 1, k3_probe], probe_amp);
    let v0_control = v0.add(&probe)?;
    let (control_defects, _) = run_linear_localized(&control, &bank, &v0_control, n_cut, false)?;
    let control_max = control_defects.iter().map(|&(_, d)| d).fold(0.0, f64::max);
    report.verdict(
        "negative-control-x2-axis",
        control_max > NEGATIVE_CONTROL_FLOOR,
        format!(
            "x2-dependent axis drove the defect to {control_max:.3e} (must exceed {NEGATIVE_CONTROL_FLOOR:.1e})"
        ),
    );
    report.scalar("negative-control-defect", control_max);
    report.push_series("defect-negative-control".to_string(), control_defects);
    Ok(report)
}

/// Rotation-free propagation check: every diagnostics row must satisfy the
/// self-referential Gronwall envelope `‖u(t)‖²_{H^s} ≤ ‖u_0‖²_{H^s}
/// exp(C ∫_0^t ν_h^{-3}(ν_h² + ‖u‖²_{L^∞_v L²_h}) ‖∇_h u‖²_{L^∞_v L²_h} dτ)`
/// with `C = ` [`GRONWALL_CONSTANT`] and left-endpoint quadrature. Scalar
/// `min-slack` reports `min_t envelope / ‖u(t)‖²_{H^s}` (≥ 1 means pass);
/// `calibration-constant` reports the smallest constant that would have
/// sufficed for this run.
pub fn exp_ns_propagation<T: Scalar>(
    config: &SolverConfig,
    u0: &VectorField<T>,
) -> Result<ExperimentReport> {
    if config.rotation != RotationSpec::Zero {
        return Err(Error::InvalidArgument(
            "the propagation experiment is about the rotation-free system; set rotation to zero"
                .into(),
        ));
    }
    let result = run(config, u0)?;
    let rows = &result.diagnostics;
    let hs0_sq = rows[0].hs * rows[0].hs;
    let nu = config.nu_h;
    let mut integral = 0.0;
    let mut min_slack = f64::INFINITY;
    let mut needed_c: f64 = 0.0;
    let mut measured = Vec::with_capacity(rows.len());
    let mut envelope = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            let prev = &rows[i - 1];
            integral += config.dt
                * nu.powi(-3)
                * (nu * nu + prev.linfv_l2h.powi(2))
                * prev.gradh_linfv_l2h.powi(2);
        }
        let env = hs0_sq * (GRONWALL_CONSTANT * integral).exp();
        let hs_sq = row.hs * row.hs;
        measured.push((row.t, hs_sq));
        envelope.push((row.t, env));
        if hs_sq > 0.0 {
            min_slack = min_slack.min(env / hs_sq);
        }
        if integral > 0.0 && hs_sq > hs0_sq {
            needed_c = needed_c.max((hs_sq / hs0_sq).ln() / integral);
        }
    }
    let mut report = ExperimentReport::new("ns-propagation");
    let mut pass = min_slack >= 1.0;
    let mut detail = format!(
        "min envelope slack {min_slack:.6} with frozen constant {GRONWALL_CONSTANT}"
    );
    if let Some(halt) = describe_halt(result.halt) {
        pass = false;
        detail = format!("{detail}; {halt}");
    }
    report.verdict("gronwall-envelope", pass, detail);
    report.scalar("min-slack", min_slack);
    report.scalar("calibration-constant", needed_c);
    report.push_series("hs-squared", measured);
    report.push_series("gronwall-envelope", envelope);
    Ok(report)
}

/// Sweep the Rossby number: per ε the `H^{0,s}` ledger must stay monotone
/// (uniformly in ε), `sup_t ‖u‖_{H^s}` is recorded, and the logarithmic
/// envelope growth `g(ε) = ln(sup_t ‖u‖²_{H^s} / ‖u_0‖²_{H^s})` is fitted
/// as `g ≈ slope · (1/ε) + intercept` by least squares.
pub fn exp_rossby_sweep<T: Scalar>(
    config: &SolverConfig,
    u0: &VectorField<T>,
    epsilons: &[f64],
) -> Result<ExperimentReport> {
    if epsilons.is_empty() {
        return Err(Error::InvalidArgument("the Rossby sweep needs at least one ε".into()));
    }
    let mut report = ExperimentReport::new("rossby-sweep");
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &eps in epsilons {
        let mut cfg = config.clone();
        cfg.epsilon = eps;
        let result = run(&cfg, u0)?;
        let rows = &result.diagnostics;
        let rise = ledger_max_rise(rows);
        let tol = ledger_tolerance(cfg.dt, rows[0].h0s);
        let mut pass = rise <= tol;
        let mut detail = format!("max per-step ledger rise {rise:.3e}, tolerance {tol:.3e}");
        if let Some(halt) = describe_halt(result.halt) {
            pass = false;
            detail = format!("{detail}; {halt}");
        }
        report.verdict(format!("ledger-monotone-eps={eps}"), pass, detail);

        let sup_hs = rows.iter().map(|r| r.hs).fold(0.0, f64::max);
        report.scalar(format!("sup-hs-eps={eps}"), sup_hs);
        report.push_series(
            format!("hs-eps={eps}"),
            rows.iter().map(|r| (r.t, r.hs)).collect(),
        );
        if rows[0].hs > 0.0 {
            xs.push(1.0 / eps);
            ys.push((sup_hs * sup_hs / (rows[0].hs * rows[0].hs)).ln());
        }
    }
    if xs.len() >= 2 {
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        report.scalar("log-growth-slope", slope);
        report.scalar("log-growth-intercept", my - slope * mx);
        report.push_series(
            "log-growth-vs-inv-eps".to_string(),
            xs.iter().cloned().zip(ys.iter().cloned()).collect(),
        );
    }
    Ok(report)
}

/// Consistency of the ε → ∞ limit: the largest pointwise difference of the
/// `‖u‖_{H^s}` time series (and of the final states, in `L²`) between a run
/// with `B = e3`, `ε = 10⁶` and the rotation-free run. Small data over a
/// short horizon pushes this to rounding level.
pub fn rossby_baseline_consistency<T: Scalar>(
    config: &SolverConfig,
    u0: &VectorField<T>,
) -> Result<f64> {
    let mut fast = config.clone();
    fast.rotation = RotationSpec::ConstantE3;
    fast.epsilon = 1e6;
    let mut frozen = config.clone();
    frozen.rotation = RotationSpec::Zero;
    let a = run(&fast, u0)?;
    let b = run(&frozen, u0)?;
    let series_diff = a
        .diagnostics
        .iter()
        .zip(&b.diagnostics)
        .map(|(ra, rb)| (ra.hs - rb.hs).abs())
        .fold(0.0, f64::max);
    let state_diff = a.state.sub(&b.state)?.l2_norm().to_f64_lossy();
    Ok(series_diff.max(state_diff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::EnsembleSpec;
    use crate::grid::Grid;

    fn base_config(n: usize) -> SolverConfig {
        let grid = Grid::cubic(n).unwrap();
        let mut config = SolverConfig::new(grid, 0.2, 0.05, 0.25);
        config.s = 0.6;
        config
    }

    #[test]
    fn small_data_zero_amplitude_is_trivially_monotone() {
        let config = base_config(8);
        let base = flows::taylor_green::<f64>(config.grid, 1.0);
        let report = exp_small_data_decay(&config, &base, &[0.0]).unwrap();
        assert!(report.passed());
        assert_eq!(report.verdicts.len(), 1);
        assert_eq!(report.scalars[0], ("empirical-threshold".to_string(), 0.0));
    }

    #[test]
    fn small_data_shear_is_monotone_under_constant_rotation() {
        let mut config = base_config(8);
        config.rotation = RotationSpec::ConstantE3;
        config.epsilon = 0.5;
        let base = flows::shear::<f64>(config.grid, 1.0);
        let report = exp_small_data_decay(&config, &base, &[0.5, 2.0]).unwrap();
        assert!(report.passed(), "verdicts: {:?}", report.verdicts);
        let threshold = report.scalars.iter().find(|(n, _)| n == "empirical-threshold").unwrap().1;
        assert_eq!(threshold, 2.0);
    }

    #[test]
    fn splitting_invariant_holds_and_negative_control_breaks() {
        let grid = Grid::cubic(16).unwrap();
        let mut config = SolverConfig::new(grid, 0.2, 0.05, 0.25);
        config.s = 0.6;
        config.rotation = RotationSpec::X1Only { amp: 0.5 };
        let u0: VectorField<f64> =
            flows::scale_to_h0s(&EnsembleSpec::new(grid, 1, 911).sample(0), config.s, 0.05);
        let report = exp_splitting_scheme(&config, &u0, 2, &[1.0, 0.1], 0.5).unwrap();
        assert!(report.passed(), "verdicts: {:?}", report.verdicts);
        for eps in [1.0, 0.1] {
            let horizon = report
                .scalars
                .iter()
                .find(|(n, _)| n == &format!("horizon-eps={eps}"))
                .unwrap()
                .1;
            assert_eq!(horizon, config.t_end);
        }
        let variation =
            report.scalars.iter().find(|(n, _)| n == "horizon-variation").unwrap().1;
        assert_eq!(variation, 0.0);
        let control =
            report.scalars.iter().find(|(n, _)| n == "negative-control-defect").unwrap().1;
        assert!(control > NEGATIVE_CONTROL_FLOOR);
    }

    #[test]
    fn splitting_refuses_x2_dependent_axis() {
        let config = {
            let mut c = base_config(8);
            c.rotation = RotationSpec::BetaPlane { beta: 0.3 };
            c
        };
        let u0 = flows::taylor_green::<f64>(config.grid, 0.1);
        let err = exp_splitting_scheme(&config, &u0, 2, &[1.0], 0.5).unwrap_err();
        assert!(err.to_string().contains("x1"), "unexpected message: {err}");
    }

    #[test]
    fn splitting_bandlimited_data_has_zero_initial_perturbation() {
        let grid = Grid::cubic(16).unwrap();
        let mut config = SolverConfig::new(grid, 0.2, 0.05, 0.25);
        config.s = 0.6;
        config.rotation = RotationSpec::X1Only { amp: 0.5 };
        // Taylor-Green content lives at |k| = √3 < 2^2: S_2 leaves it alone.
        let u0 = flows::scale_to_h0s(&flows::taylor_green::<f64>(grid, 1.0), config.s, 0.05);
        let report = exp_splitting_scheme(&config, &u0, 2, &[1.0], 0.5).unwrap();
        assert!(report.passed(), "verdicts: {:?}", report.verdicts);
        let w0 = report.scalars.iter().find(|(n, _)| n == "w-initial").unwrap().1;
        assert!(w0 <= 1e-13, "band-limited data should split exactly, w0 = {w0}");
    }

    #[test]
    fn propagation_envelope_holds_and_requires_zero_rotation() {
        let mut config = base_config(16);
        config.nu_h = 0.1;
        let u0 = flows::scale_to_h0s(&flows::taylor_green::<f64>(config.grid, 1.0), config.s, 0.3);
        let report = exp_ns_propagation(&config, &u0).unwrap();
        assert!(report.passed(), "verdicts: {:?}", report.verdicts);
        let slack = report.scalars.iter().find(|(n, _)| n == "min-slack").unwrap().1;
        assert!(slack >= 1.0);

        config.rotation = RotationSpec::ConstantE3;
        assert!(exp_ns_propagation(&config, &u0).is_err());
    }

    #[test]
    fn gronwall_constant_upper_bounds_reference_run() {
        // Reference calibration run for GRONWALL_CONSTANT; if this fails the
        // frozen constant has drifted below the measured requirement.
        let grid = Grid::cubic(16).unwrap();
        let mut config = SolverConfig::new(grid, 0.05, 0.02, 2.0);
        config.s = 0.6;
        let u0 =
            flows::scale_to_h0s(&flows::taylor_green::<f64>(grid, 1.0), config.s, 5.0 * config.nu_h);
        let report = exp_ns_propagation(&config, &u0).unwrap();
        let needed =
            report.scalars.iter().find(|(n, _)| n == "calibration-constant").unwrap().1;
        assert!(
            needed <= GRONWALL_CONSTANT,
            "reference run needs C = {needed}, frozen constant is {GRONWALL_CONSTANT}"
        );
        assert!(report.passed(), "verdicts: {:?}", report.verdicts);
    }

    #[test]
    fn rossby_sweep_reports_fit_and_monotone_ledger() {
        let mut config = base_config(16);
        config.rotation = RotationSpec::BetaPlane { beta: 0.5 };
        let u0 = flows::scale_to_h0s(&flows::taylor_green::<f64>(config.grid, 1.0), config.s, 0.1);
        let report = exp_rossby_sweep(&config, &u0, &[1.0, 0.5]).unwrap();
        assert!(report.passed(), "verdicts: {:?}", report.verdicts);
        let slope = report.scalars.iter().find(|(n, _)| n == "log-growth-slope");
        assert!(slope.is_some());
        assert!(slope.unwrap().1.is_finite());
        assert!(report.series.iter().any(|s| s.name == "log-growth-vs-inv-eps"));
    }

    #[test]
    fn rossby_baseline_matches_rotation_free_limit() {
        let mut config = base_config(16);
        config.t_end = 0.1;
        let u0 = flows::scale_to_h0s(&flows::taylor_green::<f64>(config.grid, 1.0), config.s, 0.01);
        let diff = rossby_baseline_consistency(&config, &u0).unwrap();
        assert!(diff <= 1e-8, "ε = 10⁶ run deviates from the rotation-free one by {diff}");
    }

    #[test]
    fn report_writers_are_deterministic() {
        let mut report = ExperimentReport::new("demo");
        report.verdict("alpha", true, "ok".into());
        report.verdict("beta", false, "broke".into());
        report.scalar("x", 1.5);
        report.push_series("curve".to_string(), vec![(0.0, 1.0), (0.5, 0.25)]);

        let mut verdicts = Vec::new();
        write_verdicts(&mut verdicts, &report).unwrap();
        assert_eq!(
            String::from_utf8(verdicts).unwrap(),
            "PASS alpha: ok\nFAIL beta: broke\nFAIL demo\n"
        );

        let mut scalars = Vec::new();
        write_scalars_csv(&mut scalars, &report).unwrap();
        assert_eq!(String::from_utf8(scalars).unwrap(), "name,value\nx,1.5\n");

        let mut dat = Vec::new();
        write_series_dat(&mut dat, &report).unwrap();
        assert_eq!(String::from_utf8(dat).unwrap(), "# curve\n0 1\n0.5 0.25\n\n");
    }
}
