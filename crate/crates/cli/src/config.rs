//! Line-based `key=value` configuration files.
//!
//! The format is deliberately minimal for language-agnostic reproducibility:
//! one `key=value` pair per line, `#` comments and blank lines ignored,
//! unknown and duplicate keys rejected. Validation collects **all** problems
//! before reporting, and every message cites the violated constraint.
//!
//! A minimal valid file:
//!
//! ```text
//! grid=32
//! nu_h=0.1
//! epsilon=1
//! dt=0.005
//! t_end=1
//! s=0.6
//! rotation=constant-e3
//! ```
//!
//! The parsed [`RunConfig`] exposes both views the subcommands need: a fully
//! validated [`SolverConfig`] and, via [`RunConfig::ensemble`], the seeded
//! random-field ensemble specification.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use alp_core::ensemble::EnsembleSpec;
use alp_core::rotation::RotationSpec;
use alp_core::solver::SolverConfig;
use alp_core::Grid;

/// Initial-data families for `solve` and `experiment`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialData {
    Zero,
    TaylorGreen,
    Shear,
    SingleMode,
    Random,
}

/// Inequality families the `verify` subcommand can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyTarget {
    All,
    Bernstein,
    BlockBound,
    Commutator,
    ProductLaw,
    Trilinear,
    Divfree,
    GagliardoNirenberg,
    Interpolation,
}

/// Experiments the `experiment` subcommand can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    SmallDataDecay,
    SplittingScheme,
    NsPropagation,
    RossbySweep,
    BaselineConsistency,
}

/// Fully validated run configuration: the solver parameters plus the knobs
/// consumed by the analysis and experiment subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub solver: SolverConfig,
    /// Ensemble size for `decompose`, `norms` and `verify`.
    pub samples: usize,
    /// Initial-data family for `solve` and `experiment`.
    pub initial: InitialData,
    /// Target `H^{0,s}` norm of the initial data (0 keeps the natural size).
    pub amplitude: f64,
    /// Wavevector for `initial=single-mode`.
    pub mode: [i64; 3],
    /// Inequality family selector for `verify`.
    pub target: VerifyTarget,
    /// Experiment selector; required by the `experiment` subcommand.
    pub experiment: Option<ExperimentKind>,
    /// Isotropic cutoff level `N` of the splitting scheme.
    pub n_cut: i32,
    /// Rossby numbers for sweep experiments.
    pub epsilons: Vec<f64>,
    /// Initial amplitudes for the small-data scan.
    pub amplitudes: Vec<f64>,
    /// Smallness parameter `c` of the splitting perturbation bound.
    pub smallness: f64,
}

impl RunConfig {
    /// The seeded random-field ensemble this configuration describes.
    pub fn ensemble(&self, seed: u64) -> EnsembleSpec {
        EnsembleSpec::new(self.solver.grid, self.samples, seed)
    }

    /// Deterministic echo of every resolved key (defaults included), in the
    /// file format itself, for the run manifest.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        let grid = self.solver.grid.n();
        out.push_str(&format!("grid={}\n", grid[0]));
        out.push_str(&format!("nu_h={}\n", self.solver.nu_h));
        out.push_str(&format!("nu_v={}\n", self.solver.nu_v));
        out.push_str(&format!("epsilon={}\n", self.solver.epsilon));
        out.push_str(&format!("dt={}\n", self.solver.dt));
        out.push_str(&format!("t_end={}\n", self.solver.t_end));
        out.push_str(&format!("s={}\n", self.solver.s));
        let (rotation, rotation_amp) = match self.solver.rotation {
            RotationSpec::Zero => ("zero", None),
            RotationSpec::ConstantE3 => ("constant-e3", None),
            RotationSpec::BetaPlane { beta } => ("beta-plane", Some(beta)),
            RotationSpec::X1Only { amp } => ("x1-only", Some(amp)),
            RotationSpec::X1X2 { amp } => ("x1-x2", Some(amp)),
        };
        out.push_str(&format!("rotation={rotation}\n"));
        if let Some(amp) = rotation_amp {
            out.push_str(&format!("rotation-amp={amp}\n"));
        }
        out.push_str(&format!("nonlinear={}\n", self.solver.nonlinear));
        if let Some(every) = self.solver.snapshot_every {
            out.push_str(&format!("snapshot-every={every}\n"));
        }
        out.push_str(&format!("blowup-threshold={}\n", self.solver.blowup_threshold));
        out.push_str(&format!("cfl-safety={}\n", self.solver.cfl_safety));
        out.push_str(&format!("samples={}\n", self.samples));
        let initial = match self.initial {
            InitialData::Zero => "zero",
            InitialData::TaylorGreen => "taylor-green",
            InitialData::Shear => "shear",
            InitialData::SingleMode => "single-mode",
            InitialData::Random => "random",
        };
        out.push_str(&format!("initial={initial}\n"));
        out.push_str(&format!("amplitude={}\n", self.amplitude));
        out.push_str(&format!("mode={},{},{}\n", self.mode[0], self.mode[1], self.mode[2]));
        let target = match self.target {
            VerifyTarget::All => "all",
            VerifyTarget::Bernstein => "bernstein",
            VerifyTarget::BlockBound => "block-bound",
            VerifyTarget::Commutator => "commutator",
            VerifyTarget::ProductLaw => "product-law",
            VerifyTarget::Trilinear => "trilinear",
            VerifyTarget::Divfree => "divfree",
            VerifyTarget::GagliardoNirenberg => "gagliardo-nirenberg",
            VerifyTarget::Interpolation => "interpolation",
        };
        out.push_str(&format!("target={target}\n"));
        if let Some(kind) = self.experiment {
            let name = match kind {
                ExperimentKind::SmallDataDecay => "small-data-decay",
                ExperimentKind::SplittingScheme => "splitting-scheme",
                ExperimentKind::NsPropagation => "ns-propagation",
                ExperimentKind::RossbySweep => "rossby-sweep",
                ExperimentKind::BaselineConsistency => "baseline-consistency",
            };
            out.push_str(&format!("experiment={name}\n"));
        }
        out.push_str(&format!("n-cut={}\n", self.n_cut));
        let join = |xs: &[f64]| {
            xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        out.push_str(&format!("epsilons={}\n", join(&self.epsilons)));
        out.push_str(&format!("amplitudes={}\n", join(&self.amplitudes)));
        out.push_str(&format!("smallness={}\n", self.smallness));
        out
    }
}

/// Every problem found in a configuration file, collected before reporting.
#[derive(Debug)]
pub struct ConfigError {
    pub problems: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration ({} problem(s)):", self.problems.len())?;
        for p in &self.problems {
            writeln!(f, "  - {p}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

struct Raw {
    entries: BTreeMap<String, String>,
    problems: Vec<String>,
}

impl Raw {
    /// Take a key's value, recording whether it was present.
    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    fn problem(&mut self, msg: impl Into<String>) {
        self.problems.push(msg.into());
    }

    /// Parse an optional typed value; a malformed value is recorded and
    /// `None` returned (the default then applies, keeping later checks
    /// running so all errors surface in one pass).
    fn parse<T: std::str::FromStr>(&mut self, key: &str, describe: &str) -> Option<T> {
        let text = self.take(key)?;
        match text.parse::<T>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.problem(format!("key `{key}`: `{text}` is not {describe}"));
                None
            }
        }
    }

    fn parse_list(&mut self, key: &str) -> Option<Vec<f64>> {
        let text = self.take(key)?;
        let mut out = Vec::new();
        for part in text.split(',') {
            match part.trim().parse::<f64>() {
                Ok(v) => out.push(v),
                Err(_) => {
                    self.problem(format!(
                        "key `{key}`: `{part}` is not a number (expected a comma-separated list)"
                    ));
                    return None;
                }
            }
        }
        Some(out)
    }
}

fn split_lines(text: &str) -> Raw {
    let mut entries = BTreeMap::new();
    let mut problems = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            problems.push(format!("line {}: `{line}` is not of the form key=value", lineno + 1));
            continue;
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if entries.insert(key.clone(), value).is_some() {
            problems.push(format!("duplicate key `{key}`"));
        }
    }
    Raw { entries, problems }
}

/// Parse and fully validate a configuration file. On failure the error lists
/// every problem found, not just the first.
pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        problems: vec![format!("cannot read {}: {e}", path.display())],
    })?;
    parse_config_str(&text)
}

/// [`parse_config`] on in-memory text.
pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let mut raw = split_lines(text);

    // Required keys.
    let grid_n = match raw.parse::<usize>("grid", "a positive integer") {
        Some(n) => match Grid::cubic(n) {
            Ok(_) => Some(n),
            Err(_) => {
                raw.problem(format!(
                    "key `grid`: {n} is not a usable resolution (grid must be an even integer ≥ 4)"
                ));
                None
            }
        },
        None => None,
    };
    let nu_h = raw.parse::<f64>("nu_h", "a number");
    if let Some(v) = nu_h {
        if !(v > 0.0) {
            raw.problem(format!("key `nu_h`: {v} violates ν_h > 0"));
        }
    }
    let epsilon = raw.parse::<f64>("epsilon", "a number");
    if let Some(v) = epsilon {
        if !(v > 0.0) {
            raw.problem(format!("key `epsilon`: {v} violates ε > 0"));
        }
    }
    let dt = raw.parse::<f64>("dt", "a number");
    if let Some(v) = dt {
        if !(v > 0.0 && v.is_finite()) {
            raw.problem(format!("key `dt`: {v} violates dt > 0"));
        }
    }
    let t_end = raw.parse::<f64>("t_end", "a number");
    if let Some(v) = t_end {
        if !(v > 0.0 && v.is_finite()) {
            raw.problem(format!("key `t_end`: {v} violates t_end > 0"));
        }
    }
    let s = raw.parse::<f64>("s", "a number");
    if let Some(v) = s {
        if !(v >= 0.0 && v.is_finite()) {
            raw.problem(format!("key `s`: {v} violates s ≥ 0"));
        }
    }
    let rotation_name = raw.take("rotation");

    // Optional keys (defaults applied when absent).
    let nu_v = raw.parse::<f64>("nu_v", "a number").unwrap_or(0.0);
    if !(nu_v >= 0.0 && nu_v.is_finite()) {
        raw.problem(format!("key `nu_v`: {nu_v} violates ν_v ≥ 0"));
    }
    let rotation_amp = raw.parse::<f64>("rotation-amp", "a number").unwrap_or(0.5);
    if !rotation_amp.is_finite() {
        raw.problem(format!("key `rotation-amp`: {rotation_amp} must be finite"));
    }
    let rotation = match rotation_name.as_deref() {
        Some("zero") => Some(RotationSpec::Zero),
        Some("constant-e3") => Some(RotationSpec::ConstantE3),
        Some("beta-plane") => Some(RotationSpec::BetaPlane { beta: rotation_amp }),
        Some("x1-only") => Some(RotationSpec::X1Only { amp: rotation_amp }),
        Some("x1-x2") => Some(RotationSpec::X1X2 { amp: rotation_amp }),
        Some(other) => {
            raw.problem(format!(
                "key `rotation`: `{other}` is not one of zero, constant-e3, beta-plane, x1-only, x1-x2"
            ));
            None
        }
        None => None,
    };
    let nonlinear = match raw.take("nonlinear").as_deref() {
        Some("true") | None => true,
        Some("false") => false,
        Some(other) => {
            raw.problem(format!("key `nonlinear`: `{other}` is not true or false"));
            true
        }
    };
    let samples = raw.parse::<usize>("samples", "a positive integer").unwrap_or(100);
    if samples == 0 {
        raw.problem("key `samples`: 0 violates samples ≥ 1".to_string());
    }
    let initial = match raw.take("initial").as_deref() {
        Some("zero") => InitialData::Zero,
        Some("taylor-green") | None => InitialData::TaylorGreen,
        Some("shear") => InitialData::Shear,
        Some("single-mode") => InitialData::SingleMode,
        Some("random") => InitialData::Random,
        Some(other) => {
            raw.problem(format!(
                "key `initial`: `{other}` is not one of zero, taylor-green, shear, single-mode, random"
            ));
            InitialData::TaylorGreen
        }
    };
    let amplitude = raw.parse::<f64>("amplitude", "a number").unwrap_or(0.1);
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        raw.problem(format!("key `amplitude`: {amplitude} violates amplitude ≥ 0"));
    }
    let mode = match raw.take("mode") {
        None => [1, 1, 1],
        Some(text) => {
            let parts: Vec<_> = text.split(',').map(|p| p.trim().parse::<i64>()).collect();
            if parts.len() == 3 && parts.iter().all(|p| p.is_ok()) {
                let k = [
                    parts[0].clone().unwrap(),
                    parts[1].clone().unwrap(),
                    parts[2].clone().unwrap(),
                ];
                if k == [0, 0, 0] {
                    raw.problem("key `mode`: the wavevector must be nonzero".to_string());
                }
                k
            } else {
                raw.problem(format!("key `mode`: `{text}` is not three comma-separated integers"));
                [1, 1, 1]
            }
        }
    };
    let target = match raw.take("target").as_deref() {
        Some("all") | None => VerifyTarget::All,
        Some("bernstein") => VerifyTarget::Bernstein,
        Some("block-bound") => VerifyTarget::BlockBound,
        Some("commutator") => VerifyTarget::Commutator,
        Some("product-law") => VerifyTarget::ProductLaw,
        Some("trilinear") => VerifyTarget::Trilinear,
        Some("divfree") => VerifyTarget::Divfree,
        Some("gagliardo-nirenberg") => VerifyTarget::GagliardoNirenberg,
        Some("interpolation") => VerifyTarget::Interpolation,
        Some(other) => {
            raw.problem(format!(
                "key `target`: `{other}` is not one of all, bernstein, block-bound, commutator, \
                 product-law, trilinear, divfree, gagliardo-nirenberg, interpolation"
            ));
            VerifyTarget::All
        }
    };
    let experiment = match raw.take("experiment").as_deref() {
        None => None,
        Some("small-data-decay") => Some(ExperimentKind::SmallDataDecay),
        Some("splitting-scheme") => Some(ExperimentKind::SplittingScheme),
        Some("ns-propagation") => Some(ExperimentKind::NsPropagation),
        Some("rossby-sweep") => Some(ExperimentKind::RossbySweep),
        Some("baseline-consistency") => Some(ExperimentKind::BaselineConsistency),
        Some(other) => {
            raw.problem(format!(
                "key `experiment`: `{other}` is not one of small-data-decay, splitting-scheme, \
                 ns-propagation, rossby-sweep, baseline-consistency"
            ));
            None
        }
    };
    let n_cut = raw.parse::<i32>("n-cut", "an integer").unwrap_or(2);
    if n_cut < 0 {
        raw.problem(format!("key `n-cut`: {n_cut} violates N ≥ 0"));
    }
    let epsilons = raw.parse_list("epsilons").unwrap_or_else(|| vec![1.0, 0.1, 0.01]);
    if epsilons.is_empty() || epsilons.iter().any(|&e| !(e > 0.0)) {
        raw.problem("key `epsilons`: every entry must satisfy ε > 0".to_string());
    }
    let amplitudes = raw.parse_list("amplitudes").unwrap_or_else(|| vec![0.05, 0.1, 0.2, 0.4]);
    if amplitudes.iter().any(|&a| !(a >= 0.0 && a.is_finite())) {
        raw.problem("key `amplitudes`: every entry must satisfy a ≥ 0".to_string());
    }
    let smallness = raw.parse::<f64>("smallness", "a number").unwrap_or(0.5);
    if !(smallness > 0.0 && smallness.is_finite()) {
        raw.problem(format!("key `smallness`: {smallness} violates c > 0"));
    }
    let snapshot_every = raw.parse::<usize>("snapshot-every", "a positive integer");
    if snapshot_every == Some(0) {
        raw.problem("key `snapshot-every`: 0 violates snapshot-every ≥ 1".to_string());
    }
    let blowup_threshold = raw.parse::<f64>("blowup-threshold", "a number").unwrap_or(f64::INFINITY);
    if !(blowup_threshold > 0.0) {
        raw.problem(format!("key `blowup-threshold`: {blowup_threshold} violates threshold > 0"));
    }
    let cfl_safety = raw.parse::<f64>("cfl-safety", "a number");
    if let Some(c) = cfl_safety {
        if !(c > 0.0 && c <= 1.0) {
            raw.problem(format!("key `cfl-safety`: {c} violates 0 < c ≤ 1"));
        }
    }

    // Missing required keys and leftovers.
    for (key, missing) in [
        ("grid", grid_n.is_none()),
        ("nu_h", nu_h.is_none()),
        ("epsilon", epsilon.is_none()),
        ("dt", dt.is_none()),
        ("t_end", t_end.is_none()),
        ("s", s.is_none()),
        ("rotation", rotation.is_none()),
    ] {
        if missing && !raw.problems.iter().any(|p| p.contains(&format!("`{key}`"))) {
            raw.problem(format!("missing required key `{key}`"));
        }
    }
    for key in raw.entries.keys() {
        raw.problems.push(format!("unknown key `{key}`"));
    }

    if !raw.problems.is_empty() {
        return Err(ConfigError { problems: raw.problems });
    }

    let grid = Grid::cubic(grid_n.unwrap()).expect("validated above");
    let mut solver = SolverConfig::new(grid, nu_h.unwrap(), dt.unwrap(), t_end.unwrap());
    solver.nu_v = nu_v;
    solver.epsilon = epsilon.unwrap();
    solver.s = s.unwrap();
    solver.rotation = rotation.unwrap();
    solver.nonlinear = nonlinear;
    solver.snapshot_every = snapshot_every;
    solver.blowup_threshold = blowup_threshold;
    if let Some(c) = cfl_safety {
        solver.cfl_safety = c;
    }
    Ok(RunConfig {
        solver,
        samples,
        initial,
        amplitude,
        mode,
        target,
        experiment,
        n_cut,
        epsilons,
        amplitudes,
        smallness,
    })
}
