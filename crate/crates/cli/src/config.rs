//! Versioned TOML configuration of a single experiment.

use std::path::{Path, PathBuf};

use oseen_core::evolution::{Clock, Dealias, Scheme, SolverConfig};
use oseen_core::Grid2D;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    VortexIdentities,
    Convergence,
    Entropy,
    SpectrumSweep,
    LinearDecay,
    CrossCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::VortexIdentities,
        Experiment::Convergence,
        Experiment::Entropy,
        Experiment::SpectrumSweep,
        Experiment::LinearDecay,
        Experiment::CrossCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::VortexIdentities => "vortex-identities",
            Experiment::Convergence => "convergence",
            Experiment::Entropy => "entropy",
            Experiment::SpectrumSweep => "spectrum-sweep",
            Experiment::LinearDecay => "linear-decay",
            Experiment::CrossCheck => "cross-check",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub half_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DealiasChoice {
    TwoThirds,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeChoice {
    StrangSplit,
    UnscaledRemap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClockChoice {
    Exp,
    ExpMinusOne,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub dt: f64,
    pub end_tau: f64,
    pub record_every: usize,
    pub dealias: DealiasChoice,
    pub scheme: SchemeChoice,
    pub clock: ClockChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Oseen,
    ShiftedOseen,
    Dipole,
    RandomSmooth,
    File,
}

/// Named initial-condition family and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialCondition {
    pub family: Family,
    pub alpha: f64,
    pub shift: [f64; 2],
    pub amplitude: f64,
    pub corr_len: f64,
    /// Falls back to the top-level seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

/// Written into manifests; ignored when a manifest is read back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub code_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub experiment: Experiment,
    pub seed: u64,
    pub workers: usize,
    pub out: PathBuf,
    pub grid: GridConfig,
    pub solver: SolverSection,
    pub initial: InitialCondition,
    pub norm_weights: Vec<f64>,
    pub alphas: Vec<f64>,
    pub modes: Vec<i32>,
    /// Coarse radial basis size of spectral computations.
    pub resolution: usize,
    pub fit_window: [f64; 2],
    /// Weight `m` of `L²(m)` used for the eigenvalue bounds.
    pub bound_weight: f64,
    pub decay_end_tau: f64,
    pub unscaled_half_width: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let mut cfg = Self {
            schema_version: SCHEMA_VERSION,
            experiment,
            seed: 42,
            workers: 1,
            out: PathBuf::from("runs").join(experiment.name()),
            grid: GridConfig { n: 256, half_width: 12.0 },
            solver: SolverSection {
                dt: 1e-2,
                end_tau: 5.0,
                record_every: 10,
                dealias: DealiasChoice::TwoThirds,
                scheme: SchemeChoice::StrangSplit,
                clock: ClockChoice::Exp,
            },
            initial: InitialCondition {
                family: Family::ShiftedOseen,
                alpha: 1.0,
                shift: [0.5, 0.0],
                amplitude: 0.5,
                corr_len: 1.0,
                seed: None,
                path: None,
            },
            norm_weights: vec![0.0, 2.0],
            alphas: vec![0.0, 1.0, 5.0, 10.0, 50.0, 100.0],
            modes: (-4..=4).collect(),
            resolution: 80,
            fit_window: [2.0, 5.0],
            bound_weight: 4.0,
            decay_end_tau: 12.0,
            unscaled_half_width: 36.0,
            provenance: None,
        };
        match experiment {
            Experiment::VortexIdentities => cfg.initial.family = Family::Oseen,
            Experiment::Entropy => {
                cfg.initial.family = Family::RandomSmooth;
                cfg.solver.end_tau = 3.0;
                cfg.solver.record_every = 2;
            }
            Experiment::LinearDecay => {
                cfg.alphas = vec![0.0, 1.0, 10.0];
                cfg.modes = (0..=4).collect();
            }
            Experiment::CrossCheck => cfg.solver.end_tau = 2.0,
            Experiment::Convergence | Experiment::SpectrumSweep => {}
        }
        cfg
    }

    /// Parses a configuration; keys missing from the file take the defaults of its experiment.
    pub fn from_toml_str(text: &str) -> CliResult<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        match table.get("schema_version").and_then(|v| v.as_integer()) {
            Some(v) if v == SCHEMA_VERSION as i64 => {}
            Some(v) => return Err(CliError::Config(format!("unsupported schema_version {v}, expected {SCHEMA_VERSION}"))),
            None => return Err(CliError::Config("missing integer key schema_version".into())),
        }
        let name = table
            .get("experiment")
            .and_then(|v| v.as_str())
            .ok_or_else(|| CliError::Config("missing string key experiment".into()))?;
        let experiment = Experiment::parse(name).ok_or_else(|| CliError::Config(format!("unknown experiment {name:?}")))?;
        let mut merged = toml::Table::try_from(Self::defaults(experiment)).map_err(|e| CliError::Config(e.to_string()))?;
        merge(&mut merged, table);
        let mut cfg: Self = toml::Value::Table(merged).try_into().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        cfg.provenance = None;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
        if let Some(w) = o.workers {
            self.workers = w;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
    }

    /// Seed of the initial condition after falling back to the top-level seed.
    pub fn initial_seed(&self) -> u64 {
        self.initial.seed.unwrap_or(self.seed)
    }

    /// The configuration as recorded in a manifest, with every fallback made explicit.
    pub fn resolved(&self) -> Self {
        let mut cfg = self.clone();
        cfg.initial.seed = Some(self.initial_seed());
        cfg.provenance = Some(Provenance { code_version: crate::CODE_VERSION.to_string() });
        cfg
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn grid(&self) -> CliResult<Grid2D> {
        Ok(Grid2D::new(self.grid.n, self.grid.half_width)?)
    }

    pub fn solver_config(&self, snapshots: bool) -> SolverConfig {
        SolverConfig {
            dt: self.solver.dt,
            dealias: match self.solver.dealias {
                DealiasChoice::TwoThirds => Dealias::TwoThirds,
                DealiasChoice::None => Dealias::None,
            },
            scheme: match self.solver.scheme {
                SchemeChoice::StrangSplit => Scheme::StrangSplit,
                SchemeChoice::UnscaledRemap => Scheme::UnscaledRemap,
            },
            record_every: self.solver.record_every,
            end_tau: self.solver.end_tau,
            norm_weights: self.norm_weights.clone(),
            snapshots,
            clock: match self.solver.clock {
                ClockChoice::Exp => Clock::Exp,
                ClockChoice::ExpMinusOne => Clock::ExpMinusOne,
            },
            ..SolverConfig::default()
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!("unsupported schema_version {}", self.schema_version));
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        self.grid()?;
        self.solver_config(false).validate()?;
        if self.norm_weights.is_empty() {
            return bad("norm_weights must not be empty".into());
        }
        let [a, b] = self.fit_window;
        if !(a >= 0.0 && b > a) {
            return bad(format!("fit_window [{a}, {b}] must be an increasing pair of nonnegative times"));
        }
        if self.alphas.iter().any(|x| !x.is_finite()) {
            return bad("alphas must be finite".into());
        }
        if self.modes.iter().any(|n| n.abs() > 64) {
            return bad("angular modes are limited to |n| <= 64".into());
        }
        if self.resolution < 8 {
            return bad(format!("resolution {} is below 8", self.resolution));
        }
        if !(self.bound_weight >= 0.0 && self.decay_end_tau > 0.0) {
            return bad("bound_weight must be nonnegative and decay_end_tau positive".into());
        }
        if !(self.unscaled_half_width > 0.0) {
            return bad("unscaled_half_width must be positive".into());
        }
        let ic = &self.initial;
        if !ic.alpha.is_finite() || ic.shift.iter().any(|s| !s.is_finite()) {
            return bad("initial alpha and shift must be finite".into());
        }
        match ic.family {
            Family::RandomSmooth => {
                if !(ic.corr_len > 0.0) {
                    return bad("random-smooth needs corr_len > 0".into());
                }
                if ic.alpha != 0.0 && !(0.0..1.0).contains(&ic.amplitude) {
                    return bad("random-smooth with alpha != 0 needs amplitude in [0, 1) to stay positive".into());
                }
            }
            Family::File if ic.path.is_none() => return bad("family file needs a path".into()),
            _ => {}
        }
        match self.experiment {
            Experiment::Convergence if self.fit_window[1] > self.solver.end_tau + 1e-12 => {
                bad("fit_window extends past end_tau".into())
            }
            Experiment::CrossCheck if self.solver.clock != ClockChoice::Exp => {
                bad("cross-check starts the physical run at t = e^0 = 1 and needs clock = \"exp\"".into())
            }
            Experiment::CrossCheck if !self.norm_weights.contains(&0.0) => {
                bad("cross-check compares the m = 0 residual; add 0 to norm_weights".into())
            }
            _ => Ok(()),
        }
    }
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_inherits_defaults() {
        let cfg = ExperimentConfig::from_toml_str(
            "schema_version = 1\nexperiment = \"entropy\"\nseed = 7\n[solver]\ndt = 0.005\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.solver.dt, 0.005);
        assert_eq!(cfg.solver.end_tau, 3.0);
        assert_eq!(cfg.initial.family, Family::RandomSmooth);
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_typos_and_versions() {
        assert!(ExperimentConfig::from_toml_str("schema_version = 1\nexperiment = \"entropy\"\nsed = 7\n").is_err());
        assert!(ExperimentConfig::from_toml_str("schema_version = 2\nexperiment = \"entropy\"\n").is_err());
        assert!(ExperimentConfig::from_toml_str("schema_version = 1\nexperiment = \"warp\"\n").is_err());
        assert!(ExperimentConfig::from_toml_str("experiment = \"entropy\"\n").is_err());
    }

    #[test]
    fn manifest_round_trip() {
        for e in Experiment::ALL {
            let cfg = ExperimentConfig::defaults(e);
            cfg.validate().unwrap();
            let text = cfg.resolved().to_toml().unwrap();
            let back = ExperimentConfig::from_toml_str(&text).unwrap();
            assert_eq!(back.initial.seed, Some(42));
            assert_eq!(back.resolved(), cfg.resolved());
        }
    }

    #[test]
    fn overrides_win() {
        let mut cfg = ExperimentConfig::defaults(Experiment::Convergence);
        cfg.apply(&Overrides { out: Some("x".into()), workers: Some(3), seed: Some(9) });
        assert_eq!((cfg.out.to_str(), cfg.workers, cfg.initial_seed()), (Some("x"), 3, 9));
    }
}
