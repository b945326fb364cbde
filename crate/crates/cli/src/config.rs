//! Experiment configuration (TOML).
//!
//! ```toml
//! j_max = 6
//!
//! [spec]
//! kind = "rigid-linear"   # or "centrifugal-linear", "symmetric-top"
//! omega = 1.0
//! omega2 = 0.0
//! d_cd = 0.0
//! k = 0
//! m = 0
//!
//! [sampling]
//! n_periods = 1
//! n_t = 0              # 0 = smallest exact choice
//! n_x = 0
//! j_search_cap = 0     # 0 = cover every chain of the block
//!
//! [noise]              # optional
//! samples_per_time = 1000000
//! seed = 7
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use rotomo_core::rotor::{RotorKind, RotorSpec, TestStateKind};
use rotomo_core::tomography::{ReconstructOptions, SamplingPlan, SamplingRequirement};

use crate::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub j_max: u32,
    pub spec: SpecSection,
    #[serde(default)]
    pub sampling: SamplingSection,
    pub noise: Option<NoiseSection>,
    #[serde(default)]
    pub state: StateSection,
    #[serde(default)]
    pub roundtrip: RoundtripSection,
    #[serde(default)]
    pub paths: PathsSection,
    #[serde(skip)]
    base: PathBuf,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecSection {
    pub kind: RotorKind,
    pub omega: f64,
    #[serde(default)]
    pub omega2: f64,
    #[serde(default)]
    pub d_cd: f64,
    #[serde(default)]
    pub k: i32,
    #[serde(default)]
    pub m: i32,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingSection {
    pub n_periods: u32,
    pub n_t: usize,
    pub n_x: usize,
    pub j_search_cap: u32,
}

impl Default for SamplingSection {
    fn default() -> Self {
        Self { n_periods: 1, n_t: 0, n_x: 0, j_search_cap: 0 }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    pub samples_per_time: u64,
    #[serde(default)]
    pub seed: u64,
}

/// Generated test state for `roundtrip`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StateSection {
    pub kind: String,
    pub seed: u64,
    pub kick_strength: f64,
}

impl Default for StateSection {
    fn default() -> Self {
        Self { kind: "random-mixed".into(), seed: 0, kick_strength: 2.0 }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RoundtripSection {
    pub threshold: f64,
}

impl Default for RoundtripSection {
    fn default() -> Self {
        Self { threshold: 1e-8 }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsSection {
    pub state: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg: Self = toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {}", path.display(), e.message().trim())))?;
        cfg.base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |field: &str, msg: String| Err(CliError::Config(format!("{field}: {msg}")));
        if self.sampling.n_periods == 0 {
            return bad("sampling.n_periods", "must be positive".into());
        }
        if let Some(n) = &self.noise {
            if n.samples_per_time == 0 {
                return bad("noise.samples_per_time", "must be positive".into());
            }
        }
        if self.j_max < self.spec().m_km() {
            return bad("j_max", format!("{} lies below max(|k|, |m|) = {}", self.j_max, self.spec().m_km()));
        }
        self.spec().validate(self.j_max).map_err(|e| CliError::Config(format!("spec: {e}")))?;
        self.state_kind()?;
        Ok(())
    }

    pub fn spec(&self) -> RotorSpec {
        let s = &self.spec;
        RotorSpec { kind: s.kind, omega: s.omega, omega2: s.omega2, d_cd: s.d_cd, k: s.k, m: s.m }
    }

    pub fn state_kind(&self) -> Result<TestStateKind, CliError> {
        self.state.kind.parse().map_err(|e| CliError::Config(format!("state.kind: {e}")))
    }

    pub fn options(&self, search_cap: Option<u32>, psd: bool) -> ReconstructOptions {
        let cap = search_cap.or((self.sampling.j_search_cap > 0).then_some(self.sampling.j_search_cap));
        ReconstructOptions { j_search_cap: cap, project_psd: psd, ..Default::default() }
    }

    pub fn plan(&self, search_cap: Option<u32>) -> SamplingPlan {
        let opts = self.options(search_cap, false);
        let req = SamplingRequirement::new(&self.spec(), self.j_max, opts.j_search_cap);
        SamplingPlan::resolve(&req, self.sampling.n_periods, Some(self.sampling.n_t), Some(self.sampling.n_x))
    }

    /// Command-line path if given, else the config's, resolved against the
    /// config directory.
    pub fn path(&self, flag: Option<&Path>, from_config: &Option<PathBuf>, what: &str) -> Result<PathBuf, CliError> {
        match (flag, from_config) {
            (Some(p), _) => Ok(p.to_path_buf()),
            (None, Some(p)) => Ok(self.base.join(p)),
            (None, None) => Err(CliError::Usage(format!("no {what} path: pass --{what} or set paths.{what}"))),
        }
    }
}
