use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;

/// Which estimation method an experiment runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Mf,
    Tmf,
    TmfDropout,
    Ifwmf,
    Farp,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Mf => "mf",
            Method::Tmf => "tmf",
            Method::TmfDropout => "tmf-dropout",
            Method::Ifwmf => "ifwmf",
            Method::Farp => "farp",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mf" => Ok(Method::Mf),
            "tmf" => Ok(Method::Tmf),
            "tmf-dropout" => Ok(Method::TmfDropout),
            "ifwmf" => Ok(Method::Ifwmf),
            "farp" => Ok(Method::Farp),
            other => Err(format!(
                "unknown method {other:?} (expected mf, tmf, tmf-dropout, ifwmf, or farp)"
            )),
        }
    }
}

/// How synthetic observation positions are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaskKind {
    /// Positions uniform without replacement at `density`.
    Uniform,
    /// Uniform positions at `density`, then the two-phase skewed subsample.
    Skewed,
    /// Positions taken from an existing ratings file.
    Pattern,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticConfig {
    pub n: usize,
    pub m: usize,
    pub rank: usize,
    pub mask: MaskKind,
    pub density: f64,
    /// Ratings file supplying the mask positions when `mask = "pattern"`.
    pub pattern_path: Option<PathBuf>,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n: 300,
            m: 200,
            rank: 5,
            mask: MaskKind::Uniform,
            density: 0.4,
            pattern_path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetConfig {
    /// Ratings file to load; mutually exclusive with `synthetic`.
    pub path: Option<PathBuf>,
    pub synthetic: Option<SyntheticConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    pub val_frac: f64,
    pub test_frac: f64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            val_frac: 0.2,
            test_frac: 0.2,
        }
    }
}

/// Hyperparameter grids. The defaults are the reference search lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub lambda: Vec<f64>,
    pub rank: Vec<usize>,
    pub rho: Vec<f64>,
    pub steepness: Vec<f64>,
    pub midpoint: Vec<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            lambda: vec![0.001, 0.01, 0.1, 1.0, 10.0],
            rank: vec![1, 5, 10, 15, 25, 50, 75, 100],
            rho: vec![1.0, 10.0, 50.0],
            steepness: vec![1.0, 5.0, 10.0, 20.0, 40.0],
            midpoint: vec![-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub patience: usize,
}

impl Default for TrainSection {
    fn default() -> Self {
        Self {
            learning_rate: 0.005,
            max_epochs: 200,
            patience: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub repeats: usize,
    pub base_seed: u64,
    pub workers: usize,
    pub out_dir: PathBuf,
    pub buckets: usize,
    pub mae_threshold: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            repeats: 3,
            base_seed: 0,
            workers: 1,
            out_dir: PathBuf::from("out"),
            buckets: 10,
            mae_threshold: 0.5,
        }
    }
}

/// Synthetic study section: one matrix rank per entry, model rank equal to
/// the matrix rank, fixed regularization (no grid).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    pub ranks: Vec<usize>,
    pub seeds: usize,
    pub reg: f64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            ranks: vec![5, 20],
            seeds: 5,
            reg: 0.001,
        }
    }
}

/// Whole-experiment configuration, one TOML file with nested sections.
/// Every CLI flag mirrors a key here; flags override file values.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetConfig,
    pub split: SplitConfig,
    pub method: Method,
    pub grid: GridConfig,
    pub train: TrainSection,
    pub run: RunConfig,
    pub study: StudyConfig,
}

impl Default for Method {
    fn default() -> Self {
        Method::Mf
    }
}

/// CLI flag overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub method: Option<Method>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn apply_overrides(mut self, ov: &Overrides) -> Self {
        if let Some(seed) = ov.seed {
            self.run.base_seed = seed;
        }
        if let Some(method) = ov.method {
            self.method = method;
        }
        if let Some(out) = &ov.out {
            self.run.out_dir = out.clone();
        }
        if let Some(workers) = ov.workers {
            self.run.workers = workers;
        }
        self
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.run.repeats == 0 {
            return Err(HarnessError::Config("run.repeats must be >= 1".into()));
        }
        if self.grid.lambda.is_empty() || self.grid.rank.is_empty() {
            return Err(HarnessError::Config("grid.lambda and grid.rank must be nonempty".into()));
        }
        match self.method {
            Method::Ifwmf if self.grid.rho.is_empty() => {
                return Err(HarnessError::Config("grid.rho must be nonempty for ifwmf".into()));
            }
            Method::Tmf | Method::TmfDropout
                if self.grid.steepness.is_empty() || self.grid.midpoint.is_empty() =>
            {
                return Err(HarnessError::Config(
                    "grid.steepness and grid.midpoint must be nonempty for truncated methods".into(),
                ));
            }
            _ => {}
        }
        if self.dataset.path.is_some() && self.dataset.synthetic.is_some() {
            return Err(HarnessError::Config(
                "dataset.path and dataset.synthetic are mutually exclusive".into(),
            ));
        }
        if let Some(synth) = &self.dataset.synthetic {
            if synth.mask == MaskKind::Pattern && synth.pattern_path.is_none() {
                return Err(HarnessError::Config(
                    "mask = \"pattern\" requires dataset.synthetic.pattern_path".into(),
                ));
            }
        }
        if self.study.ranks.is_empty() || self.study.seeds == 0 {
            return Err(HarnessError::Config("study.ranks and study.seeds must be nonempty".into()));
        }
        Ok(())
    }
}
