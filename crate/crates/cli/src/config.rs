//! Layered configuration: flags > NRLAB_CONFIG key=value file > defaults,
//! with NRLAB_CACHE overriding the cache directory between file and flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};

pub const ENV_CONFIG: &str = "NRLAB_CONFIG";
pub const ENV_CACHE: &str = "NRLAB_CACHE";

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub cache_dir: PathBuf,
    pub segment_size: usize,
    pub quad_tol: f64,
    pub grid_h: f64,
    pub work_budget: u64,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cache_dir: PathBuf::from("nrlab-cache"),
            segment_size: nrlab_core::arith::DEFAULT_SEGMENT_SIZE,
            quad_tol: 1e-8,
            grid_h: 1e-3,
            work_budget: nrlab_core::experiments::DEFAULT_WORK_BUDGET,
            seed: nrlab_core::experiments::DEFAULT_SEED,
        }
    }
}

/// Flag-level overrides collected by clap.
#[derive(Debug, Default, Clone, clap::Args)]
pub struct ConfigFlags {
    /// Key=value config file; overrides the NRLAB_CONFIG env var
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Cache directory for nonresidue tables
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Sieve segment length
    #[arg(long, global = true)]
    pub segment_size: Option<usize>,
    /// Absolute quadrature tolerance
    #[arg(long, global = true)]
    pub quad_tol: Option<f64>,
    /// Solver grid step
    #[arg(long, global = true)]
    pub grid_h: Option<f64>,
    /// Per-prime work budget in symbol evaluations
    #[arg(long, global = true)]
    pub work_budget: Option<u64>,
    /// Seed for deterministic window sampling
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

impl Config {
    /// Resolves the layered configuration.
    pub fn resolve(flags: &ConfigFlags) -> anyhow::Result<Config> {
        let mut cfg = Config::default();
        let file = flags
            .config
            .clone()
            .or_else(|| std::env::var_os(ENV_CONFIG).map(PathBuf::from));
        if let Some(path) = file {
            cfg.apply_file(&path)
                .with_context(|| format!("config file {}", path.display()))?;
        }
        if let Some(dir) = std::env::var_os(ENV_CACHE) {
            cfg.cache_dir = PathBuf::from(dir);
        }
        if let Some(v) = &flags.cache_dir {
            cfg.cache_dir = v.clone();
        }
        if let Some(v) = flags.segment_size {
            cfg.segment_size = v;
        }
        if let Some(v) = flags.quad_tol {
            cfg.quad_tol = v;
        }
        if let Some(v) = flags.grid_h {
            cfg.grid_h = v;
        }
        if let Some(v) = flags.work_budget {
            cfg.work_budget = v;
        }
        if let Some(v) = flags.seed {
            cfg.seed = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, path: &Path) -> anyhow::Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key=value, got {line:?}", lineno + 1);
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "cache_dir" => self.cache_dir = PathBuf::from(value),
                "segment_size" => self.segment_size = value.parse()?,
                "quad_tol" => self.quad_tol = value.parse()?,
                "grid_h" => self.grid_h = value.parse()?,
                "work_budget" => self.work_budget = value.parse()?,
                "seed" => self.seed = value.parse()?,
                other => bail!("line {}: unknown config key {other:?}", lineno + 1),
            }
        }
        Ok(())
    }

    fn validate(&self) -> anyhow::Result<()> {
        if self.segment_size == 0 {
            bail!("segment_size must be positive");
        }
        if !(self.quad_tol > 0.0) {
            bail!("quad_tol must be positive");
        }
        if !(self.grid_h > 0.0) {
            bail!("grid_h must be positive");
        }
        if self.work_budget == 0 {
            bail!("work_budget must be positive");
        }
        Ok(())
    }
}
