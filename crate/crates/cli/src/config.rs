//! Run configuration: flags override the config file, which overrides the
//! defaults. The config file is flat `key = value` text; `#` starts a
//! comment.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

pub const CONFIG_ENV: &str = "REGRAD_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid_size: usize,
    pub tol: f64,
    pub seed: u64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid_size: 10_001,
            tol: 1e-12,
            seed: 42,
            output_format: OutputFormat::Json,
            output_path: None,
        }
    }
}

/// Values that may come from flags or the file; `None` means unset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub grid_size: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub output_format: Option<OutputFormat>,
    pub output_path: Option<PathBuf>,
}

impl Overrides {
    fn apply(self, cfg: &mut RunConfig) {
        if let Some(v) = self.grid_size {
            cfg.grid_size = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.output_format {
            cfg.output_format = v;
        }
        if let Some(v) = self.output_path {
            cfg.output_path = Some(v);
        }
    }
}

pub fn parse_config(text: &str) -> Result<Overrides> {
    let mut out = Overrides::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("config line {}: expected key = value", i + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let ctx = || format!("config line {}: bad value for {key}", i + 1);
        match key {
            "grid_size" => out.grid_size = Some(value.parse().with_context(ctx)?),
            "tol" => out.tol = Some(value.parse().with_context(ctx)?),
            "seed" => out.seed = Some(value.parse().with_context(ctx)?),
            "output_format" | "format" => {
                out.output_format = Some(match value {
                    "json" => OutputFormat::Json,
                    "csv" => OutputFormat::Csv,
                    _ => bail!("config line {}: format must be json or csv", i + 1),
                })
            }
            "output_path" | "output" => out.output_path = Some(PathBuf::from(value)),
            _ => bail!("config line {}: unknown key {key}", i + 1),
        }
    }
    Ok(out)
}

/// Resolves the effective configuration. `config_path` is the `--config`
/// flag; without it the `REGRAD_CONFIG` variable is consulted.
pub fn resolve(flags: Overrides, config_path: Option<&Path>) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let env_path = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    if let Some(path) = config_path.map(Path::to_path_buf).or(env_path) {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading config {}", path.display()))?;
        parse_config(&text)?.apply(&mut cfg);
    }
    flags.apply(&mut cfg);
    if cfg.grid_size < 3 {
        bail!("grid_size must be at least 3, got {}", cfg.grid_size);
    }
    if !(cfg.tol > 0.0) {
        bail!("tol must be positive, got {}", cfg.tol);
    }
    Ok(cfg)
}
