use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use hallcore::ffla::Field;
use hallcore::mhall::DEFAULT_STEP_GUARD;
use hallcore::quiverrep::{EnumerationLimits, Quiver, RepCategory};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverConfig {
    pub vertex_count: usize,
    /// One-based `[source, target]` pairs.
    #[serde(default)]
    pub arrows: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub quiver: QuiverConfig,
    pub q: u32,
    /// Per-vertex dimension caps of the iso-class table.
    pub caps: Vec<usize>,
    #[serde(default)]
    pub total_cap: Option<usize>,
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_guard")]
    pub step_guard: u64,
    #[serde(default = "default_tuples")]
    pub max_tuples_per_dim: u128,
}

fn default_guard() -> u64 {
    DEFAULT_STEP_GUARD
}

fn default_tuples() -> u128 {
    EnumerationLimits::default().max_tuples_per_dim
}

impl Default for Config {
    /// `A_2` over `F_2` with caps `(2, 2)`.
    fn default() -> Self {
        Config {
            quiver: QuiverConfig {
                vertex_count: 2,
                arrows: vec![(1, 2)],
            },
            q: 2,
            caps: vec![2, 2],
            total_cap: None,
            cache_dir: None,
            seed: 0,
            step_guard: default_guard(),
            max_tuples_per_dim: default_tuples(),
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> anyhow::Result<Config> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let config: Config =
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        config.category()?;
        Ok(config)
    }

    pub fn category(&self) -> anyhow::Result<RepCategory> {
        let quiver = Quiver::new(self.quiver.vertex_count, &self.quiver.arrows)?;
        let field = Field::new(self.q)?;
        if self.caps.len() != quiver.vertex_count() {
            bail!("caps has {} entries for {} vertices", self.caps.len(), quiver.vertex_count());
        }
        Ok(RepCategory::new(quiver, field))
    }

    pub fn limits(&self) -> EnumerationLimits {
        EnumerationLimits {
            max_tuples_per_dim: self.max_tuples_per_dim,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let c: Config = serde_json::from_str(r#"{"quiver":{"vertex_count":1},"q":3,"caps":[2]}"#).unwrap();
        assert_eq!(c.step_guard, DEFAULT_STEP_GUARD);
        assert!(c.category().is_ok());
        let bad: Config = serde_json::from_str(r#"{"quiver":{"vertex_count":1},"q":4,"caps":[2]}"#).unwrap();
        assert!(bad.category().is_err());
        let cyclic: Config =
            serde_json::from_str(r#"{"quiver":{"vertex_count":2,"arrows":[[1,2],[2,1]]},"q":2,"caps":[1,1]}"#).unwrap();
        assert!(cyclic.category().is_err());
        assert!(serde_json::from_str::<Config>(r#"{"quiver":{"vertex_count":1},"q":2,"caps":[1],"typo":1}"#).is_err());
    }
}
