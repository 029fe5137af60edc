//! On-disk iso-class tables: versioned JSON keyed by quiver, field and caps,
//! written through a temporary file and a rename.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use hallcore::ffla::FqMatrix;
use hallcore::quiverrep::{bounded_dim_vectors, gl_order, IsoClassTable, RepCategory};

use crate::config::Config;

pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "HALLCALC_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub version: u32,
    pub vertex_count: usize,
    pub arrows: Vec<(usize, usize)>,
    pub q: u32,
    pub caps: Vec<usize>,
    pub total_cap: Option<usize>,
}

impl CacheKey {
    pub fn for_config(config: &Config) -> CacheKey {
        CacheKey {
            version: FORMAT_VERSION,
            vertex_count: config.quiver.vertex_count,
            arrows: config.quiver.arrows.clone(),
            q: config.q,
            caps: config.caps.clone(),
            total_cap: config.total_cap,
        }
    }

    pub fn file_name(&self) -> String {
        let arrows: Vec<String> = self.arrows.iter().map(|(s, t)| format!("{s}-{t}")).collect();
        let caps: Vec<String> = self.caps.iter().map(usize::to_string).collect();
        let total = self.total_cap.map_or("none".to_string(), |t| t.to_string());
        format!(
            "table-v{}-n{}-a{}-q{}-c{}-t{}.json",
            self.version,
            self.vertex_count,
            arrows.join("_"),
            self.q,
            caps.join("_"),
            total
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CachedClass {
    pub id: u32,
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<u32>>>,
    pub aut: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheFile {
    pub key: CacheKey,
    pub classes: Vec<CachedClass>,
}

/// Cache directory: the environment variable, then the config, then
/// `$HOME/.cache/hallcalc`.
pub fn cache_dir(config: &Config) -> Option<PathBuf> {
    if let Some(dir) = std::env::var_os(CACHE_DIR_ENV).filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(dir));
    }
    if let Some(dir) = &config.cache_dir {
        return Some(dir.clone());
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("hallcalc"))
}

pub fn to_file(key: &CacheKey, table: &IsoClassTable) -> CacheFile {
    CacheFile {
        key: key.clone(),
        classes: table
            .classes()
            .iter()
            .map(|c| CachedClass {
                id: c.id.0,
                dims: c.rep.dims().to_vec(),
                maps: c.rep.maps().iter().map(FqMatrix::to_rows).collect(),
                aut: c.aut.to_string(),
            })
            .collect(),
    }
}

/// Rebuilds a table from cached data, checking the class list against the
/// orbit-counting identity `Σ_M |GL_d| / a_M = q^{Σ_a d_s d_t}` in every
/// dimension vector.
pub fn from_file(cat: &RepCategory, config: &Config, file: CacheFile) -> anyhow::Result<IsoClassTable> {
    let mut reps = Vec::with_capacity(file.classes.len());
    for (i, c) in file.classes.iter().enumerate() {
        if c.id as usize != i {
            bail!("class ids are not consecutive at position {i}");
        }
        let arrows = cat.quiver().arrows();
        if c.dims.len() != cat.vertex_count() || c.maps.len() != arrows.len() {
            bail!("class {i} has the wrong shape");
        }
        let maps = arrows
            .iter()
            .zip(&c.maps)
            .map(|(a, rows)| {
                let cols = c.dims[a.source];
                if rows.len() != c.dims[a.target] || rows.iter().any(|r| r.len() != cols) {
                    bail!("class {i} has a malformed arrow matrix");
                }
                Ok(FqMatrix::from_rows(rows, cols, cat.field())?)
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        let rep = cat.rep(c.dims.clone(), maps)?;
        let aut: u128 = c.aut.parse().with_context(|| format!("class {i} automorphism count"))?;
        reps.push((rep, aut));
    }
    let q = u128::from(cat.q());
    for d in bounded_dim_vectors(&config.caps, config.total_cap) {
        let gl = d
            .iter()
            .try_fold(1u128, |acc, &n| acc.checked_mul(gl_order(n, cat.q())?))
            .context("group order overflows")?;
        let mut orbits = 0u128;
        for (rep, aut) in &reps {
            if rep.dims() == d.as_slice() {
                if *aut == 0 || gl % aut != 0 {
                    bail!("automorphism count {aut} does not divide |GL_{d:?}|");
                }
                orbits += gl / aut;
            }
        }
        let entries: u32 = cat.quiver().arrows().iter().map(|a| (d[a.source] * d[a.target]) as u32).sum();
        if q.checked_pow(entries) != Some(orbits) {
            bail!("classes with dimension vector {d:?} do not cover all representations");
        }
    }
    if reps.iter().any(|(r, _)| !bounded_dim_vectors(&config.caps, config.total_cap).contains(&r.dims().to_vec())) {
        bail!("cached class outside the configured caps");
    }
    Ok(IsoClassTable::from_representatives(cat.clone(), config.caps.clone(), config.total_cap, reps)?)
}

pub enum Loaded {
    Hit(IsoClassTable),
    /// Absent, mismatched or corrupt; the reason is `Some` when a warning is due.
    Miss(Option<String>),
}

pub fn load(path: &Path, cat: &RepCategory, config: &Config) -> anyhow::Result<Loaded> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Loaded::Miss(None)),
        Err(e) => return Ok(Loaded::Miss(Some(format!("cannot read {}: {e}", path.display())))),
    };
    let value: serde_json::Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return Ok(Loaded::Miss(Some(format!("corrupt cache {}: {e}", path.display())))),
    };
    if let Some(v) = value.pointer("/key/version").and_then(serde_json::Value::as_u64) {
        if v > u64::from(FORMAT_VERSION) {
            bail!(
                "cache {} has format version {v}, newer than supported version {FORMAT_VERSION}",
                path.display()
            );
        }
    }
    let file: CacheFile = match serde_json::from_value(value) {
        Ok(f) => f,
        Err(e) => return Ok(Loaded::Miss(Some(format!("corrupt cache {}: {e}", path.display())))),
    };
    let want = CacheKey::for_config(config);
    if file.key != want {
        return Ok(Loaded::Miss(Some(format!("cache key mismatch in {}", path.display()))));
    }
    match from_file(cat, config, file) {
        Ok(t) => Ok(Loaded::Hit(t)),
        Err(e) => Ok(Loaded::Miss(Some(format!("corrupt cache {}: {e:#}", path.display())))),
    }
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn store(path: &Path, key: &CacheKey, table: &IsoClassTable) -> anyhow::Result<()> {
    let dir = path.parent().context("cache path has no parent directory")?;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
    let json = serde_json::to_vec(&to_file(key, table))?;
    std::fs::write(&tmp, json).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Loads the table for `config`, building and storing it on a miss. Cache
/// problems other than a newer format version only produce warnings.
pub fn obtain(config: &Config, use_cache: bool) -> anyhow::Result<IsoClassTable> {
    let cat = config.category()?;
    let key = CacheKey::for_config(config);
    let path = if use_cache { cache_dir(config).map(|d| d.join(key.file_name())) } else { None };
    if let Some(path) = &path {
        match load(path, &cat, config)? {
            Loaded::Hit(t) => return Ok(t),
            Loaded::Miss(Some(reason)) => eprintln!("warning: {reason}; rebuilding"),
            Loaded::Miss(None) => {}
        }
    }
    let table = IsoClassTable::enumerate(cat, config.caps.clone(), config.total_cap, config.limits())?;
    if let Some(path) = &path {
        if let Err(e) = store(path, &key, &table) {
            eprintln!("warning: could not write cache: {e:#}");
        }
    }
    Ok(table)
}
