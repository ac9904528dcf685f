//! Run settings. Precedence: command-line flags, then environment variables,
//! then the TOML config file, then built-in defaults.
//!
//! Config file keys (all optional):
//!
//! ```toml
//! max_group_order = 20000
//! max_cyclotomic_order = 10000
//! max_charpoly_degree = 8
//! threads = 4
//!
//! [remote]
//! enabled = false
//! base_url = "https://www.lmfdb.org"
//! timeout_secs = 30
//! ```
//!
//! Environment variables: `TWISTKIT_CONFIG` (config path),
//! `TWISTKIT_MAX_GROUP_ORDER`, `TWISTKIT_THREADS`, `TWISTKIT_REMOTE_BASE_URL`,
//! `TWISTKIT_REMOTE_TIMEOUT`.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use twistkit_core::catalog::RemoteConfig;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    max_group_order: Option<usize>,
    max_cyclotomic_order: Option<u32>,
    max_charpoly_degree: Option<usize>,
    threads: Option<usize>,
    remote: Option<RemoteFile>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RemoteFile {
    enabled: Option<bool>,
    base_url: Option<String>,
    timeout_secs: Option<u64>,
}

/// Values given on the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub max_group_order: Option<usize>,
    pub threads: Option<usize>,
    pub allow_remote: bool,
    pub remote_base_url: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub max_group_order: usize,
    pub max_cyclotomic_order: u32,
    pub max_charpoly_degree: usize,
    /// `None` lets the worker pool pick one thread per core.
    pub threads: Option<usize>,
    pub remote: RemoteConfig,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            max_group_order: twistkit_core::groups::DEFAULT_MAX_GROUP_ORDER,
            max_cyclotomic_order: twistkit_core::cyclo::DEFAULT_MAX_ORDER,
            max_charpoly_degree: twistkit_core::chartab::DEFAULT_MAX_CHARPOLY_DEGREE,
            threads: None,
            remote: RemoteConfig::default(),
        }
    }
}

fn parse_env<T: std::str::FromStr>(env: &dyn Fn(&str) -> Option<String>, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match env(key) {
        None => Ok(None),
        Some(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|e| anyhow::anyhow!("{key}={v:?}: {e}")),
    }
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
}

impl Settings {
    /// Resolves settings; `env` looks up environment variables.
    pub fn resolve(flags: &Overrides, env: &dyn Fn(&str) -> Option<String>) -> Result<Self> {
        let path = flags
            .config
            .clone()
            .or_else(|| env("TWISTKIT_CONFIG").map(PathBuf::from));
        let file = match &path {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let remote_file = file.remote.unwrap_or_default();
        let defaults = Settings::default();

        let max_group_order = flags
            .max_group_order
            .or(parse_env(env, "TWISTKIT_MAX_GROUP_ORDER")?)
            .or(file.max_group_order)
            .unwrap_or(defaults.max_group_order);
        let threads = flags
            .threads
            .or(parse_env(env, "TWISTKIT_THREADS")?)
            .or(file.threads)
            .filter(|&t| t > 0);
        let remote = RemoteConfig {
            enabled: flags.allow_remote || remote_file.enabled.unwrap_or(false),
            base_url: flags
                .remote_base_url
                .clone()
                .or_else(|| env("TWISTKIT_REMOTE_BASE_URL"))
                .or(remote_file.base_url)
                .unwrap_or(defaults.remote.base_url),
            timeout_secs: parse_env(env, "TWISTKIT_REMOTE_TIMEOUT")?
                .or(remote_file.timeout_secs)
                .unwrap_or(defaults.remote.timeout_secs),
        };
        if max_group_order == 0 {
            bail!("max_group_order must be positive");
        }
        Ok(Self {
            max_group_order,
            max_cyclotomic_order: file.max_cyclotomic_order.unwrap_or(defaults.max_cyclotomic_order),
            max_charpoly_degree: file.max_charpoly_degree.unwrap_or(defaults.max_charpoly_degree),
            threads,
            remote,
        })
    }

    /// Installs the arithmetic bounds and the global worker pool.
    pub fn apply(&self) -> Result<()> {
        twistkit_core::cyclo::set_max_order(self.max_cyclotomic_order);
        twistkit_core::chartab::set_max_charpoly_degree(self.max_charpoly_degree);
        let mut pool = rayon::ThreadPoolBuilder::new();
        if let Some(t) = self.threads {
            pool = pool.num_threads(t);
        }
        // A pool may already exist when called twice in one process; that is harmless.
        let _ = pool.build_global();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;
    use std::io::Write;

    fn env_of(pairs: &[(&str, &str)]) -> impl Fn(&str) -> Option<String> {
        let map: HashMap<String, String> =
            pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        move |k| map.get(k).cloned()
    }

    #[test]
    fn precedence() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "max_group_order = 100\nthreads = 2\n[remote]\ntimeout_secs = 5").unwrap();
        let path = file.path().to_str().unwrap().to_string();

        let s = Settings::resolve(&Overrides::default(), &env_of(&[("TWISTKIT_CONFIG", &path)])).unwrap();
        assert_eq!((s.max_group_order, s.threads, s.remote.timeout_secs), (100, Some(2), 5));

        let env = env_of(&[("TWISTKIT_CONFIG", &path), ("TWISTKIT_MAX_GROUP_ORDER", "200")]);
        assert_eq!(Settings::resolve(&Overrides::default(), &env).unwrap().max_group_order, 200);

        let flags = Overrides {
            max_group_order: Some(300),
            ..Default::default()
        };
        assert_eq!(Settings::resolve(&flags, &env).unwrap().max_group_order, 300);

        let s = Settings::resolve(&Overrides::default(), &env_of(&[])).unwrap();
        assert_eq!(s, Settings::default());
    }

    #[test]
    fn bad_inputs() {
        let env = env_of(&[("TWISTKIT_MAX_GROUP_ORDER", "lots")]);
        assert!(Settings::resolve(&Overrides::default(), &env).is_err());
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "unknown_key = 1").unwrap();
        let flags = Overrides {
            config: Some(file.path().to_path_buf()),
            ..Default::default()
        };
        assert!(Settings::resolve(&flags, &env_of(&[])).is_err());
    }
}
