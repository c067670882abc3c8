use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use spatial_lgi::dynamics::{Engine, KrylovSettings};
use spatial_lgi::scan::ModelTemplate;
use spatial_lgi::spin::{Couplings, InteractionRange};
use spatial_lgi::{Error, Result};

use crate::args::ModelArgs;

/// Optional TOML run record; keys mirror the long flag names in snake_case.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub range: Option<String>,
    pub j: Option<f64>,
    pub h: Option<f64>,
    pub xy: Option<f64>,
    pub zz: Option<f64>,
    pub engine: Option<String>,
    pub krylov_dim: Option<usize>,
    pub krylov_tol: Option<f64>,
    pub max_substep: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
    pub n: Option<Distances>,
    pub grid: Option<String>,
    pub threshold: Option<f64>,
    pub optimize: Option<bool>,
    pub refine_tau: Option<bool>,
    pub window: Option<f64>,
    pub step: Option<f64>,
    pub fit_range: Option<String>,
    pub n_sites: Option<usize>,
    pub first: Option<String>,
    pub second: Option<String>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub kind: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Distances {
    One(usize),
    List(Vec<usize>),
    Text(String),
}

impl Distances {
    fn to_text(&self) -> String {
        match self {
            Distances::One(n) => n.to_string(),
            Distances::List(v) => v.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
            Distances::Text(s) => s.clone(),
        }
    }
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(vec![format!("cannot read config {}: {e}", path.display())]))?;
        toml::from_str(&text)
            .map_err(|e| Error::InvalidConfig(vec![format!("config {}: {}", path.display(), e.message())]))
    }

    pub fn distances(&self) -> Option<String> {
        self.n.as_ref().map(Distances::to_text)
    }
}

/// Collects every input problem so that one run reports all of them.
#[derive(Debug, Default)]
pub struct Diagnostics(Vec<String>);

impl Diagnostics {
    pub fn push(&mut self, msg: impl Into<String>) {
        self.0.push(msg.into());
    }

    pub fn parse<T>(&mut self, what: &str, text: &str) -> Option<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        match text.parse::<T>() {
            Ok(v) => Some(v),
            Err(e) => {
                self.push(format!("{what}: {e}"));
                None
            }
        }
    }

    pub fn absorb<T>(&mut self, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(Error::InvalidConfig(msgs)) => {
                self.0.extend(msgs);
                None
            }
            Err(e) => {
                self.push(e.to_string());
                None
            }
        }
    }

    pub fn finish(self) -> Result<()> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(self.0))
        }
    }
}

/// Flag, else file, else default.
pub fn layer<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// `2..7` (inclusive), `2..=7`, `2,4,6` or `5`.
pub fn parse_distances(text: &str) -> std::result::Result<Vec<usize>, String> {
    let text = text.trim();
    let bad = |part: &str| format!("'{part}' is not a distance");
    if let Some((a, b)) = text.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let lo: usize = a.trim().parse().map_err(|_| bad(a))?;
        let hi: usize = b.trim().parse().map_err(|_| bad(b))?;
        if hi < lo {
            return Err(format!("empty distance range '{text}'"));
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad(p)))
        .collect()
}

pub struct ModelChoice {
    pub template: ModelTemplate,
    pub engine: Engine,
    pub krylov: KrylovSettings,
}

pub fn resolve_model(args: &ModelArgs, file: &FileConfig, diag: &mut Diagnostics) -> ModelChoice {
    let range_text = layer(args.range.clone(), file.range.clone(), "nn".into());
    let range = diag.parse::<InteractionRange>("--range", &range_text).unwrap_or(InteractionRange::Nn);
    let engine_text = layer(args.engine.clone(), file.engine.clone(), "auto".into());
    let engine = diag.parse::<Engine>("--engine", &engine_text).unwrap_or_default();
    let defaults = KrylovSettings::default();
    let krylov = KrylovSettings {
        krylov_dim: layer(args.krylov_dim, file.krylov_dim, defaults.krylov_dim),
        krylov_tol: layer(args.krylov_tol, file.krylov_tol, defaults.krylov_tol),
        max_substep: layer(args.max_substep, file.max_substep, defaults.max_substep),
    };
    let couplings = Couplings {
        xy: layer(args.xy, file.xy, 1.0),
        zz: layer(args.zz, file.zz, 1.0),
    };
    let template = ModelTemplate {
        coupling_j: layer(args.j, file.j, 1.0),
        field_h: layer(args.h, file.h, 1.0),
        range,
        couplings,
    };
    ModelChoice {
        template,
        engine,
        krylov,
    }
}
