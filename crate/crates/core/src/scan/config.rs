use serde::{Deserialize, Serialize};

use crate::dynamics::{Engine, KrylovSettings};
use crate::error::{Error, Result};
use crate::spin::{ChainSpec, Couplings, InteractionRange, MAX_DENSE_SITES};

pub const DEFAULT_THRESHOLD: f64 = 1.02;

/// Uniform grid `start, start + step, ...` up to and including `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid {
            start: 0.0,
            stop: std::f64::consts::TAU,
            step: 0.01,
        }
    }
}

impl TimeGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let g = TimeGrid { start, stop, step };
        let problems = g.problems();
        if problems.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidConfig(problems))
        }
    }

    pub(crate) fn problems(&self) -> Vec<String> {
        let mut p = Vec::new();
        if !(self.step > 0.0) || !self.step.is_finite() {
            p.push(format!("grid step must be > 0, got {}", self.step));
        }
        if !(self.start >= 0.0) || !self.start.is_finite() {
            p.push(format!("grid start must be >= 0, got {}", self.start));
        }
        if !(self.stop >= self.start) || !self.stop.is_finite() {
            p.push(format!("grid stop {} must be >= start {}", self.stop, self.start));
        }
        p
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }
}

impl std::str::FromStr for TimeGrid {
    type Err = Error;

    /// `start:stop:step`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidArgument(format!("grid '{s}' is not start:stop:step")));
        }
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("grid '{s}': '{x}' is not a number")))
        };
        TimeGrid::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}

/// Model parameters shared by every chain in a scan; the length follows from `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelTemplate {
    pub coupling_j: f64,
    pub field_h: f64,
    pub range: InteractionRange,
    #[serde(default)]
    pub couplings: Couplings,
}

impl ModelTemplate {
    pub fn new(coupling_j: f64, field_h: f64, range: InteractionRange) -> Self {
        ModelTemplate {
            coupling_j,
            field_h,
            range,
            couplings: Couplings::default(),
        }
    }

    pub fn chain(&self, n: usize) -> ChainSpec {
        ChainSpec::for_distance(n, self.coupling_j, self.field_h, self.range).with_couplings(self.couplings)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub distances: Vec<usize>,
    pub grid: TimeGrid,
    pub model: ModelTemplate,
    pub violation_threshold: f64,
    pub optimize: bool,
    pub refine_tau: bool,
    pub engine: Engine,
    pub krylov: KrylovSettings,
    /// Peak `K_n` is reported over `ht <= peak_window`.
    pub peak_window: f64,
    /// Largest chain admitted.
    pub max_sites: usize,
    /// Distances whose `tau` enter the light-cone fit.
    pub fit_range: (usize, usize),
    /// Ends each series at its first grid violation.
    #[serde(default)]
    pub stop_at_violation: bool,
}

impl ScanConfig {
    pub fn new(distances: Vec<usize>, model: ModelTemplate) -> Self {
        ScanConfig {
            distances,
            grid: TimeGrid::default(),
            model,
            violation_threshold: DEFAULT_THRESHOLD,
            optimize: true,
            refine_tau: false,
            engine: Engine::Auto,
            krylov: KrylovSettings::default(),
            peak_window: 1.8,
            max_sites: MAX_DENSE_SITES,
            fit_range: (2, 6),
            stop_at_violation: false,
        }
    }

    /// Collects every problem instead of stopping at the first.
    pub fn validate(&self) -> Result<()> {
        let mut p = self.grid.problems();
        if self.distances.is_empty() {
            p.push("no distances requested".into());
        }
        if self.distances.contains(&0) {
            p.push("distance n must be >= 1".into());
        }
        let too_big: Vec<usize> = self
            .distances
            .iter()
            .copied()
            .filter(|&n| n > 0 && 2 * n - 1 > self.max_sites)
            .collect();
        if !too_big.is_empty() {
            p.push(format!(
                "capacity exceeded: n = {too_big:?} need more than {} sites",
                self.max_sites
            ));
        }
        if !(self.violation_threshold > 1.0) {
            p.push(format!(
                "violation threshold must be > 1, got {}",
                self.violation_threshold
            ));
        }
        if !(self.model.field_h > 0.0) || !self.model.field_h.is_finite() {
            p.push(format!(
                "field h must be > 0 (times are given as h*t), got {}",
                self.model.field_h
            ));
        }
        if !self.model.coupling_j.is_finite() {
            p.push("coupling J must be finite".into());
        }
        if self.krylov.krylov_dim == 0 || !(self.krylov.max_substep > 0.0) || !(self.krylov.krylov_tol >= 0.0) {
            p.push(format!("invalid Krylov settings {:?}", self.krylov));
        }
        if !(self.peak_window >= 0.0) {
            p.push(format!("peak window must be >= 0, got {}", self.peak_window));
        }
        if self.fit_range.0 >= self.fit_range.1 {
            p.push(format!("fit range {:?} must span at least two distances", self.fit_range));
        }
        if p.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(p))
        }
    }
}
