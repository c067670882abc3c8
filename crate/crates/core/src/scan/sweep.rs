use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ScanConfig;
use super::fit::{light_cone_fit, LightConeFit};
use super::violation::first_violation;
use crate::dynamics::{Engine, Propagator};
use crate::error::{Error, Result};
use crate::lgi::{optimize_measurement, KMatrix, ProtocolStates};
use crate::spin::{Hamiltonian, StateVector};

/// `K_n` at one grid time. Failed points carry `NaN` values and an `error`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub ht: f64,
    /// `K_n` with every party measuring along x, y and z respectively.
    pub k_axes: [f64; 3],
    pub k_opt: Option<f64>,
    pub axis_opt: Option<[f64; 3]>,
    #[serde(default)]
    pub degenerate: bool,
    pub antisymmetric_residual: f64,
    #[serde(default)]
    pub error: Option<String>,
}

impl ScanPoint {
    fn failed(ht: f64, optimize: bool, err: &Error) -> Self {
        ScanPoint {
            ht,
            k_axes: [f64::NAN; 3],
            k_opt: optimize.then_some(f64::NAN),
            axis_opt: None,
            degenerate: false,
            antisymmetric_residual: f64::NAN,
            error: Some(err.to_string()),
        }
    }

    /// The series used for violation times and peaks.
    pub fn primary(&self, source: TauSource) -> f64 {
        match source {
            TauSource::Optimized => self.k_opt.unwrap_or(f64::NAN),
            TauSource::AxisX => self.k_axes[0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauSource {
    Optimized,
    AxisX,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub k_max: f64,
    pub ht: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceSeries {
    pub n: usize,
    pub n_sites: usize,
    /// Engine actually used after resolving `auto`.
    pub engine: Engine,
    pub source: TauSource,
    pub points: Vec<ScanPoint>,
    /// First `ht` with `K_n` above the threshold.
    pub tau: Option<f64>,
    pub tau_refined: bool,
    /// Maximum over the peak window.
    pub peak: Option<Peak>,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub config: ScanConfig,
    pub series: Vec<DistanceSeries>,
    /// Present when every distance of the fit range violated.
    pub fit: Option<LightConeFit>,
    pub version: String,
}

impl ScanResult {
    pub fn get(&self, n: usize) -> Option<&DistanceSeries> {
        self.series.iter().find(|s| s.n == n)
    }
}

/// `n -> tau` for every scanned distance.
pub fn taus(result: &ScanResult) -> BTreeMap<usize, Option<f64>> {
    result.series.iter().map(|s| (s.n, s.tau)).collect()
}

/// Runs the configured sweep. Distances run in parallel; the output order
/// follows `config.distances`.
pub fn sweep(config: &ScanConfig) -> Result<ScanResult> {
    config.validate()?;
    let series = config
        .distances
        .par_iter()
        .map(|&n| scan_distance(config, n))
        .collect::<Result<Vec<_>>>()?;
    let mut result = ScanResult {
        config: config.clone(),
        series,
        fit: None,
        version: crate::VERSION.to_string(),
    };
    let (lo, hi) = config.fit_range;
    let t = taus(&result);
    if (lo..=hi).all(|n| t.contains_key(&n)) {
        result.fit = light_cone_fit(&t, config.fit_range).ok();
    }
    Ok(result)
}

fn scan_distance(config: &ScanConfig, n: usize) -> Result<DistanceSeries> {
    let spec = config.model.chain(n);
    let prop = Propagator::with_settings(Hamiltonian::new(spec)?, config.engine, config.krylov)?;
    let psi0 = StateVector::plus(spec.n_sites)?;
    let h = config.model.field_h;
    let dt = config.grid.step / h;
    let source = if config.optimize {
        TauSource::Optimized
    } else {
        TauSource::AxisX
    };

    let mut points = Vec::with_capacity(config.grid.len());
    let mut states: Option<ProtocolStates> = None;
    for ht in config.grid.points() {
        let t = ht / h;
        let next = match states.take() {
            Some(prev) => advance(&prop, prev, n, t, dt),
            None => ProtocolStates::compute(&prop, &psi0, n, t),
        };
        let point = next.and_then(|s| {
            let p = evaluate(&s.kmatrix(), ht, config.optimize)?;
            states = Some(s);
            Ok(p)
        });
        let point = point.unwrap_or_else(|e| ScanPoint::failed(ht, config.optimize, &e));
        let violated = point.primary(source) > config.violation_threshold;
        points.push(point);
        if violated && config.stop_at_violation {
            break;
        }
    }

    let times: Vec<f64> = points.iter().map(|p| p.ht).collect();
    let values: Vec<f64> = points.iter().map(|p| p.primary(source)).collect();
    let refine = config.refine_tau.then_some(|ht: f64| {
        let kmat = ProtocolStates::compute(&prop, &psi0, n, ht / h)?.kmatrix();
        Ok(evaluate(&kmat, ht, config.optimize)?.primary(source))
    });
    let tau = first_violation(&times, &values, config.violation_threshold, refine)?;
    let peak = points
        .iter()
        .filter(|p| p.ht <= config.peak_window + 1e-9)
        .map(|p| (p.primary(source), p.ht))
        .filter(|(k, _)| k.is_finite())
        .fold(None, |best: Option<Peak>, (k, ht)| match best {
            Some(b) if b.k_max >= k => Some(b),
            _ => Some(Peak { k_max: k, ht }),
        });
    let failures = points.iter().filter(|p| p.error.is_some()).count();
    Ok(DistanceSeries {
        n,
        n_sites: spec.n_sites,
        engine: prop.engine(),
        source,
        points,
        tau,
        tau_refined: config.refine_tau,
        peak,
        failures,
    })
}

/// Moves the trajectory vectors forward by one grid step and recomputes
/// the middle-party vectors, whose evolution length grows with `t`.
fn advance(prop: &Propagator, mut s: ProtocolStates, n: usize, t: f64, dt: f64) -> Result<ProtocolStates> {
    s.psi_t = prop.evolve_raw(&s.psi_t, dt)?;
    s.psi_2t = prop.evolve_raw(&s.psi_2t, 2.0 * dt)?;
    for p in 0..3 {
        s.a_t[p] = prop.evolve_raw(&s.a_t[p], dt)?;
        s.a_2t[p] = prop.evolve_raw(&s.a_2t[p], 2.0 * dt)?;
    }
    s.b_t = ProtocolStates::middle(prop, &s.psi_t, n, t)?;
    Ok(s)
}

fn evaluate(raw: &KMatrix, ht: f64, optimize: bool) -> Result<ScanPoint> {
    let sym = raw.symmetrize();
    let mut point = ScanPoint {
        ht,
        k_axes: raw.diagonal(),
        k_opt: None,
        axis_opt: None,
        degenerate: false,
        antisymmetric_residual: raw.antisymmetric_residual,
        error: None,
    };
    if optimize {
        let opt = optimize_measurement(&sym)?;
        point.k_opt = Some(opt.lambda_max);
        point.axis_opt = Some(opt.axis.components());
        point.degenerate = opt.degenerate;
    }
    Ok(point)
}
