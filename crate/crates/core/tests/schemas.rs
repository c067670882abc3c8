//! Column names and JSON keys read by the plotting scripts. Changing any of
//! these breaks downstream readers.

use serde_json::Value;
use spatial_lgi::report::{write_json, write_sweep_csv, LightConeReport, Metadata, ReportKind, SWEEP_COLUMNS};
use spatial_lgi::scan::{light_cone_fit, sweep, taus, ModelTemplate, ScanConfig, TimeGrid};
use spatial_lgi::spin::InteractionRange;

fn keys(v: &Value) -> Vec<String> {
    let mut k: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
    k.sort();
    k
}

fn small_result() -> spatial_lgi::scan::ScanResult {
    let mut c = ScanConfig::new(vec![2, 3], ModelTemplate::new(1.0, 1.0, InteractionRange::Nn));
    c.grid = TimeGrid::new(0.0, 1.0, 0.05).unwrap();
    c.fit_range = (2, 3);
    sweep(&c).unwrap()
}

#[test]
fn sweep_csv_header() {
    assert_eq!(
        SWEEP_COLUMNS,
        ["n", "ht", "K_fixed_x", "K_opt", "vx", "vy", "vz", "K_fixed_y", "K_fixed_z", "error"]
    );
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &small_result()).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    let meta: Value = serde_json::from_str(lines.next().unwrap().strip_prefix("# metadata: ").unwrap()).unwrap();
    assert_eq!(lines.next().unwrap(), SWEEP_COLUMNS.join(","));
    assert_eq!(meta["kind"], "sweep");
}

#[test]
fn metadata_fields() {
    let v = serde_json::to_value(Metadata::new(ReportKind::Table)).unwrap();
    assert_eq!(
        keys(&v),
        ["curve", "engine", "generator_version", "grid", "kind", "krylov", "model", "schema_version", "seed", "threshold"]
    );
    let scan = serde_json::to_value(Metadata::for_scan(ReportKind::Sweep, &small_result().config)).unwrap();
    assert_eq!(keys(&scan["model"]), ["coupling_j", "couplings", "field_h", "range"]);
    assert_eq!(keys(&scan["grid"]), ["start", "step", "stop"]);
    assert_eq!(scan["model"]["range"], "nn");
    assert_eq!(scan["engine"], "auto");
}

#[test]
fn lightcone_document() {
    let result = small_result();
    let fit = light_cone_fit(&taus(&result), (2, 3)).unwrap();
    let mut buf = Vec::new();
    write_json(&mut buf, &LightConeReport::new(&result, Some(fit))).unwrap();
    let v: Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(keys(&v), ["fit", "metadata", "taus"]);
    assert_eq!(keys(&v["taus"][0]), ["n", "refined", "tau"]);
    assert_eq!(keys(&v["fit"]), ["intercept", "n_range", "residuals", "rms_residual", "slope"]);
    assert_eq!(v["metadata"]["kind"], "lightcone");
}

#[test]
fn sweep_document() {
    let v = serde_json::to_value(small_result()).unwrap();
    assert_eq!(keys(&v), ["config", "fit", "series", "version"]);
    assert_eq!(
        keys(&v["series"][0]),
        ["engine", "failures", "n", "n_sites", "peak", "points", "source", "tau", "tau_refined"]
    );
    assert_eq!(
        keys(&v["series"][0]["points"][0]),
        ["antisymmetric_residual", "axis_opt", "degenerate", "error", "ht", "k_axes", "k_opt"]
    );
    assert_eq!(v["series"][0]["engine"], "dense-spectral");
}
