use std::path::PathBuf;

use spatial_lgi::dynamics::Propagator;
use spatial_lgi::lgi::{noninteracting_k, sample_sequential, single_spin_k, MeasurementEvent};
use spatial_lgi::report::{
    sweep_rows, write_csv, write_json, LightConeReport, Metadata, OracleRow, ReportKind, SampleReport, TableCsvRow,
    TableReport,
};
use spatial_lgi::scan::{
    light_cone_fit, sweep, table_rows, taus, ModelTemplate, ScanConfig, ScanResult, TimeGrid, TABLE_TOLERANCE,
    TABLE_WINDOW,
};
use spatial_lgi::spin::{ChainSpec, Hamiltonian, InteractionRange, PauliAxis, StateVector};
use spatial_lgi::{Error, Result};

use crate::args::{Cli, Command, LightconeArgs, OracleArgs, SampleArgs, SweepArgs, TableArgs};
use crate::output::{destination, emit, resolve_format, Format};
use crate::settings::{layer, parse_distances, resolve_model, Diagnostics, FileConfig, ModelChoice};

pub fn execute(cli: Cli) -> Result<()> {
    let file = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Sweep(a) => run_sweep(a, &file),
        Command::Lightcone(a) => run_lightcone(a, &file),
        Command::Table(a) => run_table(a, &file),
        Command::Sample(a) => run_sample(a, &file),
        Command::Oracle(a) => run_oracle(a, &file),
    }
}

fn distances(flag: Option<String>, file: &FileConfig, default: &str, diag: &mut Diagnostics) -> Vec<usize> {
    let text = layer(flag, file.distances(), default.to_string());
    parse_distances(&text).unwrap_or_else(|e| {
        diag.push(format!("--n: {e}"));
        Vec::new()
    })
}

fn grid(flag: Option<String>, file: &FileConfig, diag: &mut Diagnostics) -> Option<TimeGrid> {
    let text = flag.or_else(|| file.grid.clone())?;
    diag.absorb(text.parse::<TimeGrid>())
}

fn scan_config(model: &ModelChoice, distances: Vec<usize>) -> ScanConfig {
    let mut c = ScanConfig::new(distances, model.template);
    c.engine = model.engine;
    c.krylov = model.krylov;
    c
}

fn output_path(flag: Option<PathBuf>, file: &FileConfig) -> Option<PathBuf> {
    flag.or_else(|| file.output.clone())
}

fn warn_failures(result: &ScanResult) {
    for s in result.series.iter().filter(|s| s.failures > 0) {
        let first = s.points.iter().find_map(|p| p.error.as_deref()).unwrap_or("");
        eprintln!("warning: n = {}: {} grid points failed ({first})", s.n, s.failures);
    }
}

fn run_sweep(a: SweepArgs, file: &FileConfig) -> Result<()> {
    let mut diag = Diagnostics::default();
    let model = resolve_model(&a.model, file, &mut diag);
    let mut config = scan_config(&model, distances(a.n, file, "2..6", &mut diag));
    if let Some(g) = grid(a.grid, file, &mut diag) {
        config.grid = g;
    }
    config.violation_threshold = layer(a.threshold, file.threshold, config.violation_threshold);
    config.optimize = !a.no_optimize && file.optimize.unwrap_or(true);
    config.refine_tau = a.refine_tau || file.refine_tau.unwrap_or(false);
    config.peak_window = layer(a.window, file.window, config.peak_window);
    let format = resolve_format(a.out.format.or_else(|| file.format.clone()), Format::Csv, &[Format::Csv, Format::Json], &mut diag);
    diag.absorb(config.validate());
    diag.finish()?;

    let result = sweep(&config)?;
    warn_failures(&result);
    let dest = destination(output_path(a.out.output, file), "sweep", format);
    emit(&dest, |w| match format {
        Format::Csv => write_csv(w, &Metadata::for_scan(ReportKind::Sweep, &config), &sweep_rows(&result)),
        Format::Json => write_json(w, &result),
    })
}

fn run_lightcone(a: LightconeArgs, file: &FileConfig) -> Result<()> {
    let mut diag = Diagnostics::default();
    let model = resolve_model(&a.model, file, &mut diag);
    let mut config = scan_config(&model, distances(a.n, file, "2..6", &mut diag));
    if let Some(g) = grid(a.grid, file, &mut diag) {
        config.grid = g;
    }
    config.violation_threshold = layer(a.threshold, file.threshold, config.violation_threshold);
    config.optimize = !a.no_optimize && file.optimize.unwrap_or(true);
    config.refine_tau = a.refine_tau || file.refine_tau.unwrap_or(false);
    config.stop_at_violation = true;
    let fit_text = layer(a.fit_range, file.fit_range.clone(), "2..6".into());
    match parse_distances(&fit_text) {
        Ok(ns) if ns.len() >= 2 => config.fit_range = (ns[0], ns[ns.len() - 1]),
        Ok(_) => diag.push(format!("--fit-range '{fit_text}' needs at least two distances")),
        Err(e) => diag.push(format!("--fit-range: {e}")),
    }
    let missing: Vec<usize> = (config.fit_range.0..=config.fit_range.1)
        .filter(|n| !config.distances.contains(n))
        .collect();
    if !missing.is_empty() {
        diag.push(format!("--fit-range covers n = {missing:?}, which --n does not scan"));
    }
    resolve_format(a.out.format.or_else(|| file.format.clone()), Format::Json, &[Format::Json], &mut diag);
    diag.absorb(config.validate());
    diag.finish()?;

    let result = sweep(&config)?;
    warn_failures(&result);
    let fit = light_cone_fit(&taus(&result), config.fit_range);
    let report = LightConeReport::new(&result, fit.as_ref().ok().cloned());
    let dest = destination(output_path(a.out.output, file), &format!("lightcone-{}", model.template.range.label()), Format::Json);
    emit(&dest, |w| write_json(w, &report))?;
    let fit = fit?;
    eprintln!(
        "{}: slope {:.4}, intercept {:.4}, rms residual {:.2e}",
        model.template.range.label(),
        fit.slope,
        fit.intercept,
        fit.rms_residual
    );
    Ok(())
}

fn run_table(a: TableArgs, file: &FileConfig) -> Result<()> {
    let mut diag = Diagnostics::default();
    let model = resolve_model(&a.model, file, &mut diag);
    let mut config = scan_config(&model, distances(a.n, file, "2..7", &mut diag));
    let window = layer(a.window, file.window, TABLE_WINDOW);
    let step = layer(a.step, file.step, 0.01);
    if let Some(g) = diag.absorb(TimeGrid::new(0.0, window, step)) {
        config.grid = g;
    }
    config.peak_window = window;
    let format = resolve_format(a.out.format.or_else(|| file.format.clone()), Format::Csv, &[Format::Csv, Format::Json], &mut diag);
    diag.absorb(config.validate());
    diag.finish()?;

    let result = sweep(&config)?;
    warn_failures(&result);
    let rows = table_rows(&result);
    let metadata = Metadata::for_scan(ReportKind::Table, &config);
    let dest = destination(output_path(a.out.output, file), &format!("table-{}", model.template.range.label()), format);
    emit(&dest, |w| match format {
        Format::Csv => {
            let csv_rows: Vec<TableCsvRow> = rows.iter().map(TableCsvRow::from).collect();
            write_csv(w, &metadata, &csv_rows)
        }
        Format::Json => write_json(
            w,
            &TableReport {
                metadata: metadata.clone(),
                window,
                tolerance: TABLE_TOLERANCE,
                rows: rows.clone(),
            },
        ),
    })
}

/// `site:axis:ht` with a 1-based site.
fn parse_event(what: &str, text: &str, field_h: f64, diag: &mut Diagnostics) -> Option<MeasurementEvent> {
    let parts: Vec<&str> = text.split(':').collect();
    let [site, axis, ht] = parts[..] else {
        diag.push(format!("{what}: '{text}' is not site:axis:ht"));
        return None;
    };
    let site = diag.parse::<usize>(&format!("{what} site"), site.trim());
    let axis = diag.parse::<PauliAxis>(&format!("{what} axis"), axis);
    let ht = diag.parse::<f64>(&format!("{what} time"), ht.trim());
    let (site, axis, ht) = (site?, axis?, ht?);
    diag.absorb(MeasurementEvent::new(site, axis, ht / field_h))
}

fn run_sample(a: SampleArgs, file: &FileConfig) -> Result<()> {
    let mut diag = Diagnostics::default();
    let model = resolve_model(&a.model, file, &mut diag);
    let n_sites = layer(a.n_sites, file.n_sites, 3);
    let h = model.template.field_h;
    if !(h > 0.0 && h.is_finite()) {
        diag.push(format!("--h must be > 0 (times are h*t), got {h}"));
    }
    let first_text = layer(a.first, file.first.clone(), "1:x:0".into());
    let second_text = layer(a.second, file.second.clone(), format!("{n_sites}:x:1"));
    let first = parse_event("--first", &first_text, h, &mut diag);
    let second = parse_event("--second", &second_text, h, &mut diag);
    let shots = layer(a.shots, file.shots, 100_000);
    let seed = layer(a.seed, file.seed, 0);
    if shots == 0 {
        diag.push("--shots must be >= 1");
    }
    for (what, ev) in [("--first", &first), ("--second", &second)] {
        if let Some(ev) = ev {
            if ev.site == 0 || ev.site > n_sites {
                diag.push(format!("{what}: site {} outside 1..={n_sites}", ev.site));
            }
        }
    }
    if let (Some(f), Some(s)) = (&first, &second) {
        if f.time > s.time {
            diag.push(format!("--first at h*t = {} comes after --second at {}", f.time * h, s.time * h));
        }
    }
    let spec = ChainSpec::new(n_sites, model.template.coupling_j, h, model.template.range)
        .with_couplings(model.template.couplings);
    diag.absorb(spec.validate());
    resolve_format(a.out.format.or_else(|| file.format.clone()), Format::Json, &[Format::Json], &mut diag);
    diag.finish()?;
    let (first, second) = (first.expect("validated"), second.expect("validated"));

    let prop = Propagator::with_settings(Hamiltonian::new(spec)?, model.engine, model.krylov)?;
    let psi0 = StateVector::plus(n_sites)?;
    let outcome = sample_sequential(&prop, &psi0, &first, &second, shots, seed)?;
    eprintln!(
        "estimate {:.6} (exact {:.6}, {} shots, seed {})",
        outcome.estimate, outcome.exact, shots, seed
    );
    let report = SampleReport {
        metadata: Metadata {
            model: Some(model.template),
            engine: Some(prop.engine()),
            krylov: Some(model.krylov),
            seed: Some(seed),
            ..Metadata::new(ReportKind::Sample)
        },
        n_sites,
        first,
        second,
        outcome,
    };
    let dest = destination(output_path(a.out.output, file), "sample", Format::Json);
    emit(&dest, |w| write_json(w, &report))
}

fn run_oracle(a: OracleArgs, file: &FileConfig) -> Result<()> {
    let mut diag = Diagnostics::default();
    let kind = layer(a.kind, file.kind.clone(), "noninteracting".into());
    let curve: Option<fn(f64) -> f64> = match kind.as_str() {
        "noninteracting" => Some(noninteracting_k),
        "single-spin" => Some(single_spin_k),
        other => {
            diag.push(format!("--kind: '{other}' is not noninteracting or single-spin"));
            None
        }
    };
    let g = grid(a.grid, file, &mut diag).unwrap_or_default();
    resolve_format(a.out.format.or_else(|| file.format.clone()), Format::Csv, &[Format::Csv], &mut diag);
    diag.finish()?;
    let curve = curve.ok_or_else(|| Error::InvalidArgument(kind.clone()))?;

    let rows: Vec<OracleRow> = g.points().into_iter().map(|ht| OracleRow { ht, k: curve(ht) }).collect();
    let metadata = Metadata {
        model: Some(ModelTemplate::new(0.0, 1.0, InteractionRange::Nn)),
        grid: Some(g),
        curve: Some(kind.clone()),
        ..Metadata::new(ReportKind::Oracle)
    };
    let dest = destination(output_path(a.out.output, file), &format!("oracle-{kind}"), Format::Csv);
    emit(&dest, |w| write_csv(w, &metadata, &rows))
}
