//! Series builders behind the figure commands.

use rayon::prelude::*;

use crate::analysis::{
    center_offset, detect_revivals, pattern_similarity, rabi_frequency_profile, revival_time_ijcm,
    revival_time_sjcm, RevivalDetector,
};
use crate::error::{Error, Result};
use crate::evolution::{atomic_inversion, evolve, TimeGrid};
use crate::fockspace::{
    headroom_for, mean_photon_number, photon_distribution, TruncatedFieldState,
};
use crate::model::{ModelParams, Nonlinearity};
use crate::squeezing::{self, rescaling_factor, squeezing_factors};
use crate::timeseries::TimeSeries;

use super::RunConfig;

/// Shortest round-trip form, switching to exponent notation for very small or
/// large magnitudes.
fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn params(cfg: &RunConfig) -> Result<ModelParams> {
    ModelParams::new(cfg.m, cfg.model, cfg.eta)
}

fn grid(cfg: &RunConfig, field: &TruncatedFieldState, p: &ModelParams) -> Result<TimeGrid> {
    match cfg.steps {
        Some(steps) => TimeGrid::new(cfg.t_max, steps),
        None => TimeGrid::resolving(cfg.t_max, p.rabi_spectrum(field.n_max()).max()),
    }
}

fn base_metadata(
    series: &mut TimeSeries,
    command: &str,
    cfg: &RunConfig,
    field: &TruncatedFieldState,
) -> Result<()> {
    series.set_meta("command", command)?;
    series.set_meta("model", cfg.model.label())?;
    series.set_meta("m", cfg.m)?;
    series.set_meta("field", cfg.field.describe())?;
    if let Some(path) = &cfg.field_path {
        series.set_meta("field_file", path.display())?;
    }
    series.set_meta("eta", num(cfg.eta))?;
    series.set_meta("tail_tol", num(cfg.tail_tol))?;
    series.set_meta("n_max", field.n_max())?;
    series.set_meta("tail_mass", num(field.tail_mass()))?;
    Ok(())
}

fn grid_metadata(series: &mut TimeSeries, grid: &TimeGrid) -> Result<()> {
    series.set_meta("t_max", num(grid.t_max()))?;
    series.set_meta("steps", grid.steps())
}

fn inversion_values(field: &TruncatedFieldState, p: &ModelParams, times: &[f64]) -> Vec<f64> {
    times
        .par_iter()
        .map(|&t| atomic_inversion(&evolve(field, p, t)))
        .collect()
}

/// `T,sigma_z`.
pub fn inversion_series(cfg: &RunConfig) -> Result<TimeSeries> {
    let p = params(cfg)?;
    let field = cfg.field.truncate(cfg.tail_tol, 0)?;
    let grid = grid(cfg, &field, &p)?;
    let times = grid.points();
    let sz = inversion_values(&field, &p, &times);
    let mut series = TimeSeries::new("T", times)?.with_column("sigma_z", sz)?;
    base_metadata(&mut series, "inversion", cfg, &field)?;
    grid_metadata(&mut series, &grid)?;
    Ok(series)
}

/// `T,S_N,Q_N,commutator,uncertainty_product` with `N` replaced by the order.
pub fn squeezing_series(cfg: &RunConfig) -> Result<TimeSeries> {
    let p = params(cfg)?;
    let field = cfg
        .field
        .truncate(cfg.tail_tol, headroom_for(cfg.order, cfg.m))?;
    let grid = grid(cfg, &field, &p)?;
    let times = grid.points();
    let records = times
        .par_iter()
        .map(|&t| squeezing_factors(&evolve(&field, &p, t), cfg.order))
        .collect::<Result<Vec<_>>>()?;
    let n = cfg.order;
    let mut series = TimeSeries::new("T", times)?
        .with_column(format!("S_{n}"), records.iter().map(|r| r.s).collect())?
        .with_column(format!("Q_{n}"), records.iter().map(|r| r.q).collect())?
        .with_column("commutator", records.iter().map(|r| r.commutator).collect())?
        .with_column(
            "uncertainty_product",
            records.iter().map(|r| r.uncertainty_product).collect(),
        )?;
    base_metadata(&mut series, "squeezing", cfg, &field)?;
    series.set_meta("order", n)?;
    grid_metadata(&mut series, &grid)?;
    Ok(series)
}

fn join(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|&x| num(x)).collect();
    parts.join(" ")
}

/// `T,V_N`, plus `sigma_z_m1` and similarity metadata when `compare` is set.
///
/// The similarity is reported twice: Pearson correlation of the raw columns,
/// which is dominated by the relative phase of the fast oscillations, and of
/// their revival envelopes.
pub fn rescaled_series(cfg: &RunConfig, compare: bool) -> Result<TimeSeries> {
    let p = params(cfg)?;
    let field = cfg
        .field
        .truncate(cfg.tail_tol, headroom_for(cfg.order, cfg.m))?;
    let grid = grid(cfg, &field, &p)?;
    let times = grid.points();
    let v = squeezing::rescaled_series(&field, &p, cfg.order, &times)?;
    let v_name = format!("V_{}", cfg.order);
    let mut series = TimeSeries::new("T", times.clone())?.with_column(v_name.clone(), v)?;
    base_metadata(&mut series, "rescaled", cfg, &field)?;
    series.set_meta("order", cfg.order)?;
    series.set_meta("b", num(rescaling_factor(cfg.model)))?;
    grid_metadata(&mut series, &grid)?;
    if compare {
        let p1 = p.with_m(1)?;
        let field1 = cfg.field.truncate(cfg.tail_tol, 0)?;
        series.add_column("sigma_z_m1", inversion_values(&field1, &p1, &times))?;
        let n_bar = mean_photon_number(&field1);
        let period = match cfg.model {
            Nonlinearity::IntensityDependent => revival_time_ijcm(cfg.eta, n_bar)?,
            Nonlinearity::Standard => revival_time_sjcm(cfg.eta, n_bar)?,
        };
        let detector = RevivalDetector::for_period(period);
        let rv = detect_revivals(&series, &v_name, &detector)?;
        let rs = detect_revivals(&series, "sigma_z_m1", &detector)?;
        let fmt = |r: Result<f64>| r.map_or_else(|_| "undefined".to_string(), num);
        let raw = pattern_similarity(
            series.column(&v_name).unwrap(),
            series.column("sigma_z_m1").unwrap(),
        );
        series.set_meta("revival_period", num(period))?;
        series.set_meta("similarity_raw", fmt(raw))?;
        series.set_meta(
            "similarity_envelope",
            fmt(pattern_similarity(&rv.envelope, &rs.envelope)),
        )?;
        series.set_meta("centers_V", join(&rv.centers))?;
        series.set_meta("centers_sigma_z_m1", join(&rs.centers))?;
        series.set_meta(
            "center_offset",
            center_offset(&rv.centers, &rs.centers).map_or_else(|| "undefined".to_string(), num),
        )?;
    }
    Ok(series)
}

/// `n,omega_n,p_n`, with one `omega_n_eta<value>` column per extra detuning.
pub fn rabi_profile_series(
    cfg: &RunConfig,
    n_min: usize,
    n_max: Option<usize>,
    rescale: Option<f64>,
    compare_eta: &[f64],
) -> Result<TimeSeries> {
    let p = params(cfg)?;
    let field = cfg.field.truncate(cfg.tail_tol, 0)?;
    let n_max = n_max.unwrap_or(field.n_max());
    if n_max < n_min {
        return Err(Error::invalid(format!("empty range {n_min}..={n_max}")));
    }
    let scale = rescale.unwrap_or(1.0);
    if !(scale.is_finite() && scale != 0.0) {
        return Err(Error::invalid("rescale factor must be finite and nonzero"));
    }
    let ns: Vec<f64> = (n_min..=n_max).map(|n| n as f64).collect();
    let omega = |q: &ModelParams| -> Vec<f64> {
        rabi_frequency_profile(q, n_min..=n_max)
            .into_iter()
            .map(|w| w / scale)
            .collect()
    };
    let dist = photon_distribution(&field);
    let pn = (n_min..=n_max)
        .map(|n| dist.get(n).copied().unwrap_or(0.0))
        .collect();
    let mut series = TimeSeries::new("n", ns)?
        .with_column("omega_n", omega(&p))?
        .with_column("p_n", pn)?;
    for &eta in compare_eta {
        series.add_column(format!("omega_n_eta{eta}"), omega(&p.with_eta(eta)?))?;
    }
    base_metadata(&mut series, "rabi-profile", cfg, &field)?;
    series.set_meta("rescale", num(scale))?;
    if !compare_eta.is_empty() {
        series.set_meta("compare_eta", join(compare_eta))?;
    }
    Ok(series)
}
