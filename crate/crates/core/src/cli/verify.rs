//! Reduced-scale oracle and invariant suite behind `ijcm verify`.

use std::f64::consts::FRAC_1_SQRT_2;

use rayon::prelude::*;

use crate::analysis::{detect_revivals, revival_time_ijcm, revival_time_sjcm, RevivalDetector};
use crate::error::Result;
use crate::evolution::{
    atomic_inversion, evolve_with_spectrum, inversion_closed_form, JointState, TimeGrid,
};
use crate::fockspace::{
    coherent_amplitudes, custom_state, headroom_for, mean_photon_number, DEFAULT_TAIL_TOL,
};
use crate::model::{ModelParams, Nonlinearity, RabiSpectrum};
use crate::moments::{field_moment, re_a2_closed_form};
use crate::oracle::{block_propagate_with_spectrum, max_ode_step, moment_oracle, ode_trajectory};
use crate::squeezing::inversion_from_squeezing;
use crate::timeseries::TimeSeries;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub alpha: f64,
    /// Relative perturbation applied to the Rabi spectrum shared by the
    /// analytic and block paths; the ODE oracle never sees it.
    pub tamper_gamma: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            alpha: 4.0,
            tamper_gamma: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: String, value: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: value <= tol,
        detail: format!("{value:.3e} (tolerance {tol:.0e})"),
    }
}

fn max_amplitude_diff(a: &JointState, b: &JointState) -> f64 {
    a.excited()
        .iter()
        .zip(b.excited())
        .chain(a.ground().iter().zip(b.ground()))
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

const TIMES: [f64; 4] = [0.0, 0.7, 1.3, 2.0];
const ETAS: [f64; 3] = [0.0, 20.0, 1000.0];

fn configurations() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for kind in [Nonlinearity::Standard, Nonlinearity::IntensityDependent] {
        for m in [1, 3] {
            for eta in ETAS {
                out.push(ModelParams::new(m, kind, eta).expect("valid parameters"));
            }
        }
    }
    out
}

fn label(p: &ModelParams) -> String {
    format!("{} m={} eta={}", p.nonlinearity().label(), p.m(), p.eta())
}

fn propagation_checks(p: &ModelParams, opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let field =
        coherent_amplitudes(opts.alpha, DEFAULT_TAIL_TOL)?.with_headroom(headroom_for(2, p.m()));
    let true_spectrum = p.rabi_spectrum(field.n_max());
    let spectrum = match opts.tamper_gamma {
        Some(eps) => RabiSpectrum::from_values(
            true_spectrum
                .values()
                .iter()
                .map(|g| g * (1.0 + eps))
                .collect(),
        ),
        None => true_spectrum.clone(),
    };
    let dt = max_ode_step(true_spectrum.max()) / 16.0;
    let ode = ode_trajectory(&field, p, &TIMES, dt)?;
    let mut analytic_block = 0.0f64;
    let mut block_ode = 0.0f64;
    let mut conservation = 0.0f64;
    let mut ode_conservation = 0.0f64;
    let mut moments = 0.0f64;
    let mut closed_forms = 0.0f64;
    let f1 = ode[0].excitation_number();
    let norm = ode[0].norm_sqr();
    for (&t, o) in TIMES.iter().zip(&ode) {
        let a = evolve_with_spectrum(&field, p, &spectrum, t);
        let b = block_propagate_with_spectrum(&field, p, &spectrum, t);
        analytic_block = analytic_block.max(max_amplitude_diff(&a, &b));
        block_ode = block_ode.max(max_amplitude_diff(&b, o));
        conservation = conservation
            .max((a.norm_sqr() - norm).abs())
            .max((a.excitation_number() - f1).abs());
        ode_conservation = ode_conservation
            .max((o.norm_sqr() - norm).abs())
            .max((o.excitation_number() - f1).abs());
        for k in 1..=4 {
            let exact = field_moment(&a, k)?;
            let literal = moment_oracle(&a, k)?;
            moments = moments.max((exact - literal).norm() / exact.norm().max(1.0));
        }
        closed_forms = closed_forms
            .max((inversion_closed_form(&field, p, t) - atomic_inversion(&a)).abs())
            .max((re_a2_closed_form(&field, p, t)? - field_moment(&a, 2)?.re).abs());
    }
    let l = label(p);
    Ok(vec![
        outcome(format!("analytic vs block [{l}]"), analytic_block, 1e-12),
        outcome(format!("block vs ODE [{l}]"), block_ode, 1e-8),
        outcome(format!("conservation, analytic [{l}]"), conservation, 1e-9),
        outcome(format!("conservation, ODE [{l}]"), ode_conservation, 1e-8),
        outcome(format!("moment oracle [{l}]"), moments, 1e-11),
        outcome(format!("closed forms [{l}]"), closed_forms, 1e-10),
    ])
}

fn readout_checks() -> Result<Vec<CheckOutcome>> {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(FRAC_1_SQRT_2, 0.0);
    let field = custom_state(&[one, zero, zero, one], headroom_for(1, 1))?;
    let grid = TimeGrid::new(10.0, 201)?;
    let mut out = Vec::new();
    for kind in [Nonlinearity::Standard, Nonlinearity::IntensityDependent] {
        for eta in [0.0, 20.0] {
            let p = ModelParams::new(1, kind, eta)?;
            let errs = grid
                .points()
                .par_iter()
                .map(|&t| {
                    let sz = atomic_inversion(&crate::evolution::evolve(&field, &p, t));
                    Ok((inversion_from_squeezing(&field, &p, t)? - sz).abs())
                })
                .collect::<Result<Vec<f64>>>()?;
            let worst = errs.into_iter().fold(0.0, f64::max);
            out.push(outcome(
                format!("inversion readout [{}]", label(&p)),
                worst,
                1e-9,
            ));
        }
    }
    Ok(out)
}

fn revival_checks(alpha: f64) -> Result<Vec<CheckOutcome>> {
    let field = coherent_amplitudes(alpha, DEFAULT_TAIL_TOL)?;
    let n_bar = mean_photon_number(&field);
    let mut out = Vec::new();
    for kind in [Nonlinearity::IntensityDependent, Nonlinearity::Standard] {
        for eta in [0.0, 20.0] {
            let p = ModelParams::new(1, kind, eta)?;
            let (predicted, span) = match kind {
                Nonlinearity::IntensityDependent => (revival_time_ijcm(eta, n_bar)?, 1.6),
                Nonlinearity::Standard => (revival_time_sjcm(eta, n_bar)?, 1.5),
            };
            let grid = TimeGrid::new(span * predicted, 20001)?;
            let times = grid.points();
            let sz = times
                .par_iter()
                .map(|&t| inversion_closed_form(&field, &p, t))
                .collect();
            let series = TimeSeries::new("T", times)?.with_column("sigma_z", sz)?;
            let report =
                detect_revivals(&series, "sigma_z", &RevivalDetector::for_period(predicted))?;
            let name = format!("first revival [{}]", label(&p));
            out.push(match report.first_center() {
                Some(c) => {
                    let rel = (c - predicted).abs() / predicted;
                    CheckOutcome {
                        name,
                        passed: rel <= 0.1,
                        detail: format!(
                            "measured {c:.5}, predicted {predicted:.5}, relative offset {rel:.3e} (tolerance 1e-1), {:?}",
                            report.quality
                        ),
                    }
                }
                None => CheckOutcome {
                    name,
                    passed: false,
                    detail: format!("no revival detected, predicted {predicted:.5}"),
                },
            });
        }
    }
    Ok(out)
}

/// Runs every check; errors are returned only for failures to evaluate.
pub fn run_suite(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let per_config = configurations()
        .par_iter()
        .map(|p| propagation_checks(p, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<CheckOutcome> = per_config.into_iter().flatten().collect();
    out.extend(readout_checks()?);
    out.extend(revival_checks(opts.alpha)?);
    Ok(out)
}
