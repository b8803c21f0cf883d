//! Quadrature squeezing of `X_N = (a^N + a^{+N})/2`, `Y_N = (a^N - a^{+N})/2i`
//! and the rescaled squeezing factor that mirrors the single-photon atomic
//! inversion.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolution::{evolve, JointState};
use crate::fockspace::{mean_photon_number, TruncatedFieldState};
use crate::model::{ModelParams, Nonlinearity};
use crate::moments::{field_moment, moment_set};

/// Squeezing diagnostics at one time point. A factor below zero signals
/// squeezing in that quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingRecord {
    pub time: f64,
    pub order: usize,
    /// `S_N = <a^{+N} a^N> + Re<a^{2N}> - 2 (Re<a^N>)^2`
    pub s: f64,
    /// `Q_N = <a^{+N} a^N> - Re<a^{2N}> - 2 (Im<a^N>)^2`
    pub q: f64,
    pub commutator: f64,
    /// `<(dX_N)^2> <(dY_N)^2>`
    pub uncertainty_product: f64,
    pub rescaled: Option<f64>,
}

impl SqueezingRecord {
    pub fn variance_x(&self) -> f64 {
        0.25 * (self.commutator + 2.0 * self.s)
    }

    pub fn variance_y(&self) -> f64 {
        0.25 * (self.commutator + 2.0 * self.q)
    }

    /// Lower bound `|<C_N>|^2 / 16` on the uncertainty product.
    pub fn uncertainty_bound(&self) -> f64 {
        self.commutator * self.commutator / 16.0
    }
}

pub fn squeezing_factors(state: &JointState, order: usize) -> Result<SqueezingRecord> {
    let mo = moment_set(state, order)?;
    let s = mo.adag_n_a_n + mo.a_2n.re - 2.0 * mo.a_n.re * mo.a_n.re;
    let q = mo.adag_n_a_n - mo.a_2n.re - 2.0 * mo.a_n.im * mo.a_n.im;
    let c = mo.commutator;
    Ok(SqueezingRecord {
        time: state.time(),
        order,
        s,
        q,
        commutator: c,
        uncertainty_product: 0.25 * (c + 2.0 * s) * 0.25 * (c + 2.0 * q),
        rescaled: None,
    })
}

/// Time-rescaling parameter `b`: 2/3 for the standard model, 1/2 for the
/// intensity-dependent one.
pub fn rescaling_factor(nonlinearity: Nonlinearity) -> f64 {
    match nonlinearity {
        Nonlinearity::Standard => 2.0 / 3.0,
        Nonlinearity::IntensityDependent => 0.5,
    }
}

/// `V_N(T) = (nbar^N - Q_N(b T / N)) / nbar^N`.
///
/// `b` keeps its resonant value off resonance too.
pub fn rescaled_squeezing(
    field: &TruncatedFieldState,
    params: &ModelParams,
    order: usize,
    t: f64,
) -> Result<f64> {
    let reference = rescaling_reference(field, order)?;
    let scaled_t = rescaling_factor(params.nonlinearity()) * t / order as f64;
    let rec = squeezing_factors(&evolve(field, params, scaled_t), order)?;
    Ok((reference - rec.q) / reference)
}

fn rescaling_reference(field: &TruncatedFieldState, order: usize) -> Result<f64> {
    if order == 0 {
        return Err(Error::invalid("squeezing order must be at least 1"));
    }
    let nbar = mean_photon_number(field);
    if nbar <= 0.0 {
        return Err(Error::DegenerateState(
            "rescaled squeezing divides by the initial mean photon number, which is zero".into(),
        ));
    }
    Ok(nbar.powi(order as i32))
}

/// [`rescaled_squeezing`] over a list of times, evaluated in parallel.
pub fn rescaled_series(
    field: &TruncatedFieldState,
    params: &ModelParams,
    order: usize,
    times: &[f64],
) -> Result<Vec<f64>> {
    rescaling_reference(field, order)?;
    times
        .par_iter()
        .map(|&t| rescaled_squeezing(field, params, order, t))
        .collect()
}

fn require_resonance(params: &ModelParams) -> Result<()> {
    if params.eta() != 0.0 {
        return Err(Error::UnsupportedRegime(format!(
            "proportionality factor is defined on resonance only, got eta = {}",
            params.eta()
        )));
    }
    Ok(())
}

/// `mu_1 = (gamma_{n+2} - gamma_n) / (2 (n+1))` on resonance.
pub fn mu1_exact(params: &ModelParams, n: usize) -> Result<f64> {
    require_resonance(params)?;
    Ok((params.gamma(n + 2) - params.gamma(n)) / (2.0 * (n as f64 + 1.0)))
}

/// Three-term strong-intensity expansion of `mu_1` for the
/// intensity-dependent model:
///
/// `(2(m+1) nbar^{(m-3)/2} + (3m^2+7m+6) nbar^{(m-5)/2} + ((m+2)^2(m+1) - 2m) nbar^{(m-7)/2}) / 4`.
pub fn mu1_asymptotic(params: &ModelParams, n_bar: f64) -> Result<f64> {
    require_resonance(params)?;
    if params.nonlinearity() != Nonlinearity::IntensityDependent {
        return Err(Error::UnsupportedRegime(
            "asymptotic proportionality factor is derived for f(n) = sqrt(n)".into(),
        ));
    }
    if !(n_bar.is_finite() && n_bar > 0.0) {
        return Err(Error::invalid(format!(
            "n_bar must be positive, got {n_bar}"
        )));
    }
    let m = params.m() as f64;
    let c0 = 2.0 * (m + 1.0);
    let c1 = 3.0 * m * m + 7.0 * m + 6.0;
    let c2 = (m + 2.0) * (m + 2.0) * (1.0 + m) - 2.0 * m;
    Ok(0.25
        * (c0 * n_bar.powf((m - 3.0) / 2.0)
            + c1 * n_bar.powf((m - 5.0) / 2.0)
            + c2 * n_bar.powf((m - 7.0) / 2.0)))
}

/// Left side `(3m^2 + 7m + 6) nbar^{(m-5)/2}` of the fidelity condition; the
/// rescaled factor tracks the inversion well once this drops below one.
pub fn intensity_condition_lhs(m: u32, n_bar: f64) -> f64 {
    let m = m as f64;
    (3.0 * m * m + 7.0 * m + 6.0) * n_bar.powf((m - 5.0) / 2.0)
}

/// Minimal initial mean photon number for faithful inversion readout from the
/// order-`N` rescaled squeezing factor.
///
/// Normal squeezing in the intensity-dependent model solves the fidelity
/// inequality for any `m < 5`. The remaining entries (amplitude-squared
/// squeezing, and the standard model) are the established three-photon
/// thresholds.
pub fn intensity_condition(params: &ModelParams, order: usize) -> Result<f64> {
    let m = params.m();
    match (params.nonlinearity(), order) {
        (Nonlinearity::IntensityDependent, 1) => {
            if m >= 5 {
                return Err(Error::UnsupportedRegime(format!(
                    "fidelity inequality has no solution for m = {m}"
                )));
            }
            let c = intensity_condition_lhs(m, 1.0);
            Ok(c.powf(2.0 / (5.0 - m as f64)))
        }
        (Nonlinearity::IntensityDependent, 2) if m == 3 => Ok(226.0),
        (Nonlinearity::Standard, 1) if m == 3 => Ok(18.0),
        (Nonlinearity::Standard, 2) if m == 3 => Ok(144.0),
        (kind, n) => Err(Error::UnsupportedRegime(format!(
            "no intensity threshold for {} with m = {m}, N = {n}",
            kind.label()
        ))),
    }
}

/// Time used to probe the selection rule away from `T = 0`.
const SELECTION_PROBE_T: f64 = 1.0;

/// Inversion read out from normal squeezing: `2 <n(0)> + 1 - 2 S_1(T)`.
///
/// Valid for single-photon models whose field keeps `<a(T)> = <a^2(T)> = 0`,
/// which is checked at `T = 0`, at a probe time and at `t` itself.
pub fn inversion_from_squeezing(
    field: &TruncatedFieldState,
    params: &ModelParams,
    t: f64,
) -> Result<f64> {
    if params.m() != 1 {
        return Err(Error::UnsupportedRegime(format!(
            "inversion readout needs m = 1, got m = {}",
            params.m()
        )));
    }
    let nbar = mean_photon_number(field);
    let tol = 1e-10 * nbar.max(1.0);
    for probe in [0.0, SELECTION_PROBE_T] {
        check_selection_rule(&evolve(field, params, probe), tol)?;
    }
    let state = evolve(field, params, t);
    check_selection_rule(&state, tol)?;
    let rec = squeezing_factors(&state, 1)?;
    Ok(2.0 * nbar + 1.0 - 2.0 * rec.s)
}

fn check_selection_rule(state: &JointState, tol: f64) -> Result<()> {
    for (k, name) in [(1, "<a>"), (2, "<a^2>")] {
        let magnitude = field_moment(state, k)?.norm();
        if magnitude > tol {
            return Err(Error::SelectionRule {
                moment: name,
                magnitude,
                time: state.time(),
            });
        }
    }
    Ok(())
}
