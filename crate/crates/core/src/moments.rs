//! Field moments of the joint state and closed forms for `Re<a^2(T)>`.

use crate::error::{Error, Result};
use crate::evolution::JointState;
use crate::fockspace::{photon_distribution, TruncatedFieldState};
use crate::model::ModelParams;
use crate::special::{self, falling_factorial};
use crate::C64;

/// Moments entering the order-`N` squeezing factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub order: usize,
    /// `<a^N>`
    pub a_n: C64,
    /// `<a^{2N}>`
    pub a_2n: C64,
    /// `<a^{+N} a^N>`
    pub adag_n_a_n: f64,
    /// `<a^N a^{+N} - a^{+N} a^N>`
    pub commutator: f64,
}

fn check_headroom(state: &JointState, k: usize) -> Result<()> {
    if state.headroom() < k {
        return Err(Error::Headroom {
            required: k,
            available: state.headroom(),
        });
    }
    Ok(())
}

/// `<a^k(T)>` of the reduced field state.
pub fn field_moment(state: &JointState, k: usize) -> Result<C64> {
    if k == 0 {
        return Err(Error::invalid("moment order must be at least 1"));
    }
    check_headroom(state, k)?;
    let m = state.m() as u64;
    let (e, g) = (state.excited(), state.ground());
    let kk = k as u64;
    let mut acc = C64::new(0.0, 0.0);
    for n in 0..e.len() - k {
        let n64 = n as u64;
        let up = falling_factorial(n64 + kk, kk).sqrt();
        let down = falling_factorial(n64 + m + kk, kk).sqrt();
        acc += e[n].conj() * e[n + k] * up + g[n].conj() * g[n + k] * down;
    }
    Ok(acc)
}

/// Normally ordered `<a^{+N} a^N>`; photon numbers below `N` contribute zero.
pub fn number_moment(state: &JointState, order: usize) -> f64 {
    let m = state.m() as u64;
    let nn = order as u64;
    state
        .excited()
        .iter()
        .zip(state.ground())
        .enumerate()
        .map(|(n, (e, g))| {
            let n = n as u64;
            falling_factorial(n, nn) * e.norm_sqr() + falling_factorial(n + m, nn) * g.norm_sqr()
        })
        .sum()
}

/// `<a^N a^{+N} - a^{+N} a^N>`, diagonal in the Fock basis.
pub fn commutator_moment(state: &JointState, order: usize) -> f64 {
    let m = state.m() as u64;
    let nn = order as u64;
    let weight = |j: u64| falling_factorial(j + nn, nn) - falling_factorial(j, nn);
    state
        .excited()
        .iter()
        .zip(state.ground())
        .enumerate()
        .map(|(n, (e, g))| {
            let n = n as u64;
            weight(n) * e.norm_sqr() + weight(n + m) * g.norm_sqr()
        })
        .sum()
}

pub fn moment_set(state: &JointState, order: usize) -> Result<MomentSet> {
    if order == 0 {
        return Err(Error::invalid("squeezing order must be at least 1"));
    }
    Ok(MomentSet {
        order,
        a_n: field_moment(state, order)?,
        a_2n: field_moment(state, 2 * order)?,
        adag_n_a_n: number_moment(state, order),
        commutator: commutator_moment(state, order),
    })
}

/// Coefficient of `sin(T gamma_{n+2}) sin(T gamma_n)` in `Re<a^2>`:
///
/// `(eta^2/4 + ((n+m+2)!/(n+2)!) f(n+m) f(n+m+2)) / (gamma_{n+2} gamma_n)`.
///
/// At `eta = 0` it collapses to `sqrt((n+m+1)(n+m+2) / ((n+1)(n+2)))` for
/// either nonlinearity.
pub fn a2_coefficient(params: &ModelParams, n: usize) -> f64 {
    let m = params.m() as u64;
    let n64 = n as u64;
    let f = params.nonlinearity();
    let cross = falling_factorial(n64 + m + 2, m) * f.f(n64 + m) * f.f(n64 + m + 2);
    (0.25 * params.eta() * params.eta() + cross) / (params.gamma(n + 2) * params.gamma(n))
}

fn coherent_alpha(field: &TruncatedFieldState) -> Result<f64> {
    field.coherent_alpha().ok_or_else(|| {
        Error::UnsupportedState("closed forms for <a^2> assume a real coherent field".into())
    })
}

/// `Re<a^2(T)>` from the double-cosine closed form (exact for coherent input).
pub fn re_a2_closed_form(field: &TruncatedFieldState, params: &ModelParams, t: f64) -> Result<f64> {
    let alpha = coherent_alpha(field)?;
    let p = photon_distribution(field);
    let mut gamma_n = params.gamma(0);
    let mut gamma_n1 = params.gamma(1);
    let mut sum = 0.0;
    for (n, pn) in p.iter().enumerate() {
        let gamma_n2 = params.gamma(n + 2);
        let (s0, c0) = special::sin_cos(t * gamma_n);
        let (s2, c2) = special::sin_cos(t * gamma_n2);
        sum += pn * (c2 * c0 + a2_coefficient(params, n) * s2 * s0);
        gamma_n = gamma_n1;
        gamma_n1 = gamma_n2;
    }
    Ok(alpha * alpha * sum)
}

/// Harmonic approximation `nbar sum_n P(n) cos(T Omega_n)` with
/// `Omega_n = gamma_{n+2} - gamma_n` and `nbar = alpha^2`.
pub fn harmonic_approx_a2(
    field: &TruncatedFieldState,
    params: &ModelParams,
    t: f64,
) -> Result<f64> {
    let alpha = coherent_alpha(field)?;
    let sum: f64 = photon_distribution(field)
        .iter()
        .enumerate()
        .map(|(n, pn)| pn * special::cos(t * (params.gamma(n + 2) - params.gamma(n))))
        .sum();
    Ok(alpha * alpha * sum)
}
