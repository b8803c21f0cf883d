//! Closed-form joint atom-field state and atomic inversion.
//!
//! With the atom initially excited and the field in `sum_n c_n |n>`, each pair
//! `{|+, n>, |-, n+m>}` evolves independently:
//!
//! ```text
//! |psi(T)> = sum_n c_n [G1(n, T) |+, n> + G2(n, T) |-, n+m>]
//! G1 = cos(T gamma_n) - i (eta / 2 gamma_n) sin(T gamma_n)
//! G2 = -i kappa_n sin(T gamma_n) / gamma_n
//! ```

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fockspace::{photon_distribution, TruncatedFieldState};
use crate::model::{ModelParams, RabiSpectrum};
use crate::special;
use crate::C64;

/// Two-branch amplitudes at scaled time `T`.
///
/// `excited[n]` is the amplitude of `|+, n>` and `ground[n]` that of
/// `|-, n+m>`; both are indexed by the field photon number of the pair.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    time: f64,
    m: u32,
    excited: Vec<C64>,
    ground: Vec<C64>,
    support: usize,
    tail_mass: f64,
}

impl JointState {
    pub fn from_parts(
        time: f64,
        m: u32,
        excited: Vec<C64>,
        ground: Vec<C64>,
        support: usize,
        tail_mass: f64,
    ) -> Result<Self> {
        if excited.len() != ground.len() || excited.is_empty() {
            return Err(Error::invalid(format!(
                "branch lengths must match and be nonzero ({} vs {})",
                excited.len(),
                ground.len()
            )));
        }
        if support >= excited.len() {
            return Err(Error::invalid("support index beyond basis"));
        }
        Ok(JointState {
            time,
            m,
            excited,
            ground,
            support,
            tail_mass,
        })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn excited(&self) -> &[C64] {
        &self.excited
    }

    pub fn ground(&self) -> &[C64] {
        &self.ground
    }

    pub fn n_max(&self) -> usize {
        self.excited.len() - 1
    }

    pub fn support(&self) -> usize {
        self.support
    }

    pub fn headroom(&self) -> usize {
        self.n_max() - self.support
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sqr(&self) -> f64 {
        self.excited
            .iter()
            .chain(&self.ground)
            .map(|c| c.norm_sqr())
            .sum()
    }

    /// `<n(T)>` of the field.
    pub fn photon_number(&self) -> f64 {
        let m = self.m as f64;
        self.excited
            .iter()
            .zip(&self.ground)
            .enumerate()
            .map(|(n, (e, g))| n as f64 * e.norm_sqr() + (n as f64 + m) * g.norm_sqr())
            .sum()
    }

    /// `<n> + (m/2) <sigma_z>`, conserved by the dynamics.
    pub fn excitation_number(&self) -> f64 {
        self.photon_number() + 0.5 * self.m as f64 * atomic_inversion(self)
    }
}

/// `(G1, G2)` for the pair with field photon number `n`.
pub fn g1_g2(params: &ModelParams, n: usize, t: f64) -> (C64, C64) {
    let gamma = params.gamma(n);
    rotation(params.eta(), params.coupling_kernel(n), gamma, t)
}

fn rotation(eta: f64, kappa: f64, gamma: f64, t: f64) -> (C64, C64) {
    let (s, c) = special::sin_cos(t * gamma);
    // gamma = 0 only when eta = 0 and kappa = 0; sin(x)/x -> T there.
    let sinc = if gamma > 0.0 { s / gamma } else { t };
    (C64::new(c, -0.5 * eta * sinc), C64::new(0.0, -kappa * sinc))
}

/// Exact joint state at scaled time `t`.
pub fn evolve(field: &TruncatedFieldState, params: &ModelParams, t: f64) -> JointState {
    let spectrum = params.rabi_spectrum(field.n_max());
    evolve_with_spectrum(field, params, &spectrum, t)
}

/// [`evolve`] with an explicitly supplied Rabi spectrum.
///
/// Exists so verification can inject a perturbed spectrum and confirm the
/// independent propagator notices.
pub fn evolve_with_spectrum(
    field: &TruncatedFieldState,
    params: &ModelParams,
    spectrum: &RabiSpectrum,
    t: f64,
) -> JointState {
    let n_len = field.amplitudes().len();
    assert!(spectrum.len() >= n_len, "spectrum shorter than field basis");
    let mut excited = Vec::with_capacity(n_len);
    let mut ground = Vec::with_capacity(n_len);
    for (n, c) in field.amplitudes().iter().enumerate() {
        let (g1, g2) = rotation(params.eta(), params.coupling_kernel(n), spectrum.get(n), t);
        excited.push(c * g1);
        ground.push(c * g2);
    }
    JointState {
        time: t,
        m: params.m(),
        excited,
        ground,
        support: field.support(),
        tail_mass: field.tail_mass(),
    }
}

/// `<sigma_z(T)> = sum_n |e_n|^2 - |g_n|^2`.
pub fn atomic_inversion(state: &JointState) -> f64 {
    state
        .excited
        .iter()
        .zip(&state.ground)
        .map(|(e, g)| e.norm_sqr() - g.norm_sqr())
        .sum()
}

/// Closed form `sum_n P(n) [(eta^2/4 + kappa_n^2 cos(2 T gamma_n)) / gamma_n^2]`.
pub fn inversion_closed_form(field: &TruncatedFieldState, params: &ModelParams, t: f64) -> f64 {
    let quarter_eta_sqr = 0.25 * params.eta() * params.eta();
    photon_distribution(field)
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let gamma = params.gamma(n);
            if gamma == 0.0 {
                return *p;
            }
            let k2 = params.coupling_sqr(n);
            p * (quarter_eta_sqr + k2 * special::cos(2.0 * t * gamma)) / (gamma * gamma)
        })
        .sum()
}

/// Time-independent lower bound `sum_n P(n) (eta^2/4 - kappa_n^2) / gamma_n^2`.
pub fn inversion_floor(field: &TruncatedFieldState, params: &ModelParams) -> f64 {
    let quarter_eta_sqr = 0.25 * params.eta() * params.eta();
    photon_distribution(field)
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let gamma = params.gamma(n);
            if gamma == 0.0 {
                return *p;
            }
            p * (quarter_eta_sqr - params.coupling_sqr(n)) / (gamma * gamma)
        })
        .sum()
}

/// Uniform grid `T_k = t_max k / (steps - 1)` on `[0, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, steps: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::invalid(format!(
                "t_max must be finite and positive, got {t_max}"
            )));
        }
        if steps < 2 {
            return Err(Error::invalid(format!(
                "need at least 2 grid points, got {steps}"
            )));
        }
        Ok(TimeGrid { t_max, steps })
    }

    /// Grid fine enough that the fastest frequency `gamma_max` is sampled with
    /// `dT <= pi / (10 gamma_max)`.
    pub fn resolving(t_max: f64, gamma_max: f64) -> Result<Self> {
        if !(gamma_max.is_finite() && gamma_max >= 0.0) {
            return Err(Error::invalid("gamma_max must be finite and nonnegative"));
        }
        let max_step = if gamma_max > 0.0 {
            PI / (10.0 * gamma_max)
        } else {
            t_max
        };
        let intervals = (t_max / max_step).ceil().max(1.0) as usize;
        Self::new(t_max, intervals + 1)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step(&self) -> f64 {
        self.t_max / (self.steps - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        if k + 1 == self.steps {
            self.t_max
        } else {
            self.t_max * k as f64 / (self.steps - 1) as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.steps).map(|k| self.point(k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{coherent_amplitudes, custom_state};
    use crate::model::Nonlinearity;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn g1_g2_at_zero_time() {
        let p = ModelParams::intensity_dependent(3, 17.0).unwrap();
        for n in 0..20 {
            let (g1, g2) = g1_g2(&p, n, 0.0);
            assert_eq!(g1, C64::new(1.0, 0.0));
            assert_eq!(g2, C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn g1_g2_quarter_period() {
        let p = ModelParams::intensity_dependent(1, 0.0).unwrap();
        let (g1, g2) = g1_g2(&p, 0, FRAC_PI_2);
        assert!(close(g1, C64::new(0.0, 0.0), 1e-15));
        assert!(close(g2, C64::new(0.0, -1.0), 1e-15));
    }

    #[test]
    fn vacuum_full_transfer() {
        let field = coherent_amplitudes(0.0, 1e-12).unwrap();
        let p = ModelParams::standard(1, 0.0).unwrap();
        let s = evolve(&field, &p, FRAC_PI_2);
        assert!(close(s.excited()[0], C64::new(0.0, 0.0), 1e-15));
        assert!(close(s.ground()[0], C64::new(0.0, -1.0), 1e-15));
    }

    #[test]
    fn vacuum_inversion_is_cos_2t() {
        let field = coherent_amplitudes(0.0, 1e-12).unwrap();
        let p = ModelParams::standard(1, 0.0).unwrap();
        for k in 0..200 {
            let t = 0.05 * k as f64;
            let s = evolve(&field, &p, t);
            assert!((atomic_inversion(&s) - (2.0 * t).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn initial_state_is_excited_field() {
        let field = coherent_amplitudes(3.0, 1e-12).unwrap();
        let p = ModelParams::intensity_dependent(2, 5.0).unwrap();
        let s = evolve(&field, &p, 0.0);
        assert_eq!(s.excited(), field.amplitudes());
        assert!(s.ground().iter().all(|g| g.norm_sqr() == 0.0));
        assert_eq!(atomic_inversion(&s), field.norm_sqr());
        assert!((atomic_inversion(&s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_amplitudes() {
        let field = coherent_amplitudes(5.0, 1e-12).unwrap();
        for kind in [Nonlinearity::Standard, Nonlinearity::IntensityDependent] {
            for m in 1..=3 {
                for eta in [0.0, 20.0, 100.0] {
                    let p = ModelParams::new(m, kind, eta).unwrap();
                    for k in 0..50 {
                        let t = 0.21 * k as f64;
                        let a = atomic_inversion(&evolve(&field, &p, t));
                        let b = inversion_closed_form(&field, &p, t);
                        assert!((a - b).abs() < 1e-12, "{kind:?} m={m} eta={eta} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn zero_coupling_pair_stays_put() {
        // Standard model never has kappa = 0, but a gamma = 0 pair must not NaN.
        let (g1, g2) = rotation(0.0, 0.0, 0.0, 1.3);
        assert_eq!(g1, C64::new(1.0, 0.0));
        assert_eq!(g2, C64::new(0.0, 0.0));
    }

    #[test]
    fn custom_field_norm_preserved() {
        let field = custom_state(
            &[
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 1.0),
            ],
            4,
        )
        .unwrap();
        let p = ModelParams::intensity_dependent(1, 20.0).unwrap();
        for k in 0..40 {
            let s = evolve(&field, &p, 0.25 * k as f64);
            assert!((s.norm_sqr() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn grid_rules() {
        let g = TimeGrid::new(10.0, 11).unwrap();
        assert_eq!(g.step(), 1.0);
        assert_eq!(g.points().last().copied(), Some(10.0));
        assert!(TimeGrid::new(0.0, 10).is_err());
        assert!(TimeGrid::new(1.0, 1).is_err());
        let r = TimeGrid::resolving(10.0, 50.0).unwrap();
        assert!(r.step() <= PI / 500.0);
    }
}
