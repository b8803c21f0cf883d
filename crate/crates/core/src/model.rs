//! Model parameters and the per-pair Rabi spectrum.

use crate::error::{Error, Result};
use crate::special::falling_factorial;

/// Coupling nonlinearity `f(n)` in `R = a^m f(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Nonlinearity {
    /// `f = 1`, the standard model.
    Standard,
    /// `f(n) = sqrt(n)`.
    IntensityDependent,
}

impl Nonlinearity {
    /// `f(n)^2`.
    pub fn f_sqr(self, n: u64) -> f64 {
        match self {
            Nonlinearity::Standard => 1.0,
            Nonlinearity::IntensityDependent => n as f64,
        }
    }

    pub fn f(self, n: u64) -> f64 {
        match self {
            Nonlinearity::Standard => 1.0,
            Nonlinearity::IntensityDependent => (n as f64).sqrt(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Nonlinearity::Standard => "sjcm",
            Nonlinearity::IntensityDependent => "ijcm",
        }
    }
}

/// Transition order, nonlinearity and dimensionless detuning `eta = Delta / lambda`.
///
/// Only `eta^2` enters the dynamics, so `eta` and `-eta` describe the same
/// physics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    m: u32,
    nonlinearity: Nonlinearity,
    eta: f64,
}

impl ModelParams {
    pub fn new(m: u32, nonlinearity: Nonlinearity, eta: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("transition order m must be at least 1"));
        }
        if !eta.is_finite() {
            return Err(Error::invalid(format!("eta must be finite, got {eta}")));
        }
        Ok(ModelParams {
            m,
            nonlinearity,
            eta,
        })
    }

    pub fn standard(m: u32, eta: f64) -> Result<Self> {
        Self::new(m, Nonlinearity::Standard, eta)
    }

    pub fn intensity_dependent(m: u32, eta: f64) -> Result<Self> {
        Self::new(m, Nonlinearity::IntensityDependent, eta)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn nonlinearity(&self) -> Nonlinearity {
        self.nonlinearity
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Same model with a different detuning.
    pub fn with_eta(self, eta: f64) -> Result<Self> {
        Self::new(self.m, self.nonlinearity, eta)
    }

    /// Same nonlinearity and detuning, transition order `m`.
    pub fn with_m(self, m: u32) -> Result<Self> {
        Self::new(m, self.nonlinearity, self.eta)
    }

    /// `kappa_n^2 = ((n+m)!/n!) f^2(n+m)`.
    pub fn coupling_sqr(&self, n: usize) -> f64 {
        let top = n as u64 + self.m as u64;
        falling_factorial(top, self.m as u64) * self.nonlinearity.f_sqr(top)
    }

    /// Off-diagonal element `kappa_n` coupling `|+, n>` and `|-, n+m>`.
    pub fn coupling_kernel(&self, n: usize) -> f64 {
        self.coupling_sqr(n).sqrt()
    }

    /// Rabi frequency `gamma_{n,m} = sqrt(eta^2/4 + kappa_n^2)`.
    pub fn gamma(&self, n: usize) -> f64 {
        (0.5 * self.eta).hypot(self.coupling_kernel(n))
    }

    pub fn rabi_spectrum(&self, n_max: usize) -> RabiSpectrum {
        RabiSpectrum {
            gamma: (0..=n_max).map(|n| self.gamma(n)).collect(),
        }
    }
}

/// Rabi frequencies `gamma_0..=gamma_{n_max}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RabiSpectrum {
    gamma: Vec<f64>,
}

impl RabiSpectrum {
    pub fn from_values(gamma: Vec<f64>) -> Self {
        RabiSpectrum { gamma }
    }

    pub fn values(&self) -> &[f64] {
        &self.gamma
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn get(&self, n: usize) -> f64 {
        self.gamma[n]
    }

    pub fn max(&self) -> f64 {
        self.gamma.iter().copied().fold(0.0, f64::max)
    }
}
