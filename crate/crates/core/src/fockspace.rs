//! Truncated Fock-basis representations of the initial cavity field.

use crate::error::{Error, Result};
use crate::special::ln_poisson;
use crate::C64;

/// Default discarded-probability budget for coherent states.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Extra basis states kept above the physical cutoff so that moments up to
/// `a^{2N}` in an `m`-photon model never touch a truncated amplitude.
pub fn headroom_for(order: usize, m: u32) -> usize {
    2 * order + m as usize + 2
}

/// Description of an initial field before truncation.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    /// Coherent state `|alpha>` with real, nonnegative amplitude.
    Coherent { alpha: f64 },
    /// Arbitrary pure state given by its Fock amplitudes `c_0, c_1, ...`.
    Custom { amplitudes: Vec<C64> },
}

impl FieldSpec {
    pub fn truncate(&self, tail_tol: f64, headroom: usize) -> Result<TruncatedFieldState> {
        match self {
            FieldSpec::Coherent { alpha } => {
                Ok(coherent_amplitudes(*alpha, tail_tol)?.with_headroom(headroom))
            }
            FieldSpec::Custom { amplitudes } => custom_state(amplitudes, headroom),
        }
    }

    /// Short human-readable descriptor used in run metadata.
    pub fn describe(&self) -> String {
        match self {
            FieldSpec::Coherent { alpha } => format!("coherent(alpha={alpha})"),
            FieldSpec::Custom { amplitudes } => {
                let terms: Vec<String> = amplitudes
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.norm_sqr() > 0.0)
                    .map(|(n, c)| format!("{n}:{}{:+}i", c.re, c.im))
                    .collect();
                format!("custom({})", terms.join(" "))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldOrigin {
    Coherent {
        alpha: f64,
    },
    /// `normalization` is the factor applied to the supplied amplitudes.
    Custom {
        normalization: f64,
    },
}

/// Field amplitudes `c_0..=c_{n_max}` on a finite Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedFieldState {
    amplitudes: Vec<C64>,
    support: usize,
    tail_mass: f64,
    tail_tol: f64,
    origin: FieldOrigin,
}

impl TruncatedFieldState {
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    /// Physical cutoff: the last photon number the state is meant to describe.
    pub fn support(&self) -> usize {
        self.support
    }

    pub fn headroom(&self) -> usize {
        self.n_max() - self.support
    }

    /// Probability discarded by the truncation.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    pub fn origin(&self) -> FieldOrigin {
        self.origin
    }

    /// Real coherent amplitude, if the state is coherent.
    pub fn coherent_alpha(&self) -> Option<f64> {
        match self.origin {
            FieldOrigin::Coherent { alpha } => Some(alpha),
            FieldOrigin::Custom { .. } => None,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Extends the basis by `extra` states above the physical cutoff.
    ///
    /// Coherent states get their true amplitudes in the extension (and a
    /// correspondingly smaller tail); custom states are padded with zeros.
    pub fn with_headroom(self, extra: usize) -> Self {
        let n_max = self.support + extra;
        match self.origin {
            FieldOrigin::Coherent { alpha } => {
                let table = PoissonTable::new(alpha * alpha, self.tail_tol, n_max);
                TruncatedFieldState {
                    amplitudes: (0..=n_max).map(|n| table.amplitude(n)).collect(),
                    tail_mass: table.tail_above(n_max),
                    ..self
                }
            }
            FieldOrigin::Custom { .. } => {
                let mut amplitudes = self.amplitudes;
                amplitudes.resize(n_max + 1, C64::new(0.0, 0.0));
                TruncatedFieldState { amplitudes, ..self }
            }
        }
    }
}

/// Poisson weights of mean `mean` tabulated far enough into the right tail
/// that everything beyond the table is negligible against `tail_tol`.
struct PoissonTable {
    ln_p: Vec<f64>,
    /// `suffix[n] = sum_{k >= n} P(k)` over the table.
    suffix: Vec<f64>,
}

impl PoissonTable {
    fn new(mean: f64, tail_tol: f64, min_len: usize) -> Self {
        let floor = tail_tol.ln() - 40.0;
        let start = mean.ceil() as usize;
        let mut ln_p = Vec::new();
        let mut n = 0usize;
        loop {
            let lp = ln_poisson(n as u64, mean);
            ln_p.push(lp);
            if n > start && n > min_len && lp < floor {
                break;
            }
            n += 1;
        }
        let mut suffix = vec![0.0; ln_p.len() + 1];
        for k in (0..ln_p.len()).rev() {
            suffix[k] = suffix[k + 1] + ln_p[k].exp();
        }
        PoissonTable { ln_p, suffix }
    }

    fn amplitude(&self, n: usize) -> C64 {
        C64::new((0.5 * self.ln_p[n]).exp(), 0.0)
    }

    fn tail_above(&self, n: usize) -> f64 {
        self.suffix.get(n + 1).copied().unwrap_or(0.0)
    }
}

/// Coherent-state amplitudes `c_n = exp(-alpha^2/2) alpha^n / sqrt(n!)`.
///
/// The cutoff is the smallest `n_max >= ceil(alpha^2)` whose Poisson tail
/// falls below `tail_tol`; no headroom is added.
pub fn coherent_amplitudes(alpha: f64, tail_tol: f64) -> Result<TruncatedFieldState> {
    if !alpha.is_finite() {
        return Err(Error::invalid(format!("alpha must be finite, got {alpha}")));
    }
    if alpha < 0.0 {
        return Err(Error::invalid(format!(
            "alpha must be nonnegative (real coherent amplitude), got {alpha}"
        )));
    }
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::invalid(format!(
            "tail_tol must lie in (0, 1), got {tail_tol}"
        )));
    }
    let mean = alpha * alpha;
    let table = PoissonTable::new(mean, tail_tol, 0);
    let start = mean.ceil() as usize;
    let mut cutoff = start;
    while table.tail_above(cutoff) >= tail_tol {
        cutoff += 1;
    }
    Ok(TruncatedFieldState {
        amplitudes: (0..=cutoff).map(|n| table.amplitude(n)).collect(),
        support: cutoff,
        tail_mass: table.tail_above(cutoff),
        tail_tol,
        origin: FieldOrigin::Coherent { alpha },
    })
}

/// Builds a custom state, normalizing the supplied amplitudes.
pub fn custom_state(amplitudes: &[C64], headroom: usize) -> Result<TruncatedFieldState> {
    if amplitudes
        .iter()
        .any(|c| !c.re.is_finite() || !c.im.is_finite())
    {
        return Err(Error::invalid("custom amplitudes must be finite"));
    }
    let norm_sqr: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
    if norm_sqr <= 0.0 {
        return Err(Error::invalid("custom amplitudes are all zero"));
    }
    let normalization = norm_sqr.sqrt().recip();
    let support = amplitudes
        .iter()
        .rposition(|c| c.norm_sqr() > 0.0)
        .unwrap_or(0);
    let mut scaled: Vec<C64> = amplitudes[..=support]
        .iter()
        .map(|c| c * normalization)
        .collect();
    scaled.resize(support + headroom + 1, C64::new(0.0, 0.0));
    Ok(TruncatedFieldState {
        amplitudes: scaled,
        support,
        tail_mass: 0.0,
        tail_tol: DEFAULT_TAIL_TOL,
        origin: FieldOrigin::Custom { normalization },
    })
}

/// `P(n) = |c_n|^2` over the truncated basis.
pub fn photon_distribution(state: &TruncatedFieldState) -> Vec<f64> {
    state.amplitudes.iter().map(|c| c.norm_sqr()).collect()
}

pub fn mean_photon_number(state: &TruncatedFieldState) -> f64 {
    state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(n, c)| n as f64 * c.norm_sqr())
        .sum()
}
