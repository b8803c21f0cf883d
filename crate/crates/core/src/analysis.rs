//! Revival-time predictions, generalized Rabi frequencies, empirical revival
//! detection and pattern similarity between observables.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::timeseries::TimeSeries;

fn check_n_bar(n_bar: f64) -> Result<()> {
    if !(n_bar.is_finite() && n_bar > 0.0) {
        return Err(Error::invalid(format!(
            "mean photon number must be positive, got {n_bar}"
        )));
    }
    Ok(())
}

/// First revival of the single-photon intensity-dependent model,
/// `pi sqrt((eta/2)^2 + nbar^2) / nbar`.
pub fn revival_time_ijcm(eta: f64, n_bar: f64) -> Result<f64> {
    check_n_bar(n_bar)?;
    Ok(PI * ((0.5 * eta).hypot(n_bar) / n_bar))
}

/// First revival of the single-photon standard model,
/// `2 pi sqrt((eta/2)^2 + nbar)`.
pub fn revival_time_sjcm(eta: f64, n_bar: f64) -> Result<f64> {
    check_n_bar(n_bar)?;
    Ok(2.0 * PI * (0.5 * eta).hypot(n_bar.sqrt()))
}

/// Generalized Rabi frequencies `Omega_n = gamma_{n+2} - gamma_n`.
pub fn rabi_frequency_profile(params: &ModelParams, range: RangeInclusive<usize>) -> Vec<f64> {
    range
        .map(|n| params.gamma(n + 2) - params.gamma(n))
        .collect()
}

/// Largest `|other_i - reference_i| / |reference_i|`.
pub fn max_relative_deviation(reference: &[f64], other: &[f64]) -> f64 {
    reference
        .iter()
        .zip(other)
        .map(|(r, o)| ((o - r) / r).abs())
        .fold(0.0, f64::max)
}

/// Least-squares line through `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// `||y - fit||_2 / ||y||_2`
    pub relative_residual: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "linear fit needs two equal-length series of at least 2 points ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("abscissae are all equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    let norm: f64 = y.iter().map(|b| b * b).sum();
    Ok(LinearFit {
        slope,
        intercept,
        relative_residual: (res / norm).sqrt(),
    })
}

/// Envelope-peak revival detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevivalDetector {
    /// Width of the sliding window used to measure the local oscillation amplitude.
    pub window: f64,
    /// Minimum peak prominence as a fraction of the signal's global range.
    pub prominence_fraction: f64,
}

impl RevivalDetector {
    /// Window of one eighth of the expected revival spacing, 15% prominence.
    pub fn for_period(period: f64) -> Self {
        RevivalDetector {
            window: period / 8.0,
            prominence_fraction: 0.15,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RevivalQuality {
    /// The envelope drops to below half of the smaller neighbour between every
    /// pair of detected revivals.
    Resolved,
    /// Adjacent revivals run into each other; centers are indicative only.
    Overlapping,
    NoneDetected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RevivalReport {
    pub predicted: Option<f64>,
    /// Revival centers in increasing order.
    pub centers: Vec<f64>,
    pub prominences: Vec<f64>,
    /// Local peak-to-peak oscillation amplitude on the series grid.
    pub envelope: Vec<f64>,
    pub quality: RevivalQuality,
}

impl RevivalReport {
    pub fn with_prediction(mut self, predicted: f64) -> Self {
        self.predicted = Some(predicted);
        self
    }

    pub fn first_center(&self) -> Option<f64> {
        self.centers.first().copied()
    }
}

/// Sliding peak-to-peak amplitude `2 sqrt(2) * std` over `[i - half, i + half]`,
/// clipped at the ends of the series.
fn envelope(signal: &[f64], half: usize) -> Vec<f64> {
    let len = signal.len();
    let mean = signal.iter().sum::<f64>() / len as f64;
    let mut s1 = vec![0.0; len + 1];
    let mut s2 = vec![0.0; len + 1];
    for (i, x) in signal.iter().enumerate() {
        let d = x - mean;
        s1[i + 1] = s1[i] + d;
        s2[i + 1] = s2[i] + d * d;
    }
    (0..len)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(len);
            let n = (hi - lo) as f64;
            let m1 = (s1[hi] - s1[lo]) / n;
            let m2 = (s2[hi] - s2[lo]) / n;
            2.0 * (2.0 * (m2 - m1 * m1).max(0.0)).sqrt()
        })
        .collect()
}

fn prominence(env: &[f64], i: usize) -> f64 {
    let peak = env[i];
    let mut left_min = peak;
    for j in (0..i).rev() {
        if env[j] > peak {
            break;
        }
        left_min = left_min.min(env[j]);
    }
    let mut right_min = peak;
    for &v in &env[i + 1..] {
        if v > peak {
            break;
        }
        right_min = right_min.min(v);
    }
    peak - left_min.max(right_min)
}

/// Locates revivals as prominent maxima of the local oscillation envelope.
///
/// Maxima whose window would run past either end of the series are ignored,
/// so the initial oscillation at `T = 0` is never reported as a revival.
pub fn detect_revivals(
    series: &TimeSeries,
    column: &str,
    detector: &RevivalDetector,
) -> Result<RevivalReport> {
    let signal = series
        .column(column)
        .ok_or_else(|| Error::invalid(format!("no column {column:?}")))?;
    if !(detector.window > 0.0 && detector.window.is_finite()) {
        return Err(Error::invalid("detector window must be positive"));
    }
    let h = series.step();
    if series.len() < 3 || h <= 0.0 {
        return Err(Error::InsufficientData(
            "need at least 3 grid points".into(),
        ));
    }
    let half = ((0.5 * detector.window / h).round() as usize).max(1);
    let len = signal.len();
    if len < 2 * (2 * half + 1) {
        return Err(Error::InsufficientData(format!(
            "series of {len} points is shorter than two detector windows ({} points each)",
            2 * half + 1
        )));
    }
    let env = envelope(signal, half);
    let (lo, hi) = signal
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        });
    let threshold = detector.prominence_fraction * (hi - lo);

    let mut peaks: Vec<(usize, f64)> = Vec::new();
    for i in half..len - half {
        let win = &env[i - half..=i + half];
        let is_max = win.iter().all(|&v| v <= env[i]);
        let first_of_plateau = env[i - half..i].iter().all(|&v| v < env[i]);
        if !(is_max && first_of_plateau) {
            continue;
        }
        let prom = prominence(&env, i);
        if prom >= threshold && prom > 0.0 {
            peaks.push((i, prom));
        }
    }

    let t = series.t();
    let mut centers = Vec::with_capacity(peaks.len());
    let mut prominences = Vec::with_capacity(peaks.len());
    for &(i, prom) in &peaks {
        // centroid of the contiguous region within half a prominence of the top
        let level = env[i] - 0.5 * prom;
        let mut a = i;
        while a > 0 && env[a - 1] >= level {
            a -= 1;
        }
        let mut b = i;
        while b + 1 < len && env[b + 1] >= level {
            b += 1;
        }
        let (mut wsum, mut tsum) = (0.0, 0.0);
        for k in a..=b {
            let w = env[k] - level;
            wsum += w;
            tsum += w * t[k];
        }
        centers.push(if wsum > 0.0 { tsum / wsum } else { t[i] });
        prominences.push(prom);
    }

    let quality = if peaks.is_empty() {
        RevivalQuality::NoneDetected
    } else if peaks.windows(2).all(|w| {
        let (i, j) = (w[0].0, w[1].0);
        let dip = env[i..=j].iter().copied().fold(f64::INFINITY, f64::min);
        dip < 0.5 * env[i].min(env[j])
    }) {
        RevivalQuality::Resolved
    } else {
        RevivalQuality::Overlapping
    };

    Ok(RevivalReport {
        predicted: None,
        centers,
        prominences,
        envelope: env,
        quality,
    })
}

/// Pearson correlation of two equally long series.
pub fn pattern_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "series lengths differ ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::InsufficientData(
            "correlation needs at least 2 points".into(),
        ));
    }
    let constant = |v: &[f64]| v.iter().all(|x| *x == v[0]);
    if constant(a) || constant(b) {
        return Err(Error::UndefinedCorrelation(
            "a series has zero variance".into(),
        ));
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::UndefinedCorrelation(
            "a series has zero variance".into(),
        ));
    }
    Ok((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// [`pattern_similarity`] between columns of two series on the same grid.
pub fn series_similarity(a: &TimeSeries, col_a: &str, b: &TimeSeries, col_b: &str) -> Result<f64> {
    if a.t() != b.t() {
        return Err(Error::invalid("series are on different grids"));
    }
    let xa = a
        .column(col_a)
        .ok_or_else(|| Error::invalid(format!("no column {col_a:?}")))?;
    let xb = b
        .column(col_b)
        .ok_or_else(|| Error::invalid(format!("no column {col_b:?}")))?;
    pattern_similarity(xa, xb)
}

/// Largest offset between paired revival centers; `None` when the two lists
/// have different lengths or are empty.
pub fn center_offset(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() || a.is_empty() {
        return None;
    }
    Some(
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Nonlinearity;

    #[test]
    fn revival_times() {
        assert_eq!(revival_time_ijcm(0.0, 64.0).unwrap(), PI);
        assert_eq!(revival_time_ijcm(0.0, 3.3).unwrap(), PI);
        // pinned with 50-digit arithmetic
        assert!((revival_time_ijcm(20.0, 64.0).unwrap() - 3.179_710_920_789_472).abs() < 1e-14);
        assert!(revival_time_ijcm(1e6, 64.0).unwrap() > 1e3);
        assert!((revival_time_sjcm(0.0, 64.0).unwrap() - 50.265_482_457_436_69).abs() < 1e-12);
        assert!((revival_time_sjcm(100.0, 64.0).unwrap() - 318.155_092_270_377_56).abs() < 1e-11);
        assert!(revival_time_ijcm(1.0, 0.0).is_err());
        assert!(revival_time_sjcm(1.0, -2.0).is_err());
    }

    #[test]
    fn revival_times_even_and_monotone_in_eta() {
        let mut prev = (0.0, 0.0);
        for k in 0..200 {
            let eta = 5.0 * k as f64;
            let a = revival_time_ijcm(eta, 30.0).unwrap();
            let b = revival_time_sjcm(eta, 30.0).unwrap();
            assert_eq!(a, revival_time_ijcm(-eta, 30.0).unwrap());
            assert_eq!(b, revival_time_sjcm(-eta, 30.0).unwrap());
            assert!(a >= prev.0 && b >= prev.1);
            prev = (a, b);
        }
    }

    #[test]
    fn single_photon_profile_is_flat() {
        let p = ModelParams::intensity_dependent(1, 0.0).unwrap();
        assert!(rabi_frequency_profile(&p, 0..=500)
            .iter()
            .all(|&w| w == 2.0));
    }

    #[test]
    fn profile_positive() {
        for kind in [Nonlinearity::Standard, Nonlinearity::IntensityDependent] {
            for eta in [0.0, 1000.0] {
                let p = ModelParams::new(3, kind, eta).unwrap();
                assert!(rabi_frequency_profile(&p, 0..=300).iter().all(|&w| w > 0.0));
            }
        }
    }

    #[test]
    fn linear_fit_exact_line() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 2.0).collect();
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-13 && (f.intercept + 2.0).abs() < 1e-12);
        assert!(f.relative_residual < 1e-14);
        assert!(linear_fit(&[1.0], &[1.0]).is_err());
    }

    fn wavepacket(center: f64) -> TimeSeries {
        let t: Vec<f64> = (0..=4000).map(|k| 0.0025 * k as f64).collect();
        let y: Vec<f64> = t
            .iter()
            .map(|&x| (-(x - center).powi(2) / 0.3).exp() * (2.0 * 40.0 * x).cos())
            .collect();
        TimeSeries::new("T", t)
            .unwrap()
            .with_column("y", y)
            .unwrap()
    }

    #[test]
    fn synthetic_packet_center() {
        let s = wavepacket(PI);
        let r = detect_revivals(&s, "y", &RevivalDetector::for_period(PI)).unwrap();
        assert_eq!(r.centers.len(), 1, "{:?}", r.centers);
        assert!((r.centers[0] - PI).abs() <= s.step(), "{}", r.centers[0]);
        assert_eq!(r.quality, RevivalQuality::Resolved);
        assert_eq!(r.envelope.len(), s.len());
    }

    #[test]
    fn detector_errors() {
        let s = TimeSeries::new("T", vec![0.0, 1.0, 2.0])
            .unwrap()
            .with_column("y", vec![0.0, 1.0, 0.0])
            .unwrap();
        assert!(matches!(
            detect_revivals(&s, "y", &RevivalDetector::for_period(8.0)),
            Err(Error::InsufficientData(_))
        ));
        assert!(detect_revivals(&s, "missing", &RevivalDetector::for_period(1.0)).is_err());
    }

    #[test]
    fn flat_signal_has_no_revivals() {
        let t: Vec<f64> = (0..1000).map(|k| 0.01 * k as f64).collect();
        let s = TimeSeries::new("T", t)
            .unwrap()
            .with_column("y", vec![0.5; 1000])
            .unwrap();
        let r = detect_revivals(&s, "y", &RevivalDetector::for_period(1.0)).unwrap();
        assert!(r.centers.is_empty());
        assert_eq!(r.quality, RevivalQuality::NoneDetected);
    }

    #[test]
    fn similarity_basics() {
        let a: Vec<f64> = (0..100).map(|k| (0.1 * k as f64).sin()).collect();
        let neg: Vec<f64> = a.iter().map(|x| -x).collect();
        assert!((pattern_similarity(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        assert!((pattern_similarity(&a, &neg).unwrap() + 1.0).abs() < 1e-15);
        assert!(matches!(
            pattern_similarity(&a, &[0.3; 100]),
            Err(Error::UndefinedCorrelation(_))
        ));
        assert!(pattern_similarity(&a, &a[..50]).is_err());
    }

    #[test]
    fn offsets() {
        assert_eq!(
            center_offset(&[1.0, 2.0], &[1.1, 1.8]).map(|x| (x * 10.0).round()),
            Some(2.0)
        );
        assert_eq!(center_offset(&[1.0], &[]), None);
    }
}
