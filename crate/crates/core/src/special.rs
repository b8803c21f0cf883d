//! Factorial-bearing special functions evaluated without forming factorials.

use std::f64::consts::PI;

/// `ln(n!) - ln(sqrt(2 pi n) (n/e)^n)` for `n = 1..=15`.
#[allow(clippy::excessive_precision)]
const STIRLING_ERR: [f64; 15] = [
    0.081_061_466_795_327_258,
    0.041_340_695_955_409_294,
    0.027_677_925_684_998_339,
    0.020_790_672_103_765_093,
    0.016_644_691_189_821_192,
    0.013_876_128_823_070_748,
    0.011_896_709_945_891_770,
    0.010_411_265_261_972_096,
    0.009_255_462_182_712_733,
    0.008_330_563_433_362_871,
    0.007_573_675_487_951_841,
    0.006_942_840_107_209_530,
    0.006_408_994_188_004_207,
    0.005_951_370_112_758_848,
    0.005_554_733_551_962_801,
];

/// Remainder of Stirling's approximation to `ln(n!)`, valid for `n >= 1`.
pub fn stirling_error(n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n <= 15 {
        return STIRLING_ERR[(n - 1) as usize];
    }
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    let x = n as f64;
    let x2 = x * x;
    if n > 500 {
        (S0 - S1 / x2) / x
    } else if n > 80 {
        (S0 - (S1 - S2 / x2) / x2) / x
    } else if n > 35 {
        (S0 - (S1 - (S2 - S3 / x2) / x2) / x2) / x
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / x2) / x2) / x2) / x2) / x
    }
}

/// Deviance term `x ln(x / mean) + mean - x`, evaluated by series where the
/// direct form cancels. The series needs about 60 terms at the switch-over
/// point `|x - mean| = 0.75 (x + mean)`.
pub fn deviance(x: f64, mean: f64) -> f64 {
    if (x - mean).abs() < 0.75 * (x + mean) {
        let v = (x - mean) / (x + mean);
        // the odd-power tail is accumulated on its own so that rounding happens
        // at its (small) magnitude rather than at the magnitude of the result
        let mut tail = 0.0;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let next = tail + ej / (2 * j + 1) as f64;
            if next == tail {
                break;
            }
            tail = next;
        }
        (x - mean) * v + tail
    } else {
        x * (x / mean).ln() + mean - x
    }
}

/// Natural log of the Poisson probability `e^{-mean} mean^n / n!`.
///
/// Uses the saddle-point split into a Stirling remainder and a deviance term so
/// the result keeps full relative accuracy near the mean, where the naive
/// `-mean + n ln(mean) - ln(n!)` loses several digits to cancellation.
pub fn ln_poisson(n: u64, mean: f64) -> f64 {
    if mean == 0.0 {
        return if n == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if n == 0 {
        return -mean;
    }
    let x = n as f64;
    -stirling_error(n) - deviance(x, mean) - 0.5 * (2.0 * PI * x).ln()
}

/// `(sin x, cos x)` from the pure-Rust libm port.
///
/// The std methods lower to whichever of `sin`, `cos` or `sincos` the
/// optimizer picks, and the platform library does not round those identically,
/// so CSV output would otherwise depend on the build profile.
pub(crate) fn sin_cos(x: f64) -> (f64, f64) {
    libm::sincos(x)
}

pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

/// `top! / (top - k)!`, the product of `k` consecutive integers ending at `top`.
/// Zero when `k > top`.
pub fn falling_factorial(top: u64, k: u64) -> f64 {
    if k > top {
        return 0.0;
    }
    let mut acc = 1.0;
    for j in 0..k {
        acc *= (top - j) as f64;
    }
    acc
}

/// `ln(n!)` by compensated summation of `ln k`. Test and diagnostic use; the
/// production paths above never need the full factorial.
pub fn ln_factorial(n: u64) -> f64 {
    if n > 1000 {
        let x = n as f64;
        return x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + stirling_error(n);
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in 2..=n {
        let y = (k as f64).ln() - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}
