//! Values frozen from `tests/oracles/pin_values.py` (mpmath, 50 digits).

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use ijcm::analysis::{
    max_relative_deviation, rabi_frequency_profile, revival_time_ijcm, revival_time_sjcm,
};
use ijcm::evolution::inversion_floor;
use ijcm::fockspace::{coherent_amplitudes, photon_distribution, DEFAULT_TAIL_TOL};
use ijcm::model::ModelParams;
use ijcm::moments::{harmonic_approx_a2, re_a2_closed_form};
use ijcm::squeezing::{mu1_asymptotic, mu1_exact};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn poisson_weights() {
    let state = coherent_amplitudes(8.0, DEFAULT_TAIL_TOL).unwrap();
    let p = photon_distribution(&state);
    let table = include_str!("oracles/poisson_alpha8.txt");
    let mut rows = 0;
    for line in table.lines().filter(|l| !l.starts_with('#')) {
        let (n, want) = line.split_once(',').unwrap();
        let n: usize = n.parse().unwrap();
        let want: f64 = want.parse().unwrap();
        assert!(
            rel(p[n], want) < 1e-14,
            "P({n}) = {:e}, want {want:e}",
            p[n]
        );
        rows += 1;
    }
    assert_eq!(rows, p.len());
    assert!(rel(p[64], 0.049802895821191956933) < 1e-15);

    let small = photon_distribution(&coherent_amplitudes(0.5, DEFAULT_TAIL_TOL).unwrap());
    assert!(rel(small[3], 0.0020281270392484501777) < 1e-14);

    // headroom amplitudes far in the tail, where ln P ~ -95 bounds the accuracy of exp()
    let wide = photon_distribution(&state.with_headroom(72));
    assert!(rel(wide[200], 3.5015417982340578776e-42) < 1e-13);
}

#[test]
fn truncation_cutoffs() {
    let s8 = coherent_amplitudes(8.0, 1e-12).unwrap();
    assert_eq!(s8.support(), 128);
    assert!(rel(s8.tail_mass(), 6.2666884924547944713e-13) < 1e-9);
    let s4 = coherent_amplitudes(4.0, 1e-12).unwrap();
    assert_eq!(s4.support(), 51);
    assert!(rel(s4.tail_mass(), 8.1941800814662995154e-13) < 1e-9);
}

#[test]
fn inversion_floors_at_large_detuning() {
    let field = coherent_amplitudes(8.0, DEFAULT_TAIL_TOL).unwrap();
    let sjcm = inversion_floor(&field, &ModelParams::standard(1, 100.0).unwrap());
    let ijcm = inversion_floor(&field, &ModelParams::intensity_dependent(1, 100.0).unwrap());
    assert!((sjcm - 0.94933669411708447581).abs() < 1e-12, "{sjcm}");
    assert!((ijcm + 0.24592135030825416699).abs() < 1e-12, "{ijcm}");
}

#[test]
fn revival_time_values() {
    assert_eq!(revival_time_ijcm(0.0, 64.0).unwrap(), PI);
    assert!(
        rel(
            revival_time_ijcm(20.0, 64.0).unwrap(),
            3.1797109207894715925
        ) < 1e-15
    );
    assert!(rel(revival_time_sjcm(0.0, 64.0).unwrap(), 50.265482457436691815) < 1e-15);
    assert!(
        rel(
            revival_time_sjcm(100.0, 64.0).unwrap(),
            318.15509227037756467
        ) < 1e-15
    );
    assert!(
        rel(
            revival_time_sjcm(20.0, 64.0).unwrap(),
            80.464032257367137578
        ) < 1e-15
    );
}

#[test]
fn proportionality_factor() {
    let p = ModelParams::intensity_dependent(3, 0.0).unwrap();
    for (n, want) in [
        (50, 2.0882366306784799458),
        (200, 2.0223880824601388395),
        (500, 2.0089820374105439405),
    ] {
        assert!(rel(mu1_exact(&p, n).unwrap(), want) < 1e-13, "n = {n}");
    }
    assert_eq!(mu1_asymptotic(&p, 64.0).unwrap(), 2.2166748046875);

    // the second-order expansion overshoots the exact factor by a bounded amount
    let worst = (50..=500)
        .map(|n| {
            let exact = mu1_exact(&p, n).unwrap();
            (mu1_asymptotic(&p, n as f64).unwrap() - exact).abs() / exact
        })
        .fold(0.0, f64::max);
    assert!(rel(worst, 0.091542963337162603763) < 1e-12, "{worst}");
    let at200 = {
        let exact = mu1_exact(&p, 200).unwrap();
        (mu1_asymptotic(&p, 200.0).unwrap() - exact).abs() / exact
    };
    assert!(rel(at200, 0.02259675971007008421) < 1e-11, "{at200}");
}

#[test]
fn rabi_frequency_deviation_pins() {
    let base = ModelParams::intensity_dependent(3, 0.0).unwrap();
    let reference = rabi_frequency_profile(&base, 40..=90);
    let dev = |eta: f64| {
        max_relative_deviation(
            &reference,
            &rabi_frequency_profile(&base.with_eta(eta).unwrap(), 40..=90),
        )
    };
    assert!(rel(dev(1000.0), 0.033971136898943046318) < 1e-10);
    assert!(rel(dev(3000.0), 0.22000237183585622202) < 1e-10);
}

#[test]
fn harmonic_approximation_budget() {
    let p = ModelParams::intensity_dependent(3, 0.0).unwrap();
    let budget = |alpha: f64| {
        let field = coherent_amplitudes(alpha, DEFAULT_TAIL_TOL).unwrap();
        (0..=200)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 200.0;
                let exact = re_a2_closed_form(&field, &p, t).unwrap();
                let approx = harmonic_approx_a2(&field, &p, t).unwrap();
                (exact - approx).abs() / (alpha * alpha)
            })
            .fold(0.0, f64::max)
    };
    assert!(rel(budget(8.0), 0.0241042155875) < 1e-9);
    assert!(rel(budget(5.0), 0.0695767179211) < 1e-9);
}
