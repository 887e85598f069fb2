mod support;

use nfradar_core::em_exact::{exact_prefactor, path_length_sum};
use nfradar_core::em_spa::{alpha_coefficient, spa_phase_expansion, specular_geometry};
use nfradar_core::{pair_coefficient, AntennaPair, Complex64, Scenario};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::quad::quadratic_phase_integral;

/// β assembled from the plate integral of the quadratic phase, evaluated by
/// adaptive quadrature instead of Fresnel integrals.
fn beta_oracle(pair: &AntennaPair, s: &Scenario) -> Complex64 {
    let g = specular_geometry(pair, s);
    if !g.on_plate {
        return Complex64::new(0.0, 0.0);
    }
    let k = s.wavenumber();
    let r = g.r_s;
    let iy = quadratic_phase_integral(k / r, 0.0, -0.5 * s.plate_width, 0.5 * s.plate_width);
    let iz = quadratic_phase_integral(
        k * s.range * s.range / (r * r * r),
        g.z_s,
        -0.5 * s.plate_height,
        0.5 * s.plate_height,
    );
    exact_prefactor(s) * s.range / (r * r * r) * Complex64::from_polar(1.0, -2.0 * k * r) * iy * iz
}

fn random_scenario(rng: &mut ChaCha8Rng) -> Scenario {
    Scenario {
        n_antennas: rng.random_range(1..=15),
        spacing: rng.random_range(0.02..0.2),
        carrier_freq: rng.random_range(2e9..30e9),
        bandwidth: 50e6,
        plate_width: rng.random_range(0.2..1.5),
        plate_height: rng.random_range(0.2..2.0),
        range: rng.random_range(1.0..6.0),
        ..Scenario::default()
    }
}

#[test]
fn alpha_matches_quadrature_of_the_plate_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    for _ in 0..20 {
        let s = random_scenario(&mut rng);
        s.validate().unwrap();
        let pairs = s.all_pairs();
        for _ in 0..4 {
            let p = pairs[rng.random_range(0..pairs.len())];
            let oracle = beta_oracle(&p, &s);
            let gain = pair_coefficient(&p, &s).full_gain;
            if oracle.norm() == 0.0 {
                assert_eq!(gain.norm(), 0.0);
                continue;
            }
            let rel = (gain - oracle).norm() / oracle.norm();
            assert!(rel < 1e-6, "{s:?} {p:?}: rel {rel:e}");
            checked += 1;
        }
    }
    assert!(checked >= 40);
}

#[test]
fn centre_pair_alpha_from_quadrature() {
    let s = Scenario::default();
    let p = s.pair(6, 6).unwrap();
    let k = s.wavenumber();
    let iy = quadratic_phase_integral(k / 4.0, 0.0, -0.4, 0.4);
    let iz = quadratic_phase_integral(k / 4.0, 0.0, -0.875, 0.875);
    // iy = sqrt(λR)·F*(y-arg) and iz = sqrt(λR)/2·[F*(a₊) + F*(a₋)] at r_s = R.
    let alpha = iy * iz * 2.0 / (s.wavelength() * 4.0);
    let a = alpha_coefficient(&p, &s);
    assert!((a - alpha).norm() < 1e-9, "{a} vs {alpha}");
}

#[test]
fn quadratic_expansion_within_fresnel_zone() {
    let s = Scenario::default();
    let k = s.wavenumber();
    let lambda = s.wavelength();
    for (tx, rx) in [(6, 6), (0, 12), (2, 9), (12, 12)] {
        let p = s.pair(tx, rx).unwrap();
        let g = specular_geometry(&p, &s);
        let hy = 0.5 * (lambda * g.r_s).sqrt();
        let hz = 0.5 * (lambda * g.r_s.powi(3)).sqrt() / s.range;
        for i in -10..=10 {
            for j in -10..=10 {
                let y = hy * i as f64 / 10.0;
                let z = g.z_s + hz * j as f64 / 10.0;
                let exact = -k * path_length_sum(&p, s.range, y, z);
                let approx = spa_phase_expansion(&g, &s, y, z);
                assert!((exact - approx).abs() <= 0.2, "({tx},{rx}) y={y} z={z}");
            }
        }
    }
}

#[test]
fn gain_decreases_with_specular_distance_in_the_saturated_regime() {
    let base = Scenario::default();
    let mut previous = f64::INFINITY;
    for i in 0..=8 {
        let s = base.with_range(2.0 + 0.5 * i as f64);
        let p = s.pair(6, 6).unwrap();
        let g = specular_geometry(&p, &s);
        assert!(base.plate_width / (s.wavelength() * g.r_s).sqrt() > 3.0);
        let gain = pair_coefficient(&p, &s).full_gain.norm();
        assert!(gain < previous);
        previous = gain;
    }
}

#[test]
fn centre_and_outer_delays() {
    let s = Scenario::default();
    let centre = pair_coefficient(&s.pair(6, 6).unwrap(), &s).delay;
    let outer = pair_coefficient(&s.pair(0, 12).unwrap(), &s).delay;
    assert!((centre - 26.685e-9).abs() < 1e-12);
    assert!((outer - 27.150e-9).abs() < 1e-12);
}

proptest! {
    #[test]
    fn swap_invariance(tx in 0usize..13, rx in 0usize..13, range in 1.0f64..20.0) {
        let s = Scenario::default().with_range(range);
        let p = s.pair(tx, rx).unwrap();
        prop_assert_eq!(pair_coefficient(&p, &s), pair_coefficient(&p.swapped(), &s));
        prop_assert_eq!(specular_geometry(&p, &s), specular_geometry(&p.swapped(), &s));
    }

    #[test]
    fn alpha_vanishes_off_plate(tx in 0usize..13, rx in 0usize..13, height in 0.01f64..2.0) {
        let s = Scenario { plate_height: height, ..Scenario::default() };
        let p = s.pair(tx, rx).unwrap();
        let g = specular_geometry(&p, &s);
        if !g.on_plate {
            prop_assert_eq!(alpha_coefficient(&p, &s), Complex64::new(0.0, 0.0));
        }
        prop_assert!(g.r_s >= s.range);
    }
}
