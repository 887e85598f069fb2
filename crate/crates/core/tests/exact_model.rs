use nfradar_core::em_exact::{path_length_sum, DelayProfile};
use nfradar_core::em_spa::spa_received_signal;
use nfradar_core::signal::Waveform;
use nfradar_core::{
    exact_received_signal, synthesize, Backend, Complex64, QuadratureRule, QuadratureSpec,
    Scenario, SynthesisOptions, TimeWindow,
};

fn reduced_carrier() -> Scenario {
    Scenario {
        carrier_freq: 10e9,
        ..Scenario::default()
    }
}

fn db(a: Complex64, b: Complex64) -> f64 {
    20.0 * (a.norm() / b.norm()).log10()
}

fn degrees(a: Complex64, b: Complex64) -> f64 {
    (a / b).arg().to_degrees()
}

fn cw(s: &Scenario, tx: usize, rx: usize, quad: &QuadratureSpec) -> Complex64 {
    let p = s.pair(tx, rx).unwrap();
    exact_received_signal(&p, s, 0.0, &Waveform::constant(), quad).unwrap()
}

#[test]
fn reciprocity() {
    let s = reduced_carrier();
    let q = QuadratureSpec::default();
    for (tx, rx) in [(0, 12), (1, 7), (3, 4), (5, 11)] {
        let a = cw(&s, tx, rx, &q);
        let b = cw(&s, rx, tx, &q);
        assert!(
            db(a, b).abs() < 0.1 && degrees(a, b).abs() < 1.0,
            "({tx},{rx})"
        );
    }
}

#[test]
fn doubling_density_converges() {
    let s = reduced_carrier();
    let coarse = QuadratureSpec::default();
    let fine = QuadratureSpec {
        points_per_wavelength: 20.0,
        ..coarse
    };
    for (tx, rx) in [(6, 6), (0, 12), (2, 10)] {
        let a = cw(&s, tx, rx, &coarse);
        let b = cw(&s, tx, rx, &fine);
        assert!(
            db(a, b).abs() < 0.1 && degrees(a, b).abs() < 1.0,
            "({tx},{rx})"
        );
    }
}

#[test]
fn midpoint_and_gauss_legendre_agree() {
    let s = reduced_carrier();
    let mid = QuadratureSpec::default();
    let gl = QuadratureSpec {
        rule: QuadratureRule::GaussLegendreComposite,
        ..mid
    };
    let a = cw(&s, 4, 9, &mid);
    let b = cw(&s, 4, 9, &gl);
    assert!(db(a, b).abs() < 0.1 && degrees(a, b).abs() < 1.0);
}

#[test]
fn degenerate_plate_gives_zero() {
    let s = Scenario {
        plate_width: 0.0,
        plate_height: 0.0,
        ..reduced_carrier()
    };
    assert_eq!(
        cw(&s, 6, 6, &QuadratureSpec::default()),
        Complex64::new(0.0, 0.0)
    );
}

#[test]
fn sampled_phase_is_stationary_at_the_specular_point() {
    let s = reduced_carrier();
    let p = s.pair(6, 6).unwrap();
    let cell = s.wavelength() / 10.0;
    let ny = (s.plate_width / cell).ceil() as i64;
    let nz = (s.plate_height / cell).ceil() as i64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..ny {
        let y = (i as f64 + 0.5) * cell - 0.5 * s.plate_width;
        for j in 0..nz {
            let z = (j as f64 + 0.5) * cell - 0.5 * s.plate_height;
            let path = path_length_sum(&p, s.range, y, z);
            if path < best.0 {
                best = (path, y, z);
            }
        }
    }
    let z_s = 0.5 * (p.tx_z + p.rx_z);
    assert!(
        best.1.abs() <= cell && (best.2 - z_s).abs() <= cell,
        "{best:?}"
    );
}

#[test]
fn stationary_phase_model_at_reduced_carrier() {
    let s = reduced_carrier();
    let q = QuadratureSpec::default();
    let w = Waveform::constant();
    let (mut worst_db, mut worst_deg): (f64, f64) = (0.0, 0.0);
    for p in s.all_pairs().into_iter().filter(|p| p.tx <= p.rx) {
        let exact = exact_received_signal(&p, &s, 0.0, &w, &q).unwrap();
        let spa = spa_received_signal(&p, &s, 0.0, &w);
        worst_db = worst_db.max(db(spa, exact).abs());
        worst_deg = worst_deg.max(degrees(spa, exact).abs());
    }
    assert!(
        worst_db <= 0.5 && worst_deg <= 5.0,
        "{worst_db} dB, {worst_deg} deg"
    );
}

#[test]
fn delay_profile_matches_direct_evaluation() {
    let s = Scenario {
        carrier_freq: 5e9,
        ..Scenario::default()
    };
    let q = QuadratureSpec::default();
    let p = s.pair(2, 8).unwrap();
    let w = Waveform::Sinc {
        bandwidth: s.bandwidth,
    };
    let profile = DelayProfile::compute(&p, &s, &q, 3e8 / s.bandwidth * 1e-3).unwrap();
    let direct_cw = exact_received_signal(&p, &s, 0.0, &Waveform::constant(), &q).unwrap();
    assert!((profile.total() - direct_cw).norm() <= 1e-10 * direct_cw.norm());

    let peak = exact_received_signal(&p, &s, 2.0 * s.range / 3e8, &w, &q).unwrap();
    for offset in [-3e-9, 0.0, 1.7e-9, 6e-9] {
        let t = 2.0 * s.range / 3e8 + offset;
        let direct = exact_received_signal(&p, &s, t, &w, &q).unwrap();
        let binned = profile.signal_at(t, &w);
        assert!(
            (direct - binned).norm() <= 1e-4 * peak.norm(),
            "offset {offset}"
        );
    }
}

#[test]
fn backends_agree_at_reduced_carrier() {
    let s = reduced_carrier();
    let options = SynthesisOptions::default();
    let window = TimeWindow::default_for(&s);
    let spa = synthesize(&s, Backend::Spa, &window, &options).unwrap();
    let exact = synthesize(&s, Backend::Exact, &window, &options).unwrap();
    assert!(spa.same_time_base(&exact));
    for (a, b) in spa.traces.iter().zip(&exact.traces) {
        let peak = a
            .samples
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
            .unwrap()
            .0;
        let (u, v) = (a.samples[peak], b.samples[peak]);
        assert!(
            db(u, v).abs() <= 0.5 && degrees(u, v).abs() <= 5.0,
            "({},{})",
            a.tx,
            a.rx
        );
    }
}

#[test]
fn off_plate_specular_point_collapses_the_return() {
    let full = Scenario::default();
    let half = Scenario {
        plate_height: 0.5 * full.plate_height,
        ..full
    };
    let q = QuadratureSpec::default();
    let (tx, rx) = (12, 10);
    let p = half.pair(tx, rx).unwrap();
    assert!((0.5 * (p.tx_z + p.rx_z)).abs() > 0.5 * half.plate_height);
    let on = cw(&full, tx, rx, &q);
    let off = cw(&half, tx, rx, &q);
    assert!(db(off, on) <= -20.0, "{} dB", db(off, on));
}
