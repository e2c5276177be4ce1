mod common;

use std::f64::consts::{PI, SQRT_2, TAU};

use adiabat::asymptotics::{assemble, rigorous_bound, typical_coefficient};
use adiabat::linalg::hermiticity_defect;
use adiabat::propagator::{evolve, true_error};
use adiabat::schedule::DEFAULT_GAP_FLOOR;
use adiabat::{
    AsymptoticData, Endpoint, EndpointAmplitudes, Envelope, HamiltonianSchedule, HermitianTerm,
    IntegratorConfig,
};
use common::{c, random_hermitian, random_phases, random_schedule, random_unitary, rng};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn evaluated_hamiltonians_are_hermitian_and_diagonalized(seed in any::<u64>(), d in 2usize..=6) {
        let mut r = rng(seed);
        let h = random_schedule(&mut r, d);
        for k in 0..20 {
            let s = k as f64 / 19.0;
            let m = h.evaluate(s).unwrap().into_matrix();
            prop_assert!(hermiticity_defect(&m) <= 1e-12);
            let frame = h.spectral_frame(s, f64::MIN_POSITIVE).unwrap();
            let scale = m.norm().max(1.0);
            prop_assert!((frame.reconstruct() - &m).norm() <= 1e-10 * scale);
            prop_assert!(frame.energies.windows(2).all(|p| p[0] <= p[1]));
        }
    }

    #[test]
    fn derivatives_match_central_differences(seed in any::<u64>(), d in 2usize..=4, s in 0.05f64..0.95) {
        let mut r = rng(seed);
        let h = random_schedule(&mut r, d).with_smooth_wrap(r.gen_range(0..=1));
        let step = 1e-5;
        let at = |s: f64| h.evaluate(s).unwrap().into_matrix();
        let d1 = |s: f64| h.derivative(s, 1).unwrap().into_matrix();
        let fd1 = (at(s + step) - at(s - step)) / c(2.0 * step, 0.0);
        let exact1 = d1(s);
        let scale1 = exact1.norm().max(at(s).norm()).max(1.0);
        prop_assert!((fd1 - &exact1).norm() <= 1e-8 * scale1);
        let fd2 = (d1(s + step) - d1(s - step)) / c(2.0 * step, 0.0);
        let exact2 = h.derivative(s, 2).unwrap().into_matrix();
        let scale2 = exact2.norm().max(exact1.norm()).max(1.0);
        prop_assert!((fd2 - &exact2).norm() <= 1e-8 * scale2);
    }

    #[test]
    fn eigenvector_phases_do_not_change_coefficients(seed in any::<u64>()) {
        let mut r = rng(seed);
        for h in [HamiltonianSchedule::quadratic_crossing(), common::three_level()] {
            let mut frames = h.frames(257, DEFAULT_GAP_FLOOR).unwrap();
            let reference = assemble(&h, 1, &frames).unwrap();
            for frame in &mut frames {
                for v in &mut frame.eigenvectors {
                    *v = &*v * Complex64::from_polar(1.0, r.gen_range(0.0..TAU));
                }
            }
            let rephased = assemble(&h, 1, &frames).unwrap();
            prop_assert!((reference.b_bar - rephased.b_bar).abs() <= 1e-12);
            for _ in 0..5 {
                let t = r.gen_range(10.0..3000.0);
                let a = reference.switching_coefficient(t);
                let b = rephased.switching_coefficient(t);
                prop_assert!((a - b).abs() <= 1e-12, "T = {}: {} vs {}", t, a, b);
            }
        }
    }

    #[test]
    fn switching_coefficient_obeys_parallelogram_bound(
        seed in any::<u64>(),
        levels in 1usize..=5,
        n in 1usize..=3,
    ) {
        let mut r = rng(seed);
        let mut draw = || -> Vec<Complex64> {
            (0..levels).map(|_| c(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0))).collect()
        };
        let (c0, c1) = (draw(), draw());
        let w: Vec<f64> = (0..levels).map(|_| r.gen_range(0.1..3.0)).collect();
        let tr: Vec<Complex64> = (0..levels).map(|_| Complex64::from_polar(1.0, r.gen_range(0.0..TAU))).collect();
        let data = AsymptoticData::from_parts(
            EndpointAmplitudes { endpoint: Endpoint::Start, n, c: c0 },
            EndpointAmplitudes { endpoint: Endpoint::End, n, c: c1 },
            w,
            tr,
        );
        for _ in 0..10 {
            let t = r.gen_range(1.0..1e4);
            prop_assert!(data.switching_coefficient(t) <= SQRT_2 * data.b_bar * (1.0 + 1e-14));
        }
    }
}

#[test]
fn parallelogram_bound_on_quadratic_crossing() {
    let data = typical_coefficient(&HamiltonianSchedule::quadratic_crossing()).unwrap();
    let mut r = rng(7);
    for _ in 0..1000 {
        let t = r.gen_range(1.0..1e4);
        assert!(data.switching_coefficient(t) <= SQRT_2 * data.b_bar * (1.0 + 1e-14));
    }
}

#[test]
fn mean_square_over_phase_period_is_typical_coefficient() {
    let data = typical_coefficient(&HamiltonianSchedule::quadratic_crossing()).unwrap();
    let period = TAU / data.w[0];
    let t0 = 1234.5;
    let mean_sq = common::simpson(t0, t0 + period, 2048, |t| {
        data.switching_coefficient(t).powi(2)
    }) / period;
    assert!((mean_sq - data.b_bar.powi(2)).abs() <= 1e-10 * data.b_bar.powi(2));
}

#[test]
fn conjugated_schedule_gives_same_diagnostics() {
    let h = common::three_level();
    let u = random_unitary(&mut rng(11), 3);
    let g = h.conjugated(&u).unwrap();
    let cfg = IntegratorConfig::default();
    for t in [5.0, 20.0] {
        let a = true_error(&h, t, &cfg).unwrap();
        let b = true_error(&g, t, &cfg).unwrap();
        assert!((a - b).abs() <= 1e-10, "T = {t}: {a} vs {b}");
    }
    let (da, db) = (
        typical_coefficient(&h).unwrap(),
        typical_coefficient(&g).unwrap(),
    );
    assert!((da.b_bar - db.b_bar).abs() <= 1e-10);
    for t in [50.0, 333.0, 2000.0] {
        assert!((da.switching_coefficient(t) - db.switching_coefficient(t)).abs() <= 1e-10);
    }
    let (ba, bb) = (
        rigorous_bound(&h, 100.0, 1025).unwrap(),
        rigorous_bound(&g, 100.0, 1025).unwrap(),
    );
    assert!((ba - bb).abs() <= 1e-10 * ba);
}

#[test]
fn basis_rephasing_leaves_rigorous_bound_unchanged() {
    // A diagonal unitary re-phases every eigenvector without touching gaps.
    let mut r = rng(5);
    for h in [
        HamiltonianSchedule::quadratic_crossing(),
        common::three_level(),
    ] {
        let reference = rigorous_bound(&h, 250.0, 1025).unwrap();
        let p = random_phases(&mut r, h.dim());
        let rephased = rigorous_bound(&h.conjugated(&p).unwrap(), 250.0, 1025).unwrap();
        assert!((reference - rephased).abs() <= 1e-12 * reference);
    }
}

#[test]
fn mid_path_bump_leaves_typical_coefficient_exactly_unchanged() {
    let bump_poly = {
        // s⁹(1 − s)⁹
        let mut p = [0.0; 19];
        let mut binom = 1.0;
        for k in 0..=9 {
            p[9 + k] = if k % 2 == 0 { binom } else { -binom };
            binom = binom * (9 - k) as f64 / (k + 1) as f64;
        }
        p.iter().map(|v| v * 1e5).collect::<Vec<f64>>()
    };
    let mut r = rng(3);
    for h in [
        HamiltonianSchedule::quadratic_crossing(),
        common::three_level(),
    ] {
        let term = HermitianTerm::new(random_hermitian(&mut r, h.dim())).unwrap();
        let bumped = h
            .clone()
            .with_term(Envelope::polynomial(bump_poly.clone()), term)
            .unwrap();
        let (a, b) = (
            typical_coefficient(&h).unwrap(),
            typical_coefficient(&bumped).unwrap(),
        );
        assert_eq!(a.n, b.n);
        assert_eq!(a.b_bar, b.b_bar);
        assert_eq!(a.amp0, b.amp0);
        assert_eq!(a.amp1.c.len(), b.amp1.c.len());
        assert!(
            (a.w[0] - b.w[0]).abs() > 1e-4,
            "bump should move the average gap"
        );
    }
}

#[test]
fn quadrature_estimates_converge() {
    let h = common::three_level();
    let values: Vec<_> = [129, 257, 513, 1025]
        .iter()
        .map(|&n| h.average_gaps(n).unwrap()[0])
        .collect();
    for pair in values.windows(2) {
        assert!((pair[1].value - pair[0].value).abs() <= pair[0].error);
        assert!(pair[1].error <= pair[0].error);
    }
    let l: Vec<_> = [257, 1025]
        .iter()
        .map(|&n| h.path_length(n).unwrap())
        .collect();
    assert!((l[1].value - l[0].value).abs() <= l[0].error);
}

#[test]
fn path_length_is_reparametrization_invariant() {
    let h = HamiltonianSchedule::quadratic_crossing();
    let plain = h.path_length(1025).unwrap();
    let wrapped = h.clone().with_smooth_wrap(1).path_length(1025).unwrap();
    assert!(
        (plain.value - wrapped.value).abs() <= 1e-6,
        "{} vs {}",
        plain.value,
        wrapped.value
    );
    let scaled = h.scaled(3.0).path_length(1025).unwrap();
    assert!((plain.value - scaled.value).abs() <= 1e-12);
}

#[test]
fn random_schedules_evolve_unitarily() {
    let mut r = rng(19);
    let cfg = IntegratorConfig::default();
    for _ in 0..10 {
        let d = r.gen_range(2..=4);
        let h = random_schedule(&mut r, d);
        let init = h
            .spectral_frame(0.0, f64::MIN_POSITIVE)
            .unwrap()
            .ground()
            .clone();
        let t = r.gen_range(1.0..60.0);
        let out = evolve(&h, t, &init, &cfg).unwrap();
        assert!(out.norm_drift <= 1e-8);
    }
}

#[test]
fn switching_estimate_vanishes_on_cancellation() {
    let data = typical_coefficient(&HamiltonianSchedule::quadratic_crossing()).unwrap();
    for k in [1.0, 3.0, 101.0] {
        let t = k * PI / data.w[0];
        assert!(data.switching_coefficient(t) < 1e-10);
    }
}
