use approx::assert_relative_eq;
use proptest::prelude::*;

use packet_atom::first_order::{self, FirstOrderModel};
use packet_atom::grid::TimeGrid;
use packet_atom::semiclassical::{self, BlochParams, BlochState, PulseSpec};
use packet_atom::ww::{self, WWModel};
use packet_atom::{spectrum, AtomSpec, PacketSpec};

const GAMMA: f64 = 0.0125;
const KAPPA: f64 = 0.25;

fn model(lambda: f64) -> WWModel {
    WWModel::with_defaults(AtomSpec::new(GAMMA).unwrap(), PacketSpec::new(KAPPA, lambda).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_photon_density_is_symmetric_and_nonnegative(
        k1 in -4.0f64..4.0, k2 in -4.0f64..4.0, t in 0.0f64..400.0, lambda in -60.0f64..60.0,
    ) {
        let m = model(lambda);
        let a = ww::density_c(k1, k2, t, &m);
        let b = ww::density_c(k2, k1, t, &m);
        prop_assert!(a >= 0.0);
        prop_assert!((a - b).abs() <= 1e-14 * a.max(1e-300));
    }

    #[test]
    fn bloch_vector_stays_in_unit_ball(
        omega0 in 0.0f64..3.0, tau in 0.2f64..5.0, arrival in 0.0f64..30.0,
        theta in 0.0f64..std::f64::consts::PI, phi in 0.0f64..std::f64::consts::TAU,
        detuning in -0.5f64..0.5, radius in 0.0f64..1.0,
    ) {
        let params = BlochParams::spontaneous(&AtomSpec::new(GAMMA).unwrap()).with_detuning(detuning);
        let pulse = PulseSpec::new(omega0, tau, arrival).unwrap();
        let start = BlochState {
            u: radius * theta.sin() * phi.cos(),
            v: radius * theta.sin() * phi.sin(),
            w: radius * theta.cos(),
        };
        let grid = TimeGrid::new(0.0, 50.0, 201).unwrap();
        let tr = semiclassical::integrate_bloch(&params, &pulse, start, &grid).unwrap();
        for s in tr {
            prop_assert!(s.length_sqr().sqrt() <= 1.0 + 1e-6);
        }
    }

    #[test]
    fn short_pulse_shift_depends_on_area_only(area in 0.02f64..0.3, w in -1.0f64..1.0) {
        let params = BlochParams::new(1e-4, 5e-5, 0.0, -1.0).unwrap();
        let norm = 2.0 * std::f64::consts::PI.sqrt();
        let narrow = PulseSpec::new(area / (norm * 0.05), 0.05, 10.0).unwrap();
        let wide = PulseSpec::new(area / (norm * 0.2), 0.2, 10.0).unwrap();
        let w_start = params.w_eq + (w - params.w_eq) * (params.gamma1 * 10.0).exp();
        prop_assume!((-1.0..=1.0).contains(&w_start));
        let a = semiclassical::induced_shift_ode(&params, &narrow, w_start).unwrap().shift;
        let b = semiclassical::induced_shift_ode(&params, &wide, w_start).unwrap().shift;
        let scale = 0.25 * area * area;
        prop_assert!((a - b).abs() <= 1e-3 * scale + 1e-12, "{a} vs {b}");
    }

    #[test]
    fn spectral_density_routes_agree(omega in 0.05f64..3.0) {
        let m = model(-20.0);
        let parts = ww::separable_parts(f64::INFINITY, &m).unwrap();
        let direct = spectrum::spectral_density(omega, &m).unwrap();
        let separable = spectrum::spectral_density_separable(omega, &m, &parts);
        prop_assert!((direct - separable).abs() <= 1e-8 * direct.abs().max(1e-6));
    }
}

#[test]
fn separable_and_tensor_routes_agree() {
    for (lambda, t) in [(-20.0, 30.0), (20.0, 80.0)] {
        let m = model(lambda);
        let sep = ww::prob_ground(t, &m).unwrap();
        let tensor = ww::prob_ground_tensor(t, &m, 1e-7).unwrap();
        assert_relative_eq!(sep.value, tensor.value, max_relative = 1e-6);
    }
}

#[test]
fn halving_tolerance_does_not_move_results() {
    let m = model(-20.0);
    let mut fine = m;
    fine.quad = m.quad.with_rel_tol(0.5 * m.quad.rel_tol);
    for t in [10.0, 21.6, 100.0, 400.0] {
        let a = ww::prob_ground(t, &m).unwrap().value;
        let b = ww::prob_ground(t, &fine).unwrap().value;
        assert!((a - b).abs() <= 1e-8 * a.abs().max(1e-3), "t = {t}: {a} vs {b}");
    }
}

#[test]
fn packet_has_no_effect_before_arrival() {
    let hit = model(-20.0);
    let miss = hit.missing();
    for t in [1.0, 2.0, 4.0] {
        let a = ww::prob_ground(t, &hit).unwrap().value;
        let b = ww::prob_ground(t, &miss).unwrap().value;
        assert!((a - b).abs() < 1e-4 * a, "t = {t}: {a} vs {b}");
    }
    let a = ww::prob_ground(40.0, &hit).unwrap().value;
    let b = ww::prob_ground(40.0, &miss).unwrap().value;
    assert!(a - b > 1e-2);
}

#[test]
fn doubly_occupied_probability_scales_as_inverse_length() {
    let m = model(-20.0);
    let l = 251.32;
    let base = ww::doubly_occupied_prob(l, 200.0, &m).unwrap();
    for mult in [2.0, 4.0, 8.0] {
        let p = ww::doubly_occupied_prob(mult * l, 200.0, &m).unwrap();
        assert_relative_eq!(p * mult, base, max_relative = 0.02);
    }
}

#[test]
fn pair_sums_recover_the_continuum() {
    let m = model(-20.0);
    let t = 200.0;
    let continuum = ww::prob_ground(t, &m).unwrap().value;
    let mut prev = None;
    for l in [251.32, 502.64, 1005.28] {
        let p = ww::pair_sums(l, t, &m).unwrap();
        assert!((p.off_diagonal + p.doubly_occupied - continuum).abs() < 1e-3 * continuum);
        if let Some(q) = prev {
            assert_relative_eq!(p.off_diagonal, q, max_relative = 0.02);
        }
        prev = Some(p.off_diagonal);
    }
}

#[test]
fn first_order_probability_is_independent_of_box_length() {
    let atom = AtomSpec::new(GAMMA).unwrap();
    let packet = PacketSpec::new(KAPPA, -20.0).unwrap();
    let a = FirstOrderModel::new(atom, packet, 251.32).unwrap();
    let b = FirstOrderModel::new(atom, packet, 2.0 * 251.32).unwrap();
    let pa = first_order::prob_excited_first_order(60.0, &a).unwrap().value;
    let pb = first_order::prob_excited_first_order(60.0, &b).unwrap().value;
    assert!((pa - pb).abs() < 1e-8, "{pa} vs {pb}");
}
