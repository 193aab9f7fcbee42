use nanowire_core::transport::*;
use proptest::prelude::*;

const NM: f64 = 1e-9;

fn params(l_phi: f64, l_so: Option<f64>, w: f64, l: f64) -> WlParams {
    WlParams::new(l_phi, l_so, TransportGeometry::new(l, w).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn even_in_field(
        b in 0.0f64..10.0,
        l_phi in 10.0f64..1000.0,
        l_so in 10.0f64..5000.0,
        w in 5.0f64..100.0,
        l in 0.2f64..10.0,
    ) {
        let p = params(l_phi * NM, Some(l_so * NM), w * NM, l * 1e-6);
        prop_assert_eq!(wl_delta_g(b, &p), wl_delta_g(-b, &p));
        prop_assert_eq!(wl_so_delta_g(b, &p), wl_so_delta_g(-b, &p));
    }

    #[test]
    fn zero_field_is_the_conductance_minimum(
        b1 in 1e-4f64..8.0,
        ratio in 1.01f64..10.0,
        l_phi in 10.0f64..1000.0,
        w in 5.0f64..100.0,
    ) {
        let p = params(l_phi * NM, None, w * NM, 1.25e-6);
        let b2 = b1 * ratio;
        let (g0, g1, g2) = (wl_delta_g(0.0, &p), wl_delta_g(b1, &p), wl_delta_g(b2, &p));
        prop_assert!(g0 <= g1);
        prop_assert!(g1.abs() > g2.abs());
        prop_assert!(g2 < 0.0);
    }

    #[test]
    fn doubling_length_halves_correction(
        b in -8.0f64..8.0,
        l_phi in 10.0f64..1000.0,
        l_so in 10.0f64..5000.0,
        l in 0.2f64..10.0,
    ) {
        let short = params(l_phi * NM, Some(l_so * NM), 20.0 * NM, l * 1e-6);
        let long = params(l_phi * NM, Some(l_so * NM), 20.0 * NM, 2.0 * l * 1e-6);
        prop_assert_eq!(wl_delta_g(b, &long), 0.5 * wl_delta_g(b, &short));
        prop_assert_eq!(wl_so_delta_g(b, &long), 0.5 * wl_so_delta_g(b, &short));
    }

    #[test]
    fn diffusion_cancels(
        b in prop_oneof![-20.0f64..-1e-3, 1e-3f64..20.0],
        w in 5.0f64..500.0,
        d in 1e-4f64..1.0,
    ) {
        let l_b = magnetic_dephasing_length(b, w * NM).unwrap();
        let tau = magnetic_dephasing_time(b, w * NM, d).unwrap();
        let rel = ((d * tau).sqrt() - l_b).abs() / l_b;
        prop_assert!(rel < 1e-12, "rel = {rel}");
    }

    #[test]
    fn weak_spin_orbit_reduces_to_base(l_phi in 20.0f64..500.0) {
        let p = params(l_phi * NM, Some(l_phi * NM * 1e6), 20.0 * NM, 1.25e-6);
        for i in 0..=160 {
            let b = -8.0 + 0.1 * i as f64;
            let (so, base) = (wl_so_delta_g(b, &p), wl_delta_g(b, &p));
            prop_assert!(((so - base) / base).abs() < 1e-6);
        }
    }
}

#[test]
fn strong_spin_orbit_flips_sign() {
    let p = params(130.0 * NM, Some(1.3 * NM), 20.0 * NM, 1.25e-6);
    assert!(wl_so_delta_g(0.0, &p) > 0.0);
    assert!(wl_delta_g(0.0, &p) < 0.0);
}

#[test]
fn zero_field_lengths_are_infinite() {
    assert_eq!(magnetic_length(0.0), f64::INFINITY);
    assert_eq!(magnetic_dephasing_length(0.0, 20.0 * NM).unwrap(), f64::INFINITY);
    assert_eq!(magnetic_dephasing_time(0.0, 20.0 * NM, 0.01).unwrap(), f64::INFINITY);
}
