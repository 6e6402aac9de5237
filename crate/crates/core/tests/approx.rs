use casimir_core::approx::{
    enumerate_orbits, proximity_energy, semiclassical_energy, OrbitKind, ProximityParams,
};
use casimir_core::exact::{e12_reduced, NumericsConfig};
use proptest::prelude::*;

#[test]
fn exact_energy_lies_between_outer_and_inner_choices() {
    let cfg = NumericsConfig::default();
    for i in 0..=12 {
        let alpha = 1.1 + 2.9 * f64::from(i) / 12.0;
        let exact = e12_reduced(alpha, &cfg).unwrap().e12_hat;
        let outer = proximity_energy(alpha, ProximityParams::OUTER).unwrap();
        let inner = proximity_energy(alpha, ProximityParams::INNER).unwrap();
        assert!(outer < exact && exact < inner, "alpha={alpha}: {outer} {exact} {inner}");
    }
}

#[test]
fn semiclassical_approaches_exact_near_contact() {
    let cfg = NumericsConfig::default();
    let gaps = [0.2, 0.05, 0.01];
    let misfit: Vec<f64> = gaps
        .iter()
        .map(|g| {
            let alpha = 1.0 + g;
            (semiclassical_energy(alpha).unwrap() / e12_reduced(alpha, &cfg).unwrap().e12_hat - 1.0).abs()
        })
        .collect();
    assert!(misfit.windows(2).all(|w| w[1] < w[0]), "{misfit:?}");
    assert!(misfit[2] < 0.01);
}

proptest! {
    #[test]
    fn energy_decreases_in_p(alpha in 1.001_f64..50.0, p in 0.0_f64..0.99, dp in 0.001_f64..0.5) {
        let q = (p + dp).min(1.0);
        let lo = proximity_energy(alpha, ProximityParams::new(p).unwrap()).unwrap();
        let hi = proximity_energy(alpha, ProximityParams::new(q).unwrap()).unwrap();
        prop_assert!(hi > lo);
    }

    #[test]
    fn semiclassical_identity_is_bitwise(alpha in 1.0001_f64..100.0) {
        let a = semiclassical_energy(alpha).unwrap();
        let b = proximity_energy(alpha, ProximityParams::GEOMETRIC_MEAN).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn admissibility_persists_as_alpha_grows(alpha in 1.01_f64..6.0, step in 0.0_f64..5.0) {
        let before = enumerate_orbits(alpha, 30.0, 24).unwrap();
        let after = enumerate_orbits(alpha + step, 30.0, 24).unwrap();
        for o in before.iter().filter(|o| o.kind == OrbitKind::TypeI && o.admissible) {
            let same = after.iter().find(|x| x.kind == OrbitKind::TypeI && (x.v, x.w) == (o.v, o.w)).unwrap();
            prop_assert!(same.admissible);
        }
    }
}
