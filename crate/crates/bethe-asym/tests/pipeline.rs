use std::f64::consts::PI;

use bethe_asym::asymptotics::{ll_jj_leading, szsz_leading, AsymptoticContext};
use bethe_asym::models::ModelSpec;
use bethe_asym::thermo::{dressed_quantities, ThermoConfig};
use bethe_asym::{Error, C64};
use proptest::prelude::*;

#[test]
fn free_fermion_expansion_matches_closed_form_for_all_distances() {
    let t = dressed_quantities(&ModelSpec::xxz(PI / 2.0, 2.0).unwrap(), &ThermoConfig::default()).unwrap();
    let ctx = AsymptoticContext::new(t, None, None).unwrap();
    let e = szsz_leading(&ctx).unwrap();
    for m in 1..=100 {
        let m = m as f64;
        let closed = 1.0 / 9.0 - 2.0 / (PI * PI * m * m) * (1.0 - (2.0 * m * PI / 3.0).cos());
        assert!((e.evaluate(m) - closed).abs() < 1e-10, "m = {m}");
    }
}

#[test]
fn delta_parametrization_and_errors() {
    let a = ModelSpec::xxz_from_delta(0.5, 1.0).unwrap();
    let b = ModelSpec::xxz(PI / 3.0, 1.0).unwrap();
    assert!((a.shift() - b.shift()).abs() < 1e-15);
    assert!(ModelSpec::xxz_from_delta(1.5, 1.0).is_err());
    // h above the saturation field: no Fermi sea
    let sat = ModelSpec::xxz(PI / 2.0, 5.0).unwrap();
    assert!(matches!(dressed_quantities(&sat, &ThermoConfig::default()), Err(Error::NoFermiSea(_))));
}

#[test]
fn interacting_generating_function_is_finite_and_conjugation_symmetric() {
    let t = dressed_quantities(&ModelSpec::xxz(PI / 3.0, 1.0).unwrap(), &ThermoConfig::default()).unwrap();
    let ctx = AsymptoticContext::new(t, None, None).unwrap();
    let g = ctx.generating_fn_full(C64::new(0.3, 0.0), 30.0).unwrap();
    // real β: G is real
    assert!(g.im.abs() < 1e-8 * g.norm(), "{g}");
    let a = ctx.a_coefficient(C64::new(0.2, 0.4)).unwrap();
    let b = ctx.a_coefficient(C64::new(0.2, -0.4)).unwrap();
    assert!((a - b.conj()).norm() < 1e-8);
}

#[test]
fn bose_gas_pipeline() {
    let t = dressed_quantities(&ModelSpec::lieb_liniger(4.0, 1.0).unwrap(), &ThermoConfig::default()).unwrap();
    let d = t.d;
    let ctx = AsymptoticContext::new(t, None, None).unwrap();
    let e = ll_jj_leading(&ctx).unwrap();
    assert!((e.const_term - d * d).abs() < 1e-12);
    assert!(e.osc_exp > 2.0, "repulsive gas has Z > 1");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn density_is_fermi_momentum_over_pi(zeta in 0.4f64..2.7, h in 0.3f64..1.5) {
        let m = ModelSpec::xxz(zeta, h).unwrap();
        if let Ok(t) = dressed_quantities(&m, &ThermoConfig::default()) {
            prop_assert!((t.d - t.p_f / PI).abs() < 1e-10);
            prop_assert!(t.d > 0.0 && t.d < 0.5);
        }
    }

    #[test]
    fn expansion_wiring(zeta in 0.6f64..2.5, h in 0.4f64..1.2) {
        let m = ModelSpec::xxz(zeta, h).unwrap();
        let t = dressed_quantities(&m, &ThermoConfig::default()).unwrap();
        let ctx = AsymptoticContext::new(t, Some(128), None).unwrap();
        let e = szsz_leading(&ctx).unwrap();
        prop_assert!((e.osc_exp - 2.0 * ctx.thermo.z_q.powi(2)).abs() < 1e-12);
        prop_assert!((e.const_term - (2.0 * ctx.thermo.d - 1.0).powi(2)).abs() < 1e-12);
        prop_assert!((e.osc_amp - 2.0 * e.form_factor_sq.unwrap()).abs() <= 1e-12 * e.osc_amp.abs().max(1.0));
    }
}
