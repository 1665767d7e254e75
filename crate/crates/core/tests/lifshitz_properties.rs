use casimir_core::constants::{C, HBAR, K_B};
use casimir_core::lifshitz::{
    force_curve, force_difference, free_energy_breakdown, free_energy_per_area, CurveRequest, HalfSpace,
    LifshitzConfig, SpherePlateGeometry,
};
use casimir_core::materials::{build_material_profile, reference, MaterialProfile, ProfileInputs};
use proptest::prelude::*;

fn half_space(p: MaterialProfile) -> HalfSpace {
    HalfSpace::new(build_material_profile(p, &ProfileInputs::reference(p)).unwrap())
}

// Brute-force Lifshitz sum: textbook Fresnel coefficients in k⊥, a plain
// trapezoid rule on a geometric k⊥ grid, and a fixed number of Matsubara terms.
fn trapezoid_free_energy(z: f64, a: &HalfSpace, b: &HalfSpace, t: f64, r0: (f64, f64)) -> f64 {
    let xi1 = 2.0 * std::f64::consts::PI * K_B * t / HBAR;
    let grid: Vec<f64> = (0..4000)
        .map(|i| 1e3 * (1e11f64 / 1e3).powf(i as f64 / 3999.0))
        .collect();
    let integrate = |f: &dyn Fn(f64) -> f64| {
        let mut s = 0.0;
        for w in grid.windows(2) {
            s += 0.5 * (w[1] - w[0]) * (f(w[0]) + f(w[1]));
        }
        s
    };
    let mut total = 0.0;
    // j = 0
    let zero = integrate(&|k: f64| {
        let e = (-2.0 * k * z).exp();
        k * ((1.0 - r0.0 * e).ln() + (1.0 - r0.1 * e).ln())
    });
    total += 0.5 * zero;
    for j in 1..400 {
        let xi = xi1 * j as f64;
        let (e1, e2) = (a.model.eval(xi).unwrap(), b.model.eval(xi).unwrap());
        let term = integrate(&|k: f64| {
            let q = (k * k + xi * xi / (C * C)).sqrt();
            let k1 = (k * k + e1 * xi * xi / (C * C)).sqrt();
            let k2 = (k * k + e2 * xi * xi / (C * C)).sqrt();
            let tm = ((e1 * q - k1) / (e1 * q + k1)) * ((e2 * q - k2) / (e2 * q + k2));
            let te = ((q - k1) / (q + k1)) * ((q - k2) / (q + k2));
            let e = (-2.0 * q * z).exp();
            k * ((1.0 - tm * e).ln() + (1.0 - te * e).ln())
        });
        total += term;
    }
    K_B * t / (2.0 * std::f64::consts::PI) * total
}

#[test]
fn gold_silicon_matches_brute_force_sum() {
    let gold = half_space(MaterialProfile::GoldTabulated);
    let si = half_space(MaterialProfile::SiDarkDielectric);
    let z = 100e-9;
    let cfg = LifshitzConfig::default();
    let e = free_energy_per_area(z, &gold, &si, &cfg).unwrap();
    let r_tm0 = 10.66 / 12.66;
    let brute = trapezoid_free_energy(z, &gold, &si, 300.0, (r_tm0, 0.0));
    assert!((e / brute - 1.0).abs() < 1e-2, "{e:e} vs {brute:e}");
}

#[test]
fn tightening_tolerances_changes_little() {
    let gold = half_space(MaterialProfile::GoldTabulated);
    let light = half_space(MaterialProfile::SiIlluminated);
    let dark = half_space(MaterialProfile::SiDarkDielectric);
    let geom = SpherePlateGeometry::new(reference::SPHERE_RADIUS, 100e-9).unwrap();
    let loose = force_difference(&geom, &gold, &light, &dark, &LifshitzConfig::default()).unwrap();
    let tight_cfg = LifshitzConfig {
        matsubara_rel_tol: 1e-11,
        quad_rel_tol: 1e-11,
        y_cutoff: 80.0,
        ..LifshitzConfig::default()
    };
    let tight = force_difference(&geom, &gold, &light, &dark, &tight_cfg).unwrap();
    assert!((loose / tight - 1.0).abs() < 1e-6, "{loose:e} vs {tight:e}");
}

#[test]
fn dark_models_differ_only_at_zero_frequency() {
    let gold = half_space(MaterialProfile::GoldTabulated);
    let a = half_space(MaterialProfile::SiDarkDielectric);
    let b = half_space(MaterialProfile::SiDarkWithDc);
    let cfg = LifshitzConfig::default();
    let ba = free_energy_breakdown(150e-9, &gold, &a, &cfg).unwrap();
    let bb = free_energy_breakdown(150e-9, &gold, &b, &cfg).unwrap();
    // j = 0: r_TM(0) goes from (ε₀−1)/(ε₀+1) to 1, TE stays zero.
    assert!(bb.terms[0].tm < ba.terms[0].tm);
    assert_eq!(ba.terms[0].te, 0.0);
    assert_eq!(bb.terms[0].te, 0.0);
    for (x, y) in ba.terms.iter().zip(&bb.terms).skip(1).take(20) {
        assert!((x.total() / y.total() - 1.0).abs() < 1e-3, "j = {}", x.j);
    }
}

#[test]
fn sphere_plate_force_equals_proximity_mapping() {
    let gold = half_space(MaterialProfile::GoldTabulated);
    let si = half_space(MaterialProfile::SiIlluminated);
    let cfg = LifshitzConfig::default();
    let geom = SpherePlateGeometry::new(reference::SPHERE_RADIUS, 200e-9).unwrap();
    let f = casimir_core::lifshitz::sphere_plate_force(&geom, &gold, &si, &cfg).unwrap();
    let e = free_energy_per_area(200e-9, &gold, &si, &cfg).unwrap();
    assert_eq!(f, 2.0 * std::f64::consts::PI * reference::SPHERE_RADIUS * e);
    assert!(f < 0.0);
}

#[test]
fn dense_force_curve_is_monotone() {
    let gold = half_space(MaterialProfile::GoldTabulated);
    let si = half_space(MaterialProfile::SiIlluminated);
    let grid: Vec<f64> = (0..1209).map(|i| 100e-9 + 400e-9 * i as f64 / 1208.0).collect();
    let req = CurveRequest::Force {
        sphere: &gold,
        plate: &si,
    };
    let curve = force_curve(&grid, reference::SPHERE_RADIUS, &req, &LifshitzConfig::default()).unwrap();
    assert_eq!(curve.points().len(), 1209);
    assert!(curve.points().windows(2).all(|w| w[1].1.abs() < w[0].1.abs()));
}

fn any_profile() -> impl Strategy<Value = MaterialProfile> {
    prop_oneof![
        Just(MaterialProfile::GoldTabulated),
        Just(MaterialProfile::SiDarkDielectric),
        Just(MaterialProfile::SiDarkWithDc),
        Just(MaterialProfile::SiIlluminated),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn energy_is_symmetric_negative_and_decaying(a in any_profile(), b in any_profile(), z in 80e-9f64..2e-6) {
        let (ha, hb) = (half_space(a), half_space(b));
        let cfg = LifshitzConfig::default();
        let e_ab = free_energy_per_area(z, &ha, &hb, &cfg).unwrap();
        let e_ba = free_energy_per_area(z, &hb, &ha, &cfg).unwrap();
        let e_far = free_energy_per_area(z * 1.1, &ha, &hb, &cfg).unwrap();
        prop_assert!(e_ab < 0.0);
        prop_assert!((e_ab / e_ba - 1.0).abs() < 1e-12);
        prop_assert!(e_far > e_ab);
    }

    #[test]
    fn illumination_strengthens_attraction(z in 100e-9f64..500e-9) {
        let gold = half_space(MaterialProfile::GoldTabulated);
        let geom = SpherePlateGeometry::new(reference::SPHERE_RADIUS, z).unwrap();
        let cfg = LifshitzConfig::default();
        for dark in [MaterialProfile::SiDarkDielectric, MaterialProfile::SiDarkWithDc] {
            let d = force_difference(&geom, &gold, &half_space(MaterialProfile::SiIlluminated), &half_space(dark), &cfg).unwrap();
            prop_assert!(d < 0.0);
        }
    }
}
