use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use torharm::coords::{to_toroidal, CartesianPoint};
use torharm::greens::{
    cylindrical_azimuthal_term, green_cylindrical, green_direct, green_spherical, green_toroidal,
    spherical_azimuthal_term, GreenLimits, PointPair,
};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn limits(n_max: u32, m_max: u32) -> GreenLimits {
    GreenLimits {
        n_max,
        m_max,
        ..GreenLimits::default()
    }
}

#[test]
fn spherical_at_half_radius_ratio() {
    let p1 = CartesianPoint::from_cylindrical(0.4, 0.3, 0.3);
    let p2 = CartesianPoint::from_cylindrical(0.6, 2.0, -0.8);
    assert!((p1.r() / p2.r() - 0.5).abs() < 1e-12);
    let pp = PointPair::new(p1, p2, 1.0);
    let v = green_spherical(&pp, &limits(40, 40)).unwrap();
    assert!(rel(v.value, green_direct(&pp).unwrap()) < 1e-10);
}

#[test]
fn spherical_near_unit_ratio_is_flagged() {
    let p1 = CartesianPoint::new(0.95, 0.0, 0.0);
    let p2 = CartesianPoint::new(0.0, 0.0, 1.0);
    let v = green_spherical(&PointPair::new(p1, p2, 1.0), &limits(60, 60)).unwrap();
    assert!(!v.converged);
}

#[test]
fn toroidal_same_half_plane() {
    let a = 1.0;
    // beta = 1.2 and beta = 3 at eta = 0.4 and -1.1
    let p1 = torharm::to_cartesian(
        &torharm::ToroidalPoint::from_toroidal(1.2f64.acosh(), 0.4, 0.7, a).unwrap(),
        a,
    )
    .unwrap();
    let p2 = torharm::to_cartesian(
        &torharm::ToroidalPoint::from_toroidal(3f64.acosh(), -1.1, 0.7, a).unwrap(),
        a,
    )
    .unwrap();
    let pp = PointPair::new(p1, p2, a);
    let v = green_toroidal(&pp, &limits(40, 20)).unwrap();
    assert!(rel(v.value, green_direct(&pp).unwrap()) < 1e-9);
}

#[test]
fn toroidal_azimuthally_separated() {
    let p1 = CartesianPoint::from_cylindrical(0.3, 0.0, 0.3);
    let p2 = CartesianPoint::from_cylindrical(1.1, PI / 3.0, -0.1);
    let pp = PointPair::new(p1, p2, 1.0);
    let v = green_toroidal(&pp, &GreenLimits::default()).unwrap();
    assert!(v.converged);
    assert!(rel(v.value, green_direct(&pp).unwrap()) < 1e-10);
}

#[test]
fn cylindrical_with_equal_radii() {
    let p1 = CartesianPoint::from_cylindrical(0.6, 0.2, 0.8);
    let p2 = CartesianPoint::new(0.0, 0.6, -0.8);
    let pp = PointPair::new(p1, p2, 1.0);
    assert!(green_spherical(&pp, &GreenLimits::default()).is_err());
    let v = green_cylindrical(&pp, &GreenLimits::default()).unwrap();
    assert!(rel(v.value, green_direct(&pp).unwrap()) < 1e-12);
}

#[test]
fn cylindrical_terms_decay_with_the_toroidal_envelope() {
    let pp = PointPair::new(
        CartesianPoint::new(0.8, 0.0, 0.1),
        CartesianPoint::new(1.5, 0.0, -0.4),
        1.0,
    );
    let xi_bar = pp.chi_bar().acosh();
    let t = |m: u32| cylindrical_azimuthal_term(&pp, m).unwrap().abs();
    // slope of ln|term| against m, which should approach -xi_bar
    let slope = (t(60).ln() - t(30).ln()) / 30.0;
    assert!((slope + xi_bar).abs() < 0.02 * xi_bar, "{slope} vs {xi_bar}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn expansions_are_symmetric(
        rho1 in 0.1f64..2.0, z1 in -1.5f64..1.5, phi1 in 0.0f64..TAU,
        rho2 in 0.1f64..2.0, z2 in -1.5f64..1.5, phi2 in 0.0f64..TAU,
    ) {
        let p1 = CartesianPoint::from_cylindrical(rho1, phi1, z1);
        let p2 = CartesianPoint::from_cylindrical(rho2, phi2, z2);
        prop_assume!((p1.r() - p2.r()).abs() > 0.2 * p1.r().max(p2.r()));
        let (Ok(t1), Ok(t2)) = (to_toroidal(&p1, 1.0), to_toroidal(&p2, 1.0)) else {
            return Err(TestCaseError::reject("focal ring"));
        };
        prop_assume!((t1.xi - t2.xi).abs() > 0.3);
        let pp = PointPair::new(p1, p2, 1.0);
        prop_assume!(pp.chi_bar() > 1.05);
        let lim = GreenLimits::default();
        for f in [green_spherical, green_toroidal, green_cylindrical] {
            let a = f(&pp, &lim).unwrap().value;
            let b = f(&pp.swapped(), &lim).unwrap().value;
            prop_assert!(rel(a, b) < 1e-13, "{} {}", a, b);
        }
    }

    #[test]
    fn ring_terms_match_between_expansions(r1 in 0.05f64..0.8, theta in 0.1f64..3.0, m in 0u32..8) {
        // point 2 on the focal ring itself: rho2 = a, z2 = 0
        let a = 1.0;
        let p1 = CartesianPoint::new(r1 * theta.sin(), 0.0, r1 * theta.cos());
        let p2 = CartesianPoint::new(a, 0.0, 0.0);
        let pp = PointPair::new(p1, p2, a);
        let sph = spherical_azimuthal_term(&pp, m, 400);
        let cyl = cylindrical_azimuthal_term(&pp, m).unwrap();
        let scale = cylindrical_azimuthal_term(&pp, 0).unwrap().abs();
        prop_assert!((sph - cyl).abs() <= 1e-10 * scale, "m={}: {} {}", m, sph, cyl);
    }
}
