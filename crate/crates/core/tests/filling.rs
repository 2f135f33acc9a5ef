use num_rational::BigRational;
use proptest::prelude::*;
use reflen_core::filling::cusp::{a_set, cusp_data_unchecked};
use reflen_core::filling::hyperbolic::{q, qi};
use reflen_core::filling::*;

fn model(p: &str, qq: &str) -> TriangleModel {
    TriangleModel::build_str(p, qq).unwrap()
}

#[test]
fn generators_are_reflections_with_coxeter_relations() {
    for (p, qq) in [("2", "3"), ("2", "inf"), ("inf", "inf")] {
        let m = model(p, qq);
        assert!(m.verify());
        for c in m.relation_checks() {
            assert!(c.ok, "{p} {qq} {:?}", c);
        }
    }
}

#[test]
fn a_sets_are_finite_and_closed_under_inversion() {
    for (p, qq) in [("2", "3"), ("2", "inf"), ("inf", "inf")] {
        let m = model(p, qq);
        for s in m.cusps() {
            let a = compute_as(&m, s, &qi(1)).unwrap();
            assert!(!a.is_empty());
            for e in &a {
                assert!(!e.matrix.is_projective_identity());
                let inv = e.matrix.inverse();
                assert!(a.iter().any(|f| f.matrix.projectively_eq(&inv)), "{}", e.name());
            }
        }
    }
}

#[test]
fn a_set_grows_with_height() {
    let m = model("2", "3");
    let sizes: Vec<usize> = [qi(1), q(3, 2), qi(2), qi(3)]
        .iter()
        .map(|h| compute_as(&m, 0, h).unwrap().len())
        .collect();
    assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "{sizes:?}");
    // Halving h doubles displacements.
    let c1 = cusp_data_unchecked(&m, 0, &qi(1)).unwrap();
    let c2 = cusp_data_unchecked(&m, 0, &q(1, 2)).unwrap();
    let a1 = a_set(&m, &c1);
    let a2 = a_set(&m, &c2);
    assert!(a2.len() < a1.len());
    for e in &a2 {
        let f = a1.iter().find(|f| f.kind == e.kind && f.k == e.k).unwrap();
        assert_eq!(e.displacement, &f.displacement * qi(2));
    }
}

#[test]
fn modular_certificate() {
    let m = model("2", "3");
    let cert = congruence_search(&m, &qi(1), 100).unwrap();
    assert_eq!(cert.prime, 7);
    assert_eq!(cert.parabolics.len(), 5);
    assert!(cert.parabolics.iter().all(|p| p.order == p.image_order));
    for c in &cert.cusps {
        assert_eq!(c.elements.len(), c.images.len());
        assert!(c.images.iter().all(|img| *img != [1, 0, 0, 1]));
    }
    let tp = two_pi_certificate(&m, &cert, 0).unwrap();
    assert_eq!(tp.min_displacement, BigRational::new(13.into(), 2.into()));
    let lo = tp.margin.lo_f64();
    assert!(lo > 0.21 && lo < 0.2169, "{lo}");
}

#[test]
fn exhausted_search_reports_diagnostics() {
    let m = model("2", "3");
    match congruence_search(&m, &qi(1), 5) {
        Err(reflen_core::Error::SearchExhausted { cap, diagnostics }) => {
            assert_eq!(cap, 5);
            assert!(diagnostics.contains("5:"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn warp_profile_csv_shape() {
    let p = warp_profile(6.5, midpoint_r_t(6.5), 512).unwrap();
    let csv = p.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "r,f,fp,fpp");
    assert_eq!(lines.len(), 513);
    assert!(!csv.contains('\r'));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn warp_profiles_pass_grid_checks(l in 6.35f64..10.0, t in 0.05f64..0.95) {
        let lo = -l / (2.0 * std::f64::consts::PI);
        let r_t = lo + t * (-1.0 - lo);
        let p = warp_profile(l, r_t, 256).unwrap();
        prop_assert!(p.checks.all_pass());
        for w in p.samples.windows(2) {
            prop_assert!(w[1].fp >= w[0].fp - 1e-12);
            prop_assert!(w[0].fpp >= 0.0);
        }
    }
}
