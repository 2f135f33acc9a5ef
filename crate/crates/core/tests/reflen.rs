use reflen_core::*;

fn cm(text: &str) -> CoxeterMatrix {
    CoxeterMatrix::parse(text).unwrap()
}

#[test]
fn affine_maximum_is_two_n() {
    for (text, radius, n) in [
        ("rank 2; m12=inf", 12, 1),
        ("rank 3; m12=3 m13=3 m23=3", 8, 2),
        ("rank 4; m12=inf m34=inf", 8, 2),
    ] {
        let r = affine_bound_experiment(&cm(text), radius, 6).unwrap();
        assert_eq!(r.n, n);
        assert_eq!(r.max_exact, 2 * n, "{text}");
        assert!(r.attained);
        assert!(!r.partial);
    }
}

#[test]
fn affine_experiment_rejects_other_types() {
    assert_eq!(
        affine_bound_experiment(&cm("rank 2; m12=3"), 3, 3).unwrap_err(),
        Error::NotAffineEuclidean
    );
    assert_eq!(
        affine_bound_experiment(&cm("rank 3; m12=inf m13=inf m23=inf"), 3, 3).unwrap_err(),
        Error::NotAffineEuclidean
    );
}

#[test]
fn ball_report_is_consistent() {
    let m = cm("rank 4; m12=3 m13=3 m14=3 m23=3 m24=3 m34=3");
    let group = CoxeterGroup::new(&m);
    let ball = reflen_ball(&m, 6, 6, ReflenOptions::default()).unwrap();
    assert_eq!(ball.results.len(), 677);
    let csv = ball.to_csv();
    assert!(csv.starts_with("key,len_S,upper,lower,status\n"));
    assert_eq!(csv.lines().count(), 678);
    for r in &ball.results {
        let u = r.upper.unwrap();
        assert!(r.lower <= u);
        assert_eq!(u % 2, r.standard_length % 2);
        assert!(u <= r.standard_length);
        assert!(r.lower >= fixed_space_codim(&r.element));
        let mut prod = group.identity().clone();
        for w in &r.witness {
            prod = prod.mul(&group.evaluate(w).unwrap());
        }
        assert_eq!(prod.key(), r.element.key());
    }
    let total: usize = ball.histogram().iter().map(|(_, c)| c).sum();
    assert_eq!(total, 677);
}

#[test]
fn truncation_is_monotone_in_depth() {
    let m = cm("rank 3; m12=inf m13=inf m23=inf");
    let engine = ReflenEngine::new(&m, 6, 4, ReflenOptions::default());
    let mut prev: Vec<Option<u32>> = vec![None; engine.ball().len()];
    for d in 0..=4 {
        let dist = engine.distances(d, None);
        for (i, p) in prev.iter_mut().enumerate() {
            let now = dist.get(i);
            if let (Some(a), Some(b)) = (*p, now) {
                assert!(b <= a);
            }
            assert!(p.is_none() || now.is_some());
            *p = now;
        }
    }
}

#[test]
fn element_protocol_outside_ball() {
    let p = Protocol { radius: 2, d_start: 0, d_cap: 2, stable_steps: 2 };
    let r = reflen_element(&cm("rank 2; m12=inf"), &[0, 1, 0, 1], &p, ReflenOptions::default()).unwrap();
    assert_eq!(r.exact(), Some(2));
    assert!(matches!(
        reflen_element(&cm("rank 2; m12=inf"), &[0, 5], &p, ReflenOptions::default()),
        Err(Error::GeneratorOutOfRange { .. })
    ));
}
