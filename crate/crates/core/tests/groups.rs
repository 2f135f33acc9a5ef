use std::collections::HashMap;

use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reflen_core::reflen::engine_ball;
use reflen_core::*;

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::Finite(2)),
        Just(Exponent::Finite(3)),
        Just(Exponent::Finite(4)),
        Just(Exponent::Finite(5)),
        Just(Exponent::Finite(6)),
        Just(Exponent::Infinite),
    ]
}

fn small_exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::Finite(2)),
        Just(Exponent::Finite(3)),
        Just(Exponent::Finite(4)),
        Just(Exponent::Infinite),
    ]
}

fn matrix_from(n: usize, labels: &[Exponent]) -> CoxeterMatrix {
    let mut pairs = Vec::new();
    let mut it = labels.iter();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j, *it.next().unwrap()));
        }
    }
    CoxeterMatrix::from_pairs(n, &pairs).unwrap()
}

fn coxeter(max_rank: usize, labels: BoxedStrategy<Exponent>) -> impl Strategy<Value = CoxeterMatrix> {
    (2..=max_rank).prop_flat_map(move |n| {
        prop::collection::vec(labels.clone(), n * (n - 1) / 2).prop_map(move |l| matrix_from(n, &l))
    })
}

fn cm(text: &str) -> CoxeterMatrix {
    CoxeterMatrix::parse(text).unwrap()
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << n))
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

fn kind_of(cm: &CoxeterMatrix, subset: &[usize]) -> ComponentKind {
    classify_group(&cm.restrict(subset).unwrap()).kind
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn classification_is_permutation_invariant(
        m in coxeter(5, exponent().boxed()),
        seed in any::<u64>(),
    ) {
        let n = m.rank();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let p = m.permute(&perm).unwrap();
        prop_assert_eq!(classify_group(&m).kind, classify_group(&p).kind);
        prop_assert_eq!(
            gram_signature(&GramMatrix::new(&m)),
            gram_signature(&GramMatrix::new(&p))
        );
    }

    #[test]
    fn special_subgroups_of_affine_groups_are_affine(m in coxeter(5, exponent().boxed())) {
        if classify_group(&m).kind.is_affine() {
            for s in subsets(m.rank()) {
                prop_assert!(kind_of(&m, &s).is_affine());
            }
        }
    }

    #[test]
    fn minimal_nonaffine_matches_brute_force(m in coxeter(6, small_exponent().boxed())) {
        let n = m.rank();
        let bad: Vec<Vec<usize>> = subsets(n)
            .into_iter()
            .filter(|s| kind_of(&m, s) == ComponentKind::NonAffine)
            .collect();
        let mut minimal: Vec<Vec<usize>> = bad
            .iter()
            .filter(|s| !bad.iter().any(|t| t.len() < s.len() && t.iter().all(|x| s.contains(x))))
            .cloned()
            .collect();
        minimal.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        match minimal_nonaffine_subsets(&m) {
            Ok(got) => prop_assert_eq!(got, minimal),
            Err(Error::GroupIsAffine) => prop_assert!(minimal.is_empty()),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn words_preserve_the_form(
        m in coxeter(4, exponent().boxed()),
        word in prop::collection::vec(0usize..4, 0..14),
    ) {
        let word: Vec<usize> = word.into_iter().map(|s| s % m.rank()).collect();
        let g = CoxeterGroup::new(&m);
        let x = g.evaluate(&word).unwrap();
        prop_assert!(g.preserves_form(&x));
        let mut back = word.clone();
        back.extend(word.iter().rev());
        prop_assert!(g.evaluate(&back).unwrap().is_identity());
        prop_assert_eq!(x.length_parity(), word.len() % 2);
    }
}

#[test]
fn exact_sign_agrees_with_float_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let groups = [
        cm("rank 3; m12=5 m13=4 m23=inf"),
        cm("rank 3; m12=6 m13=5 m23=3"),
        cm("rank 4; m12=3 m23=5 m34=4"),
    ];
    let mut checked = 0;
    while checked < 10_000 {
        let g = &groups[rng.gen_range(0..groups.len())];
        let group = CoxeterGroup::new(g);
        let len = rng.gen_range(0..12);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..g.rank())).collect();
        let x = group.evaluate(&word).unwrap();
        let theta = group.field().theta_f64();
        for s in x.matrix().entries() {
            let oracle: f64 = s
                .coefficients()
                .iter()
                .enumerate()
                .map(|(i, c)| c.to_f64().unwrap() * theta.powi(i as i32))
                .sum();
            if oracle.abs() > 1e-6 {
                assert_eq!(s.is_positive(), oracle > 0.0, "{word:?}");
            } else if oracle == 0.0 {
                assert!(s.is_zero());
            }
            checked += 1;
        }
    }
}

fn exact_values(cm: &CoxeterMatrix, radius: usize, depth: usize) -> HashMap<Vec<usize>, Option<usize>> {
    let engine = ReflenEngine::new(cm, radius, depth, ReflenOptions::default());
    let ball = engine_ball(&engine, radius, depth).unwrap();
    ball.results
        .iter()
        .map(|r| (r.element.word().unwrap().to_vec(), r.exact()))
        .collect()
}

#[test]
fn carter_equality_on_finite_groups() {
    for (text, order, longest) in [
        ("rank 2; m12=3", 6, 3),
        ("rank 2; m12=4", 8, 4),
        ("rank 3; m12=3 m23=3", 24, 6),
    ] {
        let m = cm(text);
        let ball = reflen_ball(&m, longest, 6, ReflenOptions::default()).unwrap();
        assert_eq!(ball.results.len(), order);
        for r in &ball.results {
            assert_eq!(r.status, Status::Exact, "{text}");
            assert_eq!(r.exact(), Some(fixed_space_codim(&r.element)));
            let word = r.element.word().unwrap();
            assert_eq!(r.exact(), Some(carter_length_finite(&m, word).unwrap()));
        }
    }
}

#[test]
fn conjugation_invariance_on_affine_a2() {
    let m = cm("rank 3; m12=3 m13=3 m23=3");
    let engine = ReflenEngine::new(&m, 7, 6, ReflenOptions::default());
    let dists = engine.distances(6, None);
    let value = |word: &[usize]| {
        let g = engine.group().evaluate(word).unwrap();
        engine
            .ball()
            .position(g.key())
            .and_then(|i| engine.result(&dists, i, 0).unwrap().exact())
    };
    let mut compared = 0;
    for i in 0..engine.ball().len() {
        if engine.ball().length(i) > 5 {
            continue;
        }
        let w = engine.ball().element(i).word().unwrap().to_vec();
        let Some(v) = value(&w) else { continue };
        for s in 0..3 {
            let mut c = vec![s];
            c.extend(&w);
            c.push(s);
            if let Some(u) = value(&c) {
                assert_eq!(u, v, "{w:?} conjugated by {s}");
                compared += 1;
            }
        }
    }
    assert!(compared > 100);
}

/// Exact values on the special subgroup agree with those in the whole group.
fn check_restriction(whole: &CoxeterMatrix, subset: &[usize], radius: usize) -> usize {
    let sub = whole.restrict(subset).unwrap();
    let inner = exact_values(&sub, radius, 6);
    let outer = exact_values(whole, radius, 6);
    let group = CoxeterGroup::new(whole);
    let outer_by_key: HashMap<Key, Option<usize>> = outer
        .iter()
        .map(|(w, v)| (group.evaluate(w).unwrap().key().clone(), *v))
        .collect();
    let mut agreed = 0;
    for (w, v) in &inner {
        let lifted: Vec<usize> = w.iter().map(|&s| subset[s]).collect();
        let key = group.evaluate(&lifted).unwrap().key().clone();
        if let (Some(a), Some(Some(b))) = (v, outer_by_key.get(&key)) {
            assert_eq!(a, b, "{w:?}");
            agreed += 1;
        }
    }
    agreed
}

#[test]
fn parabolic_restriction() {
    assert_eq!(check_restriction(&cm("rank 3; m12=3 m13=3 m23=4"), &[0, 1], 6), 6);
    let all3 = cm("rank 4; m12=3 m13=3 m14=3 m23=3 m24=3 m34=3");
    assert!(check_restriction(&all3, &[0, 1, 2], 6) > 50);
}

#[test]
fn surjection_does_not_increase_length() {
    let big = cm("rank 3; m12=6 m13=3 m23=3");
    let small = cm("rank 3; m12=3 m13=3 m23=3");
    let a = exact_values(&big, 5, 6);
    let small_group = CoxeterGroup::new(&small);
    let b: HashMap<Key, Option<usize>> = exact_values(&small, 10, 6)
        .into_iter()
        .map(|(w, v)| (small_group.evaluate(&w).unwrap().key().clone(), v))
        .collect();
    let mut compared = 0;
    for (w, v) in &a {
        let key = small_group.evaluate(w).unwrap().key().clone();
        if let (Some(x), Some(Some(y))) = (v, b.get(&key)) {
            assert!(y <= x, "{w:?}: {y} > {x}");
            compared += 1;
        }
    }
    assert!(compared > 50);
}
