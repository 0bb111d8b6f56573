//! Worked examples for the public API, checked end to end.

use blowup_core::algebra::{BiLaurentPoly, ExactScalar, Matrix2, ProjectiveVector, TransitionMatrix2};
use blowup_core::canonical::{canonical_window, canonicalize, monomial_reduce, CanonicalForm, GaugePair};
use blowup_core::equivalence::{
    are_equivalent, equivalent_first_neighborhood, first_neighborhood_class, FirstNeighborhoodClass,
};
use blowup_core::moduli::{classify, dimension_count, m2_classify, M2Point};
use blowup_core::random::{random_canonical, random_gauge_of, seeded};
use blowup_core::Error;

fn c(v: i64) -> ExactScalar {
    v.into()
}

fn form(j: u32, coeffs: &[((u32, i64), i64)]) -> CanonicalForm {
    CanonicalForm::new(j, coeffs.iter().map(|(k, v)| (*k, c(*v))), 2 * j - 2).unwrap()
}

fn pv(v: &[i64]) -> ProjectiveVector {
    ProjectiveVector::from_affine(&v.iter().map(|x| c(*x)).collect::<Vec<_>>()).unwrap()
}

#[test]
fn window_of_type_three() {
    let w = canonical_window(3);
    assert_eq!(w.len(), 10);
    let level = |i| w.iter().filter(|(k, _)| *k == i).map(|(_, l)| *l).collect::<Vec<_>>();
    assert_eq!(level(1), vec![-1, 0, 1, 2]);
    assert_eq!(level(2), vec![0, 1, 2]);
    assert_eq!(level(3), vec![1, 2]);
    assert_eq!(level(4), vec![2]);
    assert!(canonical_window(1).is_empty());
}

#[test]
fn monomial_reduction_rules() {
    let m = |l, i| BiLaurentPoly::monomial(c(1), l, i, 3);
    let s = monomial_reduce(&m(5, 1), 2).unwrap();
    assert_eq!(s.alpha, m(3, 1));
    assert!(s.beta.is_zero() && s.residual.is_zero());

    let s = monomial_reduce(&m(1, 1), 2).unwrap();
    assert_eq!(s.residual, m(1, 1));

    let s = monomial_reduce(&m(-1, 2), 2).unwrap();
    assert_eq!(s.beta, m(1, 2));
    assert!(s.alpha.is_zero() && s.residual.is_zero());

    assert_eq!(monomial_reduce(&m(0, 0), 2), Err(Error::HasDivisorLevelTerms));
}

#[test]
fn canonicalize_removes_high_monomials() {
    let t = TransitionMatrix2::new(Matrix2::new([
        [BiLaurentPoly::z_pow(2, 2), BiLaurentPoly::from_terms([(1, 1, c(1)), (5, 1, c(1))], 2)],
        [BiLaurentPoly::zero(2), BiLaurentPoly::z_pow(-2, 2)],
    ]))
    .unwrap();
    let (k, g) = canonicalize(&t).unwrap();
    assert_eq!(k, form(2, &[((1, 1), 1)]));
    assert!(g.is_valid() && g.intertwines(t.matrix(), &k.to_matrix()));
}

#[test]
fn canonicalize_split_is_identity() {
    let (k, g) = canonicalize(&TransitionMatrix2::split(2, 2)).unwrap();
    assert!(k.is_split() && k.j() == 2);
    assert_eq!(g, GaugePair::identity(2));
}

#[test]
fn canonicalize_round_trip_through_oracle() {
    let mut rng = seeded(42);
    for _ in 0..5 {
        let k0 = random_canonical(&mut rng, 2, Some(1), 2, 3);
        let (t, _) = random_gauge_of(&mut rng, &k0.to_matrix(), 2).unwrap();
        let (k, _) = canonicalize(&t).unwrap();
        assert_eq!(k.j(), 2);
        assert!(are_equivalent(&k.to_transition(), &k0.to_transition(), 2).unwrap().is_equivalent());
        assert_eq!(first_neighborhood_class(&k), first_neighborhood_class(&k0));
    }
}

#[test]
fn canonicalize_needs_enough_truncation() {
    let t = TransitionMatrix2::split(3, 2);
    assert_eq!(canonicalize(&t), Err(Error::TruncationTooLow { trunc: 2, required: 4 }));
}

#[test]
fn first_neighbourhood_examples() {
    assert_eq!(first_neighborhood_class(&form(2, &[((1, 0), 3), ((1, 1), 6)])), FirstNeighborhoodClass::Class(pv(&[1, 2])));
    assert_eq!(first_neighborhood_class(&form(2, &[((2, 1), 1)])), FirstNeighborhoodClass::Zero);
    assert_eq!(
        first_neighborhood_class(&form(3, &[((1, 0), 5), ((1, 2), 5)])),
        FirstNeighborhoodClass::Class(pv(&[0, 1, 0, 1]))
    );

    let zu = form(2, &[((1, 1), 1)]);
    assert!(equivalent_first_neighborhood(&zu, &form(2, &[((1, 1), -7)])).unwrap());
    assert!(!equivalent_first_neighborhood(&zu, &form(2, &[((1, 1), 1), ((1, 0), 1)])).unwrap());
    assert!(equivalent_first_neighborhood(&form(2, &[((2, 1), 1)]), &form(2, &[((2, 1), 4)])).unwrap());
    assert_eq!(equivalent_first_neighborhood(&zu, &form(3, &[])), Err(Error::SplittingTypeMismatch(2, 3)));
}

#[test]
fn equivalence_examples() {
    let zu = form(2, &[((1, 1), 1)]).to_transition();
    let two_zu = form(2, &[((1, 1), 2)]).to_transition();
    let u = form(2, &[((1, 0), 1)]).to_transition();
    let split = TransitionMatrix2::split(2, 2);

    let same = are_equivalent(&zu, &zu, 2).unwrap();
    let w = same.verdict.witness().unwrap();
    assert!(blowup_core::equivalence::is_identity_witness(w));

    let r = are_equivalent(&zu, &two_zu, 2).unwrap();
    assert!(r.is_equivalent());
    assert!(r.verdict.witness().unwrap().verify(&zu, &two_zu));
    assert!(!are_equivalent(&zu, &u, 1).unwrap().is_equivalent());
    for order in 1..=2 {
        assert!(!are_equivalent(&split, &zu, order).unwrap().is_equivalent());
    }
    assert_eq!(
        are_equivalent(&zu, &u, 3).unwrap_err(),
        Error::OrderTooLarge { order: 3, trunc: 2 }
    );
}

#[test]
fn classify_examples() {
    let split = classify(&form(2, &[]));
    assert!(split.is_split() && split.class.is_none());

    let g = classify(&form(2, &[((1, 0), 1), ((1, 1), 4), ((2, 1), 9)]));
    assert_eq!((g.depth, g.class.clone(), g.partial), (Some(1), Some(pv(&[1, 4])), false));

    let deep = classify(&form(4, &[((2, -1), 0), ((2, 0), 1), ((2, 1), 2)]));
    assert_eq!(deep.depth, Some(2));
    assert!(deep.partial);
    assert_eq!(deep.class.unwrap().dimension(), 4);

    let m1 = classify(&CanonicalForm::split(1));
    assert!(m1.is_unique_point());
}

#[test]
fn m2_examples() {
    assert_eq!(m2_classify(&form(2, &[((1, 0), 1), ((2, 1), 17)])).unwrap(), M2Point::Generic(pv(&[1, 0])));
    assert_eq!(m2_classify(&form(2, &[((2, 1), 5)])).unwrap(), M2Point::Q);
    assert_eq!(m2_classify(&form(2, &[])).unwrap(), M2Point::Split);

    // the generic tag ignores the u^2 coefficient, and so does the oracle
    let a = form(2, &[((1, 0), 1), ((2, 1), 17)]).to_transition();
    let b = form(2, &[((1, 0), 1)]).to_transition();
    assert!(are_equivalent(&a, &b, 2).unwrap().is_equivalent());
    let q5 = form(2, &[((2, 1), 5)]).to_transition();
    let q1 = form(2, &[((2, 1), 1)]).to_transition();
    assert!(are_equivalent(&q5, &q1, 2).unwrap().is_equivalent());
    assert!(!are_equivalent(&q5, &TransitionMatrix2::split(2, 2), 2).unwrap().is_equivalent());
}

#[test]
fn dimension_examples() {
    let d = dimension_count(2).unwrap();
    assert_eq!((d.window_size, d.generic, d.deeper), (3, 1, vec![0]));
    let d = dimension_count(5).unwrap();
    assert_eq!((d.window_size, d.generic, d.deeper), (36, 7, vec![6, 5, 4, 3, 2, 1, 0]));
}
