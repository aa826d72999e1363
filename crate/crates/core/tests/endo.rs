use proptest::prelude::*;
use qorder::endo::{
    cancellability_witness, copoint_embedding, divide, epi_mono_factorize, idempotent_with_image, image_membership,
    random_piecewise, right_inverse, Division, EndoClass, PiecewiseEndo, PiecewiseError,
};
use qorder::ratcore::{rationals, Rat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn r(s: &str) -> Rat {
    s.parse().unwrap()
}

fn pw(s: &str) -> PiecewiseEndo {
    s.parse().unwrap()
}

fn jump() -> PiecewiseEndo {
    pw("(-inf,0) : 1*x + 0\n[0,inf) : 1*x + 1")
}

fn plateau() -> PiecewiseEndo {
    pw("(-inf,0) : x; [0,1] : 0; (1,inf) : x - 1")
}

fn first(n: usize) -> Vec<Rat> {
    rationals().take(n).collect()
}

/// Classification read off the breakpoint data: a flat segment breaks
/// injectivity, a jump or a flat tail breaks surjectivity.
fn symbolic_class(f: &PiecewiseEndo) -> EndoClass {
    let segs = f.segments();
    let constant = segs.iter().all(|s| s.slope.is_zero() && s.intercept == segs[0].intercept)
        && f.values().iter().all(|v| *v == segs[0].intercept);
    let injective = segs.iter().all(|s| s.slope.is_positive());
    let continuous = f
        .breaks()
        .iter()
        .zip(f.values())
        .enumerate()
        .all(|(i, (b, v))| segs[i].apply(b) == *v && segs[i + 1].apply(b) == *v);
    let tails = segs[0].slope.is_positive() && segs[segs.len() - 1].slope.is_positive();
    EndoClass { constant, injective, surjective: continuous && tails }
}

#[test]
fn evaluation() {
    assert_eq!(jump().eval(&Rat::int(-1)), Rat::int(-1));
    assert_eq!(jump().eval(&Rat::zero()), Rat::one());
    assert_eq!(PiecewiseEndo::constant(Rat::int(3)).eval(&r("17/5")), Rat::int(3));
}

#[test]
fn classification_examples() {
    let c = jump().classify();
    assert!(c.injective && !c.surjective && !c.constant);
    assert_eq!(jump().image().complement().to_string(), "[0,1)");
    assert!(PiecewiseEndo::identity().classify().automorphism());
    let c = plateau().classify();
    assert!(c.surjective && !c.injective);
}

#[test]
fn cancellability_examples() {
    let w = cancellability_witness(&plateau());
    assert_eq!(w.left, Some((Rat::zero(), r("1/2"))));
    assert!(w.right.is_none());

    let w = cancellability_witness(&jump());
    assert!(w.left.is_none());
    let right = w.right.unwrap();
    assert_eq!(right.missing, r("1/2"));
    assert_ne!(right.g.eval(&right.missing), right.h.eval(&right.missing));
    for x in first(200).into_iter().filter(|x| *x != right.missing) {
        assert_eq!(right.g.eval(&x), right.h.eval(&x));
    }
    assert_eq!(right.g.compose(&jump()), right.h.compose(&jump()));

    assert!(cancellability_witness(&PiecewiseEndo::identity()).is_none());
}

#[test]
fn right_inverse_examples() {
    let h = right_inverse(&plateau(), &[]).unwrap();
    assert_eq!(h, pw("(-inf,0) : x; [0,inf) : x + 1"));
    assert_eq!(plateau().eval(&h.eval(&Rat::zero())), Rat::zero());
    assert_eq!(right_inverse(&PiecewiseEndo::identity(), &[Rat::one()]).unwrap(), PiecewiseEndo::identity());
    assert_eq!(right_inverse(&pw("2*x"), &[]).unwrap(), pw("1/2*x"));
    assert!(right_inverse(&jump(), &[]).is_err());
}

#[test]
fn idempotent_examples() {
    assert_eq!(idempotent_with_image(&[Rat::zero()]).unwrap(), PiecewiseEndo::constant(Rat::zero()));
    let h = idempotent_with_image(&[Rat::zero(), Rat::one()]).unwrap();
    assert_eq!(h, pw("(-inf,1/2] : 0; (1/2,inf) : 1"));
    assert_eq!(h.compose(&h), h);
    let h = idempotent_with_image(&[Rat::int(-1), Rat::zero(), Rat::one()]).unwrap();
    assert_eq!(h.compose(&h), h);
    assert_eq!(h.image().to_string(), "[-1,-1] u [0,0] u [1,1]");
    assert!(idempotent_with_image(&[]).is_err());
}

#[test]
fn factorization_examples() {
    let xs = first(300);
    for h in [PiecewiseEndo::identity(), PiecewiseEndo::constant(Rat::zero()), plateau()] {
        let f = epi_mono_factorize(&h);
        let ys: Vec<Rat> = xs.iter().map(|x| f.mono.eval(x)).collect();
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(f.epi.eval(y), h.eval(x), "{h}: at {x}");
        }
        let mut sorted: Vec<(&Rat, &Rat)> = xs.iter().zip(&ys).collect();
        sorted.sort();
        assert!(sorted.windows(2).all(|w| w[0].1 < w[1].1), "{h}: injective factor not increasing");
    }
    let f = epi_mono_factorize(&plateau());
    for t in first(100) {
        let x = f.epi.preimage(&t).expect("surjective factor has preimages");
        assert_eq!(f.epi.eval(&x), t);
    }
}

#[test]
fn image_membership_examples() {
    assert_eq!(image_membership(&plateau(), &Rat::zero()), Some(Rat::zero()));
    assert_eq!(image_membership(&jump(), &r("1/2")), None);
    assert!(image_membership(&PiecewiseEndo::constant(Rat::int(3)), &Rat::int(3)).is_some());
}

#[test]
fn division_examples() {
    let f = pw("x + 2");
    assert_eq!(divide(&f, &f).unwrap(), Division::Quotient(PiecewiseEndo::identity()));
    assert_eq!(divide(&f, &pw("x + 1")).unwrap(), Division::Quotient(pw("x + 1")));
    assert_eq!(
        divide(&PiecewiseEndo::identity(), &jump()).unwrap(),
        Division::NotContained { witness: r("1/2") }
    );
}

#[test]
fn copoint_embedding_misses_one_point() {
    let f = copoint_embedding(&Rat::zero());
    let xs = first(500);
    let ys: Vec<Rat> = xs.iter().map(|x| f.eval(x)).collect();
    assert!(ys.iter().all(|y| !y.is_zero()));
    let mut sorted: Vec<(&Rat, &Rat)> = xs.iter().zip(&ys).collect();
    sorted.sort();
    assert!(sorted.windows(2).all(|w| w[0].1 < w[1].1));
    for t in first(101).into_iter().skip(1) {
        let x = f.preimage(&t).expect("non-zero values are hit");
        assert_eq!(f.eval(&x), t);
    }
}

#[test]
fn parse_errors_name_the_line() {
    match "(-inf,0) : x\n[0,inf) : -1*x".parse::<PiecewiseEndo>() {
        Err(PiecewiseError::AtLine { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected a line error, got {other:?}"),
    }
    assert!("(-inf,0) : x\n(1,inf) : x".parse::<PiecewiseEndo>().is_err());
    assert!("(-inf,1) : x\n[0,inf) : 2".parse::<PiecewiseEndo>().is_err());
}

fn map() -> impl Strategy<Value = PiecewiseEndo> {
    any::<u64>().prop_map(|seed| random_piecewise(&mut ChaCha8Rng::seed_from_u64(seed), 5, 10))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn classification_matches_breakpoint_scan(f in map()) {
        let class = f.classify();
        prop_assert_eq!(class, symbolic_class(&f));
        let xs = first(500);
        let mut sorted: Vec<(Rat, Rat)> = xs.iter().map(|x| (x.clone(), f.eval(x))).collect();
        sorted.sort();
        if class.injective {
            prop_assert!(sorted.windows(2).all(|w| w[0].1 < w[1].1));
        }
        if class.constant {
            prop_assert!(sorted.iter().all(|(_, y)| *y == sorted[0].1));
        }
        if class.surjective {
            for y in &xs {
                prop_assert!(f.preimage(y).is_some());
            }
        }
    }

    #[test]
    fn composition_is_pointwise(f in map(), g in map()) {
        let fg = f.compose(&g);
        for x in first(60) {
            prop_assert_eq!(fg.eval(&x), f.eval(&g.eval(&x)));
        }
    }

    #[test]
    fn text_round_trip(f in map()) {
        prop_assert_eq!(f.to_string().parse::<PiecewiseEndo>().unwrap(), f);
    }

    #[test]
    fn idempotents_are_exact(values in prop::collection::vec((-20i64..20, 1i64..4), 1..6)) {
        let values: Vec<Rat> = values.into_iter().map(|(p, q)| Rat::frac(p, q)).collect();
        let h = idempotent_with_image(&values).unwrap();
        prop_assert_eq!(h.compose(&h), h.clone());
        for v in &values {
            prop_assert_eq!(h.eval(v), v.clone());
        }
    }

    #[test]
    fn right_inverses_are_sections(f in map()) {
        if f.classify().surjective {
            let s = right_inverse(&f, &[Rat::zero()]).unwrap();
            prop_assert!(s.classify().injective);
            prop_assert_eq!(f.compose(&s), PiecewiseEndo::identity());
        }
    }

    #[test]
    fn left_zero_test_detects_constants(f in map(), g in map()) {
        if f.classify().constant {
            prop_assert_eq!(f.compose(&g), f);
        }
    }
}
