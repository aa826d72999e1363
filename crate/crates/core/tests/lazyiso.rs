use std::sync::Arc;

use proptest::prelude::*;
use qorder::lazyiso::{
    ColouredQ, Constraint, FullQ, IntervalOrder, IsoError, LazyIso, Lex, LexProduct, QMinusFinite, RedPoints,
};
use qorder::ratcore::{colour, enumerate, rationals, Colour, Rat, RatInterval};

fn first(n: usize) -> Vec<Rat> {
    rationals().take(n).collect()
}

fn assert_monotone<T: Ord + std::fmt::Debug>(pairs: &[(Rat, T)]) {
    for (a, fa) in pairs {
        for (b, fb) in pairs {
            assert_eq!(a.cmp(b), fa.cmp(fb), "{a:?} -> {fa:?}, {b:?} -> {fb:?}");
        }
    }
}

#[test]
fn seeded_pair_is_kept() {
    let mut iso = LazyIso::build(FullQ, FullQ, [(Rat::zero(), Rat::int(5))], vec![]).unwrap();
    assert_eq!(iso.eval_fwd(&Rat::zero()).unwrap(), Rat::int(5));
    assert_eq!(iso.eval_bwd(&Rat::int(5)).unwrap(), Rat::zero());
}

#[test]
fn identity_seed_is_respected() {
    let seed: Vec<(Rat, Rat)> = first(10).into_iter().map(|q| (q.clone(), q)).collect();
    let mut iso = LazyIso::build(FullQ, FullQ, seed, vec![]).unwrap();
    assert_eq!(iso.eval_fwd(&enumerate(3)).unwrap(), enumerate(3));
}

#[test]
fn missing_point_is_never_hit() {
    let mut iso = LazyIso::build(FullQ, QMinusFinite::new([Rat::zero()]), [], vec![]).unwrap();
    let pairs: Vec<(Rat, Rat)> = first(500).into_iter().map(|x| (x.clone(), iso.eval_fwd(&x).unwrap())).collect();
    assert!(pairs.iter().all(|(_, y)| !y.is_zero()));
    assert_monotone(&pairs[..120]);
    assert!(iso.eval_bwd(&Rat::zero()).is_err());
}

#[test]
fn colours_are_preserved() {
    let mut iso = LazyIso::build(ColouredQ, ColouredQ, [], vec![Constraint::PreserveLabels]).unwrap();
    for x in first(500) {
        assert_eq!(colour(&iso.eval_fwd(&x).unwrap()), colour(&x), "at {x}");
    }
    assert!(iso.check_invariants());
}

#[test]
fn lex_target_is_ordered() {
    let mut iso = LazyIso::build(FullQ, LexProduct::new(ColouredQ, FullQ), [], vec![]).unwrap();
    let pairs: Vec<(Rat, Lex<Rat, Rat>)> =
        first(150).into_iter().map(|x| (x.clone(), iso.eval_fwd(&x).unwrap())).collect();
    // Lex compares the first coordinate, then the second.
    let key = |l: &Lex<Rat, Rat>| (l.0.clone(), l.1.clone());
    let keyed: Vec<(Rat, (Rat, Rat))> = pairs.iter().map(|(x, l)| (x.clone(), key(l))).collect();
    assert_monotone(&keyed);
}

#[test]
fn red_points_are_red() {
    let mut iso = LazyIso::build(FullQ, RedPoints, [], vec![]).unwrap();
    for x in first(200) {
        assert_eq!(colour(&iso.eval_fwd(&x).unwrap()), Colour::Red);
    }
}

#[test]
fn bounded_interval_target() {
    let i = RatInterval::open(Rat::zero(), Rat::one()).unwrap();
    let mut iso = LazyIso::build(FullQ, IntervalOrder::new(i.clone()).unwrap(), [], vec![]).unwrap();
    let pairs: Vec<(Rat, Rat)> = first(100).into_iter().map(|x| (x.clone(), iso.eval_fwd(&x).unwrap())).collect();
    assert!(pairs.iter().all(|(_, y)| i.contains(y)));
    assert_monotone(&pairs);
}

#[test]
fn bad_seeds_are_rejected() {
    let reversed = [(Rat::zero(), Rat::one()), (Rat::one(), Rat::zero())];
    assert!(matches!(LazyIso::build(FullQ, FullQ, reversed, vec![]), Err(IsoError::SeedNotMonotone { .. })));
    let recolour = [(Rat::zero(), Rat::one())];
    assert!(LazyIso::build(ColouredQ, ColouredQ, recolour, vec![Constraint::PreserveLabels]).is_err());
    assert!(matches!(
        LazyIso::build(FullQ, QMinusFinite::new([Rat::zero()]), [(Rat::one(), Rat::zero())], vec![]),
        Err(IsoError::NotMember { .. })
    ));
}

#[test]
fn stabilized_sets_are_kept() {
    let integers = Constraint::Stabilize {
        name: "integers".into(),
        source: Arc::new(|x: &Rat| x.is_integer()),
        target: Arc::new(|x: &Rat| x.is_integer()),
    };
    let mut iso = LazyIso::build(FullQ, FullQ, [], vec![integers]).unwrap();
    for x in first(300) {
        assert_eq!(iso.eval_fwd(&x).unwrap().is_integer(), x.is_integer(), "at {x}");
    }
}

proptest! {
    #[test]
    fn random_queries_keep_a_partial_isomorphism(
        queries in prop::collection::vec((any::<bool>(), -40i64..40, 1i64..6), 1..60),
    ) {
        let mut iso = LazyIso::build(FullQ, ColouredQ, [], vec![]).unwrap();
        for (fwd, p, q) in queries {
            let x = Rat::frac(p, q);
            if fwd {
                let y = iso.eval_fwd(&x).unwrap();
                prop_assert_eq!(iso.eval_bwd(&y).unwrap(), x);
            } else {
                let y = iso.eval_bwd(&x).unwrap();
                prop_assert_eq!(iso.eval_fwd(&y).unwrap(), x);
            }
        }
        prop_assert!(iso.check_invariants());
        prop_assert!(iso.memo_map().is_partial_automorphism());
    }

    #[test]
    fn memo_round_trips_through_partial_maps(n in 1usize..40) {
        let mut iso = LazyIso::build(FullQ, FullQ, [], vec![]).unwrap();
        for x in first(n) {
            iso.eval_fwd(&x).unwrap();
        }
        let m = iso.memo_map();
        let mut again = LazyIso::from_partial_map(FullQ, FullQ, &m, vec![]).unwrap();
        for x in first(n) {
            prop_assert_eq!(again.eval_fwd(&x).unwrap(), iso.eval_fwd(&x).unwrap());
        }
    }
}
