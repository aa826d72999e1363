use num_bigint::BigUint;
use proptest::prelude::*;
use qorder::ratcore::{
    colour, enumerate, index_of, least_in, rationals, Colour, Endpoint, IntervalUnion, Rat, RatInterval,
};

fn r(s: &str) -> Rat {
    s.parse().unwrap()
}

/// Stern's diatomic sequence; `fusc(k) / fusc(k + 1)` is the `k`-th
/// Calkin-Wilf fraction.
fn fusc(n: u64) -> i64 {
    let (mut a, mut b, mut n) = (1i64, 0i64, n);
    while n > 0 {
        if n & 1 == 1 {
            b += a;
        } else {
            a += b;
        }
        n >>= 1;
    }
    b
}

fn oracle(n: u64) -> Rat {
    if n == 0 {
        return Rat::zero();
    }
    let k = n.div_ceil(2);
    let q = Rat::frac(fusc(k), fusc(k + 1));
    if n % 2 == 1 {
        q
    } else {
        -q
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn colour_oracle(p: i64, q: i64) -> Colour {
    let g = gcd(p, q);
    if (p / g) % 2 != 0 && (q / g) % 2 != 0 {
        Colour::Blue
    } else {
        Colour::Red
    }
}

#[test]
fn enumeration_head() {
    let head: Vec<String> = (0..11).map(|n| enumerate(n).to_string()).collect();
    assert_eq!(head, ["0", "1", "-1", "1/2", "-1/2", "2", "-2", "1/3", "-1/3", "3/2", "-3/2"]);
    assert_eq!(enumerate(3), r("1/2"));
    assert_eq!(enumerate(5), r("2"));
}

#[test]
fn enumeration_matches_stern_sequence() {
    for (n, x) in rationals().take(5000).enumerate() {
        assert_eq!(x, oracle(n as u64), "position {n}");
        assert_eq!(enumerate(n as u64), x);
    }
}

#[test]
fn enumeration_reaches_every_small_fraction() {
    for p in -12i64..=12 {
        for q in 1i64..=12 {
            let x = Rat::frac(p, q);
            assert_eq!(enumerate(u64::try_from(index_of(&x)).unwrap()), x);
        }
    }
}

#[test]
fn colour_examples() {
    assert_eq!(colour(&Rat::zero()), Colour::Red);
    assert_eq!(colour(&Rat::one()), Colour::Blue);
    assert_eq!(colour(&r("1/2")), Colour::Red);
    assert_eq!(colour(&r("-3/5")), Colour::Blue);
    assert_eq!(colour(&r("6/4")), Colour::Red);
    assert_eq!(colour(&r("9/3")), Colour::Blue);
}

#[test]
fn interval_membership() {
    let open = RatInterval::open(Rat::zero(), Rat::one()).unwrap();
    assert!(open.contains(&r("1/2")));
    assert!(!open.contains(&Rat::one()));
    assert!(RatInterval::closed(Rat::zero(), Rat::zero()).unwrap().contains(&Rat::zero()));
    assert_eq!("[0,1)".parse::<RatInterval>().unwrap().to_string(), "[0,1)");
}

#[test]
fn least_in_scans_in_enumeration_order() {
    let i = RatInterval::open(r("1/3"), r("2/5")).unwrap();
    let expected = rationals().find(|x| i.contains(x)).unwrap();
    assert_eq!(least_in(&i, |_| true), Some(expected));
    let blue = rationals().find(|x| i.contains(x) && colour(x) == Colour::Blue).unwrap();
    assert_eq!(least_in(&i, |x| colour(x) == Colour::Blue), Some(blue));
}

fn interval() -> impl Strategy<Value = RatInterval> {
    let end = |v: i64| {
        prop_oneof![Just(Endpoint::Unbounded), Just(Endpoint::Open(Rat::frac(v, 3))), Just(Endpoint::Closed(Rat::frac(v, 3)))]
    };
    (-9i64..9, 0i64..9)
        .prop_flat_map(move |(a, w)| (end(a), end(a + w)))
        .prop_filter_map("empty", |(lo, hi)| RatInterval::new(lo, hi).ok().filter(|i| !i.is_empty()))
}

proptest! {
    #[test]
    fn index_inverts_enumeration(n in 0u64..1_000_000) {
        prop_assert_eq!(index_of(&enumerate(n)), BigUint::from(n));
    }

    #[test]
    fn colour_matches_parity(p in -500i64..500, q in 1i64..500) {
        prop_assert_eq!(colour(&Rat::frac(p, q)), colour_oracle(p, q));
    }

    #[test]
    fn field_laws(a in -99i64..99, b in 1i64..99, c in -99i64..99, d in 1i64..99) {
        let (x, y) = (Rat::frac(a, b), Rat::frac(c, d));
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(x.as_big() + y.as_big(), (&x + &y).as_big().clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x / &y) * &y, x);
        }
    }

    #[test]
    fn least_in_is_least(i in interval()) {
        let found = least_in(&i, |_| true).unwrap();
        prop_assert!(i.contains(&found));
        let n = u64::try_from(index_of(&found)).unwrap();
        prop_assert!((0..n).all(|k| !i.contains(&enumerate(k))));
    }

    #[test]
    fn both_colours_between(a in -30i64..30, b in 1i64..30, w in 1i64..30, d in 1i64..30) {
        let lo = Rat::frac(a, b);
        let hi = &lo + &Rat::frac(w, d);
        let gap = RatInterval::open(lo, hi).unwrap();
        for c in [Colour::Red, Colour::Blue] {
            let x = least_in(&gap, |x| colour(x) == c).unwrap();
            prop_assert!(gap.contains(&x) && colour(&x) == c);
        }
    }

    #[test]
    fn complement_partitions(parts in prop::collection::vec(interval(), 0..4), p in -40i64..40, q in 1i64..7) {
        let u = IntervalUnion::new(parts.clone());
        let x = Rat::frac(p, q);
        prop_assert_eq!(u.contains(&x), parts.iter().any(|i| i.contains(&x)));
        prop_assert_ne!(u.contains(&x), u.complement().contains(&x));
    }
}
