use proptest::prelude::*;
use qorder::partialmap::{FinitePartialMap, PartialMapError};
use qorder::ratcore::Rat;

fn pm(s: &str) -> FinitePartialMap {
    s.parse().unwrap()
}

#[test]
fn partial_automorphism_examples() {
    assert!(pm("0 -> 0, 1 -> 2").is_partial_automorphism());
    assert!(!pm("0 -> 1, 1 -> 0").is_partial_automorphism());
    assert!(FinitePartialMap::new().is_partial_automorphism());
}

#[test]
fn merge_examples() {
    assert_eq!(pm("0 -> 0").merge(&pm("1 -> 1")).unwrap(), pm("0 -> 0, 1 -> 1"));
    assert_eq!(pm("0 -> 0").merge(&pm("0 -> 0")).unwrap(), pm("0 -> 0"));
    assert!(matches!(
        pm("0 -> 0").merge(&pm("0 -> 1")),
        Err(PartialMapError::Conflict { arg, .. }) if arg == Rat::zero()
    ));
}

#[test]
fn inverse_examples() {
    assert_eq!(pm("0 -> 1").inverse().unwrap(), pm("1 -> 0"));
    assert_eq!(pm("").inverse().unwrap(), pm(""));
    assert!(matches!(pm("0 -> 1, 2 -> 1").inverse(), Err(PartialMapError::NotInjective { .. })));
}

#[test]
fn bad_text_is_rejected() {
    assert!("0 -> ".parse::<FinitePartialMap>().is_err());
    assert!("0 1".parse::<FinitePartialMap>().is_err());
}

fn pairs() -> impl Strategy<Value = Vec<(Rat, Rat)>> {
    prop::collection::vec(((-20i64..20, 1i64..5), (-20i64..20, 1i64..5)), 0..12).prop_map(|v| {
        v.into_iter().map(|((a, b), (c, d))| (Rat::frac(a, b), Rat::frac(c, d))).collect()
    })
}

fn functional(v: &[(Rat, Rat)]) -> FinitePartialMap {
    let mut m = FinitePartialMap::new();
    for (x, y) in v {
        let _ = m.insert(x.clone(), y.clone());
    }
    m
}

proptest! {
    #[test]
    fn automorphism_iff_sorted_values_increase(v in pairs()) {
        let m = functional(&v);
        let mut sorted: Vec<(Rat, Rat)> = m.iter().map(|(x, y)| (x.clone(), y.clone())).collect();
        sorted.sort();
        let oracle = sorted.windows(2).all(|w| w[0].1 < w[1].1);
        prop_assert_eq!(m.is_partial_automorphism(), oracle);
    }

    #[test]
    fn inverse_is_involutive(v in pairs()) {
        let m = functional(&v);
        if let Ok(inv) = m.inverse() {
            prop_assert_eq!(inv.len(), m.len());
            prop_assert_eq!(inv.inverse().unwrap(), m.clone());
            for (x, y) in m.iter() {
                prop_assert_eq!(inv.get(y), Some(x));
            }
        }
    }

    #[test]
    fn text_round_trip(v in pairs()) {
        let m = functional(&v);
        prop_assert_eq!(m.to_string().parse::<FinitePartialMap>().unwrap(), m);
    }

    #[test]
    fn merge_with_self_is_identity(v in pairs()) {
        let m = functional(&v);
        prop_assert_eq!(m.merge(&m).unwrap(), m);
    }
}
