use std::cmp::Ordering;

use qorder::endo::{random_piecewise, GeneralEndo, PiecewiseEndo};
use qorder::gamma::{GammaGeneric, Variant};
use qorder::ratcore::{enumerate, Rat};
use qorder::topology::{
    approximant, check_convergence, density_witness, subbasic_contains, Distance, UltraMetric, DEFAULT_DEPTH,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pw(s: &str) -> GeneralEndo {
    GeneralEndo::Piecewise(s.parse().unwrap())
}

#[test]
fn subbasic_examples() {
    let jump = pw("(-inf,0) : x; [0,inf) : x + 1");
    assert!(subbasic_contains(&Rat::zero(), &Rat::one(), &jump));
    assert!(subbasic_contains(&Rat::frac(3, 7), &Rat::frac(3, 7), &pw("x")));
    assert!(!subbasic_contains(&Rat::zero(), &Rat::zero(), &pw("1")));
}

#[test]
fn ultrametric_inequality() {
    let m = UltraMetric::unary(DEFAULT_DEPTH);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    // near neighbours: maps agreeing on many probes are common
    let base: Vec<PiecewiseEndo> = (0..10).map(|_| random_piecewise(&mut rng, 4, 3)).collect();
    let mut maps: Vec<GeneralEndo> = Vec::new();
    for f in &base {
        maps.push(GeneralEndo::Piecewise(f.clone()));
        for n in [0u64, 3, 9] {
            maps.push(GeneralEndo::Piecewise(approximant(f, n)));
        }
    }
    let mut checked = 0;
    'outer: for i in 0..maps.len() {
        for j in 0..maps.len() {
            for k in (0..maps.len()).step_by(3) {
                let (f, g, h) = (&maps[i], &maps[j], &maps[k]);
                let (fg, gh, fh) = (m.dist(f, g), m.dist(g, h), m.dist(f, h));
                let max = if fg.cmp_value(&gh) == Ordering::Less { gh } else { fg };
                assert_ne!(fh.cmp_value(&max), Ordering::Greater, "{fh} > max({fg}, {gh})");
                checked += 1;
                if checked == 500 {
                    break 'outer;
                }
            }
        }
    }
    assert_eq!(checked, 500);
}

#[test]
fn indistinguishable_means_agreement_on_probes() {
    let m = UltraMetric::unary(300);
    let f = pw("(-inf,1000) : x; [1000,inf) : x + 1");
    let d = m.dist(&f, &pw("x"));
    assert_eq!(d, Distance::Indistinguishable { depth: 300 });
    assert!((0..300).all(|n| f.eval(&m.probe(n)[0]) == m.probe(n)[0]));
}

#[test]
fn convergence_tables() {
    let m = UltraMetric::unary(512);
    let f = pw("2*x");
    let table = check_convergence(&m, |_| f.clone(), &f, 10);
    assert!(table.distances.iter().all(|d| *d == Distance::Equal));
    let consts = check_convergence(&m, |n| pw(&n.to_string()), &pw("0"), 10);
    assert_eq!(consts.distances[0], Distance::Equal);
    assert!(consts.distances[1..].iter().all(|d| *d == Distance::Differ(0)));
    assert_eq!(consts.thresholds[1], (1, None));
}

#[test]
fn automorphisms_approach_a_generic_embedding() {
    let m = UltraMetric::unary(DEFAULT_DEPTH);
    let g = GammaGeneric::new(Variant::Core).as_endo();
    let table = check_convergence(&m, |n| density_witness(&g, n as u64).unwrap(), &g, 10);
    for (n, d) in table.distances.iter().enumerate() {
        assert!(d.within(n + 1), "{n}: {d}");
    }
    assert_eq!(table.thresholds[3].1.map(|n| n <= 2), Some(true));
}

#[test]
fn density_witnesses_for_embeddings() {
    let m = UltraMetric::unary(64);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut found = 0;
    while found < 20 {
        let f = random_piecewise(&mut rng, 4, 3);
        if !f.classify().injective {
            continue;
        }
        found += 1;
        let f = GeneralEndo::Piecewise(f);
        for n in 0..=10 {
            let a = density_witness(&f, n).unwrap();
            assert!(m.dist(&a, &f).within(n as usize + 1));
            let x = enumerate(n + 1);
            assert_eq!(a.preimage(&a.eval(&x)), Some(x));
        }
    }
}
