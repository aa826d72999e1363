use qorder::actions::{act, containment_check, fixpoint_check, random_point, verify_action, Forest, NodeId, OrbitPoint};
use qorder::endo::{random_piecewise, GeneralEndo, PiecewiseEndo};
use qorder::ratcore::Rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus(rng: &mut ChaCha8Rng, n: usize) -> Vec<GeneralEndo> {
    (0..n).map(|_| GeneralEndo::Piecewise(random_piecewise(rng, 4, 3))).collect()
}

fn pw(s: &str) -> GeneralEndo {
    GeneralEndo::Piecewise(s.parse().unwrap())
}

fn ints(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| Rat::int(x)).collect()
}

#[test]
fn laws_hold_on_safe_forests() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let safe = [[0, 1, 2, 3], [0, 3, 4, 5], [0, 1, 4, 5]].map(|l| Forest::chain(&l).unwrap());
    for forest in [Forest::chain(&[0, 1, 2]).unwrap(), Forest::two_branch()].into_iter().chain(safe) {
        assert!(forest.composition_safe());
        let maps = corpus(&mut rng, 20);
        let points: Vec<OrbitPoint> = (0..20).map(|_| random_point(&forest, &mut rng, 6)).collect();
        let report = verify_action(&forest, &maps, &points);
        assert!(report.ok(), "{forest}{:?}", &report.failures[..report.failures.len().min(3)]);
        assert_eq!(report.checks, 20 * (1 + 20 + 400));
    }
}

#[test]
fn label_gaps_above_label_two_break_composition() {
    let forest = Forest::chain(&[0, 2, 4]).unwrap();
    assert_eq!(forest.composition_unsafe_node(), Some(NodeId(2)));
    let p = OrbitPoint::new(&forest, NodeId(2), ints(&[0, 1, 2, 3])).unwrap();
    let g = pw("(-inf,2] : x; (2,inf) : 2");
    let f = pw("(-inf,2) : 0; [2,inf) : 5");
    let stepwise = act(&forest, &f, &act(&forest, &g, &p));
    let direct = act(&forest, &f.compose(&g), &p);
    assert_eq!((stepwise.node, stepwise.set()), (NodeId(0), &[][..]));
    assert_eq!((direct.node, direct.set()), (NodeId(1), &ints(&[0, 5])[..]));
    let report = verify_action(&forest, &[f, g], &[p]);
    assert!(!report.ok());
}

/// Every unsafe chain admits a counterexample of the shape above.
#[test]
fn unsafe_chains_always_fail() {
    for labels in [vec![0, 2, 4], vec![0, 2, 5], vec![0, 1, 2, 4], vec![0, 3, 5, 6]] {
        let forest = Forest::chain(&labels).unwrap();
        let t = forest.composition_unsafe_node().unwrap();
        let (low, high) = (forest.label(forest.parent(t).unwrap()), forest.label(t));
        // squeeze B to low + 1 points, then merge the lowest two; cutting
        // at the parent first loses the point that keeps the size at low
        let p = OrbitPoint::new(&forest, t, (0..high as i64).map(Rat::int)).unwrap();
        let g = pw(&format!("(-inf,{low}] : x; ({low},inf) : {low}"));
        let f = pw("(-inf,1] : 0; (1,inf) : x + 10");
        let stepwise = act(&forest, &f, &act(&forest, &g, &p));
        let direct = act(&forest, &f.compose(&g), &p);
        assert_ne!(stepwise.node, direct.node, "{labels:?}");
    }
}

#[test]
fn label_one_gaps_are_harmless() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let forest = Forest::chain(&[0, 1, 4]).unwrap();
    assert!(forest.composition_safe());
    let maps = corpus(&mut rng, 15);
    let points: Vec<OrbitPoint> = (0..15).map(|_| random_point(&forest, &mut rng, 6)).collect();
    assert!(verify_action(&forest, &maps, &points).ok());
}

#[test]
fn equal_size_images_stay_put() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let forest = Forest::chain(&[0, 1, 2, 3]).unwrap();
    let maps = corpus(&mut rng, 50);
    for _ in 0..200 {
        let p = random_point(&forest, &mut rng, 5);
        let f = &maps[rng.gen_range(0..maps.len())];
        let q = act(&forest, f, &p);
        let mut image: Vec<Rat> = p.set().iter().map(|x| f.eval(x)).collect();
        image.dedup();
        if image.len() == p.set().len() {
            assert_eq!((q.node, q.set()), (p.node, &image[..]));
        }
        assert!(containment_check(&forest, f, &p));
        assert!(forest.is_below_or_equal(q.node, p.node));
    }
}

#[test]
fn injective_maps_act_by_image() {
    let forest = Forest::chain(&[0, 1, 2]).unwrap();
    let p = OrbitPoint::new(&forest, NodeId(2), ints(&[0, 1])).unwrap();
    let q = act(&forest, &pw("(-inf,0) : x; [0,inf) : 2*x + 1"), &p);
    assert_eq!(q.set(), &ints(&[1, 3])[..]);
    let collapse = OrbitPoint::new(&Forest::chain(&[0, 2, 3]).unwrap(), NodeId(2), ints(&[0, 1, 2])).unwrap();
    let forest = Forest::chain(&[0, 2, 3]).unwrap();
    let c = act(&forest, &pw("(-inf,1] : 0; (1,inf) : x"), &collapse);
    assert_eq!(c.set(), &ints(&[0, 2])[..]);
}

#[test]
fn maps_agreeing_on_b_act_alike() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let forest = Forest::two_branch();
    for _ in 0..100 {
        let p = random_point(&forest, &mut rng, 5);
        let f = random_piecewise(&mut rng, 4, 3);
        // rebuild f from its values on B, joined by a different interpolation
        let mut pts: Vec<(Rat, Rat)> = p.set().iter().map(|x| (x.clone(), f.eval(x))).collect();
        pts.sort();
        let g = interpolate(&pts);
        for x in p.set() {
            assert_eq!(g.eval(x), f.eval(x));
        }
        let (f, g) = (GeneralEndo::Piecewise(f), GeneralEndo::Piecewise(g));
        assert_eq!(act(&forest, &f, &p), act(&forest, &g, &p));
    }
}

fn interpolate(pts: &[(Rat, Rat)]) -> PiecewiseEndo {
    if pts.is_empty() {
        return PiecewiseEndo::constant(Rat::int(3));
    }
    let mut lines = Vec::new();
    let (x0, y0) = &pts[0];
    lines.push(format!("(-inf,{x0}) : {}", const_law(y0)));
    for w in pts.windows(2) {
        let ((a, fa), (b, fb)) = (&w[0], &w[1]);
        let slope = (fb - fa) / (b - a);
        let c = fa - &slope * a;
        lines.push(format!("[{a},{a}] : {}", const_law(fa)));
        lines.push(format!("({a},{b}) : {slope}*x + {}", c));
    }
    let (xn, yn) = pts.last().unwrap();
    lines.push(format!("[{xn},inf) : {}", const_law(yn)));
    lines.join("\n").replace("+ -", "- ").parse().unwrap()
}

fn const_law(y: &Rat) -> String {
    format!("0*x + {y}")
}

#[test]
fn idempotents_fix_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let forest = Forest::chain(&[0, 1, 2, 3]).unwrap();
    for _ in 0..100 {
        let p = random_point(&forest, &mut rng, 8);
        let h = fixpoint_check(&forest, &p).unwrap();
        assert!(h.image().parts().iter().all(|i| i.is_point()));
    }
    let p = OrbitPoint::new(&forest, NodeId(2), ints(&[0, 1])).unwrap();
    let h = GeneralEndo::Piecewise(fixpoint_check(&forest, &p).unwrap());
    assert_eq!(act(&forest, &h, &p), p);
}
