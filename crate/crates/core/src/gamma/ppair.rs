use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::Rng;

use crate::endo::{FnMap, GeneralEndo};
use crate::lazyiso::{Constraint, FullQ, IndexOrder, IndexPt, LazyIso, Lex};
use crate::partialmap::FinitePartialMap;
use crate::ratcore::{colour, Colour, Rat};

use super::{GammaError, GammaGeneric};

/// Two finite partial automorphisms, `a` acting on the target of `g` and
/// `b` on its source.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PPair {
    pub a: FinitePartialMap,
    pub b: FinitePartialMap,
}

/// A failed clause of the pair conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub clause: u8,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause {}: {}", self.clause, self.detail)
    }
}

/// Checks the seven conditions under which `(a, b)` extends to a pair
/// `(α, β)` of automorphisms with `α ∘ g = g ∘ β`:
///
/// 1. `a` keeps colours and endpoint classes, and two points of `dom a`
///    share a class iff their images do;
/// 2. if `x ∈ dom a` lies in a red class, that class's image point is in `dom a`;
/// 3. the same for `im a`;
/// 4. `g(dom b) ⊆ dom a`;
/// 5. `g(im b) ⊆ im a`;
/// 6. `a` agrees with `g b g⁻¹` on image points of `dom a`;
/// 7. `a⁻¹` agrees with `g b⁻¹ g⁻¹` on image points of `im a`.
pub fn p_check(g: &GammaGeneric, p: &PPair) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let mut fail = |clause: u8, detail: String| out.push(Violation { clause, detail });
    let pairs: Vec<(Rat, Rat)> = p.a.iter().map(|(x, y)| (x.clone(), y.clone())).collect();
    let classes: Vec<(IndexPt, IndexPt)> = pairs.iter().map(|(x, y)| (g.class_of(x), g.class_of(y))).collect();

    for ((x, y), (cx, cy)) in pairs.iter().zip(&classes) {
        if cx.colour() != cy.colour() {
            fail(1, format!("{x} -> {y} changes colour"));
        }
        for end in [IndexPt::Low, IndexPt::High] {
            if (*cx == end) != (*cy == end) {
                fail(1, format!("{x} -> {y} moves the {end} endpoint class"));
            }
        }
    }
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            if (classes[i].0 == classes[j].0) != (classes[i].1 == classes[j].1) {
                fail(1, format!("{} and {} are not strongly class preserved", pairs[i].0, pairs[j].0));
            }
        }
    }
    for (clause, side) in [(2u8, p.a.domain().cloned().collect::<Vec<_>>()), (3, p.a.image().cloned().collect())] {
        for x in &side {
            if let Some(r) = g.representative(&g.class_of(x)) {
                let present = if clause == 2 { p.a.get(&r).is_some() } else { p.a.in_image(&r) };
                if !present {
                    fail(clause, format!("{x} shares a red class with image point {r}, which is missing"));
                }
            }
        }
    }
    for (u, v) in p.b.iter() {
        if p.a.get(&g.eval(u)).is_none() {
            fail(4, format!("g({u}) is not in the domain of a"));
        }
        if !p.a.in_image(&g.eval(v)) {
            fail(5, format!("g({v}) is not in the image of a"));
        }
    }
    for (x, y) in p.a.iter() {
        if let Some(u) = g.inverse(x) {
            match p.b.get(&u) {
                None => fail(6, format!("g^-1({x}) = {u} is not in the domain of b")),
                Some(v) if g.eval(v) != *y => fail(6, format!("g b g^-1({x}) differs from a({x}) = {y}")),
                _ => {}
            }
        }
        if let Some(v) = g.inverse(y) {
            match p.b.preimage(&v) {
                None => fail(7, format!("g^-1({y}) = {v} is not in the image of b")),
                Some(u) if g.eval(u) != *x => fail(7, format!("g b^-1 g^-1({y}) differs from {x}")),
                _ => {}
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Automorphisms with `α ∘ g = g ∘ β`.
#[derive(Clone, Debug)]
pub struct CommutingPair {
    pub alpha: GeneralEndo,
    pub beta: GeneralEndo,
}

struct Extension {
    g: Arc<GammaGeneric>,
    classes: Mutex<LazyIso<IndexOrder, IndexOrder>>,
    rows: BTreeMap<IndexPt, Mutex<LazyIso<FullQ, FullQ>>>,
    /// Target class of each touched class, for inverting rows.
    touched_targets: BTreeMap<IndexPt, IndexPt>,
}

impl Extension {
    fn class_fwd(&self, p: &IndexPt) -> IndexPt {
        self.classes.lock().expect("memo lock").eval_fwd(p).expect("class order is dense per colour")
    }

    fn class_bwd(&self, p: &IndexPt) -> IndexPt {
        self.classes.lock().expect("memo lock").eval_bwd(p).expect("class order is dense per colour")
    }

    fn alpha(&self, x: &Rat) -> Rat {
        let Lex(p, z) = self.g.coords(x);
        let target = self.class_fwd(&p);
        let z = match self.rows.get(&p) {
            Some(row) => row.lock().expect("memo lock").eval_fwd(&z).expect("Q is dense"),
            None => z,
        };
        self.g.point(&Lex(target, z))
    }

    fn alpha_inv(&self, y: &Rat) -> Rat {
        let Lex(p, z) = self.g.coords(y);
        let source = self.class_bwd(&p);
        let z = match self.rows.get(&source) {
            Some(row) => row.lock().expect("memo lock").eval_bwd(&z).expect("Q is dense"),
            None => z,
        };
        debug_assert!(!self.rows.contains_key(&source) || self.touched_targets.get(&source) == Some(&p));
        self.g.point(&Lex(source, z))
    }

    fn beta(&self, x: &Rat) -> Rat {
        let q = IndexPt::Fin(self.g.red_index(x));
        let IndexPt::Fin(t) = self.class_fwd(&q) else { unreachable!("red classes go to red classes") };
        self.g.red_source(&t)
    }

    fn beta_inv(&self, y: &Rat) -> Rat {
        let q = IndexPt::Fin(self.g.red_index(y));
        let IndexPt::Fin(s) = self.class_bwd(&q) else { unreachable!("red classes go to red classes") };
        self.g.red_source(&s)
    }
}

/// Extends a valid pair to commuting automorphisms.
///
/// The class map induced by `a` is extended to an automorphism of the
/// class order that keeps colours and endpoints. Inside each touched class
/// a row isomorphism extends `a`; other classes are moved rigidly. Then
/// `β = g⁻¹ α g`, read off through the red indices.
pub fn extend_pair(g: &Arc<GammaGeneric>, p: &PPair) -> Result<CommutingPair, GammaError> {
    p_check(g, p).map_err(GammaError::NotAPair)?;
    let mut class_seed: BTreeMap<IndexPt, IndexPt> = BTreeMap::new();
    let mut row_seed: BTreeMap<IndexPt, Vec<(Rat, Rat)>> = BTreeMap::new();
    for (x, y) in p.a.iter() {
        let (Lex(px, zx), Lex(py, zy)) = (g.coords(x), g.coords(y));
        class_seed.insert(px.clone(), py);
        row_seed.entry(px).or_default().push((zx, zy));
    }
    let classes = LazyIso::build(g.index_order(), g.index_order(), class_seed.clone(), vec![Constraint::PreserveLabels])
        .map_err(|e| GammaError::NotAPair(vec![Violation { clause: 1, detail: e.to_string() }]))?;
    let mut rows = BTreeMap::new();
    for (p, mut seed) in row_seed {
        if p.colour() == Colour::Red {
            seed.push((Rat::zero(), Rat::zero()));
        }
        let iso = LazyIso::build(FullQ, FullQ, seed, vec![])
            .map_err(|e| GammaError::NotAPair(vec![Violation { clause: 1, detail: e.to_string() }]))?;
        rows.insert(p, Mutex::new(iso));
    }
    let ext = Arc::new(Extension { g: Arc::clone(g), classes: Mutex::new(classes), rows, touched_targets: class_seed });
    let (e1, e2, e3, e4) = (Arc::clone(&ext), Arc::clone(&ext), Arc::clone(&ext), ext);
    let alpha = FnMap::new("alpha", move |x: &Rat| e1.alpha(x)).with_preimage(move |y: &Rat| Some(e2.alpha_inv(y)));
    let beta = FnMap::new("beta", move |x: &Rat| e3.beta(x)).with_preimage(move |y: &Rat| Some(e4.beta_inv(y)));
    Ok(CommutingPair { alpha: GeneralEndo::lazy(alpha), beta: GeneralEndo::lazy(beta) })
}

/// Which case of the witness construction applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecoverCase {
    /// `s` is an image point.
    ImagePoint,
    /// `s` lies in a blue class.
    BlueClass,
    /// `s` lies in a red class but is not its image point.
    RedClass,
}

#[derive(Debug, Clone)]
pub enum Recovery {
    /// `s = g(u)`.
    Equal,
    /// `β(u) = u` but `α(s) = t ≠ s`.
    Witness { case: RecoverCase, t: Rat, pair: PPair, commuting: CommutingPair },
}

/// Separates `s` from `g(u)` by a commuting pair that fixes `u` and moves
/// `s`, unless they are equal.
pub fn recover_witness(g: &Arc<GammaGeneric>, u: &Rat, s: &Rat) -> Recovery {
    let gu = g.eval(u);
    if *s == gu {
        return Recovery::Equal;
    }
    let up = gu < *s;
    let step = |z: &Rat, away: bool| if away == up { z + Rat::one() } else { z - Rat::one() };
    let mut a: Vec<(Rat, Rat)> = vec![(gu.clone(), gu.clone())];
    let mut b: Vec<(Rat, Rat)> = vec![(u.clone(), u.clone())];
    let (case, t) = if let Some(v) = g.inverse(s) {
        let w = step(&v, true);
        let t = g.eval(&w);
        b.push((v, w));
        (RecoverCase::ImagePoint, t)
    } else {
        let Lex(p, z) = g.coords(s);
        if p.colour() == Colour::Blue {
            (RecoverCase::BlueClass, g.point(&Lex(p, step(&z, true))))
        } else {
            let r = g.representative(&p).expect("red class");
            let zt = if z.is_positive() { &z + Rat::one() } else { &z - Rat::one() };
            let v = g.inverse(&r).expect("representative is an image point");
            a.push((r.clone(), r));
            b.push((v.clone(), v));
            (RecoverCase::RedClass, g.point(&Lex(p, zt)))
        }
    };
    a.push((s.clone(), t.clone()));
    let pair = PPair {
        a: FinitePartialMap::from_pairs(a).expect("distinct arguments"),
        b: FinitePartialMap::from_pairs(b).expect("distinct arguments"),
    };
    let commuting = extend_pair(g, &pair).expect("the constructed pair satisfies all clauses");
    Recovery::Witness { case, t, pair, commuting }
}

/// A random valid pair: a colour preserving monotone map on a few classes,
/// rigid on the chosen rows, with matching moves of red class sources in
/// `b`.
pub fn random_ppair<R: Rng + ?Sized>(g: &GammaGeneric, rng: &mut R, classes: usize, extras: usize) -> PPair {
    let mut qs: Vec<Rat> = (0..classes).map(|_| Rat::frac(rng.gen_range(-12..=12), rng.gen_range(1..=4))).collect();
    qs.sort();
    qs.dedup();
    let mut shift = rng.gen_range(-2i64..=0);
    let mut class_pairs: Vec<(IndexPt, IndexPt)> = Vec::new();
    let v = g.variant();
    if v.low() && rng.gen_bool(0.5) {
        class_pairs.push((IndexPt::Low, IndexPt::Low));
    }
    for q in qs {
        shift += rng.gen_range(0..=1);
        class_pairs.push((IndexPt::Fin(q.clone()), IndexPt::Fin(q + Rat::int(2 * shift))));
    }
    if v.high() && rng.gen_bool(0.5) {
        class_pairs.push((IndexPt::High, IndexPt::High));
    }
    let mut a = FinitePartialMap::new();
    let mut b = FinitePartialMap::new();
    for (p, p2) in class_pairs {
        let red = p.colour() == Colour::Red;
        if let (true, IndexPt::Fin(q), IndexPt::Fin(q2)) = (red, &p, &p2) {
            let (w, w2) = (g.red_source(q), g.red_source(q2));
            a.insert(g.eval(&w), g.eval(&w2)).expect("fresh point");
            b.insert(w, w2).expect("fresh point");
        }
        for _ in 0..rng.gen_range(if red { 0 } else { 1 }..=extras.max(1)) {
            let z = Rat::frac(rng.gen_range(1..=9), rng.gen_range(1..=3)) * Rat::int(if rng.gen_bool(0.5) { 1 } else { -1 });
            let (x, y) = (g.point(&Lex(p.clone(), z.clone())), g.point(&Lex(p2.clone(), z)));
            let _ = a.insert(x, y);
        }
    }
    debug_assert!(colour(&Rat::zero()) == Colour::Red);
    PPair { a, b }
}
