//! Splitting an endomorphism as a surjection after an injection.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;

use crate::lazyiso::{cantor_pair, DenseOrder, FullQ, LazyIso};
use crate::ratcore::{index_of, least_in, IntervalUnion, Rat, RatInterval, RatWalk};

use super::{FnMap, GeneralEndo, PiecewiseEndo};

/// A point of the factor order: `(q, y)` with `h(y) = q` when `q` is a
/// value of `h`, the bare `q` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FactorPt {
    pub q: Rat,
    pub y: Option<Rat>,
}

impl fmt::Display for FactorPt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.y {
            Some(y) => write!(f, "({}, {})", self.q, y),
            None => write!(f, "{}", self.q),
        }
    }
}

/// Every value `q` of `h` blown up into a copy of its fibre, ordered
/// lexicographically. Dense and without endpoints.
#[derive(Debug, Clone)]
pub struct FactorOrder {
    h: PiecewiseEndo,
    image: IntervalUnion,
}

impl FactorOrder {
    pub fn new(h: PiecewiseEndo) -> Self {
        let image = h.image();
        FactorOrder { h, image }
    }

    fn fibre(&self, q: &Rat) -> Option<RatInterval> {
        if self.image.contains(q) {
            self.h.preimage(q)
        } else {
            None
        }
    }

    /// Least admissible point of row `q` whose second coordinate lies in
    /// `within`, or the bare point when `q` is not a value.
    fn best_in_row(
        &self,
        q: &Rat,
        within: &RatInterval,
        admissible: &mut dyn FnMut(&FactorPt) -> bool,
    ) -> Option<FactorPt> {
        match self.fibre(q) {
            None => {
                let p = FactorPt { q: q.clone(), y: None };
                admissible(&p).then_some(p)
            }
            Some(f) => {
                let span = f.intersect(within)?;
                least_in(&span, |y| admissible(&FactorPt { q: q.clone(), y: Some(y.clone()) }))
                    .map(|y| FactorPt { q: q.clone(), y: Some(y) })
            }
        }
    }
}

impl DenseOrder for FactorOrder {
    type Elem = FactorPt;

    fn name(&self) -> String {
        "factor order".into()
    }

    fn contains(&self, p: &FactorPt) -> bool {
        match &p.y {
            Some(y) => self.h.eval(y) == p.q,
            None => !self.image.contains(&p.q),
        }
    }

    fn index(&self, p: &FactorPt) -> BigUint {
        let j = p.y.as_ref().map_or_else(BigUint::default, index_of);
        cantor_pair(&index_of(&p.q), &j)
    }

    fn least_between(
        &self,
        lo: Option<&FactorPt>,
        hi: Option<&FactorPt>,
        admissible: &mut dyn FnMut(&FactorPt) -> bool,
    ) -> Option<FactorPt> {
        if let (Some(l), Some(h)) = (lo, hi) {
            if l.q == h.q {
                let within = RatInterval::between(l.y.as_ref(), h.y.as_ref()).ok()?;
                return self.best_in_row(&l.q, &within, admissible);
            }
        }
        let mut best: Option<(BigUint, FactorPt)> = None;
        let offer = |cand: Option<FactorPt>, best: &mut Option<(BigUint, FactorPt)>| {
            if let Some(c) = cand {
                let k = self.index(&c);
                if best.as_ref().is_none_or(|(b, _)| k < *b) {
                    *best = Some((k, c));
                }
            }
        };
        for (end, above) in [(lo, true), (hi, false)] {
            if let Some(FactorPt { q, y: Some(y) }) = end {
                let within = if above {
                    RatInterval::between(Some(y), None)
                } else {
                    RatInterval::between(None, Some(y))
                }
                .expect("half line");
                let cand = self.best_in_row(q, &within, admissible);
                offer(cand, &mut best);
            }
        }
        let Ok(middle) = RatInterval::between(lo.map(|p| &p.q), hi.map(|p| &p.q)) else {
            return best.map(|(_, p)| p);
        };
        if middle.is_empty() {
            return best.map(|(_, p)| p);
        }
        for q in RatWalk::new(middle) {
            if let Some((b, _)) = &best {
                if cantor_pair(&index_of(&q), &BigUint::default()) >= *b {
                    break;
                }
            }
            let cand = self.best_in_row(&q, &RatInterval::all(), admissible);
            offer(cand, &mut best);
        }
        best.map(|(_, p)| p)
    }
}

/// `h = epi ∘ mono` with `mono` injective and `epi` surjective.
pub struct Factorization {
    pub mono: GeneralEndo,
    pub epi: GeneralEndo,
}

/// Splits `h` through the factor order: `mono(x)` is the point of ℚ sent to
/// `(h(x), x)`, and `epi` reads off the first coordinate.
pub fn epi_mono_factorize(h: &PiecewiseEndo) -> Factorization {
    let order = FactorOrder::new(h.clone());
    let iso = LazyIso::build(FullQ, order, [], vec![]).expect("no seed to violate");
    let iso = Arc::new(Mutex::new(iso));
    let (h1, i1) = (h.clone(), Arc::clone(&iso));
    let mono = FnMap::new("injective factor", move |x: &Rat| {
        let p = FactorPt { q: h1.eval(x), y: Some(x.clone()) };
        i1.lock().expect("memo lock").eval_bwd(&p).expect("factor order is dense")
    });
    let (h2, i2, i3, i4) = (h.clone(), Arc::clone(&iso), Arc::clone(&iso), Arc::clone(&iso));
    let epi = FnMap::new("surjective factor", move |x: &Rat| {
        i2.lock().expect("memo lock").eval_fwd(x).expect("factor order is dense").q
    })
    .with_preimage(move |r: &Rat| {
        let image = h2.image();
        let y = if image.contains(r) {
            Some(h2.preimage(r).and_then(|i| least_in(&i, |_| true)).expect("value has a fibre"))
        } else {
            None
        };
        i3.lock().expect("memo lock").eval_bwd(&FactorPt { q: r.clone(), y }).ok()
    })
    .with_memo(move || i4.lock().expect("memo lock").memo_dump());
    Factorization { mono: GeneralEndo::lazy(mono), epi: GeneralEndo::lazy(epi) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratcore::enumerate;

    #[test]
    fn fibres_become_rows() {
        let h: PiecewiseEndo = "(-inf,0) : x; [0,1] : 0; (1,+inf) : x - 1".parse().unwrap();
        let order = FactorOrder::new(h);
        assert!(order.contains(&FactorPt { q: Rat::zero(), y: Some(Rat::frac(1, 2)) }));
        assert!(!order.contains(&FactorPt { q: Rat::zero(), y: None }));
        let lo = FactorPt { q: Rat::zero(), y: Some(Rat::zero()) };
        let hi = FactorPt { q: Rat::zero(), y: Some(Rat::one()) };
        let mid = order.least_between(Some(&lo), Some(&hi), &mut |_| true).unwrap();
        assert_eq!(mid, FactorPt { q: Rat::zero(), y: Some(Rat::frac(1, 2)) });
    }

    #[test]
    fn constant_map_factors() {
        let h = PiecewiseEndo::constant(Rat::zero());
        let Factorization { mono, epi } = epi_mono_factorize(&h);
        let xs: Vec<Rat> = (0..120).map(enumerate).collect();
        let ys: Vec<Rat> = xs.iter().map(|x| mono.eval(x)).collect();
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(epi.eval(y), Rat::zero(), "at {x}");
        }
        for i in 0..xs.len() {
            for j in 0..xs.len() {
                assert_eq!(xs[i] < xs[j], ys[i] < ys[j]);
            }
        }
        for n in 0..40 {
            let r = enumerate(n);
            let x = epi.preimage(&r).unwrap();
            assert_eq!(epi.eval(&x), r);
        }
    }
}
