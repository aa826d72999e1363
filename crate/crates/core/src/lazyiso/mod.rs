//! Back-and-forth between countable dense orders, one point at a time.
//!
//! A [`LazyIso`] holds a finite partial isomorphism and extends it on
//! demand. A new point is sent to the admissible element of least
//! enumeration index in the matching gap, so every run is reproducible.

mod orders;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Bound::{Excluded, Unbounded};
use std::sync::Arc;

use thiserror::Error;

pub use orders::{
    cantor_pair, ColouredQ, DenseOrder, FullQ, IndexOrder, IndexPt, IntervalOrder, Label, Lex, LexProduct,
    QMinusFinite, RedPoints, Walkable,
};

use crate::partialmap::FinitePartialMap;
use crate::ratcore::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("{elem} is not a member of the {side} order {order}")]
    NotMember { side: Side, elem: String, order: String },
    #[error("seed is not order preserving at {elem}")]
    SeedNotMonotone { elem: String },
    #[error("seed pair {from} -> {to} violates constraint {constraint}")]
    SeedViolates { from: String, to: String, constraint: String },
    #[error("endpoint structure of {source_order} and {target_order} differ")]
    EndpointMismatch { source_order: String, target_order: String },
    #[error("no admissible witness between {lo} and {hi} for {elem}")]
    NoWitness { elem: String, lo: String, hi: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Source => "source",
            Side::Target => "target",
        })
    }
}

/// A decidable set of order elements.
pub type Membership<E> = Arc<dyn Fn(&E) -> bool + Send + Sync>;

/// An invariant every pair of the memo must satisfy.
pub enum Constraint<X, Y> {
    /// Labels on both sides must agree.
    PreserveLabels,
    /// `x` lies in `source` exactly when its image lies in `target`.
    Stabilize { name: String, source: Membership<X>, target: Membership<Y> },
}

impl<X, Y> Constraint<X, Y> {
    pub fn name(&self) -> String {
        match self {
            Constraint::PreserveLabels => "label preservation".into(),
            Constraint::Stabilize { name, .. } => format!("stabilize {name}"),
        }
    }
}

impl<X, Y> Clone for Constraint<X, Y> {
    fn clone(&self) -> Self {
        match self {
            Constraint::PreserveLabels => Constraint::PreserveLabels,
            Constraint::Stabilize { name, source, target } => Constraint::Stabilize {
                name: name.clone(),
                source: Arc::clone(source),
                target: Arc::clone(target),
            },
        }
    }
}

impl<X, Y> fmt::Debug for Constraint<X, Y> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A demand-driven order isomorphism from `S` onto `T`.
pub struct LazyIso<S: DenseOrder, T: DenseOrder> {
    source: S,
    target: T,
    fwd: BTreeMap<S::Elem, T::Elem>,
    bwd: BTreeMap<T::Elem, S::Elem>,
    constraints: Vec<Constraint<S::Elem, T::Elem>>,
}

impl<S, T> fmt::Debug for LazyIso<S, T>
where
    S: DenseOrder,
    T: DenseOrder,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LazyIso")
            .field("source", &self.source.name())
            .field("target", &self.target.name())
            .field("memo", &self.fwd.len())
            .field("constraints", &self.constraints)
            .finish()
    }
}

impl<S, T> LazyIso<S, T>
where
    S: DenseOrder,
    T: DenseOrder,
{
    /// Starts from `seed`, which must be a partial isomorphism satisfying
    /// every constraint. Endpoints, if any, are paired automatically.
    pub fn build(
        source: S,
        target: T,
        seed: impl IntoIterator<Item = (S::Elem, T::Elem)>,
        constraints: Vec<Constraint<S::Elem, T::Elem>>,
    ) -> Result<Self, IsoError> {
        let (s_lo, s_hi) = source.endpoints();
        let (t_lo, t_hi) = target.endpoints();
        if s_lo.is_some() != t_lo.is_some() || s_hi.is_some() != t_hi.is_some() {
            return Err(IsoError::EndpointMismatch { source_order: source.name(), target_order: target.name() });
        }
        let mut iso = LazyIso { source, target, fwd: BTreeMap::new(), bwd: BTreeMap::new(), constraints };
        let ends = [(s_lo, t_lo), (s_hi, t_hi)].into_iter().filter_map(|(a, b)| Some((a?, b?)));
        for (x, y) in ends.chain(seed) {
            iso.seed_pair(x, y)?;
        }
        Ok(iso)
    }

    fn seed_pair(&mut self, x: S::Elem, y: T::Elem) -> Result<(), IsoError> {
        self.check_members(Some(&x), Some(&y))?;
        if self.fwd.get(&x) == Some(&y) {
            return Ok(());
        }
        if let Some(c) = self.constraints.iter().find(|c| !self.satisfies(c, &x, &y)) {
            return Err(IsoError::SeedViolates { from: x.to_string(), to: y.to_string(), constraint: c.name() });
        }
        let below = self.fwd.range(..&x).next_back().map(|(_, v)| v);
        let above = self.fwd.range((Excluded(&x), Unbounded)).next().map(|(_, v)| v);
        let monotone = !self.fwd.contains_key(&x)
            && !self.bwd.contains_key(&y)
            && below.is_none_or(|b| *b < y)
            && above.is_none_or(|a| y < *a);
        if !monotone {
            return Err(IsoError::SeedNotMonotone { elem: x.to_string() });
        }
        self.fwd.insert(x.clone(), y.clone());
        self.bwd.insert(y, x);
        Ok(())
    }

    fn check_members(&self, x: Option<&S::Elem>, y: Option<&T::Elem>) -> Result<(), IsoError> {
        if let Some(x) = x {
            if !self.source.contains(x) {
                return Err(IsoError::NotMember { side: Side::Source, elem: x.to_string(), order: self.source.name() });
            }
        }
        if let Some(y) = y {
            if !self.target.contains(y) {
                return Err(IsoError::NotMember { side: Side::Target, elem: y.to_string(), order: self.target.name() });
            }
        }
        Ok(())
    }

    fn satisfies(&self, c: &Constraint<S::Elem, T::Elem>, x: &S::Elem, y: &T::Elem) -> bool {
        match c {
            Constraint::PreserveLabels => self.source.label(x) == self.target.label(y),
            Constraint::Stabilize { source, target, .. } => source(x) == target(y),
        }
    }

    pub fn source(&self) -> &S {
        &self.source
    }

    pub fn target(&self) -> &T {
        &self.target
    }

    pub fn eval_fwd(&mut self, x: &S::Elem) -> Result<T::Elem, IsoError> {
        if let Some(y) = self.fwd.get(x) {
            return Ok(y.clone());
        }
        self.check_members(Some(x), None)?;
        let lo = self.fwd.range(..x).next_back().map(|(_, v)| v.clone());
        let hi = self.fwd.range((Excluded(x), Unbounded)).next().map(|(_, v)| v.clone());
        let y = {
            let source = &self.source;
            let target = &self.target;
            let constraints = &self.constraints;
            let mut ok = |y: &T::Elem| {
                constraints.iter().all(|c| match c {
                    Constraint::PreserveLabels => source.label(x) == target.label(y),
                    Constraint::Stabilize { source: sx, target: ty, .. } => sx(x) == ty(y),
                })
            };
            self.target.least_between(lo.as_ref(), hi.as_ref(), &mut ok)
        };
        let y = y.ok_or_else(|| IsoError::NoWitness {
            elem: x.to_string(),
            lo: lo.map_or("-inf".into(), |v| v.to_string()),
            hi: hi.map_or("+inf".into(), |v| v.to_string()),
        })?;
        self.fwd.insert(x.clone(), y.clone());
        self.bwd.insert(y.clone(), x.clone());
        Ok(y)
    }

    pub fn eval_bwd(&mut self, y: &T::Elem) -> Result<S::Elem, IsoError> {
        if let Some(x) = self.bwd.get(y) {
            return Ok(x.clone());
        }
        self.check_members(None, Some(y))?;
        let lo = self.bwd.range(..y).next_back().map(|(_, v)| v.clone());
        let hi = self.bwd.range((Excluded(y), Unbounded)).next().map(|(_, v)| v.clone());
        let x = {
            let source = &self.source;
            let target = &self.target;
            let constraints = &self.constraints;
            let mut ok = |x: &S::Elem| {
                constraints.iter().all(|c| match c {
                    Constraint::PreserveLabels => source.label(x) == target.label(y),
                    Constraint::Stabilize { source: sx, target: ty, .. } => sx(x) == ty(y),
                })
            };
            self.source.least_between(lo.as_ref(), hi.as_ref(), &mut ok)
        };
        let x = x.ok_or_else(|| IsoError::NoWitness {
            elem: y.to_string(),
            lo: lo.map_or("-inf".into(), |v| v.to_string()),
            hi: hi.map_or("+inf".into(), |v| v.to_string()),
        })?;
        self.fwd.insert(x.clone(), y.clone());
        self.bwd.insert(y.clone(), x.clone());
        Ok(x)
    }

    /// Adds a pair by hand, checked like a seed.
    pub fn insert(&mut self, x: S::Elem, y: T::Elem) -> Result<(), IsoError> {
        self.seed_pair(x, y)
    }

    /// Memo pairs whose targets are the nearest below and above `y`.
    #[allow(clippy::type_complexity)]
    pub fn target_neighbours(&self, y: &T::Elem) -> (Option<(T::Elem, S::Elem)>, Option<(T::Elem, S::Elem)>) {
        let below = self.bwd.range(..y).next_back().map(|(t, s)| (t.clone(), s.clone()));
        let above = self.bwd.range((Excluded(y), Unbounded)).next().map(|(t, s)| (t.clone(), s.clone()));
        (below, above)
    }

    /// Looks up a value without extending the memo.
    pub fn peek_fwd(&self, x: &S::Elem) -> Option<&T::Elem> {
        self.fwd.get(x)
    }

    pub fn peek_bwd(&self, y: &T::Elem) -> Option<&S::Elem> {
        self.bwd.get(y)
    }

    pub fn memo(&self) -> impl Iterator<Item = (&S::Elem, &T::Elem)> {
        self.fwd.iter()
    }

    pub fn memo_len(&self) -> usize {
        self.fwd.len()
    }

    /// Memo is strictly increasing, the two directions agree, and every
    /// constraint holds.
    pub fn check_invariants(&self) -> bool {
        let values: Vec<&T::Elem> = self.fwd.values().collect();
        let monotone = values.windows(2).all(|w| w[0] < w[1]);
        let mirrored = self.fwd.len() == self.bwd.len()
            && self.fwd.iter().all(|(x, y)| self.bwd.get(y) == Some(x));
        let constrained =
            self.fwd.iter().all(|(x, y)| self.constraints.iter().all(|c| self.satisfies(c, x, y)));
        monotone && mirrored && constrained
    }

    /// Text dump of the memo, one `x -> y` pair per entry.
    pub fn memo_dump(&self) -> String {
        self.fwd.iter().map(|(x, y)| format!("{x} -> {y}")).collect::<Vec<_>>().join(", ")
    }
}

impl<S, T> LazyIso<S, T>
where
    S: DenseOrder<Elem = Rat>,
    T: DenseOrder<Elem = Rat>,
{
    pub fn from_partial_map(
        source: S,
        target: T,
        seed: &FinitePartialMap,
        constraints: Vec<Constraint<Rat, Rat>>,
    ) -> Result<Self, IsoError> {
        Self::build(source, target, seed.iter().map(|(x, y)| (x.clone(), y.clone())), constraints)
    }

    pub fn memo_map(&self) -> FinitePartialMap {
        self.fwd.iter().map(|(x, y)| (x.clone(), y.clone())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratcore::{colour, enumerate};

    #[test]
    fn seeded_pair_is_returned() {
        let seed: FinitePartialMap = "0 -> 5".parse().unwrap();
        let mut iso = LazyIso::from_partial_map(FullQ, FullQ, &seed, vec![]).unwrap();
        assert_eq!(iso.eval_fwd(&Rat::zero()).unwrap(), Rat::int(5));
    }

    #[test]
    fn identity_seed_is_respected() {
        let seed: Vec<(Rat, Rat)> = (0..10).map(|n| (enumerate(n), enumerate(n))).collect();
        let mut iso = LazyIso::build(FullQ, FullQ, seed, vec![]).unwrap();
        assert_eq!(iso.eval_fwd(&enumerate(3)).unwrap(), enumerate(3));
    }

    #[test]
    fn seed_violating_colours_is_rejected() {
        let seed: FinitePartialMap = "0 -> 1".parse().unwrap();
        let err = LazyIso::from_partial_map(ColouredQ, ColouredQ, &seed, vec![Constraint::PreserveLabels])
            .unwrap_err();
        assert!(matches!(err, IsoError::SeedViolates { ref constraint, .. } if constraint == "label preservation"));
    }

    #[test]
    fn non_monotone_seed_is_rejected() {
        let seed: FinitePartialMap = "0 -> 1, 1 -> 0".parse().unwrap();
        assert!(LazyIso::from_partial_map(FullQ, FullQ, &seed, vec![]).is_err());
    }

    #[test]
    fn removed_point_is_never_hit() {
        let mut iso = LazyIso::build(FullQ, QMinusFinite::new([Rat::zero()]), [], vec![]).unwrap();
        for n in 0..500 {
            assert_ne!(iso.eval_fwd(&enumerate(n)).unwrap(), Rat::zero());
        }
        assert!(iso.check_invariants());
    }

    #[test]
    fn colours_are_preserved() {
        let mut iso = LazyIso::build(ColouredQ, ColouredQ, [], vec![Constraint::PreserveLabels]).unwrap();
        for n in 0..500 {
            let x = enumerate(n * 7 % 1009);
            let y = iso.eval_fwd(&x).unwrap();
            assert_eq!(colour(&x), colour(&y));
        }
        assert!(iso.check_invariants());
    }

    #[test]
    fn endpoints_are_fixed() {
        let order = IndexOrder { low: true, high: false };
        let mut iso = LazyIso::build(order, order, [], vec![Constraint::PreserveLabels]).unwrap();
        assert_eq!(iso.eval_fwd(&IndexPt::Low).unwrap(), IndexPt::Low);
        assert!(iso.eval_fwd(&IndexPt::High).is_err());
        let mismatch = LazyIso::build(order, IndexOrder::default(), [], vec![]);
        assert!(matches!(mismatch, Err(IsoError::EndpointMismatch { .. })));
    }

    #[test]
    fn dyadics_are_stabilised() {
        let dyadic: Membership<Rat> = Arc::new(|x: &Rat| {
            let d = x.denom().clone();
            (&d & (&d - 1u32)) == num_bigint::BigInt::from(0)
        });
        let c = Constraint::Stabilize { name: "dyadics".into(), source: dyadic.clone(), target: dyadic.clone() };
        let mut iso = LazyIso::build(FullQ, FullQ, [(Rat::zero(), Rat::frac(1, 3))], vec![]).unwrap();
        let _ = iso.eval_fwd(&Rat::one());
        let mut iso = LazyIso::build(FullQ, FullQ, [], vec![c]).unwrap();
        for n in 0..300 {
            let x = enumerate(n);
            let y = iso.eval_fwd(&x).unwrap();
            assert_eq!(dyadic(&x), dyadic(&y), "{x} -> {y}");
        }
        for n in 0..300 {
            let y = enumerate(n);
            let x = iso.eval_bwd(&y).unwrap();
            assert_eq!(iso.eval_fwd(&x).unwrap(), y);
        }
        assert!(iso.check_invariants());
    }

    #[test]
    fn product_target_is_order_preserving() {
        let mut iso = LazyIso::build(FullQ, LexProduct::new(ColouredQ, FullQ), [], vec![]).unwrap();
        let xs: Vec<Rat> = (0..200).map(enumerate).collect();
        let ys: Vec<_> = xs.iter().map(|x| iso.eval_fwd(x).unwrap()).collect();
        for i in 0..xs.len() {
            for j in 0..xs.len() {
                assert_eq!(xs[i] < xs[j], ys[i] < ys[j]);
            }
        }
        assert!(iso.check_invariants());
    }
}
