//! Countable dense orders that the back-and-forth engine can target.
//!
//! Each order fixes its own enumeration: rationals use the standard
//! enumeration, products use the Cantor pairing of the factor indices.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::ratcore::{colour, index_of, Colour, Endpoint, Rat, RatInterval, RatWalk};

/// Labels that a constrained isomorphism must preserve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Colour(Colour),
    Low,
    High,
}

/// A countable linear order with decidable membership and comparison and a
/// fixed enumeration.
pub trait DenseOrder {
    type Elem: Clone + Ord + fmt::Debug + fmt::Display;

    fn name(&self) -> String;

    fn contains(&self, x: &Self::Elem) -> bool;

    /// Least and greatest elements, if the order has them.
    fn endpoints(&self) -> (Option<Self::Elem>, Option<Self::Elem>) {
        (None, None)
    }

    fn label(&self, _x: &Self::Elem) -> Option<Label> {
        None
    }

    /// Position of a member in this order's enumeration.
    fn index(&self, x: &Self::Elem) -> BigUint;

    /// The admissible member of least index strictly between the bounds
    /// (`None` meaning no bound). Does not return if the admissible members
    /// are not dense in the gap.
    fn least_between(
        &self,
        lo: Option<&Self::Elem>,
        hi: Option<&Self::Elem>,
        admissible: &mut dyn FnMut(&Self::Elem) -> bool,
    ) -> Option<Self::Elem>;
}

/// Orders whose members between two bounds can be streamed in index order.
pub trait Walkable: DenseOrder {
    fn walk_between<'a>(
        &'a self,
        lo: Option<&Self::Elem>,
        hi: Option<&Self::Elem>,
    ) -> Box<dyn Iterator<Item = Self::Elem> + 'a>;
}

fn open_between(lo: Option<&Rat>, hi: Option<&Rat>) -> Option<RatInterval> {
    match (lo, hi) {
        (Some(a), Some(b)) if a >= b => None,
        _ => Some(RatInterval::between(lo, hi).expect("ordered bounds")),
    }
}

macro_rules! walk_filtered {
    ($ty:ty, $name:expr, |$s:ident, $x:ident| $keep:expr) => {
        impl DenseOrder for $ty {
            type Elem = Rat;

            fn name(&self) -> String {
                let $s = self;
                $name
            }

            fn contains(&self, $x: &Rat) -> bool {
                let $s = self;
                $keep
            }

            fn label(&self, x: &Rat) -> Option<Label> {
                Some(Label::Colour(colour(x)))
            }

            fn index(&self, x: &Rat) -> BigUint {
                index_of(x)
            }

            fn least_between(
                &self,
                lo: Option<&Rat>,
                hi: Option<&Rat>,
                admissible: &mut dyn FnMut(&Rat) -> bool,
            ) -> Option<Rat> {
                self.walk_between(lo, hi).find(|r| admissible(r))
            }
        }

        impl Walkable for $ty {
            fn walk_between<'a>(
                &'a self,
                lo: Option<&Rat>,
                hi: Option<&Rat>,
            ) -> Box<dyn Iterator<Item = Rat> + 'a> {
                match open_between(lo, hi) {
                    None => Box::new(std::iter::empty()),
                    Some(i) => Box::new(RatWalk::new(i).filter(move |$x| {
                        let $s = self;
                        $keep
                    })),
                }
            }
        }
    };
}

/// (ℚ, <) itself. Carries the colour labels so that it doubles as ℚ₂.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FullQ;

walk_filtered!(FullQ, "Q".to_string(), |_s, _x| true);

/// ℚ with the parity colouring; the same set as [`FullQ`], named apart for
/// readability at call sites that care about colours.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ColouredQ;

walk_filtered!(ColouredQ, "Q2".to_string(), |_s, _x| true);

/// The red rationals, a dense subset with no endpoints.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RedPoints;

walk_filtered!(RedPoints, "red(Q2)".to_string(), |_s, x| colour(x) == Colour::Red);

/// ℚ with finitely many points removed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QMinusFinite {
    removed: BTreeSet<Rat>,
}

impl QMinusFinite {
    pub fn new(removed: impl IntoIterator<Item = Rat>) -> Self {
        QMinusFinite { removed: removed.into_iter().collect() }
    }
}

walk_filtered!(
    QMinusFinite,
    format!("Q minus {{{}}}", s.removed.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")),
    |s, x| !s.removed.contains(x)
);

/// The rationals of an interval that is open on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalOrder {
    interval: RatInterval,
}

impl IntervalOrder {
    /// Returns `None` unless both ends are open or infinite.
    pub fn new(interval: RatInterval) -> Option<Self> {
        let open = |e: &Endpoint| !e.is_closed();
        (open(interval.lower()) && open(interval.upper()) && !interval.is_empty())
            .then_some(IntervalOrder { interval })
    }

    pub fn interval(&self) -> &RatInterval {
        &self.interval
    }
}

walk_filtered!(IntervalOrder, format!("Q{}", s.interval), |s, x| s.interval.contains(x));

/// A point of ℚ₂, possibly with a blue least and/or greatest point adjoined.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexPt {
    Low,
    Fin(Rat),
    High,
}

impl IndexPt {
    pub fn colour(&self) -> Colour {
        match self {
            IndexPt::Fin(q) => colour(q),
            _ => Colour::Blue,
        }
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            IndexPt::Fin(q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for IndexPt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexPt::Low => f.write_str("-inf"),
            IndexPt::Fin(q) => write!(f, "{q}"),
            IndexPt::High => f.write_str("+inf"),
        }
    }
}

/// ℚ₂ with optional blue endpoints.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IndexOrder {
    pub low: bool,
    pub high: bool,
}

impl DenseOrder for IndexOrder {
    type Elem = IndexPt;

    fn name(&self) -> String {
        match (self.low, self.high) {
            (false, false) => "Q2".into(),
            (false, true) => "Q2+{+inf}".into(),
            (true, false) => "{-inf}+Q2".into(),
            (true, true) => "{-inf}+Q2+{+inf}".into(),
        }
    }

    fn contains(&self, x: &IndexPt) -> bool {
        match x {
            IndexPt::Low => self.low,
            IndexPt::High => self.high,
            IndexPt::Fin(_) => true,
        }
    }

    fn endpoints(&self) -> (Option<IndexPt>, Option<IndexPt>) {
        (self.low.then_some(IndexPt::Low), self.high.then_some(IndexPt::High))
    }

    fn label(&self, x: &IndexPt) -> Option<Label> {
        Some(match x {
            IndexPt::Low => Label::Low,
            IndexPt::High => Label::High,
            IndexPt::Fin(q) => Label::Colour(colour(q)),
        })
    }

    fn index(&self, x: &IndexPt) -> BigUint {
        match x {
            IndexPt::Low => BigUint::zero(),
            IndexPt::High => BigUint::from(1u32),
            IndexPt::Fin(q) => index_of(q) + 2u32,
        }
    }

    fn least_between(
        &self,
        lo: Option<&IndexPt>,
        hi: Option<&IndexPt>,
        admissible: &mut dyn FnMut(&IndexPt) -> bool,
    ) -> Option<IndexPt> {
        self.walk_between(lo, hi).find(|p| admissible(p))
    }
}

impl Walkable for IndexOrder {
    fn walk_between<'a>(
        &'a self,
        lo: Option<&IndexPt>,
        hi: Option<&IndexPt>,
    ) -> Box<dyn Iterator<Item = IndexPt> + 'a> {
        if let (Some(a), Some(b)) = (lo, hi) {
            if a >= b {
                return Box::new(std::iter::empty());
            }
        }
        let mut ends = Vec::new();
        if self.low && lo.is_none() && hi != Some(&IndexPt::Low) {
            ends.push(IndexPt::Low);
        }
        if self.high && hi.is_none() && lo != Some(&IndexPt::High) {
            ends.push(IndexPt::High);
        }
        let fin_lo = match lo {
            Some(IndexPt::High) => return Box::new(ends.into_iter()),
            Some(IndexPt::Fin(q)) => Some(q),
            _ => None,
        };
        let fin_hi = match hi {
            Some(IndexPt::Low) => return Box::new(ends.into_iter()),
            Some(IndexPt::Fin(q)) => Some(q),
            _ => None,
        };
        let rest: Box<dyn Iterator<Item = IndexPt>> = match open_between(fin_lo, fin_hi) {
            None => Box::new(std::iter::empty()),
            Some(i) => Box::new(RatWalk::new(i).map(IndexPt::Fin)),
        };
        Box::new(ends.into_iter().chain(rest))
    }
}

/// Cantor pairing `(i, j) ↦ (i+j)(i+j+1)/2 + j`.
pub fn cantor_pair(i: &BigUint, j: &BigUint) -> BigUint {
    let s = i + j;
    (&s * (&s + 1u32)) / 2u32 + j
}

/// Lexicographic product `A × B`, ordered by the first coordinate and then
/// the second.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LexProduct<A, B> {
    pub first: A,
    pub second: B,
}

impl<A, B> LexProduct<A, B> {
    pub fn new(first: A, second: B) -> Self {
        LexProduct { first, second }
    }
}

/// A pair in a lexicographic product.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lex<X, Y>(pub X, pub Y);

impl<X: fmt::Display, Y: fmt::Display> fmt::Display for Lex<X, Y> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.0, self.1)
    }
}

impl<A, B> DenseOrder for LexProduct<A, B>
where
    A: Walkable,
    B: DenseOrder,
{
    type Elem = Lex<A::Elem, B::Elem>;

    fn name(&self) -> String {
        format!("{} x {}", self.first.name(), self.second.name())
    }

    fn contains(&self, x: &Self::Elem) -> bool {
        self.first.contains(&x.0) && self.second.contains(&x.1)
    }

    fn index(&self, x: &Self::Elem) -> BigUint {
        cantor_pair(&self.first.index(&x.0), &self.second.index(&x.1))
    }

    fn least_between(
        &self,
        lo: Option<&Self::Elem>,
        hi: Option<&Self::Elem>,
        admissible: &mut dyn FnMut(&Self::Elem) -> bool,
    ) -> Option<Self::Elem> {
        if let (Some(l), Some(h)) = (lo, hi) {
            if l >= h {
                return None;
            }
            if l.0 == h.0 {
                let a = l.0.clone();
                return self
                    .second
                    .least_between(Some(&l.1), Some(&h.1), &mut |b| admissible(&Lex(a.clone(), b.clone())))
                    .map(|b| Lex(a, b));
            }
        }
        let mut best: Option<(BigUint, Self::Elem)> = None;
        let offer = |cand: Self::Elem, best: &mut Option<(BigUint, Self::Elem)>| {
            let k = self.index(&cand);
            if best.as_ref().is_none_or(|(b, _)| k < *b) {
                *best = Some((k, cand));
            }
        };
        if let Some(l) = lo {
            let a = l.0.clone();
            if let Some(b) =
                self.second.least_between(Some(&l.1), None, &mut |b| admissible(&Lex(a.clone(), b.clone())))
            {
                offer(Lex(a, b), &mut best);
            }
        }
        if let Some(h) = hi {
            let a = h.0.clone();
            if let Some(b) =
                self.second.least_between(None, Some(&h.1), &mut |b| admissible(&Lex(a.clone(), b.clone())))
            {
                offer(Lex(a, b), &mut best);
            }
        }
        let zero = BigUint::zero();
        for a in self.first.walk_between(lo.map(|l| &l.0), hi.map(|h| &h.0)) {
            let i = self.first.index(&a);
            if let Some((b, _)) = &best {
                if cantor_pair(&i, &zero) >= *b {
                    break;
                }
            }
            let a2 = a.clone();
            if let Some(b) = self.second.least_between(None, None, &mut |b| admissible(&Lex(a2.clone(), b.clone())))
            {
                offer(Lex(a, b), &mut best);
            }
        }
        best.map(|(_, e)| e)
    }
}
