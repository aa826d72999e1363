use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::Rat;

/// One end of a [`RatInterval`]. `Unbounded` is −∞ on the left and +∞ on the
/// right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Unbounded,
    Open(Rat),
    Closed(Rat),
}

impl Endpoint {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            Endpoint::Unbounded => None,
            Endpoint::Open(r) | Endpoint::Closed(r) => Some(r),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Endpoint::Closed(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("lower end {lower} exceeds upper end {upper}")]
    Reversed { lower: Rat, upper: Rat },
    #[error("degenerate interval at {0} must be closed on both sides")]
    HalfOpenPoint(Rat),
    #[error("cannot parse interval {0:?}")]
    Parse(String),
}

/// A convex set of rationals with rational or infinite ends.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lower: Endpoint,
    upper: Endpoint,
}

impl RatInterval {
    pub fn new(lower: Endpoint, upper: Endpoint) -> Result<Self, IntervalError> {
        if let (Some(a), Some(b)) = (lower.value(), upper.value()) {
            match a.cmp(b) {
                Ordering::Greater => {
                    return Err(IntervalError::Reversed { lower: a.clone(), upper: b.clone() })
                }
                Ordering::Equal if !(lower.is_closed() && upper.is_closed()) => {
                    return Err(IntervalError::HalfOpenPoint(a.clone()))
                }
                _ => {}
            }
        }
        Ok(RatInterval { lower, upper })
    }

    pub fn all() -> Self {
        RatInterval { lower: Endpoint::Unbounded, upper: Endpoint::Unbounded }
    }

    pub fn point(x: Rat) -> Self {
        RatInterval { lower: Endpoint::Closed(x.clone()), upper: Endpoint::Closed(x) }
    }

    pub fn open(a: Rat, b: Rat) -> Result<Self, IntervalError> {
        Self::new(Endpoint::Open(a), Endpoint::Open(b))
    }

    pub fn closed(a: Rat, b: Rat) -> Result<Self, IntervalError> {
        Self::new(Endpoint::Closed(a), Endpoint::Closed(b))
    }

    /// The open interval between two optional bounds, `None` meaning infinite.
    pub fn between(lo: Option<&Rat>, hi: Option<&Rat>) -> Result<Self, IntervalError> {
        let end = |b: Option<&Rat>| b.map_or(Endpoint::Unbounded, |r| Endpoint::Open(r.clone()));
        Self::new(end(lo), end(hi))
    }

    pub fn lower(&self) -> &Endpoint {
        &self.lower
    }

    pub fn upper(&self) -> &Endpoint {
        &self.upper
    }

    pub fn is_point(&self) -> bool {
        matches!((&self.lower, &self.upper), (Endpoint::Closed(a), Endpoint::Closed(b)) if a == b)
    }

    /// True when the interval holds no rational. Only arises for an open
    /// interval `(a,a)` built through [`RatInterval::intersect`].
    pub fn is_empty(&self) -> bool {
        match (self.lower.value(), self.upper.value()) {
            (Some(a), Some(b)) => a > b || (a == b && !self.is_point()),
            _ => false,
        }
    }

    pub fn is_bounded_below(&self) -> bool {
        self.lower != Endpoint::Unbounded
    }

    pub fn is_bounded_above(&self) -> bool {
        self.upper != Endpoint::Unbounded
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let above = match &self.lower {
            Endpoint::Unbounded => true,
            Endpoint::Open(a) => x > a,
            Endpoint::Closed(a) => x >= a,
        };
        let below = match &self.upper {
            Endpoint::Unbounded => true,
            Endpoint::Open(b) => x < b,
            Endpoint::Closed(b) => x <= b,
        };
        above && below
    }

    /// Every member lies strictly below `x`.
    pub fn lies_below(&self, x: &Rat) -> bool {
        match &self.upper {
            Endpoint::Unbounded => false,
            Endpoint::Open(b) => b <= x,
            Endpoint::Closed(b) => b < x,
        }
    }

    /// Every member lies strictly above `x`.
    pub fn lies_above(&self, x: &Rat) -> bool {
        match &self.lower {
            Endpoint::Unbounded => false,
            Endpoint::Open(a) => a >= x,
            Endpoint::Closed(a) => a > x,
        }
    }

    /// Intersection, or `None` when it holds no rational.
    pub fn intersect(&self, other: &RatInterval) -> Option<RatInterval> {
        let lower = tighter(&self.lower, &other.lower, Ordering::Greater);
        let upper = tighter(&self.upper, &other.upper, Ordering::Less);
        let i = RatInterval { lower, upper };
        if i.is_empty() {
            None
        } else {
            Some(i)
        }
    }

    pub fn map_affine(&self, slope: &Rat, intercept: &Rat) -> RatInterval {
        assert!(slope.is_positive(), "affine image needs a positive slope");
        let f = |e: &Endpoint| match e {
            Endpoint::Unbounded => Endpoint::Unbounded,
            Endpoint::Open(a) => Endpoint::Open(slope * a + intercept),
            Endpoint::Closed(a) => Endpoint::Closed(slope * a + intercept),
        };
        RatInterval { lower: f(&self.lower), upper: f(&self.upper) }
    }

    pub fn negate(&self) -> RatInterval {
        let f = |e: &Endpoint| match e {
            Endpoint::Unbounded => Endpoint::Unbounded,
            Endpoint::Open(a) => Endpoint::Open(-a),
            Endpoint::Closed(a) => Endpoint::Closed(-a),
        };
        RatInterval { lower: f(&self.upper), upper: f(&self.lower) }
    }
}

fn tighter(a: &Endpoint, b: &Endpoint, prefer: Ordering) -> Endpoint {
    match (a.value(), b.value()) {
        (None, _) => b.clone(),
        (_, None) => a.clone(),
        (Some(x), Some(y)) => match x.cmp(y) {
            Ordering::Equal => {
                if a.is_closed() {
                    b.clone()
                } else {
                    a.clone()
                }
            }
            o if o == prefer => a.clone(),
            _ => b.clone(),
        },
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lower {
            Endpoint::Unbounded => write!(f, "(-inf,")?,
            Endpoint::Open(a) => write!(f, "({a},")?,
            Endpoint::Closed(a) => write!(f, "[{a},")?,
        }
        match &self.upper {
            Endpoint::Unbounded => write!(f, "+inf)"),
            Endpoint::Open(b) => write!(f, "{b})"),
            Endpoint::Closed(b) => write!(f, "{b}]"),
        }
    }
}

impl FromStr for RatInterval {
    type Err = IntervalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || IntervalError::Parse(s.to_string());
        if t.len() < 2 {
            return Err(bad());
        }
        let (open_ch, rest) = t.split_at(1);
        let (body, close_ch) = rest.split_at(rest.len() - 1);
        let (a, b) = body.split_once(',').ok_or_else(bad)?;
        let (a, b) = (a.trim(), b.trim());
        let lower = match (open_ch, a) {
            ("(", "-inf") => Endpoint::Unbounded,
            ("(", v) => Endpoint::Open(v.parse().map_err(|_| bad())?),
            ("[", v) => Endpoint::Closed(v.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        let upper = match (close_ch, b) {
            (")", "+inf") | (")", "inf") => Endpoint::Unbounded,
            (")", v) => Endpoint::Open(v.parse().map_err(|_| bad())?),
            ("]", v) => Endpoint::Closed(v.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        RatInterval::new(lower, upper)
    }
}
