use std::cmp::Ordering;
use std::fmt;

use super::{least_in, Endpoint, Rat, RatInterval};

/// A finite union of rational intervals, kept sorted, disjoint and with no
/// two members that could be merged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalUnion {
    parts: Vec<RatInterval>,
}

fn cmp_lower(a: &Endpoint, b: &Endpoint) -> Ordering {
    match (a, b) {
        (Endpoint::Unbounded, Endpoint::Unbounded) => Ordering::Equal,
        (Endpoint::Unbounded, _) => Ordering::Less,
        (_, Endpoint::Unbounded) => Ordering::Greater,
        _ => {
            let (x, y) = (a.value().unwrap(), b.value().unwrap());
            x.cmp(y).then_with(|| b.is_closed().cmp(&a.is_closed()))
        }
    }
}

fn cmp_upper(a: &Endpoint, b: &Endpoint) -> Ordering {
    match (a, b) {
        (Endpoint::Unbounded, Endpoint::Unbounded) => Ordering::Equal,
        (Endpoint::Unbounded, _) => Ordering::Greater,
        (_, Endpoint::Unbounded) => Ordering::Less,
        _ => {
            let (x, y) = (a.value().unwrap(), b.value().unwrap());
            x.cmp(y).then_with(|| a.is_closed().cmp(&b.is_closed()))
        }
    }
}

/// True when an interval ending at `upper` and one starting at `lower`
/// overlap or touch without a hole.
fn joins(upper: &Endpoint, lower: &Endpoint) -> bool {
    match (upper.value(), lower.value()) {
        (None, _) | (_, None) => true,
        (Some(u), Some(l)) => l < u || (l == u && (upper.is_closed() || lower.is_closed())),
    }
}

fn flip(e: &Endpoint) -> Endpoint {
    match e {
        Endpoint::Unbounded => Endpoint::Unbounded,
        Endpoint::Open(a) => Endpoint::Closed(a.clone()),
        Endpoint::Closed(a) => Endpoint::Open(a.clone()),
    }
}

fn nonempty(lower: Endpoint, upper: Endpoint) -> Option<RatInterval> {
    if let (Some(a), Some(b)) = (lower.value(), upper.value()) {
        if a > b || (a == b && !(lower.is_closed() && upper.is_closed())) {
            return None;
        }
    }
    RatInterval::new(lower, upper).ok()
}

impl IntervalUnion {
    pub fn new(parts: impl IntoIterator<Item = RatInterval>) -> Self {
        let mut parts: Vec<RatInterval> = parts.into_iter().filter(|i| !i.is_empty()).collect();
        parts.sort_by(|a, b| cmp_lower(a.lower(), b.lower()));
        let mut merged: Vec<RatInterval> = Vec::new();
        for p in parts {
            match merged.last_mut() {
                Some(last) if joins(last.upper(), p.lower()) => {
                    if cmp_upper(p.upper(), last.upper()) == Ordering::Greater {
                        *last = RatInterval::new(last.lower().clone(), p.upper().clone()).expect("merged interval");
                    }
                }
                _ => merged.push(p),
            }
        }
        IntervalUnion { parts: merged }
    }

    pub fn empty() -> Self {
        IntervalUnion::default()
    }

    pub fn all() -> Self {
        IntervalUnion { parts: vec![RatInterval::all()] }
    }

    pub fn parts(&self) -> &[RatInterval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_all(&self) -> bool {
        self.parts.len() == 1 && self.parts[0] == RatInterval::all()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn complement(&self) -> IntervalUnion {
        let mut gaps = Vec::new();
        let mut from = Endpoint::Unbounded;
        let mut started = false;
        for p in &self.parts {
            if !(p.lower() == &Endpoint::Unbounded && !started) {
                let lower = if started { from.clone() } else { Endpoint::Unbounded };
                gaps.extend(nonempty(lower, flip(p.lower())));
            }
            started = true;
            from = flip(p.upper());
        }
        if !started {
            return IntervalUnion::all();
        }
        if from != Endpoint::Unbounded {
            gaps.extend(nonempty(from, Endpoint::Unbounded));
        }
        IntervalUnion { parts: gaps }
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::new(self.parts.iter().flat_map(|a| other.parts.iter().filter_map(move |b| a.intersect(b))))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::new(self.parts.iter().chain(&other.parts).cloned())
    }

    pub fn difference(&self, other: &IntervalUnion) -> IntervalUnion {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &IntervalUnion) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_bounded_below(&self) -> bool {
        self.parts.first().is_none_or(|p| p.is_bounded_below())
    }

    pub fn is_bounded_above(&self) -> bool {
        self.parts.last().is_none_or(|p| p.is_bounded_above())
    }

    /// A canonical member: the leftmost bounded part gives its midpoint (or
    /// its only point); failing that an unbounded part gives a point one
    /// unit inside its finite end.
    pub fn sample_point(&self) -> Option<Rat> {
        let bounded = self.parts.iter().find(|p| p.is_bounded_below() && p.is_bounded_above());
        if let Some(p) = bounded {
            let (a, b) = (p.lower().value().unwrap(), p.upper().value().unwrap());
            return Some(a.midpoint(b));
        }
        let p = self.parts.first()?;
        Some(match (p.lower().value(), p.upper().value()) {
            (None, Some(b)) => b - Rat::one(),
            (Some(a), None) => a + Rat::one(),
            _ => Rat::zero(),
        })
    }

    /// The member of least enumeration index.
    pub fn least_member(&self) -> Option<Rat> {
        self.parts.iter().filter_map(|p| least_in(p, |_| true)).min_by_key(super::index_of)
    }
}

impl From<RatInterval> for IntervalUnion {
    fn from(i: RatInterval) -> Self {
        IntervalUnion::new([i])
    }
}

impl FromIterator<RatInterval> for IntervalUnion {
    fn from_iter<I: IntoIterator<Item = RatInterval>>(iter: I) -> Self {
        IntervalUnion::new(iter)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("{}");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join(" u "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(parts: &[&str]) -> IntervalUnion {
        parts.iter().map(|p| p.parse::<RatInterval>().unwrap()).collect()
    }

    #[test]
    fn touching_parts_merge() {
        assert_eq!(u(&["(-inf,0)", "[0,1]"]), u(&["(-inf,1]"]));
        assert_eq!(u(&["(-inf,0)", "(0,1]"]).parts().len(), 2);
        assert!(u(&["(-inf,0]", "(0,+inf)"]).is_all());
        assert_eq!(u(&["[0,3]", "(1,2)"]), u(&["[0,3]"]));
    }

    #[test]
    fn complement_of_a_gap() {
        let img = u(&["(-inf,0)", "[1,+inf)"]);
        assert_eq!(img.complement(), u(&["[0,1)"]));
        assert_eq!(img.complement().sample_point(), Some(Rat::frac(1, 2)));
        assert_eq!(IntervalUnion::empty().complement(), IntervalUnion::all());
        assert_eq!(IntervalUnion::all().complement(), IntervalUnion::empty());
        assert_eq!(u(&["[3,3]"]).complement(), u(&["(-inf,3)", "(3,+inf)"]));
        assert_eq!(u(&["[3,3]"]).complement().sample_point(), Some(Rat::int(2)));
    }

    #[test]
    fn subset_and_difference() {
        let a = u(&["(0,1)", "[2,3]"]);
        let b = u(&["[0,5]"]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert_eq!(b.difference(&a), u(&["[0,0]", "[1,2)", "(3,5]"]));
    }
}
