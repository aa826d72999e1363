//! Rationals of an interval in increasing enumeration index.
//!
//! The Stern–Brocot and Calkin–Wilf trees have the same rows, and the
//! enumeration visits rows in order, so a breadth-first walk of the
//! Stern–Brocot tree pruned to the interval yields candidates row by row.
//! Inside a row, the Calkin–Wilf position is the Stern–Brocot path read
//! backwards.

use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::{Endpoint, Rat, RatInterval};

#[derive(Debug, Clone)]
struct Node {
    left: (BigInt, BigInt),
    right: (BigInt, BigInt),
    /// Calkin–Wilf position minus `2^depth`.
    offset: BigUint,
}

impl Node {
    fn root() -> Self {
        Node {
            left: (BigInt::zero(), BigInt::one()),
            right: (BigInt::one(), BigInt::zero()),
            offset: BigUint::zero(),
        }
    }

    fn value(&self) -> Rat {
        Rat::new(&self.left.0 + &self.right.0, &self.left.1 + &self.right.1)
            .expect("mediant has positive denominator")
    }

    fn span(&self) -> RatInterval {
        let lo = Rat::new(self.left.0.clone(), self.left.1.clone()).expect("left bound is finite");
        let hi = if self.right.1.is_zero() {
            Endpoint::Unbounded
        } else {
            Endpoint::Open(Rat::new(self.right.0.clone(), self.right.1.clone()).expect("finite"))
        };
        RatInterval::new(Endpoint::Open(lo), hi).expect("subtree span is an interval")
    }

    fn children(&self, depth: u64) -> [Node; 2] {
        let m = (&self.left.0 + &self.right.0, &self.left.1 + &self.right.1);
        let left = Node { left: self.left.clone(), right: m.clone(), offset: self.offset.clone() };
        let right = Node {
            left: m,
            right: self.right.clone(),
            offset: &self.offset + (BigUint::one() << depth),
        };
        [left, right]
    }
}

/// Iterator over the rationals of an interval in increasing order of
/// [`index_of`](super::index_of).
#[derive(Debug, Clone)]
pub struct RatWalk {
    interval: RatInterval,
    positive: Option<RatInterval>,
    negative: Option<RatInterval>,
    depth: u64,
    pos_frontier: Vec<Node>,
    neg_frontier: Vec<Node>,
    ready: VecDeque<Rat>,
    zero_pending: bool,
    exhausted: bool,
}

impl RatWalk {
    pub fn new(interval: RatInterval) -> Self {
        let half = RatInterval::new(Endpoint::Open(Rat::zero()), Endpoint::Unbounded)
            .expect("positive half-line");
        let positive = interval.intersect(&half);
        let negative = interval.negate().intersect(&half);
        let pos_frontier = positive.as_ref().map(|_| vec![Node::root()]).unwrap_or_default();
        let neg_frontier = negative.as_ref().map(|_| vec![Node::root()]).unwrap_or_default();
        let empty = interval.is_empty();
        RatWalk {
            zero_pending: interval.contains(&Rat::zero()),
            interval,
            positive,
            negative,
            depth: 0,
            pos_frontier,
            neg_frontier,
            ready: VecDeque::new(),
            exhausted: empty,
        }
    }

    pub fn interval(&self) -> &RatInterval {
        &self.interval
    }

    fn advance_row(&mut self) {
        let depth = self.depth;
        let mut row: Vec<(BigUint, bool, Rat)> = Vec::new();
        for (frontier, target, negate) in [
            (&mut self.pos_frontier, &self.positive, false),
            (&mut self.neg_frontier, &self.negative, true),
        ] {
            let Some(target) = target else { continue };
            let mut next = Vec::new();
            for node in frontier.drain(..) {
                let v = node.value();
                if target.contains(&v) {
                    row.push((node.offset.clone(), negate, if negate { -v } else { v }));
                }
                for child in node.children(depth) {
                    if child.span().intersect(target).is_some() {
                        next.push(child);
                    }
                }
            }
            *frontier = next;
        }
        row.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        self.ready.extend(row.into_iter().map(|(_, _, r)| r));
        self.depth += 1;
    }
}

impl Iterator for RatWalk {
    type Item = Rat;

    fn next(&mut self) -> Option<Rat> {
        if self.exhausted {
            return None;
        }
        if self.zero_pending {
            self.zero_pending = false;
            if self.interval.is_point() {
                self.exhausted = true;
            }
            return Some(Rat::zero());
        }
        loop {
            if let Some(r) = self.ready.pop_front() {
                if self.interval.is_point() {
                    self.exhausted = true;
                }
                return Some(r);
            }
            if self.pos_frontier.is_empty() && self.neg_frontier.is_empty() {
                self.exhausted = true;
                return None;
            }
            self.advance_row();
        }
    }
}

/// The admissible rational of least enumeration index inside `interval`.
/// Loops forever if no member is admissible, so callers must only ask for
/// predicates that are dense in the interval.
pub fn least_in(interval: &RatInterval, mut admissible: impl FnMut(&Rat) -> bool) -> Option<Rat> {
    RatWalk::new(interval.clone()).find(|r| admissible(r))
}
