//! The pointwise topology on maps of ℚ, metrised by `d(f, g) = 2^-n` for the
//! least `n` at which `f` and `g` differ on the `n`-th enumerated argument.
//! Distances are computed to a fixed depth.

use std::cmp::{Ordering, Reverse};
use std::fmt;

use num_integer::Roots;

use crate::endo::{GeneralEndo, LazyEmbedding, PiecewiseEndo};
use crate::lazyiso::{FullQ, IsoError, LazyIso};
use crate::ratcore::{enumerate, Rat};

/// Cantor pairing on machine integers.
pub fn pair(i: u128, j: u128) -> u128 {
    let s = i + j;
    s * (s + 1) / 2 + j
}

pub fn unpair(z: u128) -> (u128, u128) {
    let w = ((8 * z + 1).sqrt() - 1) / 2;
    let j = z - w * (w + 1) / 2;
    (w - j, j)
}

/// Position of the argument tuple with enumeration indices `idx`:
/// `(i₁, rest) ↦ pair(i₁, position(rest))`. Increasing in every coordinate.
pub fn tuple_position(idx: &[u128]) -> u128 {
    match idx {
        [] => 0,
        [i] => *i,
        [i, rest @ ..] => pair(*i, tuple_position(rest)),
    }
}

pub fn tuple_indices(arity: usize, mut z: u128) -> Vec<u128> {
    let mut out = Vec::with_capacity(arity);
    for _ in 1..arity {
        let (i, rest) = unpair(z);
        out.push(i);
        z = rest;
    }
    out.push(z);
    out
}

/// `2^-n` for the first differing argument `n`, or no difference found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distance {
    Differ(usize),
    /// No difference among the first `depth` arguments.
    Indistinguishable { depth: usize },
    /// Decided equal symbolically.
    Equal,
}

impl Distance {
    pub fn exponent(&self) -> Option<usize> {
        match self {
            Distance::Differ(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exponent().is_none()
    }

    /// `self ≤ 2^-m`.
    pub fn within(&self, m: usize) -> bool {
        self.exponent().is_none_or(|n| n >= m)
    }

    /// Compares the values `2^-n`; all zero distances tie.
    pub fn cmp_value(&self, other: &Distance) -> Ordering {
        let key = |d: &Distance| match d {
            Distance::Differ(n) => (true, Reverse(*n)),
            _ => (false, Reverse(0)),
        };
        key(self).cmp(&key(other))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Differ(0) => write!(f, "1"),
            Distance::Differ(n) => write!(f, "2^-{n}"),
            Distance::Indistinguishable { depth } => write!(f, "0 (indistinguishable at depth {depth})"),
            Distance::Equal => write!(f, "0"),
        }
    }
}

/// The metric on `k`-ary maps, truncated at `depth` argument tuples.
#[derive(Debug, Clone)]
pub struct UltraMetric {
    arity: usize,
    probes: Vec<Vec<Rat>>,
}

pub const DEFAULT_DEPTH: usize = 2048;

impl UltraMetric {
    pub fn new(arity: usize, depth: usize) -> Self {
        assert!(arity >= 1, "arity is at least 1");
        let probes = (0..depth as u128)
            .map(|z| tuple_indices(arity, z).into_iter().map(|i| enumerate(i as u64)).collect())
            .collect();
        UltraMetric { arity, probes }
    }

    pub fn unary(depth: usize) -> Self {
        Self::new(1, depth)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn depth(&self) -> usize {
        self.probes.len()
    }

    pub fn probe(&self, n: usize) -> &[Rat] {
        &self.probes[n]
    }

    pub fn dist_by(&self, f: impl Fn(&[Rat]) -> Rat, g: impl Fn(&[Rat]) -> Rat) -> Distance {
        match self.probes.iter().position(|t| f(t) != g(t)) {
            Some(n) => Distance::Differ(n),
            None => Distance::Indistinguishable { depth: self.depth() },
        }
    }

    /// Unary distance; piecewise pairs are compared symbolically when the
    /// probes find no difference.
    pub fn dist(&self, f: &GeneralEndo, g: &GeneralEndo) -> Distance {
        assert_eq!(self.arity, 1, "unary metric");
        match self.dist_by(|t| f.eval(&t[0]), |t| g.eval(&t[0])) {
            Distance::Indistinguishable { .. } if same_piecewise(f, g) => Distance::Equal,
            d => d,
        }
    }
}

fn same_piecewise(f: &GeneralEndo, g: &GeneralEndo) -> bool {
    matches!((f.as_piecewise(), g.as_piecewise()), (Some(a), Some(b)) if a == b)
}

/// `f ∈ B_qr`, the basic set of maps sending `q` to `r`.
pub fn subbasic_contains(q: &Rat, r: &Rat, f: &GeneralEndo) -> bool {
    f.eval(q) == *r
}

/// Distances of a sequence to a proposed limit, with the first index from
/// which every tabulated distance is within `2^-m`, per `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceTable {
    pub distances: Vec<Distance>,
    pub thresholds: Vec<(usize, Option<usize>)>,
}

pub fn check_convergence(
    metric: &UltraMetric,
    seq: impl Fn(usize) -> GeneralEndo,
    limit: &GeneralEndo,
    terms: usize,
) -> ConvergenceTable {
    let distances: Vec<Distance> = (0..terms).map(|n| metric.dist(&seq(n), limit)).collect();
    let max_m = usize::BITS as usize - metric.depth().leading_zeros() as usize;
    let thresholds = (0..=max_m)
        .map(|m| {
            let from = (0..=distances.len()).find(|&n| distances[n..].iter().all(|d| d.within(m)));
            (m, from.filter(|&n| n < distances.len()))
        })
        .collect();
    ConvergenceTable { distances, thresholds }
}

/// An automorphism agreeing with the embedding `g` on `e(0), …, e(n)`, so
/// within `2^-(n+1)` of it.
pub fn density_witness(g: &GeneralEndo, n: u64) -> Result<GeneralEndo, IsoError> {
    let seed: Vec<(Rat, Rat)> = (0..=n).map(|i| (enumerate(i), g.eval(&enumerate(i)))).collect();
    let iso = LazyIso::build(FullQ, FullQ, seed, vec![])?;
    Ok(GeneralEndo::lazy(LazyEmbedding::new(iso)))
}

/// A piecewise linear map agreeing with `f` on `e(0), …, e(n)` and, where
/// monotonicity allows, differing from it at `e(n+1)`.
pub fn approximant(f: &PiecewiseEndo, n: u64) -> PiecewiseEndo {
    let mut points: Vec<(Rat, Rat)> = (0..=n).map(|i| (enumerate(i), f.eval(&enumerate(i)))).collect();
    points.sort();
    let x = enumerate(n + 1);
    let fx = f.eval(&x);
    let below = points.iter().rev().find(|(p, _)| *p < x).map(|(_, v)| v);
    let above = points.iter().find(|(p, _)| *p > x).map(|(_, v)| v);
    let moved = match (below, above) {
        (_, None) => &fx + Rat::one(),
        (_, Some(r)) if fx < *r => fx.midpoint(r),
        (None, _) => &fx - Rat::one(),
        (Some(l), _) if *l < fx => l.midpoint(&fx),
        _ => fx,
    };
    points.push((x, moved));
    PiecewiseEndo::interpolate(&points).expect("values kept monotone")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_round_trips() {
        for z in 0..500u128 {
            for k in 1..4 {
                assert_eq!(tuple_position(&tuple_indices(k, z)), z);
            }
        }
        assert_eq!(tuple_indices(2, 0), vec![0, 0]);
    }

    #[test]
    fn distance_examples() {
        let m = UltraMetric::unary(64);
        let pw = |s: &str| GeneralEndo::Piecewise(s.parse().unwrap());
        assert_eq!(m.dist(&pw("x"), &pw("x")), Distance::Equal);
        assert_eq!(m.dist(&pw("0"), &pw("1")), Distance::Differ(0));
        assert_eq!(m.dist(&pw("x"), &pw("x + 1")), Distance::Differ(0));
        assert_eq!(Distance::Differ(0).to_string(), "1");
        assert_eq!(Distance::Differ(3).cmp_value(&Distance::Differ(1)), Ordering::Less);
        assert_eq!(Distance::Equal.cmp_value(&Distance::Differ(40)), Ordering::Less);
    }
}
