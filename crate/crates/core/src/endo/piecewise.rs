//! Weakly increasing maps ℚ → ℚ that are affine between finitely many
//! breakpoints.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ratcore::{Endpoint, IntervalUnion, Rat, RatInterval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PiecewiseError {
    #[error("negative slope {0}")]
    NegativeSlope(Rat),
    #[error("pieces do not partition the rationals near {0}")]
    NotAPartition(String),
    #[error("map decreases at {0}")]
    NotMonotone(Rat),
    #[error("cannot parse piece {0:?}")]
    Parse(String),
    #[error("line {line}: {error}")]
    AtLine { line: usize, error: Box<PiecewiseError> },
}

/// `x ↦ slope·x + intercept`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Affine {
    pub slope: Rat,
    pub intercept: Rat,
}

impl Affine {
    pub fn new(slope: Rat, intercept: Rat) -> Self {
        Affine { slope, intercept }
    }

    pub fn constant(c: Rat) -> Self {
        Affine { slope: Rat::zero(), intercept: c }
    }

    pub fn identity() -> Self {
        Affine { slope: Rat::one(), intercept: Rat::zero() }
    }

    pub fn apply(&self, x: &Rat) -> Rat {
        &self.slope * x + &self.intercept
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Affine) -> Affine {
        Affine { slope: &self.slope * &inner.slope, intercept: self.apply(&inner.intercept) }
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intercept.is_negative() {
            write!(f, "{}*x - {}", self.slope, -&self.intercept)
        } else {
            write!(f, "{}*x + {}", self.slope, self.intercept)
        }
    }
}

impl FromStr for Affine {
    type Err = PiecewiseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PiecewiseError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some((slope, rest)) = t.split_once('x') else {
            let c: Rat = t.trim_start_matches('+').parse().map_err(|_| bad())?;
            return Ok(Affine::constant(c));
        };
        let slope: Rat = match slope.trim_end_matches('*') {
            "" | "+" => Rat::one(),
            "-" => -Rat::one(),
            v => v.parse().map_err(|_| bad())?,
        };
        let intercept = match rest.strip_prefix('+') {
            _ if rest.is_empty() => Rat::zero(),
            Some(v) => v.parse().map_err(|_| bad())?,
            None => rest.parse().map_err(|_| bad())?,
        };
        Ok(Affine { slope, intercept })
    }
}

/// One line of the text form: an interval and the affine law on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub interval: RatInterval,
    pub law: Affine,
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.interval, self.law)
    }
}

impl FromStr for Piece {
    type Err = PiecewiseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (interval, law) = match s.split_once(':') {
            None => (RatInterval::all(), s.parse::<Affine>()?),
            Some((i, l)) => (i.trim().parse().map_err(|_| PiecewiseError::Parse(s.to_string()))?, l.parse()?),
        };
        if law.slope.is_negative() {
            return Err(PiecewiseError::NegativeSlope(law.slope));
        }
        Ok(Piece { interval, law })
    }
}

/// A weakly increasing piecewise affine map in canonical form.
///
/// `segments[i]` is the law on the open gap between `breaks[i-1]` and
/// `breaks[i]`; `values[i]` is the value at `breaks[i]`. No breakpoint is
/// redundant, so two maps are equal exactly when their fields are.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiecewiseEndo {
    breaks: Vec<Rat>,
    values: Vec<Rat>,
    segments: Vec<Affine>,
}

/// Constant, injective and surjective flags of an endomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EndoClass {
    pub constant: bool,
    pub injective: bool,
    pub surjective: bool,
}

impl EndoClass {
    pub fn automorphism(&self) -> bool {
        self.injective && self.surjective
    }
}

impl fmt::Display for EndoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "constant={} injective={} surjective={}", self.constant, self.injective, self.surjective)
    }
}

fn sample_between(lo: Option<&Rat>, hi: Option<&Rat>) -> Rat {
    match (lo, hi) {
        (Some(a), Some(b)) => a.midpoint(b),
        (Some(a), None) => a + Rat::one(),
        (None, Some(b)) => b - Rat::one(),
        (None, None) => Rat::zero(),
    }
}

impl PiecewiseEndo {
    /// Builds from raw breakpoint data, checks monotonicity and removes
    /// redundant breakpoints.
    pub fn from_breakpoints(points: Vec<(Rat, Rat)>, segments: Vec<Affine>) -> Result<Self, PiecewiseError> {
        assert_eq!(points.len() + 1, segments.len(), "one more segment than breakpoints");
        assert!(points.windows(2).all(|w| w[0].0 < w[1].0), "breakpoints must increase");
        if let Some(s) = segments.iter().find(|s| s.slope.is_negative()) {
            return Err(PiecewiseError::NegativeSlope(s.slope.clone()));
        }
        for (i, (b, v)) in points.iter().enumerate() {
            if segments[i].apply(b) > *v || *v > segments[i + 1].apply(b) {
                return Err(PiecewiseError::NotMonotone(b.clone()));
            }
        }
        let mut breaks = Vec::new();
        let mut values = Vec::new();
        let mut segs = vec![segments[0].clone()];
        for ((b, v), next) in points.into_iter().zip(segments.into_iter().skip(1)) {
            let last = segs.last().unwrap();
            if *last == next && last.apply(&b) == v {
                continue;
            }
            breaks.push(b);
            values.push(v);
            segs.push(next);
        }
        Ok(PiecewiseEndo { breaks, values, segments: segs })
    }

    pub fn from_pieces(mut pieces: Vec<Piece>) -> Result<Self, PiecewiseError> {
        let key = |p: &Piece| match p.interval.lower() {
            Endpoint::Unbounded => (0, None, 0),
            Endpoint::Closed(a) => (1, Some(a.clone()), 0),
            Endpoint::Open(a) => (1, Some(a.clone()), 1),
        };
        pieces.sort_by_key(key);
        let first = pieces.first().ok_or_else(|| PiecewiseError::NotAPartition("-inf".into()))?;
        if first.interval.is_bounded_below() {
            return Err(PiecewiseError::NotAPartition(first.interval.to_string()));
        }
        let last = pieces.last().unwrap();
        if last.interval.is_bounded_above() {
            return Err(PiecewiseError::NotAPartition(last.interval.to_string()));
        }
        for w in pieces.windows(2) {
            let (u, l) = (w[0].interval.upper(), w[1].interval.lower());
            let ok = u.value().is_some() && u.value() == l.value() && u.is_closed() != l.is_closed();
            if !ok {
                return Err(PiecewiseError::NotAPartition(format!("{} / {}", w[0].interval, w[1].interval)));
            }
        }
        let mut points: Vec<(Rat, Rat)> = Vec::new();
        let mut segments = Vec::new();
        for p in &pieces {
            if p.interval.is_point() {
                let b = p.interval.lower().value().unwrap();
                points.push((b.clone(), p.law.apply(b)));
                continue;
            }
            if let Endpoint::Closed(a) = p.interval.lower() {
                points.push((a.clone(), p.law.apply(a)));
            }
            segments.push(p.law.clone());
            if let Endpoint::Closed(b) = p.interval.upper() {
                points.push((b.clone(), p.law.apply(b)));
            }
        }
        Self::from_breakpoints(points, segments)
    }

    /// The piecewise linear map through `points`, with slope 1 beyond the
    /// outermost points. Fails unless the points are weakly increasing in
    /// both coordinates.
    pub fn interpolate(points: &[(Rat, Rat)]) -> Result<Self, PiecewiseError> {
        let mut points = points.to_vec();
        points.sort();
        points.dedup();
        if let Some(w) = points.windows(2).find(|w| w[0].0 == w[1].0 || w[0].1 > w[1].1) {
            return Err(PiecewiseError::NotMonotone(w[1].0.clone()));
        }
        let Some((x0, y0)) = points.first() else {
            return Ok(Self::identity());
        };
        let mut segments = vec![Affine::new(Rat::one(), y0 - x0)];
        for w in points.windows(2) {
            let ((a, fa), (b, fb)) = (&w[0], &w[1]);
            let slope = (fb - fa) / (b - a);
            let c = fa - &slope * a;
            segments.push(Affine::new(slope, c));
        }
        let (xn, yn) = points.last().unwrap();
        segments.push(Affine::new(Rat::one(), yn - xn));
        Self::from_breakpoints(points, segments)
    }

    pub fn affine(law: Affine) -> Result<Self, PiecewiseError> {
        Self::from_breakpoints(vec![], vec![law])
    }

    pub fn identity() -> Self {
        PiecewiseEndo { breaks: vec![], values: vec![], segments: vec![Affine::identity()] }
    }

    pub fn constant(c: Rat) -> Self {
        PiecewiseEndo { breaks: vec![], values: vec![], segments: vec![Affine::constant(c)] }
    }

    pub fn shift(by: Rat) -> Self {
        PiecewiseEndo { breaks: vec![], values: vec![], segments: vec![Affine::new(Rat::one(), by)] }
    }

    pub fn breaks(&self) -> &[Rat] {
        &self.breaks
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn segments(&self) -> &[Affine] {
        &self.segments
    }

    /// The open gap `(breaks[i-1], breaks[i])` carrying `segments[i]`.
    pub fn segment_interval(&self, i: usize) -> RatInterval {
        let lo = i.checked_sub(1).map(|j| &self.breaks[j]);
        RatInterval::between(lo, self.breaks.get(i)).expect("breakpoints increase")
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        match self.breaks.binary_search(x) {
            Ok(i) => self.values[i].clone(),
            Err(i) => self.segments[i].apply(x),
        }
    }

    /// Pieces of the text form. A breakpoint joins the piece on its left
    /// when that law gives its value, else the piece on its right, else it
    /// is a piece of its own.
    pub fn pieces(&self) -> Vec<Piece> {
        let n = self.breaks.len();
        let mut lower: Vec<Endpoint> = vec![Endpoint::Unbounded; n + 1];
        let mut upper: Vec<Endpoint> = vec![Endpoint::Unbounded; n + 1];
        let mut singles: Vec<Option<Piece>> = vec![None; n];
        for i in 0..n {
            let (b, v) = (&self.breaks[i], &self.values[i]);
            upper[i] = Endpoint::Open(b.clone());
            lower[i + 1] = Endpoint::Open(b.clone());
            if self.segments[i].apply(b) == *v {
                upper[i] = Endpoint::Closed(b.clone());
            } else if self.segments[i + 1].apply(b) == *v {
                lower[i + 1] = Endpoint::Closed(b.clone());
            } else {
                singles[i] = Some(Piece { interval: RatInterval::point(b.clone()), law: Affine::constant(v.clone()) });
            }
        }
        let mut out = Vec::new();
        for i in 0..=n {
            let interval = RatInterval::new(lower[i].clone(), upper[i].clone()).expect("segment interval");
            out.push(Piece { interval, law: self.segments[i].clone() });
            if i < n {
                out.extend(singles[i].take());
            }
        }
        out
    }

    /// `self ∘ inner`, exactly.
    pub fn compose(&self, inner: &PiecewiseEndo) -> PiecewiseEndo {
        let mut cuts: Vec<Rat> = inner.breaks.clone();
        for (i, seg) in inner.segments.iter().enumerate() {
            if !seg.slope.is_positive() {
                continue;
            }
            let span = inner.segment_interval(i);
            for b in &self.breaks {
                let x = (b - &seg.intercept) / &seg.slope;
                if span.contains(&x) {
                    cuts.push(x);
                }
            }
        }
        cuts.sort();
        cuts.dedup();
        let points: Vec<(Rat, Rat)> = cuts.iter().map(|c| (c.clone(), self.eval(&inner.eval(c)))).collect();
        let segments = (0..=cuts.len())
            .map(|i| {
                let lo = i.checked_sub(1).map(|j| &cuts[j]);
                let m = sample_between(lo, cuts.get(i));
                let law = inner.law_at(&m);
                let y = law.apply(&m);
                match self.breaks.binary_search(&y) {
                    Ok(k) => Affine::constant(self.values[k].clone()),
                    Err(k) => self.segments[k].after(&law),
                }
            })
            .collect();
        Self::from_breakpoints(points, segments).expect("composite of increasing maps is increasing")
    }

    /// Affine law of the segment containing a non-breakpoint `x`.
    fn law_at(&self, x: &Rat) -> Affine {
        match self.breaks.binary_search(x) {
            Ok(i) => Affine::constant(self.values[i].clone()),
            Err(i) => self.segments[i].clone(),
        }
    }

    pub fn image(&self) -> IntervalUnion {
        let segs = (0..self.segments.len()).map(|i| {
            let s = &self.segments[i];
            if s.slope.is_positive() {
                self.segment_interval(i).map_affine(&s.slope, &s.intercept)
            } else {
                RatInterval::point(s.intercept.clone())
            }
        });
        let points = self.values.iter().map(|v| RatInterval::point(v.clone()));
        segs.chain(points).collect()
    }

    /// All `x` with `f(x) = q`; convex because `f` is monotone.
    pub fn preimage(&self, q: &Rat) -> Option<RatInterval> {
        let mut parts = Vec::new();
        for (i, s) in self.segments.iter().enumerate() {
            let span = self.segment_interval(i);
            if s.slope.is_positive() {
                let x = (q - &s.intercept) / &s.slope;
                if span.contains(&x) {
                    parts.push(RatInterval::point(x));
                }
            } else if s.intercept == *q {
                parts.push(span);
            }
        }
        for (b, v) in self.breaks.iter().zip(&self.values) {
            if v == q {
                parts.push(RatInterval::point(b.clone()));
            }
        }
        let u = IntervalUnion::new(parts);
        assert!(u.parts().len() <= 1, "preimage of a monotone map is convex");
        u.parts().first().cloned()
    }

    pub fn classify(&self) -> EndoClass {
        let constant = self.breaks.is_empty() && self.segments[0].slope.is_zero();
        let injective = self.segments.iter().all(|s| s.slope.is_positive());
        EndoClass { constant, injective, surjective: self.image().is_all() }
    }

    /// Values at which the map is not locally an increasing affine
    /// bijection: breakpoint values, one-sided limits there, and plateaus.
    pub fn critical_values(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = self.values.clone();
        for (i, b) in self.breaks.iter().enumerate() {
            out.push(self.segments[i].apply(b));
            out.push(self.segments[i + 1].apply(b));
        }
        out.extend(self.segments.iter().filter(|s| s.slope.is_zero()).map(|s| s.intercept.clone()));
        out.sort();
        out.dedup();
        out
    }

    /// The map `x ↦ choose(outer(x), g⁻¹(outer(x)))` where `g` is `self`;
    /// `choose` picks a point of the given non-empty preimage. Needs
    /// `image(outer) ⊆ image(self)` and a monotone choice.
    pub fn pull_back(
        &self,
        outer: &PiecewiseEndo,
        mut choose: impl FnMut(&Rat, &RatInterval) -> Rat,
    ) -> Result<PiecewiseEndo, PiecewiseError> {
        let mut cuts: Vec<Rat> = outer.breaks.clone();
        for y in self.critical_values() {
            if let Some(p) = outer.preimage(&y) {
                cuts.extend(p.lower().value().cloned());
                cuts.extend(p.upper().value().cloned());
            }
        }
        cuts.sort();
        cuts.dedup();
        let mut at = |x: &Rat| {
            let y = outer.eval(x);
            let pre = self.preimage(&y).expect("value lies in the image");
            choose(&y, &pre)
        };
        let points: Vec<(Rat, Rat)> = cuts.iter().map(|c| (c.clone(), at(c))).collect();
        let mut segments = Vec::new();
        for i in 0..=cuts.len() {
            let lo = i.checked_sub(1).map(|j| &cuts[j]);
            let m = sample_between(lo, cuts.get(i));
            let law = outer.law_at(&m);
            let y = law.apply(&m);
            let pre = self.preimage(&y).expect("value lies in the image");
            let seg = if pre.is_point() {
                let x0 = pre.lower().value().unwrap().clone();
                let g = self.law_at(&x0);
                if g.slope.is_positive() {
                    let inv = Affine::new(g.slope.recip(), -(&g.intercept / &g.slope));
                    inv.after(&law)
                } else {
                    Affine::constant(x0)
                }
            } else {
                Affine::constant(choose(&y, &pre))
            };
            segments.push(seg);
        }
        Self::from_breakpoints(points, segments)
    }
}

impl fmt::Display for PiecewiseEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.pieces().iter().map(|p| p.to_string()).collect();
        f.write_str(&lines.join("\n"))
    }
}

impl FromStr for PiecewiseEndo {
    type Err = PiecewiseError;

    /// One piece per line or per `;`. Blank lines and `#` comments are
    /// skipped. A law with no interval applies everywhere.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut pieces = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for piece in line.split(';').map(str::trim).filter(|p| !p.is_empty()) {
                let piece = piece
                    .parse::<Piece>()
                    .map_err(|e| PiecewiseError::AtLine { line: i + 1, error: Box::new(e) })?;
                pieces.push(piece);
            }
        }
        Self::from_pieces(pieces)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pw(s: &str) -> PiecewiseEndo {
        s.parse().unwrap()
    }

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn jump_map_values() {
        let f = pw("(-inf,0) : 1*x + 0; [0,+inf) : 1*x + 1");
        assert_eq!(f.eval(&r("-1")), r("-1"));
        assert_eq!(f.eval(&r("0")), r("1"));
        assert_eq!(f.to_string(), "(-inf,0) : 1*x + 0\n[0,+inf) : 1*x + 1");
    }

    #[test]
    fn canonical_form_merges() {
        let a = pw("(-inf,2] : 1*x + 0; (2,+inf) : x");
        assert_eq!(a, PiecewiseEndo::identity());
        let b = pw("(-inf,0) : 0*x + 0; [0,0] : 0*x + 0; (0,+inf) : 0");
        assert_eq!(b, PiecewiseEndo::constant(Rat::zero()));
        let c = pw("(-inf,1) : 0*x + 0; [1,+inf) : 0*x + 1");
        assert_eq!(c.to_string(), "(-inf,1) : 0*x + 0\n[1,+inf) : 0*x + 1");
        let d = pw("(-inf,1) : 0*x + 0; [1,1] : 0*x + 1/2; (1,+inf) : 0*x + 1");
        assert_eq!(d.pieces().len(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        assert!("(-inf,0) : x; (0,+inf) : x".parse::<PiecewiseEndo>().is_err());
        assert!("(-inf,0) : x; [0,+inf) : x - 1".parse::<PiecewiseEndo>().is_err());
        assert!("(-inf,+inf) : -1*x + 0".parse::<PiecewiseEndo>().is_err());
    }

    #[test]
    fn composition_is_exact() {
        let f = pw("(-inf,0) : x; [0,+inf) : x + 1");
        let g = pw("(-inf,0) : x; [0,1] : 0; (1,+inf) : x - 1");
        assert_eq!(g.compose(&f), pw("(-inf,0) : x; [0,+inf) : x"));
        let h = f.compose(&g);
        for n in 0..300 {
            let x = crate::ratcore::enumerate(n);
            assert_eq!(h.eval(&x), f.eval(&g.eval(&x)));
        }
    }

    #[test]
    fn image_and_preimage() {
        let f = pw("(-inf,0) : x; [0,+inf) : x + 1");
        assert_eq!(f.image().complement().to_string(), "[0,1)");
        let g = pw("(-inf,0) : x; [0,1] : 0; (1,+inf) : x - 1");
        assert_eq!(g.preimage(&Rat::zero()), Some(r_iv("[0,1]")));
        assert_eq!(g.preimage(&r("5")), Some(RatInterval::point(r("6"))));
        assert_eq!(f.preimage(&r("1/2")), None);
    }

    fn r_iv(s: &str) -> RatInterval {
        s.parse().unwrap()
    }
}
