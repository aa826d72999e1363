use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::endo::{GeneralEndo, LazyEmbedding, PiecewiseEndo};
use crate::lazyiso::{FullQ, IndexOrder, IndexPt, IntervalOrder, LazyIso};
use crate::ratcore::{least_in, Colour, Endpoint, IntervalUnion, Rat, RatInterval};

use super::{GammaError, GammaGeneric, Variant};

/// Name of a class of a certified embedding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassKey {
    /// A class of a base generic, by its index.
    Index(IndexPt),
    /// The blue class made of everything lying over the `n`th gap of a
    /// restricting image.
    Gap(usize),
}

impl ClassKey {
    pub fn colour(&self) -> Colour {
        match self {
            ClassKey::Index(p) => p.colour(),
            ClassKey::Gap(_) => Colour::Blue,
        }
    }
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKey::Index(p) => write!(f, "class {p}"),
            ClassKey::Gap(n) => write!(f, "gap class {n}"),
        }
    }
}

/// An injective map together with its exact image.
#[derive(Clone)]
pub struct Embedding {
    map: GeneralEndo,
    image: IntervalUnion,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({} onto {})", self.map, self.image)
    }
}

impl Embedding {
    pub fn piecewise(f: PiecewiseEndo) -> Result<Self, GammaError> {
        if !f.classify().injective {
            return Err(GammaError::NotInjective);
        }
        let image = f.image();
        Ok(Embedding { map: f.into(), image })
    }

    /// A lazily built isomorphism of ℚ onto an interval open at both ends.
    pub fn onto_interval(interval: RatInterval) -> Result<Self, GammaError> {
        let order = IntervalOrder::new(interval.clone()).ok_or(GammaError::NotOpen(interval.to_string()))?;
        let iso = LazyIso::build(FullQ, order, [], vec![]).expect("no seed");
        Ok(Embedding { map: GeneralEndo::lazy(LazyEmbedding::new(iso)), image: interval.into() })
    }

    pub fn identity() -> Self {
        Embedding { map: PiecewiseEndo::identity().into(), image: IntervalUnion::all() }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.map.eval(x)
    }

    pub fn map(&self) -> &GeneralEndo {
        &self.map
    }

    pub fn image(&self) -> &IntervalUnion {
        &self.image
    }
}

/// Where a rational, or an irrational cut, sits relative to an image.
enum Place {
    Inside,
    Gap(usize),
}

/// A certified generic embedding: the map together with an exact
/// description of its classes.
pub enum Cert {
    Base(Arc<GammaGeneric>),
    /// `base ∘ embedding`.
    Restricted { base: Arc<GammaGeneric>, embedding: Embedding, gaps: IntervalUnion },
    /// `outer ∘ inner`. Every class of `outer` is absorbed into a class of
    /// `inner`; blue classes of `outer` are pinned into one on first use.
    Composite { outer: Arc<GammaGeneric>, inner: Box<Cert> },
}

impl fmt::Debug for Cert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl Cert {
    pub fn restricted(base: Arc<GammaGeneric>, embedding: Embedding) -> Self {
        let gaps = embedding.image().complement();
        Cert::Restricted { base, embedding, gaps }
    }

    pub fn describe(&self) -> String {
        match self {
            Cert::Base(g) => format!("generic({})", g.variant()),
            Cert::Restricted { base, embedding, .. } => {
                format!("generic({}) restricted to {}", base.variant(), embedding.image())
            }
            Cert::Composite { outer, inner } => format!("generic({}) o {}", outer.variant(), inner.describe()),
        }
    }

    pub fn variant(&self) -> Variant {
        match self {
            Cert::Base(g) => g.variant(),
            Cert::Restricted { base, gaps, .. } => {
                let v = base.variant();
                let below = gaps.parts().first().is_some_and(|p| !p.is_bounded_below());
                let above = gaps.parts().last().is_some_and(|p| !p.is_bounded_above());
                Variant::from_bounds(v.low() || below, v.high() || above)
            }
            Cert::Composite { outer, .. } => outer.variant(),
        }
    }

    /// The certified embedding itself.
    pub fn eval(&self, x: &Rat) -> Rat {
        match self {
            Cert::Base(g) => g.eval(x),
            Cert::Restricted { base, embedding, .. } => base.eval(&embedding.eval(x)),
            Cert::Composite { outer, inner } => outer.eval(&inner.eval(x)),
        }
    }

    pub fn class_of(&self, x: &Rat) -> ClassKey {
        match self {
            Cert::Base(g) => ClassKey::Index(g.class_of(x)),
            Cert::Restricted { base, gaps, .. } => {
                let p = base.class_of(x);
                let place = match &p {
                    IndexPt::Fin(q) if p.colour() == Colour::Red => {
                        let w = base.red_source(q);
                        place_of(gaps, |e| w.cmp(e))
                    }
                    IndexPt::Fin(q) => place_of(gaps, |e| q.cmp(&base.red_index(e))),
                    IndexPt::Low => place_of(gaps, |_| Ordering::Less),
                    IndexPt::High => place_of(gaps, |_| Ordering::Greater),
                };
                match place {
                    Place::Inside => ClassKey::Index(p),
                    Place::Gap(i) => gap_key(base, gaps, i),
                }
            }
            Cert::Composite { inner, .. } => inner.class_of(&self.shadow(x)),
        }
    }

    /// Class, colour and, for red classes, the one image point in it.
    pub fn class_info(&self, x: &Rat) -> (ClassKey, Colour, Option<Rat>) {
        let key = self.class_of(x);
        let colour = key.colour();
        let rep = self.representative(&key);
        (key, colour, rep)
    }

    pub fn representative(&self, key: &ClassKey) -> Option<Rat> {
        match (self, key) {
            (_, ClassKey::Gap(_)) => None,
            (Cert::Base(g) | Cert::Restricted { base: g, .. }, ClassKey::Index(p)) => g.representative(p),
            (Cert::Composite { outer, inner }, _) => inner.representative(key).map(|r| outer.eval(&r)),
        }
    }

    /// A point of a blue class lying strictly between the classes of `x`
    /// and `y`, or `None` when they share a class.
    pub fn blue_between(&self, x: &Rat, y: &Rat) -> Option<Rat> {
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        let (kx, ky) = (self.class_of(x), self.class_of(y));
        if kx == ky {
            return None;
        }
        match self {
            Cert::Base(g) => {
                let b = g.blue_index_between(&g.class_of(x), &g.class_of(y))?;
                Some(g.point(&crate::lazyiso::Lex(b, Rat::zero())))
            }
            Cert::Restricted { base, .. } => {
                let (px, py) = (base.class_of(x), base.class_of(y));
                let order: IndexOrder = base.index_order();
                use crate::lazyiso::Walkable;
                let found = order.walk_between(Some(&px), Some(&py)).filter(|b| b.colour() == Colour::Blue).find_map(|b| {
                    let z = base.point(&crate::lazyiso::Lex(b, Rat::zero()));
                    let k = self.class_of(&z);
                    (k.colour() == Colour::Blue && k != kx && k != ky).then_some(z)
                });
                found
            }
            Cert::Composite { outer, inner } => {
                inner.blue_between(&self.shadow(x), &self.shadow(y)).map(|z| outer.eval(&z))
            }
        }
    }

    /// A point of the least blue class, for variants that have one.
    pub fn low_point(&self) -> Option<Rat> {
        match self {
            Cert::Base(g) => g.low_point(),
            Cert::Restricted { base, gaps, .. } => match gaps.parts().first() {
                Some(k) if !k.is_bounded_below() => {
                    let w = k.upper().value().expect("a gap is not all of Q") - Rat::one();
                    Some(base.eval(&w))
                }
                _ => base.low_point(),
            },
            Cert::Composite { outer, .. } => outer.low_point(),
        }
    }

    pub fn high_point(&self) -> Option<Rat> {
        match self {
            Cert::Base(g) => g.high_point(),
            Cert::Restricted { base, gaps, .. } => match gaps.parts().last() {
                Some(k) if !k.is_bounded_above() => {
                    let w = k.lower().value().expect("a gap is not all of Q") + Rat::one();
                    Some(base.eval(&w))
                }
                _ => base.high_point(),
            },
            Cert::Composite { outer, .. } => outer.high_point(),
        }
    }

    /// A point strictly above `w`, below `bound`, in the class of `w`.
    pub fn row_above(&self, w: &Rat, bound: Option<&Rat>) -> Rat {
        match self {
            Cert::Base(g) | Cert::Restricted { base: g, .. } | Cert::Composite { outer: g, .. } => {
                g.row_above(w, bound)
            }
        }
    }

    /// For a composite, a point in the inner coordinate space whose inner
    /// class is the composite class of `x`.
    fn shadow(&self, x: &Rat) -> Rat {
        let Cert::Composite { outer, inner } = self else {
            return x.clone();
        };
        match outer.class_of(x) {
            IndexPt::Fin(q) if crate::ratcore::colour(&q) == Colour::Red => outer.red_source(&q),
            IndexPt::Fin(q) => pin_blue(outer, inner, &q),
            IndexPt::Low => inner.low_point().expect("variants agree"),
            IndexPt::High => inner.high_point().expect("variants agree"),
        }
    }

    pub fn memo_dump(&self) -> Vec<String> {
        match self {
            Cert::Base(g) | Cert::Restricted { base: g, .. } => g.memo_dump(),
            Cert::Composite { outer, inner } => {
                let mut v = outer.memo_dump();
                v.extend(inner.memo_dump());
                v
            }
        }
    }
}

/// `cmp(e)` orders the located object against a rational `e`.
fn place_of(gaps: &IntervalUnion, cmp: impl Fn(&Rat) -> Ordering) -> Place {
    for (i, k) in gaps.parts().iter().enumerate() {
        let above_lower = match k.lower() {
            Endpoint::Unbounded => true,
            Endpoint::Open(a) => cmp(a) == Ordering::Greater,
            Endpoint::Closed(a) => cmp(a) != Ordering::Less,
        };
        let below_upper = match k.upper() {
            Endpoint::Unbounded => true,
            Endpoint::Open(b) => cmp(b) == Ordering::Less,
            Endpoint::Closed(b) => cmp(b) != Ordering::Greater,
        };
        if above_lower && below_upper {
            return Place::Gap(i);
        }
    }
    Place::Inside
}

/// A gap joins the class of an adjacent image point when the image
/// contains that endpoint; otherwise it is a blue class of its own.
fn gap_key(base: &GammaGeneric, gaps: &IntervalUnion, i: usize) -> ClassKey {
    let k = &gaps.parts()[i];
    let joined = match (k.lower(), k.upper()) {
        (Endpoint::Open(a), _) => Some(a),
        (_, Endpoint::Open(b)) => Some(b),
        _ => None,
    };
    match joined {
        Some(e) => ClassKey::Index(IndexPt::Fin(base.red_index(e))),
        None => ClassKey::Gap(i),
    }
}

/// Resolves the blue class `q` of `outer` to a point of the inner space by
/// fixing the red indices on either side of `q` to sources that share an
/// inner class.
fn pin_blue(outer: &GammaGeneric, inner: &Cert, q: &Rat) -> Rat {
    loop {
        let (lo, hi) = outer.red_neighbours(q);
        let (q_lo, w_lo) = lo.unzip();
        let (q_hi, w_hi) = hi.unzip();
        if let (Some(a), Some(b)) = (&w_lo, &w_hi) {
            if inner.class_of(a) == inner.class_of(b) {
                return a.clone();
            }
        }
        let span = RatInterval::between(w_lo.as_ref(), w_hi.as_ref()).expect("memo is monotone");
        let w_a = least_in(&span, |_| true).expect("open interval is non-empty");
        let w_b = inner.row_above(&w_a, w_hi.as_ref());
        let red = |x: &Rat| crate::ratcore::colour(x) == Colour::Red;
        let below = RatInterval::between(q_lo.as_ref(), Some(q)).expect("ordered");
        let above = RatInterval::between(Some(q), q_hi.as_ref()).expect("ordered");
        let q_a = least_in(&below, red).expect("reds are dense");
        let q_b = least_in(&above, red).expect("reds are dense");
        if outer.pin_red(w_a.clone(), q_a) && outer.pin_red(w_b, q_b) {
            return w_a;
        }
    }
}

/// `outer ∘ inner` with its certificate.
pub fn compose_certified(outer: &Arc<GammaGeneric>, inner: Cert) -> Result<Cert, GammaError> {
    if outer.variant() != inner.variant() {
        return Err(GammaError::VariantMismatch { outer: outer.variant(), inner: inner.variant() });
    }
    Ok(Cert::Composite { outer: Arc::clone(outer), inner: Box::new(inner) })
}

/// A generic `g` for `f` such that `g ∘ f` is generic too, both certified.
pub struct Absorbed {
    pub variant: Variant,
    pub g: Cert,
    pub gf: Cert,
}

/// Builds `g = g2 ∘ g1` from two fresh generics of the variant that matches
/// the bounds of `image(f)`.
pub fn absorb(f: Embedding) -> Absorbed {
    let image = f.image();
    let variant = Variant::from_bounds(image.is_bounded_below(), image.is_bounded_above());
    let g1 = GammaGeneric::new(variant);
    let g2 = GammaGeneric::new(variant);
    let g = compose_certified(&g2, Cert::Base(Arc::clone(&g1))).expect("same variant");
    let gf = compose_certified(&g2, Cert::restricted(g1, f)).expect("variant follows the image");
    Absorbed { variant, g, gf }
}

/// Outcome of sampling a certificate.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CertReport {
    pub image_points: usize,
    pub pairs: usize,
    pub failures: Vec<String>,
}

impl CertReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks on `sources` that image points fall in distinct red classes, that
/// up to `max_pairs` pairs of them have a blue class strictly between, and
/// that the endpoint classes match the variant.
pub fn check_certificate(cert: &Cert, sources: &[Rat], max_pairs: usize) -> CertReport {
    let mut report = CertReport::default();
    let ys: Vec<Rat> = sources.iter().map(|x| cert.eval(x)).collect();
    let keys: Vec<ClassKey> = ys.iter().map(|y| cert.class_of(y)).collect();
    report.image_points = ys.len();
    for (i, (y, k)) in ys.iter().zip(&keys).enumerate() {
        if k.colour() != Colour::Red {
            report.failures.push(format!("image point {y} lies in blue {k}"));
        }
        if keys[..i].contains(k) {
            report.failures.push(format!("image point {y} shares {k}"));
        }
    }
    'pairs: for i in 0..ys.len() {
        for j in i + 1..ys.len() {
            if report.pairs >= max_pairs {
                break 'pairs;
            }
            report.pairs += 1;
            let (a, b) = if ys[i] < ys[j] { (&ys[i], &ys[j]) } else { (&ys[j], &ys[i]) };
            match cert.blue_between(a, b) {
                None => report.failures.push(format!("no blue class between {a} and {b}")),
                Some(z) => {
                    let k = cert.class_of(&z);
                    if !(a < &z && &z < b) || k.colour() != Colour::Blue {
                        report.failures.push(format!("bad blue witness {z} between {a} and {b}"));
                    }
                }
            }
        }
    }
    let v = cert.variant();
    for (want, point, above) in [(v.low(), cert.low_point(), false), (v.high(), cert.high_point(), true)] {
        match (want, point) {
            (false, None) => {}
            (true, Some(p)) => {
                if cert.class_of(&p).colour() != Colour::Blue {
                    report.failures.push(format!("endpoint class at {p} is not blue"));
                }
                if ys.iter().any(|y| if above { *y >= p } else { *y <= p }) {
                    report.failures.push(format!("image not bounded by the endpoint class at {p}"));
                }
            }
            (want, point) => report.failures.push(format!("endpoint class mismatch: want {want}, got {point:?}")),
        }
    }
    report
}
