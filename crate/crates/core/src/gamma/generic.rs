use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use crate::endo::{FnMap, GeneralEndo};
use crate::lazyiso::{DenseOrder, FullQ, IndexOrder, IndexPt, LazyIso, Lex, LexProduct, RedPoints};
use crate::ratcore::{Colour, Rat};

/// Which blue endpoint classes the class order carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// No endpoints: the image is coterminal.
    Core,
    /// A greatest blue class: the image is bounded above.
    Plus,
    /// A least blue class: the image is bounded below.
    Minus,
    /// Both.
    Pm,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Core, Variant::Plus, Variant::Minus, Variant::Pm];

    pub fn from_bounds(bounded_below: bool, bounded_above: bool) -> Self {
        match (bounded_below, bounded_above) {
            (false, false) => Variant::Core,
            (false, true) => Variant::Plus,
            (true, false) => Variant::Minus,
            (true, true) => Variant::Pm,
        }
    }

    pub fn low(self) -> bool {
        matches!(self, Variant::Minus | Variant::Pm)
    }

    pub fn high(self) -> bool {
        matches!(self, Variant::Plus | Variant::Pm)
    }

    pub fn index_order(self) -> IndexOrder {
        IndexOrder { low: self.low(), high: self.high() }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Core => "core",
            Variant::Plus => "plus",
            Variant::Minus => "minus",
            Variant::Pm => "pm",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "core" => Ok(Variant::Core),
            "plus" => Ok(Variant::Plus),
            "minus" => Ok(Variant::Minus),
            "pm" => Ok(Variant::Pm),
            other => Err(format!("unknown variant {other:?}")),
        }
    }
}

pub type Coords = Lex<IndexPt, Rat>;
type ClassIso = LazyIso<FullQ, LexProduct<IndexOrder, FullQ>>;
/// Memo pairs `(target, source)` on either side of a target point.
type Neighbours = (Option<(Rat, Rat)>, Option<(Rat, Rat)>);

/// A generic embedding with its class decomposition.
///
/// `classes` identifies ℚ with the class order times ℚ, so the class of `x`
/// is the first coordinate of its image. `reds` matches ℚ with the red
/// class indices, and `x` is sent to the point `(reds(x), 0)` of its red
/// class. Blue classes and the adjoined endpoint classes receive nothing.
pub struct GammaGeneric {
    variant: Variant,
    classes: Mutex<ClassIso>,
    reds: Mutex<LazyIso<FullQ, RedPoints>>,
}

impl fmt::Debug for GammaGeneric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GammaGeneric").field("variant", &self.variant).finish_non_exhaustive()
    }
}

impl GammaGeneric {
    pub fn new(variant: Variant) -> Arc<Self> {
        let product = LexProduct::new(variant.index_order(), FullQ);
        let classes = LazyIso::build(FullQ, product, [], vec![]).expect("product has no endpoints");
        let reds = LazyIso::build(FullQ, RedPoints, [], vec![]).expect("no seed");
        Arc::new(GammaGeneric { variant, classes: Mutex::new(classes), reds: Mutex::new(reds) })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn index_order(&self) -> IndexOrder {
        self.variant.index_order()
    }

    pub fn coords(&self, x: &Rat) -> Coords {
        self.classes.lock().expect("memo lock").eval_fwd(x).expect("class order is dense")
    }

    pub fn point(&self, c: &Coords) -> Rat {
        self.classes.lock().expect("memo lock").eval_bwd(c).expect("class order is dense")
    }

    /// The red class index matched with `w`.
    pub fn red_index(&self, w: &Rat) -> Rat {
        self.reds.lock().expect("memo lock").eval_fwd(w).expect("red points are dense")
    }

    /// The rational matched with the red index `q`.
    pub fn red_source(&self, q: &Rat) -> Rat {
        self.reds.lock().expect("memo lock").eval_bwd(q).expect("red points are dense")
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let q = self.red_index(x);
        self.point(&Lex(IndexPt::Fin(q), Rat::zero()))
    }

    /// `g⁻¹(y)` for image points, `None` elsewhere.
    pub fn inverse(&self, y: &Rat) -> Option<Rat> {
        match self.coords(y) {
            Lex(IndexPt::Fin(q), z) if z.is_zero() && crate::ratcore::colour(&q) == Colour::Red => {
                Some(self.red_source(&q))
            }
            _ => None,
        }
    }

    pub fn in_image(&self, y: &Rat) -> bool {
        self.inverse(y).is_some()
    }

    pub fn class_of(&self, x: &Rat) -> IndexPt {
        self.coords(x).0
    }

    /// The image point of a red class.
    pub fn representative(&self, p: &IndexPt) -> Option<Rat> {
        (p.colour() == Colour::Red).then(|| self.point(&Lex(p.clone(), Rat::zero())))
    }

    /// The blue index of least enumeration index strictly between two
    /// class indices.
    pub fn blue_index_between(&self, p: &IndexPt, q: &IndexPt) -> Option<IndexPt> {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        if lo == hi {
            return None;
        }
        self.index_order().least_between(Some(lo), Some(hi), &mut |c| c.colour() == Colour::Blue)
    }

    /// A point of the least blue class, when there is one.
    pub fn low_point(&self) -> Option<Rat> {
        self.variant.low().then(|| self.point(&Lex(IndexPt::Low, Rat::zero())))
    }

    pub fn high_point(&self) -> Option<Rat> {
        self.variant.high().then(|| self.point(&Lex(IndexPt::High, Rat::zero())))
    }

    /// A point strictly above `w` in the same class, below `bound` if given.
    pub fn row_above(&self, w: &Rat, bound: Option<&Rat>) -> Rat {
        let Lex(p, z) = self.coords(w);
        let mut step = z.clone() + Rat::one();
        loop {
            let cand = self.point(&Lex(p.clone(), step.clone()));
            if bound.is_none_or(|b| cand < *b) {
                return cand;
            }
            step = z.midpoint(&step);
        }
    }

    pub(crate) fn red_neighbours(&self, q: &Rat) -> Neighbours {
        self.reds.lock().expect("memo lock").target_neighbours(q)
    }

    pub(crate) fn pin_red(&self, w: Rat, q: Rat) -> bool {
        self.reds.lock().expect("memo lock").insert(w, q).is_ok()
    }

    /// Memo dumps of both underlying isomorphisms.
    pub fn memo_dump(&self) -> Vec<String> {
        vec![
            format!("classes: {}", self.classes.lock().expect("memo lock").memo_dump()),
            format!("reds: {}", self.reds.lock().expect("memo lock").memo_dump()),
        ]
    }

    pub fn as_endo(self: &Arc<Self>) -> GeneralEndo {
        let (f, b, m) = (Arc::clone(self), Arc::clone(self), Arc::clone(self));
        GeneralEndo::lazy(
            FnMap::new(format!("generic embedding ({})", self.variant), move |x: &Rat| f.eval(x))
                .with_preimage(move |y: &Rat| b.inverse(y))
                .with_memo(move || m.memo_dump().join("\n")),
        )
    }
}
