use std::fmt;
use std::sync::{Arc, Mutex};

use crate::lazyiso::{DenseOrder, FullQ, LazyIso};
use crate::ratcore::Rat;

use super::PiecewiseEndo;

/// An endomorphism evaluated on demand, typically backed by a memoised
/// back-and-forth construction.
pub trait LazyMap: Send + Sync {
    fn eval(&self, x: &Rat) -> Rat;

    /// Some `x` with `eval(x) = y`, when the map can produce one.
    fn preimage(&self, _y: &Rat) -> Option<Rat> {
        None
    }

    fn describe(&self) -> String;

    /// Current memo as text, for maps that keep one.
    fn memo(&self) -> Option<String> {
        None
    }
}

/// A piecewise map, a lazy map, or a composite `outer ∘ inner`.
#[derive(Clone)]
pub enum GeneralEndo {
    Piecewise(PiecewiseEndo),
    Lazy(Arc<dyn LazyMap>),
    Compose(Box<GeneralEndo>, Box<GeneralEndo>),
}

impl GeneralEndo {
    pub fn lazy(map: impl LazyMap + 'static) -> Self {
        GeneralEndo::Lazy(Arc::new(map))
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        match self {
            GeneralEndo::Piecewise(p) => p.eval(x),
            GeneralEndo::Lazy(m) => m.eval(x),
            GeneralEndo::Compose(outer, inner) => outer.eval(&inner.eval(x)),
        }
    }

    /// `self ∘ inner`; exact when both sides are piecewise.
    pub fn compose(&self, inner: &GeneralEndo) -> GeneralEndo {
        match (self, inner) {
            (GeneralEndo::Piecewise(a), GeneralEndo::Piecewise(b)) => GeneralEndo::Piecewise(a.compose(b)),
            _ => GeneralEndo::Compose(Box::new(self.clone()), Box::new(inner.clone())),
        }
    }

    pub fn as_piecewise(&self) -> Option<&PiecewiseEndo> {
        match self {
            GeneralEndo::Piecewise(p) => Some(p),
            _ => None,
        }
    }

    pub fn preimage(&self, y: &Rat) -> Option<Rat> {
        match self {
            GeneralEndo::Piecewise(p) => p.preimage(y).and_then(|i| crate::ratcore::least_in(&i, |_| true)),
            GeneralEndo::Lazy(m) => m.preimage(y),
            GeneralEndo::Compose(..) => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GeneralEndo::Piecewise(p) => p.pieces().iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; "),
            GeneralEndo::Lazy(m) => m.describe(),
            GeneralEndo::Compose(a, b) => format!("({}) o ({})", a.describe(), b.describe()),
        }
    }

    /// Memo dumps of the lazy parts, outermost first.
    pub fn memos(&self) -> Vec<String> {
        match self {
            GeneralEndo::Piecewise(_) => vec![],
            GeneralEndo::Lazy(m) => m.memo().into_iter().collect(),
            GeneralEndo::Compose(a, b) => {
                let mut v = a.memos();
                v.extend(b.memos());
                v
            }
        }
    }
}

impl From<PiecewiseEndo> for GeneralEndo {
    fn from(p: PiecewiseEndo) -> Self {
        GeneralEndo::Piecewise(p)
    }
}

impl fmt::Debug for GeneralEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl fmt::Display for GeneralEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Order embedding of ℚ onto a dense suborder, evaluated forwards.
pub struct LazyEmbedding<T: DenseOrder<Elem = Rat>> {
    iso: Mutex<LazyIso<FullQ, T>>,
}

impl<T: DenseOrder<Elem = Rat>> LazyEmbedding<T> {
    pub fn new(iso: LazyIso<FullQ, T>) -> Self {
        LazyEmbedding { iso: Mutex::new(iso) }
    }
}

impl<T> LazyMap for LazyEmbedding<T>
where
    T: DenseOrder<Elem = Rat> + Send,
{
    fn eval(&self, x: &Rat) -> Rat {
        self.iso.lock().expect("memo lock").eval_fwd(x).expect("target order is dense")
    }

    fn preimage(&self, y: &Rat) -> Option<Rat> {
        let mut iso = self.iso.lock().expect("memo lock");
        if !iso.target().contains(y) {
            return None;
        }
        iso.eval_bwd(y).ok()
    }

    fn describe(&self) -> String {
        format!("lazy embedding onto {}", self.iso.lock().expect("memo lock").target().name())
    }

    fn memo(&self) -> Option<String> {
        Some(self.iso.lock().expect("memo lock").memo_dump())
    }
}

type RatFn = dyn Fn(&Rat) -> Rat + Send + Sync;
type PartialRatFn = dyn Fn(&Rat) -> Option<Rat> + Send + Sync;

/// A lazy map given by closures.
pub struct FnMap {
    name: String,
    forward: Box<RatFn>,
    backward: Option<Box<PartialRatFn>>,
    memo: Option<Box<dyn Fn() -> String + Send + Sync>>,
}

impl FnMap {
    pub fn new(name: impl Into<String>, forward: impl Fn(&Rat) -> Rat + Send + Sync + 'static) -> Self {
        FnMap { name: name.into(), forward: Box::new(forward), backward: None, memo: None }
    }

    pub fn with_preimage(mut self, backward: impl Fn(&Rat) -> Option<Rat> + Send + Sync + 'static) -> Self {
        self.backward = Some(Box::new(backward));
        self
    }

    pub fn with_memo(mut self, memo: impl Fn() -> String + Send + Sync + 'static) -> Self {
        self.memo = Some(Box::new(memo));
        self
    }
}

impl LazyMap for FnMap {
    fn eval(&self, x: &Rat) -> Rat {
        (self.forward)(x)
    }

    fn preimage(&self, y: &Rat) -> Option<Rat> {
        self.backward.as_ref().and_then(|b| b(y))
    }

    fn describe(&self) -> String {
        self.name.clone()
    }

    fn memo(&self) -> Option<String> {
        self.memo.as_ref().map(|m| m())
    }
}
