use thiserror::Error;

use crate::lazyiso::{FullQ, LazyIso, QMinusFinite};
use crate::ratcore::{index_of, least_in, Endpoint, IntervalUnion, Rat, RatInterval};

use super::{Affine, GeneralEndo, LazyEmbedding, PiecewiseEndo};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndoError {
    #[error("map is not surjective")]
    NotSurjective,
    #[error("map is not injective")]
    NotInjective,
    #[error("set of values is empty")]
    EmptySet,
}

/// `g ∘ f = h ∘ f` although `g ≠ h`, because `f` misses `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightCancelWitness {
    pub missing: Rat,
    pub g: PiecewiseEndo,
    pub h: PiecewiseEndo,
}

/// Reasons why a map fails to be left or right cancellable.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cancellability {
    /// Distinct `x`, `y` with `f ∘ c_x = f ∘ c_y`.
    pub left: Option<(Rat, Rat)>,
    pub right: Option<RightCancelWitness>,
}

impl Cancellability {
    pub fn is_none(&self) -> bool {
        self.left.is_none() && self.right.is_none()
    }
}

/// The two maps that agree off `y` and differ at `y`: both are the
/// identity below `y` and `x + 1` above it, with `y` sent to `y` or `y + 1`.
pub fn split_at(y: &Rat) -> (PiecewiseEndo, PiecewiseEndo) {
    let segs = vec![Affine::identity(), Affine::new(Rat::one(), Rat::one())];
    let g = PiecewiseEndo::from_breakpoints(vec![(y.clone(), y.clone())], segs.clone()).expect("increasing");
    let h = PiecewiseEndo::from_breakpoints(vec![(y.clone(), y + Rat::one())], segs).expect("increasing");
    (g, h)
}

pub fn cancellability_witness(f: &PiecewiseEndo) -> Cancellability {
    let left = f
        .segments()
        .iter()
        .filter(|s| s.slope.is_zero())
        .map(|s| s.intercept.clone())
        .min_by_key(index_of)
        .map(|c| {
            let fibre = f.preimage(&c).expect("plateau value is attained");
            let p1 = least_in(&fibre, |_| true).expect("fibre is non-empty");
            let other = least_in(&fibre, |x| *x != p1).expect("plateau has two points");
            (p1.clone(), p1.midpoint(&other))
        });
    let right = f.image().complement().sample_point().map(|y| {
        let (g, h) = split_at(&y);
        RightCancelWitness { missing: y, g, h }
    });
    Cancellability { left, right }
}

/// An injective `h` with `g ∘ h = id`. Where a fibre of `g` is a plateau,
/// `h` picks a point of `fixset` in it if there is one, else its largest
/// point, else its least.
pub fn right_inverse(g: &PiecewiseEndo, fixset: &[Rat]) -> Result<PiecewiseEndo, EndoError> {
    if !g.classify().surjective {
        return Err(EndoError::NotSurjective);
    }
    let choose = |_: &Rat, fibre: &RatInterval| -> Rat {
        if let Some(x) = fibre.is_point().then(|| fibre.lower().value().unwrap().clone()) {
            return x;
        }
        if let Some(x) = fixset.iter().filter(|x| fibre.contains(x)).min() {
            return x.clone();
        }
        match (fibre.upper(), fibre.lower()) {
            (Endpoint::Closed(b), _) => b.clone(),
            (_, Endpoint::Closed(a)) => a.clone(),
            _ => least_in(fibre, |_| true).expect("fibre is non-empty"),
        }
    };
    Ok(g.pull_back(&PiecewiseEndo::identity(), choose).expect("section of an increasing map is increasing"))
}

/// An idempotent with image exactly `values`, constant on the blocks cut
/// at midpoints of consecutive values; each block is closed above.
pub fn idempotent_with_image(values: &[Rat]) -> Result<PiecewiseEndo, EndoError> {
    let mut b = values.to_vec();
    b.sort();
    b.dedup();
    if b.is_empty() {
        return Err(EndoError::EmptySet);
    }
    let points = b.windows(2).map(|w| (w[0].midpoint(&w[1]), w[0].clone())).collect();
    let segments = b.iter().cloned().map(Affine::constant).collect();
    Ok(PiecewiseEndo::from_breakpoints(points, segments).expect("increasing"))
}

/// Some `r` with `f ∘ c_r = c_q`, the one of least index, if `q` is a value.
pub fn image_membership(f: &PiecewiseEndo, q: &Rat) -> Option<Rat> {
    f.preimage(q).and_then(|i| least_in(&i, |_| true))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Division {
    /// `h` injective with `g ∘ h = f`.
    Quotient(PiecewiseEndo),
    /// A value of `f` that `g` misses.
    NotContained { witness: Rat },
}

/// Solves `f = g ∘ h` for injective `h` when the image of `f` lies inside
/// that of `g`.
pub fn divide(f: &PiecewiseEndo, g: &PiecewiseEndo) -> Result<Division, EndoError> {
    if !f.classify().injective || !g.classify().injective {
        return Err(EndoError::NotInjective);
    }
    let outside = f.image().difference(&g.image());
    if let Some(witness) = outside.sample_point() {
        return Ok(Division::NotContained { witness });
    }
    let h = g
        .pull_back(f, |_, fibre| fibre.lower().value().expect("injective fibre is a point").clone())
        .expect("quotient of injective maps is increasing");
    Ok(Division::Quotient(h))
}

/// An injective map whose image is ℚ without `y`.
pub fn copoint_embedding(y: &Rat) -> GeneralEndo {
    let iso = LazyIso::build(FullQ, QMinusFinite::new([y.clone()]), [], vec![]).expect("no seed to violate");
    GeneralEndo::lazy(LazyEmbedding::new(iso))
}

/// Image of a piecewise map, for callers that only need the set.
pub fn image(f: &PiecewiseEndo) -> IntervalUnion {
    f.image()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratcore::enumerate;

    fn pw(s: &str) -> PiecewiseEndo {
        s.parse().unwrap()
    }

    fn plateau() -> PiecewiseEndo {
        pw("(-inf,0) : x; [0,1] : 0; (1,+inf) : x - 1")
    }

    fn jump() -> PiecewiseEndo {
        pw("(-inf,0) : x; [0,+inf) : x + 1")
    }

    #[test]
    fn left_witness_on_a_plateau() {
        let w = cancellability_witness(&plateau());
        assert_eq!(w.left, Some((Rat::zero(), Rat::frac(1, 2))));
        assert!(w.right.is_none());
    }

    #[test]
    fn right_witness_for_a_jump() {
        let w = cancellability_witness(&jump());
        assert!(w.left.is_none());
        let r = w.right.unwrap();
        assert_eq!(r.missing, Rat::frac(1, 2));
        assert_eq!(r.g.compose(&jump()), r.h.compose(&jump()));
        assert_ne!(r.g, r.h);
        assert!(cancellability_witness(&PiecewiseEndo::identity()).is_none());
    }

    #[test]
    fn plateau_section() {
        let h = right_inverse(&plateau(), &[]).unwrap();
        assert_eq!(h, pw("(-inf,0) : x; [0,+inf) : x + 1"));
        assert_eq!(plateau().compose(&h), PiecewiseEndo::identity());
        let h = right_inverse(&pw("(-inf,+inf) : 2*x"), &[]).unwrap();
        assert_eq!(h, pw("(-inf,+inf) : 1/2*x"));
        let h = right_inverse(&plateau(), &[Rat::frac(1, 3)]).unwrap();
        assert_eq!(h.eval(&Rat::zero()), Rat::frac(1, 3));
        assert_eq!(right_inverse(&jump(), &[]), Err(EndoError::NotSurjective));
    }

    #[test]
    fn idempotents() {
        let h = idempotent_with_image(&[Rat::zero(), Rat::one()]).unwrap();
        assert_eq!(h, pw("(-inf,1/2] : 0; (1/2,+inf) : 1"));
        assert_eq!(h.compose(&h), h);
        assert_eq!(idempotent_with_image(&[Rat::zero()]).unwrap(), PiecewiseEndo::constant(Rat::zero()));
    }

    #[test]
    fn division() {
        let f = pw("(-inf,+inf) : x + 2");
        let g = pw("(-inf,+inf) : x + 1");
        assert_eq!(divide(&f, &g), Ok(Division::Quotient(pw("(-inf,+inf) : x + 1"))));
        assert_eq!(
            divide(&PiecewiseEndo::identity(), &jump()),
            Ok(Division::NotContained { witness: Rat::frac(1, 2) })
        );
        let q = match divide(&jump(), &jump()).unwrap() {
            Division::Quotient(q) => q,
            other => panic!("{other:?}"),
        };
        assert_eq!(q, PiecewiseEndo::identity());
    }

    #[test]
    fn copoint_misses_its_point() {
        let e = copoint_embedding(&Rat::zero());
        for n in 0..200 {
            assert_ne!(e.eval(&enumerate(n)), Rat::zero());
        }
        assert_eq!(image_membership(&plateau(), &Rat::zero()), Some(Rat::zero()));
        assert_eq!(image_membership(&jump(), &Rat::frac(1, 2)), None);
    }
}
