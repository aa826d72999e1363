//! Generic embeddings: images spread out so that their classes are ordered
//! and coloured like ℚ₂, with certificates that make the class structure
//! computable, and the commuting automorphism pairs built from them.

mod cert;
mod generic;
mod ppair;

use std::sync::Arc;

use thiserror::Error;

use crate::ratcore::{IntervalUnion, Rat, RatInterval};

pub use cert::{absorb, check_certificate, compose_certified, Absorbed, Cert, CertReport, ClassKey, Embedding};
pub use generic::{Coords, GammaGeneric, Variant};
pub use ppair::{
    extend_pair, p_check, random_ppair, recover_witness, CommutingPair, PPair, RecoverCase, Recovery, Violation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("map is not injective")]
    NotInjective,
    #[error("interval {0} is not open at both ends")]
    NotOpen(String),
    #[error("variant {outer} cannot be composed with variant {inner}")]
    VariantMismatch { outer: Variant, inner: Variant },
    #[error("pair fails clauses {0:?}")]
    NotAPair(Vec<Violation>),
}

/// A set of rationals order-isomorphic to ℚ whose membership is decidable.
#[derive(Debug, Clone)]
pub enum ImageSpec {
    Intervals(IntervalUnion),
    Certified(Arc<Cert>),
}

/// `x ~ y`: at most one point of the set lies strictly between them.
pub fn sim_related(spec: &ImageSpec, x: &Rat, y: &Rat) -> bool {
    if x == y {
        return true;
    }
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    match spec {
        ImageSpec::Intervals(u) => {
            let gap = IntervalUnion::from(RatInterval::open(lo.clone(), hi.clone()).expect("ordered"));
            let between = u.intersect(&gap);
            match between.parts() {
                [] => true,
                [only] => only.is_point(),
                _ => false,
            }
        }
        ImageSpec::Certified(c) => c.class_of(lo) == c.class_of(hi),
    }
}
