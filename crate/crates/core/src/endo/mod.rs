//! Endomorphisms of (ℚ, ≤): exact piecewise affine maps, lazily built
//! ones, and the constructions relating the monoid to its submonoids.

mod factor;
mod general;
mod ops;
mod piecewise;
mod random;

pub use factor::{epi_mono_factorize, FactorOrder, FactorPt, Factorization};
pub use general::{FnMap, GeneralEndo, LazyEmbedding, LazyMap};
pub use ops::*;
pub use piecewise::{Affine, EndoClass, Piece, PiecewiseEndo, PiecewiseError};
pub use random::{random_embedding, random_piecewise};
