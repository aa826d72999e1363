//! Exact computations on order-preserving self-maps of the rationals:
//! back-and-forth isomorphisms, generic embeddings, factorisations, forest
//! actions, essentially unary clones and the pointwise ultrametric.

// Errors and witnesses carry exact rationals by value.
#![allow(clippy::result_large_err, clippy::large_enum_variant)]

pub mod actions;
pub mod clone;
pub mod endo;
pub mod gamma;
pub mod lazyiso;
pub mod partialmap;
pub mod ratcore;
pub mod suite;
pub mod topology;
