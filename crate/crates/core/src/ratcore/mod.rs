//! Exact rationals, the fixed enumeration of ℚ, the parity colouring and
//! rational intervals.

mod colour;
mod enumeration;
mod interval;
mod rat;
mod union;
mod walk;

pub use colour::{colour, Colour};
pub use enumeration::{
    calkin_wilf, calkin_wilf_index, enumerate, enumerate_big, index_of, rationals, Rationals,
};
pub use interval::{Endpoint, IntervalError, RatInterval};
pub use rat::{Rat, RatError};
pub use union::IntervalUnion;
pub use walk::{least_in, RatWalk};

