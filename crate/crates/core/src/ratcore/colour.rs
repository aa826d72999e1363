use std::fmt;

use num_integer::Integer;

use super::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Colour {
    Red,
    Blue,
}

impl Colour {
    pub fn other(self) -> Colour {
        match self {
            Colour::Red => Colour::Blue,
            Colour::Blue => Colour::Red,
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Colour::Red => "red",
            Colour::Blue => "blue",
        })
    }
}

/// Parity colouring of `p/q` in lowest terms: blue when both are odd, red
/// otherwise. Both colours are dense.
pub fn colour(x: &Rat) -> Colour {
    if x.numer().is_odd() && x.denom().is_odd() {
        Colour::Blue
    } else {
        Colour::Red
    }
}
