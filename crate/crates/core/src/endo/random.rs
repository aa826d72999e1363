use rand::Rng;

use crate::ratcore::Rat;

use super::{Affine, PiecewiseEndo};

fn small_rat<R: Rng + ?Sized>(rng: &mut R, height: i64) -> Rat {
    Rat::frac(rng.gen_range(-height..=height), rng.gen_range(1..=height))
}

fn positive_rat<R: Rng + ?Sized>(rng: &mut R, height: i64) -> Rat {
    Rat::frac(rng.gen_range(1..=height), rng.gen_range(1..=height))
}

/// Zero with probability `p`, else a small positive rational.
fn maybe_zero<R: Rng + ?Sized>(rng: &mut R, p: f64, height: i64) -> Rat {
    if rng.gen_bool(p) {
        Rat::zero()
    } else {
        positive_rat(rng, height)
    }
}

/// A random weakly increasing map with at most `max_pieces` segments and
/// coefficients of height at most `height`. Flat segments and jumps are
/// common enough that all four classes turn up.
pub fn random_piecewise<R: Rng + ?Sized>(rng: &mut R, max_pieces: usize, height: i64) -> PiecewiseEndo {
    let mut breaks: Vec<Rat> = (1..rng.gen_range(1..=max_pieces.max(1))).map(|_| small_rat(rng, height)).collect();
    breaks.sort();
    breaks.dedup();
    let mut segments = vec![Affine::new(maybe_zero(rng, 0.2, height), small_rat(rng, height))];
    let mut points = Vec::new();
    for b in &breaks {
        let v = segments.last().unwrap().apply(b) + maybe_zero(rng, 0.5, height);
        let s = maybe_zero(rng, 0.2, height);
        let c = &v + maybe_zero(rng, 0.5, height) - &s * b;
        points.push((b.clone(), v));
        segments.push(Affine::new(s, c));
    }
    PiecewiseEndo::from_breakpoints(points, segments).expect("built increasing")
}

/// A random strictly increasing map, unbounded in both directions, with
/// jumps at some breakpoints.
pub fn random_embedding<R: Rng + ?Sized>(rng: &mut R, max_pieces: usize, height: i64) -> PiecewiseEndo {
    let mut breaks: Vec<Rat> = (1..rng.gen_range(1..=max_pieces.max(1))).map(|_| small_rat(rng, height)).collect();
    breaks.sort();
    breaks.dedup();
    let mut segments = vec![Affine::new(positive_rat(rng, height), small_rat(rng, height))];
    let mut points = Vec::new();
    for b in &breaks {
        let v = segments.last().unwrap().apply(b) + maybe_zero(rng, 0.5, height);
        let s = positive_rat(rng, height);
        let c = &v + maybe_zero(rng, 0.5, height) - &s * b;
        points.push((b.clone(), v));
        segments.push(Affine::new(s, c));
    }
    PiecewiseEndo::from_breakpoints(points, segments).expect("built increasing")
}
