//! The fixed enumeration of ℚ: 0 first, then each Calkin–Wilf term followed
//! by its negation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rat;

/// The `k`-th Calkin–Wilf term (1-based), read off the binary digits of `k`.
pub fn calkin_wilf(k: &BigUint) -> Rat {
    assert!(!k.is_zero(), "Calkin-Wilf index starts at 1");
    let mut a = BigInt::one();
    let mut b = BigInt::one();
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        if k.bit(i) {
            a = &a + &b;
        } else {
            b = &a + &b;
        }
    }
    Rat::new(a, b).expect("positive denominator")
}

/// Position of a positive rational in the Calkin–Wilf sequence.
pub fn calkin_wilf_index(r: &Rat) -> BigUint {
    assert!(r.is_positive(), "only positive rationals have a Calkin-Wilf index");
    // Stern-Brocot path as runs of (move, length) from the root; the
    // Calkin-Wilf path is the same word reversed.
    let mut p = r.numer().magnitude().clone();
    let mut q = r.denom().magnitude().clone();
    let mut runs: Vec<(bool, BigUint)> = Vec::new();
    while p != q {
        if p > q {
            let (mut n, rem) = p.div_rem(&q);
            if rem.is_zero() {
                n -= 1u32;
                p = q.clone();
            } else {
                p = rem;
            }
            runs.push((true, n));
        } else {
            let (mut n, rem) = q.div_rem(&p);
            if rem.is_zero() {
                n -= 1u32;
                q = p.clone();
            } else {
                q = rem;
            }
            runs.push((false, n));
        }
    }
    let mut k = BigUint::one();
    for (right, len) in runs.iter().rev() {
        let len: usize = len.try_into().expect("path length fits in memory");
        k <<= len;
        if *right {
            k += (BigUint::one() << len) - 1u32;
        }
    }
    k
}

/// `e(n)`: the `n`-th rational of the enumeration.
pub fn enumerate(n: u64) -> Rat {
    enumerate_big(&BigUint::from(n))
}

pub fn enumerate_big(n: &BigUint) -> Rat {
    if n.is_zero() {
        return Rat::zero();
    }
    let k = (n + 1u32) >> 1;
    let r = calkin_wilf(&k);
    if n.bit(0) {
        r
    } else {
        -r
    }
}

/// The position of `r` in the enumeration, inverse to [`enumerate_big`].
pub fn index_of(r: &Rat) -> BigUint {
    if r.is_zero() {
        BigUint::zero()
    } else if r.is_positive() {
        (calkin_wilf_index(r) << 1) - 1u32
    } else {
        calkin_wilf_index(&-r) << 1
    }
}

/// Streams `e(0), e(1), ...` using the successor rule
/// `x ↦ 1/(2⌊x⌋ − x + 1)` on the Calkin–Wilf part.
#[derive(Debug, Clone, Default)]
pub struct Rationals {
    started: bool,
    last: Option<Rat>,
    pending_negation: bool,
}

pub fn rationals() -> Rationals {
    Rationals::default()
}

impl Iterator for Rationals {
    type Item = Rat;

    fn next(&mut self) -> Option<Rat> {
        if !self.started {
            self.started = true;
            return Some(Rat::zero());
        }
        if self.pending_negation {
            self.pending_negation = false;
            return self.last.as_ref().map(|x| -x);
        }
        let next = match &self.last {
            None => Rat::one(),
            Some(x) => {
                let two_floor = x.floor() * Rat::int(2);
                (two_floor - x + Rat::one()).recip()
            }
        };
        self.last = Some(next.clone());
        self.pending_negation = true;
        Some(next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn head_of_the_enumeration() {
        assert_eq!(enumerate(0), Rat::zero());
        assert_eq!(enumerate(1), Rat::one());
        assert_eq!(enumerate(2), Rat::int(-1));
        assert_eq!(enumerate(3), Rat::frac(1, 2));
        assert_eq!(enumerate(4), Rat::frac(-1, 2));
        assert_eq!(enumerate(5), Rat::int(2));
    }

    #[test]
    fn stream_matches_random_access() {
        for (n, r) in rationals().take(3000).enumerate() {
            assert_eq!(enumerate(n as u64), r, "at {n}");
            assert_eq!(index_of(&r), BigUint::from(n), "index of {r}");
        }
    }

    #[test]
    fn index_of_integers() {
        // n sits at Calkin-Wilf position 2^n - 1.
        assert_eq!(calkin_wilf_index(&Rat::int(5)), BigUint::from(31u32));
        assert_eq!(calkin_wilf(&BigUint::from(31u32)), Rat::int(5));
    }
}
