//! Finite partial maps on ℚ.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ratcore::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartialMapError {
    #[error("conflicting values at {arg}: {left} vs {right}")]
    Conflict { arg: Rat, left: Rat, right: Rat },
    #[error("not injective: {first} and {second} both map to {value}")]
    NotInjective { first: Rat, second: Rat, value: Rat },
    #[error("cannot parse pair {0:?}")]
    Parse(String),
}

/// A finite functional set of pairs, kept sorted by argument.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FinitePartialMap {
    pairs: BTreeMap<Rat, Rat>,
}

impl FinitePartialMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self, PartialMapError>
    where
        I: IntoIterator<Item = (Rat, Rat)>,
    {
        let mut m = Self::new();
        for (x, y) in pairs {
            m.insert(x, y)?;
        }
        Ok(m)
    }

    /// Adds `x ↦ y`; re-adding an existing pair is a no-op.
    pub fn insert(&mut self, x: Rat, y: Rat) -> Result<(), PartialMapError> {
        match self.pairs.get(&x) {
            Some(old) if *old != y => Err(PartialMapError::Conflict { arg: x, left: old.clone(), right: y }),
            Some(_) => Ok(()),
            None => {
                self.pairs.insert(x, y);
                Ok(())
            }
        }
    }

    pub fn get(&self, x: &Rat) -> Option<&Rat> {
        self.pairs.get(x)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rat, &Rat)> {
        self.pairs.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Rat> {
        self.pairs.keys()
    }

    pub fn image(&self) -> impl Iterator<Item = &Rat> {
        self.pairs.values()
    }

    pub fn contains_pair(&self, x: &Rat, y: &Rat) -> bool {
        self.pairs.get(x) == Some(y)
    }

    pub fn in_image(&self, y: &Rat) -> bool {
        self.pairs.values().any(|v| v == y)
    }

    pub fn preimage(&self, y: &Rat) -> Option<&Rat> {
        self.pairs.iter().find(|(_, v)| *v == y).map(|(k, _)| k)
    }

    /// Injective and strictly increasing on its domain.
    pub fn is_partial_automorphism(&self) -> bool {
        self.pairs.values().zip(self.pairs.values().skip(1)).all(|(a, b)| a < b)
    }

    pub fn merge(&self, other: &FinitePartialMap) -> Result<FinitePartialMap, PartialMapError> {
        let mut out = self.clone();
        for (x, y) in other.iter() {
            out.insert(x.clone(), y.clone())?;
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<FinitePartialMap, PartialMapError> {
        let mut inv: BTreeMap<Rat, Rat> = BTreeMap::new();
        for (x, y) in self.iter() {
            if let Some(first) = inv.insert(y.clone(), x.clone()) {
                return Err(PartialMapError::NotInjective { first, second: x.clone(), value: y.clone() });
            }
        }
        Ok(FinitePartialMap { pairs: inv })
    }
}

impl fmt::Display for FinitePartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, y) in self.iter() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{x} -> {y}")?;
        }
        Ok(())
    }
}

impl FromStr for FinitePartialMap {
    type Err = PartialMapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut m = FinitePartialMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (x, y) = part.split_once("->").ok_or_else(|| PartialMapError::Parse(part.to_string()))?;
            let x: Rat = x.parse().map_err(|_| PartialMapError::Parse(part.to_string()))?;
            let y: Rat = y.parse().map_err(|_| PartialMapError::Parse(part.to_string()))?;
            m.insert(x, y)?;
        }
        Ok(m)
    }
}

impl FromIterator<(Rat, Rat)> for FinitePartialMap {
    /// Panics on a conflicting pair; use [`FinitePartialMap::from_pairs`] to
    /// handle that case.
    fn from_iter<T: IntoIterator<Item = (Rat, Rat)>>(iter: T) -> Self {
        Self::from_pairs(iter).expect("functional pairs")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(s: &str) -> FinitePartialMap {
        s.parse().unwrap()
    }

    #[test]
    fn automorphism_check() {
        assert!(pm("0 -> 0, 1 -> 2").is_partial_automorphism());
        assert!(!pm("0 -> 1, 1 -> 0").is_partial_automorphism());
        assert!(pm("").is_partial_automorphism());
        assert!(!pm("0 -> 1, 2 -> 1").is_partial_automorphism());
    }

    #[test]
    fn merging() {
        assert_eq!(pm("0 -> 0").merge(&pm("1 -> 1")).unwrap(), pm("0 -> 0, 1 -> 1"));
        assert_eq!(pm("0 -> 0").merge(&pm("0 -> 0")).unwrap(), pm("0 -> 0"));
        match pm("0 -> 0").merge(&pm("0 -> 1")) {
            Err(PartialMapError::Conflict { arg, .. }) => assert_eq!(arg, Rat::zero()),
            other => panic!("expected conflict, got {other:?}"),
        }
    }

    #[test]
    fn inversion() {
        assert_eq!(pm("0 -> 1").inverse().unwrap(), pm("1 -> 0"));
        assert_eq!(pm("").inverse().unwrap(), pm(""));
        assert!(pm("0 -> 1, 2 -> 1").inverse().is_err());
    }

    #[test]
    fn text_form() {
        assert_eq!(pm("1 -> 2, -1/2 -> 3").to_string(), "-1/2 -> 3, 1 -> 2");
    }
}
