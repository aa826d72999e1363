//! Essentially unary operations `u ∘ πⱼ`, the clone they form, and a finite
//! proxy on grids for testing which operations preserve the relation
//! `{(x, y, z, w) : x = y or z = w}`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::endo::{GeneralEndo, PiecewiseEndo};
use crate::ratcore::Rat;
use crate::topology::{tuple_position, Distance, UltraMetric};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CloneError {
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("position {position} out of range for arity {arity}")]
    PositionOutOfRange { position: usize, arity: usize },
    #[error("expected {expected} operations of one arity, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("grid must be non-empty and strictly increasing")]
    BadGrid,
    #[error("table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("value {0} lies outside the grid")]
    ImageNotInGrid(Rat),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// `πⱼ` or `u ∘ πⱼ`; positions count from 0.
#[derive(Clone)]
pub struct FinitaryOp {
    arity: usize,
    position: usize,
    unary: Option<GeneralEndo>,
}

impl FinitaryOp {
    pub fn projection(arity: usize, position: usize) -> Result<Self, CloneError> {
        Self::build(arity, position, None)
    }

    pub fn composed(unary: GeneralEndo, arity: usize, position: usize) -> Result<Self, CloneError> {
        Self::build(arity, position, Some(unary))
    }

    fn build(arity: usize, position: usize, unary: Option<GeneralEndo>) -> Result<Self, CloneError> {
        if arity == 0 {
            return Err(CloneError::ZeroArity);
        }
        if position >= arity {
            return Err(CloneError::PositionOutOfRange { position, arity });
        }
        Ok(FinitaryOp { arity, position, unary })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn is_projection(&self) -> bool {
        self.unary.is_none()
    }

    /// The unary part, identity for projections.
    pub fn unary(&self) -> GeneralEndo {
        self.unary.clone().unwrap_or_else(|| GeneralEndo::Piecewise(PiecewiseEndo::identity()))
    }

    pub fn eval(&self, args: &[Rat]) -> Rat {
        assert_eq!(args.len(), self.arity, "argument count");
        let x = &args[self.position];
        match &self.unary {
            None => x.clone(),
            Some(u) => u.eval(x),
        }
    }

    pub fn restrict(&self, grid: &[Rat]) -> Result<GridOp, CloneError> {
        GridOp::from_fn(self.arity, grid.to_vec(), |t| self.eval(t))
    }
}

impl fmt::Debug for FinitaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.unary {
            None => write!(f, "pi[{}/{}]", self.position, self.arity),
            Some(u) => write!(f, "({}) . pi[{}/{}]", u.describe(), self.position, self.arity),
        }
    }
}

/// `f ∘ (g₀, …, gₙ₋₁)`, again of the form `u ∘ πⱼ`.
pub fn clone_compose(f: &FinitaryOp, gs: &[FinitaryOp]) -> Result<FinitaryOp, CloneError> {
    if gs.len() != f.arity {
        return Err(CloneError::ArityMismatch { expected: f.arity, got: gs.len() });
    }
    let k = gs[0].arity;
    if let Some(g) = gs.iter().find(|g| g.arity != k) {
        return Err(CloneError::ArityMismatch { expected: k, got: g.arity });
    }
    let inner = &gs[f.position];
    Ok(match (&f.unary, &inner.unary) {
        (None, _) => inner.clone(),
        (Some(u), None) => FinitaryOp { arity: k, position: inner.position, unary: Some(u.clone()) },
        (Some(u), Some(v)) => FinitaryOp { arity: k, position: inner.position, unary: Some(u.compose(v)) },
    })
}

/// An operation on a finite grid, tabulated over all argument tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridOp {
    arity: usize,
    grid: Vec<Rat>,
    table: Vec<Rat>,
}

impl GridOp {
    /// `table` lists values in lexicographic order of the grid tuples.
    pub fn new(arity: usize, grid: Vec<Rat>, table: Vec<Rat>) -> Result<Self, CloneError> {
        if arity == 0 {
            return Err(CloneError::ZeroArity);
        }
        if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CloneError::BadGrid);
        }
        let expected = grid.len().pow(arity as u32);
        if table.len() != expected {
            return Err(CloneError::TableSize { expected, got: table.len() });
        }
        Ok(GridOp { arity, grid, table })
    }

    pub fn from_fn(arity: usize, grid: Vec<Rat>, f: impl Fn(&[Rat]) -> Rat) -> Result<Self, CloneError> {
        if grid.is_empty() {
            return Err(CloneError::BadGrid);
        }
        let n = grid.len().pow(arity as u32);
        let table = (0..n)
            .map(|i| {
                let t: Vec<Rat> = decode(i, arity, grid.len()).into_iter().map(|j| grid[j].clone()).collect();
                f(&t)
            })
            .collect();
        Self::new(arity, grid, table)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn grid(&self) -> &[Rat] {
        &self.grid
    }

    fn len(&self) -> usize {
        self.table.len()
    }

    fn tuple(&self, i: usize) -> Vec<Rat> {
        decode(i, self.arity, self.grid.len()).into_iter().map(|j| self.grid[j].clone()).collect()
    }

    pub fn eval(&self, args: &[Rat]) -> Option<&Rat> {
        let mut i = 0;
        for a in args {
            i = i * self.grid.len() + self.grid.binary_search(a).ok()?;
        }
        self.table.get(i)
    }

    /// Positions where changing one argument can change the value.
    pub fn essential_positions(&self) -> BTreeSet<usize> {
        let n = self.grid.len();
        (0..self.arity)
            .filter(|&p| {
                let stride = n.pow((self.arity - 1 - p) as u32);
                (0..self.len()).any(|i| {
                    let digit = (i / stride) % n;
                    (digit + 1..n).any(|d| self.table[i] != self.table[i + (d - digit) * stride])
                })
            })
            .collect()
    }

    /// Some two tuples agreeing on the positions in `mask` with different
    /// values.
    fn split_pair(&self, mask: u32) -> Option<(usize, usize)> {
        let n = self.grid.len();
        let key = |i: usize| -> Vec<usize> {
            let d = decode(i, self.arity, n);
            (0..self.arity).filter(|p| mask & (1 << p) != 0).map(|p| d[p]).collect()
        };
        let mut seen: std::collections::BTreeMap<Vec<usize>, usize> = std::collections::BTreeMap::new();
        for i in 0..self.len() {
            match seen.get(&key(i)) {
                Some(&j) if self.table[j] != self.table[i] => return Some((j, i)),
                Some(_) => {}
                None => {
                    seen.insert(key(i), i);
                }
            }
        }
        None
    }
}

/// Decodes `i` into base-`n` digits, most significant first.
fn decode(mut i: usize, arity: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for p in (0..arity).rev() {
        out[p] = i % n;
        i /= n;
    }
    out
}

/// `grid: a b c` on the first line, then one `x y -> v` row per tuple.
impl fmt::Display for GridOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let grid: Vec<String> = self.grid.iter().map(|x| x.to_string()).collect();
        writeln!(f, "grid: {}", grid.join(" "))?;
        for (i, v) in self.table.iter().enumerate() {
            let args: Vec<String> = self.tuple(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{} -> {v}", args.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for GridOp {
    type Err = CloneError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |line: usize, t: &str| {
            t.parse::<Rat>().map_err(|_| CloneError::Parse { line, msg: format!("bad rational `{t}`") })
        };
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines.next().ok_or(CloneError::Parse { line: 1, msg: "missing grid line".into() })?;
        let grid = head
            .trim()
            .strip_prefix("grid:")
            .ok_or(CloneError::Parse { line: 1, msg: "expected `grid:`".into() })?
            .split_whitespace()
            .map(|t| parse(1, t))
            .collect::<Result<Vec<_>, _>>()?;
        let mut rows = Vec::new();
        for (i, line) in lines {
            let (args, v) = line
                .split_once("->")
                .ok_or(CloneError::Parse { line: i + 1, msg: "expected `args -> value`".into() })?;
            let args = args.split_whitespace().map(|t| parse(i + 1, t)).collect::<Result<Vec<_>, _>>()?;
            rows.push((i + 1, args, parse(i + 1, v.trim())?));
        }
        let arity = rows.first().map_or(1, |r| r.1.len());
        let probe = GridOp::new(arity, grid.clone(), vec![Rat::zero(); grid.len().pow(arity as u32)])?;
        let mut table: Vec<Option<Rat>> = vec![None; probe.len()];
        for (line, args, v) in rows {
            let mut idx = 0;
            for a in &args {
                let j = grid
                    .binary_search(a)
                    .map_err(|_| CloneError::Parse { line, msg: format!("{a} is not in the grid") })?;
                idx = idx * grid.len() + j;
            }
            if args.len() != arity {
                return Err(CloneError::Parse { line, msg: format!("expected {arity} arguments") });
            }
            table[idx] = Some(v);
        }
        let table: Option<Vec<Rat>> = table.into_iter().collect();
        let table = table.ok_or(CloneError::Parse { line: 0, msg: "table is not total".into() })?;
        GridOp::new(arity, grid, table)
    }
}

/// Four argument tuples, read column by column in the relation, whose
/// values are not: `v₀ ≠ v₁` and `v₂ ≠ v₃`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoWitness {
    pub rows: [Vec<Rat>; 4],
    pub values: [Rat; 4],
}

/// Checks exhaustively whether `op` preserves the relation. Every position
/// of a violating quadruple has `x = y` or `z = w`, so a violation exists
/// exactly when for some set `S` of positions two tuples agreeing on `S`
/// separate and two tuples agreeing off `S` separate.
pub fn preserves_rho(op: &GridOp) -> Result<(), RhoWitness> {
    let all = (1u32 << op.arity) - 1;
    for mask in 0..=all {
        if let (Some((a, b)), Some((c, d))) = (op.split_pair(mask), op.split_pair(all & !mask)) {
            return Err(RhoWitness {
                rows: [op.tuple(a), op.tuple(b), op.tuple(c), op.tuple(d)],
                values: [a, b, c, d].map(|i| op.table[i].clone()),
            });
        }
    }
    Ok(())
}

/// `op = u ∘ πᵢ` on the grid, with `u(v) = op(v, …, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub position: usize,
    pub unary: Vec<(Rat, Rat)>,
}

pub fn reconstruct(op: &GridOp) -> Option<Reconstruction> {
    let ess = op.essential_positions();
    if ess.len() > 1 {
        return None;
    }
    let position = ess.into_iter().next().unwrap_or(0);
    let unary: Vec<(Rat, Rat)> = op
        .grid
        .iter()
        .map(|v| (v.clone(), op.eval(&vec![v.clone(); op.arity]).expect("on grid").clone()))
        .collect();
    let ok = (0..op.len()).all(|i| {
        let t = op.tuple(i);
        let j = op.grid.binary_search(&t[position]).expect("on grid");
        unary[j].1 == op.table[i]
    });
    ok.then_some(Reconstruction { position, unary })
}

/// Outcome of comparing `f ∘ (h₀ ∘ π₀, …)` with `f₂ ∘ (h₀ ∘ π₀, …)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComposeIdentity {
    /// `f` and `f₂` differ at this tuple of `∏ im(hᵢ)`.
    HypothesisFalse(Vec<Rat>),
    Holds { checked: usize },
    Fails(Vec<Rat>),
}

/// When `f` and `f₂` agree on `∏ im(hᵢ)`, the composites agree on every
/// sample; the check evaluates both.
pub fn tuple_compose_identity(
    f: &GridOp,
    f2: &GridOp,
    hs: &[PiecewiseEndo],
    samples: &[Vec<Rat>],
) -> Result<ComposeIdentity, CloneError> {
    if hs.len() != f.arity || f2.arity != f.arity {
        return Err(CloneError::ArityMismatch { expected: f.arity, got: hs.len() });
    }
    let mut images = Vec::new();
    for h in hs {
        let mut vals = Vec::new();
        for part in h.image().parts() {
            if !part.is_point() {
                return Err(CloneError::ImageNotInGrid(part.lower().value().cloned().unwrap_or_else(Rat::zero)));
            }
            let v = part.lower().value().expect("point").clone();
            if f.grid.binary_search(&v).is_err() || f2.grid.binary_search(&v).is_err() {
                return Err(CloneError::ImageNotInGrid(v));
            }
            vals.push(v);
        }
        images.push(vals);
    }
    let total: usize = images.iter().map(Vec::len).product();
    for i in 0..total {
        let mut rest = i;
        let mut t = Vec::with_capacity(images.len());
        for vals in images.iter().rev() {
            t.push(vals[rest % vals.len()].clone());
            rest /= vals.len();
        }
        t.reverse();
        if f.eval(&t) != f2.eval(&t) {
            return Ok(ComposeIdentity::HypothesisFalse(t));
        }
    }
    for x in samples {
        let t: Vec<Rat> = hs.iter().zip(x).map(|(h, xi)| h.eval(xi)).collect();
        if f.eval(&t) != f2.eval(&t) {
            return Ok(ComposeIdentity::Fails(x.clone()));
        }
    }
    Ok(ComposeIdentity::Holds { checked: samples.len() })
}

/// Unary and lifted distances along a sequence `fₙ → f`, with the bound on
/// the lifted modulus forced by the unary one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftReport {
    pub unary: Vec<Distance>,
    pub lifted: Vec<Distance>,
    /// Least argument position at which `fₙ ∘ πⱼ` can first differ from
    /// `f ∘ πⱼ`, given the unary distance.
    pub bounds: Vec<Option<usize>>,
    /// `d(fₙ, f) ≤ 2^-n` for every `n`.
    pub hypothesis: bool,
    /// Each lifted distance is within its bound.
    pub bounded: bool,
    /// Lifted distances strictly decrease.
    pub improving: bool,
}

impl LiftReport {
    pub fn ok(&self) -> bool {
        !self.hypothesis || (self.bounded && self.improving)
    }
}

pub fn lift_convergence(
    fs: impl Fn(usize) -> PiecewiseEndo,
    f: &PiecewiseEndo,
    position: usize,
    arity: usize,
    terms: usize,
    depth: usize,
) -> LiftReport {
    let unary_metric = UltraMetric::unary(depth);
    let lifted_metric = UltraMetric::new(arity, depth);
    let g = FinitaryOp::composed(GeneralEndo::Piecewise(f.clone()), arity, position).expect("valid position");
    let mut report = LiftReport {
        unary: Vec::new(),
        lifted: Vec::new(),
        bounds: Vec::new(),
        hypothesis: true,
        bounded: true,
        improving: true,
    };
    for n in 0..terms {
        let term = GeneralEndo::Piecewise(fs(n));
        let du = unary_metric.dist(&term, &GeneralEndo::Piecewise(f.clone()));
        let gn = FinitaryOp::composed(term, arity, position).expect("valid position");
        let dl = lifted_metric.dist_by(|t| gn.eval(t), |t| g.eval(t));
        let bound = du.exponent().map(|d| {
            let mut idx = vec![0u128; arity];
            idx[position] = d as u128;
            tuple_position(&idx) as usize
        });
        report.hypothesis &= du.within(n);
        report.bounded &= match bound {
            Some(m) => dl.within(m),
            None => dl.is_zero(),
        };
        if let (Some(prev), Some(cur)) = (report.lifted.last().and_then(Distance::exponent), dl.exponent()) {
            report.improving &= cur > prev;
        }
        report.unary.push(du);
        report.lifted.push(dl);
        report.bounds.push(bound);
    }
    report
}

/// A random table on the grid `0, …, size-1`: half the time arbitrary
/// values in `0..3`, otherwise a unary table read at one position.
pub fn random_gridop<R: rand::Rng + ?Sized>(rng: &mut R, size: usize, arity: usize) -> GridOp {
    let grid: Vec<Rat> = (0..size as i64).map(Rat::int).collect();
    if rng.gen_bool(0.5) {
        let table = (0..size.pow(arity as u32)).map(|_| Rat::int(rng.gen_range(0..3))).collect();
        GridOp::new(arity, grid, table).expect("sized table")
    } else {
        let pos = rng.gen_range(0..arity);
        let u: Vec<Rat> = (0..size).map(|_| Rat::int(rng.gen_range(-2..3))).collect();
        GridOp::from_fn(arity, grid.clone(), |t| u[grid.binary_search(&t[pos]).expect("on grid")].clone())
            .expect("non-empty grid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g01() -> Vec<Rat> {
        vec![Rat::zero(), Rat::one()]
    }

    #[test]
    fn min_is_not_essentially_unary() {
        let min = GridOp::from_fn(2, g01(), |t| t[0].clone().min(t[1].clone())).unwrap();
        assert_eq!(min.essential_positions(), BTreeSet::from([0, 1]));
        let w = preserves_rho(&min).unwrap_err();
        assert_ne!(w.values[0], w.values[1]);
        assert_ne!(w.values[2], w.values[3]);
        for p in 0..2 {
            assert!(w.rows[0][p] == w.rows[1][p] || w.rows[2][p] == w.rows[3][p]);
        }
        assert_eq!(reconstruct(&min), None);
    }

    #[test]
    fn projections_and_constants_preserve() {
        let p = FinitaryOp::projection(3, 1).unwrap().restrict(&g01()).unwrap();
        assert!(preserves_rho(&p).is_ok());
        assert_eq!(p.essential_positions(), BTreeSet::from([1]));
        let c = GridOp::from_fn(2, g01(), |_| Rat::int(4)).unwrap();
        assert!(c.essential_positions().is_empty());
        assert!(preserves_rho(&c).is_ok());
    }

    #[test]
    fn grid_text_round_trips() {
        let min = GridOp::from_fn(2, vec![Rat::zero(), Rat::frac(1, 2)], |t| t[0].clone().min(t[1].clone())).unwrap();
        assert_eq!(min.to_string().parse::<GridOp>().unwrap(), min);
        assert!(matches!("grid: 0 1\n0 -> 1".parse::<GridOp>(), Err(CloneError::Parse { .. })));
    }

    #[test]
    fn arity_zero_is_rejected() {
        assert_eq!(FinitaryOp::projection(0, 0).unwrap_err(), CloneError::ZeroArity);
        assert!(matches!(FinitaryOp::projection(2, 2), Err(CloneError::PositionOutOfRange { .. })));
    }
}
