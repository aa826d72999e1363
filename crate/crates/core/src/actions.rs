//! Actions of the endomorphism monoid on finite subsets attached to the
//! nodes of a labelled forest: a map acts on `(B, t)` by applying it to
//! `B` and dropping down the branch of `t` until the label fits.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::endo::{idempotent_with_image, GeneralEndo, PiecewiseEndo};
use crate::ratcore::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate node {0}")]
    Duplicate(String),
    #[error("node {node} has unknown parent {parent}")]
    UnknownParent { node: String, parent: String },
    #[error("node {0} lies on a cycle")]
    Cycle(String),
    #[error("root {node} has label {label}; roots must be labelled 0")]
    NonZeroRoot { node: String, label: usize },
    #[error("node {node} has label {label}, not above its parent's label {parent_label}")]
    LabelNotIncreasing { node: String, label: usize, parent_label: usize },
    #[error("empty forest")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    name: String,
    parent: Option<NodeId>,
    label: usize,
}

/// A forest whose labels strictly increase away from the roots, all roots
/// labelled 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    nodes: Vec<Node>,
}

impl Forest {
    /// Builds a forest from `(name, parent, label)` triples in any order.
    pub fn new<'a>(spec: impl IntoIterator<Item = (&'a str, Option<&'a str>, usize)>) -> Result<Self, ForestError> {
        let spec: Vec<_> = spec.into_iter().collect();
        let mut ids = BTreeMap::new();
        for (i, (name, _, _)) in spec.iter().enumerate() {
            if ids.insert(*name, NodeId(i)).is_some() {
                return Err(ForestError::Duplicate(name.to_string()));
            }
        }
        let mut nodes = Vec::with_capacity(spec.len());
        for (name, parent, label) in &spec {
            let parent = match parent {
                None => None,
                Some(p) => Some(*ids.get(p).ok_or_else(|| ForestError::UnknownParent {
                    node: name.to_string(),
                    parent: p.to_string(),
                })?),
            };
            nodes.push(Node { name: name.to_string(), parent, label: *label });
        }
        let forest = Forest { nodes };
        forest.validate()?;
        Ok(forest)
    }

    fn validate(&self) -> Result<(), ForestError> {
        if self.nodes.is_empty() {
            return Err(ForestError::Empty);
        }
        for (i, n) in self.nodes.iter().enumerate() {
            let mut cur = n.parent;
            for _ in 0..self.nodes.len() {
                match cur {
                    Some(NodeId(j)) if j == i => return Err(ForestError::Cycle(n.name.clone())),
                    Some(p) => cur = self.nodes[p.0].parent,
                    None => break,
                }
            }
            if cur.is_some() {
                return Err(ForestError::Cycle(n.name.clone()));
            }
            match n.parent {
                None if n.label != 0 => {
                    return Err(ForestError::NonZeroRoot { node: n.name.clone(), label: n.label })
                }
                Some(p) if self.nodes[p.0].label >= n.label => {
                    return Err(ForestError::LabelNotIncreasing {
                        node: n.name.clone(),
                        label: n.label,
                        parent_label: self.nodes[p.0].label,
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// A single branch with the given labels, bottom first; the first must
    /// be 0.
    pub fn chain(labels: &[usize]) -> Result<Self, ForestError> {
        let names: Vec<String> = (0..labels.len()).map(|i| format!("n{i}")).collect();
        Forest::new(
            labels
                .iter()
                .enumerate()
                .map(|(i, &l)| (names[i].as_str(), i.checked_sub(1).map(|p| names[p].as_str()), l)),
        )
    }

    /// Root 0 with two leaves labelled 1 and 2.
    pub fn two_branch() -> Self {
        Forest::new([("root", None, 0), ("one", Some("root"), 1), ("two", Some("root"), 2)]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn label(&self, t: NodeId) -> usize {
        self.nodes[t.0].label
    }

    pub fn name(&self, t: NodeId) -> &str {
        &self.nodes[t.0].name
    }

    pub fn parent(&self, t: NodeId) -> Option<NodeId> {
        self.nodes[t.0].parent
    }

    /// `t` and its ancestors, from `t` down to the root.
    pub fn branch(&self, t: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(Some(t), move |s| self.parent(*s))
    }

    pub fn is_below_or_equal(&self, s: NodeId, t: NodeId) -> bool {
        self.branch(t).any(|a| a == s)
    }

    /// The first node, if any, whose label skips a value above a parent
    /// label of at least 2. Only forests without such nodes carry an
    /// action: a set cut short at the parent can be collapsed further by a
    /// later map than the uncut set would be.
    pub fn composition_unsafe_node(&self) -> Option<NodeId> {
        self.nodes().find(|&t| match self.parent(t) {
            Some(p) => self.label(p) >= 2 && self.label(t) > self.label(p) + 1,
            None => false,
        })
    }

    pub fn composition_safe(&self) -> bool {
        self.composition_unsafe_node().is_none()
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.nodes {
            let parent = n.parent.map_or("-", |p| self.nodes[p.0].name.as_str());
            writeln!(f, "{} {} {}", n.name, parent, n.label)?;
        }
        Ok(())
    }
}

/// One node per line, `id parent label`, with `-` for roots; `#` starts a
/// comment.
impl FromStr for Forest {
    type Err = ForestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut spec = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [id, parent, label] = fields[..] else {
                return Err(ForestError::Parse { line: i + 1, msg: format!("expected `id parent label`, got `{line}`") });
            };
            let label = label
                .parse()
                .map_err(|_| ForestError::Parse { line: i + 1, msg: format!("bad label `{label}`") })?;
            spec.push((id, (parent != "-").then_some(parent), label));
        }
        Forest::new(spec)
    }
}

/// A subset `B` of size `label(node)` attached to `node`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrbitPoint {
    pub node: NodeId,
    set: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node has label {label} but the set has {size} elements")]
pub struct SizeMismatch {
    pub label: usize,
    pub size: usize,
}

impl OrbitPoint {
    pub fn new(forest: &Forest, node: NodeId, set: impl IntoIterator<Item = Rat>) -> Result<Self, SizeMismatch> {
        let mut set: Vec<Rat> = set.into_iter().collect();
        set.sort();
        set.dedup();
        let label = forest.label(node);
        if set.len() != label {
            return Err(SizeMismatch { label, size: set.len() });
        }
        Ok(OrbitPoint { node, set })
    }

    pub fn set(&self) -> &[Rat] {
        &self.set
    }

    pub fn display<'a>(&'a self, forest: &'a Forest) -> impl fmt::Display + 'a {
        struct D<'a>(&'a OrbitPoint, &'a Forest);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let items: Vec<String> = self.0.set.iter().map(|x| x.to_string()).collect();
                write!(f, "({}, {{{}}})", self.1.name(self.0.node), items.join(", "))
            }
        }
        D(self, forest)
    }
}

fn image_set(f: &GeneralEndo, set: &[Rat]) -> Vec<Rat> {
    let mut out: Vec<Rat> = set.iter().map(|x| f.eval(x)).collect();
    out.sort();
    out.dedup();
    out
}

/// Moves `p` to the highest node of its branch whose label is at most
/// `|f(B)|`, keeping that many of the smallest elements of `f(B)`.
pub fn act(forest: &Forest, f: &GeneralEndo, p: &OrbitPoint) -> OrbitPoint {
    let image = image_set(f, &p.set);
    let node = forest
        .branch(p.node)
        .find(|&t| forest.label(t) <= image.len())
        .expect("roots are labelled 0");
    let mut set = image;
    set.truncate(forest.label(node));
    OrbitPoint { node, set }
}

/// `C ⊆ f(B)` for `act(f, (B, t)) = (C, t')`.
pub fn containment_check(forest: &Forest, f: &GeneralEndo, p: &OrbitPoint) -> bool {
    let image = image_set(f, &p.set);
    act(forest, f, p).set.iter().all(|c| image.binary_search(c).is_ok())
}

/// A finite-image idempotent fixing `p`: constant 0 at rank 0, otherwise
/// the idempotent with image `B`.
pub fn fixpoint_check(forest: &Forest, p: &OrbitPoint) -> Result<PiecewiseEndo, OrbitPoint> {
    let h = if p.set.is_empty() {
        PiecewiseEndo::constant(Rat::zero())
    } else {
        idempotent_with_image(&p.set).expect("non-empty")
    };
    let moved = act(forest, &GeneralEndo::Piecewise(h.clone()), p);
    if moved == *p {
        Ok(h)
    } else {
        Err(moved)
    }
}

/// Outcome of checking the action laws.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActionReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl ActionReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `act(id, p) = p` and `act(f ∘ g, p) = act(f, act(g, p))` for all
/// `f, g` in `maps` and `p` in `points`, plus descent along the branch, the
/// equal-size rule and containment.
pub fn verify_action(forest: &Forest, maps: &[GeneralEndo], points: &[OrbitPoint]) -> ActionReport {
    let mut report = ActionReport::default();
    let id = GeneralEndo::Piecewise(PiecewiseEndo::identity());
    for p in points {
        report.checks += 1;
        if act(forest, &id, p) != *p {
            report.failures.push(format!("identity moves {}", p.display(forest)));
        }
        for (i, g) in maps.iter().enumerate() {
            let gp = act(forest, g, p);
            report.checks += 1;
            if !forest.is_below_or_equal(gp.node, p.node) {
                report.failures.push(format!("map {i} climbs from {}", p.display(forest)));
            }
            if !containment_check(forest, g, p) {
                report.failures.push(format!("map {i} leaves f(B) at {}", p.display(forest)));
            }
            let image = image_set(g, &p.set);
            if image.len() == p.set.len() && (gp.node != p.node || gp.set != image) {
                report.failures.push(format!("map {i} is injective on {} but moves it", p.display(forest)));
            }
            for (j, f) in maps.iter().enumerate() {
                report.checks += 1;
                let direct = act(forest, &f.compose(g), p);
                let stepwise = act(forest, f, &gp);
                if direct != stepwise {
                    report.failures.push(format!(
                        "maps {j} after {i} at {}: {} vs {}",
                        p.display(forest),
                        direct.display(forest),
                        stepwise.display(forest)
                    ));
                }
            }
        }
    }
    report
}

/// A random point: a uniform node and distinct small rationals.
pub fn random_point<R: Rng + ?Sized>(forest: &Forest, rng: &mut R, height: i64) -> OrbitPoint {
    let node = NodeId(rng.gen_range(0..forest.len()));
    let n = forest.label(node);
    let mut set = Vec::new();
    while set.len() < n {
        let x = Rat::frac(rng.gen_range(-height..=height), rng.gen_range(1..=3));
        if !set.contains(&x) {
            set.push(x);
        }
    }
    OrbitPoint::new(forest, node, set).expect("sized to the label")
}
