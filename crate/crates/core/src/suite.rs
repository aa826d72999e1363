//! Property suites over seeded random corpora, and their reports.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::actions::{
    act, fixpoint_check, random_point, verify_action, Forest, OrbitPoint,
};
use crate::clone::{
    clone_compose, lift_convergence, preserves_rho, random_gridop, reconstruct, FinitaryOp, GridOp,
};
use crate::endo::{
    cancellability_witness, epi_mono_factorize, image_membership, random_embedding, random_piecewise, right_inverse,
    GeneralEndo, PiecewiseEndo,
};
use crate::gamma::{
    absorb, check_certificate, compose_certified, extend_pair, random_ppair, recover_witness, sim_related, Cert,
    Embedding, GammaGeneric, ImageSpec, RecoverCase, Recovery, Variant,
};
use crate::lazyiso::{IndexPt, Lex};
use crate::ratcore::{
    colour, enumerate, index_of, least_in, rationals, Colour, Endpoint, IntervalUnion, Rat, RatInterval,
};
use crate::topology::{approximant, density_witness, Distance, UltraMetric};

/// Knobs shared by every suite. Equal configs give equal reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    /// Sample count for the larger per-suite corpora.
    pub budget: usize,
    /// Number of enumerated arguments the metric looks at.
    pub depth: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: 1, budget: 200, depth: crate::topology::DEFAULT_DEPTH }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Ratcore,
    Sim,
    Gamma,
    Recover,
    Factor,
    Actions,
    Clone,
    Topology,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Ratcore,
        Suite::Sim,
        Suite::Gamma,
        Suite::Recover,
        Suite::Factor,
        Suite::Actions,
        Suite::Clone,
        Suite::Topology,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ratcore => "ratcore",
            Suite::Sim => "sim",
            Suite::Gamma => "gamma",
            Suite::Recover => "recover",
            Suite::Factor => "factor",
            Suite::Actions => "actions",
            Suite::Clone => "clone",
            Suite::Topology => "topology",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// One checked property: how many checks ran and which failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Property {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl Property {
    fn new(name: impl Into<String>) -> Self {
        Property { name: name.into(), checks: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub properties: Vec<Property>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(Property::passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Rows,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "rows" => Ok(Format::Rows),
            _ => Err(format!("unknown format `{s}`")),
        }
    }
}

/// Each suite draws from its own generator, so a suite's report does not
/// depend on which other suites ran.
fn rng_for(suite: Suite, cfg: &RunConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(suite as u64))
}

pub fn run(suite: Suite, cfg: &RunConfig, forest: Option<&Forest>) -> SuiteReport {
    let mut rng = rng_for(suite, cfg);
    let properties = match suite {
        Suite::Ratcore => ratcore(cfg, &mut rng),
        Suite::Sim => sim(cfg, &mut rng),
        Suite::Gamma => gamma(cfg, &mut rng),
        Suite::Recover => recover(cfg, &mut rng),
        Suite::Factor => factor(cfg, &mut rng),
        Suite::Actions => actions(cfg, &mut rng, forest),
        Suite::Clone => clone(cfg, &mut rng),
        Suite::Topology => topology(cfg, &mut rng),
    };
    SuiteReport { suite, properties }
}

const SHOWN_FAILURES: usize = 5;

pub fn render(reports: &[SuiteReport], cfg: &RunConfig, format: Format) -> String {
    let mut out = String::new();
    let all: Vec<&Property> = reports.iter().flat_map(|r| &r.properties).collect();
    let failed = all.iter().filter(|p| !p.passed()).count();
    match format {
        Format::Text => {
            let _ = writeln!(out, "seed {} budget {} depth {}", cfg.seed, cfg.budget, cfg.depth);
            for r in reports {
                let _ = writeln!(out, "suite {}", r.suite);
                for p in &r.properties {
                    let verdict = if p.passed() { "PASS" } else { "FAIL" };
                    let _ = writeln!(out, "  {verdict} {} [{} checks]", p.name, p.checks);
                    for n in &p.notes {
                        let _ = writeln!(out, "       {n}");
                    }
                    for f in p.failures.iter().take(SHOWN_FAILURES) {
                        let _ = writeln!(out, "       counterexample: {f}");
                    }
                    if p.failures.len() > SHOWN_FAILURES {
                        let _ = writeln!(out, "       ... {} more", p.failures.len() - SHOWN_FAILURES);
                    }
                }
            }
            let _ = writeln!(out, "total {} properties, {} failed", all.len(), failed);
        }
        Format::Rows => {
            let _ = writeln!(out, "suite\tproperty\tverdict\tchecks\tdetail");
            for r in reports {
                for p in &r.properties {
                    let verdict = if p.passed() { "PASS" } else { "FAIL" };
                    let detail: Vec<&str> =
                        p.notes.iter().chain(p.failures.iter().take(SHOWN_FAILURES)).map(String::as_str).collect();
                    let _ = writeln!(out, "{}\t{}\t{verdict}\t{}\t{}", r.suite, p.name, p.checks, detail.join("; "));
                }
            }
        }
    }
    out
}

fn first(n: usize) -> Vec<Rat> {
    rationals().take(n).collect()
}

fn small_rat(rng: &mut ChaCha8Rng, h: i64) -> Rat {
    Rat::frac(rng.gen_range(-h..=h), rng.gen_range(1..=h.max(1)))
}

fn ratcore(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Property> {
    let xs = first(cfg.budget);
    let mut density = Property::new("both colours between every pair of enumerated rationals");
    for (i, a) in xs.iter().enumerate() {
        for b in &xs[i + 1..] {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let gap = RatInterval::open(lo.clone(), hi.clone()).expect("distinct");
            for c in [Colour::Red, Colour::Blue] {
                let found = least_in(&gap, |x| colour(x) == c);
                density.check(found.is_some_and(|x| gap.contains(&x) && colour(&x) == c), || {
                    format!("no {c:?} point in {gap}")
                });
            }
        }
    }
    let mut bijection = Property::new("enumeration and indexing are inverse");
    for (n, x) in first(cfg.budget * 10).into_iter().enumerate() {
        bijection.check(index_of(&x) == n.into() && enumerate(n as u64) == x, || format!("index {n}"));
    }
    let mut field = Property::new("exact field laws");
    for _ in 0..cfg.budget {
        let (a, b, c) = (small_rat(rng, 50), small_rat(rng, 50), small_rat(rng, 50));
        field.check(&(&a + &b) - &b == a, || format!("{a} + {b} - {b}"));
        field.check(&a * (&b + &c) == &a * &b + &a * &c, || format!("distributivity at {a}, {b}, {c}"));
        if !b.is_zero() {
            field.check(&(&a * &b) / &b == a, || format!("{a} * {b} / {b}"));
        }
    }
    vec![density, bijection, field]
}

/// Finite unions of non-degenerate intervals. Sets with isolated points are
/// left out: on those, "at most one point between" is not transitive.
fn sim_corpus(rng: &mut ChaCha8Rng) -> Vec<(String, IntervalUnion)> {
    let jump: PiecewiseEndo = "(-inf,0) : x; [0,inf) : x + 1".parse().expect("valid");
    let mut specs = vec![("jump image".to_string(), jump.image()), ("all of Q".to_string(), IntervalUnion::all())];
    let end = |rng: &mut ChaCha8Rng, r: Rat| match rng.gen_range(0..3) {
        0 => Endpoint::Open(r),
        _ => Endpoint::Closed(r),
    };
    while specs.len() < 24 {
        let mut cuts: Vec<Rat> = (0..2 * rng.gen_range(1..=4)).map(|_| small_rat(rng, 8)).collect();
        cuts.sort();
        cuts.dedup();
        let mut parts = Vec::new();
        for (i, pair) in cuts.chunks(2).enumerate() {
            let lower = if i == 0 && rng.gen_bool(0.3) { Endpoint::Unbounded } else { end(rng, pair[0].clone()) };
            let upper = match pair.get(1) {
                Some(b) => end(rng, b.clone()),
                None => Endpoint::Unbounded,
            };
            parts.extend(RatInterval::new(lower, upper).ok());
        }
        let u = IntervalUnion::new(parts);
        if !u.is_empty() {
            specs.push((u.to_string(), u));
        }
    }
    specs
}

fn sim(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Property> {
    let specs = sim_corpus(rng);
    let mut equiv = Property::new("sim is reflexive, symmetric and transitive")
        .note(format!("{} image sets, {} triples each", specs.len(), cfg.budget));
    let mut convex = Property::new("sim classes are convex");
    for (name, u) in &specs {
        let spec = ImageSpec::Intervals(u.clone());
        for _ in 0..cfg.budget {
            let (x, y, z) = (small_rat(rng, 12), small_rat(rng, 12), small_rat(rng, 12));
            let s = |a: &Rat, b: &Rat| sim_related(&spec, a, b);
            equiv.check(s(&x, &x), || format!("{name}: {x} not related to itself"));
            equiv.check(s(&x, &y) == s(&y, &x), || format!("{name}: asymmetric at {x}, {y}"));
            equiv.check(!(s(&x, &y) && s(&y, &z)) || s(&x, &z), || format!("{name}: {x} ~ {y} ~ {z}"));
            let (lo, hi) = if x < y { (&x, &y) } else { (&y, &x) };
            if lo < &z && &z < hi && s(lo, hi) {
                convex.check(s(lo, &z), || format!("{name}: {z} between {lo} ~ {hi}"));
            }
        }
    }
    let jump = ImageSpec::Intervals(specs[0].1.clone());
    let mut examples = Property::new("sim examples on the jump image");
    examples.check(sim_related(&jump, &Rat::frac(1, 5), &Rat::frac(4, 5)), || "1/5 ~ 4/5".into());
    examples.check(!sim_related(&jump, &Rat::int(-1), &Rat::int(2)), || "-1 !~ 2".into());
    vec![equiv, convex, examples]
}

fn gamma(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Property> {
    let mut props = Vec::new();
    let sources = first(15);
    for v in Variant::ALL {
        let g = GammaGeneric::new(v);
        let report = check_certificate(&Cert::Base(Arc::clone(&g)), &sources, 100);
        let mut p = Property::new(format!("generic {v}: red classes apart, blue between, endpoints"));
        p.checks = report.image_points + report.pairs;
        p.failures = report.failures;
        for _ in 0..cfg.budget {
            let (x, y) = (small_rat(rng, 30), small_rat(rng, 30));
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            p.check(g.class_of(&lo) <= g.class_of(&hi), || format!("class order reversed at {lo}, {hi}"));
        }
        props.push(p);
    }

    let mut ext = Property::new("valid pairs extend to commuting automorphisms");
    let xs = first(cfg.budget);
    for i in 0..50 {
        let g = GammaGeneric::new(Variant::ALL[i % 4]);
        let pair = random_ppair(&g, rng, 5, 2);
        let ok = match extend_pair(&g, &pair) {
            Err(e) => {
                ext.check(false, || format!("pair {i}: {e}"));
                continue;
            }
            Ok(c) => c,
        };
        for (x, y) in pair.a.iter() {
            ext.check(ok.alpha.eval(x) == *y, || format!("pair {i}: alpha misses {x} -> {y}"));
        }
        for (x, y) in pair.b.iter() {
            ext.check(ok.beta.eval(x) == *y, || format!("pair {i}: beta misses {x} -> {y}"));
        }
        for x in &xs {
            ext.check(ok.alpha.eval(&g.eval(x)) == g.eval(&ok.beta.eval(x)), || format!("pair {i}: at {x}"));
        }
    }
    props.push(ext);

    let mut composed = Property::new("composites of generics are generic");
    for v in Variant::ALL {
        let (g1, g2) = (GammaGeneric::new(v), GammaGeneric::new(v));
        let c = compose_certified(&g2, Cert::Base(g1)).expect("same variant");
        let report = check_certificate(&c, &sources, 100);
        composed.checks += report.image_points + report.pairs;
        composed.failures.extend(report.failures.into_iter().map(|f| format!("{v}: {f}")));
    }
    props.push(composed);

    let mut coterminal = Property::new("absorbing coterminal embeddings");
    for _ in 0..20 {
        let f = random_embedding(rng, 4, 3);
        let name = f.to_string().replace('\n', "; ");
        absorb_into(&mut coterminal, Embedding::piecewise(f).expect("injective"), &name, Variant::Core, &sources);
    }
    props.push(coterminal);

    let mut bounded = Property::new("absorbing bounded embeddings");
    for i in 0..10 {
        let a = small_rat(rng, 5);
        let b = &a + Rat::frac(rng.gen_range(1..=6), rng.gen_range(1..=3));
        let (lo, hi, v) = match i % 3 {
            0 => (Some(&a), Some(&b), Variant::Pm),
            1 => (None, Some(&b), Variant::Plus),
            _ => (Some(&a), None, Variant::Minus),
        };
        let iv = RatInterval::between(lo, hi).expect("ordered");
        let name = iv.to_string();
        absorb_into(&mut bounded, Embedding::onto_interval(iv).expect("open"), &name, v, &sources);
    }
    props.push(bounded);
    props
}

fn absorb_into(p: &mut Property, f: Embedding, name: &str, want: Variant, sources: &[Rat]) {
    let a = absorb(f.clone());
    p.check(a.variant == want, || format!("{name}: variant {} not {want}", a.variant));
    for (label, cert) in [("g", &a.g), ("gf", &a.gf)] {
        let report = check_certificate(cert, sources, 100);
        p.checks += report.image_points + report.pairs;
        p.failures.extend(report.failures.into_iter().map(|e| format!("{name}: {label}: {e}")));
    }
    for x in &sources[..5] {
        p.check(a.gf.eval(x) == a.g.eval(&f.eval(x)), || format!("{name}: gf differs from g f at {x}"));
    }
}

fn recover(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Property> {
    let g = GammaGeneric::new(Variant::Core);
    let probes = first(cfg.budget.min(60));
    let mut sep = Property::new("witness pairs fix u and move s");
    let mut fwd = Property::new("pairs fixing u fix g(u)");
    let mut counts = [0usize; 3];
    for i in 0..50 {
        let u = small_rat(rng, 10);
        let s = match i % 4 {
            0 => g.eval(&small_rat(rng, 10)),
            1 => g.point(&Lex(IndexPt::Fin(Rat::frac(2 * rng.gen_range(-5..5) + 1, 1)), small_rat(rng, 4))),
            2 => g.point(&Lex(g.class_of(&g.eval(&small_rat(rng, 10))), Rat::frac(rng.gen_range(1..9), 7))),
            _ => small_rat(rng, 10),
        };
        match recover_witness(&g, &u, &s) {
            Recovery::Equal => sep.check(s == g.eval(&u), || format!("{s} called equal to g({u})")),
            Recovery::Witness { case, t, commuting, .. } => {
                counts[case as usize] += 1;
                sep.check(commuting.beta.eval(&u) == u, || format!("beta moves {u}"));
                sep.check(commuting.alpha.eval(&s) == t && t != s, || format!("alpha fixes {s}"));
                fwd.check(commuting.alpha.eval(&g.eval(&u)) == g.eval(&u), || format!("alpha moves g({u})"));
            }
        }
    }
    sep = sep.note(format!(
        "cases: image point {}, blue class {}, red class {}",
        counts[RecoverCase::ImagePoint as usize],
        counts[RecoverCase::BlueClass as usize],
        counts[RecoverCase::RedClass as usize]
    ));
    let mut fixed = 0;
    for _ in 0..50 {
        let pair = random_ppair(&g, rng, 4, 1);
        let Ok(c) = extend_pair(&g, &pair) else {
            fwd.check(false, || "random pair failed to extend".into());
            continue;
        };
        for u in pair.b.domain().chain(&probes) {
            if c.beta.eval(u) == *u {
                fixed += 1;
                fwd.check(c.alpha.eval(&g.eval(u)) == g.eval(u), || format!("alpha moves g({u})"));
            }
        }
    }
    fwd = fwd.note(format!("{fixed} fixed points of beta in random pairs"));
    let mut equal = Property::new("s = g(u) is recognised");
    for u in first(20) {
        equal.check(matches!(recover_witness(&g, &u, &g.eval(&u)), Recovery::Equal), || format!("at {u}"));
    }
    vec![sep, fwd, equal]
}

fn factor(_cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Property> {
    let mut rinv = Property::new("right inverses of surjections");
    let samples: Vec<Rat> = (0..500).map(|_| small_rat(rng, 40)).collect();
    let mut found = 0;
    while found < 20 {
        let g = random_piecewise(rng, 4, 3);
        if !g.classify().surjective {
            continue;
        }
        found += 1;
        let fixset: Vec<Rat> = (0..3).map(|_| small_rat(rng, 4)).collect();
        let s = right_inverse(&g, &fixset).expect("surjective");
        rinv.check(g.compose(&s) == PiecewiseEndo::identity(), || format!("g s is not the identity for {g}"));
        rinv.check(s.classify().injective, || format!("section of {g} not injective"));
        for x in &samples {
            rinv.check(g.eval(&s.eval(x)) == *x, || format!("g s({x}) != {x}"));
        }
    }

    let mut fact = Property::new("epi-mono factorisation");
    let xs = first(300);
    let targets = first(100);
    for i in 0..50 {
        let h = random_piecewise(rng, 4, 3);
        let f = epi_mono_factorize(&h);
        let ys: Vec<Rat> = xs.iter().map(|x| f.mono.eval(x)).collect();
        for (x, y) in xs.iter().zip(&ys) {
            fact.check(f.epi.eval(y) == h.eval(x), || format!("map {i}: epi mono differs at {x}"));
        }
        let mut order: Vec<(&Rat, &Rat)> = xs.iter().zip(&ys).collect();
        order.sort();
        fact.check(order.windows(2).all(|w| w[0].1 < w[1].1), || format!("map {i}: mono not increasing"));
        if i < 10 || i % 5 == 0 {
            for r in &targets {
                let ok = f.epi.preimage(r).is_some_and(|x| f.epi.eval(&x) == *r);
                fact.check(ok, || format!("map {i}: no preimage of {r}"));
            }
        }
    }

    let mut classes = Property::new("classification agrees with witnesses");
    let c0 = PiecewiseEndo::constant(Rat::zero());
    for _ in 0..100 {
        let f = random_piecewise(rng, 4, 3);
        let class = f.classify();
        let w = cancellability_witness(&f);
        classes.check(class.injective == w.left.is_none(), || format!("injectivity of {f}"));
        classes.check(class.surjective == w.right.is_none(), || format!("surjectivity of {f}"));
        if let Some((p, q)) = &w.left {
            classes.check(p != q && f.eval(p) == f.eval(q), || format!("bad left witness for {f}"));
        }
        if let Some(r) = &w.right {
            let ok = r.g != r.h && r.g.compose(&f) == r.h.compose(&f) && !f.image().contains(&r.missing);
            classes.check(ok, || format!("bad right witness for {f}"));
        }
        let left_zero = [c0.clone(), PiecewiseEndo::shift(Rat::one()), random_piecewise(rng, 3, 3)]
            .iter()
            .all(|g| f.compose(g) == f);
        classes.check(class.constant == left_zero, || format!("left-zero test for {f}"));
        let q = small_rat(rng, 6);
        let ok = match image_membership(&f, &q) {
            Some(r) => f.eval(&r) == q,
            None => !f.image().contains(&q),
        };
        classes.check(ok, || format!("image membership of {q} under {f}"));
    }
    vec![rinv, fact, classes]
}

fn actions(cfg: &RunConfig, rng: &mut ChaCha8Rng, extra: Option<&Forest>) -> Vec<Property> {
    let maps: Vec<GeneralEndo> = (0..20).map(|_| GeneralEndo::Piecewise(random_piecewise(rng, 4, 3))).collect();
    let mut forests = vec![
        ("chain 0<1<2".to_string(), Forest::chain(&[0, 1, 2]).expect("valid")),
        ("branches 0<1, 0<2".to_string(), Forest::two_branch()),
        ("chain 0<1<2<3".to_string(), Forest::chain(&[0, 1, 2, 3]).expect("valid")),
    ];
    if let Some(f) = extra {
        forests.push(("given forest".to_string(), f.clone()));
    }
    let mut props = Vec::new();
    for (name, forest) in &forests {
        let points: Vec<OrbitPoint> = (0..20).map(|_| random_point(forest, rng, 6)).collect();
        let report = verify_action(forest, &maps, &points);
        let mut p = Property::new(format!("action laws on {name}"));
        p.checks = report.checks;
        p.failures = report.failures;
        if let Some(t) = forest.composition_unsafe_node() {
            p = p.note(format!("node {} skips labels above a label of at least 2", forest.name(t)));
        }
        props.push(p);
    }

    let mut gaps = Property::new("label gaps above labels of at least 2 break composition");
    for labels in [[0, 2, 4], [0, 2, 5], [0, 3, 5]] {
        let forest = Forest::chain(&labels).expect("valid");
        let Some(t) = forest.composition_unsafe_node() else {
            gaps.check(false, || format!("{labels:?} not flagged"));
            continue;
        };
        let (low, high) = (forest.label(forest.parent(t).expect("not a root")), forest.label(t));
        let p = OrbitPoint::new(&forest, t, (0..high as i64).map(Rat::int)).expect("sized");
        let squeeze = format!("(-inf,{low}] : x; ({low},inf) : {low}");
        let g = GeneralEndo::Piecewise(squeeze.parse().expect("valid"));
        let f = GeneralEndo::Piecewise("(-inf,1] : 0; (1,inf) : x + 10".parse().expect("valid"));
        let stepwise = act(&forest, &f, &act(&forest, &g, &p));
        let direct = act(&forest, &f.compose(&g), &p);
        gaps.check(stepwise != direct, || format!("{labels:?}: no counterexample"));
    }
    props.push(gaps.note("expected: such forests carry no action"));

    let forest = Forest::chain(&[0, 1, 2, 3]).expect("valid");
    let mut fix = Property::new("finite-image idempotents fix points");
    for _ in 0..100 {
        let p = random_point(&forest, rng, 8);
        fix.check(fixpoint_check(&forest, &p).is_ok(), || format!("{}", p.display(&forest)));
    }
    props.push(fix);

    let mut agree = Property::new("maps agreeing on B act alike");
    for _ in 0..cfg.budget.min(100) {
        let p = random_point(&forest, rng, 5);
        let f = random_piecewise(rng, 4, 3);
        let pts: Vec<(Rat, Rat)> = p.set().iter().map(|x| (x.clone(), f.eval(x))).collect();
        let g = PiecewiseEndo::interpolate(&pts).expect("monotone values");
        let (f, g) = (GeneralEndo::Piecewise(f), GeneralEndo::Piecewise(g));
        agree.check(act(&forest, &f, &p) == act(&forest, &g, &p), || format!("{}", p.display(&forest)));
    }
    props.push(agree);
    props
}

fn clone(_cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Property> {
    let mut charac = Property::new("preserving the relation iff at most one essential position");
    let mut rec = Property::new("preserving operations are u . pi_i");
    let mut ops: Vec<GridOp> = Vec::new();
    for _ in 0..500 {
        let (size, arity) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
        ops.push(random_gridop(rng, size, arity));
    }
    for size in 1..=4usize {
        let grid: Vec<Rat> = (0..size as i64).map(Rat::int).collect();
        for arity in 1..=3 {
            for j in 0..arity {
                ops.push(FinitaryOp::projection(arity, j).expect("valid").restrict(&grid).expect("grid"));
            }
            ops.push(GridOp::from_fn(arity, grid.clone(), |_| Rat::int(7)).expect("grid"));
        }
    }
    let mut preserving = 0;
    for op in &ops {
        let preserves = preserves_rho(op).is_ok();
        preserving += usize::from(preserves);
        charac.check(preserves == (op.essential_positions().len() <= 1), || op.to_string().replace('\n', "; "));
        rec.check(reconstruct(op).is_some() == preserves, || op.to_string().replace('\n', "; "));
    }
    charac = charac.note(format!("{} operations, {preserving} preserving", ops.len()));

    let mut closed = Property::new("compositions stay essentially unary");
    let grid = vec![Rat::int(-1), Rat::zero(), Rat::frac(1, 2), Rat::int(2)];
    let op = |rng: &mut ChaCha8Rng, k: usize| {
        let j = rng.gen_range(0..k);
        if rng.gen_bool(0.3) {
            FinitaryOp::projection(k, j).expect("valid")
        } else {
            FinitaryOp::composed(GeneralEndo::Piecewise(random_piecewise(rng, 3, 3)), k, j).expect("valid")
        }
    };
    for _ in 0..1000 {
        let (n, k) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let f = op(rng, n);
        let gs: Vec<FinitaryOp> = (0..n).map(|_| op(rng, k)).collect();
        let c = clone_compose(&f, &gs).expect("arities match");
        let t: Vec<Rat> = (0..k).map(|_| small_rat(rng, 9)).collect();
        let inner: Vec<Rat> = gs.iter().map(|g| g.eval(&t)).collect();
        closed.check(c.eval(&t) == f.eval(&inner), || format!("{f:?} after {gs:?} at {t:?}"));
        closed.check(preserves_rho(&c.restrict(&grid).expect("grid")).is_ok(), || format!("{c:?}"));
    }
    vec![charac, rec, closed]
}

fn topology(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Property> {
    let metric = UltraMetric::unary(cfg.depth);
    let mut ultra = Property::new("ultrametric inequality");
    let mut maps = Vec::new();
    for _ in 0..8 {
        let f = random_piecewise(rng, 4, 3);
        for n in [1u64, 4, 9] {
            maps.push(GeneralEndo::Piecewise(approximant(&f, n)));
        }
        maps.push(GeneralEndo::Piecewise(f));
    }
    for _ in 0..500 {
        let mut pick = || &maps[rng.gen_range(0..maps.len())];
        let (f, g, h) = (pick(), pick(), pick());
        let (fg, gh, fh) = (metric.dist(f, g), metric.dist(g, h), metric.dist(f, h));
        let max = if fg.cmp_value(&gh).is_lt() { gh } else { fg };
        ultra.check(!fh.cmp_value(&max).is_gt(), || format!("{fh} > max({fg}, {gh})"));
    }

    let mut lift = Property::new("convergence lifts along projections");
    let mut moduli = Vec::new();
    for i in 0..5 {
        let f = random_embedding(rng, 3, 3);
        for (j, k) in [(0, 1), (0, 2), (1, 2)] {
            let r = lift_convergence(|n| approximant(&f, n as u64), &f, j, k, 10, cfg.depth);
            lift.check(r.hypothesis && r.bounded && r.improving, || format!("map {i}, position {j} of {k}: {r:?}"));
            if i == 0 {
                let m: Vec<String> = r.lifted.iter().map(Distance::to_string).collect();
                moduli.push(format!("position {j} of {k}: {}", m.join(" ")));
            }
        }
    }
    for m in moduli {
        lift = lift.note(m);
    }

    let mut dense = Property::new("automorphisms approach embeddings");
    let mut found = 0;
    while found < 20 {
        let f = random_piecewise(rng, 4, 3);
        if !f.classify().injective {
            continue;
        }
        found += 1;
        let f = GeneralEndo::Piecewise(f);
        for n in 0..=10u64 {
            match density_witness(&f, n) {
                Ok(a) => dense.check(metric.dist(&a, &f).within(n as usize + 1), || format!("n = {n}")),
                Err(e) => dense.check(false, || format!("n = {n}: {e}")),
            }
        }
    }
    let g = GammaGeneric::new(Variant::Core).as_endo();
    for n in 0..=10u64 {
        let ok = density_witness(&g, n).is_ok_and(|a| metric.dist(&a, &g).within(n as usize + 1));
        dense.check(ok, || format!("generic, n = {n}"));
    }
    vec![ultra, lift, dense]
}
