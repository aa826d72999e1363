use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qorder::actions::{act, Forest, OrbitPoint};
use qorder::endo::{cancellability_witness, epi_mono_factorize, GeneralEndo, PiecewiseEndo};
use qorder::gamma::{absorb, check_certificate, Embedding, GammaGeneric, Variant};
use qorder::ratcore::{rationals, Rat};
use qorder::suite::{render, run, Format, RunConfig, Suite};

#[derive(Parser)]
#[command(name = "qorder", about = "Endomorphisms of the rational order: checks and constructions")]
struct Cli {
    /// Seed for every randomised corpus.
    #[arg(long, global = true, default_value_t = RunConfig::default().seed)]
    seed: u64,
    /// Sample budget for the larger corpora.
    #[arg(long, global = true, default_value_t = RunConfig::default().budget)]
    budget: usize,
    /// Number of enumerated arguments the metric inspects.
    #[arg(long, global = true, default_value_t = RunConfig::default().depth)]
    depth: usize,
    #[arg(long, global = true, default_value = "text", value_parser = parse_format)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a piecewise map and print cancellability witnesses.
    Classify { file: PathBuf },
    /// Factor a piecewise map as surjection after injection and verify it.
    Factorize { file: PathBuf },
    /// Run a property suite, or `all`.
    Suite {
        name: String,
        /// Extra forest to check the action laws on.
        #[arg(long)]
        forest: Option<PathBuf>,
    },
    /// Build a generic embedding, evaluate it on the first points and dump its memos.
    Dump {
        #[arg(long, default_value = "core")]
        variant: Variant,
        /// Absorb this piecewise embedding and dump the resulting certificate instead.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
    /// Apply a map to a point of a forest action.
    Act {
        forest: PathBuf,
        map: PathBuf,
        /// Node name.
        node: String,
        /// Comma-separated rationals, as many as the node's label.
        #[arg(allow_hyphen_values = true)]
        set: String,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_map(path: &Path) -> Result<PiecewiseEndo, String> {
    read(path)?.parse().map_err(|e| format!("{}: {e}", path.display()))
}

fn read_forest(path: &Path) -> Result<Forest, String> {
    read(path)?.parse().map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig { seed: cli.seed, budget: cli.budget, depth: cli.depth };
    match dispatch(&cli, &cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<bool, String> {
    match &cli.command {
        Command::Classify { file } => classify(&read_map(file)?),
        Command::Factorize { file } => factorize(&read_map(file)?, cfg),
        Command::Suite { name, forest } => {
            let forest = forest.as_deref().map(read_forest).transpose()?;
            let suites = if name == "all" { Suite::ALL.to_vec() } else { vec![name.parse()?] };
            let reports: Vec<_> = suites.into_iter().map(|s| run(s, cfg, forest.as_ref())).collect();
            print!("{}", render(&reports, cfg, cli.format));
            Ok(reports.iter().all(|r| r.passed()))
        }
        Command::Dump { variant, map, points } => dump(*variant, map.as_deref(), *points),
        Command::Act { forest, map, node, set } => {
            let forest = read_forest(forest)?;
            let f = GeneralEndo::Piecewise(read_map(map)?);
            let t = forest.nodes().find(|&t| forest.name(t) == node).ok_or_else(|| format!("no node {node:?}"))?;
            let set = set
                .split(',')
                .map(|s| s.trim().parse::<Rat>().map_err(|e| format!("{s:?}: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            let p = OrbitPoint::new(&forest, t, set).map_err(|e| e.to_string())?;
            println!("{}", act(&forest, &f, &p).display(&forest));
            Ok(true)
        }
    }
}

fn classify(f: &PiecewiseEndo) -> Result<bool, String> {
    let class = f.classify();
    let missing = f.image().complement();
    let summary = if class.automorphism() {
        "automorphism".to_string()
    } else if class.constant {
        format!("constant, not surjective; missing {missing}")
    } else {
        let inj = if class.injective { "injective" } else { "not injective" };
        if class.surjective {
            format!("{inj}, surjective")
        } else {
            format!("{inj}, not surjective; missing {missing}")
        }
    };
    println!("{summary}");
    println!("map:");
    for line in f.to_string().lines() {
        println!("  {line}");
    }
    println!("image: {}", f.image());
    let w = cancellability_witness(f);
    if let Some((x, y)) = &w.left {
        println!("left cancellation fails: f({x}) = f({y}) = {}", f.eval(x));
    }
    if let Some(r) = &w.right {
        println!("right cancellation fails: two maps differing only at {} agree after f", r.missing);
    }
    Ok(true)
}

fn factorize(h: &PiecewiseEndo, cfg: &RunConfig) -> Result<bool, String> {
    let fact = epi_mono_factorize(h);
    let xs: Vec<Rat> = rationals().take(cfg.budget).collect();
    let ys: Vec<Rat> = xs.iter().map(|x| fact.mono.eval(x)).collect();
    let bad: Vec<&Rat> = xs.iter().zip(&ys).filter(|(x, y)| fact.epi.eval(y) != h.eval(x)).map(|(x, _)| x).collect();
    let mut order: Vec<(&Rat, &Rat)> = xs.iter().zip(&ys).collect();
    order.sort();
    let monotone = order.windows(2).all(|w| w[0].1 < w[1].1);
    if bad.is_empty() {
        println!("composite verified on {} points", xs.len());
    } else {
        println!("composite differs at {} of {} points, first at {}", bad.len(), xs.len(), bad[0]);
    }
    println!("injective factor strictly monotone on those points: {}", if monotone { "yes" } else { "no" });
    for (name, map) in [("injective factor", &fact.mono), ("surjective factor", &fact.epi)] {
        for memo in map.memos() {
            println!("{name} memo: {memo}");
        }
    }
    Ok(bad.is_empty() && monotone)
}

fn dump(variant: Variant, map: Option<&Path>, points: usize) -> Result<bool, String> {
    let sources: Vec<Rat> = rationals().take(points).collect();
    let cert = match map {
        None => qorder::gamma::Cert::Base(GammaGeneric::new(variant)),
        Some(path) => {
            let f = Embedding::piecewise(read_map(path)?).map_err(|e| e.to_string())?;
            absorb(f).gf
        }
    };
    println!("certificate: {}", cert.describe());
    for x in &sources {
        let (key, colour, rep) = cert.class_info(&cert.eval(x));
        let rep = rep.map_or_else(|| "-".to_string(), |r| r.to_string());
        println!("{x} -> {} class {key:?} {colour:?} representative {rep}", cert.eval(x));
    }
    let report = check_certificate(&cert, &sources, 100);
    println!("check: {} image points, {} pairs, {} failures", report.image_points, report.pairs, report.failures.len());
    for line in cert.memo_dump() {
        println!("{line}");
    }
    Ok(report.ok())
}
