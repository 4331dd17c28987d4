use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use weylkit::axioms::{certify, Certified, Level, Limits};
use weylkit::cover::{quotient_by_chamber_free_action, universal_cover, DEFAULT_COVER_CAP};
use weylkit::io;
use weylkit::presentation::{fundamental_group_presentation, TreeChoice};
use weylkit::weyl::{ChamberId, WeylData};

#[derive(Parser)]
#[command(name = "weylkit", version, about = "Batch tools for Weyl data files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a data file up to a level and print the report.
    Validate {
        file: PathBuf,
        #[arg(long, default_value = "building", value_parser = parse_level)]
        level: Level,
    },
    /// Build the universal cover and its projection.
    Cover {
        file: PathBuf,
        /// Base chamber id; defaults to the first chamber.
        #[arg(long)]
        base: Option<String>,
        /// Keep only geodesics of at most this length.
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        map_out: Option<PathBuf>,
    },
    /// Quotient by a chamber-free action, with canonical ids.
    Quotient {
        file: PathBuf,
        action: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a presentation of the fundamental group.
    Pi1 {
        file: PathBuf,
        #[arg(long)]
        tietze: bool,
        /// `least`, or `file:<path>` naming a JSON list of tree edge ids.
        #[arg(long, default_value = "least")]
        tree: String,
    },
    /// Extract the residue of a chamber as a standalone data file.
    Residue {
        file: PathBuf,
        /// Comma-separated generator labels.
        #[arg(long)]
        types: String,
        #[arg(long)]
        chamber: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the defining graph.
    DefiningGraph { file: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Domain(String),
    Input(String),
}

type Outcome = Result<(), Failure>;

fn parse_level(s: &str) -> Result<Level, String> {
    Level::parse(s).ok_or_else(|| format!("unknown level {s:?}"))
}

fn cap() -> Result<Option<usize>, Failure> {
    match std::env::var("WEYLKIT_CAP") {
        Ok(v) => v.parse().map(Some).map_err(|_| Failure::Input(format!("WEYLKIT_CAP is not a number: {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn limits() -> Result<Limits, Failure> {
    Ok(cap()?.map_or_else(Limits::default, Limits::with_cap))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<WeylData, Failure> {
    io::parse_weyl_data(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Certifies to the pre-Weyl level, which is what covers and quotients need.
fn pre_weyl(d: &WeylData) -> Result<Certified, Failure> {
    let c = certify(d, Level::PreWeyl, &limits()?);
    if c.report.reached() {
        return Ok(c);
    }
    let why: Vec<String> = c.report.failures().map(|k| format!("{}: {}", k.name, k.detail)).collect();
    Err(Failure::Domain(format!("data is not pre-Weyl ({})", why.join("; "))))
}

fn validate(file: &Path, level: Level) -> Outcome {
    let d = load(file)?;
    let c = certify(&d, level, &limits()?);
    let report = serde_json::to_value(&c.report).expect("report serializes");
    print!("{}", io::to_pretty(&report));
    if c.report.reached() {
        Ok(())
    } else {
        Err(Failure::Domain(format!("reached {} but not {}", c.report.level, level)))
    }
}

fn cover(file: &Path, base: Option<&str>, radius: Option<usize>, out: Option<&Path>, map_out: Option<&Path>) -> Outcome {
    let d = load(file)?;
    if radius.is_none() && !d.coxeter().is_spherical() {
        return Err(Failure::Domain(
            "the Coxeter group is infinite, so the universal cover is infinite; pass --radius".into(),
        ));
    }
    let base = match base {
        Some(name) => d.chamber_by_name(name).ok_or_else(|| Failure::Input(format!("unknown chamber {name:?}")))?,
        None => ChamberId(0),
    };
    let c = pre_weyl(&d)?;
    let u = universal_cover(&d, &c.index, base, radius, cap()?.unwrap_or(DEFAULT_COVER_CAP))
        .map_err(|e| Failure::Domain(e.to_string()))?;
    if let Some(p) = out {
        emit(&io::to_pretty(&io::weyl_data_to_json(&u.data)), Some(p))?;
    }
    if let Some(p) = map_out {
        emit(&io::to_pretty(&io::morphism_to_json(&u.data, &d, &u.projection)), Some(p))?;
    }
    let counts = json!({
        "chambers": u.data.n_chambers(),
        "edges": u.data.n_edges(),
        "complete": u.complete,
        "boundary": u.boundary.len(),
    });
    print!("{}", io::to_pretty(&counts));
    Ok(())
}

fn quotient(file: &Path, action: &Path, out: Option<&Path>) -> Outcome {
    let d = load(file)?;
    let a = io::parse_action(&read(action)?, &d).map_err(|e| Failure::Input(format!("{}: {e}", action.display())))?;
    let c = pre_weyl(&d)?;
    let (q, _) = quotient_by_chamber_free_action(&d, &a, &c.index).map_err(|e| Failure::Domain(e.to_string()))?;
    let (q, _, _) = q.canonicalize();
    emit(&io::to_pretty(&io::weyl_data_to_json(&q)), out)
}

fn tree_choice(choice: &str, d: &WeylData) -> Result<TreeChoice, Failure> {
    if choice == "least" {
        return Ok(TreeChoice::Least);
    }
    let Some(path) = choice.strip_prefix("file:") else {
        return Err(Failure::Input(format!("--tree must be `least` or `file:<path>`, got {choice:?}")));
    };
    let text = read(Path::new(path))?;
    let ids: Vec<String> = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    let edges = ids
        .iter()
        .map(|id| d.edge_by_name(id).ok_or_else(|| Failure::Input(format!("{path}: unknown edge {id:?}"))))
        .collect::<Result<_, _>>()?;
    Ok(TreeChoice::Edges(edges))
}

fn pi1(file: &Path, tietze: bool, tree: &str) -> Outcome {
    let d = load(file)?;
    let tree = tree_choice(tree, &d)?;
    let mut p = fundamental_group_presentation(&d, &tree).map_err(|e| Failure::Domain(e.to_string()))?;
    if tietze {
        p = p.tietze();
    }
    print!("{}", io::to_pretty(&io::presentation_to_json(&p)));
    println!("{p}");
    Ok(())
}

fn residue(file: &Path, types: &str, chamber: &str, out: Option<&Path>) -> Outcome {
    let d = load(file)?;
    let cox = d.coxeter();
    let mut gens = Vec::new();
    for label in types.split(',').map(str::trim).filter(|l| !l.is_empty()) {
        let s = (0..cox.rank())
            .find(|&s| cox.label(s) == label)
            .ok_or_else(|| Failure::Input(format!("unknown generator {label:?}")))?;
        if !gens.contains(&s) {
            gens.push(s);
        }
    }
    gens.sort();
    if gens.is_empty() {
        return Err(Failure::Input("--types names no generator".into()));
    }
    let c = d.chamber_by_name(chamber).ok_or_else(|| Failure::Input(format!("unknown chamber {chamber:?}")))?;
    let r = d.residue(&gens, c);
    emit(&io::to_pretty(&io::weyl_data_to_json(&r.data)), out)
}

fn defining_graph(file: &Path) -> Outcome {
    let d = load(file)?;
    let g: Value = serde_json::to_value(d.defining_graph()).expect("graph serializes");
    print!("{}", io::to_pretty(&g));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.command {
        Command::Validate { file, level } => validate(file, *level),
        Command::Cover { file, base, radius, out, map_out } => {
            cover(file, base.as_deref(), *radius, out.as_deref(), map_out.as_deref())
        }
        Command::Quotient { file, action, out } => quotient(file, action, out.as_deref()),
        Command::Pi1 { file, tietze, tree } => pi1(file, *tietze, tree),
        Command::Residue { file, types, chamber, out } => residue(file, types, chamber, out.as_deref()),
        Command::DefiningGraph { file } => defining_graph(file),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("weylkit: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("weylkit: {msg}");
            ExitCode::from(2)
        }
    }
}
