//! Command-line front end: generation, class and axiom checking, closure
//! queries, Coxeter word calculus, building verification, ampleness
//! verification, DOT export.
//!
//! Exit codes are uniform across subcommands: 0 for success or a true
//! verdict, 1 for domain-negative outcomes (violations, unknown vertices,
//! disconnected inputs, failed witnesses), 2 for usage, I/O, or schema
//! errors.

use clap::{Args, Parser, Subcommand};
use pseudospace::amalgam::{check_class, check_sigma, generate, ClassVariant, Variant};
use pseudospace::ample::{
    extract_flag, flag_witness, verify_witness, AmpleInstance, AmpleVariant, ExtractOutcome,
};
use pseudospace::building::{
    find_reduced_closed_gallery, is_building_model, verify_building, vertex_weyl_distance,
};
use pseudospace::closure::{acl, classify_type, independent, project, TypeClass};
use pseudospace::coxeter::CoxWord;
use pseudospace::graph::LevelGraph;
use pseudospace::io;
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pseudospace", version, about = "Finite approximations of free pseudospaces")]
struct Cli {
    /// Optional JSON config file with default parameters; flags override.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Defaults loadable from a config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    n: Option<usize>,
    budget: Option<usize>,
    seed: Option<u64>,
    variant: Option<String>,
    cycle_bound: Option<usize>,
    word_bound: Option<usize>,
    gallery_bound: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a finite approximation and write graph + recipe JSON.
    Gen(GenArgs),
    /// Check class membership or the finitely checkable axioms.
    Check(CheckArgs),
    /// Closure, word, and distance queries.
    Query(QueryArgs),
    /// Verify the building axioms and hunt for reduced closed galleries.
    VerifyBuilding(VerifyBuildingArgs),
    /// Verify an n-ampleness witness.
    VerifyAmple(VerifyAmpleArgs),
    /// Export a graph as DOT, one rank per level.
    Export(ExportArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(short)]
    n: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    variant: Option<String>,
    /// Output path for the graph JSON.
    #[arg(short, long)]
    out: PathBuf,
    /// Output path for the recipe JSON; defaults to `<out>.recipe.json`.
    #[arg(long)]
    recipe: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(short, long)]
    graph: PathBuf,
    /// kn, knprime, or sigma.
    #[arg(long, default_value = "kn")]
    variant: String,
    #[arg(long)]
    cycle_bound: Option<usize>,
}

#[derive(Args)]
struct QueryArgs {
    #[command(subcommand)]
    query: Query,
}

#[derive(Subcommand)]
enum Query {
    /// Algebraic closure of a vertex set.
    Acl {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
    },
    /// Projection of a vertex on a set.
    Proj {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
    },
    /// Forking independence of a vertex from B over C.
    Indep {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long, value_delimiter = ',')]
        b: Vec<usize>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        c: Vec<usize>,
    },
    /// Regular-type class of a vertex over a set.
    Type {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
    },
    /// Weyl distance between two vertices.
    Weyl {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        pair: Vec<usize>,
    },
    /// Coxeter word calculus; words are comma-separated generator indices.
    Word {
        /// Dimension n (letters range over 0..=n).
        #[arg(long, default_value_t = 6)]
        dim: usize,
        /// Normal form of a word.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        nf: Option<Vec<usize>>,
        /// Is the word reduced?
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        reduced: Option<Vec<usize>>,
        /// Minimal double-coset representative of the word, with --left and
        /// --right the excluded generators.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        min_coset: Option<Vec<usize>>,
        #[arg(long)]
        left: Option<usize>,
        #[arg(long)]
        right: Option<usize>,
    },
}

#[derive(Args)]
struct VerifyBuildingArgs {
    #[arg(short, long)]
    graph: PathBuf,
    #[arg(long)]
    word_bound: Option<usize>,
    #[arg(long)]
    gallery_bound: Option<usize>,
}

#[derive(Args)]
struct VerifyAmpleArgs {
    #[arg(short, long)]
    graph: PathBuf,
    /// Witness instance JSON; defaults to the first chamber as flag witness.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, default_value = "pillay")]
    variant: String,
    /// Also run the flag-extraction corollary on a passing witness.
    #[arg(long)]
    extract: bool,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(short, long)]
    graph: PathBuf,
    #[arg(short, long)]
    out: PathBuf,
}

fn read_graph(path: &Path) -> Result<LevelGraph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    io::graph_from_json(&text).map_err(|e| e.to_string())
}

fn env_seed() -> Option<u64> {
    std::env::var("PSEUDOSPACE_SEED").ok()?.parse().ok()
}

fn run(cli: Cli) -> Result<u8, String> {
    let config: Config = match &cli.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("config: {e}"))?
        }
        None => Config::default(),
    };
    match cli.command {
        Command::Gen(args) => {
            let n = args.n.or(config.n).ok_or("gen needs -n")?;
            let budget = args.budget.or(config.budget).ok_or("gen needs --budget")?;
            let seed = args.seed.or(env_seed()).or(config.seed).unwrap_or(0);
            let variant = parse_variant(
                args.variant
                    .or(config.variant.clone())
                    .unwrap_or_else(|| "saturated".into()),
            )?;
            let (graph, recipe) = generate(n, budget, seed, variant).map_err(|e| e.to_string())?;
            std::fs::write(&args.out, io::graph_to_json(&graph))
                .map_err(|e| format!("{}: {e}", args.out.display()))?;
            let recipe_path = args.recipe.unwrap_or_else(|| {
                let mut p = args.out.as_os_str().to_owned();
                p.push(".recipe.json");
                PathBuf::from(p)
            });
            std::fs::write(&recipe_path, io::recipe_to_json(&recipe))
                .map_err(|e| format!("{}: {e}", recipe_path.display()))?;
            Ok(0)
        }
        Command::Check(args) => {
            let g = read_graph(&args.graph)?;
            let report = match args.variant.as_str() {
                "kn" => check_class(&g, ClassVariant::Kn),
                "knprime" => check_class(&g, ClassVariant::KnPrime),
                "sigma" => check_sigma(&g, args.cycle_bound.or(config.cycle_bound).unwrap_or(10)),
                other => return Err(format!("unknown check variant {other}")),
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("serializable")
            );
            Ok(if report.verdict { 0 } else { 1 })
        }
        Command::Query(args) => run_query(args.query),
        Command::VerifyBuilding(args) => {
            let g = read_graph(&args.graph)?;
            let word_bound = args.word_bound.or(config.word_bound).unwrap_or(4);
            let gallery_bound = args.gallery_bound.or(config.gallery_bound).unwrap_or(8);
            let report = verify_building(&g, word_bound);
            let closed = find_reduced_closed_gallery(&g, gallery_bound);
            let model = is_building_model(&g);
            let ok = report.verdict && closed.is_none();
            let doc = serde_json::json!({
                "axioms": report,
                "reduced_closed_gallery": closed.as_ref().map(|gal| serde_json::json!({
                    "chambers": gal.chambers,
                    "type": gal.type_word.letters(),
                })),
                "building_model": model,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            );
            Ok(if ok { 0 } else { 1 })
        }
        Command::VerifyAmple(args) => {
            let g = read_graph(&args.graph)?;
            let variant = match args.variant.as_str() {
                "pillay" => AmpleVariant::Pillay,
                "evans" => AmpleVariant::Evans,
                other => return Err(format!("unknown ample variant {other}")),
            };
            let inst: AmpleInstance = match &args.instance {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    serde_json::from_str(&text).map_err(|e| format!("instance: {e}"))?
                }
                None => flag_witness(&g, variant).map_err(|e| e.to_string())?,
            };
            let report = verify_witness(&g, &inst).map_err(|e| e.to_string())?;
            let extracted = if args.extract && report.verdict {
                match extract_flag(&g, &inst).map_err(|e| e.to_string())? {
                    ExtractOutcome::Flag(f) => Some(f),
                    _ => None,
                }
            } else {
                None
            };
            let doc = serde_json::json!({
                "instance": inst,
                "report": report,
                "extracted_flag": extracted,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            );
            Ok(if report.verdict { 0 } else { 1 })
        }
        Command::Export(args) => {
            let g = read_graph(&args.graph)?;
            std::fs::write(&args.out, io::graph_to_dot(&g))
                .map_err(|e| format!("{}: {e}", args.out.display()))?;
            Ok(0)
        }
    }
}

fn parse_variant(s: String) -> Result<Variant, String> {
    match s.as_str() {
        "saturated" => Ok(Variant::Saturated),
        "prime" => Ok(Variant::Prime),
        other => Err(format!("unknown variant {other}")),
    }
}

/// Domain errors exit 1; they are outcomes, not usage mistakes.
fn domain(e: pseudospace::Error) -> Result<u8, String> {
    eprintln!("{e}");
    Ok(1)
}

fn run_query(query: Query) -> Result<u8, String> {
    match query {
        Query::Acl { graph, set } => {
            let g = read_graph(&graph)?;
            match acl(&g, &set) {
                Ok(cl) => {
                    let doc = io::AclResult {
                        acl: cl.into_iter().collect(),
                    };
                    println!("{}", serde_json::to_string(&doc).expect("serializable"));
                    Ok(0)
                }
                Err(e) => domain(e),
            }
        }
        Query::Proj { graph, vertex, set } => {
            let g = read_graph(&graph)?;
            match project(&g, vertex, &set) {
                Ok(p) => {
                    let doc = io::ProjResult { proj: p.flag };
                    println!("{}", serde_json::to_string(&doc).expect("serializable"));
                    Ok(0)
                }
                Err(e) => domain(e),
            }
        }
        Query::Indep { graph, vertex, b, c } => {
            let g = read_graph(&graph)?;
            match independent(&g, vertex, &b, &c) {
                Ok(v) => {
                    let doc = io::IndepResult { independent: v };
                    println!("{}", serde_json::to_string(&doc).expect("serializable"));
                    Ok(0)
                }
                Err(e) => domain(e),
            }
        }
        Query::Type { graph, vertex, set } => {
            let g = read_graph(&graph)?;
            match classify_type(&g, vertex, &set) {
                Ok(t) => {
                    let name = match t {
                        TypeClass::Algebraic => "Algebraic",
                        TypeClass::I => "I",
                        TypeClass::II => "II",
                        TypeClass::III => "III",
                        TypeClass::IV => "IV",
                        TypeClass::Unclassified => "Unclassified",
                    };
                    let doc = io::TypeResult {
                        type_class: name.to_string(),
                    };
                    println!("{}", serde_json::to_string(&doc).expect("serializable"));
                    Ok(0)
                }
                Err(e) => domain(e),
            }
        }
        Query::Weyl { graph, pair } => {
            let g = read_graph(&graph)?;
            if pair.len() != 2 {
                return Err("weyl needs --pair x,y".into());
            }
            match vertex_weyl_distance(&g, pair[0], pair[1]) {
                Ok(Some(w)) => {
                    let doc = io::WeylResult {
                        weyl: Some(w.letters().to_vec()),
                    };
                    println!("{}", serde_json::to_string(&doc).expect("serializable"));
                    Ok(0)
                }
                Ok(None) => {
                    let doc = io::WeylResult { weyl: None };
                    println!("{}", serde_json::to_string(&doc).expect("serializable"));
                    Ok(1) // disconnected: domain-negative
                }
                Err(e) => domain(e),
            }
        }
        Query::Word {
            dim,
            nf,
            reduced,
            min_coset,
            left,
            right,
        } => {
            if let Some(letters) = nf {
                let w = CoxWord::new(dim, letters).map_err(|e| e.to_string())?;
                let doc = io::NfResult {
                    nf: w.normal_form().letters().to_vec(),
                };
                println!("{}", serde_json::to_string(&doc).expect("serializable"));
                return Ok(0);
            }
            if let Some(letters) = reduced {
                let w = CoxWord::new(dim, letters).map_err(|e| e.to_string())?;
                println!("{}", serde_json::json!({ "reduced": w.is_reduced() }));
                return Ok(0);
            }
            if let Some(letters) = min_coset {
                let (i, j) = (
                    left.ok_or("--min-coset needs --left")?,
                    right.ok_or("--min-coset needs --right")?,
                );
                let w = CoxWord::new(dim, letters).map_err(|e| e.to_string())?;
                return match w.min_double_coset_rep(i, j) {
                    Ok(rep) => {
                        println!("{}", serde_json::json!({ "min_coset": rep.letters() }));
                        Ok(0)
                    }
                    Err(e) => domain(e),
                };
            }
            Err("word needs one of --nf, --reduced, --min-coset".into())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
