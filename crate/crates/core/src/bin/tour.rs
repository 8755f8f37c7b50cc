//! Headless tour rendering, dataset validation and the HTTP service.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use datatours::detour::Recommender;
use datatours::facts::{FactRegistry, Tag};
use datatours::graph::{load_path, Graph, LoadOptions};
use datatours::render::RenderedTour;
use datatours::session::{Action, Env, Session};
use datatours::subject::Subject;
use datatours::tours::{export_tour, import_tour, instantiate, InstanceSection, TourCatalog, TourTemplate};

#[derive(Parser)]
#[command(name = "tour", version, about = "Guided data tours over network datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
    Html,
}

#[derive(Subcommand)]
enum Command {
    /// Render a tour over a dataset as a static slideshow.
    Run {
        /// Dataset JSON file, or a directory with nodes.csv and links.csv.
        #[arg(long)]
        dataset: PathBuf,
        /// Built-in tour id or a tour JSON file.
        #[arg(long)]
        tour: String,
        /// none, node:ID, pair:A,B, subgraph:A,B,..., subgraphs:A,B|C,D, path:A,B,... or JSON.
        #[arg(long)]
        subject: Option<Subject>,
        #[arg(long)]
        seed: Option<u64>,
        /// Append one section detour to every section.
        #[arg(long)]
        detours: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Treat CSV links as directed.
        #[arg(long)]
        directed: bool,
    },
    /// Load a dataset and print its capabilities.
    Validate {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        directed: bool,
    },
    /// List registered facts, optionally only those carrying one of the tags.
    ListFacts {
        #[arg(long, value_delimiter = ',')]
        tags: Vec<String>,
    },
    /// Print a tour template as JSON.
    Export {
        #[arg(long)]
        tour: String,
    },
    /// Run the HTTP service.
    #[cfg(feature = "server")]
    Serve {
        #[arg(long, env = "DATA_DIR", default_value = "data")]
        data_dir: PathBuf,
        #[arg(long, env = "BIND_ADDR", default_value = "127.0.0.1:8080")]
        bind: String,
        #[arg(long, env = "DEFAULT_SEED")]
        seed: Option<u64>,
    },
}

/// A failure with its exit code: 1 for load errors, 2 for tour or subject errors.
struct Failure {
    code: u8,
    message: String,
}

fn load_error(code: &str, e: impl std::fmt::Display) -> Failure {
    Failure { code: 1, message: format!("{code}: {e}") }
}

fn tour_error(code: &str, e: impl std::fmt::Display) -> Failure {
    Failure { code: 2, message: format!("{code}: {e}") }
}

fn load_dataset(path: &Path, directed: bool) -> Result<Graph, Failure> {
    load_path(path, &LoadOptions { directed, ..LoadOptions::default() }).map_err(|e| load_error(e.code(), e))
}

/// A built-in id, or a path to a tour file.
fn load_tour(arg: &str, catalog: &TourCatalog) -> Result<TourTemplate, Failure> {
    let path = Path::new(arg);
    if catalog.contains(arg) || !(path.exists() || arg.ends_with(".json")) {
        return catalog.get(arg).cloned().map_err(|e| tour_error(e.code(), e));
    }
    let text = std::fs::read_to_string(path).map_err(|e| load_error("MalformedFile", format!("{arg}: {e}")))?;
    import_tour(&text, FactRegistry::builtin()).map_err(|e| load_error(e.code(), e))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| load_error("Io", format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run(
    dataset: &Path,
    tour: &str,
    subject: Option<Subject>,
    seed: Option<u64>,
    detours: bool,
    format: Format,
    out: Option<&Path>,
    directed: bool,
) -> Result<(), Failure> {
    let g = load_dataset(dataset, directed)?;
    let mut catalog = TourCatalog::with_builtins();
    let t = load_tour(tour, &catalog)?;
    let reg = FactRegistry::builtin();
    let subject = subject.unwrap_or_default();
    let seed = seed.unwrap_or(0);
    let mut inst = instantiate(&t, reg, &g, &subject).map_err(|e| tour_error(e.code(), e))?;
    if detours {
        if !catalog.contains(&t.id) {
            catalog.register(t.clone(), reg).map_err(|e| tour_error(e.code(), e))?;
        }
        let recommender = Recommender::new(catalog.iter(), reg);
        let env = Env { graph: &g, registry: reg, catalog: &catalog, recommender: &recommender };
        let mut s = Session::start(env, "run", &t.id, subject, seed, 0).map_err(|e| tour_error(e.code(), e))?;
        for sec in &inst.sections {
            s.act(env, Action::ExtendSection { section: sec.title.clone() }, 0).map_err(|e| tour_error(e.code(), e))?;
        }
        inst.sections = inst
            .sections
            .iter()
            .map(|sec| InstanceSection {
                title: sec.title.clone(),
                slides: s.frame().slides.iter().filter(|x| x.section == sec.title).map(|x| x.slide.clone()).collect(),
            })
            .collect();
    }
    let doc = RenderedTour::new(&inst, &g, seed);
    let text = match format {
        Format::Json => doc.to_json(),
        Format::Markdown => doc.to_markdown(),
        Format::Html => doc.to_html(),
    };
    emit(&text, out)
}

fn validate(dataset: &Path, directed: bool) -> Result<(), Failure> {
    let g = load_dataset(dataset, directed)?;
    let caps = g.capabilities();
    let t = g.terminology();
    println!("dataset: {}", dataset.display());
    println!("nodes: {}", g.nodes().len());
    println!("links: {}", g.links().len());
    println!("directed: {}", yes(g.is_directed()));
    println!("weighted: {}", yes(caps.weighted));
    println!("temporal: {}", yes(caps.temporal));
    println!("geographic: {}", yes(caps.geographic));
    println!("terminology: {} / {}", t.node.singular, t.link.singular);
    Ok(())
}

fn list_facts(tags: &[String]) -> Result<(), Failure> {
    let reg = FactRegistry::builtin();
    let filter: BTreeSet<Tag> = if tags.is_empty() {
        Tag::ALL.into_iter().collect()
    } else {
        Tag::parse_set(tags).map_err(|e| tour_error(e.code(), e))?
    };
    for f in reg.facts_with_tags(&filter) {
        let tags: Vec<&str> = f.tags.iter().map(|t| t.as_str()).collect();
        println!("{}\t{}\t{}\t{}", f.id, f.scope, tags.join(","), f.title);
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { dataset, tour, subject, seed, detours, format, out, directed } => {
            run(&dataset, &tour, subject, seed, detours, format, out.as_deref(), directed)
        }
        Command::Validate { dataset, directed } => validate(&dataset, directed),
        Command::ListFacts { tags } => list_facts(&tags),
        Command::Export { tour } => {
            load_tour(&tour, &TourCatalog::with_builtins()).and_then(|t| emit(&export_tour(&t), None))
        }
        #[cfg(feature = "server")]
        Command::Serve { data_dir, bind, seed } => {
            let config = datatours::service::Config { data_dir, bind_addr: bind, default_seed: seed };
            tokio::runtime::Runtime::new()
                .map_err(|e| load_error("Io", e))
                .and_then(|rt| rt.block_on(datatours::service::serve(config)).map_err(|e| load_error("Io", e)))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
