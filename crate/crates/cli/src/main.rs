use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use filtk::finspace::{FiniteSpace, SpaceFile};
use filtk::graphk::{fk_module, graph_checks, k_groups, tor_ck, BlockGraph, GraphFile};
use filtk::ntcat::NtCategory;
use filtk::ntmod::{
    check_exact, projective_dimension, tor, validate, Engine, GradedModule, ModuleFile,
};
use filtk::{Error, Result};
use serde_json::{json, Value};

mod report;

use report::Report;

#[derive(Parser)]
#[command(
    name = "filtk",
    version,
    about = "Tor obstructions and projective dimension in filtrated K-theory"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Verb {
    /// Locally closed subsets and shape of a finite space.
    SpaceInfo(SpaceArgs),
    /// Objects and graded hom ranks of a category.
    CatTable(SpaceArgs),
    /// Check that a module respects the relations of its category.
    ModuleValidate(ModuleArgs),
    /// Check the exact sequences of a module.
    ModuleExact(ModuleArgs),
    /// Tor groups against the semisimple part of the category.
    ModuleTor(TorArgs),
    /// Projective dimension via the Tor criterion.
    ModulePd(PdArgs),
    /// Triangularity, sinks, sources and condition (K).
    GraphCheck(GraphArgs),
    /// K-groups of every object.
    GraphK(GraphArgs),
    /// Filtrated K-theory as a module file.
    GraphFk(GraphArgs),
    /// Tor of the filtrated K-theory.
    GraphTor(GraphTorArgs),
}

#[derive(Args)]
struct SpaceArgs {
    /// Name of a built-in space (C2, S, Z1, Z2, ..., pt).
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
    /// Space description in JSON.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct ModuleArgs {
    /// Category name; read from the file when omitted.
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    file: PathBuf,
}

#[derive(Args)]
struct TorArgs {
    #[command(flatten)]
    module: ModuleArgs,
    /// Degrees to compute.
    #[arg(long = "n", value_delimiter = ',', default_values_t = [1usize, 2])]
    degrees: Vec<usize>,
    #[arg(long, default_value = "auto")]
    engine: Engine,
}

#[derive(Args)]
struct PdArgs {
    #[command(flatten)]
    module: ModuleArgs,
    /// Largest dimension to test.
    #[arg(long, default_value_t = 4)]
    max: usize,
    #[arg(long, default_value = "auto")]
    engine: Engine,
}

#[derive(Args)]
struct GraphArgs {
    /// Expected space; must agree with the file.
    #[arg(long)]
    space: Option<String>,
    /// Graph file, or the name of a bundled example (ck_z3.json, ck_s.json).
    #[arg(long)]
    file: PathBuf,
}

#[derive(Args)]
struct GraphTorArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long = "n", value_delimiter = ',', default_values_t = [1usize, 2])]
    degrees: Vec<usize>,
    #[arg(long, default_value = "auto")]
    engine: Engine,
}

const BUNDLED: [(&str, &str); 3] = [
    ("ck_z3.json", include_str!("../../../fixtures/ck_z3.json")),
    ("ck_s.json", include_str!("../../../fixtures/ck_s.json")),
    (
        "m_example.json",
        include_str!("../../../fixtures/m_example.json"),
    ),
];

/// File contents, falling back to the bundled examples by file name.
fn read_input(path: &Path) -> Result<String> {
    match std::fs::read_to_string(path) {
        Ok(s) => Ok(s),
        Err(e) => {
            let name = path
                .file_name()
                .and_then(|n| n.to_str())
                .unwrap_or_default();
            match BUNDLED.iter().find(|(n, _)| *n == name) {
                Some((_, text)) if path.parent().map_or(true, |p| p.as_os_str().is_empty()) => {
                    Ok(text.to_string())
                }
                _ => Err(Error::Parse(format!("cannot read {}: {e}", path.display()))),
            }
        }
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_input(path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn category(name: &str, rep: &mut Report) -> Result<&'static NtCategory> {
    let cat = NtCategory::builtin(name)?;
    if cat.reconstructed() {
        rep.warn(format!(
            "the relations of {name} are reconstructed from naturality equations"
        ));
    }
    Ok(cat)
}

fn load_module(a: &ModuleArgs, rep: &mut Report) -> Result<(&'static NtCategory, GradedModule)> {
    let f: ModuleFile = parse_json(&a.file)?;
    if let Some(s) = &a.space {
        if *s != f.space {
            return Err(Error::Parse(format!("module is over {}, not {s}", f.space)));
        }
    }
    let cat = category(&f.space, rep)?;
    let m = GradedModule::from_file(&f, &cat.table)?;
    Ok((cat, m))
}

fn load_graph(a: &GraphArgs) -> Result<BlockGraph> {
    let f: GraphFile = parse_json(&a.file)?;
    if let Some(s) = &a.space {
        if *s != f.space {
            return Err(Error::Parse(format!("graph is over {}, not {s}", f.space)));
        }
    }
    BlockGraph::from_file(&f)
}

/// Graph computations assume block-triangular adjacency.
fn require_triangular(g: &BlockGraph) -> Result<()> {
    let r = graph_checks(g);
    match r.violations.first() {
        None => Ok(()),
        Some((p, q)) => Err(Error::HypothesisNotVerified(format!(
            "edge from block {p} to block {q} is not triangular"
        ))),
    }
}

fn tor_lines(rep: &filtk::ntmod::TorReport, ns: &[usize], out: &mut Report) {
    for &n in ns {
        let g = rep.aggregate(n);
        out.line(format!("Tor_{n} even: {}", g.even));
        out.line(format!("Tor_{n} odd: {}", g.odd));
    }
    if rep.reconstructed {
        out.warn("a resolution used here has solved-for differentials".into());
    }
    out.json = nonzero(rep).to_json();
}

/// The report without its zero groups.
fn nonzero(rep: &filtk::ntmod::TorReport) -> filtk::ntmod::TorReport {
    let mut r = rep.clone();
    for per in r.entries.values_mut() {
        per.retain(|_, g| !g.is_zero());
    }
    r.entries.retain(|_, per| !per.is_empty());
    r
}

fn run(verb: &Verb) -> Result<Report> {
    let mut rep = Report::default();
    match verb {
        Verb::SpaceInfo(a) => {
            let x = match (&a.builtin, &a.file) {
                (Some(n), _) => FiniteSpace::builtin(n)?,
                (None, Some(p)) => FiniteSpace::from_file(&parse_json::<SpaceFile>(p)?)?,
                (None, None) => return Err(Error::Parse("give --builtin or --file".into())),
            };
            let lc: Vec<String> = x
                .lc_subsets(true)
                .iter()
                .map(|s| x.render(s.value))
                .collect();
            let acc = x.is_accordion_union()?;
            rep.line(x.to_string());
            rep.line(format!(
                "LC* = {} subsets; accordion: {}",
                lc.len(),
                if acc { "yes" } else { "no" }
            ));
            rep.line(lc.join(" "));
            rep.json =
                json!({"space": x.name(), "points": x.labels(), "lc_star": lc, "accordion": acc});
        }
        Verb::CatTable(a) => {
            let name = a
                .builtin
                .as_deref()
                .ok_or_else(|| Error::Parse("cat-table needs --builtin".into()))?;
            let cat = category(name, &mut rep)?;
            let t = &cat.table;
            let objs = t.objects();
            let mut ranks = Vec::new();
            for a in 0..t.len() {
                let row: Vec<(usize, usize)> = (0..t.len()).map(|b| t.graded_rank(a, b)).collect();
                let cells: Vec<String> = row.iter().map(|(e, o)| format!("{e}|{o}")).collect();
                rep.line(format!("{:>6}: {}", objs[a], cells.join(" ")));
                ranks.push(row);
            }
            rep.json = json!({"objects": objs, "ranks": ranks});
        }
        Verb::ModuleValidate(a) => {
            let (cat, m) = load_module(a, &mut rep)?;
            let v = validate(&m, &cat.table, &cat.presentation.relations);
            if v.is_valid() {
                rep.line("valid".into());
            }
            for s in &v.violations {
                rep.line(format!("violated: {s}"));
            }
            rep.json = json!({"valid": v.is_valid(), "violations": v.violations});
        }
        Verb::ModuleExact(a) => {
            let (cat, m) = load_module(a, &mut rep)?;
            let e = check_exact(cat, &m)?;
            match e.first_failure() {
                None => rep.line("exact".into()),
                Some(p) => rep.line(format!(
                    "not exact: ({}, {}) fails at {}",
                    p.u,
                    p.y,
                    p.failure.as_deref().unwrap_or("?")
                )),
            }
            rep.json = json!({"exact": e.is_exact(), "pairs": e.pairs});
        }
        Verb::ModuleTor(a) => {
            let (cat, m) = load_module(&a.module, &mut rep)?;
            let t = tor(cat, &m, &a.degrees, a.engine)?;
            for (y, per) in &t.entries {
                for (n, g) in per {
                    if !g.is_zero() {
                        rep.line(format!("Tor_{n}(S_{y}): {g}"));
                    }
                }
            }
            tor_lines(&t, &a.degrees, &mut rep);
        }
        Verb::ModulePd(a) => {
            let (cat, m) = load_module(&a.module, &mut rep)?;
            let pd = projective_dimension(cat, &m, a.max, a.engine)?;
            rep.line(format!("pd = {pd}"));
            rep.json = json!({"pd": pd});
        }
        Verb::GraphCheck(a) => {
            let g = load_graph(a)?;
            let r = graph_checks(&g);
            let yn = |b: bool| if b { "yes" } else { "no" };
            rep.line(format!("triangular: {}", yn(r.triangular)));
            rep.line(format!("no sinks: {}", yn(r.sinks.is_empty())));
            rep.line(format!("no sources: {}", yn(r.sources.is_empty())));
            rep.line(format!("condition (K): {}", yn(r.condition_k)));
            rep.json = serde_json::to_value(&r)?;
        }
        Verb::GraphK(a) => {
            let g = load_graph(a)?;
            require_triangular(&g)?;
            let cat = category(g.space.name(), &mut rep)?;
            let mut out = serde_json::Map::new();
            for (k, y) in cat.table.objects().iter().enumerate() {
                let s = k_groups(&g, cat.object_set(k))?;
                rep.line(format!("{y}: K_0 = {}, K_1 = {}", s.k0, s.k1));
                out.insert(
                    y.clone(),
                    json!({"k0": s.k0.to_string(), "k1": s.k1.to_string()}),
                );
            }
            rep.json = Value::Object(out);
        }
        Verb::GraphFk(a) => {
            let g = load_graph(a)?;
            require_triangular(&g)?;
            let cat = category(g.space.name(), &mut rep)?;
            let m = fk_module(&g)?;
            for (y, e) in cat.table.objects().iter().zip(&m.entries) {
                rep.line(format!("{y}: {}", e.normal_form()));
            }
            rep.json = serde_json::to_value(m.to_file(&cat.table)?)?;
        }
        Verb::GraphTor(a) => {
            let g = load_graph(&a.graph)?;
            require_triangular(&g)?;
            category(g.space.name(), &mut rep)?;
            let t = tor_ck(&g, &a.degrees, a.engine)?;
            tor_lines(&t, &a.degrees, &mut rep);
        }
    }
    Ok(rep)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::Json(_)
        | Error::Io(_)
        | Error::UnknownBuiltin(_)
        | Error::UnknownObject(_) => 2,
        Error::HypothesisNotVerified(_) => 3,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.verb) {
        Ok(rep) => {
            rep.emit(cli.format == Format::Json);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
