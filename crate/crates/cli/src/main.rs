use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use septree::acceptance::{run_all, run_criterion, run_refinement_criteria, Scope, INDEPENDENT_CRITERIA};
use septree::corpus::caterpillar_branch_stree;
use septree::decomposition::{
    matroid_decomp_to_stree, stree_to_matroid_decomp, stree_to_treedecomp, treedecomp_to_stree, GraphDecompositionSpec,
    GraphTreeDecomposition, MatroidDecompositionSpec, MatroidTreeDecomposition,
};
use septree::family::{validate_stree, StarFamilyKind};
use septree::matroid::Matroid;
use septree::pipeline::{lean_graph_decomposition, lean_matroid_decomposition, Start};
use septree::refine::{refine_combined, refine_to_lean, refine_to_linked, RefineConfig, RefineOutcome};
use septree::stree::STree;
use septree::verify::{
    verify_lean_stree, verify_lean_td, verify_linked_stree, verify_linked_td, verify_matroid_lean, verify_theta_lean,
    Report, DEFAULT_PAIR_BUDGET, MATROID_VERIFY_CAP,
};
use septree::width::{
    brute_force_branchwidth, brute_force_matroid_branchwidth, brute_force_matroid_treewidth, brute_force_pathwidth,
    brute_force_treewidth, optimal_matroid_decomposition, optimal_tree_decomposition,
};
use septree::{Error, Graph, Rank, Universe};

#[derive(Parser)]
#[command(name = "septree", version, about = "Linked and lean tree-decompositions of small graphs and matroids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact widths of a graph (edge list or DIMACS) or matroid (JSON).
    Width {
        input: PathBuf,
        #[arg(long, value_enum)]
        measure: Option<Measure>,
    },
    /// Refine a decomposition to a linked and/or lean one.
    Refine(RefineArgs),
    /// Check a property of a decomposition.
    Verify {
        input: PathBuf,
        decomposition: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
        #[arg(long)]
        theta: Option<usize>,
        /// Largest number of subset pairs a lean check may examine.
        #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
        budget: usize,
    },
    /// Run the acceptance suite.
    Corpus {
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        /// Random connected graphs on 8 vertices.
        #[arg(long, default_value_t = 5)]
        random: usize,
        #[arg(long, default_value_t = 20_240_601)]
        seed: u64,
        /// Worker threads; independent criteria run concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    Tw,
    Pw,
    Bw,
    MatroidTw,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Valid,
    Linked,
    Lean,
    ThetaLean,
    MatroidLean,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Linked,
    Lean,
    Combined,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Fk,
    Pk,
    Tk,
    Ftheta,
    MatroidFk,
}

#[derive(clap::Args)]
struct RefineArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, value_enum, default_value = "fk")]
    family: FamilyArg,
    /// Family parameter; for `ftheta` the star-size bound.
    #[arg(long)]
    k: Option<Rank>,
    /// Order bound of `ftheta`; defaults to the star-size bound.
    #[arg(long)]
    theta: Option<Rank>,
    /// Starting decomposition (JSON); defaults to the single bag.
    #[arg(long)]
    start: Option<PathBuf>,
    /// Write the decomposition and summary here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record one trace entry per iteration.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
    budget: usize,
}

/// A failure with its exit code: 1 for a failed check, 2 for bad input.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Invariant(_) | Error::IterationCap(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

enum Instance {
    Graph(Graph),
    Matroid(Matroid),
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Matroids are JSON objects; anything else is read as a graph.
fn load_instance(path: &Path) -> CliResult<Instance> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        Ok(Instance::Matroid(Matroid::parse_json(&text)?))
    } else {
        Ok(Instance::Graph(Graph::parse(&text)?))
    }
}

/// A decomposition file, either bare or wrapped as `{"decomposition": ...}`
/// the way `refine` writes it.
fn load_decomposition<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let mut value: Value =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    if let Some(inner) = value.get_mut("decomposition") {
        value = inner.take();
    }
    serde_json::from_value(value).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serialisable"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Width { input, measure } => cmd_width(&input, measure),
        Command::Refine(args) => cmd_refine(&args),
        Command::Verify { input, decomposition, property, theta, budget } => {
            cmd_verify(&input, &decomposition, property, theta, budget)
        }
        Command::Corpus { max_n, random, seed, jobs } => cmd_corpus(max_n, random, seed, jobs),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_width(input: &Path, measure: Option<Measure>) -> CliResult<u8> {
    let mut out = serde_json::Map::new();
    match load_instance(input)? {
        Instance::Graph(g) => {
            let measure = measure.unwrap_or(Measure::Tw);
            if matches!(measure, Measure::Tw | Measure::All) {
                out.insert("treewidth".into(), json!(brute_force_treewidth(&g)?));
            }
            if matches!(measure, Measure::Pw | Measure::All) {
                out.insert("pathwidth".into(), json!(brute_force_pathwidth(&g)?));
            }
            if matches!(measure, Measure::Bw | Measure::All) {
                out.insert("branchwidth".into(), json!(brute_force_branchwidth(&g)?));
            }
            if matches!(measure, Measure::MatroidTw | Measure::All) {
                let m = Matroid::graphic(&g)?;
                out.insert("matroid_treewidth".into(), json!(brute_force_matroid_treewidth(&m)?));
            }
        }
        Instance::Matroid(m) => {
            let measure = measure.unwrap_or(Measure::MatroidTw);
            if matches!(measure, Measure::Tw | Measure::Pw) {
                return Err(Failure::input("tw and pw are defined for graphs; use matroid-tw or bw"));
            }
            if matches!(measure, Measure::MatroidTw | Measure::All) {
                out.insert("matroid_treewidth".into(), json!(brute_force_matroid_treewidth(&m)?));
            }
            if matches!(measure, Measure::Bw | Measure::All) {
                out.insert("branchwidth".into(), json!(brute_force_matroid_branchwidth(&m)?));
            }
        }
    }
    print_json(&out);
    Ok(0)
}

fn family_name(family: &StarFamilyKind) -> String {
    use septree::family::StarFamily;
    family.name()
}

/// Family constructor for a given size bound.
fn family_maker(args: &RefineArgs) -> impl Fn(Rank) -> CliResult<StarFamilyKind> + '_ {
    move |k| match args.family {
        FamilyArg::Fk => Ok(StarFamilyKind::Fk { k }),
        FamilyArg::Pk => Ok(StarFamilyKind::Pk { k }),
        FamilyArg::Tk => Ok(StarFamilyKind::Tk { k }),
        FamilyArg::Ftheta => Ok(StarFamilyKind::new_ftheta(args.theta.unwrap_or(k), k)?),
        FamilyArg::MatroidFk => Ok(StarFamilyKind::MatroidFk { k }),
    }
}

/// The least size bound whose family contains every star of `tree`.
fn least_k(
    universe: &Universe,
    tree: &STree,
    limit: Rank,
    make: &dyn Fn(Rank) -> CliResult<StarFamilyKind>,
) -> CliResult<Rank> {
    (1..=limit)
        .find(|&k| make(k).is_ok_and(|f| validate_stree(universe, tree, Some(&f)).valid))
        .ok_or_else(|| Failure::input(format!("no family with k <= {limit} contains the start")))
}

/// Where refinement starts and which family it runs over.
struct Plan {
    tree: STree,
    family: StarFamilyKind,
    start: &'static str,
}

struct Refined {
    tree: STree,
    family: StarFamilyKind,
    start: &'static str,
    outcomes: Vec<RefineOutcome>,
}

fn run_mode(universe: &Universe, plan: Plan, mode: Mode, config: &RefineConfig) -> CliResult<Refined> {
    let report = validate_stree(universe, &plan.tree, Some(&plan.family));
    if !report.valid {
        return Err(Failure::input(format!("the start is not an S-tree over {}", family_name(&plan.family))));
    }
    let outcome = match mode {
        Mode::Linked => refine_to_linked(universe, &plan.tree, &plan.family, config)?,
        Mode::Lean => refine_to_lean(universe, &plan.tree, &plan.family, config)?,
        Mode::Combined => refine_combined(universe, &plan.tree, &plan.family, config)?,
    };
    Ok(Refined { tree: outcome.tree.clone(), family: plan.family, start: plan.start, outcomes: vec![outcome] })
}

/// The single bag, or for `T_k`, whose stars have one or three members, a
/// caterpillar branch-decomposition.
fn default_graph_start(g: &Graph, family: FamilyArg) -> CliResult<(STree, &'static str)> {
    if family == FamilyArg::Tk {
        Ok((caterpillar_branch_stree(g)?, "caterpillar"))
    } else {
        Ok((STree::single_vertex(), "single-bag"))
    }
}

fn refine_config(args: &RefineArgs) -> RefineConfig {
    RefineConfig { max_iterations: args.max_iterations, trace: args.trace, ..RefineConfig::default() }
}

fn pipeline_start(start: Start) -> &'static str {
    match start {
        Start::SingleBag => "single-bag",
        Start::OptimalSeed => "optimal-seed",
    }
}

fn cmd_refine(args: &RefineArgs) -> CliResult<u8> {
    let config = refine_config(args);
    let make = family_maker(args);
    let (document, reports) = match load_instance(&args.input)? {
        Instance::Graph(g) => {
            if args.family == FamilyArg::MatroidFk {
                return Err(Failure::input("matroid-fk needs a matroid input"));
            }
            let universe = Universe::graph(&g)?;
            let limit = g.num_vertices() as Rank + 2;
            let refined = match (&args.start, args.k) {
                (Some(path), k) => {
                    let d = GraphTreeDecomposition::from_spec(&load_decomposition::<GraphDecompositionSpec>(path)?)?;
                    d.validate(&g)?;
                    let tree = treedecomp_to_stree(&g, &d)?;
                    let k = match k {
                        Some(k) => k,
                        None => least_k(&universe, &tree, limit, &make)?,
                    };
                    run_mode(&universe, Plan { tree, family: make(k)?, start: "input" }, args.mode, &config)?
                }
                (None, Some(k)) => {
                    let (tree, start) = default_graph_start(&g, args.family)?;
                    run_mode(&universe, Plan { tree, family: make(k)?, start }, args.mode, &config)?
                }
                (None, None) if matches!(args.family, FamilyArg::Pk | FamilyArg::Tk) => {
                    let (tree, start) = default_graph_start(&g, args.family)?;
                    let k = least_k(&universe, &tree, limit, &make)?;
                    run_mode(&universe, Plan { tree, family: make(k)?, start }, args.mode, &config)?
                }
                (None, None) => {
                    let family = make(brute_force_treewidth(&g)? as Rank + 2)?;
                    if args.mode == Mode::Lean && args.family == FamilyArg::Fk {
                        let run = lean_graph_decomposition(&g, &config)?;
                        Refined { tree: run.tree, family, start: pipeline_start(run.start), outcomes: run.outcomes }
                    } else {
                        let tree = treedecomp_to_stree(&g, &optimal_tree_decomposition(&g)?)?;
                        run_mode(&universe, Plan { tree, family, start: "optimal-seed" }, args.mode, &config)?
                    }
                }
            };
            let d = stree_to_treedecomp(&universe, &refined.tree)?;
            let reports = check_graph_output(&g, &universe, &d, &refined, args)?;
            let summary = summary(&refined, d.width(), args);
            (json!({"decomposition": d.to_spec(), "summary": summary}), reports)
        }
        Instance::Matroid(m) => {
            if args.family != FamilyArg::MatroidFk {
                return Err(Failure::input("matroid inputs need --family matroid-fk"));
            }
            let universe = m.universe();
            let limit = m.total_rank() + 2;
            let refined = match (&args.start, args.k) {
                (Some(path), k) => {
                    let d =
                        MatroidTreeDecomposition::from_spec(&load_decomposition::<MatroidDecompositionSpec>(path)?)?;
                    let tree = matroid_decomp_to_stree(&m, &d)?;
                    let k = match k {
                        Some(k) => k,
                        None => least_k(&universe, &tree, limit, &make)?,
                    };
                    run_mode(&universe, Plan { tree, family: make(k)?, start: "input" }, args.mode, &config)?
                }
                (None, Some(k)) => {
                    let plan = Plan { tree: STree::single_vertex(), family: make(k)?, start: "single-bag" };
                    run_mode(&universe, plan, args.mode, &config)?
                }
                (None, None) => {
                    let family = make(brute_force_matroid_treewidth(&m)? as Rank + 1)?;
                    if args.mode == Mode::Lean {
                        let run = lean_matroid_decomposition(&m, &config)?;
                        Refined { tree: run.tree, family, start: pipeline_start(run.start), outcomes: run.outcomes }
                    } else {
                        let tree = matroid_decomp_to_stree(&m, &optimal_matroid_decomposition(&m)?)?;
                        run_mode(&universe, Plan { tree, family, start: "optimal-seed" }, args.mode, &config)?
                    }
                }
            };
            let d = stree_to_matroid_decomp(&m, &refined.tree)?;
            let reports = check_matroid_output(&m, &universe, &d, &refined, args)?;
            let summary = summary(&refined, d.width(&m)?, args);
            (json!({"decomposition": d.to_spec(), "summary": summary}), reports)
        }
    };
    let failed: Vec<&Report> = reports.iter().filter(|r| !r.pass).collect();
    if !failed.is_empty() {
        print_json(&json!({"verification": failed}));
        eprintln!("error: the refined decomposition failed verification; nothing written");
        return Ok(1);
    }
    let mut document = document;
    document["summary"]["verification"] = json!(reports);
    match &args.out {
        Some(path) => {
            let text = serde_json::to_string_pretty(&document).expect("serialisable") + "\n";
            fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            print_json(&document["summary"]);
        }
        None => print_json(&document),
    }
    Ok(0)
}

fn summary(refined: &Refined, width: Rank, args: &RefineArgs) -> Value {
    let mut out = json!({
        "mode": match args.mode {
            Mode::Linked => "linked",
            Mode::Lean => "lean",
            Mode::Combined => "combined",
        },
        "family": refined.family,
        "start": refined.start,
        "width": width,
        "tree_vertices": refined.tree.num_vertices(),
        "iterations": refined.outcomes.iter().map(|o| o.iterations).sum::<usize>(),
    });
    if args.trace {
        out["runs"] = json!(refined.outcomes);
    }
    out
}

fn check_graph_output(
    g: &Graph,
    universe: &Universe,
    d: &GraphTreeDecomposition,
    refined: &Refined,
    args: &RefineArgs,
) -> CliResult<Vec<Report>> {
    let mut reports = vec![valid_report(d.validate(g).err(), json!({"bags": d.bags.len()}))];
    if args.mode != Mode::Lean {
        reports.push(verify_linked_stree(universe, &refined.tree)?);
        reports.push(verify_linked_td(g, d)?);
    }
    if args.mode != Mode::Linked {
        reports.push(verify_lean_stree(universe, &refined.tree, &refined.family, None, 1 << 16)?);
        match refined.family {
            StarFamilyKind::Fk { .. } => reports.push(verify_lean_td(g, d, args.budget)?),
            StarFamilyKind::FThetaP { theta, .. } => {
                reports.push(verify_theta_lean(g, d, theta as usize, args.budget)?)
            }
            _ => {}
        }
    }
    Ok(reports)
}

fn check_matroid_output(
    m: &Matroid,
    universe: &Universe,
    d: &MatroidTreeDecomposition,
    refined: &Refined,
    args: &RefineArgs,
) -> CliResult<Vec<Report>> {
    let mut reports = vec![valid_report(d.width(m).err(), json!({"vertices": d.vertices}))];
    if args.mode != Mode::Lean {
        reports.push(verify_linked_stree(universe, &refined.tree)?);
    }
    if args.mode != Mode::Linked {
        reports.push(verify_lean_stree(universe, &refined.tree, &refined.family, None, 1 << 16)?);
        if m.size() <= MATROID_VERIFY_CAP {
            reports.push(verify_matroid_lean(m, d)?);
        }
    }
    Ok(reports)
}

fn valid_report(error: Option<Error>, counts: Value) -> Report {
    Report { property: "valid".into(), pass: error.is_none(), witness: error.map(|e| json!(e.to_string())), counts }
}

fn cmd_verify(
    input: &Path,
    decomposition: &Path,
    property: Property,
    theta: Option<usize>,
    budget: usize,
) -> CliResult<u8> {
    let report = match load_instance(input)? {
        Instance::Graph(g) => {
            let d = GraphTreeDecomposition::from_spec(&load_decomposition::<GraphDecompositionSpec>(decomposition)?)?;
            let validity = d.validate(&g);
            if property == Property::Valid {
                valid_report(validity.err(), json!({"bags": d.bags.len()}))
            } else {
                validity?;
                match property {
                    Property::Linked => verify_linked_td(&g, &d)?,
                    Property::Lean => verify_lean_td(&g, &d, budget)?,
                    Property::ThetaLean => {
                        let theta = theta.ok_or_else(|| Failure::input("theta-lean needs --theta"))?;
                        verify_theta_lean(&g, &d, theta, budget)?
                    }
                    Property::MatroidLean => return Err(Failure::input("matroid-lean needs a matroid input")),
                    Property::Valid => unreachable!(),
                }
            }
        }
        Instance::Matroid(m) => {
            let d =
                MatroidTreeDecomposition::from_spec(&load_decomposition::<MatroidDecompositionSpec>(decomposition)?)?;
            let validity = d.width(&m);
            match property {
                Property::Valid => valid_report(validity.err(), json!({"vertices": d.vertices})),
                Property::Linked => {
                    validity?;
                    verify_linked_stree(&m.universe(), &matroid_decomp_to_stree(&m, &d)?)?
                }
                Property::Lean | Property::MatroidLean => {
                    validity?;
                    verify_matroid_lean(&m, &d)?
                }
                Property::ThetaLean => return Err(Failure::input("theta-lean needs a graph input")),
            }
        }
    };
    print_json(&report);
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_corpus(max_n: usize, random: usize, seed: u64, jobs: usize) -> CliResult<u8> {
    if !(3..=7).contains(&max_n) {
        return Err(Failure::input("--max-n must lie in 3..=7"));
    }
    let scope = Scope { max_n, random_graphs: random, seed, ..Scope::default() };
    let results = if jobs <= 1 {
        run_all(&scope)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Failure::input(format!("thread pool: {e}")))?;
        let (mut chained, independent) = pool.install(|| {
            use rayon::prelude::*;
            rayon::join(
                || run_refinement_criteria(&scope),
                || INDEPENDENT_CRITERIA.par_iter().filter_map(|&id| run_criterion(&scope, id)).collect::<Vec<_>>(),
            )
        });
        chained.extend(independent);
        chained.sort_by_key(|r| r.id);
        chained
    };
    for r in &results {
        println!("{r}");
    }
    Ok(if results.iter().all(|r| r.pass) { 0 } else { 1 })
}
