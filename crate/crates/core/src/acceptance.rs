//! The acceptance suite: eight exhaustive checks over the instance corpora.

use std::time::Instant;

use serde::Serialize;

use crate::corpus::{
    caterpillar_branch_stree, connected_graphs, element_path_decomposition, graphs_up_to_iso, matroid_corpus,
    path_stree, random_connected_graphs, vertex_order_bags, NamedMatroid,
};
use crate::decomposition::{
    matroid_decomp_to_stree, stree_to_matroid_decomp, stree_to_treedecomp, treedecomp_to_stree, GraphTreeDecomposition,
    MatroidTreeDecomposition,
};
use crate::error::Result;
use crate::family::{is_fixed_under_shifting_sample, validate_stree, StarFamily, StarFamilyKind};
use crate::flow::{lambda_flow, menger_within};
use crate::graph::Graph;
use crate::matroid::Matroid;
use crate::pipeline::{lean_graph_decomposition, lean_matroid_decomposition, Start};
use crate::rank::{Rank, RankOracle};
use crate::refine::{refine_combined, refine_to_linked, RefineConfig, RefineOutcome};
use crate::separation::{Separation, Universe};
use crate::stree::{shift, STree};
use crate::subset::Subset;
use crate::verify::{verify_lean_td, verify_linked_stree, verify_matroid_lean, DEFAULT_PAIR_BUDGET};
use crate::width::{
    brute_force_matroid_treewidth, brute_force_treewidth, elimination_decomposition, optimal_matroid_decomposition,
    optimal_tree_decomposition,
};

/// Corpus sizes and seeds.
#[derive(Debug, Clone, Serialize)]
pub struct Scope {
    /// Largest vertex count of the exhaustive graph corpus (criterion 1).
    pub max_n: usize,
    /// Number of random connected graphs on 8 vertices.
    pub random_graphs: usize,
    pub seed: u64,
    pub refine: RefineConfig,
}

impl Default for Scope {
    fn default() -> Self {
        Scope { max_n: 7, random_graphs: 5, seed: 20_240_601, refine: RefineConfig::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "criterion {} [{}]: {} ({}; {:.1}s)", self.id, self.name, verdict, self.detail, self.seconds)
    }
}

/// Bookkeeping over every refinement run, for criterion 6.
#[derive(Debug, Default, Clone, Serialize)]
pub struct RunStats {
    pub runs: usize,
    pub iterations: usize,
    pub potential_decreases: usize,
    pub claim_checks: usize,
    pub failures: Vec<String>,
}

impl RunStats {
    fn record(&mut self, what: &str, outcome: &Result<RefineOutcome>) {
        self.runs += 1;
        match outcome {
            Ok(o) => {
                self.iterations += o.iterations;
                self.potential_decreases += o.claims.potential_decreases;
                self.claim_checks += o.claims.edge_copies + o.claims.vertex_copies + o.claims.glued_sizes;
                if o.claims.potential_decreases != o.iterations || !o.potential_failures.is_empty() {
                    self.failures.push(format!("{what}: potential did not decrease at every iteration"));
                }
            }
            Err(e) => self.failures.push(format!("{what}: {e}")),
        }
    }
}

/// Runs all criteria in order.
pub fn run_all(scope: &Scope) -> Vec<CriterionResult> {
    let mut out = run_refinement_criteria(scope);
    out.extend(INDEPENDENT_CRITERIA.iter().filter_map(|&id| run_criterion(scope, id)));
    out.sort_by_key(|r| r.id);
    out
}

/// Criteria that share no state with any other criterion.
pub const INDEPENDENT_CRITERIA: [usize; 4] = [3, 5, 7, 8];

/// Criteria 1, 2, 4 and 6, which run in sequence because criterion 6
/// audits every refinement run of the other three.
pub fn run_refinement_criteria(scope: &Scope) -> Vec<CriterionResult> {
    let mut stats = RunStats::default();
    let mut out = vec![
        timed(1, "lean graph decompositions of width tw", || criterion_lean_graphs(scope, &mut stats)),
        timed(2, "lean matroid decompositions of width tw", || criterion_lean_matroids(scope, &mut stats)),
        timed(4, "linked refinement across families", || criterion_linked(scope, &mut stats)),
    ];
    out.push(timed(6, "termination and monotonicity", || criterion_monotonicity(scope, &mut stats)));
    out
}

/// One of the independent criteria; `None` for any other id.
pub fn run_criterion(scope: &Scope, id: usize) -> Option<CriterionResult> {
    Some(match id {
        3 => timed(3, "tw(G) = tw(M(G))", criterion_graph_matroid_widths),
        5 => timed(5, "lemma suite", || criterion_lemmas(scope)),
        7 => timed(7, "flow and enumeration agree", criterion_oracles),
        8 => timed(8, "conversion fidelity", || criterion_conversions(scope)),
        _ => return None,
    })
}

fn timed(id: usize, name: &str, run: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    let start = Instant::now();
    let (pass, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult { id, name: name.into(), pass, detail, seconds: start.elapsed().as_secs_f64() }
}

/// The first three failures, prefixed by a colon, or nothing.
fn first_failures(failures: &[String]) -> String {
    if failures.is_empty() {
        return String::new();
    }
    format!(": {}", failures.iter().take(3).cloned().collect::<Vec<_>>().join("; "))
}

/// Connected graphs on `3..=max_n` vertices, `K8` and seeded random
/// connected graphs on 8 vertices.
pub fn graph_corpus(scope: &Scope) -> Result<Vec<Graph>> {
    let mut graphs = connected_graphs(3, scope.max_n)?;
    graphs.push(Graph::complete(8));
    graphs.extend(random_connected_graphs(8, scope.random_graphs, scope.seed)?);
    Ok(graphs)
}

fn edges_of(g: &Graph) -> String {
    g.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect::<Vec<_>>().join(" ")
}

/// Criterion 1.
pub fn criterion_lean_graphs(scope: &Scope, stats: &mut RunStats) -> Result<(bool, String)> {
    let graphs = graph_corpus(scope)?;
    let mut failures = Vec::new();
    let mut seeded = 0;
    for g in &graphs {
        let run = match lean_graph_decomposition(g, &scope.refine) {
            Ok(run) => run,
            Err(e) => {
                failures.push(format!("{}: {e}", edges_of(g)));
                continue;
            }
        };
        for (i, o) in run.outcomes.iter().enumerate() {
            stats.record(&format!("lean graph {} run {i}", edges_of(g)), &Ok(o.clone()));
        }
        if run.start == Start::OptimalSeed {
            seeded += 1;
        }
        if run.width != run.treewidth {
            failures.push(format!("{}: width {} but tw {}", edges_of(g), run.width, run.treewidth));
        }
        let report = verify_lean_td(g, &run.decomposition, DEFAULT_PAIR_BUDGET)?;
        if !report.pass {
            failures.push(format!("{}: not lean {:?}", edges_of(g), report.witness));
        }
    }
    let detail = format!(
        "{} graphs, {} reached tw from the single bag, {} from an optimal seed; {} failures{}",
        graphs.len(),
        graphs.len() - seeded,
        seeded,
        failures.len(),
        first_failures(&failures)
    );
    Ok((failures.is_empty(), detail))
}

/// Criterion 2.
pub fn criterion_lean_matroids(scope: &Scope, stats: &mut RunStats) -> Result<(bool, String)> {
    let corpus = matroid_corpus(scope.seed)?;
    let mut failures = Vec::new();
    let mut seeded = 0;
    for NamedMatroid { name, matroid } in &corpus {
        let run = match lean_matroid_decomposition(matroid, &scope.refine) {
            Ok(run) => run,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        for (i, o) in run.outcomes.iter().enumerate() {
            stats.record(&format!("lean matroid {name} run {i}"), &Ok(o.clone()));
        }
        if run.start == Start::OptimalSeed {
            seeded += 1;
        }
        if run.width != run.treewidth {
            failures.push(format!("{name}: width {} but tw {}", run.width, run.treewidth));
        }
        let report = verify_matroid_lean(matroid, &run.decomposition)?;
        if !report.pass {
            failures.push(format!("{name}: not lean {:?}", report.witness));
        }
    }
    let detail = format!(
        "{} matroids, {} reached tw from the single bag, {} from an optimal seed; {} failures{}",
        corpus.len(),
        corpus.len() - seeded,
        seeded,
        failures.len(),
        first_failures(&failures)
    );
    Ok((failures.is_empty(), detail))
}

/// Criterion 3.
pub fn criterion_graph_matroid_widths() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let graphs = connected_graphs(2, 5)?;
    for g in &graphs {
        let tw = brute_force_treewidth(g)?;
        let mtw = brute_force_matroid_treewidth(&Matroid::graphic(g)?)?;
        if tw != mtw {
            failures.push(format!("{}: tw {tw}, matroid tw {mtw}", edges_of(g)));
        }
    }
    Ok((
        failures.is_empty(),
        format!("{} graphs; {} mismatches{}", graphs.len(), failures.len(), first_failures(&failures)),
    ))
}

struct LinkedCase {
    what: String,
    universe: Universe,
    tree: STree,
    family: StarFamilyKind,
}

fn least_k(universe: &Universe, tree: &STree, floor: Rank) -> Rank {
    tree.max_order(universe).max(tree.max_star_size(universe)).max(floor) + 1
}

fn linked_cases(scope: &Scope) -> Result<Vec<LinkedCase>> {
    let mut cases = Vec::new();
    for g in connected_graphs(3, 6)? {
        let universe = Universe::graph(&g)?;
        let n = g.num_vertices();
        let identity: Vec<usize> = (0..n).collect();
        let reversed: Vec<usize> = (0..n).rev().collect();
        let mut starts = vec![
            ("optimal", treedecomp_to_stree(&g, &optimal_tree_decomposition(&g)?)?),
            ("identity elimination", treedecomp_to_stree(&g, &elimination_decomposition(&g, &identity)?)?),
            ("reversed elimination", treedecomp_to_stree(&g, &elimination_decomposition(&g, &reversed)?)?),
        ];
        starts.push(("lean output", lean_graph_decomposition(&g, &scope.refine)?.tree));
        for (what, tree) in starts {
            let k = least_k(&universe, &tree, 0);
            cases.push(LinkedCase {
                what: format!("F_{k} {what} {}", edges_of(&g)),
                universe: universe.clone(),
                tree,
                family: StarFamilyKind::Fk { k },
            });
        }
        for (what, order) in [("identity", &identity), ("reversed", &reversed)] {
            let tree = path_stree(&g, &vertex_order_bags(&g, order))?;
            let k = least_k(&universe, &tree, 0);
            cases.push(LinkedCase {
                what: format!("P_{k} {what} path {}", edges_of(&g)),
                universe: universe.clone(),
                tree,
                family: StarFamilyKind::Pk { k },
            });
        }
        if (3..=6).contains(&g.num_edges()) {
            let tree = caterpillar_branch_stree(&g)?;
            let k = tree.max_order(&universe).max(2) + 1;
            cases.push(LinkedCase {
                what: format!("T_{k} caterpillar {}", edges_of(&g)),
                universe: universe.clone(),
                tree,
                family: StarFamilyKind::Tk { k },
            });
        }
    }
    for NamedMatroid { name, matroid } in matroid_corpus(scope.seed)? {
        let universe = matroid.universe();
        let starts = [
            ("optimal", matroid_decomp_to_stree(&matroid, &optimal_matroid_decomposition(&matroid)?)?),
            ("element path", matroid_decomp_to_stree(&matroid, &element_path_decomposition(&matroid)?)?),
            ("lean output", lean_matroid_decomposition(&matroid, &scope.refine)?.tree),
        ];
        for (what, tree) in starts {
            let k = least_k(&universe, &tree, 0);
            cases.push(LinkedCase {
                what: format!("matroid F_{k} {what} {name}"),
                universe: universe.clone(),
                tree,
                family: StarFamilyKind::MatroidFk { k },
            });
        }
    }
    Ok(cases)
}

/// Criterion 4.
pub fn criterion_linked(scope: &Scope, stats: &mut RunStats) -> Result<(bool, String)> {
    let cases = linked_cases(scope)?;
    let mut failures = Vec::new();
    let mut per_family = [0usize; 4];
    let mut repaired = 0;
    for case in &cases {
        let outcome = refine_to_linked(&case.universe, &case.tree, &case.family, &scope.refine);
        stats.record(&format!("linked {}", case.what), &outcome);
        let Ok(outcome) = outcome else { continue };
        if outcome.iterations > 0 {
            repaired += 1;
        }
        per_family[match case.family {
            StarFamilyKind::Fk { .. } | StarFamilyKind::FThetaP { .. } => 0,
            StarFamilyKind::Pk { .. } => 1,
            StarFamilyKind::Tk { .. } => 2,
            StarFamilyKind::MatroidFk { .. } => 3,
        }] += 1;
        let report = verify_linked_stree(&case.universe, &outcome.tree)?;
        if !report.pass {
            failures.push(format!("{}: not linked {:?}", case.what, report.witness));
        }
        let valid = validate_stree(&case.universe, &outcome.tree, Some(&case.family as &dyn StarFamily));
        if !valid.valid {
            failures.push(format!("{}: output is not an S-tree over the family", case.what));
        }
        let k = case.family.order_bound();
        if outcome.tree.max_order(&case.universe) >= k {
            failures.push(format!("{}: label order reached {k}", case.what));
        }
    }
    let runtime_failures = stats.failures.iter().filter(|f| f.starts_with("linked")).count();
    let detail = format!(
        "{} runs (F_k {}, P_k {}, T_k {}, matroid F_k {}), {} needed repair; {} failures{}",
        cases.len(),
        per_family[0],
        per_family[1],
        per_family[2],
        per_family[3],
        repaired,
        failures.len() + runtime_failures,
        first_failures(&failures)
    );
    Ok((failures.is_empty() && runtime_failures == 0, detail))
}

/// A universe together with the S-trees used to exercise the lemmas on it.
struct LemmaInstance {
    name: String,
    universe: Universe,
    rank: RankOracle,
    trees: Vec<STree>,
}

fn lemma_instances(scope: &Scope) -> Result<Vec<LemmaInstance>> {
    let mut out = Vec::new();
    for n in 1..=5 {
        for g in graphs_up_to_iso(n)? {
            let universe = Universe::graph(&g)?;
            let identity: Vec<usize> = (0..n).collect();
            let trees = vec![
                treedecomp_to_stree(&g, &optimal_tree_decomposition(&g)?)?,
                treedecomp_to_stree(&g, &elimination_decomposition(&g, &identity)?)?,
                path_stree(&g, &vertex_order_bags(&g, &identity))?,
                lean_graph_decomposition(&g, &scope.refine)?.tree,
            ];
            out.push(LemmaInstance {
                name: format!("n={n} {}", edges_of(&g)).trim_end().to_string(),
                rank: universe.rank().clone(),
                universe,
                trees,
            });
        }
    }
    for NamedMatroid { name, matroid } in matroid_corpus(scope.seed)? {
        let universe = matroid.universe();
        let trees = vec![
            matroid_decomp_to_stree(&matroid, &optimal_matroid_decomposition(&matroid)?)?,
            matroid_decomp_to_stree(&matroid, &element_path_decomposition(&matroid)?)?,
            lean_matroid_decomposition(&matroid, &scope.refine)?.tree,
        ];
        out.push(LemmaInstance { name, rank: matroid.rank_oracle().clone(), universe, trees });
    }
    Ok(out)
}

/// Counterexample counts and check counts for each lemma.
///
/// Corner nesting is checked in two forms. The crossing form requires the
/// two corner separations to cross and counts towards `checks[1]` and
/// `failures`. The literal form also admits nested pairs; it has
/// counterexamples such as `a = ({1},{0})`, `c = ({0,1},{0})`,
/// `e = ({0,1},{1})` on two isolated vertices, whose meet `(V,V)` is not
/// nested with `a`. Those are counted separately.
#[derive(Debug, Default, Clone, Serialize)]
pub struct LemmaCounts {
    pub checks: [usize; 8],
    pub failures: Vec<String>,
    pub literal_corner_checks: usize,
    pub literal_corner_failures: usize,
    pub literal_corner_example: Option<String>,
}

const LEMMA_NAMES: [&str; 8] = [
    "grounded corner",
    "corner nesting for crossing pairs",
    "star size bounds",
    "star intersection",
    "shift is tame",
    "linked shift keeps orders",
    "shift keeps family",
    "family is stable",
];

/// Runs every lemma check over the lemma corpus.
pub fn lemma_counts(scope: &Scope) -> Result<LemmaCounts> {
    let mut counts = LemmaCounts::default();
    for inst in lemma_instances(scope)? {
        check_lemmas(&inst, &mut counts)?;
    }
    Ok(counts)
}

/// Criterion 5. Passes only if every lemma, including the literal corner
/// statement, has no counterexample.
pub fn criterion_lemmas(scope: &Scope) -> Result<(bool, String)> {
    let counts = lemma_counts(scope)?;
    let summary: Vec<String> = LEMMA_NAMES.iter().zip(counts.checks).map(|(n, c)| format!("{n} {c}")).collect();
    let detail = format!(
        "checks: {}; {} counterexamples{}; literal corner statement: {} of {} triples fail, all with the two corner separations nested, e.g. {}",
        summary.join(", "),
        counts.failures.len(),
        first_failures(&counts.failures),
        counts.literal_corner_failures,
        counts.literal_corner_checks,
        counts.literal_corner_example.as_deref().unwrap_or("none")
    );
    Ok((counts.failures.is_empty() && counts.literal_corner_failures == 0, detail))
}

fn check_lemmas(inst: &LemmaInstance, counts: &mut LemmaCounts) -> Result<()> {
    let u = &inst.universe;
    let all = u.enumerate_all(16)?;
    let fail = |counts: &mut LemmaCounts, lemma: usize, what: String| {
        counts.failures.push(format!("{} on {}: {what}", LEMMA_NAMES[lemma], inst.name));
    };

    // Grounded corner: (B,A) <= (C,D) implies |A∪C, B∩D| <= |C,D|.
    for &s1 in &all {
        for &s2 in all.iter().filter(|s2| s1.invert().leq(**s2)) {
            counts.checks[0] += 1;
            if u.order(s1.join(s2)) > u.order(s2) {
                fail(counts, 0, format!("{s1} and {s2}"));
            }
        }
    }

    // Corner nesting.
    for &a in &all {
        let nested: Vec<Separation> = all.iter().copied().filter(|&c| a.is_nested(c)).collect();
        for &c in &nested {
            for &e in &nested {
                let corners = [c.join(e), c.meet(e), c.join(e.invert()), c.meet(e.invert())];
                let holds = corners.iter().all(|&x| a.is_nested(x));
                counts.literal_corner_checks += 1;
                if c.is_nested(e) {
                    if !holds {
                        counts.literal_corner_failures += 1;
                        if counts.literal_corner_example.is_none() {
                            counts.literal_corner_example = Some(format!("a={a}, c={c}, e={e} on {}", inst.name));
                        }
                    }
                    continue;
                }
                counts.checks[1] += 1;
                if !holds {
                    fail(counts, 1, format!("{a} with crossing {c} and {e}"));
                }
            }
        }
    }

    // Star intersection claim, over every chain with Z*_i ∪ Z_{i+1} = V.
    check_star_intersection(&inst.rank, counts, &inst.name);

    for tree in &inst.trees {
        // Star size bounds.
        for t in 0..tree.num_vertices() {
            let star = tree.star(t);
            let size = u.star_size(&star)?;
            for &s in &star {
                counts.checks[2] += 1;
                if size < u.order(s) {
                    fail(counts, 2, format!("star at {t} smaller than the order of {s}"));
                }
            }
            let mut bigger = star.clone();
            bigger.push(Separation::new(Subset::EMPTY, Subset::EMPTY));
            for &s in &all {
                *bigger.last_mut().expect("pushed") = s;
                if !u.is_star(&bigger) {
                    continue;
                }
                counts.checks[2] += 1;
                if size < u.rank().rank(s.left) {
                    fail(counts, 2, format!("star at {t} smaller than r of the addable {s}"));
                }
                // Stability of F_p for p one above the star size.
                let family = if u.is_bipartitions() {
                    StarFamilyKind::MatroidFk { k: size + 1 }
                } else {
                    StarFamilyKind::Fk { k: size + 1 }
                };
                if family.contains(u, &star) {
                    counts.checks[7] += 1;
                    if !family.contains(u, &bigger) {
                        fail(counts, 7, format!("adding {s} at {t} leaves F_{}", size + 1));
                    }
                }
            }
        }

        // Shifts onto every separation above each label.
        for d in tree.darts() {
            let base = tree.label(d);
            for &target in all.iter().filter(|s| base.leq(**s)) {
                let (shifted, map) = shift(tree, d, target)?;
                counts.checks[4] += 1;
                if !shifted.is_tame(u) {
                    fail(counts, 4, format!("dart {d} onto {target}"));
                }
                if u.lambda_interval(base, target)?.0 == u.order(target) {
                    for e in 0..shifted.num_edges() {
                        counts.checks[5] += 1;
                        let before = u.order(tree.label(2 * map.edges[e]));
                        if u.order(shifted.label(2 * e)) > before {
                            fail(counts, 5, format!("dart {d} onto {target} raised edge {}", map.edges[e]));
                        }
                    }
                }
            }
        }

        // Fixed under shifting, for the least F_k containing the tree.
        let k = least_k(u, tree, 0);
        let family = if u.is_bipartitions() { StarFamilyKind::MatroidFk { k } } else { StarFamilyKind::Fk { k } };
        let report = is_fixed_under_shifting_sample(&family, u, std::slice::from_ref(tree), 16)?;
        counts.checks[6] += report.stars_checked;
        if let Some(c) = report.counterexample {
            fail(counts, 6, c.reason);
        }

        // Canonical candidates are addable.
        for t in 0..tree.num_vertices() {
            let family = if u.is_bipartitions() { StarFamilyKind::MatroidFk { k } } else { StarFamilyKind::Fk { k } };
            for c in family.addable_candidates(u, tree, t, 1 << 16)? {
                counts.checks[7] += 1;
                let mut star = tree.star(t);
                star.push(c);
                if !family.contains(u, &star) {
                    fail(counts, 7, format!("candidate {c} at {t}"));
                }
            }
        }
    }
    Ok(())
}

fn check_star_intersection(rank: &RankOracle, counts: &mut LemmaCounts, name: &str) {
    let full = rank.full();
    let mut chain = Vec::new();
    for z0 in full.subsets() {
        chain.push(z0);
        extend_chains(rank, full, &mut chain, z0, 3, counts, name);
        chain.pop();
    }
}

fn extend_chains(
    rank: &RankOracle,
    full: Subset,
    chain: &mut Vec<Subset>,
    star: Subset,
    remaining: usize,
    counts: &mut LemmaCounts,
    name: &str,
) {
    let n = chain.len() as Rank - 1;
    for x in full.subsets() {
        counts.checks[3] += 1;
        let lhs: Rank = chain.iter().map(|&z| rank.rank(z & x)).sum();
        if lhs < rank.rank(star & x) + n * rank.rank(x) {
            counts.failures.push(format!("{} on {name}: chain {:?} with X={x}", LEMMA_NAMES[3], chain));
        }
    }
    if remaining == 0 {
        return;
    }
    for extra in star.subsets() {
        let z = (full - star) | extra;
        chain.push(z);
        extend_chains(rank, full, chain, star & z, remaining - 1, counts, name);
        chain.pop();
    }
}

/// Criterion 6: every recorded run, plus combined-mode runs from the
/// linked starts, decreased its potential at every iteration.
pub fn criterion_monotonicity(scope: &Scope, stats: &mut RunStats) -> Result<(bool, String)> {
    for case in linked_cases(scope)? {
        if matches!(case.family, StarFamilyKind::Tk { .. }) {
            continue;
        }
        let outcome = refine_combined(&case.universe, &case.tree, &case.family, &scope.refine);
        stats.record(&format!("combined {}", case.what), &outcome);
    }
    let detail = format!(
        "{} runs, {} iterations, {} potential decreases, {} claim checks; {} failures{}",
        stats.runs,
        stats.iterations,
        stats.potential_decreases,
        stats.claim_checks,
        stats.failures.len(),
        first_failures(&stats.failures)
    );
    Ok((stats.failures.is_empty(), detail))
}

/// Criterion 7: for every graph on at most 6 vertices and every pair
/// `lo <= hi` of its separations, the flow value equals the interval
/// minimum, and every flow's cut has the flow's size and separates.
pub fn criterion_oracles() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let (mut pairs, mut graphs) = (0usize, 0usize);
    for n in 1..=6 {
        for g in graphs_up_to_iso(n)? {
            graphs += 1;
            let u = Universe::graph(&g)?;
            let all = u.enumerate_all(16)?;
            for &lo in &all {
                for &hi in all.iter().filter(|hi| lo.leq(**hi)) {
                    pairs += 1;
                    let by_flow = lambda_flow(&g, lo, hi)? as Rank;
                    let by_enumeration = u.lambda_interval(lo, hi)?.0;
                    if by_flow != by_enumeration {
                        failures.push(format!(
                            "{}: {lo} to {hi} flow {by_flow}, enumeration {by_enumeration}",
                            edges_of(&g)
                        ));
                    }
                    let within = lo.right & hi.left;
                    let (s, t) = (lo.separator(), hi.separator());
                    let (count, cut) = menger_within(&g, s, t, within);
                    let rest = within - cut;
                    if cut.len() != count || !(g.reach(s & rest, rest) & t).is_empty() {
                        failures.push(format!("{}: cut {cut} does not certify {count} paths", edges_of(&g)));
                    }
                }
            }
        }
    }
    Ok((
        failures.is_empty(),
        format!("{graphs} graphs, {pairs} pairs; {} failures{}", failures.len(), first_failures(&failures)),
    ))
}

fn graph_round_trip(g: &Graph, d: &GraphTreeDecomposition) -> Result<Option<String>> {
    let tree = treedecomp_to_stree(g, d)?;
    let universe = Universe::graph(g)?;
    let back = stree_to_treedecomp(&universe, &tree)?;
    if back != *d {
        return Ok(Some("decomposition round trip changed the bags".into()));
    }
    if treedecomp_to_stree(g, &back)? != tree {
        return Ok(Some("S-tree round trip changed the labels".into()));
    }
    let w = d.width();
    if !validate_stree(&universe, &tree, Some(&StarFamilyKind::Fk { k: w + 2 })).valid {
        return Ok(Some(format!("width {w} but not over F_{}", w + 2)));
    }
    if validate_stree(&universe, &tree, Some(&StarFamilyKind::Fk { k: w + 1 })).valid {
        return Ok(Some(format!("width {w} but over F_{}", w + 1)));
    }
    Ok(None)
}

fn matroid_round_trip(m: &Matroid, d: &MatroidTreeDecomposition) -> Result<Option<String>> {
    let tree = matroid_decomp_to_stree(m, d)?;
    let back = stree_to_matroid_decomp(m, &tree)?;
    if back != *d {
        return Ok(Some("decomposition round trip changed the map".into()));
    }
    if matroid_decomp_to_stree(m, &back)? != tree {
        return Ok(Some("S-tree round trip changed the labels".into()));
    }
    let universe = m.universe();
    let w = d.width(m)?;
    if !validate_stree(&universe, &tree, Some(&StarFamilyKind::MatroidFk { k: w + 1 })).valid {
        return Ok(Some(format!("width {w} but not over matroid F_{}", w + 1)));
    }
    if validate_stree(&universe, &tree, Some(&StarFamilyKind::MatroidFk { k: w })).valid {
        return Ok(Some(format!("width {w} but over matroid F_{w}")));
    }
    Ok(None)
}

/// Criterion 8.
pub fn criterion_conversions(scope: &Scope) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for g in graph_corpus(scope)? {
        let n = g.num_vertices();
        let identity: Vec<usize> = (0..n).collect();
        let lean = lean_graph_decomposition(&g, &scope.refine)?;
        let decompositions = [
            GraphTreeDecomposition::single_bag(&g),
            optimal_tree_decomposition(&g)?,
            elimination_decomposition(&g, &identity)?,
            lean.decomposition.clone(),
        ];
        for d in &decompositions {
            checked += 1;
            if let Some(f) = graph_round_trip(&g, d)? {
                failures.push(format!("{}: {f}", edges_of(&g)));
            }
        }
        // The refined S-tree is already in canonical form.
        checked += 1;
        if treedecomp_to_stree(&g, &lean.decomposition)? != lean.tree {
            failures.push(format!("{}: refined S-tree is not canonical", edges_of(&g)));
        }
    }
    for NamedMatroid { name, matroid } in matroid_corpus(scope.seed)? {
        let lean = lean_matroid_decomposition(&matroid, &scope.refine)?;
        let decompositions = [
            MatroidTreeDecomposition::single_bag(&matroid),
            optimal_matroid_decomposition(&matroid)?,
            element_path_decomposition(&matroid)?,
            lean.decomposition.clone(),
        ];
        for d in &decompositions {
            checked += 1;
            if let Some(f) = matroid_round_trip(&matroid, d)? {
                failures.push(format!("{name}: {f}"));
            }
        }
        checked += 1;
        if matroid_decomp_to_stree(&matroid, &lean.decomposition)? != lean.tree {
            failures.push(format!("{name}: refined S-tree is not canonical"));
        }
    }
    Ok((
        failures.is_empty(),
        format!("{checked} round trips; {} failures{}", failures.len(), first_failures(&failures)),
    ))
}
