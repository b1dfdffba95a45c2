//! Cross-module verification sweeps over exhaustively enumerated graphs.
//!
//! Each check pits a module against an independent implementation or an
//! invariant: the LP against the exact branch-and-bound optimum, the
//! flow-based reducible-pair verifier against a direct backtracking search
//! for an integral assignment, the W=1 separator oracle against a plain
//! vertex-cover brute force, and the evolutionary archive against its laws.
//! Failures carry the instance as an edge list so any counterexample can be
//! replayed by hand.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use wsep_core::emo::{
    run_observed, weakly_dominates, Algorithm, EventName, Fitness, Seed, StopSpec, Third,
};
use wsep_core::graph::{Graph, Vertex, VertexSet};
use wsep_core::lp::{lp_value_of, persistent_ones, LpCache, Rational};
use wsep_core::reducible::{
    favored_head_flow, find_strictly_reducible_pair, is_minimal, minimize_pair,
    verify_reducible_pair,
};
use wsep_core::separator::{brute_force_opt, uncovered, Instance, SearchPoint};

/// Which module family a suite run exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Graph,
    Lp,
    Reducible,
    Emo,
    All,
}

impl std::str::FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "graph" => Ok(Scope::Graph),
            "lp" => Ok(Scope::Lp),
            "reducible" => Ok(Scope::Reducible),
            "emo" => Ok(Scope::Emo),
            "all" => Ok(Scope::All),
            _ => Err(format!("unknown scope {s:?} (graph|lp|reducible|emo|all)")),
        }
    }
}

/// One named check: how many cases ran and which ones failed.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub cases: u64,
    pub failures: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All checks of one suite invocation.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            if check.passed() {
                out.push_str(&format!("ok   {} ({} cases)\n", check.name, check.cases));
            } else {
                out.push_str(&format!(
                    "FAIL {} ({} cases, {} failed)\n",
                    check.name,
                    check.cases,
                    check.failures.len()
                ));
                for f in check.failures.iter().take(5) {
                    out.push_str(&format!("     {f}\n"));
                }
                if check.failures.len() > 5 {
                    out.push_str(&format!("     ... {} more\n", check.failures.len() - 5));
                }
            }
        }
        out
    }
}

/// Suite tuning knobs; `size_limit` caps the exhaustive vertex count.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub scope: Scope,
    pub size_limit: usize,
    pub ws: Vec<usize>,
    pub sample_points: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            scope: Scope::All,
            size_limit: 5,
            ws: vec![1, 2],
            sample_points: 20,
            seed: 0x5eed,
        }
    }
}

/// The unordered vertex pairs of an n-vertex graph in lexicographic order;
/// bit i of a mask toggles the i-th pair.
pub fn edge_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

pub fn labeled_graph_count(n: usize) -> u64 {
    1u64 << edge_pairs(n).len()
}

pub fn graph_from_mask(n: usize, pairs: &[(usize, usize)], mask: u64) -> Graph {
    Graph::from_edges(
        n,
        pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| *e),
    )
}

fn repro(graph: &Graph) -> String {
    graph.to_edge_list_string().replace('\n', "; ")
}

/// Minimum vertex cover by direct edge branching, independent of the
/// separator search.
pub fn vertex_cover_brute(graph: &Graph) -> usize {
    fn first_uncovered(graph: &Graph, chosen: &VertexSet) -> Option<(Vertex, Vertex)> {
        graph
            .edges()
            .find(|&(u, v)| !chosen.contains(u) && !chosen.contains(v))
    }
    fn explore(graph: &Graph, chosen: &mut VertexSet, best: &mut usize) {
        if chosen.len() >= *best {
            return;
        }
        match first_uncovered(graph, chosen) {
            None => *best = chosen.len(),
            Some((u, v)) => {
                for pick in [u, v] {
                    chosen.insert(pick);
                    explore(graph, chosen, best);
                    chosen.remove(pick);
                }
            }
        }
    }
    let mut best = graph.n();
    explore(graph, &mut VertexSet::new(graph.n()), &mut best);
    best
}

/// Direct check of the reducible-pair definition by backtracking over
/// integral assignments, independent of the flow verifier. Returns `None`
/// when (a, b) is not a reducible pair and `Some(strict)` otherwise, where
/// strictness means some head can be fed 2W while the rest keep 2W-1.
pub fn reducible_brute(inst: &Instance, a: &VertexSet, b: &VertexSet) -> Option<bool> {
    if a.is_empty() || b.is_empty() || !a.is_disjoint(b) {
        return None;
    }
    if !inst.graph.neighborhood(b).is_subset_of(a) {
        return None;
    }
    let comps = inst.graph.components_of(b);
    if comps.iter().any(|c| c.len() > inst.w()) {
        return None;
    }
    let heads: Vec<Vertex> = a.to_vec();
    let sizes: Vec<usize> = comps.iter().map(VertexSet::len).collect();
    let adj: Vec<Vec<usize>> = comps
        .iter()
        .map(|c| {
            let nb = inst.graph.neighborhood(c);
            heads
                .iter()
                .enumerate()
                .filter(|(_, h)| nb.contains(**h))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut suffix = vec![0usize; sizes.len() + 1];
    for i in (0..sizes.len()).rev() {
        suffix[i] = suffix[i + 1] + sizes[i];
    }
    let quota = 2 * inst.w() - 1;
    let mut deficits = vec![quota; heads.len()];
    if !feed(&sizes, &adj, &suffix, &mut deficits, 0) {
        return None;
    }
    let strict = (0..heads.len()).any(|h| {
        let mut deficits = vec![quota; heads.len()];
        deficits[h] = quota + 1;
        feed(&sizes, &adj, &suffix, &mut deficits, 0)
    });
    Some(strict)
}

fn feed(sizes: &[usize], adj: &[Vec<usize>], suffix: &[usize], deficits: &mut [usize], ci: usize) -> bool {
    let need: usize = deficits.iter().sum();
    if need == 0 {
        return true;
    }
    if ci == sizes.len() || need > suffix[ci] {
        return false;
    }
    split(sizes, adj, suffix, deficits, ci, 0, sizes[ci])
}

fn split(
    sizes: &[usize],
    adj: &[Vec<usize>],
    suffix: &[usize],
    deficits: &mut [usize],
    ci: usize,
    hi: usize,
    mass: usize,
) -> bool {
    if hi == adj[ci].len() {
        return feed(sizes, adj, suffix, deficits, ci + 1);
    }
    let head = adj[ci][hi];
    let cap = deficits[head].min(mass);
    for give in 0..=cap {
        deficits[head] -= give;
        let won = split(sizes, adj, suffix, deficits, ci, hi + 1, mass - give);
        deficits[head] += give;
        if won {
            return true;
        }
    }
    false
}

/// Enumerates every assignment of vertices to head, crown, or neither and
/// compares the flow verifier against the backtracking definition check.
pub fn reducible_agreement_failures(inst: &Instance) -> (u64, Vec<String>) {
    let n = inst.n();
    let mut cases = 0;
    let mut failures = Vec::new();
    let mut states = vec![0u8; n];
    loop {
        let mut a = VertexSet::new(n);
        let mut b = VertexSet::new(n);
        for (v, s) in states.iter().enumerate() {
            match s {
                1 => a.insert(v),
                2 => b.insert(v),
                _ => {}
            }
        }
        if !a.is_empty() && !b.is_empty() {
            cases += 1;
            let flow = verify_reducible_pair(inst, &a, &b).map(|p| p.strict());
            let brute = reducible_brute(inst, &a, &b);
            if flow != brute {
                failures.push(format!(
                    "verifiers disagree (flow {flow:?}, brute {brute:?}) on A={a} B={b} W={} graph {}",
                    inst.w(),
                    repro(&inst.graph)
                ));
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return (cases, failures);
            }
            states[i] += 1;
            if states[i] < 3 {
                break;
            }
            states[i] = 0;
            i += 1;
        }
    }
}

/// Laws every minimal strictly reducible pair obeys: each head can be the
/// favored one in a full augmentation, and the components adjacent to any
/// nonempty head subset carry strictly more than its combined quota.
pub fn minimal_pair_law_failures(inst: &Instance) -> (u64, Vec<String>) {
    let Some(found) = find_strictly_reducible_pair(inst) else {
        return (0, Vec::new());
    };
    let pair = minimize_pair(inst, &found);
    let mut cases = 0;
    let mut failures = Vec::new();
    if !pair.strict() || !is_minimal(inst, &pair) {
        failures.push(format!(
            "minimized pair is not minimal-strict on W={} graph {}",
            inst.w(),
            repro(&inst.graph)
        ));
    }
    let quota = 2 * inst.w() as i64 - 1;
    let want = quota * pair.head.len() as i64 + 1;
    for favored in pair.head.iter() {
        cases += 1;
        let flow = favored_head_flow(inst, &pair, favored);
        if flow != want {
            failures.push(format!(
                "favored head {favored} reaches flow {flow}, expected {want}, on W={} graph {}",
                inst.w(),
                repro(&inst.graph)
            ));
        }
    }
    let heads = pair.head.to_vec();
    for mask in 1u32..(1 << heads.len()) {
        cases += 1;
        let mut subset = VertexSet::new(inst.n());
        for (i, h) in heads.iter().enumerate() {
            if mask >> i & 1 == 1 {
                subset.insert(*h);
            }
        }
        let mass: usize = pair
            .components
            .iter()
            .filter(|c| !inst.graph.neighborhood(c).is_disjoint(&subset))
            .map(|c| c.len())
            .sum();
        if (mass as i64) <= quota * subset.len() as i64 {
            failures.push(format!(
                "head subset {subset} sees only mass {mass} on W={} graph {}",
                inst.w(),
                repro(&inst.graph)
            ));
        }
    }
    (cases, failures)
}

/// One evolutionary run checked after every iteration: members pairwise
/// non-dominated and the archive within its size bound.
pub fn archive_law_failures(
    inst: &Instance,
    fitness: Fitness,
    algorithm: Algorithm,
    seed: Seed,
    budget: u64,
) -> (u64, Vec<String>) {
    let n = inst.n();
    let bound = match fitness {
        Fitness::F1 | Fitness::F2 => (n + 1) * (n + 1),
        Fitness::F3 => n + 1,
    };
    let mut cases = 0;
    let mut failures = Vec::new();
    run_observed(
        inst,
        fitness,
        algorithm,
        seed,
        &StopSpec::budget(budget),
        |iteration, pop, _| {
            cases += 1;
            if pop.len() > bound {
                failures.push(format!(
                    "archive holds {} members, bound {bound}, at iteration {iteration} on W={} graph {}",
                    pop.len(),
                    inst.w(),
                    repro(&inst.graph)
                ));
            }
            let members = pop.members();
            for (i, a) in members.iter().enumerate() {
                for b in members.iter().skip(i + 1) {
                    if weakly_dominates(&a.vector, &b.vector) || weakly_dominates(&b.vector, &a.vector)
                    {
                        failures.push(format!(
                            "dominated pair survived at iteration {iteration} on W={} graph {}",
                            inst.w(),
                            repro(&inst.graph)
                        ));
                    }
                }
            }
        },
    );
    (cases, failures)
}

/// Traced persistence of the relaxation-equality and head milestones: once
/// recorded, a witness must stay in the archive to the end of the run.
pub fn persistence_failures(
    inst: &Instance,
    algorithm: Algorithm,
    seed: Seed,
    budget: u64,
    heads: Option<VertexSet>,
) -> (u64, Vec<String>) {
    let mut cache = LpCache::new();
    let whole = lp_value_of(inst, &VertexSet::full(inst.n()), &mut cache);
    let mut cases = 0;
    let mut failures = Vec::new();
    let mut stop = StopSpec::budget(budget);
    stop.heads = heads.clone();
    run_observed(inst, Fitness::F2, algorithm, seed, &stop, |iteration, pop, events| {
        cases += 1;
        let equality_on = events
            .iter()
            .any(|e| e.name == EventName::LpEqualityPoint && e.iteration <= iteration);
        if equality_on {
            let holds = pop.members().iter().any(|m| {
                let Third::LpValue(rest) = &m.vector.third else {
                    return false;
                };
                Rational::from_integer(m.vector.ones.into()) + rest == whole
                    && persistent_ones(inst, &m.uncovered, &mut cache).is_empty()
            });
            if !holds {
                failures.push(format!(
                    "relaxation equality lost at iteration {iteration} on W={} graph {}",
                    inst.w(),
                    repro(&inst.graph)
                ));
            }
        }
        if let Some(target) = &heads {
            let heads_on = events
                .iter()
                .any(|e| e.name == EventName::HeadsPoint && e.iteration <= iteration);
            if heads_on && !pop.members().iter().any(|m| m.point.ones() == target) {
                failures.push(format!(
                    "head point lost at iteration {iteration} on W={} graph {}",
                    inst.w(),
                    repro(&inst.graph)
                ));
            }
        }
    });
    (cases, failures)
}

/// Exact LP facts on one instance: value below the optimum, the deletion
/// bound on random points, and superadditivity over random partitions.
pub fn lp_instance_failures(
    inst: &Instance,
    opt: usize,
    points: usize,
    partitions: usize,
    rng: &mut impl Rng,
) -> (u64, Vec<String>) {
    let mut cache = LpCache::new();
    let n = inst.n();
    let full = VertexSet::full(n);
    let whole = lp_value_of(inst, &full, &mut cache);
    let mut cases = 1;
    let mut failures = Vec::new();
    if whole > Rational::from_integer(opt.into()) {
        failures.push(format!(
            "LP {whole} exceeds OPT {opt} on W={} graph {}",
            inst.w(),
            repro(&inst.graph)
        ));
    }
    for _ in 0..points {
        cases += 1;
        let x = SearchPoint::random(rng, n);
        let u = uncovered(inst, &x);
        let bound = Rational::from_integer(x.count_ones().into()) + lp_value_of(inst, &u, &mut cache);
        if whole > bound {
            failures.push(format!(
                "LP {whole} exceeds deletion bound {bound} at X={x} on W={} graph {}",
                inst.w(),
                repro(&inst.graph)
            ));
        }
    }
    for _ in 0..partitions {
        cases += 1;
        let mut side = VertexSet::new(n);
        for v in 0..n {
            if rng.gen_bool(0.5) {
                side.insert(v);
            }
        }
        let parts_sum = lp_value_of(inst, &side, &mut cache)
            + lp_value_of(inst, &side.complement(), &mut cache);
        if whole < parts_sum {
            failures.push(format!(
                "LP {whole} below partition sum {parts_sum} at V'={side} on W={} graph {}",
                inst.w(),
                repro(&inst.graph)
            ));
        }
    }
    (cases, failures)
}

fn merge(
    results: impl IntoIterator<Item = (u64, Vec<String>)>,
    cap: usize,
) -> (u64, Vec<String>) {
    let mut cases = 0;
    let mut failures = Vec::new();
    for (c, fs) in results {
        cases += c;
        for f in fs {
            if failures.len() < cap {
                failures.push(f);
            }
        }
    }
    (cases, failures)
}

fn graph_checks(limit: usize) -> Vec<Check> {
    let mut results = Vec::new();
    for n in 1..=limit {
        let pairs = edge_pairs(n);
        let per: Vec<(u64, Vec<String>)> = (0..labeled_graph_count(n))
            .into_par_iter()
            .map(|mask| {
                let graph = graph_from_mask(n, &pairs, mask);
                let mut cases = 0;
                let mut failures = Vec::new();
                let comps = graph.components();
                let mut seen = VertexSet::new(n);
                let mut total = 0;
                for c in &comps {
                    total += c.len();
                    if !seen.is_disjoint(c) {
                        failures.push(format!("overlapping components on {}", repro(&graph)));
                    }
                    seen.union_with(c);
                }
                cases += 1;
                if total != n {
                    failures.push(format!("components lose vertices on {}", repro(&graph)));
                }
                for v in 0..n {
                    cases += 1;
                    let s = VertexSet::from_iter(n, [v]);
                    if graph.neighborhood(&s).contains(v) {
                        failures.push(format!("neighborhood contains its seed on {}", repro(&graph)));
                    }
                }
                for size in 2..=n.min(4) {
                    cases += 1;
                    let mut fast: Vec<VertexSet> = graph.connected_subgraphs(size).collect();
                    fast.sort();
                    let mut naive: Vec<VertexSet> = (0u32..1 << n)
                        .filter(|m| m.count_ones() as usize == size)
                        .map(|m| VertexSet::from_iter(n, (0..n).filter(|v| m >> v & 1 == 1)))
                        .filter(|s| graph.is_connected_set(s))
                        .collect();
                    naive.sort();
                    if fast != naive {
                        failures.push(format!(
                            "subgraph enumeration differs at size {size} on {}",
                            repro(&graph)
                        ));
                    }
                }
                (cases, failures)
            })
            .collect();
        results.extend(per);
    }
    let (cases, failures) = merge(results, 50);
    vec![Check {
        name: format!("graph primitives on all labeled graphs up to n={limit}"),
        cases,
        failures,
    }]
}

fn lp_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    for &w in &cfg.ws {
        let mut results = Vec::new();
        for n in 1..=cfg.size_limit {
            let pairs = edge_pairs(n);
            let per: Vec<(u64, Vec<String>)> = (0..labeled_graph_count(n))
                .into_par_iter()
                .map(|mask| {
                    let graph = graph_from_mask(n, &pairs, mask);
                    let inst = Instance::new(graph, w).unwrap();
                    let opt = brute_force_opt(&inst, None, None).unwrap().opt().unwrap();
                    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed ^ mask);
                    let (mut cases, mut failures) =
                        lp_instance_failures(&inst, opt, cfg.sample_points, cfg.sample_points / 2, &mut rng);
                    if w == 1 {
                        cases += 1;
                        let vc = vertex_cover_brute(&inst.graph);
                        if vc != opt {
                            failures.push(format!(
                                "vertex cover {vc} disagrees with separator optimum {opt} on {}",
                                repro(&inst.graph)
                            ));
                        }
                    }
                    (cases, failures)
                })
                .collect();
            results.extend(per);
        }
        let (cases, failures) = merge(results, 50);
        checks.push(Check {
            name: format!("LP bounds and oracle agreement, W={w}, up to n={}", cfg.size_limit),
            cases,
            failures,
        });
    }
    checks
}

fn reducible_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    for &w in &cfg.ws {
        let mut agreement = Vec::new();
        let mut laws = Vec::new();
        for n in 1..=cfg.size_limit {
            let pairs = edge_pairs(n);
            let per: Vec<((u64, Vec<String>), (u64, Vec<String>))> = (0..labeled_graph_count(n))
                .into_par_iter()
                .map(|mask| {
                    let graph = graph_from_mask(n, &pairs, mask);
                    let inst = Instance::new(graph, w).unwrap();
                    (
                        reducible_agreement_failures(&inst),
                        minimal_pair_law_failures(&inst),
                    )
                })
                .collect();
            for (a, l) in per {
                agreement.push(a);
                laws.push(l);
            }
        }
        let (cases, failures) = merge(agreement, 50);
        checks.push(Check {
            name: format!(
                "flow verifier vs assignment search, W={w}, all splits up to n={}",
                cfg.size_limit
            ),
            cases,
            failures,
        });
        let (cases, failures) = merge(laws, 50);
        checks.push(Check {
            name: format!("minimal pair laws, W={w}, up to n={}", cfg.size_limit),
            cases,
            failures,
        });
    }
    checks
}

fn emo_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let mut jobs = Vec::new();
    let n = cfg.size_limit.max(4);
    let pairs = edge_pairs(n);
    for i in 0..6u64 {
        let mask = rng.gen_range(0..labeled_graph_count(n));
        let w = cfg.ws[i as usize % cfg.ws.len()];
        jobs.push((mask, w, i));
    }
    let results: Vec<(u64, Vec<String>)> = jobs
        .into_par_iter()
        .map(|(mask, w, i)| {
            let graph = graph_from_mask(n, &pairs, mask);
            let inst = Instance::new(graph, w).unwrap();
            let fitness = [Fitness::F1, Fitness::F2, Fitness::F3][i as usize % 3];
            let algorithm = if i % 2 == 0 { Algorithm::Semo } else { Algorithm::SemoAlt };
            archive_law_failures(&inst, fitness, algorithm, Seed::new(cfg.seed ^ mask), 2_000)
        })
        .collect();
    let (cases, failures) = merge(results, 50);
    vec![Check {
        name: format!("archive laws on sampled n={n} graphs"),
        cases,
        failures,
    }]
}

/// Runs the configured scopes and collects one report.
pub fn verify_suite(cfg: &SuiteConfig) -> Report {
    let mut checks = Vec::new();
    if matches!(cfg.scope, Scope::Graph | Scope::All) {
        checks.extend(graph_checks(cfg.size_limit));
    }
    if matches!(cfg.scope, Scope::Lp | Scope::All) {
        checks.extend(lp_checks(cfg));
    }
    if matches!(cfg.scope, Scope::Reducible | Scope::All) {
        checks.extend(reducible_checks(cfg));
    }
    if matches!(cfg.scope, Scope::Emo | Scope::All) {
        checks.extend(emo_checks(cfg));
    }
    Report { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inst(n: usize, edges: &[(usize, usize)], w: usize) -> Instance {
        Instance::new(Graph::from_edges(n, edges.iter().copied()), w).unwrap()
    }

    #[test]
    fn mask_enumeration_counts_graphs() {
        assert_eq!(labeled_graph_count(1), 1);
        assert_eq!(labeled_graph_count(3), 8);
        assert_eq!(labeled_graph_count(4), 64);
        let pairs = edge_pairs(3);
        let full = graph_from_mask(3, &pairs, 0b111);
        assert_eq!(full.m(), 3);
    }

    #[test]
    fn vertex_cover_on_named_graphs() {
        assert_eq!(vertex_cover_brute(&Graph::from_edges(3, [(0, 1), (1, 2)])), 1);
        assert_eq!(
            vertex_cover_brute(&Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])),
            2
        );
        assert_eq!(
            vertex_cover_brute(&Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])),
            3
        );
        assert_eq!(vertex_cover_brute(&Graph::new(5)), 0);
    }

    #[test]
    fn assignment_search_matches_flow_on_a_star() {
        let star = inst(4, &[(0, 1), (0, 2), (0, 3)], 1);
        let a = VertexSet::from_iter(4, [0]);
        let b = VertexSet::from_iter(4, [1, 2, 3]);
        assert_eq!(reducible_brute(&star, &a, &b), Some(true));
        let b_small = VertexSet::from_iter(4, [1]);
        assert_eq!(reducible_brute(&star, &a, &b_small), Some(false));
    }

    #[test]
    fn assignment_search_rejects_leaky_crowns() {
        let path = inst(4, &[(0, 1), (1, 2), (2, 3)], 1);
        let a = VertexSet::from_iter(4, [1]);
        let b = VertexSet::from_iter(4, [2]);
        assert_eq!(reducible_brute(&path, &a, &b), None);
    }

    #[test]
    fn agreement_sweep_is_clean_on_small_paths() {
        let p4 = inst(4, &[(0, 1), (1, 2), (2, 3)], 1);
        let (cases, failures) = reducible_agreement_failures(&p4);
        assert_eq!(cases as usize, 3usize.pow(4) - 2 * 2usize.pow(4) + 1);
        assert!(failures.is_empty(), "{failures:?}");
    }

    #[test]
    fn default_suite_passes_on_tiny_graphs() {
        let cfg = SuiteConfig {
            size_limit: 3,
            sample_points: 4,
            ..SuiteConfig::default()
        };
        let report = verify_suite(&cfg);
        assert!(report.passed(), "{}", report.render());
        assert!(report.render().contains("ok"));
        assert!(report.checks.iter().map(|c| c.cases).sum::<u64>() > 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn verifiers_agree_on_random_splits(
            n in 2usize..6,
            edges in proptest::collection::vec((0usize..6, 0usize..6), 0..10),
            w in 1usize..3,
            states in proptest::collection::vec(0u8..3, 6),
        ) {
            let graph = Graph::from_edges(
                n,
                edges.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v),
            );
            let instance = Instance::new(graph, w).unwrap();
            let mut a = VertexSet::new(n);
            let mut b = VertexSet::new(n);
            for v in 0..n {
                match states[v] {
                    1 => a.insert(v),
                    2 => b.insert(v),
                    _ => {}
                }
            }
            prop_assume!(!a.is_empty() && !b.is_empty());
            let flow = verify_reducible_pair(&instance, &a, &b).map(|p| p.strict());
            let brute = reducible_brute(&instance, &a, &b);
            prop_assert_eq!(flow, brute);
        }
    }
}
