//! Problem instances, candidate solutions, and exact baselines.
//!
//! An instance is a graph together with the component budget W: a vertex set
//! X is a W-separator when every component left after deleting X has at most
//! W vertices. Equivalently, X hits every connected subgraph on W+1 vertices.
//! The exact routines here are deliberately simple search procedures guarded
//! by explicit node budgets; everything else in the crate is measured against
//! them.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

/// A graph with its component-size budget W (at least 1).
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: Graph,
    w: usize,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("component budget W must be at least 1, got {0}")]
    ZeroW(usize),
}

impl Instance {
    pub fn new(graph: Graph, w: usize) -> Result<Self, InstanceError> {
        if w == 0 {
            return Err(InstanceError::ZeroW(w));
        }
        Ok(Instance { graph, w })
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Instance induced on `keep`, with the new-to-old vertex map.
    pub fn induced(&self, keep: &VertexSet) -> (Instance, Vec<Vertex>) {
        let (g, map) = self.graph.induced(keep);
        (
            Instance {
                graph: g,
                w: self.w,
            },
            map,
        )
    }
}

/// A candidate solution: one bit per vertex, bit v set meaning v is deleted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SearchPoint {
    ones: VertexSet,
}

#[derive(Debug, Error)]
#[error("search point must be a string over 0/1, got {0:?}")]
pub struct SearchPointParseError(String);

impl SearchPoint {
    pub fn zeros(n: usize) -> Self {
        SearchPoint {
            ones: VertexSet::new(n),
        }
    }

    pub fn from_ones(ones: VertexSet) -> Self {
        SearchPoint { ones }
    }

    /// Uniform random point: every bit set independently with probability 1/2.
    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        let mut ones = VertexSet::new(n);
        for v in 0..n {
            if rng.gen_bool(0.5) {
                ones.insert(v);
            }
        }
        SearchPoint { ones }
    }

    pub fn len(&self) -> usize {
        self.ones.universe()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ones(&self) -> &VertexSet {
        &self.ones
    }

    pub fn count_ones(&self) -> usize {
        self.ones.len()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.ones.contains(v)
    }

    pub fn flip(&mut self, v: Vertex) {
        self.ones.toggle(v);
    }
}

impl fmt::Display for SearchPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in 0..self.len() {
            write!(f, "{}", if self.ones.contains(v) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SearchPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SearchPoint({self})")
    }
}

impl FromStr for SearchPoint {
    type Err = SearchPointParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut ones = VertexSet::new(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => ones.insert(i),
                _ => return Err(SearchPointParseError(s.to_string())),
            }
        }
        Ok(SearchPoint { ones })
    }
}

/// Vertices that still sit in an oversized component after deleting the
/// point's ones: the union of all components of size at least W+1.
pub fn uncovered(inst: &Instance, x: &SearchPoint) -> VertexSet {
    let mut out = VertexSet::new(inst.n());
    for comp in inst.graph.components_avoiding(x.ones()) {
        if comp.len() > inst.w() {
            out.union_with(&comp);
        }
    }
    out
}

/// Whether deleting the point's ones leaves only components of size <= W.
pub fn is_w_separator(inst: &Instance, x: &SearchPoint) -> bool {
    inst.graph
        .components_avoiding(x.ones())
        .iter()
        .all(|c| c.len() <= inst.w())
}

/// Search exceeded its node budget before reaching an answer.
#[derive(Debug, Error)]
#[error("{search} exceeded its node budget of {budget}")]
pub struct BudgetExceeded {
    pub search: &'static str,
    pub budget: u64,
}

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// Result of the exact optimum search.
#[derive(Clone, Debug)]
pub enum OptOutcome {
    /// The exact minimum separator size with a witness attaining it.
    Exact { opt: usize, witness: SearchPoint },
    /// Every separator is larger than the requested cap.
    ExceedsCap { cap: usize },
}

impl OptOutcome {
    pub fn opt(&self) -> Option<usize> {
        match self {
            OptOutcome::Exact { opt, .. } => Some(*opt),
            OptOutcome::ExceedsCap { .. } => None,
        }
    }
}

/// Exact minimum W-separator by branch and bound.
///
/// Branching picks a currently violated connected (W+1)-subgraph; any valid
/// separator must contain one of its W+1 vertices. A greedy disjoint packing
/// of violated subgraphs provides the lower bound for pruning, and vertices
/// already branched over are excluded from later branches so no subset is
/// explored twice. With `cap = Some(c)`, search space is cut at size c and
/// `ExceedsCap` reports that no separator of size <= c exists.
pub fn brute_force_opt(
    inst: &Instance,
    cap: Option<usize>,
    node_budget: Option<u64>,
) -> Result<OptOutcome, BudgetExceeded> {
    let n = inst.n();
    let budget = node_budget.unwrap_or(DEFAULT_NODE_BUDGET);
    let mut search = BranchSearch {
        inst,
        best: cap.map_or(n + 1, |c| c.min(n) + 1),
        witness: None,
        nodes: 0,
        budget,
    };
    let mut chosen = VertexSet::new(n);
    let mut forbidden = VertexSet::new(n);
    search.explore(&mut chosen, &mut forbidden)?;
    match search.witness {
        Some(witness) => Ok(OptOutcome::Exact {
            opt: search.best,
            witness,
        }),
        None => Ok(OptOutcome::ExceedsCap {
            cap: cap.expect("without a cap the full vertex set is always a separator"),
        }),
    }
}

struct BranchSearch<'a> {
    inst: &'a Instance,
    best: usize,
    witness: Option<SearchPoint>,
    nodes: u64,
    budget: u64,
}

impl BranchSearch<'_> {
    fn explore(
        &mut self,
        chosen: &mut VertexSet,
        forbidden: &mut VertexSet,
    ) -> Result<(), BudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(BudgetExceeded {
                search: "brute_force_opt",
                budget: self.budget,
            });
        }
        let size = chosen.len();
        if size + self.packing_lower_bound(chosen) >= self.best {
            return Ok(());
        }
        let Some(violated) = first_violated(self.inst, chosen) else {
            // chosen is a separator strictly better than the incumbent.
            self.best = size;
            self.witness = Some(SearchPoint::from_ones(chosen.clone()));
            return Ok(());
        };
        let mut newly_forbidden = Vec::new();
        for v in violated.iter() {
            if forbidden.contains(v) {
                continue;
            }
            chosen.insert(v);
            self.explore(chosen, forbidden)?;
            chosen.remove(v);
            forbidden.insert(v);
            newly_forbidden.push(v);
        }
        for v in newly_forbidden {
            forbidden.remove(v);
        }
        Ok(())
    }

    /// Greedy count of pairwise disjoint violated subgraphs; each forces at
    /// least one more deletion. Zero exactly when `chosen` already separates.
    fn packing_lower_bound(&self, chosen: &VertexSet) -> usize {
        let inst = self.inst;
        let mut blocked = chosen.clone();
        let mut count = 0;
        while let Some(s) = first_violated_avoiding(inst, &blocked) {
            blocked.union_with(&s);
            count += 1;
        }
        count
    }
}

/// First (in the enumerator's canonical order) connected (W+1)-subgraph of
/// the graph with `removed` deleted, if any.
fn first_violated_avoiding(inst: &Instance, removed: &VertexSet) -> Option<VertexSet> {
    if inst
        .graph
        .components_avoiding(removed)
        .iter()
        .all(|c| c.len() <= inst.w())
    {
        return None;
    }
    let keep = removed.complement();
    let (sub, map) = inst.graph.induced(&keep);
    let found = sub
        .connected_subgraphs(inst.w() + 1)
        .next()
        .expect("an oversized component contains a connected subgraph of every smaller size");
    Some(VertexSet::from_iter(inst.n(), found.iter().map(|v| map[v])))
}

fn first_violated(inst: &Instance, removed: &VertexSet) -> Option<VertexSet> {
    first_violated_avoiding(inst, removed)
}

/// A family of pairwise disjoint connected vertex sets, each of size >= W+1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing {
    pub parts: Vec<VertexSet>,
}

impl Packing {
    pub fn size(&self) -> usize {
        self.parts.len()
    }
}

/// Which packing condition failed, and where.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PackingViolation {
    #[error("parts {first} and {second} share vertices")]
    Overlap { first: usize, second: usize },
    #[error("part {part} has {size} vertices, needs at least {need}")]
    TooSmall { part: usize, size: usize, need: usize },
    #[error("part {part} does not induce a connected subgraph")]
    Disconnected { part: usize },
}

/// Checks disjointness, connectivity, and the size floor W+1 for every part.
pub fn verify_packing(inst: &Instance, packing: &Packing) -> Result<(), PackingViolation> {
    let need = inst.w() + 1;
    let mut seen = VertexSet::new(inst.n());
    let mut owner = vec![usize::MAX; inst.n()];
    for (i, part) in packing.parts.iter().enumerate() {
        if part.len() < need {
            return Err(PackingViolation::TooSmall {
                part: i,
                size: part.len(),
                need,
            });
        }
        if !seen.is_disjoint(part) {
            let clash = part
                .iter()
                .find(|&v| seen.contains(v))
                .expect("non-disjoint sets share a vertex");
            return Err(PackingViolation::Overlap {
                first: owner[clash],
                second: i,
            });
        }
        if !inst.graph.is_connected_set(part) {
            return Err(PackingViolation::Disconnected { part: i });
        }
        seen.union_with(part);
        for v in part.iter() {
            owner[v] = i;
        }
    }
    Ok(())
}

/// Maximum-cardinality packing of disjoint connected (W+1)-subgraphs, by
/// exhaustive search over the enumerated candidates.
///
/// Parts of size exactly W+1 suffice: any larger connected part can be pruned
/// leaf by leaf along a spanning tree down to W+1 vertices while staying
/// connected, so restricting to exact-size parts never lowers the count.
pub fn max_packing_brute(
    inst: &Instance,
    node_budget: Option<u64>,
) -> Result<Packing, BudgetExceeded> {
    let candidates: Vec<VertexSet> = inst.graph.connected_subgraphs(inst.w() + 1).collect();
    let budget = node_budget.unwrap_or(DEFAULT_NODE_BUDGET);
    let mut search = PackSearch {
        candidates: &candidates,
        inst,
        best: Vec::new(),
        nodes: 0,
        budget,
    };
    let mut used = VertexSet::new(inst.n());
    let mut current = Vec::new();
    search.explore(0, &mut used, &mut current)?;
    Ok(Packing { parts: search.best })
}

struct PackSearch<'a> {
    candidates: &'a [VertexSet],
    inst: &'a Instance,
    best: Vec<VertexSet>,
    nodes: u64,
    budget: u64,
}

impl PackSearch<'_> {
    fn explore(
        &mut self,
        from: usize,
        used: &mut VertexSet,
        current: &mut Vec<VertexSet>,
    ) -> Result<(), BudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(BudgetExceeded {
                search: "max_packing_brute",
                budget: self.budget,
            });
        }
        if current.len() > self.best.len() {
            self.best = current.clone();
        }
        let free = self.inst.n() - used.len();
        let ceiling = current.len() + free / (self.inst.w() + 1);
        if ceiling <= self.best.len() {
            return Ok(());
        }
        for i in from..self.candidates.len() {
            if used.is_disjoint(&self.candidates[i]) {
                used.union_with(&self.candidates[i]);
                current.push(self.candidates[i].clone());
                self.explore(i + 1, used, current)?;
                current.pop();
                used.subtract(&self.candidates[i]);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    fn inst(g: Graph, w: usize) -> Instance {
        Instance::new(g, w).unwrap()
    }

    #[test]
    fn w_zero_is_rejected() {
        assert!(Instance::new(path(3), 0).is_err());
        assert!(Instance::new(path(3), 1).is_ok());
    }

    #[test]
    fn search_point_text_roundtrip() {
        let x: SearchPoint = "01101".parse().unwrap();
        assert_eq!(x.count_ones(), 3);
        assert_eq!(x.to_string(), "01101");
        assert!("012".parse::<SearchPoint>().is_err());
    }

    #[test]
    fn uncovered_on_a_path() {
        // P5, W = 1: deleting the middle leaves two oversized pairs.
        let inst = inst(path(5), 1);
        let x: SearchPoint = "00100".parse().unwrap();
        assert_eq!(uncovered(&inst, &x).to_vec(), vec![0, 1, 3, 4]);
        // Deleting vertices 1 and 3 leaves singletons only.
        let x: SearchPoint = "01010".parse().unwrap();
        assert!(uncovered(&inst, &x).is_empty());
        assert!(is_w_separator(&inst, &x));
    }

    #[test]
    fn separator_iff_no_uncovered_exhaustive() {
        for (g, w) in [
            (path(6), 1),
            (path(6), 2),
            (complete(5), 2),
            (Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4)]), 1),
        ] {
            let inst = inst(g, w);
            let n = inst.n();
            for mask in 0u32..(1 << n) {
                let x = SearchPoint::from_ones(VertexSet::from_iter(
                    n,
                    (0..n).filter(|&v| mask & (1 << v) != 0),
                ));
                assert_eq!(is_w_separator(&inst, &x), uncovered(&inst, &x).is_empty());
            }
        }
    }

    #[test]
    fn opt_on_small_named_graphs() {
        // P5, W = 1: two deletions required.
        let out = brute_force_opt(&inst(path(5), 1), None, None).unwrap();
        assert_eq!(out.opt(), Some(2));
        // K4, W = 1: any single remaining edge is oversized, so delete 3.
        let out = brute_force_opt(&inst(complete(4), 1), None, None).unwrap();
        assert_eq!(out.opt(), Some(3));
        // K4, W = 3: all four vertices form one oversized component.
        let out = brute_force_opt(&inst(complete(4), 3), None, None).unwrap();
        assert_eq!(out.opt(), Some(1));
        // K4, W = 4: already fine.
        let out = brute_force_opt(&inst(complete(4), 4), None, None).unwrap();
        assert_eq!(out.opt(), Some(0));
        // C6, W = 2: one cut is not enough, two are.
        let mut c6 = path(6);
        c6.add_edge(5, 0);
        let out = brute_force_opt(&inst(c6, 2), None, None).unwrap();
        assert_eq!(out.opt(), Some(2));
    }

    #[test]
    fn opt_witness_is_a_separator_of_stated_size() {
        let inst = inst(Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6)]), 2);
        match brute_force_opt(&inst, None, None).unwrap() {
            OptOutcome::Exact { opt, witness } => {
                assert_eq!(witness.count_ones(), opt);
                assert!(is_w_separator(&inst, &witness));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cap_reports_exceeded() {
        let inst = inst(complete(4), 1);
        match brute_force_opt(&inst, Some(2), None).unwrap() {
            OptOutcome::ExceedsCap { cap } => assert_eq!(cap, 2),
            other => panic!("expected cap exceeded, got {other:?}"),
        }
        match brute_force_opt(&inst, Some(3), None).unwrap() {
            OptOutcome::Exact { opt, .. } => assert_eq!(opt, 3),
            other => panic!("expected exact, got {other:?}"),
        }
    }

    #[test]
    fn node_budget_is_enforced() {
        let err = brute_force_opt(&inst(complete(8), 1), None, Some(3)).unwrap_err();
        assert_eq!(err.budget, 3);
    }

    /// Independent reference: exhaustive subset scan in increasing size.
    fn subset_scan_opt(inst: &Instance) -> usize {
        let n = inst.n();
        for k in 0..=n {
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize != k {
                    continue;
                }
                let x = SearchPoint::from_ones(VertexSet::from_iter(
                    n,
                    (0..n).filter(|&v| mask & (1 << v) != 0),
                ));
                if is_w_separator(inst, &x) {
                    return k;
                }
            }
        }
        unreachable!("deleting everything is always a separator");
    }

    /// Independent reference for W = 1: minimum vertex cover by subset scan.
    fn vertex_cover_opt(g: &Graph) -> usize {
        let n = g.n();
        (0u32..(1 << n))
            .filter(|mask| {
                g.edges()
                    .all(|(u, v)| mask & (1 << u) != 0 || mask & (1 << v) != 0)
            })
            .map(|mask| mask.count_ones() as usize)
            .min()
            .expect("full set covers")
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn branch_and_bound_matches_subset_scan(
            n in 1usize..8,
            edges in proptest::collection::vec((0usize..8, 0usize..8), 0..18),
            w in 1usize..4,
        ) {
            let g = Graph::from_edges(
                n,
                edges.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v),
            );
            let inst = Instance::new(g, w).unwrap();
            let got = brute_force_opt(&inst, None, None).unwrap().opt().unwrap();
            prop_assert_eq!(got, subset_scan_opt(&inst));
            if w == 1 {
                prop_assert_eq!(got, vertex_cover_opt(&inst.graph));
            }
        }

        #[test]
        fn supersets_of_separators_stay_separators(
            n in 1usize..8,
            edges in proptest::collection::vec((0usize..8, 0usize..8), 0..18),
            mask in 0u32..256,
            extra in 0usize..8,
        ) {
            let g = Graph::from_edges(
                n,
                edges.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v),
            );
            let inst = Instance::new(g, 1).unwrap();
            let mut x = SearchPoint::from_ones(VertexSet::from_iter(
                n,
                (0..n).filter(|&v| mask & (1 << v) != 0),
            ));
            if is_w_separator(&inst, &x) {
                let v = extra % n;
                if !x.contains(v) {
                    x.flip(v);
                }
                prop_assert!(is_w_separator(&inst, &x));
            }
        }
    }

    #[test]
    fn packing_verifier_names_the_violation() {
        let inst = inst(path(6), 1);
        let ok = Packing {
            parts: vec![
                VertexSet::from_iter(6, [0, 1]),
                VertexSet::from_iter(6, [3, 4]),
            ],
        };
        assert_eq!(verify_packing(&inst, &ok), Ok(()));

        let overlap = Packing {
            parts: vec![
                VertexSet::from_iter(6, [0, 1]),
                VertexSet::from_iter(6, [1, 2]),
            ],
        };
        assert_eq!(
            verify_packing(&inst, &overlap),
            Err(PackingViolation::Overlap {
                first: 0,
                second: 1
            })
        );

        let small = Packing {
            parts: vec![VertexSet::from_iter(6, [0])],
        };
        assert_eq!(
            verify_packing(&inst, &small),
            Err(PackingViolation::TooSmall {
                part: 0,
                size: 1,
                need: 2
            })
        );

        let disconnected = Packing {
            parts: vec![VertexSet::from_iter(6, [0, 2])],
        };
        assert_eq!(
            verify_packing(&inst, &disconnected),
            Err(PackingViolation::Disconnected { part: 0 })
        );
    }

    #[test]
    fn max_packing_on_named_graphs() {
        // P6, W = 1: three disjoint edges.
        let p = max_packing_brute(&inst(path(6), 1), None).unwrap();
        assert_eq!(p.size(), 3);
        // P6, W = 2: two disjoint triples.
        let p = max_packing_brute(&inst(path(6), 2), None).unwrap();
        assert_eq!(p.size(), 2);
        // K5, W = 1: two disjoint edges fit, a third cannot.
        let p = max_packing_brute(&inst(complete(5), 1), None).unwrap();
        assert_eq!(p.size(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// Disjoint oversized subgraphs each force a deletion, so packing
        /// size never exceeds the optimum separator size.
        #[test]
        fn packing_size_lower_bounds_opt(
            n in 1usize..8,
            edges in proptest::collection::vec((0usize..8, 0usize..8), 0..16),
            w in 1usize..3,
        ) {
            let g = Graph::from_edges(
                n,
                edges.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v),
            );
            let inst = Instance::new(g, w).unwrap();
            let packing = max_packing_brute(&inst, None).unwrap();
            prop_assert!(verify_packing(&inst, &packing).is_ok());
            let opt = brute_force_opt(&inst, None, None).unwrap().opt().unwrap();
            prop_assert!(packing.size() <= opt);
        }
    }
}
