//! Exact rational relaxation of the separator problem.
//!
//! The fractional program puts a weight y_v >= 0 on every vertex and asks
//! for minimum total weight such that every connected subgraph on W+1
//! vertices carries weight at least 1. Its value lower-bounds the optimum
//! separator size, and the structure of its optimal face (which vertices are
//! forced to weight 1, which can stay below 1) drives the reductions in
//! [`crate::reducible`] and the fitness functions in [`crate::emo`].
//!
//! Everything is exact: values are `BigRational`, dominance and equality
//! questions downstream depend on it. Solves run through the packing dual
//! with lazy constraint generation; see [`simplex`] for the tableau. The
//! constraint family of an induced subgraph splits across its connected
//! components, so results are computed and memoized per component and summed.

mod simplex;

use std::collections::HashMap;

use num_rational::Ratio;
use thiserror::Error;

pub use num_rational::BigRational as Rational;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::separator::Instance;
use simplex::{ColumnLp, Scalar};

/// How many violated constraints one separation round may add.
const SEPARATION_BATCH: usize = 8;

/// A weighting of vertices by exact rationals; zero entries are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalSeparator {
    entries: Vec<(Vertex, Rational)>,
    objective: Rational,
}

impl FractionalSeparator {
    fn from_entries(mut entries: Vec<(Vertex, Rational)>) -> Self {
        entries.retain(|(_, v)| !num_traits::Zero::is_zero(v));
        entries.sort_by_key(|(v, _)| *v);
        let objective = entries
            .iter()
            .map(|(_, v)| v.clone())
            .fold(num_traits::Zero::zero(), |a: Rational, b| a + b);
        FractionalSeparator { entries, objective }
    }

    pub fn empty() -> Self {
        FractionalSeparator {
            entries: Vec::new(),
            objective: num_traits::Zero::zero(),
        }
    }

    /// The weight on `v`; absent vertices weigh zero.
    pub fn value_of(&self, v: Vertex) -> Rational {
        match self.entries.binary_search_by_key(&v, |(u, _)| *u) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => num_traits::Zero::zero(),
        }
    }

    pub fn objective(&self) -> &Rational {
        &self.objective
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, &Rational)> {
        self.entries.iter().map(|(v, r)| (*v, r))
    }

    pub fn support(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.entries.iter().map(|(v, _)| *v)
    }

    /// True when every weight is strictly below 1.
    pub fn all_below_one(&self) -> bool {
        let one: Rational = num_traits::One::one();
        self.entries.iter().all(|(_, v)| *v < one)
    }
}

/// Outcome of one relaxation solve.
#[derive(Clone, Debug)]
pub struct LpResult {
    pub value: Rational,
    pub solution: FractionalSeparator,
    /// Constraints materialized by lazy separation, totalled over components.
    pub constraint_count: usize,
}

#[derive(Clone)]
struct ComponentEntry {
    value: Rational,
    solution: Vec<(Vertex, Rational)>,
    pool: Vec<VertexSet>,
}

/// Memo store for one instance. Keys are connected components (as vertex
/// sets over the instance's universe), so unions of previously seen
/// components cost nothing new.
///
/// A cache belongs to a single instance and a single thread: hand each
/// concurrent run its own. Feeding queries from a different instance is a
/// logic error and trips an assertion.
#[derive(Default)]
pub struct LpCache {
    fingerprint: Option<(usize, usize, usize)>,
    components: HashMap<VertexSet, ComponentEntry>,
    persistent: HashMap<VertexSet, VertexSet>,
    avoid: HashMap<VertexSet, Vec<(Vertex, Rational)>>,
}

impl LpCache {
    pub fn new() -> Self {
        LpCache::default()
    }

    pub fn component_entries(&self) -> usize {
        self.components.len()
    }

    fn check_instance(&mut self, inst: &Instance) {
        let fp = (inst.n(), inst.graph.m(), inst.w());
        match self.fingerprint {
            None => self.fingerprint = Some(fp),
            Some(stored) => assert_eq!(
                stored, fp,
                "LP cache reused across different instances"
            ),
        }
    }
}

/// Relaxation value of the subgraph induced on `restrict`, without cloning
/// the solution. This is the hot call in fitness evaluation.
pub fn lp_value_of(inst: &Instance, restrict: &VertexSet, cache: &mut LpCache) -> Rational {
    cache.check_instance(inst);
    let mut total: Rational = num_traits::Zero::zero();
    for comp in inst.graph.components_of(restrict) {
        if comp.len() > inst.w() {
            total += &ensure_component(inst, cache, &comp).value;
        }
    }
    total
}

/// Full relaxation solve on the subgraph induced on `restrict`: exact value,
/// one optimal solution, and the number of constraints separation needed.
pub fn lp_value(inst: &Instance, restrict: &VertexSet, cache: &mut LpCache) -> LpResult {
    cache.check_instance(inst);
    let mut value: Rational = num_traits::Zero::zero();
    let mut entries = Vec::new();
    let mut constraint_count = 0;
    for comp in inst.graph.components_of(restrict) {
        if comp.len() > inst.w() {
            let entry = ensure_component(inst, cache, &comp);
            value += &entry.value;
            entries.extend(entry.solution.iter().cloned());
            constraint_count += entry.pool.len();
        }
    }
    LpResult {
        value,
        solution: FractionalSeparator::from_entries(entries),
        constraint_count,
    }
}

/// Convenience form over the whole vertex set.
pub fn lp_value_full(inst: &Instance, cache: &mut LpCache) -> LpResult {
    lp_value(inst, &VertexSet::full(inst.n()), cache)
}

/// The constraint pools materialized for each oversized component of the
/// restriction, for inspection and debugging output.
pub fn constraint_pools(
    inst: &Instance,
    restrict: &VertexSet,
    cache: &mut LpCache,
) -> Vec<(VertexSet, Vec<VertexSet>)> {
    cache.check_instance(inst);
    let mut out = Vec::new();
    for comp in inst.graph.components_of(restrict) {
        if comp.len() > inst.w() {
            let entry = ensure_component(inst, cache, &comp);
            out.push((comp.clone(), entry.pool.clone()));
        }
    }
    out
}

/// Vertices forced to weight exactly 1 in every optimal solution of the
/// relaxation on `restrict`.
///
/// Per vertex this solves an auxiliary program minimizing that coordinate
/// with the objective pinned to the optimal value; the vertex is persistent
/// exactly when the minimum is still 1. Vertices already below 1 in the
/// cached optimum are skipped, since that optimum witnesses non-persistence.
pub fn persistent_ones(inst: &Instance, restrict: &VertexSet, cache: &mut LpCache) -> VertexSet {
    cache.check_instance(inst);
    let mut out = VertexSet::new(inst.n());
    for comp in inst.graph.components_of(restrict) {
        if comp.len() <= inst.w() {
            continue;
        }
        if let Some(p) = cache.persistent.get(&comp) {
            out.union_with(p);
            continue;
        }
        let entry = ensure_component(inst, cache, &comp).clone();
        let (sub, map) = inst.graph.induced(&comp);
        let local_pool = to_local(&entry.pool, &map, sub.n());
        let one: Rational = num_traits::One::one();
        let mut pers = VertexSet::new(inst.n());
        for local in 0..sub.n() {
            let orig = map[local];
            if solution_value(&entry.solution, orig) < one {
                continue;
            }
            let (min_value, _, _) = solve_escalating(
                &sub,
                inst.w() + 1,
                &local_pool,
                Some((Pin::Low(local), entry.value.clone())),
            );
            if min_value == one {
                pers.insert(orig);
            }
        }
        cache.persistent.insert(comp.clone(), pers.clone());
        out.union_with(&pers);
    }
    out
}

#[derive(Debug, Error)]
pub enum AvoidOnesError {
    #[error("vertex {0} has weight 1 in every optimal solution")]
    PersistentOne(Vertex),
}

/// One optimal solution of the relaxation on `restrict` in which every
/// weight is strictly below 1, as the average of the per-vertex minimizers.
///
/// Fails if any vertex is persistent; check [`persistent_ones`] first.
pub fn avoid_ones_solution(
    inst: &Instance,
    restrict: &VertexSet,
    cache: &mut LpCache,
) -> Result<FractionalSeparator, AvoidOnesError> {
    cache.check_instance(inst);
    let mut entries: Vec<(Vertex, Rational)> = Vec::new();
    for comp in inst.graph.components_of(restrict) {
        if comp.len() <= inst.w() {
            continue;
        }
        if let Some(cached) = cache.avoid.get(&comp) {
            entries.extend(cached.iter().cloned());
            continue;
        }
        let entry = ensure_component(inst, cache, &comp).clone();
        let (sub, map) = inst.graph.induced(&comp);
        let local_pool = to_local(&entry.pool, &map, sub.n());
        let one: Rational = num_traits::One::one();
        let nc = sub.n();
        let mut acc: Vec<Rational> = vec![num_traits::Zero::zero(); nc];
        for local in 0..nc {
            let (min_value, y, _) = solve_escalating(
                &sub,
                inst.w() + 1,
                &local_pool,
                Some((Pin::Low(local), entry.value.clone())),
            );
            if min_value >= one {
                return Err(AvoidOnesError::PersistentOne(map[local]));
            }
            for (u, val) in y.iter().enumerate() {
                acc[u] += val;
            }
        }
        let count = Rational::from_integer(nc.into());
        let comp_entries: Vec<(Vertex, Rational)> = acc
            .into_iter()
            .enumerate()
            .map(|(local, total)| (map[local], total / &count))
            .collect();
        // Each coordinate averages one value < 1 (its own minimizer) with
        // values <= 1, so the average is strictly below 1.
        debug_assert!(comp_entries.iter().all(|(_, v)| *v < one));
        cache.avoid.insert(comp.clone(), comp_entries.clone());
        entries.extend(comp_entries);
    }
    Ok(FractionalSeparator::from_entries(entries))
}

/// Exact range of one vertex's weight over all optimal solutions of the
/// relaxation on `restrict`.
///
/// Both ends come from pinned solves at the optimal value: the minimum
/// directly, the maximum as budget minus the minimal total weight of the
/// other vertices (every budgeted cover spends the budget exactly).
pub fn coordinate_bounds_over_optima(
    inst: &Instance,
    restrict: &VertexSet,
    v: Vertex,
    cache: &mut LpCache,
) -> (Rational, Rational) {
    cache.check_instance(inst);
    assert!(
        restrict.contains(v),
        "vertex {v} is outside the restriction"
    );
    let zero = || -> Rational { num_traits::Zero::zero() };
    for comp in inst.graph.components_of(restrict) {
        if !comp.contains(v) {
            continue;
        }
        if comp.len() <= inst.w() {
            // Unconstrained vertices carry weight 0 in every optimum.
            return (zero(), zero());
        }
        let entry = ensure_component(inst, cache, &comp).clone();
        let (sub, map) = inst.graph.induced(&comp);
        let local_pool = to_local(&entry.pool, &map, sub.n());
        let local = map
            .iter()
            .position(|&orig| orig == v)
            .expect("v lies in this component");
        let (min_v, _, _) = solve_escalating(
            &sub,
            inst.w() + 1,
            &local_pool,
            Some((Pin::Low(local), entry.value.clone())),
        );
        let (others_min, _, _) = solve_escalating(
            &sub,
            inst.w() + 1,
            &local_pool,
            Some((Pin::High(local), entry.value.clone())),
        );
        let max_v = entry.value.clone() - others_min;
        debug_assert!(min_v <= max_v);
        return (min_v, max_v);
    }
    unreachable!("components of the restriction cover the restriction")
}

/// Report from [`lp_superadditivity_check`].
#[derive(Clone, Debug)]
pub struct SuperadditivityReport {
    pub first_value: Rational,
    pub second_value: Rational,
    pub union_value: Rational,
    pub holds: bool,
}

/// Checks that the relaxation is superadditive across a disjoint split:
/// LP on `first` plus LP on `second` never exceeds LP on their union.
pub fn lp_superadditivity_check(
    inst: &Instance,
    first: &VertexSet,
    second: &VertexSet,
    cache: &mut LpCache,
) -> SuperadditivityReport {
    assert!(
        first.is_disjoint(second),
        "superadditivity check requires disjoint vertex sets"
    );
    let first_value = lp_value_of(inst, first, cache);
    let second_value = lp_value_of(inst, second, cache);
    let union_value = lp_value_of(inst, &first.union(second), cache);
    let holds = first_value.clone() + &second_value <= union_value;
    SuperadditivityReport {
        first_value,
        second_value,
        union_value,
        holds,
    }
}

/// Exhaustively re-checks that `solution` covers every connected (W+1)-set
/// of the subgraph induced on `restrict`. Intended for tests and the verify
/// suite; enumeration is not pruned.
pub fn check_cover_feasibility(
    inst: &Instance,
    restrict: &VertexSet,
    solution: &FractionalSeparator,
) -> bool {
    let one: Rational = num_traits::One::one();
    let (sub, map) = inst.graph.induced(restrict);
    for set in sub.connected_subgraphs(inst.w() + 1) {
        let mass: Rational = set
            .iter()
            .map(|local| solution.value_of(map[local]))
            .fold(num_traits::Zero::zero(), |a: Rational, b| a + b);
        if mass < one {
            return false;
        }
    }
    true
}

fn solution_value(entries: &[(Vertex, Rational)], v: Vertex) -> Rational {
    entries
        .iter()
        .find(|(u, _)| *u == v)
        .map(|(_, val)| val.clone())
        .unwrap_or_else(num_traits::Zero::zero)
}

fn to_local(pool: &[VertexSet], map: &[Vertex], local_n: usize) -> Vec<VertexSet> {
    let mut back = HashMap::new();
    for (local, &orig) in map.iter().enumerate() {
        back.insert(orig, local);
    }
    pool.iter()
        .map(|s| VertexSet::from_iter(local_n, s.iter().map(|v| back[&v])))
        .collect()
}

fn ensure_component<'c>(
    inst: &Instance,
    cache: &'c mut LpCache,
    comp: &VertexSet,
) -> &'c ComponentEntry {
    if !cache.components.contains_key(comp) {
        let (sub, map) = inst.graph.induced(comp);
        let (value, y, local_pool) = solve_escalating(&sub, inst.w() + 1, &[], None);
        let solution: Vec<(Vertex, Rational)> = y
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !num_traits::Zero::is_zero(v))
            .map(|(local, v)| (map[local], v))
            .collect();
        let pool = local_pool
            .into_iter()
            .map(|s| VertexSet::from_iter(inst.n(), s.iter().map(|local| map[local])))
            .collect();
        cache.components.insert(
            comp.clone(),
            ComponentEntry {
                value,
                solution,
                pool,
            },
        );
    }
    &cache.components[comp]
}

/// Which coordinate to optimize over the optimal face, if any.
#[derive(Clone, Copy, Debug)]
enum Pin {
    /// Minimize the weight of this vertex subject to total weight <= budget.
    Low(usize),
    /// Minimize total weight of all other vertices (so this vertex's weight
    /// is as large as the budget allows); the maximum is budget - value.
    High(usize),
}

/// Solves one component, trying machine-word rationals first and redoing the
/// whole solve in arbitrary precision if anything overflows.
///
/// With a `pin` and a `budget` (the component's optimal value) the solve
/// explores the optimal face instead of computing the value.
fn solve_escalating(
    g: &Graph,
    k: usize,
    seed_pool: &[VertexSet],
    pin: Option<(Pin, Rational)>,
) -> (Rational, Vec<Rational>, Vec<VertexSet>) {
    let fast_pin = match &pin {
        None => Some(None),
        Some((p, budget)) => <Ratio<i64> as Scalar>::from_big(budget).map(|b| Some((*p, b))),
    };
    if let Some(p) = fast_pin {
        if let Some((value, y, pool)) = solve_component::<Ratio<i64>>(g, k, seed_pool, p) {
            return (
                value.to_big(),
                y.iter().map(Scalar::to_big).collect(),
                pool,
            );
        }
    }
    solve_component::<Rational>(g, k, seed_pool, pin)
        .expect("arbitrary-precision arithmetic does not overflow")
}

/// Core solve on one connected graph: lazy constraint generation over the
/// packing dual. Returns `(optimal value, vertex weights, final pool)`.
fn solve_component<F: Scalar>(
    g: &Graph,
    k: usize,
    seed_pool: &[VertexSet],
    pin: Option<(Pin, F)>,
) -> Option<(F, Vec<F>, Vec<VertexSet>)> {
    let rows = g.n();
    let rhs = match &pin {
        None => vec![F::one(); rows],
        Some((Pin::Low(v), _)) => {
            let mut rhs = vec![F::zero(); rows];
            rhs[*v] = F::one();
            rhs
        }
        Some((Pin::High(v), _)) => {
            let mut rhs = vec![F::one(); rows];
            rhs[*v] = F::zero();
            rhs
        }
    };
    let mut lp = ColumnLp::new(rhs);
    if let Some((_, budget)) = &pin {
        // Budget column: spending it relaxes every vertex row by one unit
        // and costs the pinned objective value.
        let entries: Vec<(usize, F)> = (0..rows).map(|i| (i, F::one().neg())).collect();
        lp.add_column(budget.neg(), &entries)?;
    }
    let mut pool: Vec<VertexSet> = Vec::new();
    let seeds = if seed_pool.is_empty() {
        greedy_disjoint_sets(g, k)
    } else {
        seed_pool.to_vec()
    };
    for s in seeds {
        add_cover_column(&mut lp, &s)?;
        pool.push(s);
    }
    loop {
        lp.optimize()?;
        let y = lp.duals();
        let violated = collect_violated(g, k, &y, SEPARATION_BATCH)?;
        if violated.is_empty() {
            break;
        }
        for s in violated {
            add_cover_column(&mut lp, &s)?;
            pool.push(s);
        }
    }
    Some((lp.value().clone(), lp.duals(), pool))
}

fn add_cover_column<F: Scalar>(lp: &mut ColumnLp<F>, set: &VertexSet) -> Option<()> {
    let entries: Vec<(usize, F)> = set.iter().map(|v| (v, F::one())).collect();
    lp.add_column(F::one(), &entries)
}

/// Greedy maximal family of pairwise disjoint connected k-sets, used to seed
/// the pool: every member is violated at the zero solution.
fn greedy_disjoint_sets(g: &Graph, k: usize) -> Vec<VertexSet> {
    let mut used = VertexSet::new(g.n());
    let mut out = Vec::new();
    for s in g.connected_subgraphs(k) {
        if used.is_disjoint(&s) {
            used.union_with(&s);
            out.push(s);
        }
    }
    out
}

/// Finds up to `limit` connected k-sets with weight below 1 under `y`.
///
/// Same canonical-extension walk as the graph enumerator, with one pruning
/// rule: once a partial set reaches weight 1 no superset can be violated
/// (weights are nonnegative), so the whole subtree is skipped.
fn collect_violated<F: Scalar>(
    g: &Graph,
    k: usize,
    y: &[F],
    limit: usize,
) -> Option<Vec<VertexSet>> {
    debug_assert!(k >= 2);
    let one = F::one();
    let mut out = Vec::new();
    for root in 0..g.n() {
        if out.len() >= limit {
            break;
        }
        if !(y[root] < one) {
            continue;
        }
        let ext: Vec<usize> = g.neighbors(root).iter().copied().filter(|&u| u > root).collect();
        let mut sub = vec![root];
        extend_violated(g, k, y, root, &mut sub, &ext, &y[root].clone(), limit, &mut out)?;
    }
    Some(out)
}

#[allow(clippy::too_many_arguments)]
fn extend_violated<F: Scalar>(
    g: &Graph,
    k: usize,
    y: &[F],
    root: usize,
    sub: &mut Vec<usize>,
    ext: &[usize],
    mass: &F,
    limit: usize,
    out: &mut Vec<VertexSet>,
) -> Option<()> {
    for (pos, &w) in ext.iter().enumerate() {
        if out.len() >= limit {
            return Some(());
        }
        let new_mass = mass.checked_add(&y[w])?;
        if !(new_mass < F::one()) {
            continue;
        }
        if sub.len() + 1 == k {
            let mut set = VertexSet::from_iter(g.n(), sub.iter().copied());
            set.insert(w);
            out.push(set);
            continue;
        }
        let mut child_ext: Vec<usize> = ext[pos + 1..].to_vec();
        for &u in g.neighbors(w) {
            if u > root
                && !sub.iter().any(|&s| s == u || g.has_edge(s, u))
            {
                child_ext.push(u);
            }
        }
        sub.push(w);
        extend_violated(g, k, y, root, sub, &child_ext, &new_mass, limit, out)?;
        sub.pop();
    }
    Some(())
}
