//! Head/crown machinery for shrinking instances without changing the answer.
//!
//! A pair of disjoint sets (head `A`, crown `B`) is *reducible* when the
//! crown falls apart into components of size at most `W` whose only outside
//! neighbors are heads, and an integral assignment routes at least `2W-1`
//! units of crown mass to every head (each component can hand out at most
//! its own size). If some head can even collect `2W` units the pair is
//! *strictly* reducible. Deleting the head and crown together and lowering the budget by `|A|`
//! then preserves the answer exactly.
//!
//! Assignments are found and certified with a small max-flow network: one
//! node per crown component (supplied with its size), one per head (drained
//! through a quota arc). Validity is saturation of all quota arcs;
//! strictness is a single extra augmenting unit after widening one quota.
//!
//! The module also hosts the degree rule (a vertex seeing more than
//! `k + W` others must be in every solution of budget `k`) and the kernel
//! size bound that both rules together guarantee.

mod flow;
mod packing;

pub use packing::{packing_after_deletion, packing_from_pair, AfterDeletionError};

use crate::graph::{Graph, Vertex, VertexSet};
use crate::lp::{persistent_ones, LpCache};
use crate::separator::Instance;
use flow::FlowNet;
use std::collections::BTreeMap;

/// Exhaustive head-set enumeration in `find_strictly_reducible_pair` is
/// attempted up to this many vertices.
const EXHAUSTIVE_SEARCH_LIMIT: usize = 16;

/// `minimize_pair` checks all proper head subsets up to this head size;
/// beyond it only single-vertex drops are tried.
const MINIMIZE_EXHAUSTIVE_LIMIT: usize = 12;

/// Integral routing of crown mass to heads, keyed by (component index,
/// head vertex). Entries are strictly positive.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    entries: BTreeMap<(usize, Vertex), u64>,
}

impl Assignment {
    fn set(&mut self, component: usize, head: Vertex, amount: u64) {
        if amount == 0 {
            self.entries.remove(&(component, head));
        } else {
            self.entries.insert((component, head), amount);
        }
    }

    pub fn get(&self, component: usize, head: Vertex) -> u64 {
        self.entries.get(&(component, head)).copied().unwrap_or(0)
    }

    /// Total mass routed to one head.
    pub fn load(&self, head: Vertex) -> u64 {
        self.entries
            .iter()
            .filter(|((_, a), _)| *a == head)
            .map(|(_, &v)| v)
            .sum()
    }

    /// Total mass one component hands out.
    pub fn supply_used(&self, component: usize) -> u64 {
        self.entries
            .iter()
            .filter(|((c, _), _)| *c == component)
            .map(|(_, &v)| v)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, Vertex), u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }
}

/// A verified head/crown pair together with its certificate.
///
/// `components` lists the crown components in ascending order of their
/// smallest member; `assignment` indexes them by position in that list.
/// `strict_witness` names a head that the stored assignment feeds with at
/// least `2W` units, when one exists.
#[derive(Clone, Debug)]
pub struct ReduciblePair {
    pub head: VertexSet,
    pub crown: VertexSet,
    pub components: Vec<VertexSet>,
    pub assignment: Assignment,
    pub strict_witness: Option<Vertex>,
}

impl ReduciblePair {
    pub fn strict(&self) -> bool {
        self.strict_witness.is_some()
    }
}

/// Quota every head must receive: `2W - 1`.
fn quota(w: usize) -> i64 {
    2 * w as i64 - 1
}

/// Builds the assignment network. Nodes: 0 = source, 1 = sink, then one per
/// component, then one per head. Returns the network, the forward-arc id of
/// every admissible (component, head) link, and the quota arc per head.
fn assignment_net(
    graph: &Graph,
    components: &[VertexSet],
    heads: &[Vertex],
    head_caps: &[i64],
    mid_allowed: impl Fn(usize, usize) -> bool,
) -> (FlowNet, Vec<((usize, usize), usize)>, Vec<usize>) {
    let nc = components.len();
    let nh = heads.len();
    let mut net = FlowNet::new(2 + nc + nh, 0, 1);
    for (ci, comp) in components.iter().enumerate() {
        net.add_arc(0, 2 + ci, comp.len() as i64);
    }
    let mut mid = Vec::new();
    for (ci, comp) in components.iter().enumerate() {
        let nbrs = graph.neighborhood(comp);
        for (hj, &head) in heads.iter().enumerate() {
            if nbrs.contains(head) && mid_allowed(ci, hj) {
                let id = net.add_arc(2 + ci, 2 + nc + hj, comp.len() as i64);
                mid.push(((ci, hj), id));
            }
        }
    }
    let mut head_arcs = Vec::with_capacity(nh);
    for hj in 0..nh {
        head_arcs.push(net.add_arc(2 + nc + hj, 1, head_caps[hj]));
    }
    (net, mid, head_arcs)
}

fn extract_assignment(
    net: &FlowNet,
    mid: &[((usize, usize), usize)],
    heads: &[Vertex],
) -> Assignment {
    let mut assignment = Assignment::default();
    for &((ci, hj), arc) in mid {
        let f = net.flow_on(arc);
        if f > 0 {
            assignment.set(ci, heads[hj], f as u64);
        }
    }
    assignment
}

/// Checks whether (a, b) is a reducible pair and, if so, returns it with an
/// integral assignment extracted from a maximum flow. Strictness is decided
/// by widening each head's quota arc to `2W` in ascending vertex order and
/// keeping the first successful extra augmentation.
pub fn verify_reducible_pair(
    inst: &Instance,
    a: &VertexSet,
    b: &VertexSet,
) -> Option<ReduciblePair> {
    assert!(a.is_disjoint(b), "head and crown overlap");
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let graph = &inst.graph;
    let w = inst.w();
    if !graph.neighborhood(b).is_subset_of(a) {
        return None;
    }
    let components = graph.components_of(b);
    if components.iter().any(|c| c.len() > w) {
        return None;
    }
    let heads = a.to_vec();
    let q = quota(w);
    let caps = vec![q; heads.len()];
    let (mut net, mid, head_arcs) = assignment_net(graph, &components, &heads, &caps, |_, _| true);
    if net.max_flow() != q * heads.len() as i64 {
        return None;
    }
    let mut strict_witness = None;
    for (hj, &head) in heads.iter().enumerate() {
        net.set_cap(head_arcs[hj], q + 1);
        if net.augment_once() > 0 {
            strict_witness = Some(head);
            break;
        }
        net.set_cap(head_arcs[hj], q);
    }
    let assignment = extract_assignment(&net, &mid, &heads);
    Some(ReduciblePair {
        head: a.clone(),
        crown: b.clone(),
        components,
        assignment,
        strict_witness,
    })
}

/// Union of the components of `graph` minus `heads` that are small enough to
/// be crown material and actually touch a head.
fn crown_candidates(graph: &Graph, w: usize, heads: &VertexSet) -> VertexSet {
    let mut crown = VertexSet::new(graph.n());
    for comp in graph.components_avoiding(heads) {
        if comp.len() <= w && !graph.neighborhood(&comp).is_empty() {
            crown.union_with(&comp);
        }
    }
    crown
}

/// Vertices whose removal detaches some component of size at most `W`
/// adjacent to them.
fn small_component_guards(inst: &Instance) -> VertexSet {
    let graph = &inst.graph;
    let mut guards = VertexSet::new(graph.n());
    for v in 0..graph.n() {
        let removed = VertexSet::from_iter(graph.n(), [v]);
        for comp in graph.components_avoiding(&removed) {
            if comp.len() <= inst.w() && graph.neighborhood(&comp).contains(v) {
                guards.insert(v);
                break;
            }
        }
    }
    guards
}

/// Tries to grow a verified strict pair out of one candidate head set: take
/// the small components hanging off it, run the flow, and if the quota flow
/// falls short shrink to the residual-reachable part (whose quota flow is
/// already certified by the same flow).
fn close_and_verify(inst: &Instance, seed: &VertexSet) -> Option<ReduciblePair> {
    let graph = &inst.graph;
    let w = inst.w();
    let crown = crown_candidates(graph, w, seed);
    if crown.is_empty() {
        return None;
    }
    let components = graph.components_of(&crown);
    let heads = seed.to_vec();
    let q = quota(w);
    let caps = vec![q; heads.len()];
    let (mut net, _, _) = assignment_net(graph, &components, &heads, &caps, |_, _| true);
    let flow = net.max_flow();
    let (head_set, crown_set) = if flow == q * heads.len() as i64 {
        (seed.clone(), crown)
    } else {
        let reach = net.residual_reachable();
        let mut head_set = VertexSet::new(graph.n());
        for (hj, &head) in heads.iter().enumerate() {
            if reach[2 + components.len() + hj] {
                head_set.insert(head);
            }
        }
        let mut crown_set = VertexSet::new(graph.n());
        for (ci, comp) in components.iter().enumerate() {
            if reach[2 + ci] {
                crown_set.union_with(comp);
            }
        }
        if head_set.is_empty() || crown_set.is_empty() {
            return None;
        }
        (head_set, crown_set)
    };
    let pair = verify_reducible_pair(inst, &head_set, &crown_set)?;
    if pair.strict() {
        Some(pair)
    } else {
        None
    }
}

/// Searches for a strictly reducible pair.
///
/// Candidate heads come from the relaxation (vertices at weight one in
/// every optimum) and from vertices guarding small detachable components;
/// each candidate is closed under residual reachability and then verified.
/// On instances with at most 16 vertices a full enumeration of head sets
/// (ascending size, then lexicographic) backs the search, so a returned
/// `None` is conclusive there.
pub fn find_strictly_reducible_pair(inst: &Instance) -> Option<ReduciblePair> {
    let n = inst.n();
    if n == 0 {
        return None;
    }
    let mut candidates: Vec<VertexSet> = Vec::new();
    let mut cache = LpCache::new();
    let persistent = persistent_ones(inst, &VertexSet::full(n), &mut cache);
    let guards = small_component_guards(inst);
    let union = persistent.union(&guards);
    for cand in [persistent, guards, union] {
        if !cand.is_empty() && !candidates.contains(&cand) {
            candidates.push(cand);
        }
    }
    for cand in &candidates {
        if let Some(pair) = close_and_verify(inst, cand) {
            return Some(pair);
        }
    }
    if n <= EXHAUSTIVE_SEARCH_LIMIT {
        let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        for mask in masks {
            let head = VertexSet::from_iter(n, (0..n).filter(|v| mask >> v & 1 == 1));
            let crown = crown_candidates(&inst.graph, inst.w(), &head);
            if crown.is_empty() {
                continue;
            }
            if let Some(pair) = verify_reducible_pair(inst, &head, &crown) {
                if pair.strict() {
                    return Some(pair);
                }
            }
        }
    }
    None
}

/// Shrinks a strictly reducible pair until no proper head subset (with its
/// crown drawn from the current crown) is strictly reducible. Head sizes up
/// to 12 are minimized exhaustively over all proper subsets in ascending
/// size order; larger heads fall back to repeated single-vertex drops.
pub fn minimize_pair(inst: &Instance, pair: &ReduciblePair) -> ReduciblePair {
    assert!(pair.strict(), "only strictly reducible pairs are minimized");
    let mut current = pair.clone();
    while let Some(next) = smaller_strict_pair(inst, &current) {
        current = next;
    }
    current
}

fn subset_crown(inst: &Instance, current: &ReduciblePair, head: &VertexSet) -> VertexSet {
    let mut crown = VertexSet::new(inst.n());
    for comp in &current.components {
        if inst.graph.neighborhood(comp).is_subset_of(head) {
            crown.union_with(comp);
        }
    }
    crown
}

fn smaller_strict_pair(inst: &Instance, current: &ReduciblePair) -> Option<ReduciblePair> {
    let heads = current.head.to_vec();
    let k = heads.len();
    if k <= 1 {
        return None;
    }
    let try_head = |head: &VertexSet| -> Option<ReduciblePair> {
        let crown = subset_crown(inst, current, head);
        if crown.is_empty() {
            return None;
        }
        verify_reducible_pair(inst, head, &crown).filter(ReduciblePair::strict)
    };
    if k <= MINIMIZE_EXHAUSTIVE_LIMIT {
        let mut masks: Vec<u32> = (1..(1u32 << k) - 1).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        for mask in masks {
            let head = VertexSet::from_iter(
                inst.n(),
                heads
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v),
            );
            if let Some(pair) = try_head(&head) {
                return Some(pair);
            }
        }
    } else {
        for drop in 0..k {
            let head = VertexSet::from_iter(
                inst.n(),
                heads
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, &v)| v),
            );
            if let Some(pair) = try_head(&head) {
                return Some(pair);
            }
        }
    }
    None
}

/// Whether no proper head subset of `pair` forms a strictly reducible pair
/// with a crown drawn from `pair`'s crown. Exhaustive, so exponential in the
/// head size; intended for tests and small certified instances.
pub fn is_minimal(inst: &Instance, pair: &ReduciblePair) -> bool {
    let heads = pair.head.to_vec();
    let k = heads.len();
    for mask in 1..(1u32 << k) - 1 {
        let head = VertexSet::from_iter(
            inst.n(),
            heads
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v),
        );
        let crown = subset_crown(inst, pair, &head);
        if crown.is_empty() {
            continue;
        }
        if verify_reducible_pair(inst, &head, &crown).is_some_and(|p| p.strict()) {
            return false;
        }
    }
    true
}

/// Maximum flow when `favored` is allowed quota `2W` while every other head
/// keeps `2W - 1`. On a minimal strictly reducible pair this reaches
/// `|A|(2W-1) + 1` for every choice of `favored`.
pub fn favored_head_flow(inst: &Instance, pair: &ReduciblePair, favored: Vertex) -> i64 {
    assert!(pair.head.contains(favored), "favored vertex is not a head");
    let heads = pair.head.to_vec();
    let q = quota(inst.w());
    let caps: Vec<i64> = heads
        .iter()
        .map(|&h| if h == favored { q + 1 } else { q })
        .collect();
    let (mut net, _, _) =
        assignment_net(&inst.graph, &pair.components, &heads, &caps, |_, _| true);
    net.max_flow()
}

fn map_set(set: &VertexSet, map: &[Vertex], n: usize) -> VertexSet {
    VertexSet::from_iter(n, set.iter().map(|v| map[v]))
}

fn map_pair(pair: &ReduciblePair, map: &[Vertex], n: usize) -> ReduciblePair {
    let mut assignment = Assignment::default();
    for ((ci, head), amount) in pair.assignment.iter() {
        assignment.set(ci, map[head], amount);
    }
    ReduciblePair {
        head: map_set(&pair.head, map, n),
        crown: map_set(&pair.crown, map, n),
        components: pair.components.iter().map(|c| map_set(c, map, n)).collect(),
        assignment,
        strict_witness: pair.strict_witness.map(|v| map[v]),
    }
}

/// Finds pair after pair, each minimal strictly reducible in the graph with
/// all earlier heads removed, until none is left. Earlier crowns stay in the
/// graph but turn into isolated small components, so the pairs come out
/// pairwise disjoint (asserted).
pub fn reducible_sequence(inst: &Instance) -> Vec<ReduciblePair> {
    let n = inst.n();
    let mut removed = VertexSet::new(n);
    let mut taken = VertexSet::new(n);
    let mut out: Vec<ReduciblePair> = Vec::new();
    loop {
        let alive = removed.complement();
        let (sub, map) = inst.induced(&alive);
        let Some(found) = find_strictly_reducible_pair(&sub) else {
            return out;
        };
        let minimal = minimize_pair(&sub, &found);
        let pair = map_pair(&minimal, &map, n);
        let footprint = pair.head.union(&pair.crown);
        assert!(
            footprint.is_disjoint(&taken),
            "reducible pairs in a sequence must be disjoint"
        );
        taken.union_with(&footprint);
        removed.union_with(&pair.head);
        out.push(pair);
    }
}

/// Instance left over after deleting a verified pair, with the budget
/// reduced by the head size. A negative budget means the original instance
/// has no solution within its budget.
#[derive(Clone, Debug)]
pub struct CrownReduction {
    pub instance: Instance,
    /// Residual vertex id to original vertex id.
    pub map: Vec<Vertex>,
    pub budget: i64,
}

/// Deletes `pair`'s head and crown and charges the head to the budget. The
/// pair must verify in `inst` (asserted).
pub fn crown_reduce(inst: &Instance, k: usize, pair: &ReduciblePair) -> CrownReduction {
    assert!(
        verify_reducible_pair(inst, &pair.head, &pair.crown).is_some(),
        "crown reduction needs a verified reducible pair"
    );
    let keep = pair.head.union(&pair.crown).complement();
    let (instance, map) = inst.induced(&keep);
    CrownReduction {
        instance,
        map,
        budget: k as i64 - pair.head.len() as i64,
    }
}

/// Result of exhaustively applying the high-degree rule.
#[derive(Clone, Debug)]
pub struct DegreeReduction {
    /// Vertices forced into every solution, in original ids.
    pub forced: VertexSet,
    pub residual: Instance,
    /// Residual vertex id to original vertex id.
    pub map: Vec<Vertex>,
    /// Remaining budget; negative means no solution of size `k` exists.
    pub budget: i64,
}

/// While some remaining vertex has more than `budget + W` remaining
/// neighbors, takes the one of maximum degree (smallest id on ties) into the
/// solution and decrements the budget; stops early once the budget goes
/// negative, which certifies a no-instance.
pub fn degree_reduce(inst: &Instance, k: usize) -> DegreeReduction {
    let n = inst.n();
    let graph = &inst.graph;
    let w = inst.w() as i64;
    let mut alive = VertexSet::full(n);
    let mut forced = VertexSet::new(n);
    let mut budget = k as i64;
    loop {
        let mut pick: Option<(usize, Vertex)> = None;
        for v in alive.iter() {
            let deg = graph.neighbors(v).iter().filter(|&&u| alive.contains(u)).count();
            if (deg as i64) > budget + w && pick.is_none_or(|(best, _)| deg > best) {
                pick = Some((deg, v));
            }
        }
        let Some((_, v)) = pick else { break };
        forced.insert(v);
        alive.remove(v);
        budget -= 1;
        if budget < 0 {
            break;
        }
    }
    let (residual, map) = inst.induced(&alive);
    DegreeReduction {
        forced,
        residual,
        map,
        budget,
    }
}

/// Number of vertices living in oversized components, the quantity the
/// kernel bound speaks about.
pub fn kernel_count(inst: &Instance) -> usize {
    inst.graph
        .components()
        .iter()
        .filter(|c| c.len() > inst.w())
        .map(|c| c.len())
        .sum()
}

/// Whether the reduced instance is within the kernel bound `kW(k+W) + k`.
pub fn kernel_size_check(inst: &Instance, k: usize) -> bool {
    let w = inst.w();
    kernel_count(inst) <= k * w * (k + w) + k
}
