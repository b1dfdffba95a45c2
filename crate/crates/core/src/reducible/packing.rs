//! Packings extracted from reducible pairs.
//!
//! The assignment of a pair is first trimmed so every head receives exactly
//! its quota, then viewed as a weighted bipartite graph between crown
//! components and heads. Canceling cycles (shift the minimum cycle weight
//! around the cycle with alternating signs) turns it into a forest without
//! touching any head total or component supply. Rooting each tree at a head
//! and handing every component to its parent head yields one part per head:
//! the root keeps its full quota, and every other head loses only what its
//! parent component holds back for its own parent, at most `W - 1` units.

use super::{assignment_net, extract_assignment, quota, Assignment, ReduciblePair};
use crate::graph::{Vertex, VertexSet};
use crate::separator::{max_packing_brute, verify_packing, Instance, Packing};
use std::collections::BTreeMap;
use thiserror::Error;

type Edges = BTreeMap<(usize, usize), u64>;

/// Why `packing_after_deletion` rejected its inputs or gave up.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AfterDeletionError {
    #[error("the pair is not strictly reducible")]
    NotStrict,
    #[error("the deleted set leaves the pair")]
    NotInPair,
    #[error("the deleted set is larger than the head")]
    TooLarge,
    #[error("the deleted set misses the crown")]
    NoCrownDeletion,
    #[error("no packing of the required size was found")]
    TargetMissed,
}

/// Finds one cycle in the bipartite weight graph, as the list of edge keys
/// around it, or None if it is a forest. Components occupy node ids
/// `0..nc`, heads `nc..nc + nh`.
fn find_cycle(edges: &Edges, nc: usize, nh: usize) -> Option<Vec<(usize, usize)>> {
    let nodes = nc + nh;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for &(ci, hj) in edges.keys() {
        adj[ci].push(nc + hj);
        adj[nc + hj].push(ci);
    }
    let mut state = vec![0u8; nodes];
    for start in 0..nodes {
        if state[start] != 0 {
            continue;
        }
        // Iterative DFS keeping the current path on an explicit stack.
        let mut stack: Vec<(usize, usize, usize)> = vec![(start, usize::MAX, 0)];
        state[start] = 1;
        while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
            if *idx == adj[u].len() {
                state[u] = 2;
                stack.pop();
                continue;
            }
            let v = adj[u][*idx];
            *idx += 1;
            if v == parent {
                continue;
            }
            if state[v] == 1 {
                // Back edge: the cycle runs from v up the stack to u.
                let pos = stack
                    .iter()
                    .position(|&(node, _, _)| node == v)
                    .expect("open vertices sit on the stack");
                let mut cycle = Vec::new();
                for pair in stack[pos..].windows(2) {
                    cycle.push(edge_key(pair[0].0, pair[1].0, nc));
                }
                cycle.push(edge_key(u, v, nc));
                return Some(cycle);
            }
            if state[v] == 0 {
                state[v] = 1;
                stack.push((v, u, 0));
            }
        }
    }
    None
}

fn edge_key(x: usize, y: usize, nc: usize) -> (usize, usize) {
    if x < nc {
        (x, y - nc)
    } else {
        (y, x - nc)
    }
}

/// Cancels cycles until the weight graph is a forest. The canceled edge is
/// the minimum-weight edge of the found cycle (ties to the smallest
/// (component, head) key); alternating the shift around the even cycle
/// keeps every head total and component supply unchanged.
fn cancel_cycles(edges: &mut Edges, nc: usize, nh: usize) {
    while let Some(cycle) = find_cycle(edges, nc, nh) {
        let (pos, key) = cycle
            .iter()
            .enumerate()
            .min_by_key(|&(_, k)| (edges[k], *k))
            .map(|(i, k)| (i, *k))
            .expect("cycles are nonempty");
        let shift = edges[&key];
        for (i, k) in cycle.iter().enumerate() {
            let w = edges.get_mut(k).expect("cycle edges exist");
            if (i + cycle.len() - pos) % 2 == 0 {
                *w -= shift;
            } else {
                *w += shift;
            }
        }
        edges.retain(|_, w| *w > 0);
    }
}

/// Turns a forest of assignment weights into one part per head: each tree is
/// rooted at `forced_root` if it holds it, otherwise at its smallest head,
/// and every component joins its parent head's part. `drop_comp` is left
/// out of the part it would join (its tree must then be rooted so that its
/// parent is the forced root).
fn forest_parts(
    components: &[VertexSet],
    heads: &[Vertex],
    edges: &Edges,
    forced_root: Option<usize>,
    drop_comp: Option<usize>,
    n: usize,
) -> Vec<VertexSet> {
    let nc = components.len();
    let nh = heads.len();
    let nodes = nc + nh;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for &(ci, hj) in edges.keys() {
        adj[ci].push(nc + hj);
        adj[nc + hj].push(ci);
    }
    let mut parts: Vec<VertexSet> = heads
        .iter()
        .map(|&h| VertexSet::from_iter(n, [h]))
        .collect();
    let mut seen = vec![false; nodes];
    // The forced root claims its tree first; every other tree is rooted at
    // its smallest head.
    let order = forced_root.into_iter().chain(0..nh);
    for root in order {
        if seen[nc + root] {
            continue;
        }
        let mut queue = std::collections::VecDeque::new();
        seen[nc + root] = true;
        queue.push_back((nc + root, usize::MAX));
        while let Some((u, parent)) = queue.pop_front() {
            for &v in &adj[u] {
                if v != parent && !seen[v] {
                    seen[v] = true;
                    if v < nc {
                        // A component joins its parent head's part.
                        let hj = u - nc;
                        if drop_comp != Some(v) {
                            parts[hj].union_with(&components[v]);
                        } else {
                            assert!(
                                Some(hj) == forced_root,
                                "a dropped component must hang off the forced root"
                            );
                        }
                    }
                    queue.push_back((v, u));
                }
            }
        }
    }
    for hj in 0..nh {
        assert!(seen[nc + hj], "every head is fed, so every head is in a tree");
    }
    parts
}

fn edges_from_assignment(assignment: &Assignment, heads: &[Vertex]) -> Edges {
    let mut edges = Edges::new();
    for ((ci, head), amount) in assignment.iter() {
        let hj = heads
            .iter()
            .position(|&h| h == head)
            .expect("assignment heads belong to the pair");
        edges.insert((ci, hj), amount);
    }
    edges
}

/// Trims each head's incoming weight down to exactly the quota, removing
/// excess from its components in descending component order.
fn normalize_loads(edges: &mut Edges, nh: usize, q: u64) {
    for hj in 0..nh {
        let mut load: u64 = edges
            .iter()
            .filter(|&(&(_, h), _)| h == hj)
            .map(|(_, &w)| w)
            .sum();
        assert!(load >= q, "verified pairs feed every head its quota");
        let keys: Vec<(usize, usize)> = edges
            .keys()
            .filter(|&&(_, h)| h == hj)
            .copied()
            .rev()
            .collect();
        for key in keys {
            if load == q {
                break;
            }
            let w = edges.get_mut(&key).expect("key was just listed");
            let cut = (*w).min(load - q);
            *w -= cut;
            load -= cut;
        }
        edges.retain(|_, w| *w > 0);
    }
}

/// Builds a packing of size exactly `|A|` inside the pair's footprint, one
/// head per part. Panics if the construction breaks its own invariants,
/// which cannot happen on a verified pair.
pub fn packing_from_pair(inst: &Instance, pair: &ReduciblePair) -> Packing {
    let heads = pair.head.to_vec();
    let mut edges = edges_from_assignment(&pair.assignment, &heads);
    let q = quota(inst.w()) as u64;
    normalize_loads(&mut edges, heads.len(), q);
    cancel_cycles(&mut edges, pair.components.len(), heads.len());
    let parts = forest_parts(&pair.components, &heads, &edges, None, None, inst.n());
    let packing = Packing { parts };
    let footprint = pair.head.union(&pair.crown);
    check_packing(inst, &packing, &footprint, pair.head.len(), Some(&pair.head));
    packing
}

fn check_packing(
    inst: &Instance,
    packing: &Packing,
    footprint: &VertexSet,
    want: usize,
    head: Option<&VertexSet>,
) {
    assert_eq!(packing.size(), want, "part count is off");
    for part in &packing.parts {
        assert!(part.is_subset_of(footprint), "part leaves the pair");
        if let Some(head) = head {
            assert_eq!(part.intersection(head).len(), 1, "part misses its head");
        }
    }
    verify_packing(inst, packing).expect("constructed parts are a packing");
}

/// Packing parts that dodge `avoid`, if at least `target` of them do.
fn survivors(parts: &[VertexSet], avoid: &VertexSet, target: usize) -> Option<Vec<VertexSet>> {
    let alive: Vec<VertexSet> = parts
        .iter()
        .filter(|p| p.is_disjoint(avoid))
        .cloned()
        .collect();
    (alive.len() >= target).then_some(alive)
}

/// Builds a packing of size at least `|A| - |S| + 1` in the pair's footprint
/// minus `s`.
///
/// The base packing is tried first; if too many parts are hit, the
/// construction is repeated with the component of a deleted crown vertex
/// forced out of every part: either rerooted at an adjacent head, rebuilt
/// with that component pinned to one head via a widened or raised quota, or
/// rebuilt without the component altogether. Each variant is gated on its
/// flow reaching the value that certifies the part sizes. A brute-force
/// search backs the construction on small footprints.
pub fn packing_after_deletion(
    inst: &Instance,
    pair: &ReduciblePair,
    s: &VertexSet,
) -> Result<Packing, AfterDeletionError> {
    if !pair.strict() {
        return Err(AfterDeletionError::NotStrict);
    }
    let footprint = pair.head.union(&pair.crown);
    if !s.is_subset_of(&footprint) {
        return Err(AfterDeletionError::NotInPair);
    }
    if s.len() > pair.head.len() {
        return Err(AfterDeletionError::TooLarge);
    }
    let in_crown = s.intersection(&pair.crown);
    if in_crown.is_empty() {
        return Err(AfterDeletionError::NoCrownDeletion);
    }
    let graph = &inst.graph;
    let n = inst.n();
    let w = inst.w();
    let q = quota(w);
    let heads = pair.head.to_vec();
    let nh = heads.len();
    let target = nh - s.len() + 1;
    let finish = |parts: Vec<VertexSet>| -> Option<Packing> {
        let alive = survivors(&parts, s, target)?;
        let packing = Packing { parts: alive };
        let room = footprint.difference(s);
        check_packing(inst, &packing, &room, packing.size(), None);
        Some(packing)
    };

    let mut base = edges_from_assignment(&pair.assignment, &heads);
    normalize_loads(&mut base, nh, q as u64);
    cancel_cycles(&mut base, pair.components.len(), nh);
    let parts = forest_parts(&pair.components, &heads, &base, None, None, n);
    if let Some(packing) = finish(parts) {
        return Ok(packing);
    }

    for victim in in_crown.iter() {
        let ci = pair
            .components
            .iter()
            .position(|c| c.contains(victim))
            .expect("crown vertices live in crown components");
        let comp = &pair.components[ci];
        let crown_size = comp.len() as i64;
        for &anchor in &heads {
            if !graph.neighborhood(comp).contains(anchor) {
                continue;
            }
            let hj = heads.iter().position(|&h| h == anchor).expect("anchor is a head");

            // Reroot the already-canceled forest at the anchor and leave the
            // victim's component out of the anchor's part.
            if base.contains_key(&(ci, hj)) {
                let parts = forest_parts(&pair.components, &heads, &base, Some(hj), Some(ci), n);
                if parts[hj].len() > w {
                    if let Some(packing) = finish(parts) {
                        return Ok(packing);
                    }
                }
            }

            // Pin the component to the anchor and raise the anchor's quota
            // by one; dropping the component then still leaves the anchor
            // at least q other units.
            let caps: Vec<i64> = (0..nh).map(|j| if j == hj { q + 1 } else { q }).collect();
            let pin = |c: usize, h: usize| c != ci || h == hj;
            let (mut net, mid, _) = assignment_net(graph, &pair.components, &heads, &caps, pin);
            if net.max_flow() == q * nh as i64 + 1 {
                let fresh = extract_assignment(&net, &mid, &heads);
                let mut edges = edges_from_assignment(&fresh, &heads);
                cancel_cycles(&mut edges, pair.components.len(), nh);
                let drop = edges.contains_key(&(ci, hj)).then_some(ci);
                let parts = forest_parts(&pair.components, &heads, &edges, Some(hj), drop, n);
                if let Some(packing) = finish(parts) {
                    return Ok(packing);
                }
            }

            // Same pin, but the anchor absorbs the whole component on top of
            // its quota.
            let caps: Vec<i64> = (0..nh)
                .map(|j| if j == hj { q + crown_size } else { q })
                .collect();
            let (mut net, mid, _) = assignment_net(graph, &pair.components, &heads, &caps, pin);
            if net.max_flow() == q * nh as i64 + crown_size {
                let fresh = extract_assignment(&net, &mid, &heads);
                let mut edges = edges_from_assignment(&fresh, &heads);
                cancel_cycles(&mut edges, pair.components.len(), nh);
                let drop = edges.contains_key(&(ci, hj)).then_some(ci);
                let parts = forest_parts(&pair.components, &heads, &edges, Some(hj), drop, n);
                if let Some(packing) = finish(parts) {
                    return Ok(packing);
                }
            }
        }

        // Rebuild without the component at all.
        let keep = |c: usize, _: usize| c != ci;
        let caps = vec![q; nh];
        let (mut net, mid, _) = assignment_net(graph, &pair.components, &heads, &caps, keep);
        if net.max_flow() == q * nh as i64 {
            let fresh = extract_assignment(&net, &mid, &heads);
            let mut edges = edges_from_assignment(&fresh, &heads);
            cancel_cycles(&mut edges, pair.components.len(), nh);
            let parts = forest_parts(&pair.components, &heads, &edges, None, None, n);
            if let Some(packing) = finish(parts) {
                return Ok(packing);
            }
        }
    }

    let room = footprint.difference(s);
    if room.len() <= 14 {
        let (sub, map) = inst.induced(&room);
        if let Ok(found) = max_packing_brute(&sub, None) {
            if found.size() >= target {
                let parts = found
                    .parts
                    .iter()
                    .map(|p| VertexSet::from_iter(n, p.iter().map(|v| map[v])))
                    .collect();
                let packing = Packing { parts };
                check_packing(inst, &packing, &room, packing.size(), None);
                return Ok(packing);
            }
        }
    }
    Err(AfterDeletionError::TargetMissed)
}

#[cfg(test)]
mod tests {
    use super::super::{find_strictly_reducible_pair, minimize_pair, verify_reducible_pair};
    use super::*;
    use crate::graph::Graph;
    use proptest::prelude::*;

    fn instance(n: usize, edges: &[(usize, usize)], w: usize) -> Instance {
        Instance::new(Graph::from_edges(n, edges.iter().copied()), w).unwrap()
    }

    fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_iter(n, vs.iter().copied())
    }

    fn pair_of(inst: &Instance, a: &[usize], b: &[usize]) -> ReduciblePair {
        verify_reducible_pair(inst, &set(inst.n(), a), &set(inst.n(), b))
            .expect("test pair verifies")
    }

    #[test]
    fn star_packs_its_center_with_one_leaf() {
        let inst = instance(3, &[(0, 1), (0, 2)], 1);
        let pair = pair_of(&inst, &[0], &[1, 2]);
        let packing = packing_from_pair(&inst, &pair);
        assert_eq!(packing.size(), 1);
        assert!(packing.parts[0].contains(0));
        assert_eq!(packing.parts[0].len(), 2);
    }

    #[test]
    fn double_star_packs_each_center_separately() {
        let inst = instance(6, &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)], 1);
        let pair = pair_of(&inst, &[0, 1], &[2, 3, 4, 5]);
        let packing = packing_from_pair(&inst, &pair);
        assert_eq!(packing.size(), 2);
        assert_eq!(packing.parts[0], set(6, &[0, 2]));
        assert_eq!(packing.parts[1], set(6, &[1, 4]));
    }

    #[test]
    fn component_joins_its_part_whole() {
        let inst = instance(4, &[(0, 1), (1, 2), (0, 3)], 2);
        let pair = pair_of(&inst, &[0], &[1, 2, 3]);
        let packing = packing_from_pair(&inst, &pair);
        assert_eq!(packing.size(), 1);
        assert_eq!(packing.parts[0], set(4, &[0, 1, 2, 3]));
    }

    #[test]
    fn cyclic_assignment_is_canceled_before_packing() {
        let inst = instance(
            8,
            &[(2, 3), (4, 5), (6, 7), (0, 2), (1, 3), (0, 4), (1, 5), (0, 6), (1, 7)],
            2,
        );
        let mut pair = pair_of(&inst, &[0, 1], &[2, 3, 4, 5, 6, 7]);
        let mut cyclic = Assignment::default();
        for ci in 0..3 {
            cyclic.set(ci, 0, 1);
            cyclic.set(ci, 1, 1);
        }
        pair.assignment = cyclic;
        let packing = packing_from_pair(&inst, &pair);
        assert_eq!(packing.size(), 2);
        assert_eq!(packing.parts[0], set(8, &[0, 4, 5, 6, 7]));
        assert_eq!(packing.parts[1], set(8, &[1, 2, 3]));
    }

    #[test]
    fn deleting_a_star_leaf_leaves_the_other() {
        let inst = instance(3, &[(0, 1), (0, 2)], 1);
        let pair = pair_of(&inst, &[0], &[1, 2]);
        let packing = packing_after_deletion(&inst, &pair, &set(3, &[1])).unwrap();
        assert_eq!(packing.parts, vec![set(3, &[0, 2])]);
    }

    #[test]
    fn double_star_survives_a_leaf_deletion() {
        let inst = instance(6, &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)], 1);
        let pair = pair_of(&inst, &[0, 1], &[2, 3, 4, 5]);
        let packing = packing_after_deletion(&inst, &pair, &set(6, &[2])).unwrap();
        assert_eq!(packing.parts, vec![set(6, &[0, 3]), set(6, &[1, 4])]);
    }

    #[test]
    fn wide_star_replaces_the_deleted_leaf() {
        let inst = instance(4, &[(0, 1), (0, 2), (0, 3)], 1);
        let pair = pair_of(&inst, &[0], &[1, 2, 3]);
        let packing = packing_after_deletion(&inst, &pair, &set(4, &[1])).unwrap();
        assert_eq!(packing.parts, vec![set(4, &[0, 2])]);
    }

    #[test]
    fn deletion_preconditions_are_reported() {
        let inst = instance(2, &[(0, 1)], 1);
        let lax = pair_of(&inst, &[0], &[1]);
        assert!(!lax.strict());
        assert_eq!(
            packing_after_deletion(&inst, &lax, &set(2, &[1])),
            Err(AfterDeletionError::NotStrict)
        );

        let inst = instance(4, &[(0, 1), (0, 2)], 1);
        let pair = pair_of(&inst, &[0], &[1, 2]);
        assert!(pair.strict());
        assert_eq!(
            packing_after_deletion(&inst, &pair, &set(4, &[3])),
            Err(AfterDeletionError::NotInPair)
        );
        assert_eq!(
            packing_after_deletion(&inst, &pair, &set(4, &[1, 2])),
            Err(AfterDeletionError::TooLarge)
        );
        assert_eq!(
            packing_after_deletion(&inst, &pair, &set(4, &[0])),
            Err(AfterDeletionError::NoCrownDeletion)
        );
    }

    fn arbitrary_graph(n: usize, edges: Vec<(usize, usize)>) -> Graph {
        Graph::from_edges(
            n,
            edges.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// The construction always hits the packing number of the footprint,
        /// which is exactly the head size.
        #[test]
        fn packing_size_matches_brute_force(
            n in 1usize..9,
            edges in proptest::collection::vec((0usize..9, 0usize..9), 0..18),
            w in 1usize..3,
        ) {
            let inst = Instance::new(arbitrary_graph(n, edges), w).unwrap();
            if let Some(pair) = find_strictly_reducible_pair(&inst) {
                let packing = packing_from_pair(&inst, &pair);
                prop_assert_eq!(packing.size(), pair.head.len());
                let footprint = pair.head.union(&pair.crown);
                let (sub, _) = inst.induced(&footprint);
                let brute = max_packing_brute(&sub, None).unwrap();
                prop_assert_eq!(brute.size(), pair.head.len());
            }
        }

        /// Deleting any admissible set from a minimal pair still leaves
        /// head-size minus deletion-size plus one parts.
        #[test]
        fn deletion_always_leaves_enough_parts(
            n in 1usize..9,
            edges in proptest::collection::vec((0usize..9, 0usize..9), 0..18),
            w in 1usize..3,
            picks in proptest::collection::vec(0usize..64, 1..4),
        ) {
            let inst = Instance::new(arbitrary_graph(n, edges), w).unwrap();
            if let Some(found) = find_strictly_reducible_pair(&inst) {
                let pair = minimize_pair(&inst, &found);
                let footprint = pair.head.union(&pair.crown).to_vec();
                let crown_picks: Vec<Vertex> = picks
                    .iter()
                    .map(|&p| footprint[p % footprint.len()])
                    .collect();
                let mut s = VertexSet::from_iter(inst.n(), crown_picks);
                if s.intersection(&pair.crown).is_empty() {
                    s.insert(pair.crown.first().unwrap());
                }
                while s.len() > pair.head.len() {
                    let v = s.first().unwrap();
                    if s.intersection(&pair.crown) != VertexSet::from_iter(inst.n(), [v]) {
                        s.remove(v);
                    } else {
                        let other = s.iter().find(|&u| u != v).unwrap();
                        s.remove(other);
                    }
                }
                let target = pair.head.len() - s.len() + 1;
                let packing = packing_after_deletion(&inst, &pair, &s).unwrap();
                prop_assert!(packing.size() >= target);
                for part in &packing.parts {
                    prop_assert!(part.is_disjoint(&s));
                }
            }
        }
    }
}
