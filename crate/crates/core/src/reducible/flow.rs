//! Small integral max-flow solver used by the assignment verifier.
//!
//! The networks here have a handful of nodes (one per head plus one per
//! component plus source and sink), so a plain BFS augmenting-path loop is
//! more than fast enough and keeps every intermediate flow integral.

/// One directed arc together with its residual twin at `id ^ 1`.
#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    cap: i64,
    flow: i64,
}

/// Directed flow network with integer capacities.
///
/// Arcs are stored in insertion order and BFS scans them in that order, so
/// augmenting paths (and therefore the final flow decomposition) are
/// deterministic for a fixed construction sequence.
#[derive(Clone, Debug)]
pub struct FlowNet {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
    source: usize,
    sink: usize,
}

impl FlowNet {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        assert!(source < nodes && sink < nodes && source != sink);
        FlowNet {
            adj: vec![Vec::new(); nodes],
            arcs: Vec::new(),
            source,
            sink,
        }
    }

    /// Adds a forward arc and its zero-capacity residual twin, returning the
    /// forward arc's id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> usize {
        assert!(cap >= 0);
        let id = self.arcs.len();
        self.adj[from].push(id);
        self.arcs.push(Arc { to, cap, flow: 0 });
        self.adj[to].push(id + 1);
        self.arcs.push(Arc {
            to: from,
            cap: 0,
            flow: 0,
        });
        id
    }

    /// Raises or lowers the capacity of an existing forward arc. The new
    /// capacity must not undercut flow already routed through it.
    pub fn set_cap(&mut self, id: usize, cap: i64) {
        assert!(id % 2 == 0, "capacities live on forward arcs");
        assert!(cap >= self.arcs[id].flow);
        self.arcs[id].cap = cap;
    }

    pub fn flow_on(&self, id: usize) -> i64 {
        self.arcs[id].flow
    }

    fn residual(&self, id: usize) -> i64 {
        self.arcs[id].cap - self.arcs[id].flow
    }

    /// Finds one augmenting path by BFS and pushes its bottleneck through,
    /// returning the amount pushed (0 when the sink is unreachable).
    pub fn augment_once(&mut self) -> i64 {
        let n = self.adj.len();
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[self.source] = true;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(self.source);
        while let Some(u) = queue.pop_front() {
            if u == self.sink {
                break;
            }
            for &id in &self.adj[u] {
                let v = self.arcs[id].to;
                if !seen[v] && self.residual(id) > 0 {
                    seen[v] = true;
                    pred[v] = Some(id);
                    queue.push_back(v);
                }
            }
        }
        if !seen[self.sink] {
            return 0;
        }
        let mut bottleneck = i64::MAX;
        let mut v = self.sink;
        while v != self.source {
            let id = pred[v].unwrap();
            bottleneck = bottleneck.min(self.residual(id));
            v = self.arcs[id ^ 1].to;
        }
        let mut v = self.sink;
        while v != self.source {
            let id = pred[v].unwrap();
            self.arcs[id].flow += bottleneck;
            self.arcs[id ^ 1].flow -= bottleneck;
            v = self.arcs[id ^ 1].to;
        }
        bottleneck
    }

    /// Pushes flow until the sink becomes unreachable and returns the total
    /// value routed (on top of any flow already present).
    pub fn max_flow(&mut self) -> i64 {
        let mut total = 0;
        loop {
            let pushed = self.augment_once();
            if pushed == 0 {
                return total;
            }
            total += pushed;
        }
    }

    /// Nodes reachable from the source in the residual network.
    pub fn residual_reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[self.source] = true;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(self.source);
        while let Some(u) = queue.pop_front() {
            for &id in &self.adj[u] {
                let v = self.arcs[id].to;
                if !seen[v] && self.residual(id) > 0 {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc_carries_its_capacity() {
        let mut net = FlowNet::new(2, 0, 1);
        let a = net.add_arc(0, 1, 5);
        assert_eq!(net.max_flow(), 5);
        assert_eq!(net.flow_on(a), 5);
        assert_eq!(net.max_flow(), 0);
    }

    #[test]
    fn bottleneck_limits_a_path() {
        let mut net = FlowNet::new(4, 0, 3);
        net.add_arc(0, 1, 7);
        net.add_arc(1, 2, 3);
        net.add_arc(2, 3, 9);
        assert_eq!(net.max_flow(), 3);
    }

    #[test]
    fn parallel_paths_add_up() {
        let mut net = FlowNet::new(4, 0, 3);
        net.add_arc(0, 1, 2);
        net.add_arc(1, 3, 2);
        net.add_arc(0, 2, 3);
        net.add_arc(2, 3, 1);
        assert_eq!(net.max_flow(), 3);
    }

    #[test]
    fn augmentation_reroutes_through_residual_arcs() {
        // The classic cross network: greedy 0-1-2-3 must be partially undone.
        let mut net = FlowNet::new(4, 0, 3);
        net.add_arc(0, 1, 1);
        net.add_arc(1, 2, 1);
        net.add_arc(2, 3, 1);
        net.add_arc(0, 2, 1);
        net.add_arc(1, 3, 1);
        assert_eq!(net.max_flow(), 2);
    }

    #[test]
    fn raising_a_cap_allows_one_more_unit() {
        let mut net = FlowNet::new(3, 0, 2);
        let first = net.add_arc(0, 1, 1);
        net.add_arc(1, 2, 5);
        assert_eq!(net.max_flow(), 1);
        net.set_cap(first, 2);
        assert_eq!(net.augment_once(), 1);
        assert_eq!(net.augment_once(), 0);
        assert_eq!(net.flow_on(first), 2);
    }

    #[test]
    fn residual_reach_stops_at_saturated_arcs() {
        let mut net = FlowNet::new(4, 0, 3);
        net.add_arc(0, 1, 1);
        net.add_arc(1, 3, 1);
        net.add_arc(0, 2, 2);
        net.add_arc(2, 3, 5);
        assert_eq!(net.max_flow(), 3);
        let reach = net.residual_reachable();
        assert!(reach[0]);
        // Both source arcs are saturated, so nothing else is reachable.
        assert!(!reach[1] && !reach[2] && !reach[3]);
    }
}
