//! Classical maximum flow (conflicts ignored) by blocking flows on a layered
//! residual network, plus the matching minimum cut.
//!
//! Residual arcs are numbered `2a` (forward along arc `a`) and `2a + 1`
//! (backward). Adjacency lists are sorted by that number, so every search
//! visits residual arcs in ascending arc-index order and results are
//! reproducible.

use std::collections::VecDeque;

use crate::instance::{ArcId, FlowAssignment, Instance, NodeId};

pub type ResidualId = usize;

#[derive(Debug, Clone)]
pub struct ResidualNetwork<'a> {
    inst: &'a Instance,
    enabled: Vec<bool>,
    flow: Vec<u64>,
    offsets: Vec<usize>,
    adjacency: Vec<ResidualId>,
}

impl<'a> ResidualNetwork<'a> {
    /// `disabled[a] == true` removes arc `a` from the network.
    pub fn new(inst: &'a Instance, disabled: &[bool]) -> Self {
        debug_assert_eq!(disabled.len(), inst.arc_count());
        let n = inst.node_count();
        let mut degree = vec![0usize; n + 1];
        for arc in inst.arcs() {
            degree[arc.tail] += 1;
            degree[arc.head] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut cursor = offsets.clone();
        let mut adjacency = vec![0; offsets[n]];
        // ascending residual id per node falls out of the arc-order scan
        for (a, arc) in inst.arcs().iter().enumerate() {
            adjacency[cursor[arc.tail]] = 2 * a;
            cursor[arc.tail] += 1;
            adjacency[cursor[arc.head]] = 2 * a + 1;
            cursor[arc.head] += 1;
        }
        Self {
            inst,
            enabled: disabled.iter().map(|&d| !d).collect(),
            flow: vec![0; inst.arc_count()],
            offsets,
            adjacency,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn adjacency(&self, v: NodeId) -> &[ResidualId] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn arc_of(r: ResidualId) -> ArcId {
        r / 2
    }

    pub fn is_forward(r: ResidualId) -> bool {
        r.is_multiple_of(2)
    }

    pub fn tail(&self, r: ResidualId) -> NodeId {
        let arc = self.inst.arc(r / 2);
        if Self::is_forward(r) {
            arc.tail
        } else {
            arc.head
        }
    }

    pub fn head(&self, r: ResidualId) -> NodeId {
        let arc = self.inst.arc(r / 2);
        if Self::is_forward(r) {
            arc.head
        } else {
            arc.tail
        }
    }

    pub fn residual(&self, r: ResidualId) -> u64 {
        let a = r / 2;
        if Self::is_forward(r) {
            if self.enabled[a] {
                self.inst.arc(a).capacity - self.flow[a]
            } else {
                0
            }
        } else {
            self.flow[a]
        }
    }

    pub fn push(&mut self, r: ResidualId, delta: u64) {
        debug_assert!(delta <= self.residual(r));
        let a = r / 2;
        if Self::is_forward(r) {
            self.flow[a] += delta;
        } else {
            self.flow[a] -= delta;
        }
    }

    pub fn flow(&self) -> &[u64] {
        &self.flow
    }

    /// Net outflow of the source.
    pub fn value(&self) -> u64 {
        let s = self.inst.source();
        let mut net: i128 = 0;
        for (arc, &f) in self.inst.arcs().iter().zip(&self.flow) {
            if arc.tail == s {
                net += f as i128;
            }
            if arc.head == s {
                net -= f as i128;
            }
        }
        net.max(0) as u64
    }

    pub fn assignment(&self) -> FlowAssignment {
        FlowAssignment { flow: self.flow.clone(), total: self.value() }
    }

    /// Runs blocking-flow phases until no augmenting path remains.
    pub fn saturate(&mut self) -> u64 {
        let n = self.inst.node_count();
        let (s, t) = (self.inst.source(), self.inst.sink());
        let mut level = vec![usize::MAX; n];
        let mut current = vec![0usize; n];
        let mut path: Vec<ResidualId> = Vec::with_capacity(n);
        loop {
            if !self.build_levels(&mut level) {
                break;
            }
            current.copy_from_slice(&self.offsets[..n]);
            let mut v = s;
            loop {
                if v == t {
                    let bottleneck = path.iter().map(|&r| self.residual(r)).min().unwrap_or(0);
                    // rewind to the tail of the first saturated arc
                    let mut cut_at = path.len();
                    for (i, &r) in path.iter().enumerate() {
                        self.push(r, bottleneck);
                        if cut_at == path.len() && self.residual(r) == 0 {
                            cut_at = i;
                        }
                    }
                    path.truncate(cut_at);
                    v = path.last().map_or(s, |&r| self.head(r));
                    continue;
                }
                let end = self.offsets[v + 1];
                let mut advanced = false;
                while current[v] < end {
                    let r = self.adjacency[current[v]];
                    let w = self.head(r);
                    if self.residual(r) > 0 && level[w] == level[v] + 1 {
                        path.push(r);
                        v = w;
                        advanced = true;
                        break;
                    }
                    current[v] += 1;
                }
                if advanced {
                    continue;
                }
                level[v] = usize::MAX;
                match path.pop() {
                    Some(r) => {
                        v = self.tail(r);
                        current[v] += 1;
                    }
                    None => break,
                }
            }
        }
        self.value()
    }

    fn build_levels(&self, level: &mut [usize]) -> bool {
        let (s, t) = (self.inst.source(), self.inst.sink());
        level.iter_mut().for_each(|l| *l = usize::MAX);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &r in self.adjacency(v) {
                let w = self.head(r);
                if level[w] == usize::MAX && self.residual(r) > 0 {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        level[t] != usize::MAX
    }

    /// Nodes reachable from the source through positive residual capacity.
    pub fn source_side(&self) -> Vec<bool> {
        let mut seen = vec![false; self.inst.node_count()];
        let s = self.inst.source();
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &r in self.adjacency(v) {
                let w = self.head(r);
                if !seen[w] && self.residual(r) > 0 {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Enabled arcs leaving the source side. After [`saturate`](Self::saturate)
    /// these form a minimum cut.
    pub fn cut_arcs(&self) -> Vec<ArcId> {
        let side = self.source_side();
        self.inst
            .arcs()
            .iter()
            .enumerate()
            .filter(|&(a, arc)| self.enabled[a] && side[arc.tail] && !side[arc.head])
            .map(|(a, _)| a)
            .collect()
    }
}

pub(crate) fn mask(arc_count: usize, disabled: &[ArcId]) -> Vec<bool> {
    let mut m = vec![false; arc_count];
    for &a in disabled {
        m[a] = true;
    }
    m
}

/// Maximum s-t flow over the arcs not in `disabled`, ignoring conflicts.
pub fn max_flow(inst: &Instance, disabled: &[ArcId]) -> FlowAssignment {
    max_flow_masked(inst, &mask(inst.arc_count(), disabled))
}

pub fn max_flow_masked(inst: &Instance, disabled: &[bool]) -> FlowAssignment {
    let mut net = ResidualNetwork::new(inst, disabled);
    net.saturate();
    net.assignment()
}

/// A minimum s-t cut over the arcs not in `disabled`, ascending arc order.
pub fn min_cut(inst: &Instance, disabled: &[ArcId]) -> Vec<ArcId> {
    let mut net = ResidualNetwork::new(inst, &mask(inst.arc_count(), disabled));
    net.saturate();
    net.cut_arcs()
}

pub fn cut_capacity(inst: &Instance, cut: &[ArcId]) -> u64 {
    cut.iter().map(|&a| inst.arc(a).capacity).sum()
}
