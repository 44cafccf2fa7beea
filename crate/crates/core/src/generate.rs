//! Benchmark instance generator on the (n, p, d, I) grid.
//!
//! Construction, for a given seed (ChaCha8, `seed_from_u64`):
//! 1. source = 0, sink = n - 1; a simple source-sink path with a uniform
//!    number of intermediate nodes in `0..=min(n - 2, m - 1)` is embedded;
//! 2. the remaining arcs are drawn uniformly without replacement from the
//!    ordered node pairs that are neither self-loops nor path arcs;
//! 3. capacities are uniform over the regime interval, both ends inclusive;
//! 4. conflict pairs are drawn uniformly without replacement from the
//!    unordered arc pairs that do not join two path arcs;
//! 5. arc order is shuffled and conflict pairs are listed in ascending order.

use std::ops::RangeInclusive;

use rand::seq::{index, SliceRandom};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instance::{Arc, ArcId, Instance, InstanceError};

pub const GRID_NODES: [usize; 5] = [40, 50, 60, 70, 80];
pub const GRID_ARC_DENSITY: [f64; 4] = [0.3, 0.4, 0.5, 0.6];
pub const GRID_CONFLICT_DENSITY: [f64; 4] = [0.3, 0.4, 0.5, 0.6];
pub const GRID_REGIMES: [CapacityRegime; 2] = [CapacityRegime::Narrow, CapacityRegime::Wide];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CapacityRegime {
    /// `I = 1`: capacities in [10, 15].
    Narrow,
    /// `I = 2`: capacities in [15, 20].
    Wide,
}

impl CapacityRegime {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(Self::Narrow),
            2 => Some(Self::Wide),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Self::Narrow => 1,
            Self::Wide => 2,
        }
    }

    pub fn capacities(self) -> RangeInclusive<u64> {
        match self {
            Self::Narrow => 10..=15,
            Self::Wide => 15..=20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub nodes: usize,
    pub arc_density: f64,
    pub conflict_density: f64,
    pub regime: CapacityRegime,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("need at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("density {0} outside [0, 1]")]
    Density(f64),
    #[error("{arcs} arcs requested but only {max} ordered node pairs exist")]
    TooManyArcs { arcs: usize, max: usize },
    #[error("arc density yields no arcs")]
    NoArcs,
    #[error("{conflicts} conflict pairs requested but only {eligible} pairs are eligible")]
    TooManyConflicts { conflicts: usize, eligible: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

impl GenParams {
    /// `round(p * n * (n - 1))`.
    pub fn arc_count(&self) -> usize {
        (self.arc_density * (self.nodes * self.nodes.saturating_sub(1)) as f64).round() as usize
    }

    /// `round(d * m * (m - 1) / 2)`.
    pub fn conflict_count(&self) -> usize {
        let m = self.arc_count();
        (self.conflict_density * (m * m.saturating_sub(1)) as f64 / 2.0).round() as usize
    }

    /// Names of parameters outside the standard grid values.
    pub fn off_grid(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !GRID_NODES.contains(&self.nodes) {
            out.push("nodes");
        }
        if !GRID_ARC_DENSITY.iter().any(|&p| (p - self.arc_density).abs() < 1e-12) {
            out.push("arc-density");
        }
        if !GRID_CONFLICT_DENSITY.iter().any(|&d| (d - self.conflict_density).abs() < 1e-12) {
            out.push("conflict-density");
        }
        out
    }

    /// `mfpc_n<N>_p<P>_d<D>_I<I>.txt`
    pub fn file_name(&self) -> String {
        format!(
            "mfpc_n{}_p{}_d{}_I{}.txt",
            self.nodes,
            self.arc_density,
            self.conflict_density,
            self.regime.index()
        )
    }
}

/// Ordered pair index `k` in `[0, n(n-1))` to `(tail, head)`, skipping self-loops.
fn ordered_pair(k: usize, n: usize) -> (usize, usize) {
    let tail = k / (n - 1);
    let r = k % (n - 1);
    (tail, if r < tail { r } else { r + 1 })
}

fn ordered_index(tail: usize, head: usize, n: usize) -> usize {
    tail * (n - 1) + if head < tail { head } else { head - 1 }
}

/// Unordered pair index `k` to `(i, j)` with `i < j`, where pairs are listed
/// by `j` first: `k = j(j-1)/2 + i`.
fn unordered_pair(k: usize) -> (usize, usize) {
    let mut j = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0) as usize;
    while j * (j - 1) / 2 > k {
        j -= 1;
    }
    while (j + 1) * j / 2 <= k {
        j += 1;
    }
    (k - j * (j - 1) / 2, j)
}

pub fn generate(params: &GenParams) -> Result<Instance, GenError> {
    Ok(generate_with_path(params)?.0)
}

/// Like [`generate`], also returning the arc indices of the embedded path in
/// source-to-sink order.
pub fn generate_with_path(params: &GenParams) -> Result<(Instance, Vec<ArcId>), GenError> {
    let n = params.nodes;
    if n < 2 {
        return Err(GenError::TooFewNodes(n));
    }
    for density in [params.arc_density, params.conflict_density] {
        if !(0.0..=1.0).contains(&density) {
            return Err(GenError::Density(density));
        }
    }
    let m = params.arc_count();
    let pairs = n * (n - 1);
    if m > pairs {
        return Err(GenError::TooManyArcs { arcs: m, max: pairs });
    }
    if m == 0 {
        return Err(GenError::NoArcs);
    }
    let w = params.conflict_count();

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (source, sink) = (0, n - 1);

    let hops = rng.gen_range(0..=(n - 2).min(m - 1));
    let mut inner: Vec<usize> = (1..n - 1).collect();
    inner.shuffle(&mut rng);
    let mut nodes = vec![source];
    nodes.extend_from_slice(&inner[..hops]);
    nodes.push(sink);
    let path_len = nodes.len() - 1;

    let protected = path_len * (path_len - 1) / 2;
    let eligible = m * (m - 1) / 2 - protected;
    if w > eligible {
        return Err(GenError::TooManyConflicts { conflicts: w, eligible });
    }

    let mut endpoints: Vec<(usize, usize)> = nodes.windows(2).map(|e| (e[0], e[1])).collect();
    let mut taken: Vec<usize> = endpoints.iter().map(|&(u, v)| ordered_index(u, v, n)).collect();
    taken.sort_unstable();
    for k in index::sample(&mut rng, pairs - path_len, m - path_len).into_iter() {
        // k-th ordered pair not already on the path
        let mut idx = k;
        for &t in &taken {
            if t <= idx {
                idx += 1;
            } else {
                break;
            }
        }
        endpoints.push(ordered_pair(idx, n));
    }
    let range = params.regime.capacities();
    let arcs_in_draw_order: Vec<Arc> = endpoints
        .iter()
        .map(|&(tail, head)| Arc { tail, head, capacity: rng.gen_range(range.clone()) })
        .collect();

    // path arcs occupy draw positions 0..path_len, so the protected pairs are
    // exactly the first `protected` unordered indices
    let drawn = if w == 0 { Vec::new() } else { index::sample(&mut rng, eligible, w).into_vec() };

    let mut position: Vec<ArcId> = (0..m).collect();
    position.shuffle(&mut rng);
    let mut arcs = vec![arcs_in_draw_order[0]; m];
    for (draw, &pos) in position.iter().enumerate() {
        arcs[pos] = arcs_in_draw_order[draw];
    }
    let mut conflicts: Vec<(ArcId, ArcId)> = drawn
        .into_iter()
        .map(|k| {
            let (i, j) = unordered_pair(k + protected);
            let (a, b) = (position[i], position[j]);
            (a.min(b), a.max(b))
        })
        .collect();
    conflicts.sort_unstable();

    let path = (0..path_len).map(|draw| position[draw]).collect();
    let inst = Instance::new(n, source, sink, arcs, conflicts)?;
    Ok((inst, path))
}

/// All 160 grid parameter combinations, ordered by n, p, d, I, with one
/// seed per combination drawn from a ChaCha8 stream on `master_seed`.
pub fn grid_params(master_seed: u64) -> Vec<GenParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    let mut out = Vec::with_capacity(160);
    for &nodes in &GRID_NODES {
        for &arc_density in &GRID_ARC_DENSITY {
            for &conflict_density in &GRID_CONFLICT_DENSITY {
                for &regime in &GRID_REGIMES {
                    out.push(GenParams { nodes, arc_density, conflict_density, regime, seed: rng.next_u64() });
                }
            }
        }
    }
    out
}

/// Lazily generates the full grid. Large grid points carry millions of
/// conflict pairs, so instances are produced one at a time.
pub fn grid(master_seed: u64) -> impl Iterator<Item = Result<(GenParams, Instance), GenError>> {
    grid_params(master_seed).into_iter().map(|p| generate(&p).map(|inst| (p, inst)))
}
