//! Instance and solution data model, the plain-text file formats, and the
//! feasibility checker.
//!
//! Instance file:
//!
//! ```text
//! p mfpc <n> <m> <w>
//! n s <node-id>
//! n t <node-id>
//! a <tail> <head> <capacity>     (m lines; arc index = order of appearance)
//! c <arc-index-1> <arc-index-2>  (w lines)
//! ```
//!
//! Lines starting with `#` are comments. Solution file: `z <total>` followed by
//! one `f <arc-index> <flow>` line per arc with positive flow.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use thiserror::Error;

pub type NodeId = usize;
pub type ArcId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
    pub capacity: u64,
}

/// Unordered pair of arc indices, stored with `first < second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConflictPair {
    first: ArcId,
    second: ArcId,
}

impl ConflictPair {
    /// Returns `None` when both indices are equal.
    pub fn new(a: ArcId, b: ArcId) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Self { first: a, second: b }),
            std::cmp::Ordering::Greater => Some(Self { first: b, second: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn first(&self) -> ArcId {
        self.first
    }

    pub fn second(&self) -> ArcId {
        self.second
    }

    pub fn arcs(&self) -> [ArcId; 2] {
        [self.first, self.second]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("invalid instance: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("assignment has {found} entries but the instance has {expected} arcs")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub found: usize,
}

/// A maximum-flow-with-conflicts instance. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    node_count: usize,
    source: NodeId,
    sink: NodeId,
    arcs: Vec<Arc>,
    conflicts: Vec<ConflictPair>,
}

impl Instance {
    /// Validates every structural invariant. Conflict pairs keep their given
    /// order; each pair is normalized so that `first < second`.
    pub fn new(
        node_count: usize,
        source: NodeId,
        sink: NodeId,
        arcs: Vec<Arc>,
        conflicts: Vec<(ArcId, ArcId)>,
    ) -> Result<Self, InstanceError> {
        let invalid = |m: String| Err(InstanceError::Invalid(m));
        if node_count == 0 {
            return invalid("node count must be positive".into());
        }
        if source >= node_count || sink >= node_count {
            return invalid(format!("source {source} or sink {sink} outside [0, {node_count})"));
        }
        if source == sink {
            return invalid("source and sink coincide".into());
        }
        let mut seen = HashSet::with_capacity(arcs.len());
        for (idx, arc) in arcs.iter().enumerate() {
            if let Err(msg) = check_arc(arc, node_count) {
                return invalid(format!("arc {idx}: {msg}"));
            }
            if !seen.insert((arc.tail, arc.head)) {
                return invalid(format!("arc {idx}: duplicate arc {} -> {}", arc.tail, arc.head));
            }
        }
        let mut canonical = Vec::with_capacity(conflicts.len());
        for (idx, &(a, b)) in conflicts.iter().enumerate() {
            match check_pair(a, b, arcs.len()) {
                Ok(p) => canonical.push(p),
                Err(msg) => return invalid(format!("conflict {idx}: {msg}")),
            }
        }
        // sort-based duplicate scan; generated instances carry millions of pairs
        let mut order: Vec<u32> = (0..canonical.len() as u32).collect();
        order.sort_unstable_by_key(|&i| (canonical[i as usize], i));
        if let Some(dup) = order.windows(2).find(|w| canonical[w[0] as usize] == canonical[w[1] as usize]) {
            let p = canonical[dup[1] as usize];
            return invalid(format!("conflict {}: duplicate pair {{{}, {}}}", dup[1], p.first, p.second));
        }
        Ok(Self { node_count, source, sink, arcs, conflicts: canonical })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id]
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn conflicts(&self) -> &[ConflictPair] {
        &self.conflicts
    }

    pub fn conflict_count(&self) -> usize {
        self.conflicts.len()
    }

    /// Returns a copy with one more conflict pair appended.
    pub fn with_conflict(&self, a: ArcId, b: ArcId) -> Result<Self, InstanceError> {
        let mut conflicts: Vec<_> = self.conflicts.iter().map(|p| (p.first, p.second)).collect();
        conflicts.push((a, b));
        Self::new(self.node_count, self.source, self.sink, self.arcs.clone(), conflicts)
    }

    /// Arcs that appear in at least one conflict pair, ascending.
    pub fn conflicted_arcs(&self) -> Vec<ArcId> {
        let mut involved = vec![false; self.arcs.len()];
        for pair in &self.conflicts {
            involved[pair.first] = true;
            involved[pair.second] = true;
        }
        (0..self.arcs.len()).filter(|&a| involved[a]).collect()
    }
}

fn check_arc(arc: &Arc, node_count: usize) -> Result<(), String> {
    if arc.tail >= node_count || arc.head >= node_count {
        return Err(format!("endpoint outside [0, {node_count})"));
    }
    if arc.tail == arc.head {
        return Err(format!("self-loop on node {}", arc.tail));
    }
    if arc.capacity == 0 {
        return Err("capacity must be at least 1".into());
    }
    Ok(())
}

fn check_pair(a: ArcId, b: ArcId, arc_count: usize) -> Result<ConflictPair, String> {
    if a >= arc_count || b >= arc_count {
        return Err(format!("arc index outside [0, {arc_count})"));
    }
    ConflictPair::new(a, b).ok_or_else(|| format!("arc {a} conflicts with itself"))
}

/// Per-arc conflict partners in compressed row form.
#[derive(Debug, Clone)]
pub struct ConflictIndex {
    offsets: Vec<usize>,
    partners: Vec<ArcId>,
}

impl ConflictIndex {
    pub fn new(inst: &Instance) -> Self {
        let m = inst.arc_count();
        let mut degree = vec![0usize; m + 1];
        for p in inst.conflicts() {
            degree[p.first] += 1;
            degree[p.second] += 1;
        }
        let mut offsets = vec![0usize; m + 1];
        for a in 0..m {
            offsets[a + 1] = offsets[a] + degree[a];
        }
        let mut cursor = offsets.clone();
        let mut partners = vec![0; offsets[m]];
        for p in inst.conflicts() {
            partners[cursor[p.first]] = p.second;
            cursor[p.first] += 1;
            partners[cursor[p.second]] = p.first;
            cursor[p.second] += 1;
        }
        for a in 0..m {
            partners[offsets[a]..offsets[a + 1]].sort_unstable();
        }
        Self { offsets, partners }
    }

    pub fn partners(&self, arc: ArcId) -> &[ArcId] {
        &self.partners[self.offsets[arc]..self.offsets[arc + 1]]
    }

    pub fn in_conflict(&self, a: ArcId, b: ArcId) -> bool {
        self.partners(a).binary_search(&b).is_ok()
    }
}

/// Integral flow per arc plus the declared s-t value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlowAssignment {
    pub flow: Vec<u64>,
    pub total: u64,
}

impl FlowAssignment {
    pub fn zero(arc_count: usize) -> Self {
        Self { flow: vec![0; arc_count], total: 0 }
    }

    pub fn positive_arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.flow.iter().enumerate().filter(|(_, &f)| f > 0).map(|(a, _)| a)
    }
}

/// Activation flags, one per arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivationPattern {
    pub active: Vec<bool>,
}

impl ActivationPattern {
    /// The canonical pattern: an arc is active iff it carries positive flow.
    pub fn from_flow(sol: &FlowAssignment) -> Self {
        Self { active: sol.flow.iter().map(|&f| f > 0).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    Capacity { arc: ArcId, flow: u64, capacity: u64 },
    Conservation { node: NodeId, inflow: u64, outflow: u64 },
    SourceBalance { net_outflow: i128, total: u64 },
    SinkBalance { net_inflow: i128, total: u64 },
    Conflict { pair: usize, arcs: [ArcId; 2] },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Capacity { arc, flow, capacity } => {
                write!(f, "arc {arc}: flow {flow} exceeds capacity {capacity}")
            }
            Violation::Conservation { node, inflow, outflow } => {
                write!(f, "node {node}: inflow {inflow} != outflow {outflow}")
            }
            Violation::SourceBalance { net_outflow, total } => {
                write!(f, "source: net outflow {net_outflow} != total {total}")
            }
            Violation::SinkBalance { net_inflow, total } => {
                write!(f, "sink: net inflow {net_inflow} != total {total}")
            }
            Violation::Conflict { pair, arcs } => {
                write!(f, "conflict {pair}: arcs {} and {} both carry flow", arcs[0], arcs[1])
            }
        }
    }
}

/// Outcome of [`check_feasible`]: empty means feasible.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn conflict_violations(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| matches!(v, Violation::Conflict { .. }))
    }
}

/// Checks capacities, conservation, the declared total and the conflict
/// pairs, collecting every violation.
pub fn check_feasible(inst: &Instance, sol: &FlowAssignment) -> Result<Verdict, DimensionMismatch> {
    let mut verdict = check_flow_only(inst, sol)?;
    for (idx, pair) in inst.conflicts().iter().enumerate() {
        if sol.flow[pair.first] > 0 && sol.flow[pair.second] > 0 {
            verdict.violations.push(Violation::Conflict { pair: idx, arcs: pair.arcs() });
        }
    }
    Ok(verdict)
}

/// Same as [`check_feasible`] with the conflict pairs ignored.
pub fn check_flow_only(inst: &Instance, sol: &FlowAssignment) -> Result<Verdict, DimensionMismatch> {
    if sol.flow.len() != inst.arc_count() {
        return Err(DimensionMismatch { expected: inst.arc_count(), found: sol.flow.len() });
    }
    let n = inst.node_count();
    let mut inflow = vec![0u128; n];
    let mut outflow = vec![0u128; n];
    let mut violations = Vec::new();
    for (a, (arc, &f)) in inst.arcs().iter().zip(&sol.flow).enumerate() {
        if f > arc.capacity {
            violations.push(Violation::Capacity { arc: a, flow: f, capacity: arc.capacity });
        }
        outflow[arc.tail] += f as u128;
        inflow[arc.head] += f as u128;
    }
    for v in 0..n {
        if v == inst.source() || v == inst.sink() {
            continue;
        }
        if inflow[v] != outflow[v] {
            violations.push(Violation::Conservation {
                node: v,
                inflow: inflow[v] as u64,
                outflow: outflow[v] as u64,
            });
        }
    }
    let (s, t) = (inst.source(), inst.sink());
    let net_out = outflow[s] as i128 - inflow[s] as i128;
    if net_out != sol.total as i128 {
        violations.push(Violation::SourceBalance { net_outflow: net_out, total: sol.total });
    }
    let net_in = inflow[t] as i128 - outflow[t] as i128;
    if net_in != sol.total as i128 {
        violations.push(Violation::SinkBalance { net_inflow: net_in, total: sol.total });
    }
    Ok(Verdict { violations })
}

struct Tokens<'a> {
    line: usize,
    iter: std::str::SplitWhitespace<'a>,
}

impl<'a> Tokens<'a> {
    fn next_int<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, InstanceError> {
        let tok = self.iter.next().ok_or_else(|| InstanceError::Syntax {
            line: self.line,
            message: format!("missing {what}"),
        })?;
        tok.parse().map_err(|_| InstanceError::Syntax {
            line: self.line,
            message: format!("expected integer {what}, found `{tok}`"),
        })
    }

    fn finish(mut self) -> Result<(), InstanceError> {
        match self.iter.next() {
            None => Ok(()),
            Some(tok) => Err(InstanceError::Syntax {
                line: self.line,
                message: format!("unexpected trailing token `{tok}`"),
            }),
        }
    }
}

/// Parses the instance text format. Arc order is preserved.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut source = None;
    let mut sink = None;
    let mut arcs: Vec<Arc> = Vec::new();
    let mut arc_set = HashSet::new();
    let mut conflicts: Vec<(ArcId, ArcId)> = Vec::new();
    let mut pair_set = HashSet::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut words = trimmed.split_whitespace();
        let kind = words.next().unwrap_or_default();
        let semantic = |message: String| InstanceError::Semantic { line, message };
        let syntax = |message: &str| InstanceError::Syntax { line, message: message.to_string() };

        if kind != "p" && header.is_none() {
            return Err(syntax("expected `p mfpc <n> <m> <w>` header first"));
        }
        match kind {
            "p" => {
                if header.is_some() {
                    return Err(syntax("duplicate header"));
                }
                if words.next() != Some("mfpc") {
                    return Err(syntax("header must read `p mfpc <n> <m> <w>`"));
                }
                let mut toks = Tokens { line, iter: words };
                let n: usize = toks.next_int("node count")?;
                let m: usize = toks.next_int("arc count")?;
                let w: usize = toks.next_int("conflict count")?;
                toks.finish()?;
                if n == 0 {
                    return Err(semantic("node count must be positive".into()));
                }
                header = Some((n, m, w));
            }
            "n" => {
                let role = words.next();
                let mut toks = Tokens { line, iter: words };
                let node: usize = toks.next_int("node id")?;
                toks.finish()?;
                let n = header.map(|h| h.0).unwrap_or(0);
                if node >= n {
                    return Err(semantic(format!("node id {node} outside [0, {n})")));
                }
                let slot = match role {
                    Some("s") => &mut source,
                    Some("t") => &mut sink,
                    _ => return Err(syntax("node line must be `n s <id>` or `n t <id>`")),
                };
                if slot.is_some() {
                    return Err(semantic(format!("{} declared twice", role.unwrap_or("?"))));
                }
                *slot = Some(node);
            }
            "a" => {
                let (n, m, _) = header.unwrap_or_default();
                if !conflicts.is_empty() {
                    return Err(syntax("arc lines must precede conflict lines"));
                }
                let mut toks = Tokens { line, iter: words };
                let tail: usize = toks.next_int("tail")?;
                let head: usize = toks.next_int("head")?;
                let capacity: u64 = toks.next_int("capacity")?;
                toks.finish()?;
                if arcs.len() == m {
                    return Err(semantic(format!("more than the declared {m} arcs")));
                }
                let arc = Arc { tail, head, capacity };
                check_arc(&arc, n).map_err(semantic)?;
                if !arc_set.insert((tail, head)) {
                    return Err(semantic(format!("duplicate arc {tail} -> {head}")));
                }
                arcs.push(arc);
            }
            "c" => {
                let (_, m, w) = header.unwrap_or_default();
                let mut toks = Tokens { line, iter: words };
                let a: usize = toks.next_int("arc index")?;
                let b: usize = toks.next_int("arc index")?;
                toks.finish()?;
                if arcs.len() != m {
                    return Err(semantic(format!(
                        "conflict before all {m} arcs were declared ({} so far)",
                        arcs.len()
                    )));
                }
                if conflicts.len() == w {
                    return Err(semantic(format!("more than the declared {w} conflicts")));
                }
                let pair = check_pair(a, b, m).map_err(semantic)?;
                if !pair_set.insert(pair) {
                    return Err(semantic(format!("duplicate conflict pair {{{a}, {b}}}")));
                }
                conflicts.push((a, b));
            }
            other => return Err(syntax(&format!("unknown line type `{other}`"))),
        }
    }

    let end = last_line.max(1);
    let (n, m, w) = header.ok_or(InstanceError::Syntax { line: end, message: "missing header".into() })?;
    let semantic = |message: String| InstanceError::Semantic { line: end, message };
    let source = source.ok_or_else(|| semantic("missing source declaration `n s <id>`".into()))?;
    let sink = sink.ok_or_else(|| semantic("missing sink declaration `n t <id>`".into()))?;
    if source == sink {
        return Err(semantic("source and sink coincide".into()));
    }
    if arcs.len() != m {
        return Err(semantic(format!("declared {m} arcs, found {}", arcs.len())));
    }
    if conflicts.len() != w {
        return Err(semantic(format!("declared {w} conflicts, found {}", conflicts.len())));
    }
    Instance::new(n, source, sink, arcs, conflicts)
}

pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::with_capacity(32 + 16 * (inst.arc_count() + inst.conflict_count()));
    let _ = writeln!(out, "p mfpc {} {} {}", inst.node_count(), inst.arc_count(), inst.conflict_count());
    let _ = writeln!(out, "n s {}", inst.source());
    let _ = writeln!(out, "n t {}", inst.sink());
    for arc in inst.arcs() {
        let _ = writeln!(out, "a {} {} {}", arc.tail, arc.head, arc.capacity);
    }
    for pair in inst.conflicts() {
        let _ = writeln!(out, "c {} {}", pair.first, pair.second);
    }
    out
}

/// Parses a solution file against an instance with `arc_count` arcs.
pub fn parse_solution(text: &str, arc_count: usize) -> Result<FlowAssignment, SolutionError> {
    let mut total = None;
    let mut flow = vec![0u64; arc_count];
    let mut seen = vec![false; arc_count];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let syntax = |message: String| SolutionError::Syntax { line, message };
        let words: Vec<&str> = trimmed.split_whitespace().collect();
        let int = |tok: &str| tok.parse::<u64>().map_err(|_| syntax(format!("expected integer, found `{tok}`")));
        match words.as_slice() {
            ["z", value] => {
                if total.is_some() {
                    return Err(SolutionError::Semantic { line, message: "duplicate `z` line".into() });
                }
                total = Some(int(value)?);
            }
            ["f", arc, value] => {
                let arc = int(arc)? as usize;
                if arc >= arc_count {
                    return Err(SolutionError::Semantic {
                        line,
                        message: format!("arc index {arc} outside [0, {arc_count})"),
                    });
                }
                if std::mem::replace(&mut seen[arc], true) {
                    return Err(SolutionError::Semantic { line, message: format!("arc {arc} listed twice") });
                }
                flow[arc] = int(value)?;
            }
            _ => return Err(syntax(format!("unrecognized line `{trimmed}`"))),
        }
    }
    let total = total.ok_or(SolutionError::Syntax { line: 1, message: "missing `z <total>` line".into() })?;
    Ok(FlowAssignment { flow, total })
}

pub fn serialize_solution(sol: &FlowAssignment) -> String {
    let mut out = format!("z {}\n", sol.total);
    for (a, &f) in sol.flow.iter().enumerate().filter(|(_, &f)| f > 0) {
        let _ = writeln!(out, "f {a} {f}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE7: &str = include_str!("../fixtures/example7.txt");

    fn example7_optimum() -> FlowAssignment {
        let mut flow = vec![0; 12];
        for (a, f) in [(0, 2), (1, 3), (3, 2), (5, 3), (9, 3), (10, 2)] {
            flow[a] = f;
        }
        FlowAssignment { flow, total: 5 }
    }

    #[test]
    fn parses_example7() {
        let inst = parse_instance(EXAMPLE7).unwrap();
        assert_eq!(inst.node_count(), 7);
        assert_eq!(inst.arc_count(), 12);
        assert_eq!(inst.conflict_count(), 7);
        assert_eq!(inst.source(), 0);
        assert_eq!(inst.sink(), 6);
        assert_eq!(inst.arc(5), &Arc { tail: 2, head: 3, capacity: 4 });
        assert_eq!(inst.conflicted_arcs(), vec![1, 2, 3, 5, 6, 7, 8, 11]);
    }

    #[test]
    fn parses_single_arc() {
        let inst = parse_instance("p mfpc 2 1 0\nn s 0\nn t 1\na 0 1 5\n").unwrap();
        assert_eq!(inst.arc_count(), 1);
        assert_eq!(inst.conflict_count(), 0);
        assert_eq!(serialize_instance(&inst), "p mfpc 2 1 0\nn s 0\nn t 1\na 0 1 5\n");
    }

    #[test]
    fn rejects_self_conflict() {
        let err = parse_instance("p mfpc 2 1 1\nn s 0\nn t 1\na 0 1 5\nc 0 0\n").unwrap_err();
        assert!(matches!(err, InstanceError::Semantic { line: 5, .. }), "{err}");
    }

    #[test]
    fn reports_line_numbers() {
        let cases = [
            ("p mfpc 3 2 0\nn s 0\nn t 2\na 0 1 5\na 0 1 4\n", 5),
            ("p mfpc 3 1 0\nn s 0\nn t 2\na 0 0 5\n", 4),
            ("p mfpc 3 1 0\nn s 0\nn t 2\na 0 1 0\n", 4),
            ("p mfpc 3 1 0\nn s 0\nn t 7\n", 3),
            ("p mfpc 3 1 0\nn s 0\nn t 2\na 0 x 1\n", 4),
            ("p mfpc 3 1 1\nn s 0\nn t 2\na 0 1 1\nc 0 4\n", 5),
        ];
        for (text, line) in cases {
            let err = parse_instance(text).unwrap_err();
            let got = match err {
                InstanceError::Syntax { line, .. } | InstanceError::Semantic { line, .. } => line,
                InstanceError::Invalid(_) => 0,
            };
            assert_eq!(got, line, "{text:?} -> {err}");
        }
    }

    #[test]
    fn rejects_count_mismatch_and_duplicate_pairs() {
        assert!(parse_instance("p mfpc 3 2 0\nn s 0\nn t 2\na 0 1 5\n").is_err());
        assert!(parse_instance("p mfpc 3 2 2\nn s 0\nn t 2\na 0 1 5\na 1 2 5\nc 0 1\nc 1 0\n").is_err());
        assert!(parse_instance("p mfpc 3 0 0\nn s 1\nn t 1\n").is_err());
        assert!(parse_instance("a 0 1 5\n").is_err());
    }

    #[test]
    fn example7_round_trips() {
        let inst = parse_instance(EXAMPLE7).unwrap();
        assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn checker_accepts_published_optimum_and_zero_flow() {
        let inst = parse_instance(EXAMPLE7).unwrap();
        assert!(check_feasible(&inst, &example7_optimum()).unwrap().is_ok());
        assert!(check_feasible(&inst, &FlowAssignment::zero(12)).unwrap().is_ok());
    }

    #[test]
    fn checker_reports_conflict_breach() {
        let inst = parse_instance(EXAMPLE7).unwrap();
        // s->b->c->e->t carries 1 through the red pair {b->c, c->e}
        let mut flow = vec![0; 12];
        for a in [1, 5, 8, 11] {
            flow[a] = 1;
        }
        let verdict = check_feasible(&inst, &FlowAssignment { flow, total: 1 }).unwrap();
        let conflicts: Vec<_> = verdict.conflict_violations().cloned().collect();
        assert!(conflicts.contains(&Violation::Conflict { pair: 0, arcs: [5, 8] }));
        // the green pair {s->b, e->t} is breached as well
        assert!(conflicts.contains(&Violation::Conflict { pair: 5, arcs: [1, 11] }));
        assert_eq!(verdict.violations.len(), 2);
    }

    #[test]
    fn checker_collects_every_violation() {
        let inst = parse_instance(EXAMPLE7).unwrap();
        let mut flow = vec![0; 12];
        flow[0] = 4; // over capacity 3, and node a receives 4 with nothing leaving
        let verdict = check_feasible(&inst, &FlowAssignment { flow, total: 1 }).unwrap();
        assert_eq!(
            verdict.violations,
            vec![
                Violation::Capacity { arc: 0, flow: 4, capacity: 3 },
                Violation::Conservation { node: 1, inflow: 4, outflow: 0 },
                Violation::SourceBalance { net_outflow: 4, total: 1 },
                Violation::SinkBalance { net_inflow: 0, total: 1 },
            ]
        );
    }

    #[test]
    fn checker_rejects_length_mismatch() {
        let inst = parse_instance(EXAMPLE7).unwrap();
        let err = check_feasible(&inst, &FlowAssignment::zero(3)).unwrap_err();
        assert_eq!(err, DimensionMismatch { expected: 12, found: 3 });
    }

    #[test]
    fn solution_file_round_trip() {
        let sol = example7_optimum();
        let text = serialize_solution(&sol);
        assert!(text.starts_with("z 5\nf 0 2\n"));
        assert_eq!(parse_solution(&text, 12).unwrap(), sol);
        assert_eq!(parse_solution(include_str!("../fixtures/example7.sol"), 12).unwrap(), sol);
        assert!(parse_solution("f 0 1\n", 12).is_err());
        assert!(parse_solution("z 1\nf 12 1\n", 12).is_err());
    }

    #[test]
    fn conflict_index_is_symmetric() {
        let inst = parse_instance(EXAMPLE7).unwrap();
        let idx = ConflictIndex::new(&inst);
        assert_eq!(idx.partners(1), &[7, 11]);
        assert_eq!(idx.partners(3), &[2, 6]);
        assert!(idx.in_conflict(8, 5));
        assert!(!idx.in_conflict(0, 1));
        assert!(idx.partners(0).is_empty());
    }
}
