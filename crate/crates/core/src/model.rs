//! Mixed-integer linear model of the conflict-constrained maximum flow problem
//! and its LP-format text export.
//!
//! Variables are laid out as `f_0..f_{m-1}`, `x_0..x_{m-1}`, `z`. Rows are
//! `cons_<node>` (flow conservation), `link_<arc>` (`f_a <= u_a x_a`) and
//! `conf_<pair>` (`x_a + x_b <= 1`, one per unordered conflict pair).

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::instance::{ActivationPattern, ArcId, FlowAssignment, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Integer,
    Binary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    /// `f64::INFINITY` when unbounded above.
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub var: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<Term>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub sense: Sense,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelIR {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective: Objective,
    arc_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelViolation {
    Row { name: String, lhs: f64, relation: Relation, rhs: f64 },
    Bound { name: String, value: f64, lower: f64, upper: f64 },
    Integrality { name: String, value: f64 },
}

impl fmt::Display for ModelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelViolation::Row { name, lhs, relation, rhs } => {
                write!(f, "row {name}: {lhs} {relation} {rhs} does not hold")
            }
            ModelViolation::Bound { name, value, lower, upper } => {
                write!(f, "variable {name} = {value} outside [{lower}, {upper}]")
            }
            ModelViolation::Integrality { name, value } => write!(f, "variable {name} = {value} is not integral"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("expected {expected} values, got {found}")]
    Dimension { expected: usize, found: usize },
}

impl ModelIR {
    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn flow_var(&self, arc: ArcId) -> usize {
        arc
    }

    pub fn activation_var(&self, arc: ArcId) -> usize {
        self.arc_count + arc
    }

    pub fn total_var(&self) -> usize {
        2 * self.arc_count
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.terms.iter().map(|t| t.coef * values[t.var]).sum()
    }

    /// Checks every row, bound and integrality condition against a full
    /// variable assignment in model order.
    pub fn check(&self, values: &[f64]) -> Result<Vec<ModelViolation>, ModelError> {
        if values.len() != self.variables.len() {
            return Err(ModelError::Dimension { expected: self.variables.len(), found: values.len() });
        }
        let mut out = Vec::new();
        for row in &self.constraints {
            let lhs: f64 = row.terms.iter().map(|t| t.coef * values[t.var]).sum();
            let holds = match row.relation {
                Relation::Le => lhs <= row.rhs,
                Relation::Eq => lhs == row.rhs,
                Relation::Ge => lhs >= row.rhs,
            };
            if !holds {
                out.push(ModelViolation::Row { name: row.name.clone(), lhs, relation: row.relation, rhs: row.rhs });
            }
        }
        for (var, &value) in self.variables.iter().zip(values) {
            let (lower, upper) = match var.kind {
                VarKind::Binary => (var.lower.max(0.0), var.upper.min(1.0)),
                _ => (var.lower, var.upper),
            };
            if value < lower || value > upper {
                out.push(ModelViolation::Bound { name: var.name.clone(), value, lower, upper });
            }
            if var.kind != VarKind::Continuous && value.fract() != 0.0 {
                out.push(ModelViolation::Integrality { name: var.name.clone(), value });
            }
        }
        Ok(out)
    }
}

/// Builds the model: maximize `z` subject to conservation, linking and
/// conflict rows.
pub fn build_model(inst: &Instance) -> ModelIR {
    let m = inst.arc_count();
    let mut variables = Vec::with_capacity(2 * m + 1);
    for a in 0..m {
        variables.push(Variable { name: format!("f_{a}"), kind: VarKind::Integer, lower: 0.0, upper: f64::INFINITY });
    }
    for a in 0..m {
        variables.push(Variable { name: format!("x_{a}"), kind: VarKind::Binary, lower: 0.0, upper: 1.0 });
    }
    let z = 2 * m;
    variables.push(Variable { name: "z".into(), kind: VarKind::Integer, lower: 0.0, upper: f64::INFINITY });

    let n = inst.node_count();
    let mut rows: Vec<Vec<Term>> = vec![Vec::new(); n];
    // inflow minus outflow, arcs in index order
    for (a, arc) in inst.arcs().iter().enumerate() {
        rows[arc.head].push(Term { coef: 1.0, var: a });
        rows[arc.tail].push(Term { coef: -1.0, var: a });
    }
    rows[inst.source()].push(Term { coef: 1.0, var: z });
    rows[inst.sink()].push(Term { coef: -1.0, var: z });

    let mut constraints = Vec::with_capacity(n + m + inst.conflict_count());
    for (v, terms) in rows.into_iter().enumerate() {
        constraints.push(Constraint { name: format!("cons_{v}"), terms, relation: Relation::Eq, rhs: 0.0 });
    }
    for (a, arc) in inst.arcs().iter().enumerate() {
        constraints.push(Constraint {
            name: format!("link_{a}"),
            terms: vec![Term { coef: 1.0, var: a }, Term { coef: -(arc.capacity as f64), var: m + a }],
            relation: Relation::Le,
            rhs: 0.0,
        });
    }
    for (k, pair) in inst.conflicts().iter().enumerate() {
        constraints.push(Constraint {
            name: format!("conf_{k}"),
            terms: vec![Term { coef: 1.0, var: m + pair.first() }, Term { coef: 1.0, var: m + pair.second() }],
            relation: Relation::Le,
            rhs: 1.0,
        });
    }
    ModelIR {
        variables,
        constraints,
        objective: Objective { sense: Sense::Maximize, terms: vec![Term { coef: 1.0, var: z }] },
        arc_count: m,
    }
}

/// Validates `(f, x, z)` against every row, bound and integrality condition.
pub fn validate_against_model(
    model: &ModelIR,
    f: &FlowAssignment,
    x: &ActivationPattern,
    z: u64,
) -> Result<Vec<ModelViolation>, ModelError> {
    let m = model.arc_count;
    if f.flow.len() != m {
        return Err(ModelError::Dimension { expected: m, found: f.flow.len() });
    }
    if x.active.len() != m {
        return Err(ModelError::Dimension { expected: m, found: x.active.len() });
    }
    let mut values = Vec::with_capacity(2 * m + 1);
    values.extend(f.flow.iter().map(|&v| v as f64));
    values.extend(x.active.iter().map(|&b| if b { 1.0 } else { 0.0 }));
    values.push(z as f64);
    model.check(&values)
}

fn write_number(out: &mut String, v: f64) {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        let _ = write!(out, "{}", v as i64);
    } else {
        let _ = write!(out, "{v}");
    }
}

fn write_terms(out: &mut String, model: &ModelIR, terms: &[Term]) {
    if terms.is_empty() {
        // LP rows need at least one term
        let _ = write!(out, " 0 {}", model.variables[model.total_var()].name);
        return;
    }
    for (i, t) in terms.iter().enumerate() {
        let sign = if t.coef < 0.0 { "-" } else { "+" };
        let mag = t.coef.abs();
        if i == 0 {
            if t.coef < 0.0 {
                out.push_str(" -");
            }
        } else {
            let _ = write!(out, " {sign}");
        }
        out.push(' ');
        if mag != 1.0 {
            write_number(out, mag);
            out.push(' ');
        }
        out.push_str(&model.variables[t.var].name);
    }
}

/// Renders the model in LP text format. Output is a pure function of the
/// model.
pub fn export_lp(model: &ModelIR) -> String {
    let m = model.arc_count;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ maximum flow with conflicts: {} variables, {} rows",
        model.variables.len(),
        model.constraints.len()
    );
    out.push_str("MAXIMIZE\n obj:");
    write_terms(&mut out, model, &model.objective.terms);
    out.push_str("\nSUBJECT TO\n");
    for row in &model.constraints {
        let _ = write!(out, " {}:", row.name);
        write_terms(&mut out, model, &row.terms);
        let _ = write!(out, " {} ", row.relation);
        write_number(&mut out, row.rhs);
        out.push('\n');
    }
    out.push_str("BOUNDS\n");
    for var in model.variables.iter().filter(|v| v.kind != VarKind::Binary) {
        let _ = write!(out, " {} >= ", var.name);
        write_number(&mut out, var.lower);
        out.push('\n');
        if var.upper.is_finite() {
            let _ = write!(out, " {} <= ", var.name);
            write_number(&mut out, var.upper);
            out.push('\n');
        }
    }
    out.push_str("GENERAL\n");
    for var in model.variables.iter().filter(|v| v.kind == VarKind::Integer) {
        let _ = writeln!(out, " {}", var.name);
    }
    out.push_str("BINARY\n");
    for var in model.variables.iter().filter(|v| v.kind == VarKind::Binary) {
        let _ = writeln!(out, " {}", var.name);
    }
    debug_assert_eq!(model.variables.len(), 2 * m + 1);
    out.push_str("END\n");
    out
}
