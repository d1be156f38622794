//! Linear programs in inequality form over non-negative variables.
//!
//! # Tableau text format
//!
//! [`LinearProgram::to_tableau_text`] writes a line-oriented dump:
//!
//! ```text
//! # evshift lp v1
//! vars <n> rows <m>
//! names <name_0> ... <name_{n-1}>
//! min <c_0> ... <c_{n-1}>
//! <row_name> <a_0> ... <a_{n-1}> <op> <rhs>
//! ```
//!
//! One line per constraint, `<op>` is one of `<=`, `>=`, `=`. Every variable
//! is implicitly bounded below by zero. Numbers use Rust's shortest
//! round-trip formatting.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// A sparse row `Σ coeff·x[var] <sense> rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// `minimize objective·x` subject to `constraints`, `x >= 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    pub var_names: Vec<String>,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn add_var(&mut self, name: impl Into<String>, cost: f64) -> usize {
        self.var_names.push(name.into());
        self.objective.push(cost);
        self.var_names.len() - 1
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, f64)>,
        sense: Sense,
        rhs: f64,
    ) {
        self.constraints.push(Constraint {
            name: name.into(),
            terms,
            sense,
            rhs,
        });
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest row violation or negative variable at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self
            .constraints
            .iter()
            .map(|c| c.violation(x))
            .fold(0.0, f64::max);
        x.iter().map(|v| (-v).max(0.0)).fold(rows, f64::max)
    }

    pub fn to_tableau_text(&self) -> String {
        let n = self.num_vars();
        let mut out = String::new();
        out.push_str("# evshift lp v1\n");
        let _ = writeln!(out, "vars {n} rows {}", self.constraints.len());
        let _ = writeln!(out, "names {}", self.var_names.join(" "));
        out.push_str("min");
        for c in &self.objective {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
        for row in &self.constraints {
            let mut dense = vec![0.0; n];
            for &(j, a) in &row.terms {
                dense[j] += a;
            }
            out.push_str(&row.name);
            for a in dense {
                let _ = write!(out, " {a}");
            }
            let _ = writeln!(out, " {} {}", row.sense.symbol(), row.rhs);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value at `x` (meaningful only when optimal).
    pub objective: f64,
    pub x: Vec<f64>,
    pub pivots: usize,
}
