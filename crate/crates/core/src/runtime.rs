//! Plan execution, change counters, admissibility and message decoding.

use std::fmt::Write;

use crate::cnf::Assignment;
use crate::error::{LayoutError, ParseError, PlanError, RunError};
use crate::layout::{Layout, Role, Variant};
use crate::model::{DomainValue, PlanningProblem, State, ValueIndex, VariableId};

/// Sequence of operator ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Plan {
    pub steps: Vec<String>,
}

impl Plan {
    pub fn new(steps: Vec<String>) -> Self {
        Plan { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// One id per line; `#` comments and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut steps = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.contains(char::is_whitespace) {
                return Err(ParseError::new(i + 1, format!("expected one operator id, found `{line}`")));
            }
            steps.push(line.to_string());
        }
        Ok(Plan { steps })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(step);
            out.push('\n');
        }
        out
    }
}

impl<S: Into<String>> FromIterator<S> for Plan {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Plan { steps: iter.into_iter().map(Into::into).collect() }
    }
}

/// States visited by a plan: `states[0]` is init, `states[t]` follows step `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub states: Vec<State>,
    /// Operator index of each step.
    pub steps: Vec<usize>,
}

impl Trace {
    pub fn final_state(&self) -> &State {
        self.states.last().expect("a trace holds at least the initial state")
    }

    /// Values `var` takes, in order, without repeats from steps that leave
    /// it unchanged.
    pub fn value_sequence(&self, var: VariableId) -> Vec<ValueIndex> {
        let mut seq = vec![self.states[0].get(var)];
        for state in &self.states[1..] {
            let v = state.get(var);
            if Some(&v) != seq.last() {
                seq.push(v);
            }
        }
        seq
    }

    /// Initial value of `var` followed by the value entered at each
    /// subscript change.
    pub fn subscript_sequence(&self, problem: &PlanningProblem, var: VariableId) -> Vec<ValueIndex> {
        let subscript = |v: ValueIndex| DomainValue::parse(problem.symbol(var, v)).subscript;
        let values = self.value_sequence(var);
        let mut seq = vec![values[0]];
        for pair in values.windows(2) {
            if subscript(pair[0]) != subscript(pair[1]) {
                seq.push(pair[1]);
            }
        }
        seq
    }

    /// Tab-separated dump: a header with variable names, then one row per state.
    pub fn to_tsv(&self, problem: &PlanningProblem) -> String {
        let mut out = String::from("step\toperator");
        for v in problem.variables() {
            out.push('\t');
            out.push_str(&v.name);
        }
        out.push('\n');
        for (t, state) in self.states.iter().enumerate() {
            let op = match t {
                0 => "-",
                _ => problem.operators()[self.steps[t - 1]].id.as_str(),
            };
            let _ = write!(out, "{t}\t{op}");
            for (i, _) in problem.variables().iter().enumerate() {
                out.push('\t');
                out.push_str(problem.value_of(state, VariableId(i)));
            }
            out.push('\n');
        }
        out
    }
}

pub fn run(problem: &PlanningProblem, plan: &Plan) -> Result<Trace, RunError> {
    let mut state = problem.init().clone();
    let mut states = Vec::with_capacity(plan.len() + 1);
    let mut steps = Vec::with_capacity(plan.len());
    states.push(state.clone());
    for (index, id) in plan.steps.iter().enumerate() {
        let op_index = problem.operator_index(id).ok_or_else(|| RunError::UnknownOperator { index, id: id.clone() })?;
        let op = &problem.operators()[op_index];
        if let Some(b) = op.pre.first_violation(&state) {
            return Err(RunError::InapplicableStep { index, id: id.clone(), binding: problem.format_binding(b) });
        }
        state.set(op.post.var, op.post.value);
        states.push(state.clone());
        steps.push(op_index);
    }
    Ok(Trace { states, steps })
}

pub fn solves(problem: &PlanningProblem, plan: &Plan) -> bool {
    run(problem, plan).is_ok_and(|t| problem.is_goal(t.final_state()))
}

/// Per-variable change counters, indexed by variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangeCounts {
    pub counts: Vec<usize>,
}

impl ChangeCounts {
    pub fn get(&self, var: VariableId) -> usize {
        self.counts[var.0]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Layout of `problem`, checked against the expected variant.
pub fn layout_for(problem: &PlanningProblem, variant: Variant) -> Result<Layout, LayoutError> {
    let layout = Layout::infer(problem)?;
    if layout.variant != variant {
        return Err(LayoutError::VariantMismatch { expected: variant, found: layout.variant });
    }
    Ok(layout)
}

/// Counts value changes, or subscript changes for the middle variables of
/// the K7 construction.
pub fn counts_from_trace(problem: &PlanningProblem, layout: &Layout, trace: &Trace) -> ChangeCounts {
    let counts = (0..problem.num_variables())
        .map(|i| {
            let var = VariableId(i);
            if layout.variant.counts_subscripts() && layout.role(var).is_middle() {
                trace.subscript_sequence(problem, var).len() - 1
            } else {
                trace.value_sequence(var).len() - 1
            }
        })
        .collect();
    ChangeCounts { counts }
}

pub fn change_counts(problem: &PlanningProblem, plan: &Plan, variant: Variant) -> Result<ChangeCounts, PlanError> {
    let layout = layout_for(problem, variant)?;
    let trace = run(problem, plan)?;
    Ok(counts_from_trace(problem, &layout, &trace))
}

/// Counter value an admissible plan gives the variable with this role.
pub fn admissible_count(layout: &Layout, role: Role) -> usize {
    let n = layout.n;
    match role {
        Role::Selector(i) => i,
        Role::Message | Role::Middle { .. } | Role::End => 2 * n,
        Role::Echo(i) => 2 * n - i,
    }
}

/// First variable whose counter differs from the admissible profile.
pub fn first_inadmissible(layout: &Layout, counts: &ChangeCounts) -> Option<VariableId> {
    layout
        .roles()
        .into_iter()
        .enumerate()
        .find(|&(i, role)| counts.counts[i] != admissible_count(layout, role))
        .map(|(i, _)| VariableId(i))
}

pub fn is_admissible(problem: &PlanningProblem, plan: &Plan, variant: Variant) -> Result<bool, PlanError> {
    let layout = layout_for(problem, variant)?;
    let counts = counts_from_trace(problem, &layout, &run(problem, plan)?);
    Ok(first_inadmissible(&layout, &counts).is_none())
}

/// Reads `m_1..m_n` off the message variable's values `x, m_1, x, ..., m_n, x`.
pub fn message_from_trace(problem: &PlanningProblem, layout: &Layout, trace: &Trace) -> Result<Assignment, PlanError> {
    let vs = layout.message();
    let seq: Vec<&str> = trace.value_sequence(vs).into_iter().map(|v| problem.symbol(vs, v)).collect();
    let expected_len = 2 * layout.n + 1;
    let mut bits = Vec::with_capacity(layout.n);
    for (index, &sym) in seq.iter().enumerate() {
        let ok = match (index % 2, sym) {
            _ if index >= expected_len => false,
            (0, "x") => true,
            (1, "0") => {
                bits.push(false);
                true
            }
            (1, "1") => {
                bits.push(true);
                true
            }
            _ => false,
        };
        if !ok {
            return Err(PlanError::NotAdmissible { index });
        }
    }
    if seq.len() < expected_len {
        return Err(PlanError::NotAdmissible { index: seq.len() });
    }
    Ok(Assignment::new(bits))
}

pub fn extract_message(problem: &PlanningProblem, plan: &Plan) -> Result<Assignment, PlanError> {
    let layout = Layout::infer(problem)?;
    message_from_trace(problem, &layout, &run(problem, plan)?)
}
