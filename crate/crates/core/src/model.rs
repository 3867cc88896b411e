//! Planning model: variables with finite symbolic domains, states, unary
//! operators, and the structural views (causal graph, domain transition graphs)
//! used to recognise chain problems.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::ModelError;
use crate::graph::{Edge, LabelledGraph};

/// Position of a variable in the chain-ordered variable list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VariableId(pub usize);

impl VariableId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Index of a value inside its variable's domain.
pub type ValueIndex = u8;

/// Base letter of a value symbol such as `a_x` or `g_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    B,
    C,
    G,
    /// Bare `0`, `1` or `x`.
    Plain,
    /// Any symbol outside the reduction alphabet.
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subscript {
    Zero,
    One,
    X,
    None,
}

impl Subscript {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Subscript::One
        } else {
            Subscript::Zero
        }
    }

    pub fn bit(self) -> Option<bool> {
        match self {
            Subscript::Zero => Some(false),
            Subscript::One => Some(true),
            _ => None,
        }
    }
}

/// Parsed view of a value symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DomainValue {
    pub letter: Letter,
    pub subscript: Subscript,
}

impl DomainValue {
    /// Total parse: unknown symbols map to `(Other, None)`.
    pub fn parse(symbol: &str) -> Self {
        let subscript_of = |s: &str| match s {
            "0" => Some(Subscript::Zero),
            "1" => Some(Subscript::One),
            "x" => Some(Subscript::X),
            _ => None,
        };
        if let Some(subscript) = subscript_of(symbol) {
            return DomainValue { letter: Letter::Plain, subscript };
        }
        if let Some((head, tail)) = symbol.split_once('_') {
            let letter = match head {
                "a" => Some(Letter::A),
                "b" => Some(Letter::B),
                "c" => Some(Letter::C),
                "g" => Some(Letter::G),
                _ => None,
            };
            if let (Some(letter), Some(subscript)) = (letter, subscript_of(tail)) {
                return DomainValue { letter, subscript };
            }
        }
        DomainValue { letter: Letter::Other, subscript: Subscript::None }
    }
}

/// Symbols must survive the line-oriented problem format.
fn check_symbol(symbol: &str) -> Result<(), ModelError> {
    let bad =
        symbol.is_empty() || symbol.chars().any(|c| c.is_whitespace() || matches!(c, '=' | ',' | '|' | '#' | '/'));
    if bad {
        Err(ModelError::InvalidSymbol(symbol.to_string()))
    } else {
        Ok(())
    }
}

fn check_operator_id(id: &str) -> Result<(), ModelError> {
    if id.is_empty() || id.chars().any(|c| c.is_whitespace() || matches!(c, '|' | '#' | ',')) {
        Err(ModelError::InvalidSymbol(id.to_string()))
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub domain: Vec<String>,
}

impl Variable {
    pub fn value_index(&self, symbol: &str) -> Option<ValueIndex> {
        self.domain.iter().position(|s| s == symbol).map(|i| i as ValueIndex)
    }

    pub fn symbol(&self, value: ValueIndex) -> &str {
        &self.domain[value as usize]
    }
}

/// A single `variable = value` assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binding {
    pub var: VariableId,
    pub value: ValueIndex,
}

/// Assignment to a subset of the variables, sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PartialState {
    bindings: Vec<Binding>,
}

impl PartialState {
    pub fn new(mut bindings: Vec<Binding>) -> Result<Self, ModelError> {
        bindings.sort();
        for pair in bindings.windows(2) {
            if pair[0].var == pair[1].var {
                return Err(ModelError::DuplicateBinding(pair[0].var.0));
            }
        }
        Ok(PartialState { bindings })
    }

    pub fn empty() -> Self {
        PartialState::default()
    }

    pub fn bindings(&self) -> &[Binding] {
        &self.bindings
    }

    pub fn get(&self, var: VariableId) -> Option<ValueIndex> {
        self.bindings.iter().find(|b| b.var == var).map(|b| b.value)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// First binding the state disagrees with, if any.
    pub fn first_violation(&self, state: &State) -> Option<Binding> {
        self.bindings.iter().copied().find(|b| state.get(b.var) != b.value)
    }

    pub fn holds_in(&self, state: &State) -> bool {
        self.first_violation(state).is_none()
    }
}

/// Total assignment, stored as value indices in chain order. Equality and
/// hashing are over that vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    values: Vec<ValueIndex>,
}

impl State {
    pub fn from_indices(values: Vec<ValueIndex>) -> Self {
        State { values }
    }

    pub fn get(&self, var: VariableId) -> ValueIndex {
        self.values[var.0]
    }

    pub fn set(&mut self, var: VariableId, value: ValueIndex) {
        self.values[var.0] = value;
    }

    pub fn values(&self) -> &[ValueIndex] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    pub id: String,
    pub pre: PartialState,
    pub post: Binding,
}

impl Operator {
    pub fn is_applicable(&self, state: &State) -> bool {
        self.pre.holds_in(state)
    }

    /// The variable this operator writes.
    pub fn target(&self) -> VariableId {
        self.post.var
    }
}

#[derive(Clone, Debug)]
pub struct PlanningProblem {
    variables: Vec<Variable>,
    init: State,
    goal: PartialState,
    operators: Vec<Operator>,
    by_name: FxHashMap<String, VariableId>,
    by_id: FxHashMap<String, usize>,
    by_target: Vec<Vec<usize>>,
}

impl PartialEq for PlanningProblem {
    fn eq(&self, other: &Self) -> bool {
        self.variables == other.variables
            && self.init == other.init
            && self.goal == other.goal
            && self.operators == other.operators
    }
}

impl PlanningProblem {
    /// Checks domains, init totality, goal and operator well-formedness.
    /// Chain shape is not enforced here; see [`validate_chain`].
    pub fn new(
        variables: Vec<Variable>,
        init: State,
        goal: PartialState,
        operators: Vec<Operator>,
    ) -> Result<Self, ModelError> {
        let mut by_name = FxHashMap::default();
        for (i, var) in variables.iter().enumerate() {
            check_symbol(&var.name)?;
            if var.domain.is_empty() {
                return Err(ModelError::EmptyDomain(var.name.clone()));
            }
            if var.domain.len() > ValueIndex::MAX as usize {
                return Err(ModelError::DomainTooLarge(var.name.clone()));
            }
            let mut seen = BTreeSet::new();
            for sym in &var.domain {
                check_symbol(sym)?;
                if !seen.insert(sym.as_str()) {
                    return Err(ModelError::DuplicateValue { var: var.name.clone(), value: sym.clone() });
                }
            }
            if by_name.insert(var.name.clone(), VariableId(i)).is_some() {
                return Err(ModelError::DuplicateVariable(var.name.clone()));
            }
        }

        let in_domain = |b: &Binding| -> Result<(), ModelError> {
            let var = variables.get(b.var.0).ok_or(ModelError::VariableOutOfRange(b.var.0))?;
            if (b.value as usize) < var.domain.len() {
                Ok(())
            } else {
                Err(ModelError::ValueOutOfRange { var: var.name.clone(), value: b.value })
            }
        };

        if init.len() != variables.len() {
            return Err(ModelError::InitArity { expected: variables.len(), found: init.len() });
        }
        for (i, &value) in init.values().iter().enumerate() {
            in_domain(&Binding { var: VariableId(i), value })?;
        }
        goal.bindings().iter().try_for_each(in_domain)?;

        let mut by_id = FxHashMap::default();
        let mut by_target = vec![Vec::new(); variables.len()];
        for (i, op) in operators.iter().enumerate() {
            check_operator_id(&op.id)?;
            op.pre.bindings().iter().try_for_each(in_domain)?;
            in_domain(&op.post)?;
            if by_id.insert(op.id.clone(), i).is_some() {
                return Err(ModelError::DuplicateOperator(op.id.clone()));
            }
            by_target[op.post.var.0].push(i);
        }

        Ok(PlanningProblem { variables, init, goal, operators, by_name, by_id, by_target })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, var: VariableId) -> &Variable {
        &self.variables[var.0]
    }

    pub fn variable_id(&self, name: &str) -> Option<VariableId> {
        self.by_name.get(name).copied()
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn init(&self) -> &State {
        &self.init
    }

    pub fn goal(&self) -> &PartialState {
        &self.goal
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    pub fn operator(&self, id: &str) -> Option<&Operator> {
        self.by_id.get(id).map(|&i| &self.operators[i])
    }

    pub fn operator_index(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    /// Operators whose post-condition writes `var`, in declaration order.
    pub fn operators_for(&self, var: VariableId) -> impl Iterator<Item = &Operator> {
        self.by_target[var.0].iter().map(move |&i| &self.operators[i])
    }

    pub fn symbol(&self, var: VariableId, value: ValueIndex) -> &str {
        self.variables[var.0].symbol(value)
    }

    pub fn value_of(&self, state: &State, var: VariableId) -> &str {
        self.symbol(var, state.get(var))
    }

    /// Looks up `name=symbol`.
    pub fn binding(&self, name: &str, symbol: &str) -> Result<Binding, ModelError> {
        let var = self.variable_id(name).ok_or_else(|| ModelError::UnknownVariable(name.to_string()))?;
        let value = self.variables[var.0]
            .value_index(symbol)
            .ok_or_else(|| ModelError::UnknownValue { var: name.to_string(), value: symbol.to_string() })?;
        Ok(Binding { var, value })
    }

    pub fn format_binding(&self, b: Binding) -> String {
        format!("{}={}", self.variables[b.var.0].name, self.symbol(b.var, b.value))
    }

    /// Builds a state from one symbol per variable.
    pub fn state_from_symbols<S: AsRef<str>>(&self, symbols: &[S]) -> Result<State, ModelError> {
        if symbols.len() != self.variables.len() {
            return Err(ModelError::InitArity { expected: self.variables.len(), found: symbols.len() });
        }
        let values = self
            .variables
            .iter()
            .zip(symbols)
            .map(|(var, sym)| {
                var.value_index(sym.as_ref())
                    .ok_or_else(|| ModelError::UnknownValue { var: var.name.clone(), value: sym.as_ref().to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(State::from_indices(values))
    }

    /// Rejects states that do not belong to this problem.
    pub fn check_state(&self, state: &State) -> Result<(), ModelError> {
        if state.len() != self.variables.len() {
            return Err(ModelError::InitArity { expected: self.variables.len(), found: state.len() });
        }
        for (var, &value) in self.variables.iter().zip(state.values()) {
            if value as usize >= var.domain.len() {
                return Err(ModelError::ValueOutOfRange { var: var.name.clone(), value });
            }
        }
        Ok(())
    }

    pub fn is_applicable(&self, state: &State, op: &Operator) -> Result<bool, ModelError> {
        self.check_state(state)?;
        Ok(op.is_applicable(state))
    }

    /// Applies `op`, failing with the first violated pre-condition binding.
    pub fn apply(&self, state: &State, op: &Operator) -> Result<State, ModelError> {
        self.check_state(state)?;
        if let Some(b) = op.pre.first_violation(state) {
            return Err(ModelError::Inapplicable { operator: op.id.clone(), binding: self.format_binding(b) });
        }
        let mut next = state.clone();
        next.set(op.post.var, op.post.value);
        Ok(next)
    }

    pub fn is_goal(&self, state: &State) -> bool {
        self.goal.holds_in(state)
    }

    pub fn max_domain_size(&self) -> usize {
        self.variables.iter().map(|v| v.domain.len()).max().unwrap_or(0)
    }

    /// Product of domain sizes, saturating.
    pub fn state_space_size(&self) -> u128 {
        self.variables.iter().fold(1u128, |acc, v| acc.saturating_mul(v.domain.len() as u128))
    }
}

impl fmt::Display for PlanningProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::write_problem(self))
    }
}

/// Edge `(u, v)` iff `u != v` and some operator mentions `u` in pre or post
/// and writes `v`.
pub fn causal_graph(problem: &PlanningProblem) -> LabelledGraph {
    let mut edges = BTreeSet::new();
    for op in problem.operators() {
        let v = op.post.var;
        for b in op.pre.bindings() {
            if b.var != v {
                edges.insert((b.var, v));
            }
        }
    }
    LabelledGraph {
        nodes: problem.variables().iter().map(|v| v.name.clone()).collect(),
        edges: edges.into_iter().map(|(u, v)| Edge { from: u.0, to: v.0, labels: BTreeSet::new() }).collect(),
    }
}

/// True iff the causal graph is exactly the path `v0 -> v1 -> ... -> v_{n-1}`
/// in storage order and every operator is unary over `{v, predecessor(v)}`.
pub fn validate_chain(problem: &PlanningProblem) -> bool {
    let unary = problem.operators().iter().all(|op| {
        let v = op.post.var.0;
        op.pre.bindings().iter().all(|b| b.var.0 == v || (v > 0 && b.var.0 == v - 1))
    });
    if !unary {
        return false;
    }
    let graph = causal_graph(problem);
    let n = problem.num_variables();
    if graph.edges.len() != n.saturating_sub(1) {
        return false;
    }
    graph.edges.iter().enumerate().all(|(i, e)| e.from == i && e.to == i + 1)
}

/// Domain transition graph of `var`. Nodes are the domain symbols; one edge per
/// distinct `(pre-value on var, post value)` pair, labelled with the
/// predecessor values that enable it. An edge any of whose operators has no
/// pre-condition on the predecessor is unlabelled. Operators without a
/// pre-condition on `var` contribute an edge from every other value.
pub fn dtg(problem: &PlanningProblem, var: VariableId) -> LabelledGraph {
    let variable = problem.variable(var);
    let predecessor = var.0.checked_sub(1).map(VariableId);
    // (from, to) -> Some(labels) or None when unconditional
    let mut edges: BTreeMap<(usize, usize), Option<BTreeSet<String>>> = BTreeMap::new();
    for op in problem.operators_for(var) {
        let to = op.post.value as usize;
        let froms: Vec<usize> = match op.pre.get(var) {
            Some(v) => vec![v as usize],
            None => (0..variable.domain.len()).filter(|&x| x != to).collect(),
        };
        let label = predecessor.and_then(|p| op.pre.get(p).map(|value| problem.symbol(p, value).to_string()));
        for from in froms {
            let entry = edges.entry((from, to)).or_insert_with(|| Some(BTreeSet::new()));
            match (&label, entry.as_mut()) {
                (Some(l), Some(set)) => {
                    set.insert(l.clone());
                }
                (None, _) => *entry = None,
                (Some(_), None) => {}
            }
        }
    }
    LabelledGraph {
        nodes: variable.domain.clone(),
        edges: edges
            .into_iter()
            .map(|((from, to), labels)| Edge { from, to, labels: labels.unwrap_or_default() })
            .collect(),
    }
}

pub fn max_domain_size(problem: &PlanningProblem) -> usize {
    problem.max_domain_size()
}

/// Operator by id, pre-condition and post-condition, with symbolic values.
type NamedOperator = (String, Vec<(VariableId, String)>, (VariableId, String));

/// Incremental constructor addressing variables and values by name.
#[derive(Debug, Default)]
pub struct ProblemBuilder {
    variables: Vec<Variable>,
    names: FxHashMap<String, VariableId>,
    init: Vec<Option<String>>,
    goal: Vec<(VariableId, String)>,
    operators: Vec<NamedOperator>,
}

impl ProblemBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn variable<S: Into<String>>(
        &mut self,
        name: impl Into<String>,
        domain: impl IntoIterator<Item = S>,
    ) -> VariableId {
        let name = name.into();
        let id = VariableId(self.variables.len());
        self.names.insert(name.clone(), id);
        self.variables.push(Variable { name, domain: domain.into_iter().map(Into::into).collect() });
        self.init.push(None);
        id
    }

    pub fn id(&self, name: &str) -> Option<VariableId> {
        self.names.get(name).copied()
    }

    pub fn init(&mut self, var: VariableId, symbol: &str) -> &mut Self {
        self.init[var.0] = Some(symbol.to_string());
        self
    }

    pub fn goal(&mut self, var: VariableId, symbol: &str) -> &mut Self {
        self.goal.push((var, symbol.to_string()));
        self
    }

    pub fn operator(
        &mut self,
        id: impl Into<String>,
        pre: &[(VariableId, &str)],
        post: (VariableId, &str),
    ) -> &mut Self {
        self.operators.push((
            id.into(),
            pre.iter().map(|&(v, s)| (v, s.to_string())).collect(),
            (post.0, post.1.to_string()),
        ));
        self
    }

    pub fn build(self) -> Result<PlanningProblem, ModelError> {
        let variables = self.variables;
        let resolve = |var: VariableId, sym: &str| -> Result<Binding, ModelError> {
            let v = variables.get(var.0).ok_or(ModelError::VariableOutOfRange(var.0))?;
            let value = v
                .value_index(sym)
                .ok_or_else(|| ModelError::UnknownValue { var: v.name.clone(), value: sym.to_string() })?;
            Ok(Binding { var, value })
        };
        let init = self
            .init
            .iter()
            .enumerate()
            .map(|(i, sym)| {
                let sym = sym.as_deref().ok_or_else(|| ModelError::MissingInit(variables[i].name.clone()))?;
                resolve(VariableId(i), sym).map(|b| b.value)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let goal = PartialState::new(self.goal.iter().map(|(v, s)| resolve(*v, s)).collect::<Result<_, _>>()?)?;
        let operators = self
            .operators
            .iter()
            .map(|(id, pre, post)| {
                let pre = PartialState::new(pre.iter().map(|(v, s)| resolve(*v, s)).collect::<Result<_, _>>()?)?;
                Ok(Operator { id: id.clone(), pre, post: resolve(post.0, &post.1)? })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        PlanningProblem::new(variables, State::from_indices(init), goal, operators)
    }
}
