#![allow(dead_code)]

use std::path::PathBuf;

use chainplan::layout::{Layout, Role, Variant};
use chainplan::runtime::admissible_count;
use chainplan::{Assignment, CnfFormula, Literal, Plan, PlanningProblem, State, VariableId};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn random_assignment(rng: &mut StdRng, n: usize) -> Assignment {
    Assignment::new((0..n).map(|_| rng.gen()).collect())
}

fn random_clause(rng: &mut StdRng, n: usize) -> Vec<Literal> {
    let p = 1.5 / (2 * n) as f64;
    let mut clause = Vec::new();
    for var in 1..=n {
        for positive in [true, false] {
            if rng.gen_bool(p.min(1.0)) {
                clause.push(Literal { var, positive });
            }
        }
    }
    clause.shuffle(rng);
    clause
}

fn true_literal(sigma: &Assignment, var: usize) -> Literal {
    Literal { var, positive: sigma.get(var) }
}

/// Random formula that `sigma` satisfies: every clause gets at least one
/// literal made true by `sigma`.
pub fn planted_formula(rng: &mut StdRng, n: usize, k: usize, sigma: &Assignment) -> CnfFormula {
    let clauses = (0..k)
        .map(|_| {
            let mut c = random_clause(rng, n);
            if !c.iter().any(|l| l.positive == sigma.get(l.var)) {
                let lit = true_literal(sigma, rng.gen_range(1..=n));
                let at = rng.gen_range(0..=c.len());
                c.insert(at, lit);
            }
            c
        })
        .collect();
    CnfFormula::new(n, clauses).unwrap()
}

/// Random formula with at least one clause that `sigma` falsifies.
pub fn falsified_formula(rng: &mut StdRng, n: usize, k: usize, sigma: &Assignment) -> CnfFormula {
    let bad = rng.gen_range(0..k);
    let clauses = (0..k)
        .map(|i| {
            let c = random_clause(rng, n);
            if i == bad {
                let mut c: Vec<Literal> = c.into_iter().filter(|l| l.positive != sigma.get(l.var)).collect();
                if c.is_empty() && rng.gen_bool(0.8) {
                    let var = rng.gen_range(1..=n);
                    c.push(Literal { var, positive: !sigma.get(var) });
                }
                c
            } else {
                c
            }
        })
        .collect();
    CnfFormula::new(n, clauses).unwrap()
}

/// Clause satisfaction by direct scan, independent of the library's
/// evaluator.
pub fn satisfies(formula: &CnfFormula, sigma: &Assignment) -> bool {
    formula.clauses().iter().all(|c| c.iter().any(|l| sigma.bits()[l.var - 1] == l.positive))
}

/// First position whose bit satisfies the clause, or `n + 1`, by direct scan.
pub fn first_satisfying_bit(formula: &CnfFormula, sigma: &Assignment, clause: usize) -> usize {
    let c = &formula.clauses()[clause - 1];
    for (j, &bit) in sigma.bits().iter().enumerate() {
        if c.iter().any(|l| l.var == j + 1 && l.positive == bit) {
            return j + 1;
        }
    }
    sigma.len() + 1
}

/// Change counter of one variable with the variant's semantics: value
/// changes, or subscript changes for K7 middle variables.
pub struct Counters {
    pub counts: Vec<usize>,
    subscript: Vec<bool>,
}

fn subscript_of(sym: &str) -> &str {
    sym.rsplit('_').next().unwrap_or(sym)
}

impl Counters {
    pub fn new(problem: &PlanningProblem, layout: &Layout) -> Self {
        let subscript = (0..problem.num_variables())
            .map(|i| layout.variant == Variant::K7 && layout.role(VariableId(i)).is_middle())
            .collect();
        Counters { counts: vec![0; problem.num_variables()], subscript }
    }

    pub fn is_counted(&self, problem: &PlanningProblem, var: VariableId, before: u8, after: u8) -> bool {
        if before == after {
            return false;
        }
        !self.subscript[var.0] || subscript_of(problem.symbol(var, before)) != subscript_of(problem.symbol(var, after))
    }

    /// Records the move of `var` from `before` to `after`.
    pub fn record(&mut self, problem: &PlanningProblem, var: VariableId, before: u8, after: u8) {
        if self.is_counted(problem, var, before, after) {
            self.counts[var.0] += 1;
        }
    }
}

/// Random admissible plan: a random interleaving of moves in which every
/// variable stays within its admissible quota, waits for its successor to
/// catch up before moving again, and only moves if the successor can follow.
/// Returns `None` after a dead end.
pub fn random_admissible_plan(rng: &mut StdRng, problem: &PlanningProblem, layout: &Layout) -> Option<Plan> {
    let roles = layout.roles();
    let quota: Vec<usize> = roles.iter().map(|&r| admissible_count(layout, r)).collect();
    let nv = problem.num_variables();
    let mut counters = Counters::new(problem, layout);
    let mut state = problem.init().clone();
    let mut plan = Vec::new();
    let ops = problem.operators();

    let movable = |counts: &[usize], v: usize| -> bool {
        if counts[v] >= quota[v] {
            return false;
        }
        if v + 1 == nv {
            return true;
        }
        let lead = usize::from(matches!(roles[v], Role::Selector(_)));
        counts[v + 1] >= (counts[v] + lead).min(quota[v + 1])
    };

    loop {
        let candidates: Vec<usize> = (0..ops.len())
            .filter(|&i| {
                let op = &ops[i];
                let v = op.target().0;
                if !op.is_applicable(&state) || !movable(&counters.counts, v) {
                    return false;
                }
                // the successor must be able to follow this move
                let mut next = state.clone();
                next.set(op.post.var, op.post.value);
                if v + 1 < nv && counters.counts[v + 1] < quota[v + 1] {
                    let follow = problem.operators_for(VariableId(v + 1)).any(|o| o.is_applicable(&next));
                    let counted = counters.is_counted(problem, op.post.var, state.get(op.post.var), op.post.value);
                    if counted && !follow {
                        return false;
                    }
                }
                true
            })
            .collect();
        let Some(&i) = candidates.choose(rng) else {
            break;
        };
        let op = &ops[i];
        let before = state.get(op.post.var);
        state.set(op.post.var, op.post.value);
        counters.record(problem, op.post.var, before, op.post.value);
        plan.push(op.id.clone());
    }
    (counters.counts == quota).then(|| Plan::new(plan))
}

/// Applies a uniformly random applicable operator `steps` times (or until
/// none applies), calling `check` with the counters after every step.
pub fn random_walk(
    rng: &mut StdRng,
    problem: &PlanningProblem,
    layout: &Layout,
    steps: usize,
    mut check: impl FnMut(&State, &[usize]) -> Result<(), String>,
) -> Result<usize, String> {
    let mut counters = Counters::new(problem, layout);
    let mut state = problem.init().clone();
    for step in 0..steps {
        let applicable: Vec<_> = problem.operators().iter().filter(|o| o.is_applicable(&state)).collect();
        let Some(op) = applicable.choose(rng) else {
            return Ok(step);
        };
        let before = state.get(op.post.var);
        state.set(op.post.var, op.post.value);
        counters.record(problem, op.post.var, before, op.post.value);
        check(&state, &counters.counts).map_err(|e| format!("step {step} ({}): {e}", op.id))?;
    }
    Ok(steps)
}

/// Counter-monotonicity bounds every partial plan respects.
pub fn monotonicity_violation(layout: &Layout, counts: &[usize]) -> Option<String> {
    let n = layout.n;
    let c = |v: VariableId| counts[v.0];
    if c(layout.selector(1)) > 1 {
        return Some(format!("s1 changed {} times", c(layout.selector(1))));
    }
    for i in 2..=layout.chain_len() {
        if c(layout.selector(i)) > c(layout.selector(i - 1)) + 1 {
            return Some(format!("s{i} ahead of s{} by more than one", i - 1));
        }
    }
    let vs = layout.message();
    if c(vs) > c(layout.selector(layout.chain_len())) + 1 || c(vs) > 2 * n {
        return Some(format!("vs changed {} times", c(vs)));
    }
    for (idx, role) in layout.roles().into_iter().enumerate() {
        if role.is_middle() && counts[idx] > counts[idx - 1] {
            return Some(format!("{} ahead of its predecessor", layout.name(role)));
        }
    }
    if c(layout.end()) > c(layout.last_middle()) {
        return Some("ve ahead of the last middle variable".into());
    }
    if c(layout.echo(1)) > c(layout.end()) {
        return Some("e1 ahead of ve".into());
    }
    for i in 2..=layout.chain_len() {
        if c(layout.echo(i)) > c(layout.echo(i - 1)) {
            return Some(format!("e{i} ahead of e{}", i - 1));
        }
    }
    None
}
