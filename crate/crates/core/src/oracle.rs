//! Brute-force ground truth on both sides of the reduction: breadth-first
//! plan search and assignment enumeration.

use std::collections::VecDeque;
use std::fmt;
use std::time::{Duration, Instant};

use rustc_hash::FxHashMap;

use crate::cnf::{Assignment, CnfFormula};
use crate::error::OracleError;
use crate::layout::Variant;
use crate::model::PlanningProblem;
use crate::reduction::reduce;
use crate::runtime::{solves, Plan};
use crate::synthesis::synthesize_for;

pub const DEFAULT_MAX_STATES: usize = 10_000_000;
pub const MAX_BRUTE_FORCE_VARS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Distinct states the search may store.
    pub max_states: usize,
    pub max_time: Option<Duration>,
    pub max_plan_length: Option<usize>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_states: DEFAULT_MAX_STATES, max_time: None, max_plan_length: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Solvable(Plan),
    Unsolvable,
    LimitExceeded,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expanded: usize,
    pub visited: usize,
    pub frontier_peak: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub stats: SearchStats,
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::Solvable(plan) => write!(f, "SOLVABLE len={}", plan.len())?,
            Verdict::Unsolvable => f.write_str("UNSOLVABLE")?,
            Verdict::LimitExceeded => f.write_str("LIMIT_EXCEEDED")?,
        }
        write!(
            f,
            " expanded={} visited={} frontier_peak={}",
            self.stats.expanded, self.stats.visited, self.stats.frontier_peak
        )
    }
}

/// Breadth-first search from the initial state. Successors are generated
/// in operator-id order, so the returned plan is the shortest one that comes
/// first in that order.
pub fn bfs_plan_exists(problem: &PlanningProblem, limits: SearchLimits) -> SearchOutcome {
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let finish = |verdict, mut stats: SearchStats| {
        stats.elapsed = start.elapsed();
        SearchOutcome { verdict, stats }
    };

    let init: Box<[u8]> = problem.init().values().into();
    if problem.is_goal(problem.init()) {
        stats.visited = 1;
        return finish(Verdict::Solvable(Plan::default()), stats);
    }

    let ops = problem.operators();
    let mut order: Vec<usize> = (0..ops.len()).collect();
    order.sort_by(|&a, &b| ops[a].id.cmp(&ops[b].id));
    let pres: Vec<Vec<(usize, u8)>> =
        ops.iter().map(|op| op.pre.bindings().iter().map(|b| (b.var.0, b.value)).collect()).collect();
    let goal: Vec<(usize, u8)> = problem.goal().bindings().iter().map(|b| (b.var.0, b.value)).collect();

    // node i: (parent node, operator index, depth)
    let mut nodes: Vec<(u32, u32, u32)> = vec![(u32::MAX, u32::MAX, 0)];
    let mut visited: FxHashMap<Box<[u8]>, ()> = FxHashMap::default();
    visited.insert(init.clone(), ());
    let mut queue: VecDeque<(u32, Box<[u8]>)> = VecDeque::from([(0, init)]);
    let mut truncated = false;

    while let Some((node, state)) = queue.pop_front() {
        if limits.max_time.is_some_and(|t| start.elapsed() > t) {
            stats.visited = visited.len();
            return finish(Verdict::LimitExceeded, stats);
        }
        let depth = nodes[node as usize].2;
        if limits.max_plan_length.is_some_and(|max| depth as usize >= max) {
            truncated = true;
            continue;
        }
        stats.expanded += 1;
        for &oi in &order {
            if !pres[oi].iter().all(|&(v, x)| state[v] == x) {
                continue;
            }
            let post = ops[oi].post;
            if state[post.var.0] == post.value {
                continue;
            }
            let mut next = state.clone();
            next[post.var.0] = post.value;
            if visited.contains_key(&next) {
                continue;
            }
            nodes.push((node, oi as u32, depth + 1));
            let id = (nodes.len() - 1) as u32;
            if goal.iter().all(|&(v, x)| next[v] == x) {
                stats.visited = visited.len() + 1;
                return finish(Verdict::Solvable(extract_plan(problem, &nodes, id)), stats);
            }
            if visited.len() >= limits.max_states {
                stats.visited = visited.len();
                return finish(Verdict::LimitExceeded, stats);
            }
            visited.insert(next.clone(), ());
            queue.push_back((id, next));
        }
        stats.frontier_peak = stats.frontier_peak.max(queue.len());
    }
    stats.visited = visited.len();
    finish(if truncated { Verdict::LimitExceeded } else { Verdict::Unsolvable }, stats)
}

fn extract_plan(problem: &PlanningProblem, nodes: &[(u32, u32, u32)], mut node: u32) -> Plan {
    let mut steps = Vec::new();
    while node != 0 {
        let (parent, op, _) = nodes[node as usize];
        steps.push(problem.operators()[op as usize].id.clone());
        node = parent;
    }
    steps.reverse();
    Plan::new(steps)
}

/// Lexicographically smallest satisfying assignment, `x_1` most significant.
pub fn sat_brute_force(formula: &CnfFormula) -> Result<Option<Assignment>, OracleError> {
    let n = formula.num_vars();
    if n > MAX_BRUTE_FORCE_VARS {
        return Err(OracleError::TooManyVariables { n, max: MAX_BRUTE_FORCE_VARS });
    }
    Ok((0..1u64 << n).map(|i| Assignment::from_index(n, i)).find(|a| formula.evaluate(a)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Comparison of the SAT side and the planning side for one formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub status: Status,
    pub sat: bool,
    /// `None` when the search hit a limit.
    pub plan: Option<bool>,
    pub states: usize,
    /// Length of the plan the search found, 0 if none.
    pub len: usize,
    /// Whether the plan synthesized from the satisfying assignment solves
    /// the problem; `None` on the unsatisfiable side.
    pub synthesized_solves: Option<bool>,
    pub search: SearchOutcome,
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let plan = self.plan.map_or_else(|| "unknown".to_string(), |p| p.to_string());
        write!(f, "{} sat={} plan={plan} states={} len={}", self.status, self.sat, self.states, self.len)
    }
}

pub fn verify_equivalence(
    formula: &CnfFormula,
    variant: Variant,
    limits: SearchLimits,
) -> Result<EquivalenceReport, OracleError> {
    let witness = sat_brute_force(formula)?;
    let problem = reduce(formula, variant);
    let search = bfs_plan_exists(&problem, limits);
    let synthesized_solves = witness
        .as_ref()
        .map(|sigma| synthesize_for(&problem, formula, sigma, variant).is_ok_and(|plan| solves(&problem, &plan)));
    let (plan, len, found_ok) = match &search.verdict {
        Verdict::Solvable(p) => (Some(true), p.len(), solves(&problem, p)),
        Verdict::Unsolvable => (Some(false), 0, true),
        Verdict::LimitExceeded => (None, 0, true),
    };
    let sat = witness.is_some();
    let status = match plan {
        None => Status::Inconclusive,
        Some(plan) if plan == sat && found_ok && synthesized_solves != Some(false) => Status::Pass,
        Some(_) => Status::Fail,
    };
    Ok(EquivalenceReport { status, sat, plan, states: search.stats.visited, len, synthesized_solves, search })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ProblemBuilder;
    use crate::runtime::is_admissible;

    #[test]
    fn brute_force_sat() {
        let f = CnfFormula::from_signed(2, &[&[1, 2]]).unwrap();
        assert_eq!(sat_brute_force(&f).unwrap(), Some("01".parse().unwrap()));
        let f = CnfFormula::from_signed(1, &[&[1], &[-1]]).unwrap();
        assert_eq!(sat_brute_force(&f).unwrap(), None);
        let f = CnfFormula::from_signed(1, &[&[]]).unwrap();
        assert_eq!(sat_brute_force(&f).unwrap(), None);
        let f = CnfFormula::from_signed(25, &[&[1]]).unwrap();
        assert_eq!(sat_brute_force(&f).unwrap_err(), OracleError::TooManyVariables { n: 25, max: 24 });
    }

    #[test]
    fn goal_at_init() {
        let mut b = ProblemBuilder::new();
        let v = b.variable("v", ["0", "1"]);
        b.init(v, "0").goal(v, "0");
        let p = b.build().unwrap();
        let out = bfs_plan_exists(&p, SearchLimits::default());
        assert_eq!(out.verdict, Verdict::Solvable(Plan::default()));
    }

    #[test]
    fn example_is_solvable_by_an_admissible_plan() {
        let f = CnfFormula::from_signed(2, &[&[1, 2]]).unwrap();
        let p = reduce(&f, Variant::K11);
        let out = bfs_plan_exists(&p, SearchLimits::default());
        let Verdict::Solvable(plan) = &out.verdict else { panic!("{out}") };
        assert!(plan.len() <= 28);
        assert!(solves(&p, plan));
        assert!(is_admissible(&p, plan, Variant::K11).unwrap());
        // deterministic
        assert_eq!(bfs_plan_exists(&p, SearchLimits::default()).verdict, out.verdict);
    }

    #[test]
    fn contradiction_is_unsolvable() {
        let f = CnfFormula::from_signed(1, &[&[1], &[-1]]).unwrap();
        let out = bfs_plan_exists(&reduce(&f, Variant::K5), SearchLimits::default());
        assert_eq!(out.verdict, Verdict::Unsolvable);
    }

    #[test]
    fn limits_make_results_inconclusive() {
        let f = CnfFormula::from_signed(2, &[&[1, 2]]).unwrap();
        let limits = SearchLimits { max_states: 10, ..SearchLimits::default() };
        let report = verify_equivalence(&f, Variant::K11, limits).unwrap();
        assert_eq!(report.status, Status::Inconclusive);
        assert!(report.to_string().starts_with("INCONCLUSIVE sat=true plan=unknown"));
        let limits = SearchLimits { max_plan_length: Some(3), ..SearchLimits::default() };
        assert_eq!(bfs_plan_exists(&reduce(&f, Variant::K5), limits).verdict, Verdict::LimitExceeded);
    }

    #[test]
    fn equivalence_on_small_formulas() {
        for variant in Variant::ALL {
            let f = CnfFormula::from_signed(2, &[&[1, 2]]).unwrap();
            let r = verify_equivalence(&f, variant, SearchLimits::default()).unwrap();
            assert_eq!((r.status, r.sat, r.plan), (Status::Pass, true, Some(true)), "{variant}");
            let f = CnfFormula::from_signed(1, &[&[1], &[-1]]).unwrap();
            let r = verify_equivalence(&f, variant, SearchLimits::default()).unwrap();
            assert_eq!((r.status, r.sat, r.plan), (Status::Pass, false, Some(false)), "{variant}");
        }
    }
}
