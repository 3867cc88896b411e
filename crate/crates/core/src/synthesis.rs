//! Admissible plans from assignments, and the value sequences such plans
//! are predicted to produce.
//!
//! A plan is built in `2n` waves. Wave `t` advances the selector chain, moves
//! `v_s` to `m_j` (odd `t`, `j = (t+1)/2`) or back to `x` (even `t`), walks the
//! middle variables in chain order and finally moves `v_e` and the echo chain.
//! The middle-variable rows used in each wave follow the case analysis on
//! `j` versus the satisficing index `T_i` of each clause.

use crate::cnf::{Assignment, CnfFormula};
use crate::error::{LayoutError, SynthesisError};
use crate::layout::{Layout, Variant};
use crate::model::{PlanningProblem, State, VariableId};
use crate::reduction::{reduce, OperatorRef, RefTag};
use crate::runtime::{Plan, Trace};

/// Smallest `j` such that `x_j = σ(x_j)` satisfies clause `i`, or `n + 1`.
pub fn satisficing_index(formula: &CnfFormula, sigma: &Assignment, clause: usize) -> usize {
    let n = formula.num_vars();
    (1..=n).find(|&j| formula.literal_satisfies(clause, j, sigma.get(j))).unwrap_or(n + 1)
}

pub fn satisficing_indices(formula: &CnfFormula, sigma: &Assignment) -> Vec<usize> {
    (1..=formula.num_clauses()).map(|i| satisficing_index(formula, sigma, i)).collect()
}

/// Value tables of the middle variables, per clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequencePrediction {
    /// `[clause][t - 1][p]`: the `t`-th value of the clause's `p`-th middle
    /// variable in chain order, for `t ∈ 1..=2n+1`. For K7 the `t`-th value
    /// is the one entered at the `(t-1)`-th subscript change.
    Sequences(Vec<Vec<Vec<String>>>),
    /// `[clause][j - 1]`: the `(2j+1)`-th value of `v_{i(n-j+1)}^1` (K5).
    Diagonal(Vec<Vec<String>>),
}

fn s(letter: char, sub: Option<bool>) -> String {
    match sub {
        Some(m) => format!("{letter}_{}", u8::from(m)),
        None => format!("{letter}_x"),
    }
}

pub fn predict_sequences(formula: &CnfFormula, sigma: &Assignment, variant: Variant) -> SequencePrediction {
    let n = formula.num_vars();
    let indices = satisficing_indices(formula, sigma);
    if variant == Variant::K5 {
        let diagonal = indices
            .iter()
            .map(|&t_i| (1..=n).map(|j| if j < t_i { "b_x" } else { "a_x" }.to_string()).collect())
            .collect();
        return SequencePrediction::Diagonal(diagonal);
    }
    let tables = indices
        .iter()
        .map(|&t_i| {
            (1..=2 * n + 1).map(|t| (1..=n).flat_map(|l| predicted_cell(variant, sigma, t_i, t, l)).collect()).collect()
        })
        .collect();
    SequencePrediction::Sequences(tables)
}

/// Predicted `t`-th values of the variables at position `l` of a clause with
/// satisficing index `t_i`: one value for K11, the triple `(v^1, v^2, v^3)`
/// for K7.
fn predicted_cell(variant: Variant, sigma: &Assignment, t_i: usize, t: usize, l: usize) -> Vec<String> {
    let k7 = variant == Variant::K7;
    if t == 1 {
        return vec![s('a', None); if k7 { 3 } else { 1 }];
    }
    let j = t / 2;
    let (sub, letters): (Option<bool>, &[char]) = if t.is_multiple_of(2) {
        let m = Some(sigma.get(j));
        let letters: &[char] = match (k7, l.cmp(&j.min(t_i))) {
            (false, std::cmp::Ordering::Less) => &['c'],
            (false, _) if j < t_i && l == j => &['b'],
            (false, _) if j < t_i => &['a'],
            (false, _) => &['g'],
            (true, std::cmp::Ordering::Less) => &['b', 'a', 'b'],
            (true, _) if j < t_i && l == j => &['b', 'a', 'a'],
            (true, _) if j < t_i => &['a', 'a', 'a'],
            (true, _) => &['b', 'g', 'b'],
        };
        (m, letters)
    } else {
        let letters: &[char] = match k7 {
            false if j < t_i && l <= j => &['c'],
            false if j < t_i => &['a'],
            false if l < t_i => &['c'],
            false => &['g'],
            true if j < t_i && l <= j => &['b', 'b', 'b'],
            true if j < t_i => &['a', 'a', 'a'],
            true if l < t_i => &['b', 'b', 'b'],
            true => &['b', 'g', 'b'],
        };
        (None, letters)
    };
    letters.iter().map(|&c| s(c, sub)).collect()
}

/// Reads the same tables off an executed plan. Missing values (a variable
/// that changed fewer than `2n` times) are rendered as `-`.
pub fn observe_sequences(problem: &PlanningProblem, trace: &Trace) -> Result<SequencePrediction, LayoutError> {
    let layout = Layout::infer(problem)?;
    let n = layout.n;
    let symbol_at = |var: VariableId, seq: &[u8], idx: usize| -> String {
        seq.get(idx).map_or_else(|| "-".to_string(), |&v| problem.symbol(var, v).to_string())
    };
    if layout.variant == Variant::K5 {
        let diagonal = (1..=layout.k)
            .map(|i| {
                (1..=n)
                    .map(|j| {
                        let var = layout.middle(i, n - j + 1, 1);
                        symbol_at(var, &trace.value_sequence(var), 2 * j)
                    })
                    .collect()
            })
            .collect();
        return Ok(SequencePrediction::Diagonal(diagonal));
    }
    let layers = layout.variant.layers();
    let tables = (1..=layout.k)
        .map(|i| {
            let seqs: Vec<(VariableId, Vec<u8>)> = (1..=n)
                .flat_map(|l| (1..=layers).map(move |layer| (l, layer)))
                .map(|(l, layer)| {
                    let var = layout.middle(i, l, layer);
                    let seq = if layout.variant.counts_subscripts() {
                        trace.subscript_sequence(problem, var)
                    } else {
                        trace.value_sequence(var)
                    };
                    (var, seq)
                })
                .collect();
            (0..=2 * n).map(|t| seqs.iter().map(|(var, seq)| symbol_at(*var, seq, t)).collect()).collect()
        })
        .collect();
    Ok(SequencePrediction::Sequences(tables))
}

/// Builds the admissible plan for `sigma`, which solves the reduced problem
/// iff `sigma` satisfies `formula`.
pub fn synthesize(formula: &CnfFormula, sigma: &Assignment, variant: Variant) -> Result<Plan, SynthesisError> {
    synthesize_for(&reduce(formula, variant), formula, sigma, variant)
}

/// As [`synthesize`], for an already reduced `problem`.
pub fn synthesize_for(
    problem: &PlanningProblem,
    formula: &CnfFormula,
    sigma: &Assignment,
    variant: Variant,
) -> Result<Plan, SynthesisError> {
    if sigma.len() != formula.num_vars() {
        return Err(SynthesisError::AssignmentArity { expected: formula.num_vars(), found: sigma.len() });
    }
    let layout = Layout::new(variant, formula.num_vars(), formula.num_clauses());
    let mut synth = Synth::new(problem, layout, formula, sigma);
    synth.run()?;
    Ok(Plan::new(synth.plan))
}

struct Synth<'a> {
    problem: &'a PlanningProblem,
    layout: Layout,
    formula: &'a CnfFormula,
    sigma: &'a Assignment,
    indices: Vec<usize>,
    state: State,
    plan: Vec<String>,
    selector_changes: Vec<usize>,
    refs: Vec<OperatorRef>,
    by_var: Vec<Vec<usize>>,
}

impl<'a> Synth<'a> {
    fn new(problem: &'a PlanningProblem, layout: Layout, formula: &'a CnfFormula, sigma: &'a Assignment) -> Self {
        let refs = problem
            .operators()
            .iter()
            .map(|op| op.id.parse().expect("operator ids of a reduced problem parse"))
            .collect();
        let mut by_var = vec![Vec::new(); problem.num_variables()];
        for (i, op) in problem.operators().iter().enumerate() {
            by_var[op.target().0].push(i);
        }
        Synth {
            problem,
            indices: satisficing_indices(formula, sigma),
            layout,
            formula,
            sigma,
            state: problem.init().clone(),
            plan: Vec::new(),
            selector_changes: vec![0; 2 * formula.num_vars()],
            refs,
            by_var,
        }
    }

    /// Applies the first applicable operator for `var` accepted by `select`.
    fn fire(
        &mut self,
        var: VariableId,
        wanted: &str,
        select: impl Fn(&OperatorRef) -> bool,
    ) -> Result<(), SynthesisError> {
        let found = self.by_var[var.0]
            .iter()
            .copied()
            .find(|&i| select(&self.refs[i]) && self.problem.operators()[i].is_applicable(&self.state));
        let Some(i) = found else {
            return Err(SynthesisError::NoOperator {
                var: self.problem.variable(var).name.clone(),
                refs: vec![wanted.to_string()],
                value: self.problem.value_of(&self.state, var).to_string(),
            });
        };
        let op = &self.problem.operators()[i];
        self.state.set(op.post.var, op.post.value);
        self.plan.push(op.id.clone());
        Ok(())
    }

    fn fire_rows(&mut self, var: VariableId, rows: &[u8]) -> Result<(), SynthesisError> {
        let wanted = rows.iter().map(u8::to_string).collect::<Vec<_>>().join("|");
        self.fire(var, &wanted, |r| r.row().is_some_and(|row| rows.contains(&row)))
    }

    fn fire_tag(&mut self, var: VariableId, tag: RefTag, m: Option<bool>) -> Result<(), SynthesisError> {
        let wanted = tag.to_string();
        self.fire(var, &wanted, |r| r.tag == tag && (m.is_none() || r.m == m))
    }

    fn value(&self, var: VariableId) -> &str {
        self.problem.value_of(&self.state, var)
    }

    /// One more change of `s_i`, first bringing `s_{i-1}` to the parity the
    /// change requires.
    fn step_selector(&mut self, i: usize) -> Result<(), SynthesisError> {
        let c = self.selector_changes[i];
        if i > 1 && self.selector_changes[i - 1] % 2 != c % 2 {
            self.step_selector(i - 1)?;
        }
        let tag = if c.is_multiple_of(2) { RefTag::Set } else { RefTag::Reset };
        self.fire_tag(self.layout.selector(i), tag, None)?;
        self.selector_changes[i] += 1;
        Ok(())
    }

    fn run(&mut self) -> Result<(), SynthesisError> {
        let n = self.layout.n;
        for t in 1..=2 * n {
            let j = t.div_ceil(2);
            let bit_wave = t % 2 == 1;
            if t > 1 {
                self.step_selector(2 * n - 1)?;
            }
            if bit_wave {
                self.fire_tag(self.layout.message(), RefTag::Set, Some(self.sigma.get(j)))?;
            } else {
                self.fire_tag(self.layout.message(), RefTag::Reset, None)?;
            }
            for i in 1..=self.layout.k {
                match self.layout.variant {
                    Variant::K11 => self.k11_wave(i, j, bit_wave)?,
                    Variant::K7 => self.k7_wave(i, j, bit_wave)?,
                    Variant::K5 => self.k5_wave(i, j, bit_wave)?,
                }
            }
            let tag = if bit_wave { RefTag::Set } else { RefTag::Reset };
            self.fire_tag(self.layout.end(), tag, None)?;
            for e in 1..=(2 * n - t) {
                self.fire_tag(self.layout.echo(e), tag, None)?;
            }
        }
        Ok(())
    }

    fn k11_wave(&mut self, i: usize, j: usize, bit_wave: bool) -> Result<(), SynthesisError> {
        let t_i = self.indices[i - 1];
        for l in 1..=self.layout.n {
            let rows: &[u8] = match (bit_wave, l == 1) {
                // value 2j
                (true, true) if j == 1 && j < t_i => &[2, 4],
                (true, true) if j == 1 => &[1, 3],
                (true, true) if t_i == 1 => &[6],
                (true, true) => &[5],
                (true, false) if j < t_i && l < j => &[16],
                (true, false) if j < t_i && l == j => &[11, 13],
                (true, false) if j < t_i => &[14],
                (true, false) if j == t_i && l < j => &[16],
                (true, false) if j == t_i && l == j => &[10, 12],
                (true, false) if j == t_i => &[15],
                (true, false) if l < t_i => &[16],
                (true, false) => &[17],
                // value 2j + 1
                (false, true) if j == 1 && j < t_i => &[7],
                (false, true) if t_i == 1 => &[9],
                (false, true) => &[8],
                (false, false) if j < t_i && l < j => &[20],
                (false, false) if j < t_i && l == j => &[19],
                (false, false) if j < t_i => &[18],
                (false, false) if l < t_i => &[20],
                (false, false) => &[21],
            };
            self.fire_rows(self.layout.middle(i, l, 1), rows)?;
        }
        Ok(())
    }

    fn fire_triple(&mut self, i: usize, l: usize, rows: [&[u8]; 3]) -> Result<(), SynthesisError> {
        for (layer, r) in rows.into_iter().enumerate() {
            self.fire_rows(self.layout.middle(i, l, layer + 1), r)?;
        }
        Ok(())
    }

    fn k7_wave(&mut self, i: usize, j: usize, bit_wave: bool) -> Result<(), SynthesisError> {
        let t_i = self.indices[i - 1];
        let n = self.layout.n;
        // rows 6/7 (position 1) and 15/17 (later positions) play the same part
        let first = |l: usize, a: u8, b: u8| if l == 1 { a } else { b };
        if !bit_wave {
            for l in 1..=n {
                let r1 = [first(l, 7, 17)];
                let rows: [&[u8]; 3] = if j < t_i {
                    match l.cmp(&j) {
                        std::cmp::Ordering::Less => [&r1, &[23], &[31]],
                        std::cmp::Ordering::Equal => [&r1, &[23], &[30]],
                        std::cmp::Ordering::Greater => [&[16], &[22], &[29]],
                    }
                } else if l < t_i {
                    [&r1, &[23], &[31]]
                } else {
                    [&r1, &[24], &[31]]
                };
                self.fire_triple(i, l, rows)?;
            }
            return Ok(());
        }
        if j == t_i {
            // detour through g_x, then the subscript change to m_j
            for l in 1..=n {
                let r1 = [first(l, 6, 15)];
                let rows: [&[u8]; 3] = match l.cmp(&j) {
                    std::cmp::Ordering::Less => [&r1, &[21], &[28]],
                    std::cmp::Ordering::Equal if j == 1 => [&[1, 3], &[19], &[26]],
                    std::cmp::Ordering::Equal => [&[8, 10], &[19], &[26]],
                    std::cmp::Ordering::Greater => [&[12], &[19], &[26]],
                };
                self.fire_triple(i, l, rows)?;
            }
            for l in j..=n {
                self.fire_triple(i, l, [&[first(l, 5, 14)], &[20], &[27]])?;
            }
            return Ok(());
        }
        for l in 1..=n {
            let r1 = [first(l, 6, 15)];
            let rows: [&[u8]; 3] = if j < t_i {
                match l.cmp(&j) {
                    std::cmp::Ordering::Less => [&r1, &[21], &[28]],
                    std::cmp::Ordering::Equal if j == 1 => [&[2, 4], &[18], &[25]],
                    std::cmp::Ordering::Equal => [&[9, 11], &[18], &[25]],
                    std::cmp::Ordering::Greater => [&[13], &[18], &[25]],
                }
            } else if l < t_i {
                [&r1, &[21], &[28]]
            } else {
                [&r1, &[20], &[28]]
            };
            self.fire_triple(i, l, rows)?;
        }
        Ok(())
    }

    fn k5_wave(&mut self, i: usize, j: usize, bit_wave: bool) -> Result<(), SynthesisError> {
        let n = self.layout.n;
        let m = self.sigma.get(j);
        for l in 1..=n {
            let v1 = self.layout.middle(i, l, 1);
            let v2 = self.layout.middle(i, l, 2);
            if bit_wave {
                self.fire_rows(v1, &[1, 4, 7, 9])?;
                // v2 must offer what its successor's next move requires
                let row = if l == n {
                    18
                } else if self.value(self.layout.middle(i, l + 1, 1)) == "a_x" {
                    11
                } else {
                    13
                };
                self.fire_rows(v2, &[row])?;
            } else {
                let checked = n - l + 1;
                let hold_b = self.value(v2).starts_with('b') && !self.formula.literal_satisfies(i, checked, m);
                let rows: &[u8] = if hold_b { &[3, 6, 10] } else { &[2, 5, 8] };
                self.fire_rows(v1, rows)?;
                self.fire_rows(v2, &[12, 14, 15, 16, 17, 19, 20, 21, 22])?;
            }
        }
        Ok(())
    }
}

/// Length of the synthesized plan. K7 adds three non-subscript steps per
/// variable triple at and after the satisficing position of each satisfied
/// clause.
pub fn predicted_plan_length(formula: &CnfFormula, sigma: &Assignment, variant: Variant) -> usize {
    let n = formula.num_vars();
    let k = formula.num_clauses();
    let layout = Layout::new(variant, n, k);
    let counters = n * (2 * n - 1) + 2 * n * (layout.num_middle() + 2) + n * (2 * n - 1);
    let detours = match variant {
        Variant::K7 => satisficing_indices(formula, sigma).iter().filter(|&&t| t <= n).map(|&t| 3 * (n - t + 1)).sum(),
        _ => 0,
    };
    counters + detours
}
