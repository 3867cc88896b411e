//! Compiles a CNF formula into a chain-causal-graph planning problem that is
//! solvable iff the formula is satisfiable, for three domain bounds (11, 7, 5).
//!
//! Every problem has three parts. The selector chain `s_1..s_{2n-1}` limits
//! the message variable `v_s` to `2n` value changes, so `v_s` spells out
//! `x, m_1, x, ..., m_n, x`. The middle variables propagate the message bits
//! and check each clause against them. The tail `v_e, e_1..e_{2n-1}` forces
//! all `2n` changes to reach the end of the chain.
//!
//! Operator ids record the table row they come from:
//! `<var>/<ref>[/m=<bit>][/p=<sym>]`, where `<ref>` is the row number of the
//! middle-variable tables, or `set`/`reset` for the selector and tail parts.
//! `m` is the row's bit parameter and `p` names the predecessor value when the
//! row has a set-valued pre-condition and is expanded into one operator per
//! member.

use std::fmt;
use std::str::FromStr;

use crate::cnf::CnfFormula;
use crate::layout::{Layout, Role, Variant};
use crate::model::{PlanningProblem, ProblemBuilder, VariableId};

const K11_DOMAIN: [&str; 11] = ["g_x", "g_0", "g_1", "a_x", "a_0", "a_1", "b_0", "b_1", "c_x", "c_0", "c_1"];
const K7_LAYER1: [&str; 7] = ["a_x", "a_0", "a_1", "b_x", "b_0", "b_1", "g_x"];
const K7_LAYER2: [&str; 7] = ["g_x", "g_0", "g_1", "a_x", "a_0", "a_1", "b_x"];
const K7_LAYER3: [&str; 7] = ["a_x", "a_0", "a_1", "b_x", "b_0", "b_1", "g_x"];
const K5_LAYER1: [&str; 4] = ["a_x", "a_0", "a_1", "b_x"];
const K5_LAYER2: [&str; 5] = ["a_x", "a_0", "a_1", "b_0", "b_1"];
const K5_LAYER2_LAST: [&str; 3] = ["a_x", "b_0", "b_1"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RefTag {
    /// Numbered row of a middle-variable table.
    Row(u8),
    Set,
    Reset,
}

impl fmt::Display for RefTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefTag::Row(r) => write!(f, "{r}"),
            RefTag::Set => f.write_str("set"),
            RefTag::Reset => f.write_str("reset"),
        }
    }
}

/// Structured form of an operator id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorRef {
    pub var: String,
    pub tag: RefTag,
    pub m: Option<bool>,
    pub pred: Option<String>,
}

impl OperatorRef {
    pub fn row(&self) -> Option<u8> {
        match self.tag {
            RefTag::Row(r) => Some(r),
            _ => None,
        }
    }

    /// Id with the predecessor suffix removed: one per table row and bit.
    pub fn schema(&self) -> String {
        OperatorRef { pred: None, ..self.clone() }.to_string()
    }
}

impl fmt::Display for OperatorRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.var, self.tag)?;
        if let Some(m) = self.m {
            write!(f, "/m={}", u8::from(m))?;
        }
        if let Some(p) = &self.pred {
            write!(f, "/p={p}")?;
        }
        Ok(())
    }
}

impl FromStr for OperatorRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split('/');
        let var = parts.next().filter(|v| !v.is_empty()).ok_or("missing variable")?;
        let tag = match parts.next().ok_or("missing reference")? {
            "set" => RefTag::Set,
            "reset" => RefTag::Reset,
            r => RefTag::Row(r.parse().map_err(|_| format!("bad reference `{r}`"))?),
        };
        let mut m = None;
        let mut pred = None;
        for part in parts {
            match part.split_once('=') {
                Some(("m", "0")) if m.is_none() && pred.is_none() => m = Some(false),
                Some(("m", "1")) if m.is_none() && pred.is_none() => m = Some(true),
                Some(("p", sym)) if pred.is_none() && !sym.is_empty() => pred = Some(sym.to_string()),
                _ => return Err(format!("bad id component `{part}`")),
            }
        }
        Ok(OperatorRef { var: var.to_string(), tag, m, pred })
    }
}

/// Table rows a variable with this role may use; `None` for roles whose
/// operators are tagged `set`/`reset`.
pub fn allowed_rows(variant: Variant, role: Role) -> Option<std::ops::RangeInclusive<u8>> {
    let Role::Middle { position, layer, clause } = role else {
        return None;
    };
    Some(match (variant, layer) {
        (Variant::K11, _) if position == 1 => 1..=9,
        (Variant::K11, _) => 10..=21,
        (Variant::K5, 1) if position == 1 && clause == 1 => 1..=3,
        (Variant::K5, 1) if position == 1 => 4..=6,
        (Variant::K5, 1) => 7..=10,
        (Variant::K5, _) => 11..=22,
        (Variant::K7, 1) if position == 1 => 1..=7,
        (Variant::K7, 1) => 8..=17,
        (Variant::K7, 2) => 18..=24,
        (Variant::K7, _) => 25..=31,
    })
}

fn sym(letter: char, m: bool) -> String {
    format!("{letter}_{}", u8::from(m))
}

fn bit(m: bool) -> String {
    u8::from(m).to_string()
}

struct Emitter<'f> {
    b: ProblemBuilder,
    layout: Layout,
    formula: &'f CnfFormula,
}

impl Emitter<'_> {
    fn name(&self, var: VariableId) -> String {
        self.layout.name(self.layout.role(var))
    }

    /// One operator per predecessor value in `preds` (none if empty), with
    /// pre-condition `var = from` and post-condition `var = to`.
    fn op(&mut self, var: VariableId, tag: RefTag, m: Option<bool>, preds: &[String], from: &str, to: &str) {
        let var_name = self.name(var);
        let mk_id = |pred: Option<&String>| {
            OperatorRef { var: var_name.clone(), tag, m, pred: pred.filter(|_| preds.len() > 1).cloned() }.to_string()
        };
        if preds.is_empty() {
            self.b.operator(mk_id(None), &[(var, from)], (var, to));
            return;
        }
        let pred_var = VariableId(var.0 - 1);
        for p in preds {
            self.b.operator(mk_id(Some(p)), &[(pred_var, p), (var, from)], (var, to));
        }
    }

    fn sat(&self, clause: usize, j: usize, m: bool) -> bool {
        self.formula.literal_satisfies(clause, j, m)
    }
}

const BITS: [bool; 2] = [false, true];

/// Builds the planning problem for `formula` under `variant`.
pub fn reduce(formula: &CnfFormula, variant: Variant) -> PlanningProblem {
    let layout = Layout::new(variant, formula.num_vars(), formula.num_clauses());
    let mut e = Emitter { b: ProblemBuilder::new(), layout: layout.clone(), formula };

    for role in layout.roles() {
        let name = layout.name(role);
        let id = match role {
            Role::Selector(_) | Role::End | Role::Echo(_) => e.b.variable(name, ["0", "1"]),
            Role::Message => e.b.variable(name, ["0", "1", "x"]),
            Role::Middle { position, layer, .. } => {
                let domain: &[&str] = match (variant, layer) {
                    (Variant::K11, _) => &K11_DOMAIN,
                    (Variant::K7, 1) => &K7_LAYER1,
                    (Variant::K7, 2) => &K7_LAYER2,
                    (Variant::K7, _) => &K7_LAYER3,
                    (Variant::K5, 1) => &K5_LAYER1,
                    (Variant::K5, _) if position == layout.n => &K5_LAYER2_LAST,
                    (Variant::K5, _) => &K5_LAYER2,
                };
                e.b.variable(name, domain.iter().copied())
            }
        };
        let init = match role {
            Role::Message => "x",
            Role::Middle { .. } => "a_x",
            _ => "0",
        };
        e.b.init(id, init);
    }

    for clause in 1..=layout.k {
        let goal_var = match variant {
            Variant::K11 => layout.middle(clause, layout.n, 1),
            Variant::K7 => layout.middle(clause, layout.n, 2),
            Variant::K5 => layout.middle(clause, 1, 1),
        };
        e.b.goal(goal_var, if variant == Variant::K5 { "a_x" } else { "g_x" });
    }
    e.b.goal(layout.end(), "0");
    for i in 1..=layout.chain_len() {
        e.b.goal(layout.echo(i), &bit(i % 2 == 1));
    }

    selector_part(&mut e);
    match variant {
        Variant::K11 => k11_middle(&mut e),
        Variant::K7 => k7_middle(&mut e),
        Variant::K5 => k5_middle(&mut e),
    }
    tail_part(&mut e);

    e.b.build().expect("reduction emits a well-formed problem")
}

fn selector_part(e: &mut Emitter) {
    let layout = e.layout.clone();
    let s1 = layout.selector(1);
    e.op(s1, RefTag::Set, None, &[], "0", "1");
    for i in 2..=layout.chain_len() {
        let s = layout.selector(i);
        e.op(s, RefTag::Set, None, &["0".into()], "0", "1");
        e.op(s, RefTag::Reset, None, &["1".into()], "1", "0");
    }
    let vs = layout.message();
    for m in BITS {
        e.op(vs, RefTag::Set, Some(m), &["0".into()], "x", &bit(m));
    }
    for m in BITS {
        e.op(vs, RefTag::Reset, Some(m), &["1".into()], &bit(m), "x");
    }
}

fn tail_part(e: &mut Emitter) {
    let layout = e.layout.clone();
    let ve = layout.end();
    match layout.variant {
        Variant::K11 => {
            let on: Vec<String> = ['a', 'b', 'g'].iter().flat_map(|&l| BITS.map(|m| sym(l, m))).collect();
            e.op(ve, RefTag::Set, None, &on, "0", "1");
            let off: Vec<String> = ["a_x", "c_x", "g_x"].map(String::from).to_vec();
            e.op(ve, RefTag::Reset, None, &off, "1", "0");
        }
        Variant::K7 => {
            let on: Vec<String> = ['a', 'b'].iter().flat_map(|&l| BITS.map(|m| sym(l, m))).collect();
            e.op(ve, RefTag::Set, None, &on, "0", "1");
            e.op(ve, RefTag::Reset, None, &["a_x".into(), "b_x".into()], "1", "0");
        }
        Variant::K5 => {
            for m in BITS {
                e.op(ve, RefTag::Set, Some(m), &[sym('b', m)], "0", "1");
            }
            e.op(ve, RefTag::Reset, None, &["a_x".into()], "1", "0");
        }
    }
    for i in 1..=layout.chain_len() {
        let v = layout.echo(i);
        e.op(v, RefTag::Set, None, &["1".into()], "0", "1");
        e.op(v, RefTag::Reset, None, &["0".into()], "1", "0");
    }
}

fn k11_middle(e: &mut Emitter) {
    let layout = e.layout.clone();
    let row = RefTag::Row;
    for i in 1..=layout.k {
        // v_i1 reacts to the first bit; its predecessor is v_s for i = 1 and
        // v_{(i-1)n} otherwise.
        let v = layout.middle(i, 1, 1);
        let on = |m: bool| -> Vec<String> {
            if i == 1 {
                vec![bit(m)]
            } else {
                vec![sym('a', m), sym('b', m), sym('g', m)]
            }
        };
        let off: Vec<String> = if i == 1 { vec!["x".into()] } else { ["a_x", "c_x", "g_x"].map(String::from).to_vec() };
        if e.sat(i, 1, true) {
            e.op(v, row(1), None, &on(true), "a_x", "g_1");
        } else {
            e.op(v, row(2), None, &on(true), "a_x", "b_1");
        }
        if e.sat(i, 1, false) {
            e.op(v, row(3), None, &on(false), "a_x", "g_0");
        } else {
            e.op(v, row(4), None, &on(false), "a_x", "b_0");
        }
        for m in BITS {
            e.op(v, row(5), Some(m), &on(m), "c_x", &sym('c', m));
        }
        for m in BITS {
            e.op(v, row(6), Some(m), &on(m), "g_x", &sym('g', m));
        }
        for m in BITS {
            e.op(v, row(7), Some(m), &off, &sym('b', m), "c_x");
        }
        for m in BITS {
            e.op(v, row(8), Some(m), &off, &sym('c', m), "c_x");
        }
        for m in BITS {
            e.op(v, row(9), Some(m), &off, &sym('g', m), "g_x");
        }

        for j in 2..=layout.n {
            let v = layout.middle(i, j, 1);
            if e.sat(i, j, true) {
                e.op(v, row(10), None, &["c_1".into()], "a_x", "g_1");
            } else {
                e.op(v, row(11), None, &["c_1".into()], "a_x", "b_1");
            }
            if e.sat(i, j, false) {
                e.op(v, row(12), None, &["c_0".into()], "a_x", "g_0");
            } else {
                e.op(v, row(13), None, &["c_0".into()], "a_x", "b_0");
            }
            for m in BITS {
                e.op(v, row(14), Some(m), &[sym('a', m), sym('b', m)], "a_x", &sym('a', m));
            }
            for m in BITS {
                e.op(v, row(15), Some(m), &[sym('g', m)], "a_x", &sym('g', m));
            }
            for m in BITS {
                e.op(v, row(16), Some(m), &[sym('c', m)], "c_x", &sym('c', m));
            }
            for m in BITS {
                e.op(v, row(17), Some(m), &[sym('c', m), sym('g', m)], "g_x", &sym('g', m));
            }
            for m in BITS {
                e.op(v, row(18), Some(m), &["a_x".into(), "c_x".into()], &sym('a', m), "a_x");
            }
            for m in BITS {
                e.op(v, row(19), Some(m), &["c_x".into()], &sym('b', m), "c_x");
            }
            for m in BITS {
                e.op(v, row(20), Some(m), &["c_x".into()], &sym('c', m), "c_x");
            }
            for m in BITS {
                e.op(v, row(21), Some(m), &["c_x".into(), "g_x".into()], &sym('g', m), "g_x");
            }
        }
    }
}

fn k5_middle(e: &mut Emitter) {
    let layout = e.layout.clone();
    let n = layout.n;
    let row = RefTag::Row;
    let ax = || vec!["a_x".to_string()];
    let bx = || vec!["b_x".to_string()];
    for i in 1..=layout.k {
        for j in 1..=n {
            let v1 = layout.middle(i, j, 1);
            if j == 1 && i == 1 {
                for m in BITS {
                    e.op(v1, row(1), Some(m), &[bit(m)], "a_x", &sym('a', m));
                }
                for m in BITS {
                    e.op(v1, row(2), Some(m), &["x".into()], &sym('a', m), "a_x");
                }
                for m in BITS {
                    e.op(v1, row(3), Some(m), &["x".into()], &sym('a', m), "b_x");
                }
            } else if j == 1 {
                for m in BITS {
                    e.op(v1, row(4), Some(m), &[sym('b', m)], "a_x", &sym('a', m));
                }
                for m in BITS {
                    e.op(v1, row(5), Some(m), &ax(), &sym('a', m), "a_x");
                }
                for m in BITS {
                    e.op(v1, row(6), Some(m), &ax(), &sym('a', m), "b_x");
                }
            } else {
                for m in BITS {
                    e.op(v1, row(7), Some(m), &[sym('a', m)], "a_x", &sym('a', m));
                }
                for m in BITS {
                    e.op(v1, row(8), Some(m), &ax(), &sym('a', m), "a_x");
                }
                for m in BITS {
                    e.op(v1, row(9), Some(m), &[sym('b', m)], "b_x", &sym('a', m));
                }
                for m in BITS {
                    e.op(v1, row(10), Some(m), &ax(), &sym('a', m), "b_x");
                }
            }

            let v2 = layout.middle(i, j, 2);
            // v_ij^2 checks bit number n - j + 1
            let checked = n - j + 1;
            if j < n {
                for m in BITS {
                    e.op(v2, row(11), Some(m), &[sym('a', m)], "a_x", &sym('a', m));
                }
                for m in BITS {
                    e.op(v2, row(12), Some(m), &ax(), &sym('a', m), "a_x");
                }
                for m in BITS {
                    e.op(v2, row(13), Some(m), &[sym('a', m)], "a_x", &sym('b', m));
                }
                if e.sat(i, checked, true) {
                    e.op(v2, row(14), None, &ax(), "b_1", "a_x");
                } else {
                    e.op(v2, row(15), None, &bx(), "b_1", "a_x");
                }
                if e.sat(i, checked, false) {
                    e.op(v2, row(16), None, &ax(), "b_0", "a_x");
                } else {
                    e.op(v2, row(17), None, &bx(), "b_0", "a_x");
                }
            } else {
                for m in BITS {
                    e.op(v2, row(18), Some(m), &[sym('a', m)], "a_x", &sym('b', m));
                }
                if e.sat(i, 1, true) {
                    e.op(v2, row(19), None, &ax(), "b_1", "a_x");
                } else {
                    e.op(v2, row(20), None, &bx(), "b_1", "a_x");
                }
                if e.sat(i, 1, false) {
                    e.op(v2, row(21), None, &ax(), "b_0", "a_x");
                } else {
                    e.op(v2, row(22), None, &bx(), "b_0", "a_x");
                }
            }
        }
    }
}

fn k7_middle(e: &mut Emitter) {
    let layout = e.layout.clone();
    let row = RefTag::Row;
    let one = |s: &str| vec![s.to_string()];
    for i in 1..=layout.k {
        for j in 1..=layout.n {
            let v1 = layout.middle(i, j, 1);
            if j == 1 {
                let on = |m: bool| -> Vec<String> {
                    if i == 1 {
                        vec![bit(m)]
                    } else {
                        vec![sym('a', m), sym('b', m)]
                    }
                };
                let off: Vec<String> = if i == 1 { one("x") } else { vec!["a_x".into(), "b_x".into()] };
                if e.sat(i, 1, true) {
                    e.op(v1, row(1), None, &on(true), "a_x", "g_x");
                } else {
                    e.op(v1, row(2), None, &on(true), "a_x", "b_1");
                }
                if e.sat(i, 1, false) {
                    e.op(v1, row(3), None, &on(false), "a_x", "g_x");
                } else {
                    e.op(v1, row(4), None, &on(false), "a_x", "b_0");
                }
                for m in BITS {
                    e.op(v1, row(5), Some(m), &on(m), "g_x", &sym('b', m));
                }
                for m in BITS {
                    e.op(v1, row(6), Some(m), &on(m), "b_x", &sym('b', m));
                }
                for m in BITS {
                    e.op(v1, row(7), Some(m), &off, &sym('b', m), "b_x");
                }
            } else {
                if e.sat(i, j, true) {
                    e.op(v1, row(8), None, &one("b_1"), "a_x", "g_x");
                } else {
                    e.op(v1, row(9), None, &one("b_1"), "a_x", "b_1");
                }
                if e.sat(i, j, false) {
                    e.op(v1, row(10), None, &one("b_0"), "a_x", "g_x");
                } else {
                    e.op(v1, row(11), None, &one("b_0"), "a_x", "b_0");
                }
                e.op(v1, row(12), None, &one("g_x"), "a_x", "g_x");
                for m in BITS {
                    e.op(v1, row(13), Some(m), &[sym('a', m)], "a_x", &sym('a', m));
                }
                for m in BITS {
                    e.op(v1, row(14), Some(m), &[sym('b', m)], "g_x", &sym('b', m));
                }
                for m in BITS {
                    e.op(v1, row(15), Some(m), &[sym('b', m)], "b_x", &sym('b', m));
                }
                for m in BITS {
                    e.op(v1, row(16), Some(m), &["a_x".into(), "b_x".into()], &sym('a', m), "a_x");
                }
                for m in BITS {
                    e.op(v1, row(17), Some(m), &one("b_x"), &sym('b', m), "b_x");
                }
            }

            let v2 = layout.middle(i, j, 2);
            for m in BITS {
                e.op(v2, row(18), Some(m), &[sym('a', m), sym('b', m)], "a_x", &sym('a', m));
            }
            e.op(v2, row(19), None, &one("g_x"), "a_x", "g_x");
            for m in BITS {
                e.op(v2, row(20), Some(m), &[sym('b', m)], "g_x", &sym('g', m));
            }
            for m in BITS {
                e.op(v2, row(21), Some(m), &[sym('b', m)], "b_x", &sym('a', m));
            }
            for m in BITS {
                e.op(v2, row(22), Some(m), &one("a_x"), &sym('a', m), "a_x");
            }
            for m in BITS {
                e.op(v2, row(23), Some(m), &one("b_x"), &sym('a', m), "b_x");
            }
            for m in BITS {
                e.op(v2, row(24), Some(m), &one("b_x"), &sym('g', m), "g_x");
            }

            let v3 = layout.middle(i, j, 3);
            for m in BITS {
                e.op(v3, row(25), Some(m), &[sym('a', m)], "a_x", &sym('a', m));
            }
            e.op(v3, row(26), None, &one("g_x"), "a_x", "g_x");
            for m in BITS {
                e.op(v3, row(27), Some(m), &[sym('g', m)], "g_x", &sym('b', m));
            }
            for m in BITS {
                e.op(v3, row(28), Some(m), &[sym('a', m), sym('g', m)], "b_x", &sym('b', m));
            }
            for m in BITS {
                e.op(v3, row(29), Some(m), &one("a_x"), &sym('a', m), "a_x");
            }
            for m in BITS {
                e.op(v3, row(30), Some(m), &one("b_x"), &sym('a', m), "b_x");
            }
            for m in BITS {
                e.op(v3, row(31), Some(m), &["b_x".into(), "g_x".into()], &sym('b', m), "b_x");
            }
        }
    }
}

/// Number of concrete operators `reduce(formula, variant)` produces.
pub fn operator_count(formula: &CnfFormula, variant: Variant) -> usize {
    reduce(formula, variant).operators().len()
}

/// Number of distinct `(variable, row, bit)` schemas, i.e. operators before
/// set-valued predecessor conditions are expanded.
pub fn schema_count(formula: &CnfFormula, variant: Variant) -> usize {
    let problem = reduce(formula, variant);
    let mut schemas: Vec<String> = problem
        .operators()
        .iter()
        .map(|op| op.id.parse::<OperatorRef>().expect("reduction ids parse").schema())
        .collect();
    schemas.sort();
    schemas.dedup();
    schemas.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{causal_graph, dtg, validate_chain};

    fn x1_or_x2() -> CnfFormula {
        CnfFormula::from_signed(2, &[&[1, 2]]).unwrap()
    }

    fn per_var_counts(problem: &PlanningProblem) -> Vec<(String, usize)> {
        problem
            .variables()
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.clone(), problem.operators_for(VariableId(i)).count()))
            .collect()
    }

    #[test]
    fn k11_example_variables() {
        let p = reduce(&x1_or_x2(), Variant::K11);
        let names: Vec<&str> = p.variables().iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, ["s1", "s2", "s3", "vs", "v1_1", "v1_2", "ve", "e1", "e2", "e3"]);
        // x̄1 ∉ C1 so row (4) exists and row (3) does not
        assert!(p.operator("v1_1/3").is_none());
        let op4 = p.operator("v1_1/4").unwrap();
        assert_eq!(op4.pre.bindings().len(), 2);
        assert_eq!(p.format_binding(op4.post), "v1_1=b_0");
        assert!(p.operator("v1_1/1").is_some());
        assert!(p.operator("v1_2/10").is_some());
        assert!(p.operator("v1_2/13").is_some());
    }

    #[test]
    fn causal_graph_is_the_chain() {
        let p = reduce(&x1_or_x2(), Variant::K11);
        let g = causal_graph(&p);
        let edges: Vec<(&str, &str)> =
            g.edges.iter().map(|e| (g.nodes[e.from].as_str(), g.nodes[e.to].as_str())).collect();
        assert_eq!(
            edges,
            [
                ("s1", "s2"),
                ("s2", "s3"),
                ("s3", "vs"),
                ("vs", "v1_1"),
                ("v1_1", "v1_2"),
                ("v1_2", "ve"),
                ("ve", "e1"),
                ("e1", "e2"),
                ("e2", "e3")
            ]
        );
        assert!(validate_chain(&p));
    }

    #[test]
    fn selector_and_message_dtgs() {
        let p = reduce(&x1_or_x2(), Variant::K11);
        let s1 = dtg(&p, p.variable_id("s1").unwrap());
        assert_eq!(s1.edges.len(), 1);
        let e = s1.edge("0", "1").unwrap();
        assert!(e.labels.is_empty());

        let vs = dtg(&p, p.variable_id("vs").unwrap());
        assert_eq!(vs.edges.len(), 4);
        for m in ["0", "1"] {
            assert_eq!(vs.edge("x", m).unwrap().labels, ["0".to_string()].into());
            assert_eq!(vs.edge(m, "x").unwrap().labels, ["1".to_string()].into());
        }
    }

    #[test]
    fn k11_operator_counts() {
        // two clauses so that v_21 exercises the set-valued predecessor rows
        let f = CnfFormula::from_signed(2, &[&[1, 2], &[-1]]).unwrap();
        let p = reduce(&f, Variant::K11);
        let counts = per_var_counts(&p);
        let get = |name: &str| counts.iter().find(|(n, _)| n == name).unwrap().1;
        assert_eq!(get("s1"), 1);
        assert_eq!(get("s2"), 2);
        assert_eq!(get("s3"), 2);
        assert_eq!(get("vs"), 4);
        // rows 1|2, 3|4, then 5..9 over m
        assert_eq!(get("v1_1"), 12);
        // same rows, each with the three-valued predecessor condition
        assert_eq!(get("v2_1"), 36);
        // 10|11, 12|13, then 14:4 15:2 16:2 17:4 18:4 19:2 20:2 21:4
        assert_eq!(get("v1_2"), 26);
        assert_eq!(get("v2_2"), 26);
        assert_eq!(get("ve"), 9);
        assert_eq!(get("e1"), 2);
        assert_eq!(get("e3"), 2);
        assert_eq!(operator_count(&f, Variant::K11), 1 + 2 + 2 + 4 + 12 + 36 + 26 + 26 + 9 + 6);
        // schemas: v1_1 12, v2_1 12, v_i2 18 each, ve 2
        assert_eq!(schema_count(&f, Variant::K11), 1 + 2 + 2 + 4 + 12 + 12 + 18 + 18 + 2 + 6);
    }

    #[test]
    fn k5_and_k7_operator_counts() {
        let f = x1_or_x2();
        let p = reduce(&f, Variant::K5);
        let counts = per_var_counts(&p);
        let get = |name: &str| counts.iter().find(|(n, _)| n == name).unwrap().1;
        assert_eq!(get("v1_1_1"), 6);
        assert_eq!(get("v1_1_2"), 8);
        assert_eq!(get("v1_2_1"), 8);
        assert_eq!(get("v1_2_2"), 4);
        assert_eq!(get("ve"), 3);

        let p = reduce(&f, Variant::K7);
        let counts = per_var_counts(&p);
        let get = |name: &str| counts.iter().find(|(n, _)| n == name).unwrap().1;
        assert_eq!(get("v1_1_1"), 2 + 6);
        // row 16 has a two-valued predecessor condition
        assert_eq!(get("v1_2_1"), 2 + 1 + 6 + 4 + 2);
        // row 18 has a two-valued predecessor condition
        assert_eq!(get("v1_1_2"), 4 + 1 + 10);
        assert_eq!(get("v1_1_3"), 2 + 1 + 2 + 4 + 2 + 2 + 4);
        assert_eq!(get("ve"), 6);
    }

    #[test]
    fn qualifier_rows_follow_literals() {
        let f = CnfFormula::from_signed(2, &[&[1, -1], &[]]).unwrap();
        let p = reduce(&f, Variant::K11);
        // tautological first clause: both g rows for x1
        assert!(p.operator("v1_1/1").is_some() && p.operator("v1_1/3").is_some());
        assert!(p.operator("v1_1/2").is_none() && p.operator("v1_1/4").is_none());
        // empty second clause: only b rows
        assert!(p.operator("v2_2/11").is_some() && p.operator("v2_2/13").is_some());
        assert!(p.operator("v2_2/10").is_none() && p.operator("v2_2/12").is_none());

        let p = reduce(&CnfFormula::from_signed(2, &[&[-2]]).unwrap(), Variant::K5);
        // v_11^2 checks x_2, v_12^2 checks x_1
        assert!(p.operator("v1_1_2/16").is_some() && p.operator("v1_1_2/15").is_some());
        assert!(p.operator("v1_2_2/20").is_some() && p.operator("v1_2_2/22").is_some());
    }

    #[test]
    fn operator_ref_round_trip() {
        for id in ["v1_2/14/m=0/p=b_0", "s1/set", "vs/reset/m=1", "ve/set/p=g_1", "v1_1_3/26"] {
            let r: OperatorRef = id.parse().unwrap();
            assert_eq!(r.to_string(), id);
        }
        let r: OperatorRef = "v1_2/14/m=0/p=b_0".parse().unwrap();
        assert_eq!(r.row(), Some(14));
        assert_eq!(r.schema(), "v1_2/14/m=0");
        assert!("v1/x".parse::<OperatorRef>().is_err());
        assert!("v1/3/p=a_0/m=1".parse::<OperatorRef>().is_err());
        assert!("/3".parse::<OperatorRef>().is_err());
    }

    #[test]
    fn n_equal_one_edge_case() {
        let f = CnfFormula::from_signed(1, &[&[1], &[-1]]).unwrap();
        for variant in Variant::ALL {
            let p = reduce(&f, variant);
            assert!(validate_chain(&p), "{variant}");
            assert_eq!(p.num_variables(), 4 + 2 * variant.layers());
        }
    }
}
