//! The `CHAINPLAN 1` text format for planning problems.
//!
//! ```text
//! CHAINPLAN 1
//! VAR <name> <sym1> <sym2> ...
//! INIT <sym for var 1> <sym for var 2> ...
//! GOAL <name>=<sym> ...
//! OP <id> | PRE <name>=<sym>[,<name>=<sym>] | POST <name>=<sym>
//! ```
//!
//! `PRE -` (and `GOAL -`) denote an empty partial state. `#` starts a comment.

use std::fmt::Write;

use crate::error::ParseError;
use crate::model::{Binding, Operator, PartialState, PlanningProblem, State, Variable, VariableId};

pub const HEADER: &str = "CHAINPLAN 1";

pub fn write_problem(problem: &PlanningProblem) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for var in problem.variables() {
        let _ = writeln!(out, "VAR {} {}", var.name, var.domain.join(" "));
    }
    let init: Vec<&str> =
        problem.variables().iter().enumerate().map(|(i, _)| problem.value_of(problem.init(), VariableId(i))).collect();
    let _ = writeln!(out, "INIT {}", init.join(" "));
    let _ = writeln!(out, "GOAL {}", partial(problem, problem.goal(), " "));
    for op in problem.operators() {
        let _ = writeln!(
            out,
            "OP {} | PRE {} | POST {}",
            op.id,
            partial(problem, &op.pre, ","),
            problem.format_binding(op.post)
        );
    }
    out
}

fn partial(problem: &PlanningProblem, p: &PartialState, sep: &str) -> String {
    if p.is_empty() {
        return "-".to_string();
    }
    p.bindings().iter().map(|&b| problem.format_binding(b)).collect::<Vec<_>>().join(sep)
}

pub fn parse_problem(text: &str) -> Result<PlanningProblem, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((_, l)) if l.split_whitespace().collect::<Vec<_>>() == ["CHAINPLAN", "1"] => {}
        Some((n, l)) => return Err(ParseError::new(n, format!("expected `{HEADER}`, found `{l}`"))),
        None => return Err(ParseError::new(1, "empty input")),
    }

    let mut variables: Vec<Variable> = Vec::new();
    let mut init: Option<Vec<u8>> = None;
    let mut goal: Option<PartialState> = None;
    let mut operators = Vec::new();
    let mut last_line = 1;

    for (n, line) in lines {
        last_line = n;
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "VAR" => {
                if init.is_some() || goal.is_some() || !operators.is_empty() {
                    return Err(ParseError::new(n, "VAR after INIT/GOAL/OP"));
                }
                let mut tokens = rest.split_whitespace();
                let name = tokens.next().ok_or_else(|| ParseError::new(n, "VAR without name"))?;
                let domain: Vec<String> = tokens.map(str::to_string).collect();
                variables.push(Variable { name: name.to_string(), domain });
            }
            "INIT" => {
                if init.is_some() {
                    return Err(ParseError::new(n, "duplicate INIT"));
                }
                let symbols: Vec<&str> = rest.split_whitespace().collect();
                if symbols.len() != variables.len() {
                    return Err(ParseError::new(
                        n,
                        format!("INIT has {} values for {} variables", symbols.len(), variables.len()),
                    ));
                }
                let values = variables
                    .iter()
                    .zip(&symbols)
                    .map(|(v, s)| {
                        v.value_index(s)
                            .ok_or_else(|| ParseError::new(n, format!("`{s}` not in domain of `{}`", v.name)))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                init = Some(values);
            }
            "GOAL" => {
                if goal.is_some() {
                    return Err(ParseError::new(n, "duplicate GOAL"));
                }
                let bindings = if rest == "-" || rest.is_empty() {
                    Vec::new()
                } else {
                    rest.split_whitespace().map(|tok| binding(&variables, tok, n)).collect::<Result<_, _>>()?
                };
                goal = Some(PartialState::new(bindings).map_err(|e| ParseError::new(n, e.to_string()))?);
            }
            "OP" => operators.push(parse_operator(&variables, rest, n)?),
            other => return Err(ParseError::new(n, format!("unknown keyword `{other}`"))),
        }
    }

    let init = init.ok_or_else(|| ParseError::new(last_line, "missing INIT"))?;
    PlanningProblem::new(variables, State::from_indices(init), goal.unwrap_or_default(), operators)
        .map_err(|e| ParseError::new(last_line, e.to_string()))
}

fn parse_operator(variables: &[Variable], rest: &str, n: usize) -> Result<Operator, ParseError> {
    let parts: Vec<&str> = rest.split('|').map(str::trim).collect();
    let [id, pre, post] = parts[..] else {
        return Err(ParseError::new(n, "expected `OP <id> | PRE ... | POST ...`"));
    };
    if id.is_empty() || id.contains(char::is_whitespace) {
        return Err(ParseError::new(n, format!("bad operator id `{id}`")));
    }
    let pre = pre.strip_prefix("PRE").ok_or_else(|| ParseError::new(n, "missing PRE"))?.trim();
    let post = post.strip_prefix("POST").ok_or_else(|| ParseError::new(n, "missing POST"))?.trim();
    let pre_bindings = if pre == "-" {
        Vec::new()
    } else {
        pre.split(',').map(|tok| binding(variables, tok.trim(), n)).collect::<Result<Vec<_>, _>>()?
    };
    if post.contains(',') || post.contains(char::is_whitespace) {
        return Err(ParseError::new(n, "POST must bind exactly one variable"));
    }
    Ok(Operator {
        id: id.to_string(),
        pre: PartialState::new(pre_bindings).map_err(|e| ParseError::new(n, e.to_string()))?,
        post: binding(variables, post, n)?,
    })
}

fn binding(variables: &[Variable], token: &str, n: usize) -> Result<Binding, ParseError> {
    let (name, sym) =
        token.split_once('=').ok_or_else(|| ParseError::new(n, format!("expected <name>=<sym>, found `{token}`")))?;
    let var = variables
        .iter()
        .position(|v| v.name == name)
        .ok_or_else(|| ParseError::new(n, format!("unknown variable `{name}`")))?;
    let value = variables[var]
        .value_index(sym)
        .ok_or_else(|| ParseError::new(n, format!("`{sym}` not in domain of `{name}`")))?;
    Ok(Binding { var: VariableId(var), value })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
# a two-variable chain
CHAINPLAN 1
VAR p 0 1
VAR q 0 1 x   # trailing comment
INIT 0 x
GOAL q=1
OP p/set | PRE - | POST p=1
OP q/set | PRE p=1,q=x | POST q=1
";

    #[test]
    fn parse_and_print() {
        let p = parse_problem(SMALL).unwrap();
        assert_eq!(p.num_variables(), 2);
        assert_eq!(p.operators().len(), 2);
        assert!(p.operator("p/set").unwrap().pre.is_empty());
        let printed = write_problem(&p);
        assert_eq!(
            printed,
            "CHAINPLAN 1\nVAR p 0 1\nVAR q 0 1 x\nINIT 0 x\nGOAL q=1\n\
             OP p/set | PRE - | POST p=1\nOP q/set | PRE p=1,q=x | POST q=1\n"
        );
        assert_eq!(parse_problem(&printed).unwrap(), p);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = SMALL.replace("GOAL q=1", "GOAL q=7");
        assert_eq!(parse_problem(&bad).unwrap_err().line, 6);
        let bad = SMALL.replace("INIT 0 x", "INIT 0");
        assert_eq!(parse_problem(&bad).unwrap_err().line, 5);
        let bad = SMALL.replace("POST q=1", "POST q=1,p=0");
        assert_eq!(parse_problem(&bad).unwrap_err().line, 8);
        let bad = SMALL.replace("CHAINPLAN 1", "CHAINPLAN 2");
        assert_eq!(parse_problem(&bad).unwrap_err().line, 2);
        assert!(parse_problem("").is_err());
        let bad = SMALL.replace("OP p/set", "OP q/set");
        assert!(parse_problem(&bad).unwrap_err().message.contains("duplicate operator"));
    }
}
