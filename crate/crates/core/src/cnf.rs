//! CNF formulas, assignments and DIMACS I/O.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use thiserror::Error;

use crate::error::ParseError;

/// Literal over a 1-based variable index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", if self.positive { "" } else { "~" }, self.var)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("formula needs at least one variable")]
    NoVariables,
    #[error("formula needs at least one clause")]
    NoClauses,
    #[error("literal on x{var} exceeds variable count {n}")]
    LiteralOutOfRange { var: usize, n: usize },
}

/// Conjunction of clauses `C_1 .. C_k` over variables `x_1 .. x_n`.
/// Clauses are literal sets; empty and tautological clauses are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    n: usize,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    /// Duplicate literals within a clause are dropped, keeping first occurrences.
    pub fn new(n: usize, clauses: Vec<Vec<Literal>>) -> Result<Self, CnfError> {
        if n == 0 {
            return Err(CnfError::NoVariables);
        }
        if clauses.is_empty() {
            return Err(CnfError::NoClauses);
        }
        let clauses = clauses
            .into_iter()
            .map(|clause| {
                let mut out: Vec<Literal> = Vec::with_capacity(clause.len());
                for lit in clause {
                    if lit.var == 0 || lit.var > n {
                        return Err(CnfError::LiteralOutOfRange { var: lit.var, n });
                    }
                    if !out.contains(&lit) {
                        out.push(lit);
                    }
                }
                Ok(out)
            })
            .collect::<Result<_, _>>()?;
        Ok(CnfFormula { n, clauses })
    }

    /// Builds from signed DIMACS-style integers.
    pub fn from_signed(n: usize, clauses: &[&[i64]]) -> Result<Self, CnfError> {
        Self::new(
            n,
            clauses
                .iter()
                .map(|c| c.iter().map(|&l| Literal { var: l.unsigned_abs() as usize, positive: l > 0 }).collect())
                .collect(),
        )
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    /// Clause `C_i`, 1-based.
    pub fn clause(&self, i: usize) -> &[Literal] {
        &self.clauses[i - 1]
    }

    /// Whether setting `x_j := bit` satisfies clause `C_i` (both 1-based):
    /// `x_j ∈ C_i` for bit 1, `¬x_j ∈ C_i` for bit 0.
    pub fn literal_satisfies(&self, i: usize, j: usize, bit: bool) -> bool {
        self.clause(i).contains(&Literal { var: j, positive: bit })
    }

    pub fn evaluate(&self, assignment: &Assignment) -> bool {
        assert_eq!(assignment.len(), self.n, "assignment arity");
        self.clauses.iter().all(|clause| clause.iter().any(|l| assignment.get(l.var) == l.positive))
    }

    /// Canonical DIMACS text.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.n, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> = c.iter().map(Literal::to_string).collect();
                format!("({})", lits.join(" | "))
            })
            .collect();
        f.write_str(&rendered.join(" & "))
    }
}

/// Truth values `σ(x_1) .. σ(x_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    /// The `index`-th assignment of `n` bits in lexicographic order, `x_1`
    /// being the most significant bit.
    pub fn from_index(n: usize, index: u64) -> Self {
        Assignment { bits: (0..n).map(|j| (index >> (n - 1 - j)) & 1 == 1).collect() }
    }

    /// Value of `x_j`, 1-based.
    pub fn get(&self, j: usize) -> bool {
        self.bits[j - 1]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Assignment {
    type Err = ParseError;

    /// One line of `0`/`1` characters; surrounding whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let line = s.trim();
        if line.is_empty() || line.contains('\n') {
            return Err(ParseError::new(1, "expected one line of 0/1 characters"));
        }
        let bits = line
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(ParseError::new(1, format!("unexpected character `{other}`"))),
            })
            .collect::<Result<_, _>>()?;
        Ok(Assignment { bits })
    }
}

pub fn read_dimacs<R: Read>(mut reader: R) -> Result<CnfFormula, ParseError> {
    let mut text = String::new();
    reader.read_to_string(&mut text).map_err(|e| ParseError::new(0, e.to_string()))?;
    parse_dimacs(&text)
}

/// Parses `p cnf <n> <k>` followed by `k` zero-terminated clauses. Clauses may
/// span lines; `c` lines are comments and a `%` line ends the input.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut open_line = 0;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        last_line = line_no;
        if line.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::new(line_no, "duplicate header"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields[..] {
                ["p", "cnf", n, k] => n.parse::<usize>().ok().zip(k.parse::<usize>().ok()),
                _ => None,
            };
            let (n, k) = parsed.ok_or_else(|| {
                ParseError::new(line_no, format!("malformed header `{line}`, expected `p cnf <n> <k>`"))
            })?;
            if n == 0 || k == 0 {
                return Err(ParseError::new(line_no, "header needs n >= 1 and k >= 1"));
            }
            header = Some((n, k));
            continue;
        }
        let (n, k) = header.ok_or_else(|| ParseError::new(line_no, "clause before `p cnf` header"))?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| ParseError::new(line_no, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                if clauses.len() == k {
                    return Err(ParseError::new(line_no, format!("more than {k} clauses")));
                }
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > n {
                return Err(ParseError::new(line_no, format!("literal {lit} exceeds variable count {n}")));
            }
            if current.is_empty() {
                open_line = line_no;
            }
            let l = Literal { var, positive: lit > 0 };
            if !current.contains(&l) {
                current.push(l);
            }
        }
    }

    let (n, k) = header.ok_or_else(|| ParseError::new(last_line.max(1), "missing `p cnf` header"))?;
    if !current.is_empty() {
        return Err(ParseError::new(open_line, "clause missing terminating 0"));
    }
    if clauses.len() != k {
        return Err(ParseError::new(last_line, format!("header declares {k} clauses, found {}", clauses.len())));
    }
    CnfFormula::new(n, clauses).map_err(|e| ParseError::new(last_line, e.to_string()))
}
