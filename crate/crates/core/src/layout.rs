//! Variable roles of a reduced problem and their chain positions.

use std::fmt;
use std::str::FromStr;

use crate::error::LayoutError;
use crate::model::{PlanningProblem, VariableId};

/// Which construction a problem comes from, named after its domain bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    K11,
    K7,
    K5,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::K5, Variant::K7, Variant::K11];

    /// Middle variables per `(clause, position)` pair.
    pub fn layers(self) -> usize {
        match self {
            Variant::K11 => 1,
            Variant::K7 => 3,
            Variant::K5 => 2,
        }
    }

    pub fn domain_bound(self) -> usize {
        match self {
            Variant::K11 => 11,
            Variant::K7 => 7,
            Variant::K5 => 5,
        }
    }

    /// Middle variables count subscript changes instead of value changes.
    pub fn counts_subscripts(self) -> bool {
        self == Variant::K7
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K{}", self.domain_bound())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim_start_matches(['K', 'k']) {
            "11" => Ok(Variant::K11),
            "7" => Ok(Variant::K7),
            "5" => Ok(Variant::K5),
            _ => Err(format!("unknown variant `{s}`, expected 5, 7 or 11")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    /// `s_i`, `i ∈ [1..2n-1]`.
    Selector(usize),
    /// `v_s`, the variable emitting the message.
    Message,
    /// `v_ij` (K11, layer 1) or `v_ij^l`.
    Middle { clause: usize, position: usize, layer: usize },
    /// `v_e`.
    End,
    /// `e_i`, `i ∈ [1..2n-1]`.
    Echo(usize),
}

impl Role {
    pub fn is_middle(self) -> bool {
        matches!(self, Role::Middle { .. })
    }
}

/// Chain layout of a reduced problem with `n` formula variables and `k`
/// clauses: `s_1..s_{2n-1}, v_s, middle..., v_e, e_1..e_{2n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub variant: Variant,
    pub n: usize,
    pub k: usize,
}

impl Layout {
    pub fn new(variant: Variant, n: usize, k: usize) -> Self {
        assert!(n >= 1 && k >= 1, "layout needs n, k >= 1");
        Layout { variant, n, k }
    }

    pub fn chain_len(&self) -> usize {
        2 * self.n - 1
    }

    pub fn num_middle(&self) -> usize {
        self.k * self.n * self.variant.layers()
    }

    pub fn num_variables(&self) -> usize {
        4 * self.n + self.num_middle()
    }

    pub fn selector(&self, i: usize) -> VariableId {
        debug_assert!((1..=self.chain_len()).contains(&i));
        VariableId(i - 1)
    }

    pub fn message(&self) -> VariableId {
        VariableId(self.chain_len())
    }

    /// `v_ij^l`, all indices 1-based; `layer` is 1 for K11.
    pub fn middle(&self, clause: usize, position: usize, layer: usize) -> VariableId {
        debug_assert!((1..=self.k).contains(&clause));
        debug_assert!((1..=self.n).contains(&position));
        debug_assert!((1..=self.variant.layers()).contains(&layer));
        let layers = self.variant.layers();
        VariableId(2 * self.n + ((clause - 1) * self.n + position - 1) * layers + layer - 1)
    }

    pub fn last_middle(&self) -> VariableId {
        self.middle(self.k, self.n, self.variant.layers())
    }

    pub fn end(&self) -> VariableId {
        VariableId(2 * self.n + self.num_middle())
    }

    pub fn echo(&self, i: usize) -> VariableId {
        debug_assert!((1..=self.chain_len()).contains(&i));
        VariableId(2 * self.n + self.num_middle() + i)
    }

    pub fn roles(&self) -> Vec<Role> {
        let mut roles: Vec<Role> = (1..=self.chain_len()).map(Role::Selector).collect();
        roles.push(Role::Message);
        for clause in 1..=self.k {
            for position in 1..=self.n {
                for layer in 1..=self.variant.layers() {
                    roles.push(Role::Middle { clause, position, layer });
                }
            }
        }
        roles.push(Role::End);
        roles.extend((1..=self.chain_len()).map(Role::Echo));
        roles
    }

    pub fn role(&self, var: VariableId) -> Role {
        let i = var.0;
        let chain = self.chain_len();
        let mid = self.num_middle();
        if i < chain {
            Role::Selector(i + 1)
        } else if i == chain {
            Role::Message
        } else if i < chain + 1 + mid {
            let offset = i - chain - 1;
            let layers = self.variant.layers();
            Role::Middle {
                clause: offset / (self.n * layers) + 1,
                position: (offset / layers) % self.n + 1,
                layer: offset % layers + 1,
            }
        } else if i == chain + 1 + mid {
            Role::End
        } else {
            Role::Echo(i - chain - 1 - mid)
        }
    }

    pub fn name(&self, role: Role) -> String {
        match role {
            Role::Selector(i) => format!("s{i}"),
            Role::Message => "vs".to_string(),
            Role::Middle { clause, position, .. } if self.variant == Variant::K11 => {
                format!("v{clause}_{position}")
            }
            Role::Middle { clause, position, layer } => format!("v{clause}_{position}_{layer}"),
            Role::End => "ve".to_string(),
            Role::Echo(i) => format!("e{i}"),
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.roles().into_iter().map(|r| self.name(r)).collect()
    }

    /// Recovers the layout from variable names and order.
    pub fn infer(problem: &PlanningProblem) -> Result<Self, LayoutError> {
        let names: Vec<&str> = problem.variables().iter().map(|v| v.name.as_str()).collect();
        let selectors = names.iter().take_while(|s| is_indexed(s, 's')).count();
        if selectors == 0 || selectors % 2 == 0 {
            return Err(LayoutError::Unrecognised(format!(
                "expected an odd number of leading s<i> variables, found {selectors}"
            )));
        }
        let n = selectors.div_ceil(2);
        let middle =
            names.len().checked_sub(4 * n).filter(|&m| m > 0).ok_or_else(|| {
                LayoutError::Unrecognised(format!("{} variables is too few for n = {n}", names.len()))
            })?;
        let first_middle = names.get(2 * n).copied().unwrap_or_default();
        let underscores = first_middle.matches('_').count();
        let layers = match underscores {
            1 => 1,
            2 => names[2 * n..2 * n + middle]
                .iter()
                .filter_map(|s| s.rsplit('_').next()?.parse::<usize>().ok())
                .max()
                .unwrap_or(0),
            _ => 0,
        };
        let variant = match layers {
            1 => Variant::K11,
            2 => Variant::K5,
            3 => Variant::K7,
            _ => {
                return Err(LayoutError::Unrecognised(format!(
                    "cannot tell the construction from middle variable `{first_middle}`"
                )))
            }
        };
        if middle % (n * layers) != 0 {
            return Err(LayoutError::Unrecognised(format!(
                "{middle} middle variables is not a multiple of n * layers = {}",
                n * layers
            )));
        }
        let layout = Layout::new(variant, n, middle / (n * layers));
        let expected = layout.names();
        if let Some((i, (want, got))) = expected.iter().zip(&names).enumerate().find(|(_, (w, g))| w.as_str() != **g) {
            return Err(LayoutError::Unrecognised(format!("variable {i} is `{got}`, expected `{want}`")));
        }
        Ok(layout)
    }
}

fn is_indexed(name: &str, prefix: char) -> bool {
    name.strip_prefix(prefix).is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}
