//! Reductions from CNF-SAT to planning problems whose causal graph is a
//! directed chain, with plan validation, plan synthesis from satisfying
//! assignments and brute-force oracles for both sides.

pub mod cnf;
pub mod error;
pub mod format;
pub mod graph;
pub mod layout;
pub mod model;
pub mod oracle;
pub mod reduction;
pub mod runtime;
pub mod synthesis;

pub use cnf::{parse_dimacs, read_dimacs, Assignment, CnfError, CnfFormula, Literal};
pub use error::{LayoutError, ModelError, OracleError, ParseError, PlanError, RunError, SynthesisError};
pub use format::{parse_problem, write_problem};
pub use graph::{Edge, LabelledGraph};
pub use layout::{Layout, Role, Variant};
pub use model::{
    causal_graph, dtg, max_domain_size, validate_chain, Binding, Operator, PartialState, PlanningProblem,
    ProblemBuilder, State, Variable, VariableId,
};
pub use oracle::{
    bfs_plan_exists, sat_brute_force, verify_equivalence, EquivalenceReport, SearchLimits, SearchOutcome, SearchStats,
    Status, Verdict,
};
pub use reduction::{operator_count, reduce, schema_count, OperatorRef, RefTag};
pub use runtime::{change_counts, extract_message, is_admissible, run, solves, ChangeCounts, Plan, Trace};
pub use synthesis::{
    observe_sequences, predict_sequences, predicted_plan_length, satisficing_index, synthesize, synthesize_for,
    SequencePrediction,
};
