use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("illegal action {action:?} at heap position {heaps:?}")]
    IllegalAction { action: Vec<i64>, heaps: Vec<u32> },
    #[error("action {action:?} drives heap {heap} negative (invalid ruleset)")]
    NegativeHeap { action: Vec<i64>, heap: usize },
    #[error("move budget of {budget} exceeded")]
    BudgetExceeded { budget: usize },
    #[error("node budget of {budget} exceeded")]
    NodeBudgetExceeded { budget: usize },
    #[error("cycle detected in game graph")]
    CycleDetected,
    #[error("strategy profile undefined at a reached position")]
    ProfileUndefined,
    #[error("ruleset is not heap-size dynamic: {0}")]
    CumulationDependent(String),
    #[error("unknown preset: {0}")]
    UnknownPreset(String),
    #[error("invalid specification at `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("disjunctive sum requires a cyclic turn function in every component")]
    NonCyclicSum,
    #[error("infeasible component in disjunctive sum")]
    InfeasibleSum,
}

pub type Result<T> = std::result::Result<T, Error>;
