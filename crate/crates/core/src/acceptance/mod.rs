//! Exact acceptance on lasso traces, the reference semantics it is checked
//! against, and the randomized comparison between the two.

mod fuzz;
mod lasso;
mod oracle;

pub use fuzz::{
    case_rng, fuzz_compare, random_formula, random_lasso, random_message, random_trace, FuzzBounds,
    FuzzCase, FuzzFailure, FuzzReport,
};
pub use lasso::{
    lasso_accepts, lasso_accepts_with_limit, AcceptanceError, BreakpointState, LassoOutcome,
    LassoStats, DEFAULT_STATE_LIMIT,
};
pub use oracle::{oracle_eval, Oracle, OracleError, OracleStats};
