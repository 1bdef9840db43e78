//! Linear programming and seeded derivative-free search.

pub mod lp;
pub mod nelder_mead;
pub mod search;

pub use lp::{lp_solve, lp_solve_capped, LinearProgram, LpOutcome};
pub use nelder_mead::{nelder_mead, LocalMin};
pub use search::{
    maximize_over_ensembles_and_tests, minimize_over_tests, PairSearchResult, SearchConfig, TestFamily,
    TestSearchResult,
};
