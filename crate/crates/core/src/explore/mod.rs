//! Reproducible extremal searches around the open sharpness questions.
//!
//! Every search is a set of independent annealing restarts with seeds
//! derived from the budget seed, merged in restart order, so a fixed budget
//! reproduces its result bit for bit. Results carry a witness block matrix
//! from which the reported value can be recomputed.

mod anneal;
mod conj33;
mod q26;
mod q38;
mod search;

pub use crate::rng::derive_trial_seed;
pub use conj33::{search_conj33, search_conj33_with};
pub use q26::{search_q26, search_q26_with};
pub use q38::{q38_instance, scan_q38, Q38Row, Q38Table, Q38Witness, EXCESS_TOL, Q38_SCHEMA};
pub use search::{
    conj33_ratio, q26_gap, Checkpoint, HistoryPoint, SearchBudget, SearchResult, SearchWitness, CONJ33_OBJECTIVE,
    Q26_OBJECTIVE, SEARCH_SCHEMA,
};
