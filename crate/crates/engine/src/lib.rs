//! The abstract-domain engine: antichain representations, the weaken
//! operator, the LSet filtered-set data structure, and the least-fixpoint
//! computation via symbolic abstraction over bounded finite models.

pub mod antichain;
pub mod fixpoint;
pub mod lset;
pub mod report;
pub mod weaken;

pub use antichain::{min_antichain, represent, Antichain};
pub use fixpoint::{
    check_inductive, check_safety, find_cti, initial_states, lfp_symbolic_abstraction, reachable,
    successors, CtiCache, FixOpts, FixpointError, RunStats,
};
pub use lset::LSet;
pub use report::{RunReport, Timings};
pub use weaken::{
    abstract_states, weaken_formula, weaken_formula_with_stats, weaken_set, WeakenError,
    WeakenSetResult, WeakenStats,
};
