//! Coined quantum walk on a line: the ideal reference walks and the
//! STIRAP-driven dot array.

mod array;
mod ideal;
mod state;

pub use array::{
    initial_state, run_walk, run_walk_with, stirap_step, stirap_step_with, walk_nodes, OperatorSource, StepOperators,
    StirapParams,
};
pub(crate) use array::run_walk_source;
pub use ideal::{ideal_states, ideal_step, ideal_walk, ideal_walk_u, ideal_walk_utilde, WalkOperator};
pub use state::{
    compare, measure, ArrayState, BarrierPhase, Comparison, Distribution, DistributionMeta, InitialCondition, Level,
};
