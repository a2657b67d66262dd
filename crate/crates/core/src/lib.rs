//! Probabilistic termination workbench for pGCL.
//!
//! The crate bundles an exact small-step interpreter for pGCL (probabilistic
//! and nondeterministic choice over rational-valued variables), bounded
//! execution-tree analytics (termination probability, expected runtime,
//! expected time to reach a target set), a stochastic Hydra game with
//! ordinal ranks below epsilon-zero, checkers for ranking-supermartingale
//! maps and ordinal rank certificates, and program transformers that emit
//! Knievel-form programs.

pub mod certificates;
pub mod cli;
pub mod exploration;
pub mod hydra;
pub mod ordinal;
pub mod rational;
pub mod scheduling;
pub mod semantics;
pub mod syntax;
pub mod transforms;

pub use certificates::{
    check_proof_rule, check_rsm, in_loop_rsm_from_bound, lower_set, rsm_bound, RsmCert, RuleCert,
    Verdict,
};
pub use exploration::{
    ast_semicheck, build_tree, collapse_to_state_graph, exp_reach_runtime_bounds,
    exp_runtime_bounds, termination_prob_upto, ExecTree, Limits, RuntimeBounds, StateGraph,
};
pub use ordinal::Ordinal;
pub use rational::Rational;
pub use scheduling::{PartialSchedule, Scheduler};
pub use semantics::{step, Direction, ExecState, ProgramState, StepOutcome, Valuation};
pub use syntax::{parse, print, AExpr, BExpr, Program};
pub use transforms::{emit_ordinal_program, emit_tree_reduction, is_knievel, to_knievel, KnievelPolicy, TreeSpec};
