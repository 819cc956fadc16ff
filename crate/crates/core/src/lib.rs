//! Combinatorial-game engine for the generalized Ryuo Nim family: a rook-like
//! piece on a quarter-infinite board that also makes short diagonal steps,
//! and its restricted, pass-move and many-heap relatives.
//!
//! Every closed form in [`grundy`] and [`pass`] is paired with a brute-force
//! oracle that shares no code with it beyond move generation.

pub mod cli;
pub mod error;
pub mod game;
pub mod grundy;
pub mod pass;
pub mod service;
pub mod strategy;
pub mod table;

pub use error::{Error, Result};
pub use game::{
    legal_moves, legal_moves_pass, move_set, satisfies_necessary_condition, GameState, MoveSet,
    Offset, Outcome, PassPosition, Position, RuleSet,
};
pub use grundy::{
    grundy_brute_force, grundy_closed_form, grundy_custom_moveset, mex, necessary_condition_witness,
    nim_sum, verify_equivalence, GrundyCache, GrundyTable, Region, VerificationReport,
};
pub use pass::{classify_pass, outcome_backward_induction, pass_grundy_table, verify_pass_theorem};
pub use strategy::{best_moves, engine_move, outcome, MoveRecommendation};
