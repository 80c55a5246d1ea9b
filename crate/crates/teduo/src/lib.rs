//! Offline pipeline for learning language-conditioned policies on symbolic
//! gridworlds from unlabeled transition data.
//!
//! The pipeline runs in three stages over a dataset of raw `(x, a, x')`
//! transitions and a list of natural-language goals:
//!
//! 1. per-goal MDP construction: goal-conditioned state abstraction
//!    ([`abstraction`]) and hindsight reward labeling ([`labeling`]),
//! 2. offline policy learning: tabular Q-learning plus behavioral-cloning
//!    baselines ([`offline_rl`]),
//! 3. emission of a supervised fine-tuning dataset of optimal action
//!    sequences ([`sft`]).
//!
//! [`grid`] provides the deterministic environment and its textual state
//! format, [`goals`] the goal grammar and ground-truth predicates,
//! [`collect`] the data-collection policies, [`eval`] the online evaluation
//! harness, and [`pipeline`] the stage orchestration used by the CLI.

pub mod abstraction;
pub mod collect;
pub mod eval;
pub mod goals;
pub mod grid;
pub mod labeling;
pub mod offline_rl;
pub mod pipeline;
pub mod seeding;
pub mod sft;
