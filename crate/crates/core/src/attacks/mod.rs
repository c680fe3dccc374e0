//! Key-recovery attacks built from Simon's algorithm and Grover search.
//!
//! Every attack works on a keyed family `f(i, x)` from [`crate::periodics`],
//! optionally truncated to `F`. The search wants an index whose row is
//! periodic; the rank test on `c′` Simon vectors marks it.
//!
//! | attack | oracle access | search body |
//! |---|---|---|
//! | [`grover_meets_simon`] | superposition | Simon test, phase flip, uncompute |
//! | [`dedicated_attack`] | superposition | phase flip, reflection about the Simon state |
//! | [`offline_simon`], [`offline_dedicated_attack`] | preparation only | public-term test on a prepared state |
//!
//! Two backends run every attack. [`Backend::Statevector`] applies every gate
//! and needs the whole register budget within [`crate::simulator::MAX_QUBITS`].
//! [`Backend::Hybrid`] samples the exact Simon statistics of each row, flags
//! rows by the rank test and samples the Grover outcome from the closed form.
//! Both charge the ledger identically.
//!
//! A run reports success only when the measured index and solved period
//! match the exhaustive period report of `F`.
//!
//! Ledger convention: one application of `U_F` costs `F.oracle_cost`
//! encryption queries (`2^t`) and `F.public_cost` public evaluations. The Simon
//! test counts both its compute and its uncompute. Each attack ends with a
//! final Simon pass of `c′` applications on the measured index.

mod config;
mod engine;
mod grover;
mod offline;
mod online;
mod prepare;
mod result;
mod simon;
mod stage2;

pub use config::{AttackConfig, Backend, IterationPolicy, Model};
pub use engine::{statevector_flag_probabilities, uncompute_fidelity, AttackSetup};
pub use grover::{grover_search, iterations, success_probability};
pub use offline::{offline_dedicated_attack, offline_simon, run_offline, run_offline_dedicated, run_offline_simon};
pub use online::{dedicated_attack, grover_meets_simon, run_dedicated, run_grover_meets_simon, simon_attack};
pub use prepare::{
    copies_layout, prepare_psi_g_q1, prepare_psi_g_q2, synthesize, ClassicalCache, PreparedState, Provenance,
};
pub use result::{AttackKind, AttackResult, FullRecovery};
pub use simon::{flag_probability, rank_flags, simon_recover, simon_samples, solve_period, SimonProblem, SimonSampler};
pub use stage2::{full_key_attack, recover_remaining_bits};
