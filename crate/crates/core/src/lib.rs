//! Desk-scale laboratory for quantum key-recovery attacks on sum-of-permutation
//! ciphers.
//!
//! The crate builds toy instances of Even-Mansour style constructions, turns them
//! into keyed families with hidden periods, and runs Simon, Grover,
//! Grover-meets-Simon, offline Simon and the truncated ("dedicated") attacks on
//! either a dense statevector simulator or a hybrid backend that samples the
//! same test statistics classically. Every oracle call is charged to a
//! [`QueryLedger`](simulator::QueryLedger), and every reported success is
//! checked against an exhaustive classical period oracle.
//!
//! Module map:
//!
//! - [`bitmath`]: GF(2) vectors and matrices, GF(2^w) arithmetic, invertible linear maps.
//! - [`simulator`]: register layouts, statevector, oracles, Grover diffusion, measurement, ledger.
//! - [`constructions`]: seeded permutations and the cipher/MAC instances under attack.
//! - [`periodics`]: keyed periodic families, coset truncation, brute-force period oracle.
//! - [`attacks`]: the attack procedures and their two backends.
//! - [`harness`]: closed-form bounds, experiment runner, comparison tables, reports.

pub mod attacks;
pub mod bitmath;
pub mod constructions;
pub mod error;
pub mod harness;
pub mod periodics;
pub mod simulator;
pub mod util;

pub use error::{Error, Result};
