//! Dense statevector simulation over named registers.
//!
//! Basis index layout is big-endian by register: the first register in a
//! [`RegisterLayout`] occupies the most significant index bits, and inside a
//! register bit `width - 1` is the most significant. Oracles act as
//! `|x⟩|y⟩ → |x⟩|y ⊕ f(x)⟩` and charge a [`QueryLedger`] on every invocation.

mod layout;
mod ledger;
mod oracle;
mod state;

pub use layout::{Register, RegisterLayout, MAX_QUBITS};
pub use ledger::{LedgerDelta, LedgerTag, QueryLedger};
pub use oracle::OracleSpec;
pub use state::{QState, Reference};
