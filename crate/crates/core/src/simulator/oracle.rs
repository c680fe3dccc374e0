use std::fmt;
use std::sync::Arc;

use super::LedgerTag;

type EvalFn = dyn Fn(u32) -> u32 + Send + Sync;

/// Classical function lifted to `|x⟩|y⟩ → |x⟩|y ⊕ eval(x)⟩`.
///
/// `charges` are added to the ledger once per invocation.
#[derive(Clone)]
pub struct OracleSpec {
    pub in_width: u32,
    pub out_width: u32,
    eval: Arc<EvalFn>,
    pub charges: Vec<(LedgerTag, u64)>,
}

impl OracleSpec {
    pub fn new(in_width: u32, out_width: u32, tag: LedgerTag, cost: u64, eval: impl Fn(u32) -> u32 + Send + Sync + 'static) -> Self {
        Self { in_width, out_width, eval: Arc::new(eval), charges: vec![(tag, cost)] }
    }

    /// Oracle backed by an explicit table indexed by input.
    pub fn from_table(in_width: u32, out_width: u32, tag: LedgerTag, cost: u64, table: Vec<u32>) -> Self {
        assert_eq!(table.len(), 1usize << in_width);
        let table = Arc::new(table);
        Self::new(in_width, out_width, tag, cost, move |x| table[x as usize])
    }

    pub fn with_charges(mut self, charges: Vec<(LedgerTag, u64)>) -> Self {
        self.charges = charges;
        self
    }

    #[inline]
    pub fn eval(&self, x: u32) -> u32 {
        (self.eval)(x)
    }
}

impl fmt::Debug for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleSpec")
            .field("in_width", &self.in_width)
            .field("out_width", &self.out_width)
            .field("charges", &self.charges)
            .finish_non_exhaustive()
    }
}
