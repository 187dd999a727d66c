//! Exact oracle-call accounting.
//!
//! Counters are split into two families: calls made by the algorithm itself
//! (`sfo`, `ifo`, `lo`) and calls made only to evaluate the stationarity gap
//! (`gap_ifo`, `gap_lo`). Gap evaluation never touches the algorithm
//! columns, so per-run complexity predictions can be checked bit-exactly
//! against the algorithm counters alone.

/// Running tallies for one solver run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleCounters {
    /// Stochastic first-order oracle calls (fresh-sample gradients).
    pub sfo: u64,
    /// Incremental first-order oracle calls (component gradients).
    pub ifo: u64,
    /// Linear-oracle calls made by the algorithm.
    pub lo: u64,
    /// Gradient evaluations spent only on gap measurement.
    pub gap_ifo: u64,
    /// Linear-oracle calls spent only on gap measurement.
    pub gap_lo: u64,
}

impl OracleCounters {
    pub fn new() -> Self {
        Self::default()
    }

    /// Tally charging the algorithm columns.
    pub fn algo(&mut self) -> Tally<'_> {
        Tally {
            counters: self,
            gap: false,
        }
    }

    /// Tally charging the gap-evaluation columns. Gradient calls of either
    /// oracle kind land in `gap_ifo`; linear-oracle calls land in `gap_lo`.
    pub fn gap_eval(&mut self) -> Tally<'_> {
        Tally {
            counters: self,
            gap: true,
        }
    }
}

/// A borrowed view that routes increments to one counter family.
#[derive(Debug)]
pub struct Tally<'a> {
    counters: &'a mut OracleCounters,
    gap: bool,
}

impl Tally<'_> {
    pub fn ifo(&mut self, calls: u64) {
        if self.gap {
            self.counters.gap_ifo += calls;
        } else {
            self.counters.ifo += calls;
        }
    }

    pub fn sfo(&mut self, calls: u64) {
        if self.gap {
            self.counters.gap_ifo += calls;
        } else {
            self.counters.sfo += calls;
        }
    }

    pub fn lo(&mut self, calls: u64) {
        if self.gap {
            self.counters.gap_lo += calls;
        } else {
            self.counters.lo += calls;
        }
    }

    /// Reborrow, for passing down call chains without giving up the tally.
    pub fn reborrow(&mut self) -> Tally<'_> {
        Tally {
            counters: self.counters,
            gap: self.gap,
        }
    }
}
