use std::cell::Cell;

thread_local! {
    static PAIRINGS: Cell<u64> = const { Cell::new(0) };
    static MSM_CALLS: Cell<u64> = const { Cell::new(0) };
    static MSM_TERMS: Cell<u64> = const { Cell::new(0) };
    static LAST_MSM_LEN: Cell<u64> = const { Cell::new(0) };
}

/// Per-thread operation counters for pairings and MSMs.
///
/// Counters are thread-local so concurrently running tests do not observe each
/// other's work.
pub struct Counters;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CounterSnapshot {
    /// Number of Miller loops evaluated (one per pair in a pairing product).
    pub pairings: u64,
    pub msm_calls: u64,
    pub msm_terms: u64,
    pub last_msm_len: u64,
}

impl Counters {
    pub fn reset() {
        PAIRINGS.with(|c| c.set(0));
        MSM_CALLS.with(|c| c.set(0));
        MSM_TERMS.with(|c| c.set(0));
        LAST_MSM_LEN.with(|c| c.set(0));
    }

    pub fn snapshot() -> CounterSnapshot {
        CounterSnapshot {
            pairings: PAIRINGS.with(Cell::get),
            msm_calls: MSM_CALLS.with(Cell::get),
            msm_terms: MSM_TERMS.with(Cell::get),
            last_msm_len: LAST_MSM_LEN.with(Cell::get),
        }
    }

    pub(crate) fn record_pairings(n: u64) {
        PAIRINGS.with(|c| c.set(c.get() + n));
    }

    pub(crate) fn record_msm(len: u64) {
        MSM_CALLS.with(|c| c.set(c.get() + 1));
        MSM_TERMS.with(|c| c.set(c.get() + len));
        LAST_MSM_LEN.with(|c| c.set(len));
    }
}
