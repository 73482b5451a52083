//! Oracle query accounting.

use std::sync::atomic::{AtomicU64, Ordering};

/// Per-constraint oracle query counter.
///
/// One evaluation of one normalised constraint on one set costs exactly
/// one query. Derived oracles (removal restrictions, sums) charge the
/// base constraint they wrap, so slot `i` always reads "how often was
/// information about `f_i` requested". Increments are atomic; the ledger
/// can be shared across threads evaluating gains concurrently.
#[derive(Debug)]
pub struct QueryLedger {
    counts: Vec<AtomicU64>,
}

impl QueryLedger {
    /// Ledger with `m` constraint slots, all zero.
    pub fn new(m: usize) -> Self {
        QueryLedger {
            counts: (0..m).map(|_| AtomicU64::new(0)).collect(),
        }
    }

    /// Number of slots.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Record one query against `slot`.
    pub fn charge(&self, slot: usize) {
        self.counts[slot].fetch_add(1, Ordering::Relaxed);
    }

    /// Queries charged to `slot` so far.
    pub fn count(&self, slot: usize) -> u64 {
        self.counts[slot].load(Ordering::Relaxed)
    }

    /// Copy of all per-slot counts.
    pub fn snapshot(&self) -> Vec<u64> {
        self.counts.iter().map(|c| c.load(Ordering::Relaxed)).collect()
    }

    /// Sum over all slots.
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|c| c.load(Ordering::Relaxed)).sum()
    }

    /// Zero every slot.
    pub fn reset(&self) {
        for c in &self.counts {
            c.store(0, Ordering::Relaxed);
        }
    }

    /// Per-slot difference against an earlier [`QueryLedger::snapshot`].
    pub fn delta(&self, before: &[u64]) -> Vec<u64> {
        debug_assert_eq!(before.len(), self.counts.len());
        self.counts
            .iter()
            .zip(before)
            .map(|(c, b)| c.load(Ordering::Relaxed) - b)
            .collect()
    }
}
