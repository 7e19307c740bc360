//! Summation of positive, monotonically decaying series.

use crate::error::{Error, Result};

/// Relative size of the first omitted term.
pub const RELATIVE_CUTOFF: f64 = 1e-16;

/// Hard cap on the number of terms of any auto-truncated series.
pub const MAX_TERMS: usize = 1_000_000;

/// Sums `term(start) + term(start + 1) + ...` until the next term falls below
/// `RELATIVE_CUTOFF` times the running sum.
///
/// Returns the sum and the number of terms that were added.
pub fn sum_decaying<F>(start: u64, mut term: F) -> Result<(f64, usize)>
where
    F: FnMut(u64) -> f64,
{
    let mut sum = 0.0f64;
    for count in 0..MAX_TERMS {
        let t = term(start + count as u64);
        // a zero term ends a decaying series even when the cutoff underflows
        if count > 0 && (t == 0.0 || t.abs() < RELATIVE_CUTOFF * sum.abs()) {
            return Ok((sum, count));
        }
        sum += t;
    }
    Err(Error::CutoffExceeded(MAX_TERMS))
}
