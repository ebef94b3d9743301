//! Index-parallel evaluation with order-preserving collection.

use alloc::vec::Vec;

/// `(0..n).map(f).collect()`, spread over the rayon pool when the `parallel`
/// feature is on. Output order (and therefore every reduction done on it
/// afterwards) does not depend on the schedule.
pub(crate) fn map_indices<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
