//! Parallel execution helpers.
//!
//! With the `parallel` feature (default) per-source loops run on rayon;
//! without it the same code runs sequentially. Results are collected in
//! input order either way, so both builds produce identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..count`, returning results in index order.
pub(crate) fn map_indexed<U, F>(count: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Cap rayon's global pool from the `CLANFORGE_THREADS` env var.
/// No-op in sequential builds or when the variable is unset.
pub fn init_thread_cap_from_env() {
    #[cfg(feature = "parallel")]
    if let Ok(val) = std::env::var("CLANFORGE_THREADS") {
        if let Ok(threads) = val.parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}
