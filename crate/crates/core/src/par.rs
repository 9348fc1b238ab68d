//! Data-parallel map helpers.
//!
//! Every hot loop in the crate is a sweep of independent point evaluations
//! (residual grids, quadrature nodes, tangent directions).  [`map`] runs them
//! through rayon when the `parallel` feature (default) is enabled and falls
//! back to a plain loop otherwise; [`map_seq`] is always sequential and exists
//! so benches can compare both paths in one build.
//!
//! Results are collected in input order and reduced sequentially by callers,
//! so reports are byte-identical across thread counts and features.

/// Parallel (feature-gated) ordered map.
#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Send + Sync,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Sequential fallback used when the `parallel` feature is disabled.
#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Always-sequential ordered map (bench baseline).
pub fn map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Environment variable consulted for an explicit worker count.
pub const THREADS_ENV: &str = "TODA_THREADS";

/// Installs a global thread pool sized from [`THREADS_ENV`] when the variable
/// is set to a positive integer.  Without the `parallel` feature, or when the
/// variable is absent or malformed, this is a no-op.  Returns the applied
/// count, if any.
pub fn init_threads_from_env() -> Option<usize> {
    #[cfg(feature = "parallel")]
    {
        if let Ok(raw) = std::env::var(THREADS_ENV) {
            if let Ok(k) = raw.trim().parse::<usize>() {
                if k >= 1 {
                    // Ignore AlreadyInitialized: first caller wins.
                    let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
                    return Some(k);
                }
            }
        }
        None
    }
    #[cfg(not(feature = "parallel"))]
    {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_input_order() {
        let xs: Vec<i64> = (0..500).collect();
        let squared = map(&xs, |x| x * x);
        let reference = map_seq(&xs, |x| x * x);
        assert_eq!(squared, reference);
    }
}
