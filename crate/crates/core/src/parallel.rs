//! Worker-count control for the per-attribute and per-run parallelism.

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "FROD_THREADS";

/// Reads the thread cap from the environment; unset, empty or zero means no cap.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs `f` on a dedicated pool with `threads` workers, or on the global pool when `None`.
#[cfg(feature = "parallel")]
pub fn with_threads<R, F>(threads: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R, F>(_threads: Option<usize>, f: F) -> R
where
    F: FnOnce() -> R,
{
    f()
}
