use rayon::ThreadPoolBuilder;

/// Environment variable read by the CLI for the default worker count.
pub const WORKERS_ENV: &str = "SAWSET_WORKERS";

/// Runs `op` on a dedicated pool of `workers` threads (at least one).
pub fn install<R: Send>(workers: usize, op: impl FnOnce() -> R + Send) -> R {
    let pool = ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("failed to start worker pool");
    pool.install(op)
}
