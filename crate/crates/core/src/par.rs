//! Work distribution. Native targets fan out across a rayon pool; wasm has
//! no threads, so the same helpers run sequentially there. Reductions are
//! exact integer sums, so results do not depend on the split.

#[cfg(not(target_arch = "wasm32"))]
pub(crate) fn map_reduce<T, R>(
    items: Vec<T>,
    map: impl Fn(&T) -> R + Sync,
    zero: impl Fn() -> R + Sync + Send,
    reduce: impl Fn(R, R) -> R + Sync + Send,
) -> R
where
    T: Send + Sync,
    R: Send,
{
    use rayon::prelude::*;
    items.par_iter().map(&map).reduce(&zero, &reduce)
}

#[cfg(target_arch = "wasm32")]
pub(crate) fn map_reduce<T, R>(
    items: Vec<T>,
    map: impl Fn(&T) -> R + Sync,
    zero: impl Fn() -> R + Sync + Send,
    reduce: impl Fn(R, R) -> R + Sync + Send,
) -> R
where
    T: Send + Sync,
    R: Send,
{
    items.iter().map(&map).fold(zero(), &reduce)
}

/// Wall-clock timing; wasm has no monotonic clock, so it reports zero there.
pub(crate) struct Stopwatch(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Stopwatch {
    pub(crate) fn start() -> Self {
        Stopwatch(
            #[cfg(not(target_arch = "wasm32"))]
            std::time::Instant::now(),
        )
    }

    pub(crate) fn elapsed_ms(&self) -> u128 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.0.elapsed().as_millis()
        }
        #[cfg(target_arch = "wasm32")]
        {
            0
        }
    }
}

/// Run `f` inside a pool of `workers` threads when requested (no-op on wasm).
#[cfg(not(target_arch = "wasm32"))]
pub(crate) fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

#[cfg(target_arch = "wasm32")]
pub(crate) fn with_workers<T: Send>(_workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    f()
}
