//! Data-parallel map over independent work items, with a sequential
//! fallback when the `parallel` feature is off. Results are always returned
//! in item order, so reductions over them do not depend on scheduling.

/// Map `f` over `0..n` with one `init()` state per worker.
pub fn map_init<S, T, I, F>(n: usize, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map_init(init, f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_init_sequential(n, init, f)
    }
}

/// Always-sequential variant, used as the baseline in benchmarks.
pub fn map_init_sequential<S, T, I, F>(n: usize, init: I, f: F) -> Vec<T>
where
    I: Fn() -> S,
    F: Fn(&mut S, usize) -> T,
{
    let mut state = init();
    (0..n).map(|i| f(&mut state, i)).collect()
}

/// Whether work is actually spread across threads.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Number of worker threads in the current pool.
pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Run `f` inside a pool of `threads` workers (0 = default pool).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        if threads == 0 {
            return f();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(f),
            Err(e) => {
                log::warn!("could not build a {threads}-thread pool ({e}); using the global pool");
                f()
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v = map_init(1000, || 0u64, |calls, i| {
            *calls += 1;
            i * 2
        });
        assert_eq!(v, (0..1000).map(|i| i * 2).collect::<Vec<_>>());
        assert_eq!(map_init_sequential(5, || (), |_, i| i), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn pools_of_any_size_agree() {
        let a = with_threads(1, || map_init(64, || (), |_, i| i * i));
        let b = with_threads(3, || map_init(64, || (), |_, i| i * i));
        assert_eq!(a, b);
    }
}
