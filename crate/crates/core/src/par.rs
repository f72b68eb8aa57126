//! Execution mode for the data-parallel parts of the engine.
//!
//! `Exec::Parallel` uses rayon when the `parallel` feature is enabled and
//! silently runs sequentially otherwise. Results never depend on the mode.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this build actually runs work on a thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Order-preserving map.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.into_par_iter().map(f).collect();
        }
        items.into_iter().map(f).collect()
    }

    /// The result of the lowest index in `0..n` for which `f` succeeds.
    ///
    /// Indices are evaluated in waves so later indices are only tried once
    /// every earlier one has failed; the answer is the same in both modes.
    pub fn find_first<R, F>(self, n: u64, f: F) -> Option<R>
    where
        R: Send,
        F: Fn(u64) -> Option<R> + Sync + Send,
    {
        let wave = if self.is_parallel() { wave_size() } else { 1 };
        let mut start = 0;
        while start < n {
            let end = (start + wave).min(n);
            let found = self.map((start..end).collect(), &f);
            if let Some(r) = found.into_iter().flatten().next() {
                return Some(r);
            }
            start = end;
        }
        None
    }
}

#[cfg(feature = "parallel")]
fn wave_size() -> u64 {
    rayon::current_num_threads().max(1) as u64
}

#[cfg(not(feature = "parallel"))]
fn wave_size() -> u64 {
    1
}
