//! Execution strategy for the data-parallel kernels.
//!
//! Every hot loop goes through [`Exec::map`] or [`Exec::find_first`]. With the
//! `parallel` feature these fan out over rayon; without it, or with
//! [`Exec::Sequential`], they run on the calling thread. Results are always
//! returned in index order, so output never depends on the strategy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// `(0..n).map(f)` collected in order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Smallest index in `0..n` for which `f` returns `Some`, with its value.
    pub fn find_first<T, F>(self, n: usize, f: F) -> Option<(usize, T)>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n)
                .into_par_iter()
                .filter_map(|i| f(i).map(|v| (i, v)))
                .find_first(|_| true);
        }
        (0..n).find_map(|i| f(i).map(|v| (i, v)))
    }

    /// True iff `f` holds for every index.
    pub fn all<F>(self, n: usize, f: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().all(f);
        }
        (0..n).all(f)
    }
}
