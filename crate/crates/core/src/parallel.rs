use std::ops::Range;

use rayon::prelude::*;

/// Worker pool for the enumeration loops. Results never depend on the
/// thread count: searches return the first hit in index order and
/// reductions break ties by index.
#[derive(Debug, Default)]
pub struct Workers {
    pool: Option<rayon::ThreadPool>,
}

impl Workers {
    pub fn new(threads: usize) -> Workers {
        if threads <= 1 {
            return Workers::sequential();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("failed to start worker threads");
        Workers { pool: Some(pool) }
    }

    pub fn sequential() -> Workers {
        Workers { pool: None }
    }

    pub fn threads(&self) -> usize {
        self.pool.as_ref().map_or(1, |p| p.current_num_threads())
    }

    /// The hit with the lowest index, if any.
    pub(crate) fn find_first<T, F>(&self, range: Range<usize>, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        match &self.pool {
            None => range.into_iter().find_map(f),
            Some(pool) => pool.install(|| range.into_par_iter().find_map_first(f)),
        }
    }

    /// Maps every index and folds the results with an associative,
    /// commutative `combine`.
    pub(crate) fn map_reduce<T, F, C>(
        &self,
        range: Range<usize>,
        identity: T,
        f: F,
        combine: C,
    ) -> T
    where
        T: Send + Sync + Clone,
        F: Fn(usize) -> T + Sync + Send,
        C: Fn(T, T) -> T + Sync + Send,
    {
        match &self.pool {
            None => range.into_iter().map(f).fold(identity, &combine),
            Some(pool) => pool.install(|| {
                range
                    .into_par_iter()
                    .map(f)
                    .reduce(|| identity.clone(), &combine)
            }),
        }
    }
}
