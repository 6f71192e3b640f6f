//! Data-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature (the default) batch operations can run on the
//! rayon thread pool. Without it, [`Execution::Parallel`] silently degrades to
//! a plain sequential loop, so calling code is written once.

/// How a batch operation schedules independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when work will actually be spread across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Maps `f` over `0..len`, preserving order.
    pub fn map_range<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }

    /// Maps `f` over a slice, preserving order.
    pub fn map_slice<'a, S, T, F>(self, items: &'a [S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&'a S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Maps `f` over fixed-size chunks of a slice and concatenates the results.
    pub fn flat_map_chunks<'a, S, T, F>(self, items: &'a [S], chunk: usize, f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(usize, &'a [S]) -> Vec<T> + Sync + Send,
    {
        let chunk = chunk.max(1);
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            let parts: Vec<Vec<T>> = items
                .par_chunks(chunk)
                .enumerate()
                .map(|(i, c)| f(i, c))
                .collect();
            return parts.into_iter().flatten().collect();
        }
        items
            .chunks(chunk)
            .enumerate()
            .flat_map(|(i, c)| f(i, c))
            .collect()
    }

    /// Folds fixed chunks of `items` and combines the partial results left to
    /// right. Chunk boundaries do not depend on the execution mode, so both
    /// modes return bit-identical floating-point sums.
    pub fn reduce_slice<S, A, F, C>(self, items: &[S], identity: A, fold: F, combine: C) -> A
    where
        S: Sync,
        A: Send + Sync + Clone,
        F: Fn(A, &S) -> A + Sync + Send,
        C: Fn(A, A) -> A + Sync + Send,
    {
        const CHUNK: usize = 1 << 14;
        let partials = self.flat_map_chunks(items, CHUNK, |_, c| {
            vec![c.iter().fold(identity.clone(), &fold)]
        });
        partials.into_iter().fold(identity, combine)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let xs: Vec<u64> = (0..100_000).collect();
        for exec in [Execution::Sequential, Execution::Parallel] {
            let squares = exec.map_slice(&xs, |x| x * x);
            assert_eq!(squares[99_999], 99_999 * 99_999);
            let sum = exec.reduce_slice(&xs, 0u64, |a, x| a + x, |a, b| a + b);
            assert_eq!(sum, 99_999 * 100_000 / 2);
            let chunks = exec.flat_map_chunks(&xs, 333, |i, c| vec![(i, c.len())]);
            assert_eq!(chunks.len(), 301);
            assert_eq!(exec.map_range(5, |i| i * 2), vec![0, 2, 4, 6, 8]);
        }
    }
}
