/// Execution strategy for the data-parallel loops of the library.
///
/// Results never depend on the strategy: all accumulation is done in integers
/// or assembled in index order, so `Sequential` and `Parallel` are
/// bit-identical. The default is `Parallel` when the `parallel` feature is
/// enabled and `Sequential` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    /// Evaluates `f(0..n)` and returns the results in index order.
    pub(crate) fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
        }
    }

    /// Calls `f(row_index, row)` for every `row_len`-sized chunk of `buf`.
    pub(crate) fn for_each_row<F>(self, buf: &mut [u8], row_len: usize, f: F)
    where
        F: Fn(usize, &mut [u8]) + Sync + Send,
    {
        match self {
            Execution::Sequential => buf
                .chunks_mut(row_len)
                .enumerate()
                .for_each(|(y, row)| f(y, row)),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                buf.par_chunks_mut(row_len)
                    .enumerate()
                    .for_each(|(y, row)| f(y, row))
            }
        }
    }
}
