//! Routing layer between rayon and plain iteration. Everything in the crate
//! funnels data-parallel work through these helpers so the `parallel` feature
//! toggles one place.

/// Elimination steps touching fewer total words than this run sequentially;
/// below it the fork-join barrier costs more than the row updates save.
#[cfg(feature = "parallel")]
const ROW_PAR_THRESHOLD_WORDS: usize = 1 << 16;

/// Target words of work per parallel task; rows are batched to reach it so
/// rayon does not scatter micro-tasks.
#[cfg(feature = "parallel")]
const PAR_TASK_WORDS: usize = 1 << 14;

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Apply `f` to each row of a flat row-major buffer. `row_work` estimates
/// the words `f` actually touches per row; steps with enough total work run
/// row-parallel, in batches sized so each task stays coarse.
pub(crate) fn rows_for_each<F>(data: &mut [u64], words_per_row: usize, row_work: usize, f: F)
where
    F: Fn(&mut [u64]) + Sync + Send,
{
    if words_per_row == 0 || data.is_empty() {
        return;
    }
    #[cfg(feature = "parallel")]
    {
        let rows = data.len() / words_per_row;
        if rayon::current_num_threads() > 1
            && row_work.saturating_mul(rows) >= ROW_PAR_THRESHOLD_WORDS
        {
            use rayon::prelude::*;
            let rows_per_task = (PAR_TASK_WORDS / row_work.max(1)).max(1);
            data.par_chunks_mut(words_per_row)
                .with_min_len(rows_per_task)
                .for_each(&f);
            return;
        }
    }
    data.chunks_mut(words_per_row).for_each(f);
}
