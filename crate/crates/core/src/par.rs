//! Task-indexed sweeps that run on rayon when the `parallel` feature is on
//! and fall back to a plain loop otherwise. Results are always merged in task
//! order, so reports do not depend on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::alphabet::{try_for_each_extension, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Exec {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Evaluates `f(0) .. f(tasks - 1)` and returns the results in task order.
pub fn map_tasks<T, F>(exec: Exec, tasks: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..tasks).into_par_iter().map(f).collect(),
        _ => (0..tasks).map(f).collect(),
    }
}

/// Runs every task and sums the per-task counts, or returns the error of the
/// lowest-numbered failing task.
pub fn sweep<E, F>(exec: Exec, tasks: usize, f: F) -> Result<u64, E>
where
    E: Send,
    F: Fn(usize) -> Result<u64, E> + Sync + Send,
{
    match exec {
        Exec::Sequential => {
            let mut total = 0;
            for t in 0..tasks {
                total += f(t)?;
            }
            Ok(total)
        }
        Exec::Parallel => map_tasks(exec, tasks, f).into_iter().sum(),
    }
}

/// Visits every word over `letters` with length in `min_len..=max_len`,
/// split into one task per (length, first letter). Returns the number of
/// words visited, or the counterexample of the first failing task.
pub fn sweep_words<F>(
    exec: Exec,
    letters: &[Symbol],
    min_len: usize,
    max_len: usize,
    check: F,
) -> Result<u64, String>
where
    F: Fn(&[Symbol]) -> Result<(), String> + Sync + Send,
{
    let mut tasks: Vec<(usize, Option<Symbol>)> = Vec::new();
    for len in min_len..=max_len {
        if len == 0 {
            tasks.push((0, None));
        } else {
            tasks.extend(letters.iter().map(|&s| (len, Some(s))));
        }
    }
    sweep(exec, tasks.len(), |t| {
        let (len, first) = tasks[t];
        let mut count = 0u64;
        let prefix: Vec<Symbol> = first.into_iter().collect();
        try_for_each_extension(letters, &prefix, len - prefix.len(), &mut |u: &[Symbol]| {
            count += 1;
            check(u)
        })?;
        Ok(count)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_sums_and_reports_first_error() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(sweep::<(), _>(exec, 10, |t| Ok(t as u64)), Ok(45));
            let r = sweep(exec, 10, |t| if t >= 3 { Err(t) } else { Ok(1) });
            assert_eq!(r, Err(3));
            assert_eq!(map_tasks(exec, 4, |t| t * t), vec![0, 1, 4, 9]);
        }
    }

    #[test]
    fn sweep_words_counts_every_length() {
        let letters: Vec<Symbol> = Symbol::hash_free().take(3).collect();
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(sweep_words(exec, &letters, 0, 3, |_| Ok(())), Ok(1 + 3 + 9 + 27));
            assert_eq!(sweep_words(exec, &letters, 2, 2, |_| Ok(())), Ok(9));
            let first_long = sweep_words(exec, &letters, 1, 3, |u| {
                if u.len() == 2 { Err(format!("{}", u.len())) } else { Ok(()) }
            });
            assert_eq!(first_long, Err("2".to_string()));
        }
    }
}
