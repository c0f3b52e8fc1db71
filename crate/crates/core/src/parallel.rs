//! Scoped worker pool for per-node computations.
//!
//! Worker count comes from `STEKLOV_THREADS`: unset uses the machine
//! parallelism, `0` or an unparsable value forces sequential execution.

use std::thread;

fn worker_count() -> usize {
    match std::env::var("STEKLOV_THREADS") {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(0) | Err(_) => 1,
            Ok(n) => n,
        },
        Err(_) => thread::available_parallelism().map_or(1, |n| n.get()),
    }
}

/// Apply `f` to every item, in order, splitting contiguous chunks across
/// scoped threads. Output order matches input order.
pub(crate) fn parallel_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = worker_count().min(items.len().max(1));
    if workers <= 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for part in items.chunks(chunk) {
            let f = &f;
            handles.push(scope.spawn(move || part.iter().map(f).collect::<Vec<R>>()));
        }
        let mut out = Vec::with_capacity(items.len());
        for handle in handles {
            out.extend(handle.join().expect("worker thread panicked"));
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order_and_length() {
        let items: Vec<usize> = (0..1000).collect();
        let out = parallel_map(&items, |&x| x * x);
        assert_eq!(out.len(), 1000);
        for (i, v) in out.iter().enumerate() {
            assert_eq!(*v, i * i);
        }
    }

    #[test]
    fn empty_input_yields_empty_output() {
        let items: Vec<u8> = Vec::new();
        assert!(parallel_map(&items, |&x| x).is_empty());
    }
}
