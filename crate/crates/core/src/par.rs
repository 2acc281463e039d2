//! How data-parallel loops run. With the `parallel` feature the work is
//! spread over a rayon pool; without it every [`Exec`] runs sequentially.
//! Results always come back in input order.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// `threads == 0` lets rayon pick the pool size.
    Parallel {
        threads: usize,
    },
}

impl Default for Exec {
    fn default() -> Self {
        Exec::Parallel { threads: 0 }
    }
}

impl Exec {
    pub fn threads(threads: usize) -> Self {
        Exec::Parallel { threads }
    }

    /// `f` over every item, in order.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Send + Sync,
    {
        match self {
            Exec::Sequential => items.into_iter().map(f).collect(),
            Exec::Parallel { threads } => parallel_map(threads, items, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(threads: usize, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    use rayon::prelude::*;

    let run = || items.into_par_iter().map(&f).collect();
    if threads == 0 {
        return run();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(_threads: usize, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..1000).collect();
        let expected: Vec<u64> = items.iter().map(|x| x * x).collect();
        for exec in [Exec::Sequential, Exec::threads(0), Exec::threads(3)] {
            assert_eq!(exec.map(items.clone(), |x| x * x), expected);
        }
    }
}
