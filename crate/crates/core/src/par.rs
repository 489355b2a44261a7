//! Data-parallel helpers. With the `parallel` feature the batch entry points
//! fan out over rayon's pool; without it, or with [`Execution::Sequential`],
//! they run in order on the calling thread. Results are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// `Parallel` when the feature is compiled in, else `Sequential`.
    pub fn available() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Order-preserving map.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// First (in input order) `Some` produced by `f`.
pub fn find_map_first<T, R, F>(items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().find_map(f)
    }
}

/// Runs `f` over `items` with at most `limit` calls in flight.
pub fn map_bounded<T, R, F>(limit: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let limit = limit.max(1);
    #[cfg(feature = "parallel")]
    {
        if limit > 1 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(limit).build() {
                return pool.install(|| items.par_iter().map(&f).collect());
            }
        }
    }
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map(Execution::Sequential, &xs, |x| x * x);
        let b = map(Execution::available(), &xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(map_bounded(3, &xs, |x| x + 1)[999], 1000);
        assert_eq!(find_map_first(&xs, |&x| (x % 97 == 96).then_some(x)), Some(96));
    }
}
