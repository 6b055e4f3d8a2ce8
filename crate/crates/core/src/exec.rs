//! Execution policy for batch work.
//!
//! Everything that fans out (grids, Jacobian columns, suite cases, outer
//! quadrature nodes) goes through [`map`]. Results come back in input order
//! in both modes, so the two are bit-identical.

/// How a batch is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    /// rayon when the `parallel` feature is enabled, sequential otherwise.
    #[default]
    Auto,
    Sequential,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Auto
    }
}

/// Order-preserving map over a slice.
pub fn map<T, U, F>(mode: Exec, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Order-preserving map over `0..n`.
pub fn map_range<U, F>(mode: Exec, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_keep_order() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64 * 0.37).collect();
        let a = map(Exec::Auto, &xs, |x| x.sin() * x.exp().ln());
        let b = map(Exec::Sequential, &xs, |x| x.sin() * x.exp().ln());
        assert_eq!(a, b);
        assert_eq!(map_range(Exec::Auto, 5, |i| i * i), vec![0, 1, 4, 9, 16]);
    }
}
