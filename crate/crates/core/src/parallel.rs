//! Index-range kernels that run on rayon when the `parallel` feature is on
//! and fall back to plain iterators otherwise. Results are always returned
//! in index order so output does not depend on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn all(n: usize, f: impl Fn(usize) -> bool + Sync + Send) -> bool {
    (0..n).into_par_iter().all(f)
}

#[cfg(not(feature = "parallel"))]
pub fn all(n: usize, f: impl Fn(usize) -> bool + Sync + Send) -> bool {
    (0..n).all(f)
}

/// First (lowest index) `Some` produced by `f`.
#[cfg(feature = "parallel")]
pub fn find_first<T: Send>(n: usize, f: impl Fn(usize) -> Option<T> + Sync + Send) -> Option<T> {
    (0..n).into_par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub fn find_first<T: Send>(n: usize, f: impl Fn(usize) -> Option<T> + Sync + Send) -> Option<T> {
    (0..n).find_map(f)
}

#[cfg(feature = "parallel")]
pub fn map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn filter_map<T: Send>(n: usize, f: impl Fn(usize) -> Option<T> + Sync + Send) -> Vec<T> {
    (0..n).into_par_iter().filter_map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn filter_map<T: Send>(n: usize, f: impl Fn(usize) -> Option<T> + Sync + Send) -> Vec<T> {
    (0..n).filter_map(f).collect()
}

/// Maps over a slice, preserving order.
#[cfg(feature = "parallel")]
pub fn map_slice<S: Sync, T: Send>(items: &[S], f: impl Fn(&S) -> T + Sync + Send) -> Vec<T> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<S: Sync, T: Send>(items: &[S], f: impl Fn(&S) -> T + Sync + Send) -> Vec<T> {
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn find_first_is_lowest_index() {
        let hit = find_first(10_000, |i| (i % 7 == 3 && i > 100).then_some(i));
        assert_eq!(hit, Some(101));
    }

    #[test]
    fn filter_map_keeps_order() {
        let v = filter_map(1000, |i| (i % 3 == 0).then_some(i));
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(v.len(), 334);
    }
}
