//! Subset enumeration shared by the law checks. Exhaustive up to
//! [`FULL_ENUMERATION_LIMIT`] elements; beyond that, binary subsets plus
//! [`RANDOM_SUBSETS`] subsets drawn from a fixed-seed generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FiniteLattice;
use crate::parallel;

pub const FULL_ENUMERATION_LIMIT: usize = 20;
pub const RANDOM_SUBSETS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 0x5e_ed0f_f4a3;

/// Number of leading elements whose in/out choices are fanned out as
/// independent tasks.
const SPLIT_BITS: usize = 6;

/// Looks for a subset `X` of `src` with `f(⋁X) != ⋁ f[X]` (joins of the
/// image taken in `tgt`). Returns the first such subset in enumeration
/// order, or `None` if `f` preserves every join tested.
pub fn join_preservation_witness(
    src: &FiniteLattice,
    tgt: &FiniteLattice,
    f: &(impl Fn(usize) -> usize + Sync),
    seed: u64,
) -> Option<Vec<usize>> {
    let n = src.len();
    if f(src.bottom()) != tgt.bottom() {
        return Some(Vec::new());
    }
    if n <= FULL_ENUMERATION_LIMIT {
        let split = n.min(SPLIT_BITS);
        parallel::find_first(1 << split, |prefix| {
            let mut js = src.bottom();
            let mut ji = tgt.bottom();
            let mut chosen = Vec::with_capacity(n);
            for i in 0..split {
                if prefix >> i & 1 == 1 {
                    js = src.join(js, i);
                    ji = tgt.join(ji, f(i));
                    chosen.push(i);
                }
            }
            let mut out = None;
            descend(src, tgt, f, split, js, ji, &mut chosen, &mut out);
            out
        })
    } else {
        let pair = parallel::find_first(n * n, |k| {
            let (a, b) = (k / n, k % n);
            (f(src.join(a, b)) != tgt.join(f(a), f(b))).then(|| vec![a, b])
        });
        if pair.is_some() {
            return pair;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..RANDOM_SUBSETS).find_map(|_| {
            let subset: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
            let js = src.join_all(subset.iter().copied());
            let ji = tgt.join_all(subset.iter().map(|&x| f(x)));
            (f(js) != ji).then_some(subset)
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn descend(
    src: &FiniteLattice,
    tgt: &FiniteLattice,
    f: &impl Fn(usize) -> usize,
    i: usize,
    js: usize,
    ji: usize,
    chosen: &mut Vec<usize>,
    out: &mut Option<Vec<usize>>,
) {
    if out.is_some() {
        return;
    }
    if i == src.len() {
        if f(js) != ji {
            *out = Some(chosen.clone());
        }
        return;
    }
    descend(src, tgt, f, i + 1, js, ji, chosen, out);
    chosen.push(i);
    descend(src, tgt, f, i + 1, src.join(js, i), tgt.join(ji, f(i)), chosen, out);
    chosen.pop();
}

/// Calls `visit` with the bitmask and join of every subset (exhaustive
/// case only, `n <= FULL_ENUMERATION_LIMIT`). Stops at the first `false`.
pub fn all_masks_with_join(l: &FiniteLattice, visit: impl Fn(u32, usize) -> bool + Sync) -> bool {
    let n = l.len();
    debug_assert!(n <= FULL_ENUMERATION_LIMIT);
    let mut joins = vec![0usize; 1 << n];
    joins[0] = l.bottom();
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        joins[mask] = l.join(joins[mask & (mask - 1)], low);
    }
    parallel::all(1 << n, |mask| visit(mask as u32, joins[mask]))
}

/// Random subsets for the capped case, reproducible from `seed`.
pub fn random_subsets(n: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..RANDOM_SUBSETS)
        .map(|_| (0..n).filter(|_| rng.random_bool(0.5)).collect())
        .collect()
}
