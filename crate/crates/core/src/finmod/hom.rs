use super::module::FiniteModule;
use crate::error::{Error, Result};
use crate::parallel;

/// All module homomorphisms between two finite modules, each stored as the
/// table of images of the source elements. Order is the mixed-radix order
/// of generator images, so it does not depend on thread scheduling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSet {
    source_size: usize,
    target_size: usize,
    maps: Vec<Vec<u32>>,
}

impl HomSet {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn map(&self, i: usize) -> &[u32] {
        &self.maps[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.maps.iter().map(|m| m.as_slice())
    }

    pub fn contains(&self, table: &[u32]) -> bool {
        self.maps.iter().any(|m| m == table)
    }
}

/// Spanning data for a greedy generating set: every element except zero is
/// reached as `parent + r·g_i` from an element discovered earlier.
struct Spanning {
    gens: Vec<usize>,
    steps: Vec<(usize, usize, usize, usize)>,
}

fn spanning(m: &FiniteModule) -> Spanning {
    let n = m.size();
    let rs = m.ring().size();
    let mut reached = vec![false; n];
    reached[m.zero()] = true;
    let mut order = vec![m.zero()];
    let mut gens = Vec::new();
    let mut steps = Vec::new();
    for x in 0..n {
        if reached[x] {
            continue;
        }
        gens.push(x);
        // Close the span under adding multiples of the new generator and
        // of the older ones, recording how each element was reached.
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for (k, &g) in gens.iter().enumerate() {
                for r in 0..rs {
                    let y = m.add(s, m.act(r, g));
                    if !reached[y] {
                        reached[y] = true;
                        order.push(y);
                        steps.push((y, s, k, r));
                    }
                }
            }
            i += 1;
        }
    }
    Spanning { gens, steps }
}

/// Exhaustive `Hom(source, target)`. Candidates assign an image to each
/// generator; a candidate survives when its extension is well defined,
/// additive and equivariant.
pub fn hom(source: &FiniteModule, target: &FiniteModule, cap: u128) -> Result<HomSet> {
    if !source.same_ring(target) {
        return Err(Error::RingMismatch);
    }
    let sp = spanning(source);
    let k = sp.gens.len() as u32;
    let t = target.size();
    let candidates = (t as u128).checked_pow(k).unwrap_or(u128::MAX);
    if candidates > cap {
        return Err(Error::SizeCapExceeded {
            what: "hom candidates",
            needed: candidates,
            cap,
        });
    }
    let n = source.size();
    let rs = source.ring().size();
    let maps = parallel::filter_map(candidates as usize, |c| {
        let mut images = vec![0usize; sp.gens.len()];
        let mut rest = c;
        for slot in images.iter_mut().rev() {
            *slot = rest % t;
            rest /= t;
        }
        let mut f = vec![u32::MAX; n];
        f[source.zero()] = target.zero() as u32;
        for &(y, s, k, r) in &sp.steps {
            f[y] = target.add(f[s] as usize, target.act(r, images[k])) as u32;
        }
        let ok = (0..n).all(|x| {
            let fx = f[x] as usize;
            (0..n).all(|y| f[source.add(x, y)] as usize == target.add(fx, f[y] as usize))
                && (0..rs).all(|r| f[source.act(r, x)] as usize == target.act(r, fx))
        });
        ok.then_some(f)
    });
    Ok(HomSet {
        source_size: n,
        target_size: t,
        maps,
    })
}

/// Kernel of a map as a membership list over the source.
pub fn kernel(table: &[u32], target_zero: usize) -> Vec<usize> {
    (0..table.len())
        .filter(|&x| table[x] as usize == target_zero)
        .collect()
}

/// True when some homomorphism between the modules is a bijection.
pub fn isomorphic(a: &FiniteModule, b: &FiniteModule, cap: u128) -> Result<bool> {
    if a.size() != b.size() {
        return Ok(false);
    }
    let order_stats = |m: &FiniteModule| {
        let mut s: Vec<usize> = (0..m.size())
            .map(|x| {
                let mut k = 1;
                let mut y = x;
                while y != m.zero() {
                    y = m.add(y, x);
                    k += 1;
                }
                k
            })
            .collect();
        s.sort_unstable();
        s
    };
    if order_stats(a) != order_stats(b) {
        return Ok(false);
    }
    let hs = hom(a, b, cap)?;
    let bijective = hs.iter().any(|f| {
        let mut seen = vec![false; b.size()];
        f.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
    });
    Ok(bijective)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finmod::ring::FiniteRing;

    const CAP: u128 = 1_000_000;

    fn zmod(n: usize) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::zmod(n).unwrap())
    }

    #[test]
    fn endomorphisms_of_z12_are_multiplications() {
        let m = FiniteModule::regular(zmod(12));
        let h = hom(&m, &m, CAP).unwrap();
        assert_eq!(h.len(), 12);
        for a in 0..12u32 {
            let mult: Vec<u32> = (0..12).map(|x| (a * x) % 12).collect();
            assert!(h.contains(&mult));
        }
    }

    #[test]
    fn hom_into_quotient() {
        let m = FiniteModule::regular(zmod(12));
        let (q, _) = m.quotient(&m.generate([2]));
        assert_eq!(hom(&m, &q, CAP).unwrap().len(), 2);
    }

    #[test]
    fn hom_into_zero_module() {
        let m = FiniteModule::regular(zmod(12));
        let (z, _) = m.quotient(&m.whole());
        let h = hom(&m, &z, CAP).unwrap();
        assert_eq!(h.len(), 1);
        assert!(h.map(0).iter().all(|&y| y == 0));
    }

    /// Oracle: End of F_q^2 is the 2x2 matrix ring, so it has q^4 elements.
    #[test]
    fn end_of_plane_is_matrix_ring() {
        for q in [2usize, 3] {
            let m = FiniteModule::cyclic_product(zmod(q), &[q, q]).unwrap();
            assert_eq!(hom(&m, &m, CAP).unwrap().len(), q.pow(4));
        }
    }

    /// Oracle: |Hom(Z/a, Z/b)| = gcd(a, b) for cyclic groups.
    #[test]
    fn cyclic_hom_counts_are_gcds() {
        let r = zmod(24);
        let gcd = |mut a: usize, mut b: usize| {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        };
        for a in [2, 3, 4, 6, 8, 12, 24] {
            for b in [2, 3, 4, 6, 8, 12, 24] {
                let ma = FiniteModule::cyclic_product(r.clone(), &[a]).unwrap();
                let mb = FiniteModule::cyclic_product(r.clone(), &[b]).unwrap();
                assert_eq!(hom(&ma, &mb, CAP).unwrap().len(), gcd(a, b), "Hom(Z{a}, Z{b})");
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let m = FiniteModule::cyclic_product(zmod(2), &[2, 2, 2, 2]).unwrap();
        assert!(matches!(hom(&m, &m, 100), Err(Error::SizeCapExceeded { .. })));
    }

    #[test]
    fn ring_mismatch() {
        let a = FiniteModule::regular(zmod(2));
        let b = FiniteModule::regular(zmod(3));
        assert_eq!(hom(&a, &b, CAP), Err(Error::RingMismatch));
    }

    #[test]
    fn isomorphism_search() {
        let r = zmod(12);
        let m = FiniteModule::regular(r.clone());
        let (q2, _) = m.quotient(&m.generate([2]));
        let (s6, _) = m.restrict(&m.generate([6]));
        let (q3, _) = m.quotient(&m.generate([3]));
        assert!(isomorphic(&q2, &s6, CAP).unwrap());
        assert!(!isomorphic(&q2, &q3, CAP).unwrap());
    }
}
