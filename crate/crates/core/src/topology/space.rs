use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};

/// Canonical ordering key for point subsets: by size, then by members.
pub fn set_key(s: &FixedBitSet) -> (usize, Vec<usize>) {
    (s.count_ones(..), s.ones().collect())
}

pub fn set_from(n: usize, members: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for m in members {
        s.insert(m);
    }
    s
}

/// A finite topological space: labelled points and an explicit family of
/// open sets, kept deduplicated in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    opens: Vec<FixedBitSet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub t0: bool,
    pub t1: bool,
}

impl FiniteSpace {
    pub fn new(labels: Vec<String>, opens: impl IntoIterator<Item = FixedBitSet>) -> Result<Self> {
        let n = labels.len();
        let mut opens = opens
            .into_iter()
            .map(|o| {
                if o.ones().any(|i| i >= n) {
                    return Err(Error::InvalidTopology("open set mentions a missing point".into()));
                }
                Ok(set_from(n, o.ones()))
            })
            .collect::<Result<Vec<_>>>()?;
        opens.sort_by_key(set_key);
        opens.dedup();
        let full = set_from(n, 0..n);
        let empty = FixedBitSet::with_capacity(n);
        if !opens.contains(&empty) {
            return Err(Error::InvalidTopology("empty set is not open".into()));
        }
        if !opens.contains(&full) {
            return Err(Error::InvalidTopology("whole space is not open".into()));
        }
        for a in &opens {
            for b in &opens {
                let mut u = a.clone();
                u.union_with(b);
                let mut i = a.clone();
                i.intersect_with(b);
                if opens.binary_search_by_key(&set_key(&u), set_key).is_err() {
                    return Err(Error::InvalidTopology("not closed under unions".into()));
                }
                if opens.binary_search_by_key(&set_key(&i), set_key).is_err() {
                    return Err(Error::InvalidTopology("not closed under intersections".into()));
                }
            }
        }
        Ok(Self { labels, opens })
    }

    pub fn discrete(n: usize) -> Self {
        let opens = (0u64..1 << n).map(|m| set_from(n, (0..n).filter(|i| m >> i & 1 == 1)));
        Self::new(default_labels(n), opens).expect("discrete topology")
    }

    pub fn indiscrete(n: usize) -> Self {
        Self::new(default_labels(n), [FixedBitSet::with_capacity(n), set_from(n, 0..n)])
            .expect("indiscrete topology")
    }

    /// Points `a`, `b` with opens `∅, {a}, {a, b}`.
    pub fn sierpinski() -> Self {
        Self::new(
            vec!["a".into(), "b".into()],
            [set_from(2, []), set_from(2, [0]), set_from(2, [0, 1])],
        )
        .expect("Sierpinski space")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, p: usize) -> &str {
        &self.labels[p]
    }

    pub fn opens(&self) -> &[FixedBitSet] {
        &self.opens
    }

    pub fn open_index(&self, s: &FixedBitSet) -> Option<usize> {
        self.opens.binary_search_by_key(&set_key(s), set_key).ok()
    }

    pub fn is_open(&self, s: &FixedBitSet) -> bool {
        self.open_index(s).is_some()
    }

    pub fn complement(&self, s: &FixedBitSet) -> FixedBitSet {
        let mut c = set_from(self.len(), 0..self.len());
        c.difference_with(s);
        c
    }

    pub fn is_closed(&self, s: &FixedBitSet) -> bool {
        self.is_open(&self.complement(s))
    }

    /// Smallest closed superset.
    pub fn closure(&self, s: &FixedBitSet) -> FixedBitSet {
        let mut outside = FixedBitSet::with_capacity(self.len());
        for o in &self.opens {
            if o.is_disjoint(s) {
                outside.union_with(o);
            }
        }
        self.complement(&outside)
    }

    pub fn point_closure(&self, p: usize) -> FixedBitSet {
        self.closure(&set_from(self.len(), [p]))
    }

    /// Specialization preorder: `x ⊑ y` iff `x ∈ cl{y}`.
    pub fn specialization(&self) -> Vec<Vec<bool>> {
        let cl: Vec<FixedBitSet> = (0..self.len()).map(|p| self.point_closure(p)).collect();
        (0..self.len())
            .map(|x| (0..self.len()).map(|y| cl[y].contains(x)).collect())
            .collect()
    }

    pub fn separation(&self) -> Separation {
        let n = self.len();
        let cl: Vec<FixedBitSet> = (0..n).map(|p| self.point_closure(p)).collect();
        let t0 = (0..n).all(|x| (x + 1..n).all(|y| cl[x] != cl[y]));
        let t1 = (0..n).all(|x| cl[x].count_ones(..) == 1);
        Separation { t0, t1 }
    }

    pub fn set_label(&self, s: &FixedBitSet) -> String {
        let names: Vec<&str> = s.ones().map(|i| self.labels[i].as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// True when the bijection `phi` (points of `self` to points of
    /// `other`) carries the open-set family exactly onto `other`'s.
    pub fn maps_opens_onto(&self, other: &FiniteSpace, phi: &[usize]) -> bool {
        if phi.len() != self.len() || other.len() != self.len() {
            return false;
        }
        let mut seen = vec![false; other.len()];
        for &y in phi {
            if std::mem::replace(&mut seen[y], true) {
                return false;
            }
        }
        let mut images: Vec<FixedBitSet> = self
            .opens
            .iter()
            .map(|o| set_from(other.len(), o.ones().map(|i| phi[i])))
            .collect();
        images.sort_by_key(set_key);
        images == other.opens
    }

    /// A homeomorphism onto `other`, if one exists. Finite topologies are
    /// determined by their specialization preorder, so this searches for a
    /// preorder isomorphism, pruned by up/down degree.
    pub fn homeomorphism(&self, other: &FiniteSpace) -> Option<Vec<usize>> {
        let n = self.len();
        if other.len() != n || other.opens.len() != self.opens.len() {
            return None;
        }
        let a = self.specialization();
        let b = other.specialization();
        let sig = |m: &Vec<Vec<bool>>, x: usize| {
            let up = (0..n).filter(|&y| m[x][y]).count();
            let down = (0..n).filter(|&y| m[y][x]).count();
            (up, down)
        };
        let sa: Vec<_> = (0..n).map(|x| sig(&a, x)).collect();
        let sb: Vec<_> = (0..n).map(|x| sig(&b, x)).collect();
        let mut phi = vec![usize::MAX; n];
        let mut used = vec![false; n];
        #[allow(clippy::too_many_arguments)]
        fn search(
            i: usize,
            n: usize,
            a: &[Vec<bool>],
            b: &[Vec<bool>],
            sa: &[(usize, usize)],
            sb: &[(usize, usize)],
            phi: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if i == n {
                return true;
            }
            for c in 0..n {
                if used[c] || sa[i] != sb[c] {
                    continue;
                }
                let consistent = (0..i).all(|k| a[i][k] == b[c][phi[k]] && a[k][i] == b[phi[k]][c])
                    && a[i][i] == b[c][c];
                if !consistent {
                    continue;
                }
                phi[i] = c;
                used[c] = true;
                if search(i + 1, n, a, b, sa, sb, phi, used) {
                    return true;
                }
                used[c] = false;
            }
            false
        }
        if search(0, n, &a, &b, &sa, &sb, &mut phi, &mut used) && self.maps_opens_onto(other, &phi) {
            Some(phi)
        } else {
            None
        }
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separation_examples() {
        assert_eq!(FiniteSpace::sierpinski().separation(), Separation { t0: true, t1: false });
        assert_eq!(FiniteSpace::discrete(2).separation(), Separation { t0: true, t1: true });
        assert_eq!(FiniteSpace::indiscrete(3).separation(), Separation { t0: false, t1: false });
    }

    #[test]
    fn rejects_family_without_unions() {
        let opens = [set_from(3, []), set_from(3, [0]), set_from(3, [1]), set_from(3, 0..3)];
        assert!(matches!(
            FiniteSpace::new(default_labels(3), opens),
            Err(Error::InvalidTopology(_))
        ));
    }

    #[test]
    fn closure_in_sierpinski() {
        let s = FiniteSpace::sierpinski();
        assert_eq!(s.point_closure(0), set_from(2, [0, 1]));
        assert_eq!(s.point_closure(1), set_from(2, [1]));
    }

    #[test]
    fn homeomorphism_relabels() {
        let s = FiniteSpace::sierpinski();
        let t = FiniteSpace::new(
            vec!["x".into(), "y".into()],
            [set_from(2, []), set_from(2, [1]), set_from(2, [0, 1])],
        )
        .unwrap();
        assert_eq!(s.homeomorphism(&t), Some(vec![1, 0]));
        assert!(s.homeomorphism(&FiniteSpace::discrete(2)).is_none());
    }
}
