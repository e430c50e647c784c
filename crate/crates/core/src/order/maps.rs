use std::sync::Arc;

use super::subsets;
use super::FiniteLattice;
use crate::error::{violated, Error, Result};

/// A monotone map between finite lattices, stored as an index table.
#[derive(Debug, Clone)]
pub struct MonotoneMap {
    source: Arc<FiniteLattice>,
    target: Arc<FiniteLattice>,
    table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(
        source: Arc<FiniteLattice>,
        target: Arc<FiniteLattice>,
        table: Vec<usize>,
    ) -> Result<Self> {
        if table.len() != source.len() || table.iter().any(|&t| t >= target.len()) {
            return Err(violated("map table does not fit its lattices"));
        }
        for a in source.elements() {
            for b in source.elements() {
                if source.leq(a, b) && !target.leq(table[a], table[b]) {
                    return Err(Error::NotMonotone(a, b));
                }
            }
        }
        Ok(Self {
            source,
            target,
            table,
        })
    }

    pub fn identity(l: Arc<FiniteLattice>) -> Self {
        let table = l.elements().collect();
        Self {
            source: l.clone(),
            target: l,
            table,
        }
    }

    pub fn source(&self) -> &Arc<FiniteLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteLattice> {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, a: usize) -> usize {
        self.table[a]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MonotoneMap) -> MonotoneMap {
        MonotoneMap {
            source: self.source.clone(),
            target: next.target.clone(),
            table: self.table.iter().map(|&x| next.table[x]).collect(),
        }
    }

    /// First subset whose join is not preserved, if any.
    pub fn join_witness(&self, seed: u64) -> Option<Vec<usize>> {
        subsets::join_preservation_witness(&self.source, &self.target, &|x| self.table[x], seed)
    }

    pub fn preserves_binary_meets(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        s.elements().all(|a| {
            s.elements()
                .all(|b| self.table[s.meet(a, b)] == t.meet(self.table[a], self.table[b]))
        })
    }

    /// The right adjoint `f_*(b) = ⋁{a : f(a) <= b}` of a join-preserving
    /// map. The Galois law `f(a) <= b ⇔ a <= f_*(b)` is verified on every
    /// pair before returning.
    pub fn adjoint(&self, seed: u64) -> Result<MonotoneMap> {
        if let Some(x) = self.join_witness(seed) {
            let labels: Vec<&str> = x.iter().map(|&i| self.source.label(i)).collect();
            return Err(Error::NotJoinPreserving(format!("subset {{{}}}", labels.join(", "))));
        }
        let (s, t) = (&self.source, &self.target);
        let table: Vec<usize> = t
            .elements()
            .map(|b| s.join_all(s.elements().filter(|&a| t.leq(self.table[a], b))))
            .collect();
        let right = MonotoneMap {
            source: t.clone(),
            target: s.clone(),
            table,
        };
        if !is_adjunction(self, &right) {
            return Err(violated("computed right adjoint fails the Galois law"));
        }
        Ok(right)
    }

    /// When `self` preserves binary meets, both composites with its
    /// adjoint must as well. `None` if the hypothesis fails.
    pub fn composites_preserve_meets(&self, right: &MonotoneMap) -> Option<bool> {
        if !self.preserves_binary_meets() {
            return None;
        }
        Some(self.then(right).preserves_binary_meets() && right.then(self).preserves_binary_meets())
    }
}

/// `f(a) <= b ⇔ a <= g(b)` for every `a`, `b`.
pub fn is_adjunction(f: &MonotoneMap, g: &MonotoneMap) -> bool {
    let (s, t) = (&f.source, &f.target);
    s.elements()
        .all(|a| t.elements().all(|b| t.leq(f.table[a], b) == s.leq(a, g.table[b])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_self_adjoint() {
        let l = Arc::new(FiniteLattice::boolean(2));
        let id = MonotoneMap::identity(l);
        let r = id.adjoint(0).unwrap();
        assert_eq!(r.table(), id.table());
    }

    #[test]
    fn constant_top_is_not_join_preserving() {
        let c = Arc::new(FiniteLattice::chain(3));
        let f = MonotoneMap::new(c.clone(), c, vec![2, 2, 2]).unwrap();
        assert!(matches!(f.adjoint(0), Err(Error::NotJoinPreserving(_))));
    }

    #[test]
    fn adjoint_of_embedding_chain() {
        // 0 -> 0, 1 -> 2 from the 2-chain into the 3-chain
        let s = Arc::new(FiniteLattice::chain(2));
        let t = Arc::new(FiniteLattice::chain(3));
        let f = MonotoneMap::new(s, t, vec![0, 2]).unwrap();
        let r = f.adjoint(0).unwrap();
        assert_eq!(r.table(), &[0, 0, 1]);
        assert_eq!(f.composites_preserve_meets(&r), Some(true));
    }

    #[test]
    fn non_monotone_rejected() {
        let c = Arc::new(FiniteLattice::chain(2));
        assert!(matches!(
            MonotoneMap::new(c.clone(), c, vec![1, 0]),
            Err(Error::NotMonotone(0, 1))
        ));
    }
}
