use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::space::{set_from, FiniteSpace};
use super::sober::is_sober;
use crate::error::{violated, Error, Result};
use crate::order::{FiniteLattice, MonotoneMap};

/// The lattice of open sets of `s` ordered by inclusion. Element `i` is
/// `s.opens()[i]`.
pub fn open_set_lattice(s: &FiniteSpace) -> Result<FiniteLattice> {
    let labels = s.opens().iter().map(|o| s.set_label(o)).collect();
    let l = FiniteLattice::from_sets(s.opens(), labels)?;
    if !l.is_frame() {
        return Err(violated("open sets do not form a frame"));
    }
    Ok(l)
}

/// A frame, the point space built from it, and the indexing map sending
/// each frame element to its open set.
#[derive(Debug, Clone)]
pub struct SpaceFrameBridge {
    pub frame: Arc<FiniteLattice>,
    pub space: FiniteSpace,
    /// Frame element carried by each point of `space`.
    pub point_elements: Vec<usize>,
    /// Frame element to index in `space.opens()`.
    pub indexing: Vec<usize>,
}

impl SpaceFrameBridge {
    pub fn open_lattice(&self) -> Result<Arc<FiniteLattice>> {
        Ok(Arc::new(open_set_lattice(&self.space)?))
    }

    /// The indexing as a monotone map into the open-set lattice.
    pub fn indexing_map(&self) -> Result<MonotoneMap> {
        MonotoneMap::new(self.frame.clone(), self.open_lattice()?, self.indexing.clone())
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.space.opens().len()];
        self.indexing.iter().all(|&o| !std::mem::replace(&mut seen[o], true))
    }
}

fn hull_kernel_open(a: &FiniteLattice, points: &[usize], x: usize) -> FixedBitSet {
    set_from(points.len(), (0..points.len()).filter(|&i| !a.leq(x, points[i])))
}

/// Point space of a frame: points are the ∧-irreducibles, opens are the
/// sets `U(a) = {p : a ≰ p}`. The result is checked to be sober.
pub fn pt_space(a: Arc<FiniteLattice>) -> Result<SpaceFrameBridge> {
    if !a.is_frame() {
        return Err(Error::NotAFrame);
    }
    let points = a.points();
    let labels = points.iter().map(|&p| a.label(p).to_string()).collect();
    let opens: Vec<FixedBitSet> = a.elements().map(|x| hull_kernel_open(&a, &points, x)).collect();
    let space = FiniteSpace::new(labels, opens.clone())?;
    let indexing = opens
        .iter()
        .map(|o| space.open_index(o).expect("every U(a) is open"))
        .collect();
    if !is_sober(&space).sober {
        return Err(violated("point space of a frame is not sober"));
    }
    Ok(SpaceFrameBridge {
        frame: a,
        space,
        point_elements: points,
        indexing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spatiality {
    pub spatial: bool,
    /// Distinct elements with the same open set.
    pub witness: Option<(usize, usize)>,
}

/// A frame is spatial when `a ↦ U(a)` is injective.
pub fn is_spatial(a: &FiniteLattice) -> Result<Spatiality> {
    if !a.is_frame() {
        return Err(Error::NotAFrame);
    }
    let points = a.points();
    let opens: Vec<FixedBitSet> = a.elements().map(|x| hull_kernel_open(a, &points, x)).collect();
    let witness = a
        .elements()
        .flat_map(|x| (x + 1..a.len()).map(move |y| (x, y)))
        .find(|&(x, y)| opens[x] == opens[y]);
    Ok(Spatiality {
        spatial: witness.is_none(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_lattices() {
        let s = open_set_lattice(&FiniteSpace::sierpinski()).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.elements().all(|a| s.elements().all(|b| s.leq(a, b) || s.leq(b, a))));
        assert_eq!(open_set_lattice(&FiniteSpace::discrete(2)).unwrap().len(), 4);
        assert_eq!(open_set_lattice(&FiniteSpace::indiscrete(3)).unwrap().len(), 2);
    }

    #[test]
    fn point_space_of_chain() {
        let b = pt_space(Arc::new(FiniteLattice::chain(2))).unwrap();
        assert_eq!(b.space.len(), 1);
        let b = pt_space(Arc::new(FiniteLattice::boolean(2))).unwrap();
        assert_eq!(b.space, FiniteSpace::new(b.space.labels().to_vec(), FiniteSpace::discrete(2).opens().to_vec()).unwrap());
        assert!(b.is_injective());
    }

    #[test]
    fn spatial_examples() {
        assert!(is_spatial(&FiniteLattice::chain(2)).unwrap().spatial);
        assert!(is_spatial(&FiniteLattice::boolean(3)).unwrap().spatial);
        assert_eq!(is_spatial(&FiniteLattice::diamond()), Err(Error::NotAFrame));
    }

    #[test]
    fn indexing_is_join_preserving() {
        let b = pt_space(Arc::new(FiniteLattice::chain(4))).unwrap();
        let m = b.indexing_map().unwrap();
        assert!(m.join_witness(0).is_none());
        assert!(m.preserves_binary_meets());
    }
}
