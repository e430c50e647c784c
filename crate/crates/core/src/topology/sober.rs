use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::frame::open_set_lattice;
use super::space::{set_from, set_key, FiniteSpace};
use crate::error::{violated, Result};

/// Nonempty closed sets `X` such that meeting two opens separately forces
/// meeting their intersection. Canonical order.
pub fn closed_irreducibles(s: &FiniteSpace) -> Vec<FixedBitSet> {
    let mut out: Vec<FixedBitSet> = s
        .opens()
        .iter()
        .map(|o| s.complement(o))
        .filter(|x| x.count_ones(..) > 0)
        .filter(|x| {
            s.opens().iter().all(|u| {
                s.opens().iter().all(|v| {
                    x.is_disjoint(u) || x.is_disjoint(v) || {
                        let mut uv = u.clone();
                        uv.intersect_with(v);
                        !x.is_disjoint(&uv)
                    }
                })
            })
        })
        .collect();
    out.sort_by_key(set_key);
    out
}

/// A closed irreducible without exactly one generic point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenericPointDefect {
    pub members: Vec<usize>,
    pub generic_points: Vec<usize>,
    pub whole_space: bool,
}

impl fmt::Display for GenericPointDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.generic_points.len();
        if self.whole_space {
            write!(f, "{k} generic points for the whole-space irreducible")
        } else {
            write!(f, "{k} generic points for the irreducible {:?}", self.members)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SobrietyReport {
    pub sober: bool,
    pub defects: Vec<GenericPointDefect>,
}

pub fn is_sober(s: &FiniteSpace) -> SobrietyReport {
    let closures: Vec<FixedBitSet> = (0..s.len()).map(|p| s.point_closure(p)).collect();
    let defects: Vec<GenericPointDefect> = closed_irreducibles(s)
        .into_iter()
        .filter_map(|x| {
            let generic: Vec<usize> = x.ones().filter(|&p| closures[p] == x).collect();
            (generic.len() != 1).then(|| GenericPointDefect {
                whole_space: x.count_ones(..) == s.len(),
                members: x.ones().collect(),
                generic_points: generic,
            })
        })
        .collect();
    SobrietyReport {
        sober: defects.is_empty(),
        defects,
    }
}

#[derive(Debug, Clone)]
pub struct Soberification {
    pub space: FiniteSpace,
    /// Closed irreducible behind each point of `space`.
    pub irreducibles: Vec<FixedBitSet>,
    /// `ζ(s) = cl{s}` as an index into the points of `space`.
    pub zeta: Vec<usize>,
}

/// Sober reflection: points are the closed irreducibles, opens are
/// `♮U = {X : X ∩ U ≠ ∅}`. Checks that the result is sober, that `ζ` is
/// continuous, and that complementation `pt(O(S)) → sob(S)` is a
/// homeomorphism.
pub fn soberification(s: &FiniteSpace) -> Result<Soberification> {
    let irr = closed_irreducibles(s);
    let k = irr.len();
    let labels = irr.iter().map(|x| s.set_label(x)).collect();
    let natural = |u: &FixedBitSet| set_from(k, (0..k).filter(|&i| !irr[i].is_disjoint(u)));
    let space = FiniteSpace::new(labels, s.opens().iter().map(natural))?;
    let zeta: Vec<usize> = (0..s.len())
        .map(|p| {
            let c = s.point_closure(p);
            irr.iter().position(|x| *x == c).expect("point closures are irreducible")
        })
        .collect();

    if !is_sober(&space).sober {
        return Err(violated("soberification is not sober"));
    }
    for o in space.opens() {
        let pre = set_from(s.len(), (0..s.len()).filter(|&p| o.contains(zeta[p])));
        if !s.is_open(&pre) {
            return Err(violated("ζ is not continuous"));
        }
    }

    let frame = std::sync::Arc::new(open_set_lattice(s)?);
    let pt = super::frame::pt_space(frame)?;
    let phi: Vec<usize> = pt
        .point_elements
        .iter()
        .map(|&u| {
            let c = s.complement(&s.opens()[u]);
            irr.iter().position(|x| *x == c)
        })
        .collect::<Option<_>>()
        .ok_or_else(|| violated("complement of a point of O(S) is not irreducible"))?;
    if !pt.space.maps_opens_onto(&space, &phi) {
        return Err(violated("pt(O(S)) → sob(S) is not a homeomorphism"));
    }

    Ok(Soberification {
        space,
        irreducibles: irr,
        zeta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibles_examples() {
        let s = FiniteSpace::sierpinski();
        assert_eq!(closed_irreducibles(&s), vec![set_from(2, [1]), set_from(2, [0, 1])]);
        assert_eq!(closed_irreducibles(&FiniteSpace::indiscrete(3)), vec![set_from(3, 0..3)]);
        assert_eq!(
            closed_irreducibles(&FiniteSpace::discrete(2)),
            vec![set_from(2, [0]), set_from(2, [1])]
        );
    }

    #[test]
    fn sobriety_examples() {
        assert!(is_sober(&FiniteSpace::sierpinski()).sober);
        assert!(is_sober(&FiniteSpace::discrete(2)).sober);
        let r = is_sober(&FiniteSpace::indiscrete(3));
        assert!(!r.sober);
        assert_eq!(r.defects.len(), 1);
        assert_eq!(r.defects[0].to_string(), "3 generic points for the whole-space irreducible");
    }

    #[test]
    fn soberification_examples() {
        assert_eq!(soberification(&FiniteSpace::indiscrete(3)).unwrap().space.len(), 1);
        let d = FiniteSpace::discrete(2);
        let sob = soberification(&d).unwrap();
        assert!(d.homeomorphism(&sob.space).is_some());
        let empty = FiniteSpace::new(vec![], [FixedBitSet::new()]).unwrap();
        assert_eq!(soberification(&empty).unwrap().space.len(), 0);
    }

    #[test]
    fn soberification_is_idempotent() {
        let s = FiniteSpace::indiscrete(2);
        let once = soberification(&s).unwrap().space;
        let twice = soberification(&once).unwrap().space;
        assert!(once.homeomorphism(&twice).is_some());
    }
}
