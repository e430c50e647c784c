use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::subsets::{self, FULL_ENUMERATION_LIMIT};
use crate::error::{violated, Error, Result};
use crate::parallel;

/// A finite lattice on the indices `0..n`, with precomputed meet and join
/// tables. Element order is fixed by whoever builds the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    n: usize,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
    labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Meet,
    Join,
}

/// Result of [`FiniteLattice::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatticeClass {
    pub modular: bool,
    pub distributive: bool,
    pub idiom: bool,
    pub frame: bool,
}

impl FiniteLattice {
    /// Builds a lattice from an order relation, validating that it is a
    /// partial order in which every pair has a meet and a join.
    pub fn from_leq(
        n: usize,
        leq: impl Fn(usize, usize) -> bool,
        labels: Vec<String>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotAPartialOrder("empty carrier".into()));
        }
        if labels.len() != n {
            return Err(Error::NotAPartialOrder(format!(
                "{} labels for {} elements",
                labels.len(),
                n
            )));
        }
        let mut table = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = leq(a, b);
            }
        }
        for a in 0..n {
            if !table[a * n + a] {
                return Err(Error::NotAPartialOrder(format!("{a} is not <= itself")));
            }
            for b in 0..n {
                if a != b && table[a * n + b] && table[b * n + a] {
                    return Err(Error::NotAPartialOrder(format!(
                        "{a} and {b} are mutually below each other"
                    )));
                }
            }
        }
        let transitive = parallel::find_first(n, |a| {
            for b in 0..n {
                if !table[a * n + b] {
                    continue;
                }
                for c in 0..n {
                    if table[b * n + c] && !table[a * n + c] {
                        return Some((a, b, c));
                    }
                }
            }
            None
        });
        if let Some((a, b, c)) = transitive {
            return Err(Error::NotAPartialOrder(format!(
                "{a} <= {b} <= {c} but not {a} <= {c}"
            )));
        }

        let down: Vec<usize> = (0..n)
            .map(|a| (0..n).filter(|&b| table[b * n + a]).count())
            .collect();
        let bound = |a: usize, b: usize, upper: bool| -> Option<usize> {
            let rel = |x: usize, y: usize| if upper { table[x * n + y] } else { table[y * n + x] };
            let cands: Vec<usize> = (0..n).filter(|&c| rel(a, c) && rel(b, c)).collect();
            let best = *cands.iter().min_by_key(|&&c| {
                if upper {
                    down[c]
                } else {
                    n - down[c]
                }
            })?;
            cands.iter().all(|&u| rel(best, u)).then_some(best)
        };
        let rows: Vec<Result<(Vec<usize>, Vec<usize>)>> = parallel::map(n, |a| {
            let mut m = Vec::with_capacity(n);
            let mut j = Vec::with_capacity(n);
            for b in 0..n {
                m.push(bound(a, b, false).ok_or(Error::NotALattice(a, b, "meet"))?);
                j.push(bound(a, b, true).ok_or(Error::NotALattice(a, b, "join"))?);
            }
            Ok((m, j))
        });
        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        for row in rows {
            let (m, j) = row?;
            meet.extend(m);
            join.extend(j);
        }
        let bottom = (0..n).fold(0, |acc, x| meet[acc * n + x]);
        let top = (0..n).fold(0, |acc, x| join[acc * n + x]);
        Ok(Self {
            n,
            leq: table,
            meet,
            join,
            bottom,
            top,
            labels,
        })
    }

    /// Lattice of a family of sets ordered by inclusion.
    pub fn from_sets(sets: &[FixedBitSet], labels: Vec<String>) -> Result<Self> {
        Self::from_leq(sets.len(), |a, b| sets[a].is_subset(&sets[b]), labels)
    }

    /// The chain `0 < 1 < ... < k-1`.
    pub fn chain(k: usize) -> Self {
        Self::from_leq(k, |a, b| a <= b, (0..k).map(|i| i.to_string()).collect())
            .expect("a chain is a lattice")
    }

    /// The lattice of subsets of a `k`-element set, elements indexed by bitmask.
    pub fn boolean(k: u32) -> Self {
        let n = 1usize << k;
        Self::from_leq(
            n,
            |a, b| a & !b == 0,
            (0..n).map(|i| format!("{i:0w$b}", w = k as usize)).collect(),
        )
        .expect("a power set is a lattice")
    }

    /// `M3`: bottom, three pairwise incomparable atoms, top.
    pub fn diamond() -> Self {
        Self::from_leq(
            5,
            |a, b| a == b || a == 0 || b == 4,
            ["0", "a", "b", "c", "1"].map(String::from).to_vec(),
        )
        .expect("M3 is a lattice")
    }

    /// Sub-poset on `carrier` (indices into `self`) with the induced order.
    /// Element `i` of the result is `carrier[i]`.
    pub fn induced(&self, carrier: &[usize]) -> Result<Self> {
        Self::from_leq(
            carrier.len(),
            |a, b| self.leq(carrier[a], carrier[b]),
            carrier.iter().map(|&c| self.labels[c].clone()).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join or meet of an arbitrary subset; the empty join is bottom and the
    /// empty meet is top.
    pub fn meet_join(&self, s: &[usize], mode: Bound) -> usize {
        match mode {
            Bound::Meet => self.meet_all(s.iter().copied()),
            Bound::Join => self.join_all(s.iter().copied()),
        }
    }

    /// True when `carrier` is closed under binary meets and joins.
    pub fn is_sublattice(&self, carrier: &[usize]) -> bool {
        let mut member = vec![false; self.n];
        for &c in carrier {
            member[c] = true;
        }
        carrier.iter().all(|&a| {
            carrier
                .iter()
                .all(|&b| member[self.meet(a, b)] && member[self.join(a, b)])
        })
    }

    /// Cover relation `(lower, upper)` in index order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if a != b
                    && self.leq(a, b)
                    && !(0..self.n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b))
                {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Meets are monotone in each argument, i.e. `a ∧ ⋁D = ⋁(a ∧ D)` for
    /// every directed `D` (a finite directed set has a greatest element).
    pub fn is_upper_continuous(&self) -> bool {
        let n = self.n;
        parallel::all(n, |a| {
            (0..n).all(|x| {
                (0..n).all(|y| !self.leq(x, y) || self.leq(self.meet(a, x), self.meet(a, y)))
            })
        })
    }

    pub fn is_modular(&self) -> bool {
        let n = self.n;
        parallel::all(n, |a| {
            (0..n).all(|b| {
                !self.leq(a, b)
                    || (0..n).all(|c| {
                        self.meet(self.join(a, c), b) == self.join(a, self.meet(c, b))
                    })
            })
        })
    }

    fn join_distributes(&self, a: usize, x: usize, y: usize) -> bool {
        self.join(a, self.meet(x, y)) == self.meet(self.join(a, x), self.join(a, y))
    }

    fn meet_distributes(&self, a: usize, x: usize, y: usize) -> bool {
        self.meet(a, self.join(x, y)) == self.join(self.meet(a, x), self.meet(a, y))
    }

    /// `a ∧ ⋁X = ⋁{a ∧ x}` for every subset `X` (capped enumeration).
    pub fn satisfies_fdl(&self, seed: u64) -> bool {
        parallel::all(self.n, |a| {
            subsets::join_preservation_witness(self, self, &|x| self.meet(a, x), seed).is_none()
        })
    }

    /// Classifies the lattice. Upper continuity, the two distributive laws
    /// and the frame law over arbitrary subsets are each evaluated
    /// independently and cross-checked.
    pub fn classify(&self, seed: u64) -> Result<LatticeClass> {
        if !self.is_upper_continuous() {
            return Err(violated("meet table is not monotone (IDL fails)"));
        }
        let n = self.n;
        let modular = self.is_modular();
        let law_join = parallel::all(n, |a| {
            (0..n).all(|x| (0..n).all(|y| self.join_distributes(a, x, y)))
        });
        let law_meet = parallel::all(n, |a| {
            (0..n).all(|x| (0..n).all(|y| self.meet_distributes(a, x, y)))
        });
        if law_join != law_meet {
            return Err(violated("the two distributive laws disagree"));
        }
        let distributive = law_join;
        let idiom = modular;
        let frame = distributive && idiom;
        if self.satisfies_fdl(seed) != frame {
            return Err(violated("subset frame law disagrees with binary distributivity"));
        }
        Ok(LatticeClass {
            modular,
            distributive,
            idiom,
            frame,
        })
    }

    /// Convenience: frame test with the default seed.
    pub fn is_frame(&self) -> bool {
        self.is_modular()
            && self.is_upper_continuous()
            && (0..self.n).all(|a| {
                (0..self.n).all(|x| (0..self.n).all(|y| self.meet_distributes(a, x, y)))
            })
    }

    pub fn is_point(&self, p: usize) -> bool {
        p != self.top
            && (0..self.n).all(|a| {
                self.leq(a, p)
                    || (0..self.n).all(|b| self.leq(b, p) || !self.leq(self.meet(a, b), p))
            })
    }

    /// Points (∧-irreducibles in the prime sense): `p != top` with
    /// `a ∧ b <= p` forcing `a <= p` or `b <= p`.
    pub fn points(&self) -> Vec<usize> {
        parallel::filter_map(self.n, |p| self.is_point(p).then_some(p))
    }

    /// Classical meet-irreducibles: `p != top` and `p = a ∧ b` forces
    /// `p = a` or `p = b`.
    pub fn meet_irreducibles(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&p| {
                p != self.top
                    && (0..self.n).all(|a| {
                        (0..self.n).all(|b| self.meet(a, b) != p || a == p || b == p)
                    })
            })
            .collect()
    }

    /// Elements `c` such that `c <= ⋁D` for directed `D` forces `c <= d`
    /// for some `d ∈ D`. Exhaustive for up to 20 elements, sampled above.
    pub fn compact_elements(&self, seed: u64) -> Vec<usize> {
        let n = self.n;
        if n <= FULL_ENUMERATION_LIMIT {
            let ups: Vec<u32> = (0..n)
                .map(|c| (0..n).filter(|&x| self.leq(c, x)).fold(0u32, |m, x| m | 1 << x))
                .collect();
            (0..n)
                .filter(|&c| {
                    subsets::all_masks_with_join(self, |mask, j| {
                        let directed = mask != 0 && mask >> j & 1 == 1;
                        !directed || !self.leq(c, j) || mask & ups[c] != 0
                    })
                })
                .collect()
        } else {
            let samples = subsets::random_subsets(n, seed);
            (0..n)
                .filter(|&c| {
                    samples.iter().all(|s| {
                        let j = self.join_all(s.iter().copied());
                        let directed = s.contains(&j);
                        !directed || !self.leq(c, j) || s.iter().any(|&x| self.leq(c, x))
                    })
                })
                .collect()
        }
    }

    /// Distributive elements. Both defining conditions are evaluated; on a
    /// modular lattice they must agree.
    pub fn distributive_elements(&self) -> Result<Vec<usize>> {
        let n = self.n;
        let flags = parallel::map(n, |a| {
            let first = (0..n).all(|x| (0..n).all(|y| self.join_distributes(a, x, y)));
            let second = (0..n).all(|x| (0..n).all(|y| self.meet_distributes(a, x, y)));
            (first, second)
        });
        if self.is_modular() {
            if let Some(a) = flags.iter().position(|(f, s)| f != s) {
                return Err(violated(format!(
                    "distributivity conditions disagree at {}",
                    self.labels[a]
                )));
            }
        }
        Ok((0..n).filter(|&a| flags[a].0).collect())
    }

    /// Maximal members of `{x ∈ carrier : m ≰ x}`. When the carrier lies
    /// inside the distributive elements, each result is checked to be a
    /// point of the carrier.
    pub fn maximal_excluders(&self, m: usize, carrier: &[usize]) -> Result<Vec<usize>> {
        if m == self.bottom {
            return Ok(Vec::new());
        }
        let family: Vec<usize> = carrier.iter().copied().filter(|&x| !self.leq(m, x)).collect();
        let maximal: Vec<usize> = family
            .iter()
            .copied()
            .filter(|&x| !family.iter().any(|&y| y != x && self.leq(x, y)))
            .collect();
        let distributive = self.distributive_elements()?;
        if carrier.iter().all(|c| distributive.contains(c)) {
            for &p in &maximal {
                let is_point = p != self.top
                    && carrier.iter().all(|&a| {
                        self.leq(a, p)
                            || carrier
                                .iter()
                                .all(|&b| self.leq(b, p) || !self.leq(self.meet(a, b), p))
                    });
                if !is_point {
                    return Err(violated(format!(
                        "maximal excluder {} is not a point of the sublattice",
                        self.labels[p]
                    )));
                }
            }
        }
        Ok(maximal)
    }

    /// Pseudocomplement `¬x = ⋁{y : y ∧ x = 0}`.
    pub fn negation(&self, x: usize) -> usize {
        self.join_all((0..self.n).filter(|&y| self.meet(y, x) == self.bottom))
    }

    /// Checks that `phi` (indices of `self` to indices of `other`) is an
    /// order isomorphism.
    pub fn is_isomorphism(&self, other: &FiniteLattice, phi: &[usize]) -> bool {
        if phi.len() != self.n || other.n != self.n {
            return false;
        }
        let mut hit = vec![false; other.n];
        for &y in phi {
            if hit[y] {
                return false;
            }
            hit[y] = true;
        }
        (0..self.n).all(|a| (0..self.n).all(|b| self.leq(a, b) == other.leq(phi[a], phi[b])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Divisor lattice of 12 ordered as ideals of Z12: `(d) ⊆ (e)` iff `e | d`.
    /// Order: (12)=0, (6), (4), (3), (2), (1).
    fn z12_ideals() -> (FiniteLattice, [usize; 6]) {
        let gens = [12usize, 6, 4, 3, 2, 1];
        let l = FiniteLattice::from_leq(
            6,
            |a, b| gens[a].is_multiple_of(gens[b]),
            gens.iter().map(|g| format!("({g})")).collect(),
        )
        .unwrap();
        (l, gens)
    }

    fn idx(gens: &[usize], g: usize) -> usize {
        gens.iter().position(|&x| x == g).unwrap()
    }

    /// Independent oracle: ideals of Z12 as explicit subsets, joins as the
    /// additive closure of the union.
    fn ideal_set(g: usize) -> Vec<usize> {
        (0..12).filter(|x| x % g == 0).collect()
    }

    fn additive_closure(seed: &[usize]) -> Vec<usize> {
        let mut set: Vec<usize> = vec![0];
        set.extend_from_slice(seed);
        set.sort();
        set.dedup();
        loop {
            let mut next = set.clone();
            for &a in &set {
                for &b in &set {
                    let s = (a + b) % 12;
                    if !next.contains(&s) {
                        next.push(s);
                    }
                }
            }
            if next.len() == set.len() {
                set.sort();
                return set;
            }
            set = next;
        }
    }

    #[test]
    fn z12_join_and_meet_match_set_oracle() {
        let (l, gens) = z12_ideals();
        let mut union = ideal_set(4);
        union.extend(ideal_set(6));
        let closure = additive_closure(&union);
        assert_eq!(closure, ideal_set(2));
        assert_eq!(l.meet_join(&[idx(&gens, 4), idx(&gens, 6)], Bound::Join), idx(&gens, 2));

        let inter: Vec<usize> = ideal_set(2).into_iter().filter(|x| x % 3 == 0).collect();
        assert_eq!(inter, ideal_set(6));
        assert_eq!(l.meet_join(&[idx(&gens, 2), idx(&gens, 3)], Bound::Meet), idx(&gens, 6));
    }

    #[test]
    fn empty_bounds() {
        let (l, gens) = z12_ideals();
        assert_eq!(l.meet_join(&[], Bound::Join), idx(&gens, 12));
        assert_eq!(l.meet_join(&[], Bound::Meet), idx(&gens, 1));
    }

    #[test]
    fn classification_examples() {
        let (l, _) = z12_ideals();
        let all = LatticeClass {
            modular: true,
            distributive: true,
            idiom: true,
            frame: true,
        };
        assert_eq!(l.classify(0).unwrap(), all);
        assert_eq!(FiniteLattice::chain(2).classify(0).unwrap(), all);
        let m3 = FiniteLattice::diamond().classify(0).unwrap();
        assert_eq!(
            m3,
            LatticeClass {
                modular: true,
                distributive: false,
                idiom: true,
                frame: false
            }
        );
    }

    #[test]
    fn pentagon_is_not_modular() {
        // N5: 0 < a < b < 1, 0 < c < 1
        let up = [[true, true, true, true, true], [false, true, true, false, true], [false, false, true, false, true], [false, false, false, true, true], [false, false, false, false, true]];
        let l = FiniteLattice::from_leq(5, |a, b| up[a][b], ["0", "a", "b", "c", "1"].map(String::from).to_vec()).unwrap();
        let c = l.classify(1).unwrap();
        assert!(!c.modular && !c.distributive && !c.frame && !c.idiom);
    }

    #[test]
    fn points_examples() {
        let (l, gens) = z12_ideals();
        let expected: Vec<usize> = [4, 3, 2].iter().map(|&g| idx(&gens, g)).collect();
        assert_eq!(l.points(), expected);
        assert!(FiniteLattice::diamond().points().is_empty());
        assert_eq!(FiniteLattice::chain(2).points(), vec![0]);
    }

    #[test]
    fn points_agree_with_meet_irreducibles_on_distributive_lattices() {
        for l in [z12_ideals().0, FiniteLattice::boolean(3), FiniteLattice::chain(4)] {
            assert_eq!(l.points(), l.meet_irreducibles());
        }
    }

    #[test]
    fn compact_elements_are_everything() {
        let (l, _) = z12_ideals();
        assert_eq!(l.compact_elements(0).len(), 6);
        assert_eq!(FiniteLattice::chain(1).compact_elements(0), vec![0]);
        assert_eq!(FiniteLattice::diamond().compact_elements(0).len(), 5);
    }

    #[test]
    fn distributive_elements_examples() {
        let (l, _) = z12_ideals();
        assert_eq!(l.distributive_elements().unwrap().len(), 6);
        assert_eq!(FiniteLattice::diamond().distributive_elements().unwrap(), vec![0, 4]);
        assert_eq!(FiniteLattice::chain(5).distributive_elements().unwrap().len(), 5);
    }

    #[test]
    fn maximal_excluders_examples() {
        let (l, gens) = z12_ideals();
        let all: Vec<usize> = l.elements().collect();
        let got = l.maximal_excluders(idx(&gens, 1), &all).unwrap();
        assert_eq!(got, vec![idx(&gens, 3), idx(&gens, 2)]);
        assert!(l.maximal_excluders(l.bottom(), &all).unwrap().is_empty());
        // Λ(Z4) = chain 0 < (2) < Z4; maximal elements not above (2)
        let z4 = FiniteLattice::chain(3);
        assert_eq!(z4.maximal_excluders(1, &[0, 1, 2]).unwrap(), vec![0]);
    }

    #[test]
    fn rejects_non_lattice() {
        // two incomparable maximal elements, no top
        let err = FiniteLattice::from_leq(3, |a, b| a == b || a == 0, vec!["0".into(), "a".into(), "b".into()]);
        assert!(matches!(err, Err(Error::NotALattice(..))));
    }

    #[test]
    fn rejects_non_transitive() {
        let rel = |a: usize, b: usize| a == b || (a, b) == (0, 1) || (a, b) == (1, 2);
        let err = FiniteLattice::from_leq(3, rel, vec!["a".into(), "b".into(), "c".into()]);
        assert!(matches!(err, Err(Error::NotAPartialOrder(_))));
    }

    #[test]
    fn negation_on_chain_and_boolean() {
        let c = FiniteLattice::chain(3);
        assert_eq!(c.negation(1), 0);
        assert_eq!(c.negation(0), 2);
        let b = FiniteLattice::boolean(2);
        assert_eq!(b.negation(0b01), 0b10);
    }
}
