use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::ring::{check_abelian_group, FiniteRing};
use crate::error::{Error, Result};
use crate::parallel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModuleSpec {
    Regular,
    /// `Z/m1 ⊕ ... ⊕ Z/mk` over a ring `Z/n`; every `mi` must divide `n`.
    CyclicProduct {
        moduli: Vec<usize>,
    },
    Tables {
        add: Vec<Vec<usize>>,
        act: Vec<Vec<usize>>,
        zero: usize,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
}

/// Where a module came from. Regular modules are known to be projective in
/// their own module category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    Regular,
    CyclicProduct,
    Tables,
    Quotient,
    Submodule,
}

/// A finite unital left module over a [`FiniteRing`].
#[derive(Debug, Clone)]
pub struct FiniteModule {
    ring: Arc<FiniteRing>,
    size: usize,
    add: Vec<u32>,
    act: Vec<u32>,
    neg: Vec<u32>,
    zero: usize,
    labels: Vec<String>,
    origin: Origin,
}

/// A submodule, stored as a membership bitmap over the module's elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Submodule {
    members: FixedBitSet,
}

impl Submodule {
    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn is_subset(&self, other: &Submodule) -> bool {
        self.members.is_subset(&other.members)
    }

    pub(crate) fn key(&self) -> (usize, Vec<usize>) {
        crate::topology::set_key(&self.members)
    }
}

impl FiniteModule {
    pub fn build(ring: Arc<FiniteRing>, spec: &ModuleSpec, cap: usize) -> Result<Self> {
        match spec {
            ModuleSpec::Regular => {
                check_cap(ring.size() as u128, cap)?;
                Ok(Self::regular(ring))
            }
            ModuleSpec::CyclicProduct { moduli } => {
                let size = moduli
                    .iter()
                    .fold(1u128, |acc, &m| acc.saturating_mul(m as u128));
                check_cap(size, cap)?;
                Self::cyclic_product(ring, moduli)
            }
            ModuleSpec::Tables {
                add,
                act,
                zero,
                labels,
            } => {
                let n = add.len();
                check_cap(n as u128, cap)?;
                if add.iter().any(|r| r.len() != n)
                    || act.len() != ring.size()
                    || act.iter().any(|r| r.len() != n)
                {
                    return Err(Error::InvalidTables("module tables have the wrong shape".into()));
                }
                let labels = labels
                    .clone()
                    .unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
                Self::from_tables(
                    ring,
                    n,
                    |a, b| add[a][b],
                    |r, x| act[r][x],
                    *zero,
                    labels,
                    Origin::Tables,
                )
            }
        }
    }

    /// Validates the abelian group and the four action laws.
    pub fn from_tables(
        ring: Arc<FiniteRing>,
        size: usize,
        add: impl Fn(usize, usize) -> usize,
        act: impl Fn(usize, usize) -> usize,
        zero: usize,
        labels: Vec<String>,
        origin: Origin,
    ) -> Result<Self> {
        if size == 0 || zero >= size || labels.len() != size {
            return Err(Error::InvalidTables("bad size, zero or labels".into()));
        }
        let rs = ring.size();
        let mut at = vec![0u32; size * size];
        for a in 0..size {
            for b in 0..size {
                let s = add(a, b);
                if s >= size {
                    return Err(Error::InvalidTables(format!("sum at ({a}, {b}) out of range")));
                }
                at[a * size + b] = s as u32;
            }
        }
        let mut ct = vec![0u32; rs * size];
        for r in 0..rs {
            for x in 0..size {
                let y = act(r, x);
                if y >= size {
                    return Err(Error::InvalidTables(format!("action at ({r}, {x}) out of range")));
                }
                ct[r * size + x] = y as u32;
            }
        }
        let neg = check_abelian_group(size, &at, zero)?;
        let m = Self {
            ring,
            size,
            add: at,
            act: ct,
            neg,
            zero,
            labels,
            origin,
        };
        m.check_action()?;
        Ok(m)
    }

    fn check_action(&self) -> Result<()> {
        let (rs, n, ring) = (self.ring.size(), self.size, &self.ring);
        if let Some(x) = (0..n).find(|&x| self.act(ring.one(), x) != x) {
            return Err(Error::InvalidTables(format!("1 does not act as identity on {x}")));
        }
        let witness = parallel::find_first(rs, |r| {
            for x in 0..n {
                for y in 0..n {
                    if self.act(r, self.add(x, y)) != self.add(self.act(r, x), self.act(r, y)) {
                        return Some(format!("r(x+y) = rx+ry fails at ({r}, {x}, {y})"));
                    }
                }
                for s in 0..rs {
                    if self.act(ring.add(r, s), x) != self.add(self.act(r, x), self.act(s, x)) {
                        return Some(format!("(r+s)x = rx+sx fails at ({r}, {s}, {x})"));
                    }
                    if self.act(ring.mul(r, s), x) != self.act(r, self.act(s, x)) {
                        return Some(format!("(rs)x = r(sx) fails at ({r}, {s}, {x})"));
                    }
                }
            }
            None
        });
        match witness {
            Some(w) => Err(Error::InvalidTables(w)),
            None => Ok(()),
        }
    }

    pub fn regular(ring: Arc<FiniteRing>) -> Self {
        let n = ring.size();
        let labels = ring.labels().to_vec();
        let r = ring.clone();
        Self::from_tables(
            ring,
            n,
            |a, b| r.add(a, b),
            |s, x| r.mul(s, x),
            r.zero(),
            labels,
            Origin::Regular,
        )
        .expect("a ring is a module over itself")
    }

    /// Elements are tuples in mixed radix, first summand most significant.
    pub fn cyclic_product(ring: Arc<FiniteRing>, moduli: &[usize]) -> Result<Self> {
        let n = ring.modulus().ok_or_else(|| {
            Error::IncompatibleModuli("cyclic products need a ring built as zmod n".into())
        })?;
        if moduli.is_empty() {
            return Err(Error::IncompatibleModuli("no summands".into()));
        }
        if let Some(&m) = moduli.iter().find(|&&m| m == 0 || n % m != 0) {
            return Err(Error::IncompatibleModuli(format!("{m} does not divide {n}")));
        }
        let size: usize = moduli.iter().product();
        let decode = |mut x: usize| -> Vec<usize> {
            let mut out = vec![0; moduli.len()];
            for (i, &m) in moduli.iter().enumerate().rev() {
                out[i] = x % m;
                x /= m;
            }
            out
        };
        let encode = |xs: &[usize]| xs.iter().zip(moduli).fold(0, |acc, (&x, &m)| acc * m + x);
        let labels = (0..size)
            .map(|x| {
                let parts: Vec<String> = decode(x).iter().map(|c| c.to_string()).collect();
                if parts.len() == 1 {
                    parts[0].clone()
                } else {
                    format!("({})", parts.join(","))
                }
            })
            .collect();
        Self::from_tables(
            ring,
            size,
            |a, b| {
                let (xa, xb) = (decode(a), decode(b));
                let s: Vec<usize> = (0..moduli.len()).map(|i| (xa[i] + xb[i]) % moduli[i]).collect();
                encode(&s)
            },
            |r, x| {
                let s: Vec<usize> = decode(x)
                    .iter()
                    .zip(moduli)
                    .map(|(&c, &m)| (r * c) % m)
                    .collect();
                encode(&s)
            },
            0,
            labels,
            Origin::CyclicProduct,
        )
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn act(&self, r: usize, x: usize) -> usize {
        self.act[r * self.size + x] as usize
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn same_ring(&self, other: &FiniteModule) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    /// Least submodule containing `seed`.
    pub fn generate(&self, seed: impl IntoIterator<Item = usize>) -> Submodule {
        let mut member = FixedBitSet::with_capacity(self.size);
        let mut members = vec![self.zero];
        member.insert(self.zero);
        for g in seed {
            for r in 0..self.ring.size() {
                let x = self.act(r, g);
                if !member.put(x) {
                    members.push(x);
                }
            }
        }
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for j in 0..=i {
                let s = self.add(x, members[j]);
                if !member.put(s) {
                    members.push(s);
                }
            }
            i += 1;
        }
        Submodule { members: member }
    }

    pub fn zero_submodule(&self) -> Submodule {
        self.generate([])
    }

    pub fn whole(&self) -> Submodule {
        let mut members = FixedBitSet::with_capacity(self.size);
        members.insert_range(..);
        Submodule { members }
    }

    /// Wraps a bitmap after checking closure under addition and the action.
    pub fn submodule(&self, members: FixedBitSet) -> Option<Submodule> {
        if members.len() != self.size || !members.contains(self.zero) {
            return None;
        }
        let closed = members.ones().all(|x| {
            members.ones().all(|y| members.contains(self.add(x, y)))
                && (0..self.ring.size()).all(|r| members.contains(self.act(r, x)))
        });
        closed.then_some(Submodule { members })
    }

    pub fn sum(&self, a: &Submodule, b: &Submodule) -> Submodule {
        let mut members = FixedBitSet::with_capacity(self.size);
        for x in a.elements() {
            for y in b.elements() {
                members.insert(self.add(x, y));
            }
        }
        Submodule { members }
    }

    pub fn intersection(&self, a: &Submodule, b: &Submodule) -> Submodule {
        let mut members = a.members.clone();
        members.intersect_with(&b.members);
        Submodule { members }
    }

    /// `M/N` with its canonical projection. Cosets are numbered by their
    /// least element.
    pub fn quotient(&self, n: &Submodule) -> (FiniteModule, Vec<usize>) {
        let mut class = vec![usize::MAX; self.size];
        let mut reps = Vec::new();
        for x in 0..self.size {
            if class[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for y in n.elements() {
                class[self.add(x, y)] = c;
            }
        }
        let labels = reps.iter().map(|&x| format!("{}+N", self.labels[x])).collect();
        let q = Self::from_tables(
            self.ring.clone(),
            reps.len(),
            |a, b| class[self.add(reps[a], reps[b])],
            |r, a| class[self.act(r, reps[a])],
            class[self.zero],
            labels,
            Origin::Quotient,
        )
        .expect("quotient of a module by a submodule");
        (q, class)
    }

    /// `N` as a module in its own right, with the inclusion into `self`.
    pub fn restrict(&self, n: &Submodule) -> (FiniteModule, Vec<usize>) {
        let elems: Vec<usize> = n.elements().collect();
        let mut pos = vec![usize::MAX; self.size];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        let labels = elems.iter().map(|&x| self.labels[x].clone()).collect();
        let m = Self::from_tables(
            self.ring.clone(),
            elems.len(),
            |a, b| pos[self.add(elems[a], elems[b])],
            |r, a| pos[self.act(r, elems[a])],
            pos[self.zero],
            labels,
            Origin::Submodule,
        )
        .expect("a submodule is a module");
        (m, elems)
    }

    /// Short label for a submodule: `0`, `M`, or a greedy generating set.
    pub fn describe(&self, n: &Submodule) -> String {
        if n.len() == 1 {
            return "0".into();
        }
        if n.len() == self.size {
            return "M".into();
        }
        let gens: Vec<&str> = self
            .greedy_generators(n)
            .into_iter()
            .map(|g| self.labels[g].as_str())
            .collect();
        format!("({})", gens.join(","))
    }

    /// Repeatedly picks the least element of `n` outside the current span.
    pub fn greedy_generators(&self, n: &Submodule) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.zero_submodule();
        for x in n.elements() {
            if !span.contains(x) {
                gens.push(x);
                span = self.generate(gens.iter().copied());
            }
        }
        gens
    }
}

fn check_cap(size: u128, cap: usize) -> Result<()> {
    if size > cap as u128 {
        return Err(Error::SizeCapExceeded {
            what: "module size",
            needed: size,
            cap: cap as u128,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod(n: usize) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::zmod(n).unwrap())
    }

    fn members(s: &Submodule) -> Vec<usize> {
        s.elements().collect()
    }

    #[test]
    fn generate_in_z12() {
        let m = FiniteModule::regular(zmod(12));
        assert_eq!(members(&m.generate([4])), vec![0, 4, 8]);
        assert_eq!(members(&m.generate([])), vec![0]);
        assert_eq!(members(&m.generate([4, 6])), vec![0, 2, 4, 6, 8, 10]);
    }

    #[test]
    fn line_in_f2_squared() {
        let m = FiniteModule::cyclic_product(zmod(2), &[2, 2]).unwrap();
        // (1,0) is index 2
        assert_eq!(m.label(2), "(1,0)");
        assert_eq!(members(&m.generate([2])), vec![0, 2]);
    }

    /// Oracle: componentwise arithmetic in Z2 x Z4 written out directly.
    #[test]
    fn z2_plus_z4_over_z8() {
        let m = FiniteModule::cyclic_product(zmod(8), &[2, 4]).unwrap();
        assert_eq!(m.size(), 8);
        for a in 0..2 {
            for b in 0..4 {
                for c in 0..2 {
                    for d in 0..4 {
                        let s = m.add(a * 4 + b, c * 4 + d);
                        assert_eq!(s, ((a + c) % 2) * 4 + (b + d) % 4);
                    }
                }
                for r in 0..8 {
                    assert_eq!(m.act(r, a * 4 + b), ((r * a) % 2) * 4 + (r * b) % 4);
                }
            }
        }
    }

    #[test]
    fn incompatible_moduli() {
        assert!(matches!(
            FiniteModule::cyclic_product(zmod(8), &[3]),
            Err(Error::IncompatibleModuli(_))
        ));
        let m2 = Arc::new(FiniteRing::matrix(2, 2).unwrap());
        assert!(matches!(
            FiniteModule::cyclic_product(m2, &[2]),
            Err(Error::IncompatibleModuli(_))
        ));
    }

    #[test]
    fn bad_action_is_rejected() {
        let spec = ModuleSpec::Tables {
            add: vec![vec![0, 1], vec![1, 0]],
            act: vec![vec![0, 1], vec![0, 0], vec![0, 1]],
            zero: 0,
            labels: None,
        };
        assert!(matches!(
            FiniteModule::build(zmod(3), &spec, 4096),
            Err(Error::InvalidTables(_))
        ));
    }

    #[test]
    fn quotient_and_restrict() {
        let m = FiniteModule::regular(zmod(12));
        let n = m.generate([2]);
        let (q, proj) = m.quotient(&n);
        assert_eq!(q.size(), 2);
        assert_eq!(proj[3], proj[5]);
        assert_ne!(proj[3], proj[4]);
        let (s, incl) = m.restrict(&n);
        assert_eq!(s.size(), 6);
        assert_eq!(incl, vec![0, 2, 4, 6, 8, 10]);
        assert_eq!(m.describe(&n), "(2)");
        assert_eq!(m.describe(&m.whole()), "M");
    }
}
