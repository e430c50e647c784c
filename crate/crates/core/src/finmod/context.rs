use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::hom::{hom, kernel, HomSet};
use super::module::{FiniteModule, Origin, Submodule};
use crate::error::{violated, Error, Result};
use crate::order::subsets::DEFAULT_SEED;
use crate::order::FiniteLattice;
use crate::parallel;

/// Resource bounds for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest ring, module or submodule lattice accepted.
    pub size: usize,
    /// Largest number of candidate assignments tried when enumerating Hom.
    pub hom: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            size: 4096,
            hom: 1_000_000,
        }
    }
}

/// Outcome of the M-projectivity probe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectivityProbe {
    pub passes: bool,
    pub witness: Option<String>,
}

/// Everything derived once from a module: its submodule lattice, its
/// endomorphisms and their action on submodules, the fully invariant
/// sublattice, the product `N_M K` and annihilators.
///
/// Submodules are referred to by their index in [`Self::lattice`].
#[derive(Debug)]
pub struct ModuleContext {
    module: Arc<FiniteModule>,
    caps: Caps,
    seed: u64,
    subs: Vec<Submodule>,
    index: HashMap<FixedBitSet, usize>,
    lattice: Arc<FiniteLattice>,
    cyclic: Vec<usize>,
    endo: HomSet,
    images: Vec<Vec<usize>>,
    kernels: Vec<usize>,
    fi: Vec<usize>,
    fi_pos: Vec<Option<usize>>,
    fi_lattice: Arc<FiniteLattice>,
    product: Vec<usize>,
    closure: Vec<usize>,
    ann: Vec<usize>,
    maximal: Vec<usize>,
    probe: OnceLock<Result<ProjectivityProbe>>,
}

impl ModuleContext {
    pub fn new(module: FiniteModule) -> Result<Self> {
        Self::with_caps(module, Caps::default(), DEFAULT_SEED)
    }

    pub fn with_caps(module: FiniteModule, caps: Caps, seed: u64) -> Result<Self> {
        if module.size() > caps.size {
            return Err(Error::SizeCapExceeded {
                what: "module size",
                needed: module.size() as u128,
                cap: caps.size as u128,
            });
        }
        let module = Arc::new(module);
        let subs = enumerate_submodules(&module, caps.size)?;
        let index: HashMap<FixedBitSet, usize> = subs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members().clone(), i))
            .collect();
        let sets: Vec<FixedBitSet> = subs.iter().map(|s| s.members().clone()).collect();
        let labels = subs.iter().map(|s| module.describe(s)).collect();
        let lattice = Arc::new(FiniteLattice::from_sets(&sets, labels)?);
        if !(lattice.is_modular() && lattice.is_upper_continuous()) {
            return Err(violated("submodule lattice is not an idiom"));
        }
        let lookup = |s: &FixedBitSet| -> usize { index[s] };
        let cyclic = (0..module.size())
            .map(|m| lookup(module.generate([m]).members()))
            .collect();
        let endo = hom(&module, &module, caps.hom)?;
        let images: Vec<Vec<usize>> = parallel::map(endo.len(), |f| {
            let table = endo.map(f);
            subs.iter()
                .map(|s| {
                    let mut img = FixedBitSet::with_capacity(module.size());
                    for x in s.elements() {
                        img.insert(table[x] as usize);
                    }
                    lookup(&img)
                })
                .collect()
        });
        let kernels: Vec<usize> = endo
            .iter()
            .map(|f| {
                let k = crate::topology::set_from(module.size(), kernel(f, module.zero()));
                lookup(&k)
            })
            .collect();
        let n = subs.len();
        let fi: Vec<usize> = (0..n)
            .filter(|&s| images.iter().all(|img| lattice.leq(img[s], s)))
            .collect();
        let mut fi_pos = vec![None; n];
        for (i, &s) in fi.iter().enumerate() {
            fi_pos[s] = Some(i);
        }
        if !lattice.is_sublattice(&fi) {
            return Err(violated("fully invariant submodules are not a sublattice"));
        }
        let fi_lattice = Arc::new(lattice.induced(&fi)?);
        if !(fi_lattice.is_modular() && fi_lattice.is_upper_continuous()) {
            return Err(violated("fully invariant lattice is not an idiom"));
        }
        let top = lattice.top();
        let product = parallel::map(n * n, |i| {
            let (a, b) = (i / n, i % n);
            lattice.join_all(
                images
                    .iter()
                    .filter(|img| lattice.leq(img[top], b))
                    .map(|img| img[a]),
            )
        });
        let ann = (0..n)
            .map(|k| {
                lattice.meet_all(
                    images
                        .iter()
                        .zip(&kernels)
                        .filter(|(img, _)| lattice.leq(img[top], k))
                        .map(|(_, &ker)| ker),
                )
            })
            .collect();
        let closure: Vec<usize> = (0..n).map(|a| product[a * n + top]).collect();
        let maximal = (0..n)
            .filter(|&s| s != top && (0..n).all(|t| t == s || t == top || !lattice.leq(s, t)))
            .collect();
        let ctx = Self {
            module,
            caps,
            seed,
            subs,
            index,
            lattice,
            cyclic,
            endo,
            images,
            kernels,
            fi,
            fi_pos,
            fi_lattice,
            product,
            closure,
            ann,
            maximal,
            probe: OnceLock::new(),
        };
        ctx.check_closure()?;
        ctx.check_annihilators()?;
        Ok(ctx)
    }

    /// `N̄` must be fully invariant, contain `N`, and equal the meet of all
    /// fully invariant submodules above `N`.
    fn check_closure(&self) -> Result<()> {
        for a in 0..self.subs.len() {
            let c = self.closure[a];
            let meet = self
                .lattice
                .meet_all(self.fi.iter().copied().filter(|&f| self.lattice.leq(a, f)));
            if !self.is_fi(c) || !self.lattice.leq(a, c) || meet != c {
                return Err(violated(format!(
                    "fi closure of {} is {}, expected {}",
                    self.label(a),
                    self.label(c),
                    self.label(meet)
                )));
            }
        }
        if self.module.origin() == Origin::Regular
            && self.module.ring().is_commutative()
            && self.fi.len() != self.subs.len()
        {
            return Err(violated("commutative regular module has a non-fi submodule"));
        }
        Ok(())
    }

    fn check_annihilators(&self) -> Result<()> {
        if let Some(&k) = self.ann.iter().find(|&&a| !self.is_fi(a)) {
            return Err(violated(format!("annihilator {} is not fully invariant", self.label(k))));
        }
        Ok(())
    }

    pub fn module(&self) -> &Arc<FiniteModule> {
        &self.module
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `Λ(M)`, elements sorted by size and then by members.
    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    /// `Λ^fi(M)`. Element `i` is `self.fi()[i]` in `Λ(M)`.
    pub fn fi_lattice(&self) -> &Arc<FiniteLattice> {
        &self.fi_lattice
    }

    pub fn fi(&self) -> &[usize] {
        &self.fi
    }

    pub fn fi_position(&self, s: usize) -> Option<usize> {
        self.fi_pos[s]
    }

    pub fn is_fi(&self, s: usize) -> bool {
        self.fi_pos[s].is_some()
    }

    pub fn submodules(&self) -> &[Submodule] {
        &self.subs
    }

    pub fn submodule(&self, s: usize) -> &Submodule {
        &self.subs[s]
    }

    pub fn index_of(&self, s: &Submodule) -> Option<usize> {
        self.index.get(s.members()).copied()
    }

    pub fn label(&self, s: usize) -> &str {
        self.lattice.label(s)
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn zero(&self) -> usize {
        self.lattice.bottom()
    }

    pub fn top(&self) -> usize {
        self.lattice.top()
    }

    /// `Rm`.
    pub fn cyclic(&self, m: usize) -> usize {
        self.cyclic[m]
    }

    pub fn endomorphisms(&self) -> &HomSet {
        &self.endo
    }

    /// `f(N)` for the `f`-th endomorphism.
    pub fn image(&self, f: usize, s: usize) -> usize {
        self.images[f][s]
    }

    pub fn kernel(&self, f: usize) -> usize {
        self.kernels[f]
    }

    /// `N_M K = Σ{f(N) : f ∈ Hom(M, K)}`.
    pub fn product(&self, a: usize, b: usize) -> usize {
        self.product[a * self.subs.len() + b]
    }

    /// Product table of `Λ^fi(M)` in its own indexing.
    pub fn fi_product_table(&self) -> Vec<usize> {
        let k = self.fi.len();
        (0..k * k)
            .map(|i| {
                let p = self.product(self.fi[i / k], self.fi[i % k]);
                self.fi_pos[p].expect("product of fully invariant submodules")
            })
            .collect()
    }

    /// `N̄ = N_M M`.
    pub fn closure_fi(&self, s: usize) -> usize {
        self.closure[s]
    }

    /// `Ann_M(K)` for a submodule `K`.
    pub fn annihilator(&self, k: usize) -> usize {
        self.ann[k]
    }

    /// `Ann_M(K) = ⋂{ker f : f ∈ Hom(M, K)}` for an arbitrary module `K`.
    pub fn annihilator_of(&self, k: &FiniteModule) -> Result<usize> {
        let hs = hom(&self.module, k, self.caps.hom)?;
        let mut acc = self.module.whole().members().clone();
        for f in hs.iter() {
            acc.intersect_with(&crate::topology::set_from(
                self.module.size(),
                kernel(f, k.zero()),
            ));
        }
        self.index
            .get(&acc)
            .copied()
            .ok_or_else(|| violated("intersection of kernels is not a submodule"))
    }

    /// Maximal submodules `mx(M)`.
    pub fn maximal(&self) -> &[usize] {
        &self.maximal
    }

    /// Fully invariant submodules maximal among proper fully invariant ones.
    pub fn maximal_fi(&self) -> Vec<usize> {
        let top = self.top();
        self.fi
            .iter()
            .copied()
            .filter(|&s| {
                s != top
                    && self
                        .fi
                        .iter()
                        .all(|&t| t == s || t == top || !self.lattice.leq(s, t))
            })
            .collect()
    }

    /// `Rad(M)`, the intersection of maximal submodules.
    pub fn radical(&self) -> usize {
        self.lattice.meet_all(self.maximal.iter().copied())
    }

    /// Modules known to be projective in `σ[M]`: regular modules and
    /// semisimple ones.
    pub fn trusted_projective(&self) -> bool {
        self.module.origin() == Origin::Regular || self.radical() == self.zero()
    }

    /// Lifting test against every projection `M → M/N`. Necessary for
    /// projectivity in `σ[M]`.
    pub fn projectivity_probe(&self) -> Result<ProjectivityProbe> {
        self.probe.get_or_init(|| self.run_probe()).clone()
    }

    fn run_probe(&self) -> Result<ProjectivityProbe> {
        let gens = self.module.greedy_generators(&self.module.whole());
        for (s, sub) in self.subs.iter().enumerate() {
            if s == self.zero() || s == self.top() {
                continue;
            }
            let (q, proj) = self.module.quotient(sub);
            let targets = hom(&self.module, &q, self.caps.hom)?;
            let lifted: HashSet<Vec<u32>> = self
                .endo
                .iter()
                .map(|g| g.iter().map(|&y| proj[y as usize] as u32).collect())
                .collect();
            let unlifted = targets.iter().find(|f| !lifted.contains(*f)).map(<[u32]>::to_vec);
            if let Some(f) = unlifted {
                let images: Vec<String> = gens
                    .iter()
                    .map(|&g| format!("{} -> {}", self.module.label(g), q.label(f[g] as usize)))
                    .collect();
                return Ok(ProjectivityProbe {
                    passes: false,
                    witness: Some(format!(
                        "map M -> M/{} with {} has no lift",
                        self.label(s),
                        images.join(", ")
                    )),
                });
            }
        }
        Ok(ProjectivityProbe {
            passes: true,
            witness: None,
        })
    }

    /// Sub-context for `M/N`.
    pub fn quotient_context(&self, s: usize) -> Result<ModuleContext> {
        let (q, _) = self.module.quotient(&self.subs[s]);
        ModuleContext::with_caps(q, self.caps, self.seed)
    }
}

/// All submodules: cyclic submodules closed under pairwise sums, sorted by
/// size and then by members.
fn enumerate_submodules(m: &FiniteModule, cap: usize) -> Result<Vec<Submodule>> {
    let mut cyclics: Vec<Submodule> = (0..m.size()).map(|x| m.generate([x])).collect();
    cyclics.sort_by_key(|s| s.key());
    cyclics.dedup();
    let mut seen: HashSet<Submodule> = cyclics.iter().cloned().collect();
    let mut queue: Vec<Submodule> = cyclics.clone();
    while let Some(s) = queue.pop() {
        for c in &cyclics {
            if c.is_subset(&s) {
                continue;
            }
            let t = m.sum(&s, c);
            if seen.insert(t.clone()) {
                if seen.len() > cap {
                    return Err(Error::SizeCapExceeded {
                        what: "submodule count",
                        needed: seen.len() as u128,
                        cap: cap as u128,
                    });
                }
                queue.push(t);
            }
        }
    }
    let mut subs: Vec<Submodule> = seen.into_iter().collect();
    subs.sort_by_key(|s| s.key());
    Ok(subs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finmod::ring::FiniteRing;

    fn zmod(n: usize) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::zmod(n).unwrap())
    }

    pub(crate) fn z12() -> ModuleContext {
        ModuleContext::new(FiniteModule::regular(zmod(12))).unwrap()
    }

    fn find(ctx: &ModuleContext, label: &str) -> usize {
        (0..ctx.len()).find(|&s| ctx.label(s) == label).unwrap()
    }

    #[test]
    fn z12_lattice_is_divisor_lattice() {
        let ctx = z12();
        let labels: Vec<&str> = (0..ctx.len()).map(|s| ctx.label(s)).collect();
        assert_eq!(labels, vec!["0", "(6)", "(4)", "(3)", "(2)", "M"]);
        assert_eq!(ctx.fi().len(), 6);
        // (d) <= (e) iff e divides d
        let gen = |s: usize| ctx.submodule(s).len();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(ctx.lattice().leq(a, b), gen(b) % gen(a) == 0);
            }
        }
    }

    #[test]
    fn plane_lattice_is_m3() {
        let m = FiniteModule::cyclic_product(zmod(2), &[2, 2]).unwrap();
        let ctx = ModuleContext::new(m).unwrap();
        assert_eq!(ctx.len(), 5);
        assert!(!ctx.lattice().is_frame());
        assert_eq!(ctx.fi(), &[0, 4]);
        let line = 1;
        assert_eq!(ctx.closure_fi(line), ctx.top());
        assert_eq!(ctx.product(line, ctx.top()), ctx.top());
        assert_eq!(ctx.annihilator(ctx.top()), ctx.zero());
    }

    #[test]
    fn matrix_ring_fi_is_trivial() {
        let r = Arc::new(FiniteRing::matrix(2, 2).unwrap());
        let ctx = ModuleContext::new(FiniteModule::regular(r)).unwrap();
        assert_eq!(ctx.module().size(), 16);
        assert_eq!(ctx.fi().len(), 2);
        assert_eq!(ctx.maximal().len(), 3);
        assert!(ctx.trusted_projective());
    }

    /// Oracle: in a commutative ring the product of ideals `(a)(b)` is
    /// `(ab)`, so the module product must match ideal multiplication.
    #[test]
    fn z12_product_is_ideal_product() {
        let ctx = z12();
        let gen_of = |s: usize| 12 / ctx.submodule(s).len();
        for a in 0..ctx.len() {
            for b in 0..ctx.len() {
                let p = ctx.product(a, b);
                let expected = (gen_of(a) * gen_of(b)) % 12;
                let members: Vec<usize> = ctx.submodule(p).elements().collect();
                let oracle: Vec<usize> = {
                    let mut v: Vec<usize> = (0..12).map(|r| (r * expected) % 12).collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                };
                assert_eq!(members, oracle);
            }
        }
        assert_eq!(ctx.product(find(&ctx, "(2)"), find(&ctx, "(2)")), find(&ctx, "(4)"));
        assert_eq!(ctx.product(ctx.zero(), find(&ctx, "(3)")), ctx.zero());
    }

    #[test]
    fn annihilators_in_z12() {
        let ctx = z12();
        let two = find(&ctx, "(2)");
        let (q, _) = ctx.module().quotient(ctx.submodule(two));
        assert_eq!(ctx.annihilator_of(&q).unwrap(), two);
        assert_eq!(ctx.annihilator(ctx.zero()), ctx.top());
        // Ann((2)) = (6), Ann((3)) = (4)
        assert_eq!(ctx.annihilator(two), find(&ctx, "(6)"));
        assert_eq!(ctx.annihilator(find(&ctx, "(3)")), find(&ctx, "(4)"));
    }

    #[test]
    fn probe_on_z2_plus_z4() {
        let m = FiniteModule::cyclic_product(zmod(8), &[2, 4]).unwrap();
        let ctx = ModuleContext::new(m).unwrap();
        let probe = ctx.projectivity_probe().unwrap();
        assert!(!probe.passes);
        assert!(probe.witness.unwrap().contains("has no lift"));
        assert!(z12().projectivity_probe().unwrap().passes);
    }
}
