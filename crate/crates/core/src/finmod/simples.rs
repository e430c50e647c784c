use serde::Serialize;

use super::context::ModuleContext;
use super::hom::isomorphic;
use super::module::{FiniteModule, Origin};
use super::primes::{is_prime_definition, is_semiprime_definition, primes};
use crate::error::{violated, Result};

/// A simple subquotient `Rm/H` together with where it came from.
#[derive(Debug, Clone)]
pub struct SimpleClass {
    pub module: FiniteModule,
    /// Index of `Rm` in `Λ(M)`.
    pub cyclic: usize,
    /// Index of the maximal submodule `H < Rm` in `Λ(M)`.
    pub maximal: usize,
}

/// Representatives of the simple subquotients `Rm/H` up to isomorphism.
/// This is exhaustive for `M-Simp` when `M` is regular or semisimple; in
/// general it is only known to be nonempty.
pub fn simple_subquotients(ctx: &ModuleContext) -> Result<Vec<SimpleClass>> {
    let l = ctx.lattice();
    let m = ctx.module();
    let mut cyclics: Vec<usize> = (0..m.size()).map(|x| ctx.cyclic(x)).collect();
    cyclics.sort_unstable();
    cyclics.dedup();
    let mut out: Vec<SimpleClass> = Vec::new();
    for c in cyclics.into_iter().filter(|&c| c != ctx.zero()) {
        let below: Vec<usize> = (0..ctx.len()).filter(|&h| h != c && l.leq(h, c)).collect();
        for &h in &below {
            let maximal = below.iter().all(|&k| k == h || !l.leq(h, k));
            if !maximal {
                continue;
            }
            let (rm, incl) = m.restrict(ctx.submodule(c));
            let inside: Vec<usize> = (0..incl.len())
                .filter(|&i| ctx.submodule(h).contains(incl[i]))
                .collect();
            let h_in_rm = rm.generate(inside);
            let (s, _) = rm.quotient(&h_in_rm);
            let mut known = false;
            for class in &out {
                if isomorphic(&class.module, &s, ctx.caps().hom)? {
                    known = true;
                    break;
                }
            }
            if !known {
                out.push(SimpleClass {
                    module: s,
                    cyclic: c,
                    maximal: h,
                });
            }
        }
    }
    if out.is_empty() && m.size() > 1 {
        return Err(violated("nonzero module with no simple subquotient"));
    }
    Ok(out)
}

/// True when the list of simple subquotients is known to exhaust `M-Simp`.
pub fn simples_exhaustive(ctx: &ModuleContext) -> bool {
    ctx.module().origin() == Origin::Regular || ctx.radical() == ctx.zero()
}

/// `prt(M)`: proper annihilators of simple subquotients. Sorted by lattice
/// index. On modules passing the projectivity probe each one is checked to
/// be prime.
pub fn primitive_submodules(ctx: &ModuleContext) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for s in simple_subquotients(ctx)? {
        let a = ctx.annihilator_of(&s.module)?;
        if a != ctx.top() {
            out.push(a);
        }
    }
    out.sort_unstable();
    out.dedup();
    if ctx.projectivity_probe()?.passes {
        for &p in &out {
            if !is_prime_definition(ctx, p)? {
                return Err(violated(format!("primitive {} is not prime", ctx.label(p))));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModulePredicates {
    pub coatomic: bool,
    pub quasi_duo: bool,
    pub pm_module: bool,
    pub biregular: bool,
    pub self_projective_probe: bool,
    pub self_progenerator_probe: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe_witness: Option<String>,
}

pub fn module_predicates(ctx: &ModuleContext) -> Result<ModulePredicates> {
    let l = ctx.lattice();
    let top = ctx.top();
    let mx = ctx.maximal();
    let coatomic = (0..ctx.len())
        .filter(|&s| s != top)
        .all(|s| mx.iter().any(|&x| l.leq(s, x)));
    if !coatomic {
        return Err(violated("finite module is not coatomic"));
    }
    let mut mx_sorted = mx.to_vec();
    mx_sorted.sort_unstable();
    let quasi_duo = mx_sorted == ctx.maximal_fi();
    let pm_module = primes(ctx)
        .into_iter()
        .all(|p| mx.iter().filter(|&&x| l.leq(p, x)).count() == 1);
    let m = ctx.module();
    let biregular = (0..m.size()).all(|x| {
        let c = ctx.closure_fi(ctx.cyclic(x));
        l.join(c, ctx.annihilator(c)) == top
    });
    let probe = ctx.projectivity_probe()?;
    let generates = (0..ctx.len()).all(|s| {
        let trace = l.join_all(
            (0..ctx.endomorphisms().len())
                .map(|f| ctx.image(f, top))
                .filter(|&im| l.leq(im, s)),
        );
        trace == s
    });
    Ok(ModulePredicates {
        coatomic,
        quasi_duo,
        pm_module,
        biregular,
        self_projective_probe: probe.passes,
        self_progenerator_probe: probe.passes && generates,
        probe_witness: probe.witness,
    })
}

/// Pass/fail of one lemma instance, with a witness on failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaResult {
    pub lemma: &'static str,
    pub failure: Option<String>,
    /// Whether the module passed the probe, i.e. whether a failure refutes
    /// anything.
    pub binding: bool,
}

/// Annihilator of sums against intersections of annihilators (families of
/// up to three submodules), `Ann(N̄) = Ann(N)`, and the fully invariant
/// complement property on a semiprime module.
pub fn lemma_checks(ctx: &ModuleContext) -> Result<Vec<LemmaResult>> {
    let binding = ctx.projectivity_probe()?.passes;
    let l = ctx.lattice();
    let n = ctx.len();
    let mut anninter = None;
    'outer: for a in 0..n {
        for b in a..n {
            for c in b..n {
                let sum = l.join(l.join(a, b), c);
                let inter = l.meet(
                    l.meet(ctx.annihilator(a), ctx.annihilator(b)),
                    ctx.annihilator(c),
                );
                if ctx.annihilator(sum) != inter {
                    anninter = Some(format!(
                        "family {{{}, {}, {}}}",
                        ctx.label(a),
                        ctx.label(b),
                        ctx.label(c)
                    ));
                    break 'outer;
                }
            }
        }
    }
    let rayita = (0..n)
        .find(|&s| ctx.annihilator(ctx.closure_fi(s)) != ctx.annihilator(s))
        .map(|s| format!("N = {}", ctx.label(s)));
    let semi = if is_semiprime_definition(ctx, ctx.zero())? {
        complement_failure(ctx)
    } else {
        None
    };
    Ok(vec![
        LemmaResult {
            lemma: "anninter",
            failure: anninter,
            binding,
        },
        LemmaResult {
            lemma: "rayita",
            failure: rayita,
            binding,
        },
        LemmaResult {
            lemma: "semi",
            failure: semi,
            binding,
        },
    ])
}

/// For `M = N ⊕ L` with `N` fully invariant, `L` must be fully invariant.
fn complement_failure(ctx: &ModuleContext) -> Option<String> {
    let l = ctx.lattice();
    for &a in ctx.fi() {
        for b in 0..ctx.len() {
            if l.join(a, b) == ctx.top() && l.meet(a, b) == ctx.zero() && !ctx.is_fi(b) {
                return Some(format!("M = {} + {}", ctx.label(a), ctx.label(b)));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finmod::FiniteRing;

    fn zmod(n: usize) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::zmod(n).unwrap())
    }

    fn ctx_of(m: FiniteModule) -> ModuleContext {
        ModuleContext::new(m).unwrap()
    }

    #[test]
    fn simples_of_z12() {
        let ctx = ctx_of(FiniteModule::regular(zmod(12)));
        let mut sizes: Vec<usize> = simple_subquotients(&ctx)
            .unwrap()
            .iter()
            .map(|s| s.module.size())
            .collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 3]);
        let prt: Vec<&str> = primitive_submodules(&ctx)
            .unwrap()
            .iter()
            .map(|&p| ctx.label(p))
            .collect();
        assert_eq!(prt, vec!["(3)", "(2)"]);
    }

    #[test]
    fn simples_of_matrix_ring() {
        let ctx = ctx_of(FiniteModule::regular(Arc::new(FiniteRing::matrix(2, 2).unwrap())));
        let simples = simple_subquotients(&ctx).unwrap();
        assert_eq!(simples.len(), 1);
        assert_eq!(simples[0].module.size(), 4);
        assert_eq!(primitive_submodules(&ctx).unwrap(), vec![ctx.zero()]);
    }

    #[test]
    fn simple_module_is_its_own_class() {
        let ctx = ctx_of(FiniteModule::regular(zmod(3)));
        let simples = simple_subquotients(&ctx).unwrap();
        assert_eq!(simples.len(), 1);
        assert_eq!(simples[0].module.size(), 3);
        assert_eq!(primitive_submodules(&ctx).unwrap(), vec![ctx.zero()]);
    }

    #[test]
    fn predicates_of_z12() {
        let ctx = ctx_of(FiniteModule::regular(zmod(12)));
        let p = module_predicates(&ctx).unwrap();
        assert_eq!(
            (p.coatomic, p.quasi_duo, p.pm_module, p.biregular),
            (true, true, true, false)
        );
        assert!(p.self_projective_probe && p.self_progenerator_probe);
    }

    #[test]
    fn matrix_ring_is_not_quasi_duo() {
        let ctx = ctx_of(FiniteModule::regular(Arc::new(FiniteRing::matrix(2, 2).unwrap())));
        assert!(!module_predicates(&ctx).unwrap().quasi_duo);
    }

    #[test]
    fn z2_plus_z4_fails_probe() {
        let ctx = ctx_of(FiniteModule::cyclic_product(zmod(8), &[2, 4]).unwrap());
        let p = module_predicates(&ctx).unwrap();
        assert!(!p.self_projective_probe && !p.self_progenerator_probe);
        assert!(p.probe_witness.is_some());
    }

    #[test]
    fn lemmas_hold_on_z12_and_plane() {
        for m in [
            FiniteModule::regular(zmod(12)),
            FiniteModule::cyclic_product(zmod(2), &[2, 2]).unwrap(),
        ] {
            let ctx = ctx_of(m);
            for r in lemma_checks(&ctx).unwrap() {
                assert!(r.binding);
                assert_eq!(r.failure, None, "{}", r.lemma);
            }
        }
    }
}
