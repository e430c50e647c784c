//! The annihilator frame Ψ(M), the deflator Ler, regularity of frames and
//! the regular core of a quantale, with the checks that tie them together.

mod regular;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finmod::{is_semiprime_definition, module_predicates, ModuleContext, ModulePredicates, Origin};
use crate::order::subsets::FULL_ENUMERATION_LIMIT;
use crate::report::{Check, Verdict};
use crate::spectra::quantale_of_submodules;
use crate::topology::is_spatial;

pub use regular::{
    is_regular, rather_below, regular_core, regular_part, CoreStage, RegularCoreTrace,
    SUBFRAME_SEARCH_LIMIT,
};

const NOT_PROJECTIVE: &str = "projectivity probe fails";
const NOT_PROGENERATOR: &str = "self-progenerator probe fails";

fn adds_to_top(ctx: &ModuleContext, n: usize, m: usize) -> bool {
    let l = ctx.lattice();
    l.join(n, ctx.annihilator(ctx.cyclic(m))) == ctx.top()
}

/// `Ψ(M)`: fully invariant `N` with `N + Ann_M(Rn) = M` for every `n ∈ N`,
/// as indices into `Λ(M)`.
pub fn psi(ctx: &ModuleContext) -> Vec<usize> {
    ctx.fi()
        .iter()
        .copied()
        .filter(|&n| ctx.submodule(n).elements().all(|x| adds_to_top(ctx, n, x)))
        .collect()
}

/// `Ler(N) = {m : N + Ann_M(Rm) = M}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ler {
    pub members: FixedBitSet,
    /// Index into `Λ(M)` when the set is a submodule.
    pub submodule: Option<usize>,
}

pub fn ler(ctx: &ModuleContext, n: usize) -> Result<Ler> {
    if !ctx.is_fi(n) {
        return Err(Error::NotFullyInvariant);
    }
    let m = ctx.module();
    let mut members = FixedBitSet::with_capacity(m.size());
    members.extend((0..m.size()).filter(|&x| adds_to_top(ctx, n, x)));
    let submodule = m
        .submodule(members.clone())
        .and_then(|s| ctx.index_of(&s));
    Ok(Ler { members, submodule })
}

fn gate(ok: bool, reason: &str) -> Option<&str> {
    (!ok).then_some(reason)
}

fn gated(id: &str, skip: Option<&str>, witness: impl FnOnce() -> Option<String>) -> Check {
    match skip {
        Some(reason) => Check::new(id, Verdict::skipped(reason)),
        None => Check::new(id, Verdict::from_witness(witness())),
    }
}

/// Joins of every subset of `xs` (pairs beyond the enumeration limit),
/// returning the first join outside `xs`.
fn join_escape(ctx: &ModuleContext, xs: &[usize]) -> Option<usize> {
    let l = ctx.lattice();
    if xs.len() <= FULL_ENUMERATION_LIMIT {
        let mut joins = vec![l.bottom(); 1 << xs.len()];
        for mask in 1usize..joins.len() {
            let low = mask.trailing_zeros() as usize;
            joins[mask] = l.join(joins[mask & (mask - 1)], xs[low]);
        }
        joins.into_iter().find(|j| !xs.contains(j))
    } else {
        xs.iter()
            .flat_map(|&a| xs.iter().map(move |&b| l.join(a, b)))
            .find(|j| !xs.contains(j))
    }
}

/// Structure of `Ψ(M)` and `Ler`. Items whose hypotheses fail the probes
/// are skipped.
pub fn psi_structure_checks(ctx: &ModuleContext) -> Result<Vec<Check>> {
    let preds = module_predicates(ctx)?;
    let proj = gate(preds.self_projective_probe, NOT_PROJECTIVE);
    let progen = gate(preds.self_progenerator_probe, NOT_PROGENERATOR);
    let l = ctx.lattice();
    let p = psi(ctx);
    let name = |s: usize| ctx.label(s).to_string();
    let lers: Vec<Ler> = ctx.fi().iter().map(|&n| ler(ctx, n)).collect::<Result<_>>()?;

    let mut checks = vec![Check::expect(
        "psi-contains-bounds",
        p.contains(&ctx.zero()) && p.contains(&ctx.top()),
        || "0 or M missing".into(),
    )];
    checks.push(gated("psi-idempotent", progen, || {
        p.iter()
            .find(|&&n| ctx.product(n, n) != n)
            .map(|&n| format!("{} is not idempotent", name(n)))
    }));
    checks.push(gated("psi-meet-closed", progen, || {
        p.iter()
            .flat_map(|&a| p.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| !p.contains(&l.meet(a, b)))
            .map(|(a, b)| format!("{} ∩ {}", name(a), name(b)))
    }));
    checks.push(gated("psi-meet-is-product", progen, || {
        p.iter()
            .flat_map(|&n| ctx.fi().iter().map(move |&k| (n, k)))
            .find(|&(n, k)| l.meet(n, k) != ctx.product(n, k))
            .map(|(n, k)| format!("N = {}, K = {}", name(n), name(k)))
    }));
    checks.push(gated("psi-join-closed", proj, || {
        join_escape(ctx, &p).map(|j| format!("join {} is outside", name(j)))
    }));
    let frame_check = gated("psi-spatial-frame", progen, || {
        let Ok(pl) = l.induced(&p) else {
            return Some("not a lattice".into());
        };
        if !pl.is_frame() {
            return Some("not a frame".into());
        }
        match is_spatial(&pl) {
            Ok(s) if s.spatial => None,
            Ok(s) => Some(format!("not spatial: {:?}", s.witness)),
            Err(e) => Some(e.to_string()),
        }
    });
    checks.push(frame_check);
    checks.push(gated("ler-fixed-points", progen, || {
        let fixed: Vec<usize> = ctx
            .fi()
            .iter()
            .zip(&lers)
            .filter(|(&n, x)| x.submodule == Some(n))
            .map(|(&n, _)| n)
            .collect();
        (fixed != p).then(|| format!("fixed {:?}", fixed.iter().map(|&s| name(s)).collect::<Vec<_>>()))
    }));
    checks.push(gated("ler-submodule", proj, || {
        ctx.fi()
            .iter()
            .zip(&lers)
            .find(|(_, x)| x.submodule.is_none())
            .map(|(&n, _)| format!("Ler({})", name(n)))
    }));
    checks.push(gated("ler-deflator", progen, || {
        ctx.fi().iter().zip(&lers).find_map(|(&n, x)| {
            let Some(s) = x.submodule else {
                return Some(format!("Ler({}) is not a submodule", name(n)));
            };
            if !l.leq(s, n) {
                return Some(format!("Ler({}) = {} is not below", name(n), name(s)));
            }
            match ler(ctx, s) {
                Ok(again) if again.submodule == Some(s) => None,
                Ok(_) => Some(format!("Ler is not idempotent at {}", name(n))),
                Err(_) => Some(format!("Ler({}) is not fully invariant", name(n))),
            }
        })
    }));
    checks.push(gated("ler-meet", proj, || {
        let fi = ctx.fi();
        (0..fi.len())
            .flat_map(|i| (i..fi.len()).map(move |j| (i, j)))
            .find_map(|(i, j)| {
                let meet = l.meet(fi[i], fi[j]);
                let k = ctx.fi_position(meet).expect("meet of fi submodules is fi");
                let mut both = lers[i].members.clone();
                both.intersect_with(&lers[j].members);
                (lers[k].members != both).then(|| format!("{} and {}", name(fi[i]), name(fi[j])))
            })
    }));
    Ok(checks)
}

/// `r(N) = Ler(N)` on `Λ^fi(M)` and `A^r = Ψ(M)`.
pub fn ler_is_r_check(ctx: &ModuleContext) -> Result<Vec<Check>> {
    let preds = module_predicates(ctx)?;
    let proj = gate(preds.self_projective_probe, NOT_PROJECTIVE);
    let q = quantale_of_submodules(ctx)?;
    let trace = regular_core(&q)?;
    let stage = &trace.stages[0];
    let fi = ctx.fi();
    let r_is_ler = gated("r-is-ler", proj, || {
        (0..fi.len()).find_map(|i| match ler(ctx, fi[i]) {
            Ok(x) if x.submodule == Some(fi[stage.r_stage[i]]) => None,
            _ => Some(format!("at {}", ctx.label(fi[i]))),
        })
    });
    let fixed: Vec<usize> = (0..fi.len())
        .filter(|&i| stage.r_stage[i] == i)
        .map(|i| fi[i])
        .collect();
    let fixed_is_psi = gated("r-fixed-is-psi", proj, || {
        (fixed != psi(ctx)).then(|| format!("{:?}", fixed.iter().map(|&s| ctx.label(s)).collect::<Vec<_>>()))
    });
    Ok(vec![r_is_ler, fixed_is_psi])
}

#[derive(Debug, Clone, Serialize)]
pub struct NegPsiReport {
    /// `Ler(Ann_M(K)) = Ann_M(K)` for every fully invariant `K`.
    pub h1: bool,
    /// `M` semiprime and every `Ann_M(N)` a direct summand.
    pub h2: bool,
    /// `Ψ(M)` equals the regular core of `Λ^fi(M)`.
    pub conclusion: bool,
    /// Set when the conclusion holds with neither hypothesis available.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unexplained: Option<String>,
    pub checks: Vec<Check>,
}

fn complements(ctx: &ModuleContext, a: usize) -> impl Iterator<Item = usize> + '_ {
    let l = ctx.lattice();
    l.elements()
        .filter(move |&b| l.meet(a, b) == l.bottom() && l.join(a, b) == l.top())
}

/// Sufficient conditions for `Ψ(M)` to be the regular core, evaluated on
/// `M`. The conclusion is only asserted when a hypothesis holds.
pub fn negpsi_semiber_check(ctx: &ModuleContext) -> Result<NegPsiReport> {
    let preds = module_predicates(ctx)?;
    let proj = preds.self_projective_probe;
    let l = ctx.lattice();
    let fi = ctx.fi();
    let q = quantale_of_submodules(ctx)?;
    let trace = regular_core(&q)?;
    let core: Vec<usize> = trace.core_carrier.iter().map(|&i| fi[i]).collect();
    let conclusion = core == psi(ctx);

    let mut h1 = true;
    for &k in fi {
        let a = ctx.annihilator(k);
        h1 &= ler(ctx, a)?.submodule == Some(a);
    }
    let semiprime = ctx.zero() != ctx.top() && is_semiprime_definition(ctx, ctx.zero())?;
    let summands = fi
        .iter()
        .all(|&n| complements(ctx, ctx.annihilator(n)).next().is_some());
    let h2 = semiprime && summands;

    let name = |s: usize| ctx.label(s).to_string();
    let conclusion_witness = || {
        (!conclusion).then(|| {
            format!(
                "core {:?}",
                core.iter().map(|&s| name(s)).collect::<Vec<_>>()
            )
        })
    };
    let skip = |hyp: bool, what: &'static str| -> Option<&'static str> {
        if !proj {
            Some(NOT_PROJECTIVE)
        } else if !hyp {
            Some(what)
        } else {
            None
        }
    };
    let checks = vec![
        gated("negpsi", skip(h1, "Ler fails to fix some annihilator"), conclusion_witness),
        gated("semiber", skip(h2, "not semiprime with summand annihilators"), conclusion_witness),
        gated("semi-complement", skip(semiprime, "not semiprime"), || {
            fi.iter().find_map(|&n| {
                complements(ctx, n)
                    .find(|&c| !ctx.is_fi(c))
                    .map(|c| format!("{} complements {}", name(c), name(n)))
            })
        }),
        gated("double-annihilator", skip(h2, "not semiprime with summand annihilators"), || {
            fi.iter()
                .find(|&&n| {
                    let a = ctx.annihilator(n);
                    let aa = ctx.annihilator(a);
                    l.meet(a, aa) != ctx.zero() || l.join(a, aa) != ctx.top()
                })
                .map(|&n| format!("at {}", name(n)))
        }),
    ];
    let unexplained = (conclusion && !h1 && !h2)
        .then(|| "Ψ(M) is the regular core although neither hypothesis holds".to_string());
    Ok(NegPsiReport {
        h1,
        h2,
        conclusion,
        unexplained,
        checks,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BiregularReport {
    pub biregular: bool,
    pub psi_is_fi: bool,
    /// Ring forms, for regular modules only: `R = RaR + Ann(RaR)` for all
    /// `a`, and every `RaR` generated by a central idempotent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring_annihilator_form: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring_idempotent_form: Option<bool>,
    pub checks: Vec<Check>,
}

pub fn biregular_iff_psi(ctx: &ModuleContext) -> Result<BiregularReport> {
    let ModulePredicates {
        biregular,
        self_projective_probe,
        ..
    } = module_predicates(ctx)?;
    let psi_is_fi = psi(ctx) == ctx.fi();
    let mut checks = vec![gated(
        "biregular-iff-psi",
        gate(self_projective_probe, NOT_PROJECTIVE),
        || (biregular != psi_is_fi).then(|| format!("biregular {biregular}, Ψ = Λ^fi {psi_is_fi}")),
    )];
    let (mut ann_form, mut idem_form) = (None, None);
    if ctx.module().origin() == Origin::Regular {
        let r = ctx.module().ring();
        let ideals: Vec<Vec<bool>> = (0..r.size()).map(|a| r.principal_ideal(a)).collect();
        let a_form = ideals.iter().all(|ideal| {
            let ann = r.left_annihilator(ideal);
            let mut covered = vec![false; r.size()];
            for x in (0..r.size()).filter(|&x| ideal[x]) {
                for y in (0..r.size()).filter(|&y| ann[y]) {
                    covered[r.add(x, y)] = true;
                }
            }
            covered.iter().all(|&c| c)
        });
        let idempotents = r.central_idempotents();
        let i_form = ideals
            .iter()
            .all(|ideal| idempotents.iter().any(|&e| &ideals[e] == ideal));
        checks.push(Check::expect(
            "ring-biregular-forms",
            a_form == i_form && i_form == biregular,
            || format!("annihilator form {a_form}, idempotent form {i_form}, module {biregular}"),
        ));
        ann_form = Some(a_form);
        idem_form = Some(i_form);
    }
    Ok(BiregularReport {
        biregular,
        psi_is_fi,
        ring_annihilator_form: ann_form,
        ring_idempotent_form: idem_form,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finmod::{FiniteModule, FiniteRing};

    fn zmod(n: usize) -> ModuleContext {
        ModuleContext::new(FiniteModule::regular(Arc::new(FiniteRing::zmod(n).unwrap()))).unwrap()
    }

    fn labels(ctx: &ModuleContext, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| ctx.label(x).to_string()).collect()
    }

    fn find(ctx: &ModuleContext, label: &str) -> usize {
        (0..ctx.len()).find(|&s| ctx.label(s) == label).unwrap()
    }

    fn all_pass(checks: &[Check]) -> bool {
        checks.iter().all(|c| !c.verdict.is_fail())
    }

    #[test]
    fn psi_of_small_cyclic_rings() {
        let z12 = zmod(12);
        assert_eq!(labels(&z12, &psi(&z12)), ["0", "(4)", "(3)", "M"]);
        let z4 = zmod(4);
        assert_eq!(labels(&z4, &psi(&z4)), ["0", "M"]);
    }

    #[test]
    fn ler_in_z12() {
        let ctx = zmod(12);
        assert_eq!(ler(&ctx, find(&ctx, "(6)")).unwrap().submodule, Some(ctx.zero()));
        let four = find(&ctx, "(4)");
        assert_eq!(ler(&ctx, four).unwrap().submodule, Some(four));
        assert_eq!(ler(&ctx, ctx.top()).unwrap().submodule, Some(ctx.top()));
        // (2) keeps only (4): Ann(Rm) must contain an odd residue
        assert_eq!(ler(&ctx, find(&ctx, "(2)")).unwrap().submodule, Some(four));
    }

    #[test]
    fn ler_refuses_non_fi() {
        let r = Arc::new(FiniteRing::zmod(2).unwrap());
        let m = FiniteModule::cyclic_product(r, &[2, 2]).unwrap();
        let ctx = ModuleContext::new(m).unwrap();
        let line = (0..ctx.len()).find(|&s| !ctx.is_fi(s)).unwrap();
        assert_eq!(ler(&ctx, line), Err(Error::NotFullyInvariant));
    }

    #[test]
    fn structure_checks_pass_on_z12() {
        let ctx = zmod(12);
        let checks = psi_structure_checks(&ctx).unwrap();
        assert!(checks.iter().all(|c| c.verdict.is_pass()), "{checks:?}");
        assert!(all_pass(&ler_is_r_check(&ctx).unwrap()));
    }

    #[test]
    fn regular_core_of_z12() {
        let ctx = zmod(12);
        let q = quantale_of_submodules(&ctx).unwrap();
        let t = regular_core(&q).unwrap();
        assert_eq!(t.stages[0].carrier.len(), 6);
        assert_eq!(t.stable_index, 1);
        let core: Vec<usize> = t.core_carrier.iter().map(|&i| ctx.fi()[i]).collect();
        assert_eq!(core, psi(&ctx));
    }

    #[test]
    fn negpsi_data_point_on_z12() {
        let ctx = zmod(12);
        let r = negpsi_semiber_check(&ctx).unwrap();
        assert!(!r.h1 && !r.h2 && r.conclusion);
        assert!(r.unexplained.is_some());
        assert!(all_pass(&r.checks));
    }

    #[test]
    fn boolean_ring_is_biregular() {
        let r = FiniteRing::product(&[FiniteRing::zmod(2).unwrap(), FiniteRing::zmod(2).unwrap()]).unwrap();
        let ctx = ModuleContext::new(FiniteModule::regular(Arc::new(r))).unwrap();
        assert_eq!(psi(&ctx).len(), 4);
        let b = biregular_iff_psi(&ctx).unwrap();
        assert!(b.biregular && b.psi_is_fi);
        assert_eq!(b.ring_idempotent_form, Some(true));
        let n = negpsi_semiber_check(&ctx).unwrap();
        assert!(n.h2 && n.conclusion);
        assert!(n.checks.iter().all(|c| c.verdict.is_pass()));
    }

    #[test]
    fn z12_is_not_biregular() {
        let b = biregular_iff_psi(&zmod(12)).unwrap();
        assert!(!b.biregular && !b.psi_is_fi);
        assert_eq!(b.ring_annihilator_form, Some(false));
        assert!(all_pass(&b.checks));
    }

    #[test]
    fn vector_space_over_f2() {
        let r = Arc::new(FiniteRing::zmod(2).unwrap());
        let ctx = ModuleContext::new(FiniteModule::cyclic_product(r, &[2, 2]).unwrap()).unwrap();
        assert_eq!(labels(&ctx, &psi(&ctx)), ["0", "M"]);
        let n = negpsi_semiber_check(&ctx).unwrap();
        assert!(n.h2 && n.conclusion);
    }

    #[test]
    fn simple_module_is_trivial() {
        let ctx = zmod(3);
        assert_eq!(psi(&ctx), vec![ctx.zero(), ctx.top()]);
        assert!(biregular_iff_psi(&ctx).unwrap().biregular);
        assert!(all_pass(&psi_structure_checks(&ctx).unwrap()));
    }
}
