use serde::Serialize;

use super::spaces::{enforce, maximal_annihilators, SpectrumSpace};
use super::Finding;
use crate::error::Result;
use crate::finmod::{module_predicates, primes, primitive_submodules, simples_exhaustive, ModuleContext};

/// Primitive submodules, points of `SPm(M)`, primes and maximal submodules,
/// all as indices into `Λ(M)`, with the inclusions between them checked.
#[derive(Debug, Clone, Serialize)]
pub struct PtPrtComparison {
    pub prt: Vec<usize>,
    pub pt_spm: Vec<usize>,
    pub spec: Vec<usize>,
    pub mx: Vec<usize>,
    pub findings: Vec<Finding>,
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

pub fn pt_prt_compare(ctx: &ModuleContext, max: &SpectrumSpace) -> Result<PtPrtComparison> {
    let prt = primitive_submodules(ctx)?;
    let pt_spm = max.frame_points();
    let spec = primes(ctx);
    let mut mx = ctx.maximal().to_vec();
    mx.sort_unstable();
    let mut findings = vec![
        Finding::new("prt(M) is contained in pt(SPm(M))", subset(&prt, &pt_spm), ""),
        Finding::new("pt(SPm(M)) is contained in Spec(M)", subset(&pt_spm, &spec), ""),
    ];
    if simples_exhaustive(ctx) {
        findings.push(Finding::new(
            "finitely many simples: pt(SPm(M)) = prt(M)",
            pt_spm == prt,
            "",
        ));
    }
    if module_predicates(ctx)?.pm_module {
        findings.push(Finding::new(
            "pm-module: pt(SPm(M)) = prt(M) = mx(M)",
            pt_spm == prt && prt == mx,
            "",
        ));
    }
    enforce(ctx, &findings)?;
    Ok(PtPrtComparison {
        prt,
        pt_spm,
        spec,
        mx,
        findings,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MxSobriety {
    pub sober: bool,
    pub quasi_duo: bool,
    pub t0: bool,
    pub t1: bool,
    pub pt_equals_prt: bool,
    pub findings: Vec<Finding>,
}

/// Sobriety of `mx(M)` against the closure formula for maximal points, the
/// quasi-duo/T1/T0 equivalence, and both directions of the sobriety
/// criterion. On modules passing the projectivity probe any failure is an
/// error.
pub fn mx_sobriety_report(ctx: &ModuleContext, max: &SpectrumSpace) -> Result<MxSobriety> {
    let space = &max.space;
    let ann = maximal_annihilators(ctx)?;
    let bad_closure = (0..max.points.len()).find(|&i| match max.open_of(ctx, ann[i]) {
        Some(o) => space.point_closure(i) != space.complement(o),
        None => true,
    });
    let sep = space.separation();
    let quasi_duo = module_predicates(ctx)?.quasi_duo;
    let prt = primitive_submodules(ctx)?;
    let pt_equals_prt = max.frame_points() == prt;
    let sober = max.sobriety.sober;
    let findings = vec![
        Finding::new(
            "closure of a maximal X is the complement of m(Ann(M/X))",
            bad_closure.is_none(),
            bad_closure
                .map(|i| ctx.label(max.points[i]).to_string())
                .unwrap_or_default(),
        ),
        Finding::new(
            "quasi-duo, T1 and T0 agree",
            quasi_duo == sep.t1 && sep.t1 == sep.t0,
            format!("quasi-duo {quasi_duo}, T1 {}, T0 {}", sep.t1, sep.t0),
        ),
        Finding::new("sober implies pt(SPm) = prt", !sober || pt_equals_prt, ""),
        Finding::new(
            "quasi-duo and pt(SPm) = prt imply sober",
            !(quasi_duo && pt_equals_prt) || sober,
            "",
        ),
    ];
    enforce(ctx, &findings)?;
    Ok(MxSobriety {
        sober,
        quasi_duo,
        t0: sep.t0,
        t1: sep.t1,
        pt_equals_prt,
        findings,
    })
}
