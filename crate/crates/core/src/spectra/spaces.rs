use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::Finding;
use crate::error::{violated, Result};
use crate::finmod::{is_semiprime_definition, primes, ModuleContext};
use crate::order::{classify_closure, ClosureReport, FiniteLattice, MonotoneMap};
use crate::topology::{is_sober, is_spatial, open_set_lattice, set_from, FiniteSpace, SobrietyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Prime,
    Maximal,
}

/// A space of submodules with hull-kernel opens `{P : N ≰ P}` for `N`
/// fully invariant, the nucleus it induces on `Λ^fi(M)`, and its frame of
/// fixed points.
#[derive(Debug, Clone)]
pub struct SpectrumSpace {
    pub kind: SpectrumKind,
    /// Points as indices into `Λ(M)`.
    pub points: Vec<usize>,
    pub space: FiniteSpace,
    pub open_lattice: Arc<FiniteLattice>,
    /// Fully invariant position to index of its open in `space.opens()`.
    pub fiber: Vec<usize>,
    /// The nucleus on `Λ^fi(M)`, in fi positions.
    pub nucleus: MonotoneMap,
    pub report: ClosureReport,
    /// Fixed points as indices into `Λ(M)`.
    pub fixed: Vec<usize>,
    /// Fixed points ordered by inclusion. Element `i` is `fixed[i]`.
    pub frame: Arc<FiniteLattice>,
    pub sobriety: SobrietyReport,
    pub findings: Vec<Finding>,
}

impl SpectrumSpace {
    pub fn point_labels(&self, ctx: &ModuleContext) -> Vec<String> {
        self.points.iter().map(|&p| ctx.label(p).to_string()).collect()
    }

    /// Open set attached to a submodule of `Λ(M)` that is fully invariant.
    pub fn open_of(&self, ctx: &ModuleContext, s: usize) -> Option<&FixedBitSet> {
        ctx.fi_position(s).map(|i| &self.space.opens()[self.fiber[i]])
    }

    /// `pt` of the fixed-point frame, as indices into `Λ(M)`.
    pub fn frame_points(&self) -> Vec<usize> {
        self.frame.points().into_iter().map(|i| self.fixed[i]).collect()
    }
}

fn build(ctx: &ModuleContext, kind: SpectrumKind, points: Vec<usize>) -> Result<SpectrumSpace> {
    let l = ctx.lattice();
    let fi = ctx.fi();
    let labels = points.iter().map(|&p| ctx.label(p).to_string()).collect();
    let opens: Vec<FixedBitSet> = fi
        .iter()
        .map(|&n| set_from(points.len(), (0..points.len()).filter(|&i| !l.leq(n, points[i]))))
        .collect();
    let space = FiniteSpace::new(labels, opens.clone())?;
    let fiber: Vec<usize> = opens
        .iter()
        .map(|o| space.open_index(o).expect("open was registered"))
        .collect();
    if fiber.iter().copied().collect::<std::collections::BTreeSet<_>>().len() != space.opens().len() {
        return Err(violated("some open is not of the form U(N)"));
    }
    let open_lattice = Arc::new(open_set_lattice(&space)?);
    let fl = ctx.fi_lattice().clone();
    let u = MonotoneMap::new(fl.clone(), open_lattice.clone(), fiber.clone())?;
    let u_star = u.adjoint(ctx.seed())?;
    let nucleus = u.then(&u_star);
    let product = ctx.fi_product_table();
    let report = classify_closure(&nucleus, Some(&product))?;
    let fixed: Vec<usize> = report.fixed_points.iter().map(|&i| fi[i]).collect();
    let frame = Arc::new(l.induced(&fixed)?);
    let sobriety = is_sober(&space);

    let mut findings = Vec::new();
    findings.push(Finding::new(
        "nucleus is a multiplicative nucleus",
        report.flags.nucleus && report.flags.multiplicative == Some(true),
        format!("{:?}", report.flags),
    ));
    // The nucleus value is the largest fully invariant submodule below the
    // meet of the points above N.
    let expected: Vec<usize> = fi
        .iter()
        .map(|&n| {
            let hull = l.meet_all(points.iter().copied().filter(|&p| l.leq(n, p)));
            let best = l.join_all(fi.iter().copied().filter(|&f| l.leq(f, hull)));
            ctx.fi_position(best).expect("join of fi submodules is fi")
        })
        .collect();
    let mismatch = (0..fi.len()).find(|&i| expected[i] != nucleus.apply(i));
    findings.push(Finding::new(
        "nucleus is the largest fi submodule below the hull",
        mismatch.is_none(),
        mismatch
            .map(|i| format!("at {}", ctx.label(fi[i])))
            .unwrap_or_default(),
    ));
    let frame_class = frame.is_frame();
    let spatial = frame_class && is_spatial(&frame)?.spatial;
    findings.push(Finding::new(
        "fixed points form a spatial frame",
        frame_class && spatial,
        String::new(),
    ));
    // The fixed-point frame and the open-set lattice are isomorphic via
    // K ↦ open(K).
    let phi: Vec<usize> = report.fixed_points.iter().map(|&i| fiber[i]).collect();
    let iso = frame.is_isomorphism(&open_lattice, &phi);
    findings.push(Finding::new(
        "fixed points are isomorphic to the open sets",
        iso,
        String::new(),
    ));
    Ok(SpectrumSpace {
        kind,
        points,
        space,
        open_lattice,
        fiber,
        nucleus,
        report,
        fixed,
        frame,
        sobriety,
        findings,
    })
}

/// Raises the first failed finding as an error when `M` passes the
/// projectivity probe; otherwise the findings are left as a report.
pub(crate) fn enforce(ctx: &ModuleContext, findings: &[Finding]) -> Result<()> {
    if let Some(f) = findings.iter().find(|f| !f.holds) {
        if ctx.projectivity_probe()?.passes {
            return Err(violated(format!("{}: {}", f.claim, f.detail)));
        }
    }
    Ok(())
}

/// `Spec(M)` with the Zariski-like topology, the nucleus `μ` and `SP(M)`.
pub fn spec_space(ctx: &ModuleContext) -> Result<SpectrumSpace> {
    let mut s = build(ctx, SpectrumKind::Prime, primes(ctx))?;
    let semiprime_or_top: Vec<usize> = ctx
        .fi()
        .iter()
        .copied()
        .filter(|&n| n == ctx.top() || is_semiprime_definition(ctx, n).unwrap_or(false))
        .collect();
    s.findings.push(Finding::new(
        "SP(M) is M together with the semiprime submodules",
        s.fixed == semiprime_or_top,
        format!("fixed {:?}, semiprime {:?}", s.fixed, semiprime_or_top),
    ));
    s.findings.push(Finding::new(
        "Spec(M) is sober",
        s.sobriety.sober,
        s.sobriety.defects.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "),
    ));
    enforce(ctx, &s.findings)?;
    Ok(s)
}

/// `mx(M)` with opens `m(N)`, the nucleus `τ` and `SPm(M)`.
pub fn max_space(ctx: &ModuleContext) -> Result<SpectrumSpace> {
    let mut s = build(ctx, SpectrumKind::Maximal, ctx.maximal().to_vec())?;
    let l = ctx.lattice();
    let ann_quot = maximal_annihilators(ctx)?;
    let above = |k: usize| -> Vec<usize> {
        (0..ctx.maximal().len())
            .filter(|&i| l.leq(k, ctx.maximal()[i]))
            .collect()
    };
    let formula = s.fixed.iter().copied().filter(|&k| k != ctx.top()).find(|&k| {
        l.meet_all(above(k).into_iter().map(|i| ann_quot[i])) != k
    });
    s.findings.push(Finding::new(
        "every proper K in SPm(M) is the meet of Ann(M/X) over maximal X above K",
        formula.is_none(),
        formula.map(|k| ctx.label(k).to_string()).unwrap_or_default(),
    ));
    let ann_eq = ctx.fi().iter().copied().filter(|&k| k != ctx.top()).find(|&k| {
        let idx = above(k);
        l.meet_all(idx.iter().map(|&i| ann_quot[i]))
            != l.meet_all(idx.iter().map(|&i| ctx.maximal()[i]))
    });
    s.findings.push(Finding::new(
        "meet of Ann(M/X) equals meet of X over maximal X above K",
        ann_eq.is_none(),
        ann_eq.map(|k| ctx.label(k).to_string()).unwrap_or_default(),
    ));
    enforce(ctx, &s.findings)?;
    Ok(s)
}

/// `Ann_M(M/X)` for each maximal `X`, in the order of `ctx.maximal()`.
pub fn maximal_annihilators(ctx: &ModuleContext) -> Result<Vec<usize>> {
    ctx.maximal()
        .iter()
        .map(|&m| {
            let (q, _) = ctx.module().quotient(ctx.submodule(m));
            ctx.annihilator_of(&q)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finmod::{FiniteModule, FiniteRing};

    fn zmod(n: usize) -> ModuleContext {
        ModuleContext::new(FiniteModule::regular(Arc::new(FiniteRing::zmod(n).unwrap()))).unwrap()
    }

    fn labels(ctx: &ModuleContext, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| ctx.label(x).to_string()).collect()
    }

    #[test]
    fn spec_of_z12() {
        let ctx = zmod(12);
        let s = spec_space(&ctx).unwrap();
        assert_eq!(labels(&ctx, &s.points), ["(3)", "(2)"]);
        assert_eq!(labels(&ctx, &s.fixed), ["(6)", "(3)", "(2)", "M"]);
        // μ(0) = (6)
        let zero = ctx.fi_position(ctx.zero()).unwrap();
        assert_eq!(ctx.label(ctx.fi()[s.nucleus.apply(zero)]), "(6)");
        assert!(s.findings.iter().all(|f| f.holds));
    }

    #[test]
    fn max_of_z4() {
        let ctx = zmod(4);
        let s = max_space(&ctx).unwrap();
        assert_eq!(labels(&ctx, &s.points), ["(2)"]);
        assert_eq!(labels(&ctx, &s.fixed), ["(2)", "M"]);
    }

    #[test]
    fn max_of_matrix_ring() {
        let r = Arc::new(FiniteRing::matrix(2, 2).unwrap());
        let ctx = ModuleContext::new(FiniteModule::regular(r)).unwrap();
        let s = max_space(&ctx).unwrap();
        assert_eq!(s.points.len(), 3);
        assert_eq!(s.space.opens().len(), 2);
        assert_eq!(labels(&ctx, &s.fixed), ["0", "M"]);
        let p = spec_space(&ctx).unwrap();
        assert_eq!(labels(&ctx, &p.points), ["0"]);
    }

    #[test]
    fn max_of_z12_is_discrete() {
        let ctx = zmod(12);
        let s = max_space(&ctx).unwrap();
        assert_eq!(s.space.opens().len(), 4);
        assert_eq!(labels(&ctx, &s.fixed), ["(6)", "(3)", "(2)", "M"]);
    }
}
