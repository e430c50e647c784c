use serde::Serialize;

use super::context::ModuleContext;
use crate::error::{violated, Error, Result};

/// Each characterization of primeness evaluated separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeReport {
    /// Fully invariant pairs.
    pub definition: bool,
    /// All pairs of submodules.
    pub all_submodules: bool,
    /// Pairs of submodules above `P`, forcing equality.
    pub above: bool,
    /// `M/P` is a prime module.
    pub quotient: bool,
}

impl PrimeReport {
    pub fn agree(&self) -> bool {
        self.definition == self.all_submodules
            && self.definition == self.above
            && self.definition == self.quotient
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SemiprimeReport {
    pub definition: bool,
    pub all_submodules: bool,
    pub above: bool,
    pub elementwise: bool,
    pub prime_intersection: bool,
}

impl SemiprimeReport {
    pub fn agree(&self) -> bool {
        let d = self.definition;
        self.all_submodules == d
            && self.above == d
            && self.elementwise == d
            && self.prime_intersection == d
    }
}

fn require_proper_fi(ctx: &ModuleContext, p: usize) -> Result<()> {
    if !ctx.is_fi(p) {
        return Err(Error::NotFullyInvariant);
    }
    if p == ctx.top() {
        return Err(Error::NotProper);
    }
    Ok(())
}

/// Primeness by the definition only: `N_M K <= P` with `N, K` fully
/// invariant forces `N <= P` or `K <= P`.
pub fn is_prime_definition(ctx: &ModuleContext, p: usize) -> Result<bool> {
    require_proper_fi(ctx, p)?;
    let l = ctx.lattice();
    let fi = ctx.fi();
    Ok(fi.iter().all(|&a| {
        fi.iter()
            .all(|&b| !l.leq(ctx.product(a, b), p) || l.leq(a, p) || l.leq(b, p))
    }))
}

/// Evaluates all four characterizations. When `M` passes the projectivity
/// probe they are required to agree.
pub fn is_prime(ctx: &ModuleContext, p: usize) -> Result<PrimeReport> {
    let definition = is_prime_definition(ctx, p)?;
    let l = ctx.lattice();
    let n = ctx.len();
    let all_submodules = (0..n).all(|a| {
        (0..n).all(|b| !l.leq(ctx.product(a, b), p) || l.leq(a, p) || l.leq(b, p))
    });
    let above_p: Vec<usize> = (0..n).filter(|&a| l.leq(p, a)).collect();
    let above = above_p.iter().all(|&a| {
        above_p
            .iter()
            .all(|&b| !l.leq(ctx.product(a, b), p) || a == p || b == p)
    });
    let q = ctx.quotient_context(p)?;
    let quotient = is_prime_definition(&q, q.zero())?;
    let report = PrimeReport {
        definition,
        all_submodules,
        above,
        quotient,
    };
    if !report.agree() && ctx.projectivity_probe()?.passes {
        return Err(violated(format!(
            "prime characterizations disagree at {}: {report:?}",
            ctx.label(p)
        )));
    }
    Ok(report)
}

/// `Spec(M)`: proper fully invariant submodules prime by definition.
pub fn primes(ctx: &ModuleContext) -> Vec<usize> {
    ctx.fi()
        .iter()
        .copied()
        .filter(|&p| p != ctx.top() && is_prime_definition(ctx, p).unwrap_or(false))
        .collect()
}

pub fn is_semiprime_definition(ctx: &ModuleContext, s: usize) -> Result<bool> {
    require_proper_fi(ctx, s)?;
    let l = ctx.lattice();
    Ok(ctx
        .fi()
        .iter()
        .all(|&a| !l.leq(ctx.product(a, a), s) || l.leq(a, s)))
}

pub fn is_semiprime(ctx: &ModuleContext, s: usize) -> Result<SemiprimeReport> {
    let definition = is_semiprime_definition(ctx, s)?;
    let l = ctx.lattice();
    let n = ctx.len();
    let all_submodules = (0..n).all(|a| !l.leq(ctx.product(a, a), s) || l.leq(a, s));
    let above = (0..n)
        .filter(|&a| l.leq(s, a))
        .all(|a| !l.leq(ctx.product(a, a), s) || a == s);
    let m = ctx.module();
    let elementwise = (0..m.size()).all(|x| {
        let c = ctx.cyclic(x);
        !l.leq(ctx.product(c, c), s) || ctx.submodule(s).contains(x)
    });
    let prime_intersection =
        l.meet_all(primes(ctx).into_iter().filter(|&p| l.leq(s, p))) == s;
    let report = SemiprimeReport {
        definition,
        all_submodules,
        above,
        elementwise,
        prime_intersection,
    };
    if !report.agree() && ctx.projectivity_probe()?.passes {
        return Err(violated(format!(
            "semiprime characterizations disagree at {}: {report:?}",
            ctx.label(s)
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finmod::{FiniteModule, FiniteRing};

    fn z12() -> ModuleContext {
        ModuleContext::new(FiniteModule::regular(Arc::new(FiniteRing::zmod(12).unwrap()))).unwrap()
    }

    fn find(ctx: &ModuleContext, label: &str) -> usize {
        (0..ctx.len()).find(|&s| ctx.label(s) == label).unwrap()
    }

    #[test]
    fn primes_of_z12() {
        let ctx = z12();
        let r = is_prime(&ctx, find(&ctx, "(2)")).unwrap();
        assert!(r.definition && r.agree());
        assert!(!is_prime(&ctx, find(&ctx, "(4)")).unwrap().definition);
        let spec: Vec<&str> = primes(&ctx).iter().map(|&p| ctx.label(p)).collect();
        assert_eq!(spec, vec!["(3)", "(2)"]);
    }

    #[test]
    fn semiprimes_of_z12() {
        let ctx = z12();
        assert!(is_semiprime(&ctx, find(&ctx, "(6)")).unwrap().definition);
        assert!(!is_semiprime(&ctx, find(&ctx, "(4)")).unwrap().definition);
        assert!(!is_semiprime(&ctx, ctx.zero()).unwrap().definition);
    }

    #[test]
    fn simple_ring_is_prime() {
        let r = Arc::new(FiniteRing::matrix(2, 2).unwrap());
        let ctx = ModuleContext::new(FiniteModule::regular(r)).unwrap();
        assert!(is_prime(&ctx, ctx.zero()).unwrap().definition);
    }

    #[test]
    fn preconditions() {
        let r = Arc::new(FiniteRing::zmod(2).unwrap());
        let ctx = ModuleContext::new(FiniteModule::cyclic_product(r, &[2, 2]).unwrap()).unwrap();
        assert_eq!(is_prime(&ctx, 1), Err(Error::NotFullyInvariant));
        assert_eq!(is_prime(&ctx, ctx.top()), Err(Error::NotProper));
    }
}
