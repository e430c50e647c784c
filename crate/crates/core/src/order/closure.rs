use serde::Serialize;

use super::{FiniteLattice, MonotoneMap};
use crate::error::{violated, Error, Result};

/// Which closure-type properties a self-map satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClosureFlags {
    pub inflator: bool,
    pub deflator: bool,
    pub idempotent: bool,
    pub prenucleus: bool,
    pub nucleus: bool,
    /// Only known when a product table was supplied.
    pub quantic: Option<bool>,
    pub multiplicative: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub flags: ClosureFlags,
    pub fixed_points: Vec<usize>,
    /// Fixed points with the induced order, when that order is a lattice.
    pub fixed_lattice: Option<FiniteLattice>,
}

impl ClosureReport {
    pub fn quantic(&self) -> Result<bool> {
        self.flags.quantic.ok_or(Error::ProductRequired)
    }

    pub fn multiplicative(&self) -> Result<bool> {
        self.flags.multiplicative.ok_or(Error::ProductRequired)
    }

    pub fn is_fixed(&self, a: usize) -> bool {
        self.fixed_points.binary_search(&a).is_ok()
    }
}

/// Classifies a self-map `j` of a lattice. `product` is an `n × n`
/// row-major table for the quantale product, if there is one.
///
/// When `j` is a nucleus its fixed points must form an idiom; when it is
/// multiplicative and `j(a)j(b) <= j(a) ∧ j(b)` everywhere, the fixed points
/// with product `j(ab)` must form an idiomatic quantale. Violations are
/// returned as errors.
pub fn classify_closure(j: &MonotoneMap, product: Option<&[usize]>) -> Result<ClosureReport> {
    let l = j.source();
    if !std::sync::Arc::ptr_eq(l, j.target()) && **l != **j.target() {
        return Err(violated("closure maps must be self-maps"));
    }
    let n = l.len();
    let f = |a: usize| j.apply(a);
    let inflator = l.elements().all(|a| l.leq(a, f(a)));
    let deflator = l.elements().all(|a| l.leq(f(a), a));
    let idempotent = l.elements().all(|a| f(f(a)) == f(a));
    let prenucleus = l
        .elements()
        .all(|a| l.elements().all(|b| f(l.meet(a, b)) == l.meet(f(a), f(b))));
    let nucleus = inflator && idempotent && prenucleus;
    let mul = |a: usize, b: usize| product.map(|p| p[a * n + b]);
    let (quantic, multiplicative) = match product {
        None => (None, None),
        Some(_) => {
            let base = inflator && idempotent;
            let q = base
                && l.elements().all(|a| {
                    l.elements()
                        .all(|b| l.leq(mul(f(a), f(b)).unwrap(), f(mul(a, b).unwrap())))
                });
            let m = base
                && l.elements().all(|a| {
                    l.elements()
                        .all(|b| l.meet(f(a), f(b)) == f(mul(a, b).unwrap()))
                });
            (Some(q), Some(m))
        }
    };
    let fixed_points: Vec<usize> = l.elements().filter(|&a| f(a) == a).collect();
    let fixed_lattice = l.induced(&fixed_points).ok();

    if nucleus {
        let fl = fixed_lattice
            .as_ref()
            .ok_or_else(|| violated("fixed points of a nucleus do not form a lattice"))?;
        if !fl.is_modular() || !fl.is_upper_continuous() {
            return Err(violated("fixed points of a nucleus are not an idiom"));
        }
    }
    if multiplicative == Some(true) {
        let p = product.expect("multiplicative implies a product");
        let inequality = l.elements().all(|a| {
            l.elements()
                .all(|b| l.leq(p[f(a) * n + f(b)], l.meet(f(a), f(b))))
        });
        if inequality {
            check_fixed_quantale(l, &fixed_points, &f, p)?;
        }
    }

    Ok(ClosureReport {
        flags: ClosureFlags {
            inflator,
            deflator,
            idempotent,
            prenucleus,
            nucleus,
            quantic,
            multiplicative,
        },
        fixed_points,
        fixed_lattice,
    })
}

/// Fixed points with product `a ∘ b = j(ab)` and joins `j(a ∨ b)`:
/// associative, distributing over binary and empty joins on both sides,
/// and an idiom as a lattice.
fn check_fixed_quantale(
    l: &FiniteLattice,
    fixed: &[usize],
    j: &impl Fn(usize) -> usize,
    p: &[usize],
) -> Result<()> {
    let n = l.len();
    let op = |a: usize, b: usize| j(p[a * n + b]);
    let jn = |a: usize, b: usize| j(l.join(a, b));
    let bottom = j(l.bottom());
    for &a in fixed {
        if op(a, bottom) != bottom || op(bottom, a) != bottom {
            return Err(violated("fixed-point product does not preserve the empty join"));
        }
        for &b in fixed {
            for &c in fixed {
                if op(op(a, b), c) != op(a, op(b, c)) {
                    return Err(violated("fixed-point product is not associative"));
                }
                if op(a, jn(b, c)) != jn(op(a, b), op(a, c))
                    || op(jn(b, c), a) != jn(op(b, a), op(c, a))
                {
                    return Err(violated("fixed-point product does not distribute over joins"));
                }
            }
        }
    }
    let fl = l.induced(fixed)?;
    if !fl.is_modular() {
        return Err(violated("fixed points are not modular"));
    }
    Ok(())
}
