use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finmod::ModuleContext;
use crate::order::subsets::join_preservation_witness;
use crate::order::FiniteLattice;

/// A finite lattice with an associative product. Distributivity over
/// arbitrary joins on each side is recorded rather than required, since
/// the product of submodules only has it under projectivity.
#[derive(Debug, Clone)]
pub struct FiniteQuantale {
    lattice: Arc<FiniteLattice>,
    product: Vec<usize>,
    unit: Option<usize>,
    left_distributive: bool,
    right_distributive: bool,
}

impl FiniteQuantale {
    pub fn new(lattice: Arc<FiniteLattice>, product: Vec<usize>, seed: u64) -> Result<Self> {
        let n = lattice.len();
        if product.len() != n * n || product.iter().any(|&p| p >= n) {
            return Err(Error::InvalidTables("product table has the wrong shape".into()));
        }
        let mul = |a: usize, b: usize| product[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let unit = (0..n).find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a));
        // (⋁X)a = ⋁{xa} and a(⋁Y) = ⋁{ay}
        let left_distributive = (0..n).all(|a| {
            join_preservation_witness(&lattice, &lattice, &|x| mul(x, a), seed).is_none()
        });
        let right_distributive = (0..n).all(|a| {
            join_preservation_witness(&lattice, &lattice, &|y| mul(a, y), seed).is_none()
        });
        Ok(Self {
            lattice,
            product,
            unit,
            left_distributive,
            right_distributive,
        })
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn product_table(&self) -> &[usize] {
        &self.product
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.lattice.len() + b]
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn is_quantale(&self) -> bool {
        self.left_distributive && self.right_distributive
    }

    pub fn left_distributive(&self) -> bool {
        self.left_distributive
    }

    pub fn right_distributive(&self) -> bool {
        self.right_distributive
    }

    /// Directed joins in a finite lattice are attained, so the quasi-quantale
    /// laws reduce to monotonicity of the product in each argument on `b`.
    fn monotone_on(&self, b: &[usize]) -> Option<(usize, usize, usize)> {
        let l = &self.lattice;
        for &x in b {
            for &y in b {
                if !l.leq(x, y) {
                    continue;
                }
                for &a in b {
                    if !l.leq(self.mul(x, a), self.mul(y, a)) || !l.leq(self.mul(a, x), self.mul(a, y)) {
                        return Some((x, y, a));
                    }
                }
            }
        }
        None
    }
}

/// `Λ^fi(M)` with the product `N_M K`, indexed like `ctx.fi_lattice()`.
pub fn quantale_of_submodules(ctx: &ModuleContext) -> Result<FiniteQuantale> {
    FiniteQuantale::new(ctx.fi_lattice().clone(), ctx.fi_product_table(), ctx.seed())
}

/// Elements `p != 1` with `ab <= p` forcing `a <= p` or `b <= p` for all
/// `a, b ∈ B`. `B` must be a sub-join-semilattice on which the product is
/// monotone.
pub fn primes_relative(a: &FiniteQuantale, b: &[usize]) -> Result<Vec<usize>> {
    let l = a.lattice();
    if b.iter().any(|&x| x >= l.len()) {
        return Err(Error::NotSubQuasiQuantale("element out of range".into()));
    }
    if !b.contains(&l.bottom()) {
        return Err(Error::NotSubQuasiQuantale("missing the empty join".into()));
    }
    for &x in b {
        for &y in b {
            if !b.contains(&l.join(x, y)) {
                return Err(Error::NotSubQuasiQuantale(format!(
                    "join of {} and {} is outside",
                    l.label(x),
                    l.label(y)
                )));
            }
        }
    }
    if let Some((x, y, z)) = a.monotone_on(b) {
        return Err(Error::NotSubQuasiQuantale(format!(
            "product not monotone: {} <= {} but products with {} are not ordered",
            l.label(x),
            l.label(y),
            l.label(z)
        )));
    }
    Ok(l.elements()
        .filter(|&p| {
            p != l.top()
                && b.iter().all(|&x| {
                    b.iter()
                        .all(|&y| !l.leq(a.mul(x, y), p) || l.leq(x, p) || l.leq(y, p))
                })
        })
        .collect())
}
