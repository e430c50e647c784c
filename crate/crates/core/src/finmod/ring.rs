use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel;

/// How to build a ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RingSpec {
    Zmod {
        n: usize,
    },
    Product {
        factors: Vec<RingSpec>,
    },
    /// `dim × dim` matrices over the prime field `F_q`, `q ∈ {2, 3}`.
    Matrix {
        dim: usize,
        q: usize,
    },
    Tables {
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        zero: usize,
        one: usize,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
}

/// A finite associative ring with identity given by its operation tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRing {
    size: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    zero: usize,
    one: usize,
    labels: Vec<String>,
    modulus: Option<usize>,
}

impl FiniteRing {
    pub fn build(spec: &RingSpec, cap: usize) -> Result<Self> {
        let size = spec_size(spec)?;
        if size > cap as u128 {
            return Err(Error::SizeCapExceeded {
                what: "ring size",
                needed: size,
                cap: cap as u128,
            });
        }
        match spec {
            RingSpec::Zmod { n } => Self::zmod(*n),
            RingSpec::Product { factors } => {
                let rings = factors
                    .iter()
                    .map(|f| Self::build(f, cap))
                    .collect::<Result<Vec<_>>>()?;
                Self::product(&rings)
            }
            RingSpec::Matrix { dim, q } => Self::matrix(*dim, *q),
            RingSpec::Tables {
                add,
                mul,
                zero,
                one,
                labels,
            } => {
                let n = add.len();
                if mul.len() != n || add.iter().chain(mul).any(|row| row.len() != n) {
                    return Err(Error::InvalidTables("tables must be square and equal-sized".into()));
                }
                let labels = labels
                    .clone()
                    .unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
                Self::from_tables(
                    n,
                    |a, b| add[a][b],
                    |a, b| mul[a][b],
                    *zero,
                    *one,
                    labels,
                )
            }
        }
    }

    /// Validates every ring axiom; failures carry a witness triple.
    pub fn from_tables(
        size: usize,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
        zero: usize,
        one: usize,
        labels: Vec<String>,
    ) -> Result<Self> {
        if size == 0 || zero >= size || one >= size || labels.len() != size {
            return Err(Error::InvalidTables("bad size, zero, one or labels".into()));
        }
        let mut at = vec![0u32; size * size];
        let mut mt = vec![0u32; size * size];
        for a in 0..size {
            for b in 0..size {
                let (s, p) = (add(a, b), mul(a, b));
                if s >= size || p >= size {
                    return Err(Error::InvalidTables(format!("entry at ({a}, {b}) out of range")));
                }
                at[a * size + b] = s as u32;
                mt[a * size + b] = p as u32;
            }
        }
        let neg = check_abelian_group(size, &at, zero)?;
        let m = |a: usize, b: usize| mt[a * size + b] as usize;
        let s = |a: usize, b: usize| at[a * size + b] as usize;
        if let Some(a) = (0..size).find(|&a| m(one, a) != a || m(a, one) != a) {
            return Err(Error::InvalidTables(format!("one is not an identity at {a}")));
        }
        let witness = parallel::find_first(size, |a| {
            for b in 0..size {
                for c in 0..size {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Some(format!("multiplication not associative at ({a}, {b}, {c})"));
                    }
                    if m(a, s(b, c)) != s(m(a, b), m(a, c)) {
                        return Some(format!("left distributivity fails at ({a}, {b}, {c})"));
                    }
                    if m(s(b, c), a) != s(m(b, a), m(c, a)) {
                        return Some(format!("right distributivity fails at ({a}, {b}, {c})"));
                    }
                }
            }
            None
        });
        if let Some(w) = witness {
            return Err(Error::InvalidTables(w));
        }
        Ok(Self {
            size,
            add: at,
            mul: mt,
            neg,
            zero,
            one,
            labels,
            modulus: None,
        })
    }

    pub fn zmod(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTables("zmod needs n >= 1".into()));
        }
        let mut r = Self::from_tables(
            n,
            |a, b| (a + b) % n,
            |a, b| (a * b) % n,
            0,
            1 % n,
            (0..n).map(|i| i.to_string()).collect(),
        )?;
        r.modulus = Some(n);
        Ok(r)
    }

    /// Direct product; elements are tuples in mixed radix with the first
    /// factor most significant.
    pub fn product(factors: &[FiniteRing]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidTables("empty product".into()));
        }
        let size: usize = factors.iter().map(|f| f.size).product();
        let decode = |mut x: usize| -> Vec<usize> {
            let mut out = vec![0; factors.len()];
            for (i, f) in factors.iter().enumerate().rev() {
                out[i] = x % f.size;
                x /= f.size;
            }
            out
        };
        let encode = |xs: &[usize]| xs.iter().zip(factors).fold(0, |acc, (&x, f)| acc * f.size + x);
        let lift = |op: &dyn Fn(&FiniteRing, usize, usize) -> usize, a: usize, b: usize| {
            let (xa, xb) = (decode(a), decode(b));
            let out: Vec<usize> = factors
                .iter()
                .enumerate()
                .map(|(i, f)| op(f, xa[i], xb[i]))
                .collect();
            encode(&out)
        };
        let labels = (0..size)
            .map(|x| {
                let parts: Vec<&str> = decode(x)
                    .iter()
                    .zip(factors)
                    .map(|(&c, f)| f.labels[c].as_str())
                    .collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let zero = encode(&factors.iter().map(|f| f.zero).collect::<Vec<_>>());
        let one = encode(&factors.iter().map(|f| f.one).collect::<Vec<_>>());
        Self::from_tables(
            size,
            |a, b| lift(&|f, x, y| f.add(x, y), a, b),
            |a, b| lift(&|f, x, y| f.mul(x, y), a, b),
            zero,
            one,
            labels,
        )
    }

    /// `dim × dim` matrices over `F_q`. Entries are stored row-major and the
    /// element index reads them as base-`q` digits, first entry most
    /// significant.
    pub fn matrix(dim: usize, q: usize) -> Result<Self> {
        if !(q == 2 || q == 3) || dim == 0 {
            return Err(Error::InvalidTables(format!("unsupported matrix ring {dim}x{dim} over F_{q}")));
        }
        let cells = dim * dim;
        let size = q.pow(cells as u32);
        let decode = |mut x: usize| -> Vec<usize> {
            let mut out = vec![0; cells];
            for k in (0..cells).rev() {
                out[k] = x % q;
                x /= q;
            }
            out
        };
        let encode = |e: &[usize]| e.iter().fold(0, |acc, &d| acc * q + d);
        let labels = (0..size)
            .map(|x| {
                let e = decode(x);
                let rows: Vec<String> = e
                    .chunks(dim)
                    .map(|r| r.iter().map(|d| d.to_string()).collect())
                    .collect();
                format!("[{}]", rows.join(";"))
            })
            .collect();
        let identity: Vec<usize> = (0..cells).map(|k| usize::from(k / dim == k % dim)).collect();
        Self::from_tables(
            size,
            |a, b| {
                let (x, y) = (decode(a), decode(b));
                encode(&x.iter().zip(&y).map(|(u, v)| (u + v) % q).collect::<Vec<_>>())
            },
            |a, b| {
                let (x, y) = (decode(a), decode(b));
                let mut out = vec![0; cells];
                for i in 0..dim {
                    for j in 0..dim {
                        out[i * dim + j] =
                            (0..dim).map(|k| x[i * dim + k] * y[k * dim + j]).sum::<usize>() % q;
                    }
                }
                encode(&out)
            },
            0,
            encode(&identity),
            labels,
        )
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `Some(n)` for rings built as `Z/n`.
    pub fn modulus(&self) -> Option<usize> {
        self.modulus
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_central(&self, e: usize) -> bool {
        (0..self.size).all(|r| self.mul(e, r) == self.mul(r, e))
    }

    pub fn central_idempotents(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&e| self.mul(e, e) == e && self.is_central(e))
            .collect()
    }

    /// Two-sided ideal `RaR`: additive closure of `{s a r}`.
    pub fn principal_ideal(&self, a: usize) -> Vec<bool> {
        let n = self.size;
        let mut member = vec![false; n];
        let mut members = Vec::new();
        for s in 0..n {
            for r in 0..n {
                let x = self.mul(self.mul(s, a), r);
                if !member[x] {
                    member[x] = true;
                    members.push(x);
                }
            }
        }
        additive_closure(n, &mut member, &mut members, |x, y| self.add(x, y));
        member
    }

    /// `{x : x i = 0 for all i ∈ ideal}`.
    pub fn left_annihilator(&self, ideal: &[bool]) -> Vec<bool> {
        (0..self.size)
            .map(|x| (0..self.size).all(|i| !ideal[i] || self.mul(x, i) == self.zero))
            .collect()
    }
}

pub(crate) fn additive_closure(
    n: usize,
    member: &mut [bool],
    members: &mut Vec<usize>,
    add: impl Fn(usize, usize) -> usize,
) {
    debug_assert_eq!(member.len(), n);
    let mut i = 0;
    while i < members.len() {
        let x = members[i];
        let mut j = 0;
        while j <= i {
            let y = members[j];
            let s = add(x, y);
            if !member[s] {
                member[s] = true;
                members.push(s);
            }
            j += 1;
        }
        i += 1;
    }
}

/// Checks `(add, zero)` is an abelian group and returns the negation table.
pub(crate) fn check_abelian_group(n: usize, add: &[u32], zero: usize) -> Result<Vec<u32>> {
    let s = |a: usize, b: usize| add[a * n + b] as usize;
    for a in 0..n {
        if s(zero, a) != a {
            return Err(Error::InvalidTables(format!("zero is not neutral at {a}")));
        }
        for b in 0..n {
            if s(a, b) != s(b, a) {
                return Err(Error::InvalidTables(format!("addition not commutative at ({a}, {b})")));
            }
        }
    }
    let assoc = parallel::find_first(n, |a| {
        (0..n).find_map(|b| {
            (0..n)
                .find(|&c| s(s(a, b), c) != s(a, s(b, c)))
                .map(|c| (a, b, c))
        })
    });
    if let Some((a, b, c)) = assoc {
        return Err(Error::InvalidTables(format!("addition not associative at ({a}, {b}, {c})")));
    }
    (0..n)
        .map(|a| {
            (0..n)
                .find(|&b| s(a, b) == zero)
                .map(|b| b as u32)
                .ok_or_else(|| Error::InvalidTables(format!("{a} has no additive inverse")))
        })
        .collect()
}

fn spec_size(spec: &RingSpec) -> Result<u128> {
    Ok(match spec {
        RingSpec::Zmod { n } => *n as u128,
        RingSpec::Product { factors } => factors
            .iter()
            .map(spec_size)
            .try_fold(1u128, |acc, s| s.map(|s| acc.saturating_mul(s)))?,
        RingSpec::Matrix { dim, q } => (*q as u128).saturating_pow((dim * dim) as u32),
        RingSpec::Tables { add, .. } => add.len() as u128,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_12() {
        let r = FiniteRing::build(&RingSpec::Zmod { n: 12 }, 4096).unwrap();
        assert_eq!(r.size(), 12);
        assert_eq!(r.mul(5, 7), 11);
        assert!(r.is_commutative());
    }

    /// Oracle: multiply 2x2 matrices over F2 written out by hand.
    #[test]
    fn matrix_2x2_over_f2() {
        let r = FiniteRing::matrix(2, 2).unwrap();
        assert_eq!(r.size(), 16);
        assert!(!r.is_commutative());
        let m = |a: [usize; 4]| a.iter().fold(0, |acc, &d| acc * 2 + d);
        // [[1,1],[0,1]] * [[1,0],[1,1]] = [[0,1],[1,1]]
        assert_eq!(r.mul(m([1, 1, 0, 1]), m([1, 0, 1, 1])), m([0, 1, 1, 1]));
        // [[1,0],[1,1]] * [[1,1],[0,1]] = [[1,1],[1,0]]
        assert_eq!(r.mul(m([1, 0, 1, 1]), m([1, 1, 0, 1])), m([1, 1, 1, 0]));
        assert_eq!(r.central_idempotents(), vec![0, r.one()]);
    }

    #[test]
    fn product_of_two_fields() {
        let spec = RingSpec::Product {
            factors: vec![RingSpec::Zmod { n: 2 }, RingSpec::Zmod { n: 2 }],
        };
        let r = FiniteRing::build(&spec, 4096).unwrap();
        assert_eq!(r.size(), 4);
        let idem: Vec<usize> = (0..4).filter(|&e| r.mul(e, e) == e).collect();
        assert_eq!(idem.len(), 4);
        assert_eq!(r.label(2), "(1,0)");
    }

    #[test]
    fn invalid_tables_have_witness() {
        // Z3 addition with a broken multiplication
        let spec = RingSpec::Tables {
            add: (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect(),
            mul: (0..3).map(|a| (0..3).map(|b| if a == 2 && b == 2 { 2 } else { (a * b) % 3 }).collect()).collect(),
            zero: 0,
            one: 1,
            labels: None,
        };
        match FiniteRing::build(&spec, 4096) {
            Err(Error::InvalidTables(msg)) => assert!(msg.contains("at ("), "{msg}"),
            other => panic!("expected InvalidTables, got {other:?}"),
        }
    }

    #[test]
    fn cap_is_enforced() {
        let spec = RingSpec::Matrix { dim: 3, q: 3 };
        assert!(matches!(FiniteRing::build(&spec, 4096), Err(Error::SizeCapExceeded { .. })));
    }

    #[test]
    fn principal_ideals_in_z12() {
        let r = FiniteRing::zmod(12).unwrap();
        let i = r.principal_ideal(8);
        let members: Vec<usize> = (0..12).filter(|&x| i[x]).collect();
        assert_eq!(members, vec![0, 4, 8]);
        let ann = r.left_annihilator(&i);
        let members: Vec<usize> = (0..12).filter(|&x| ann[x]).collect();
        assert_eq!(members, vec![0, 3, 6, 9]);
    }
}
