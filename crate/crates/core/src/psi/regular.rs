use std::sync::Arc;

use serde::Serialize;

use crate::error::{violated, Error, Result};
use crate::order::FiniteLattice;
use crate::spectra::{FiniteQuantale, Finding};

/// Subframes are searched exhaustively up to this many elements.
pub const SUBFRAME_SEARCH_LIMIT: usize = 8;

fn require_frame(omega: &FiniteLattice) -> Result<()> {
    if omega.is_frame() {
        Ok(())
    } else {
        Err(Error::NotAFrame)
    }
}

/// `x ⪕ a` iff `a ∨ ¬x = 1`.
pub fn rather_below(omega: &FiniteLattice, x: usize, a: usize) -> Result<bool> {
    require_frame(omega)?;
    Ok(omega.join(a, omega.negation(x)) == omega.top())
}

/// `Ω^¬ = {a : a = ⋁{x : x ⪕ a}}`.
pub fn regular_part(omega: &FiniteLattice) -> Result<Vec<usize>> {
    require_frame(omega)?;
    let neg: Vec<usize> = omega.elements().map(|x| omega.negation(x)).collect();
    Ok(omega
        .elements()
        .filter(|&a| {
            let below = omega.elements().filter(|&x| omega.join(a, neg[x]) == omega.top());
            omega.join_all(below) == a
        })
        .collect())
}

pub fn is_regular(omega: &FiniteLattice) -> Result<bool> {
    Ok(regular_part(omega)?.len() == omega.len())
}

/// One stage `A^{r(α)}` of the regular-core iteration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreStage {
    /// Elements of `A` in this stage, ascending.
    pub carrier: Vec<usize>,
    /// `r(a)` for each `a` in `carrier`, joins taken inside the stage.
    pub r_stage: Vec<usize>,
    /// The same formula with joins taken in `A`, kept for comparison.
    pub r_ambient: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct RegularCoreTrace {
    /// `stages[0]` is all of `A`; the last entry is the core.
    pub stages: Vec<CoreStage>,
    /// Number of strict shrinking steps before the iteration repeats.
    pub stable_index: usize,
    /// Core carrier as elements of `A`.
    pub core_carrier: Vec<usize>,
    /// Core with the induced order; element `i` is `core_carrier[i]`.
    pub core: Arc<FiniteLattice>,
    pub findings: Vec<Finding>,
}

/// `r` on a stage `s`, with stage-relative and ambient joins.
fn stage_r(a: &FiniteQuantale, s: &[usize]) -> Result<CoreStage> {
    let l = a.lattice();
    let sl = l
        .induced(s)
        .map_err(|e| violated(format!("stage {s:?} is not a lattice: {e}")))?;
    let zero = s[sl.bottom()];
    let top = sl.top();
    // x^r = ⋁{y : yx = 0}, in stage positions and in A.
    let xr_stage: Vec<usize> = (0..s.len())
        .map(|x| sl.join_all((0..s.len()).filter(|&y| a.mul(s[y], s[x]) == zero)))
        .collect();
    let xr_ambient: Vec<usize> = (0..s.len())
        .map(|x| l.join_all(s.iter().copied().filter(|&y| a.mul(y, s[x]) == zero)))
        .collect();
    let r_stage = (0..s.len())
        .map(|p| s[sl.join_all((0..s.len()).filter(|&x| sl.join(p, xr_stage[x]) == top))])
        .collect();
    let r_ambient = s
        .iter()
        .map(|&p| {
            l.join_all(
                (0..s.len())
                    .filter(|&x| l.join(p, xr_ambient[x]) == l.top())
                    .map(|x| s[x]),
            )
        })
        .collect();
    Ok(CoreStage {
        carrier: s.to_vec(),
        r_stage,
        r_ambient,
    })
}

/// Subsets of `A` that are subframes (closed under joins and finite meets,
/// with `0` and `1`) and regular in their own right.
fn regular_subframes(l: &FiniteLattice) -> Vec<Vec<usize>> {
    let (bot, top) = (l.bottom(), l.top());
    let rest: Vec<usize> = l.elements().filter(|&x| x != bot && x != top).collect();
    let mut found = Vec::new();
    for mask in 0u32..(1 << rest.len()) {
        let mut carrier: Vec<usize> = (0..rest.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| rest[i])
            .collect();
        carrier.push(bot);
        carrier.push(top);
        carrier.sort_unstable();
        carrier.dedup();
        if !l.is_sublattice(&carrier) {
            continue;
        }
        let Ok(sub) = l.induced(&carrier) else { continue };
        if sub.is_frame() && is_regular(&sub).unwrap_or(false) {
            found.push(carrier);
        }
    }
    found
}

/// Iterates `A ⊇ A^r ⊇ A^{r(2)} ⊇ …` until a stage repeats. On a quantale
/// whose lattice is an idiom the core must be a regular frame containing
/// every regular subframe; other inputs get the same checks as findings.
pub fn regular_core(a: &FiniteQuantale) -> Result<RegularCoreTrace> {
    let l = a.lattice();
    let mut stages = Vec::new();
    let mut carrier: Vec<usize> = l.elements().collect();
    loop {
        let st = stage_r(a, &carrier)?;
        let next: Vec<usize> = (0..carrier.len())
            .filter(|&i| st.r_stage[i] == carrier[i])
            .map(|i| carrier[i])
            .collect();
        stages.push(st);
        if next == carrier {
            break;
        }
        if next.is_empty() {
            return Err(violated("a stage of the regular core has no fixed points"));
        }
        carrier = next;
    }
    let stable_index = stages.len() - 1;
    let core = Arc::new(l.induced(&carrier)?);
    let frame = core.is_frame();
    let regular = frame && is_regular(&core)?;
    let mut findings = vec![Finding::new(
        "regular core is a regular frame",
        regular,
        if frame { "not regular" } else { "not a frame" },
    )];
    if l.len() <= SUBFRAME_SEARCH_LIMIT {
        let escaped = regular_subframes(l)
            .into_iter()
            .find(|sf| !sf.iter().all(|x| carrier.contains(x)));
        findings.push(Finding::new(
            "every regular subframe lies in the regular core",
            escaped.is_none(),
            escaped
                .map(|sf| format!("{:?}", sf.iter().map(|&x| l.label(x)).collect::<Vec<_>>()))
                .unwrap_or_default(),
        ));
    }
    if a.is_quantale() && l.is_modular() {
        if let Some(f) = findings.iter().find(|f| !f.holds) {
            return Err(violated(format!("{}: {}", f.claim, f.detail)));
        }
    }
    Ok(RegularCoreTrace {
        stages,
        stable_index,
        core_carrier: carrier,
        core,
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_square_is_regular() {
        let b = FiniteLattice::boolean(2);
        for x in b.elements() {
            assert!(rather_below(&b, x, x).unwrap());
        }
        assert!(is_regular(&b).unwrap());
    }

    #[test]
    fn three_chain_regular_part() {
        let c = FiniteLattice::chain(3);
        assert_eq!(c.negation(1), 0);
        assert!(!rather_below(&c, 1, 1).unwrap());
        assert_eq!(regular_part(&c).unwrap(), vec![0, 2]);
        assert!(!is_regular(&c).unwrap());
    }

    #[test]
    fn non_frame_is_refused() {
        let m3 = FiniteLattice::diamond();
        assert_eq!(regular_part(&m3), Err(Error::NotAFrame));
        assert_eq!(rather_below(&m3, 1, 2), Err(Error::NotAFrame));
    }

    #[test]
    fn chain_with_meet_product() {
        // A 3-chain with product = meet is a frame that is not regular;
        // its core is {0, 1}.
        let l = Arc::new(FiniteLattice::chain(3));
        let p: Vec<usize> = (0..9).map(|i| (i / 3).min(i % 3)).collect();
        let q = FiniteQuantale::new(l, p, 1).unwrap();
        let t = regular_core(&q).unwrap();
        assert_eq!(t.core_carrier, vec![0, 2]);
        assert_eq!(t.stable_index, 1);
        assert!(t.findings.iter().all(|f| f.holds));
    }
}
