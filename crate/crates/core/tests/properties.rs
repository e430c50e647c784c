//! Invariants over randomly generated instances and spaces.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use proptest::prelude::*;

use modtop::dot::hasse_dot;
use modtop::finmod::{Caps, ModuleContext};
use modtop::instance::InstanceSpec;
use modtop::psi::{is_regular, ler, psi, regular_core};
use modtop::spectra::quantale_of_submodules;
use modtop::topology::{is_sober, is_spatial, open_set_lattice, soberification, FiniteSpace};

fn build(shorthand: &str) -> ModuleContext {
    InstanceSpec::from_shorthand(shorthand)
        .unwrap()
        .build(Caps::default(), 11)
        .unwrap()
}

/// `Z/n` for small `n`, or a product of two such rings.
fn instance() -> impl Strategy<Value = String> {
    prop_oneof![
        (2usize..=40).prop_map(|n| format!("zmod:{n}")),
        (2usize..=6, 2usize..=6).prop_map(|(a, b)| format!("product:{a},{b}")),
    ]
}

/// Topology on `n` points generated by a random subbasis.
fn space() -> impl Strategy<Value = FiniteSpace> {
    (1usize..=5)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(0u32..(1 << n), 0..5)))
        .prop_map(|(n, basis)| {
            let mut opens: BTreeSet<u32> = [0, (1 << n) - 1].into();
            opens.extend(basis);
            loop {
                let mut next = opens.clone();
                for &a in &opens {
                    for &b in &opens {
                        next.insert(a | b);
                        next.insert(a & b);
                    }
                }
                if next == opens {
                    break;
                }
                opens = next;
            }
            let sets = opens.into_iter().map(|m| {
                let mut s = FixedBitSet::with_capacity(n);
                s.extend((0..n).filter(|i| m >> i & 1 == 1));
                s
            });
            FiniteSpace::new((0..n).map(|i| format!("p{i}")).collect(), sets).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn submodule_lattice_laws(sh in instance()) {
        let c = build(&sh);
        let l = c.lattice();
        prop_assert!(l.is_modular());
        for a in l.elements() {
            for b in l.elements() {
                prop_assert_eq!(l.meet(a, b), l.meet(b, a));
                prop_assert_eq!(l.join(a, l.meet(a, b)), a);
                prop_assert_eq!(l.leq(a, b), l.join(a, b) == b);
            }
        }
        // commutative rings: every submodule is fully invariant
        prop_assert_eq!(c.fi().len(), c.len());
    }

    #[test]
    fn psi_is_a_sublattice_fixed_by_ler(sh in instance()) {
        let c = build(&sh);
        let p = psi(&c);
        prop_assert!(p.contains(&c.zero()) && p.contains(&c.top()));
        prop_assert!(c.lattice().is_sublattice(&p));
        for &n in c.fi() {
            let q = ler(&c, n).unwrap();
            let s = q.submodule.expect("Ler of a fully invariant submodule");
            prop_assert!(c.lattice().leq(s, n), "Ler is not deflationary at {}", c.label(n));
            prop_assert_eq!(ler(&c, s).unwrap().submodule, Some(s));
            prop_assert_eq!(s == n, p.contains(&n));
        }
    }

    #[test]
    fn regular_core_is_regular(sh in instance()) {
        let c = build(&sh);
        let t = regular_core(&quantale_of_submodules(&c).unwrap()).unwrap();
        prop_assert!(is_regular(&t.core).unwrap());
        prop_assert!(t.findings.iter().all(|f| f.holds));
        // over a commutative ring the core is exactly Ψ
        let core: BTreeSet<usize> = t.core_carrier.iter().map(|&i| c.fi()[i]).collect();
        prop_assert_eq!(core, psi(&c).into_iter().collect::<BTreeSet<_>>());
    }

    #[test]
    fn dot_draws_one_edge_per_cover(sh in instance()) {
        let c = build(&sh);
        let dot = hasse_dot(c.lattice(), &sh);
        prop_assert_eq!(dot.matches(" -> ").count(), c.lattice().covers().len());
        prop_assert_eq!(dot.matches("[label=").count(), c.len());
    }

    #[test]
    fn opens_form_a_spatial_frame(s in space()) {
        let o = open_set_lattice(&s).unwrap();
        prop_assert!(o.is_frame());
        prop_assert!(is_spatial(&o).unwrap().spatial);
    }

    #[test]
    fn soberification_is_sober_and_idempotent(s in space()) {
        let sob = soberification(&s).unwrap();
        prop_assert!(is_sober(&sob.space).sober);
        prop_assert_eq!(sob.space.opens().len(), s.opens().len());
        let again = soberification(&sob.space).unwrap();
        prop_assert!(again.space.homeomorphism(&sob.space).is_some());
        if is_sober(&s).sober {
            prop_assert!(sob.space.homeomorphism(&s).is_some());
        }
    }
}
