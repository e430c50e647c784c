//! The theorem suite: a fixed list of named checks run on each instance,
//! with one verdict per check.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::finmod::{
    is_prime, is_semiprime, lemma_checks, module_predicates, simples_exhaustive, Caps,
    ModuleContext,
};
use crate::instance::InstanceSpec;
use crate::order::subsets::DEFAULT_SEED;
use crate::order::{is_adjunction, MonotoneMap};
use crate::parallel;
use crate::psi::{
    biregular_iff_psi, ler_is_r_check, negpsi_semiber_check, psi, psi_structure_checks,
    regular_core, SUBFRAME_SEARCH_LIMIT,
};
use crate::report::{Check, Verdict};
use crate::spectra::{
    max_space, mx_sobriety_report, pt_prt_compare, quantale_of_submodules, spec_space, Finding,
    SpectrumSpace,
};
use crate::topology::{open_set_lattice, pt_space, soberification};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteOptions {
    pub caps: Caps,
    pub seed: u64,
    /// Record wall-clock time per section. Off by default so reports are
    /// byte-for-byte reproducible.
    #[serde(skip)]
    pub timings: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            caps: Caps::default(),
            seed: DEFAULT_SEED,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub submodules: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fully_invariant: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projectivity_probe: Option<bool>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<&'static str, f64>>,
}

impl InstanceReport {
    pub fn check(&self, id: &str) -> Option<&Verdict> {
        self.checks.iter().find(|c| c.id == id).map(|c| &c.verdict)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict.is_fail())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub options: SuiteOptions,
    pub instances: Vec<InstanceReport>,
    pub totals: Totals,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.totals.fail == 0
    }

    pub fn instance(&self, id: &str) -> Option<&InstanceReport> {
        self.instances.iter().find(|r| r.id == id)
    }
}

type Runner = fn(&ModuleContext) -> Result<Vec<Check>>;

struct Section {
    name: &'static str,
    ids: &'static [&'static str],
    run: Runner,
}

const SECTIONS: &[Section] = &[
    Section {
        name: "lattice",
        ids: &["lattice-idiom", "fi-idiom"],
        run: lattice_section,
    },
    Section {
        name: "spec",
        ids: &[
            "spec-nucleus-multiplicative",
            "spec-nucleus-formula",
            "spec-frame-spatial",
            "spec-frame-iso-opens",
            "spec-sp-semiprimes",
            "spec-sober",
            "spec-adjunction",
            "spec-pt-sober",
            "spec-pt-opens-is-sob",
        ],
        run: spec_section,
    },
    Section {
        name: "max",
        ids: &[
            "max-nucleus-multiplicative",
            "max-nucleus-formula",
            "max-frame-spatial",
            "max-frame-iso-opens",
            "max-rm-formula",
            "max-ann-meet",
            "max-adjunction",
            "max-pt-sober",
            "max-pt-opens-is-sob",
        ],
        run: max_section,
    },
    Section {
        name: "mx-sobriety",
        ids: &["mx-tauprim", "mx-qdmax", "mx-sober-implies-pt", "mx-pt-implies-sober"],
        run: mx_section,
    },
    Section {
        name: "points",
        ids: &["prt-in-pt", "pt-in-spec", "simpf", "pmpt"],
        run: points_section,
    },
    Section {
        name: "characterizations",
        ids: &["prime-agreement", "semiprime-agreement"],
        run: characterization_section,
    },
    Section {
        name: "lemmas",
        ids: &["anninter", "rayita", "semi"],
        run: lemma_section,
    },
    Section {
        name: "psi",
        ids: &[
            "psi-contains-bounds",
            "psi-idempotent",
            "psi-meet-closed",
            "psi-meet-is-product",
            "psi-join-closed",
            "psi-spatial-frame",
            "ler-fixed-points",
            "ler-submodule",
            "ler-deflator",
            "ler-meet",
            "psi-pt-sober",
        ],
        run: psi_section,
    },
    Section {
        name: "regular-core",
        ids: &[
            "regcore-regular",
            "regcore-subframes",
            "regcore-pt-sober",
            "r-is-ler",
            "r-fixed-is-psi",
            "negpsi",
            "semiber",
            "semi-complement",
            "double-annihilator",
        ],
        run: regular_core_section,
    },
    Section {
        name: "biregular",
        ids: &["biregular-iff-psi", "ring-biregular-forms"],
        run: biregular_section,
    },
];

/// Every check id, in report order.
pub fn check_ids() -> impl Iterator<Item = &'static str> {
    SECTIONS.iter().flat_map(|s| s.ids.iter().copied())
}

const PROBE_FAILS: &str = "projectivity probe fails";

/// A finding as a verdict. A claim that does not hold on a module failing
/// the projectivity probe is skipped with the observation attached; on a
/// module passing it, the spectra layer has already raised an error.
fn from_finding(ctx: &ModuleContext, id: &str, f: &Finding) -> Result<Check> {
    if f.holds || ctx.projectivity_probe()?.passes {
        return Ok(Check::from_finding(id, f, None));
    }
    let reason = if f.detail.is_empty() {
        format!("{PROBE_FAILS}; claim does not hold here")
    } else {
        format!("{PROBE_FAILS}; claim does not hold here ({})", f.detail)
    };
    Ok(Check::new(id, Verdict::skipped(reason)))
}

fn lattice_section(ctx: &ModuleContext) -> Result<Vec<Check>> {
    let lc = ctx.lattice().classify(ctx.seed())?;
    let fc = ctx.fi_lattice().classify(ctx.seed())?;
    Ok(vec![
        Check::expect("lattice-idiom", lc.idiom, || format!("{lc:?}")),
        Check::expect("fi-idiom", fc.idiom, || format!("{fc:?}")),
    ])
}

/// Adjunction, sobriety of the point space of the fixed-point frame, and
/// `pt(O(S)) ≅ sob(S)`.
fn space_kernel_checks(ctx: &ModuleContext, s: &SpectrumSpace, prefix: &str) -> Result<Vec<Check>> {
    let u = MonotoneMap::new(ctx.fi_lattice().clone(), s.open_lattice.clone(), s.fiber.clone())?;
    let u_star = u.adjoint(ctx.seed())?;
    let adjunction = Check::expect(format!("{prefix}-adjunction"), is_adjunction(&u, &u_star), || {
        "U(a) <= V iff a <= U_*(V) fails".into()
    });
    let pt_sober = match pt_space(s.frame.clone()) {
        Ok(_) => Check::new(format!("{prefix}-pt-sober"), Verdict::Pass),
        Err(e) => Check::new(format!("{prefix}-pt-sober"), Verdict::Fail { witness: e.to_string() }),
    };
    let sob = pt_opens_is_sob(&s.space);
    Ok(vec![
        adjunction,
        pt_sober,
        Check::new(format!("{prefix}-pt-opens-is-sob"), Verdict::from_witness(sob)),
    ])
}

/// `soberification` checks the complement map `pt(O(S)) → sob(S)` is a
/// homeomorphism; the two spaces are also compared directly.
fn pt_opens_is_sob(space: &crate::topology::FiniteSpace) -> Option<String> {
    let sob = match soberification(space) {
        Ok(s) => s,
        Err(e) => return Some(e.to_string()),
    };
    let frame = match open_set_lattice(space) {
        Ok(f) => std::sync::Arc::new(f),
        Err(e) => return Some(e.to_string()),
    };
    match pt_space(frame) {
        Ok(pt) if pt.space.homeomorphism(&sob.space).is_some() => None,
        Ok(_) => Some("pt(O(S)) and sob(S) are not homeomorphic".into()),
        Err(e) => Some(e.to_string()),
    }
}

fn spec_section(ctx: &ModuleContext) -> Result<Vec<Check>> {
    let s = spec_space(ctx)?;
    let ids = &SECTIONS[1].ids[..6];
    let mut out = ids
        .iter()
        .zip(&s.findings)
        .map(|(id, f)| from_finding(ctx, id, f))
        .collect::<Result<Vec<_>>>()?;
    out.extend(space_kernel_checks(ctx, &s, "spec")?);
    Ok(out)
}

fn max_section(ctx: &ModuleContext) -> Result<Vec<Check>> {
    let s = max_space(ctx)?;
    let ids = &SECTIONS[2].ids[..6];
    let mut out = ids
        .iter()
        .zip(&s.findings)
        .map(|(id, f)| from_finding(ctx, id, f))
        .collect::<Result<Vec<_>>>()?;
    out.extend(space_kernel_checks(ctx, &s, "max")?);
    Ok(out)
}

fn mx_section(ctx: &ModuleContext) -> Result<Vec<Check>> {
    let max = max_space(ctx)?;
    let r = mx_sobriety_report(ctx, &max)?;
    SECTIONS[3]
        .ids
        .iter()
        .zip(&r.findings)
        .map(|(id, f)| from_finding(ctx, id, f))
        .collect()
}

fn points_section(ctx: &ModuleContext) -> Result<Vec<Check>> {
    let max = max_space(ctx)?;
    let c = pt_prt_compare(ctx, &max)?;
    let subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.contains(x));
    let names = |xs: &[usize]| xs.iter().map(|&x| ctx.label(x)).collect::<Vec<_>>().join(", ");
    let prt_in_pt = Finding::new(
        "prt(M) is contained in pt(SPm(M))",
        subset(&c.prt, &c.pt_spm),
        format!("prt {{{}}}, pt {{{}}}", names(&c.prt), names(&c.pt_spm)),
    );
    let pt_in_spec = Finding::new(
        "pt(SPm(M)) is contained in Spec(M)",
        subset(&c.pt_spm, &c.spec),
        format!("pt {{{}}}, Spec {{{}}}", names(&c.pt_spm), names(&c.spec)),
    );
    let simpf = if simples_exhaustive(ctx) {
        Check::expect("simpf", c.pt_spm == c.prt, || {
            format!("pt {{{}}}, prt {{{}}}", names(&c.pt_spm), names(&c.prt))
        })
    } else {
        Check::new("simpf", Verdict::skipped("simple modules not known to be exhaustive"))
    };
    let pmpt = if module_predicates(ctx)?.pm_module {
        Check::expect("pmpt", c.pt_spm == c.prt && c.prt == c.mx, || {
            format!("pt {{{}}}, prt {{{}}}, mx {{{}}}", names(&c.pt_spm), names(&c.prt), names(&c.mx))
        })
    } else {
        Check::new("pmpt", Verdict::skipped("not a pm-module"))
    };
    Ok(vec![
        from_finding(ctx, "prt-in-pt", &prt_in_pt)?,
        from_finding(ctx, "pt-in-spec", &pt_in_spec)?,
        simpf,
        pmpt,
    ])
}

fn characterization_section(ctx: &ModuleContext) -> Result<Vec<Check>> {
    let proper: Vec<usize> = ctx.fi().iter().copied().filter(|&s| s != ctx.top()).collect();
    let mut prime_bad = None;
    let mut semi_bad = None;
    for &s in &proper {
        if prime_bad.is_none() && !is_prime(ctx, s)?.agree() {
            prime_bad = Some(ctx.label(s).to_string());
        }
        if semi_bad.is_none() && !is_semiprime(ctx, s)?.agree() {
            semi_bad = Some(ctx.label(s).to_string());
        }
    }
    let as_finding = |claim, bad: Option<String>| {
        Finding::new(claim, bad.is_none(), bad.map(|s| format!("at {s}")).unwrap_or_default())
    };
    Ok(vec![
        from_finding(ctx, "prime-agreement", &as_finding("prime characterizations agree", prime_bad))?,
        from_finding(
            ctx,
            "semiprime-agreement",
            &as_finding("semiprime characterizations agree", semi_bad),
        )?,
    ])
}

fn lemma_section(ctx: &ModuleContext) -> Result<Vec<Check>> {
    Ok(lemma_checks(ctx)?
        .into_iter()
        .map(|r| {
            let verdict = match r.failure {
                None => Verdict::Pass,
                Some(w) if r.binding => Verdict::Fail { witness: w },
                Some(w) => Verdict::skipped(format!("{PROBE_FAILS}; fails here at {w}")),
            };
            Check::new(r.lemma, verdict)
        })
        .collect())
}

fn psi_section(ctx: &ModuleContext) -> Result<Vec<Check>> {
    let mut out = psi_structure_checks(ctx)?;
    let p = psi(ctx);
    let pt = match ctx.lattice().induced(&p) {
        Ok(l) if l.is_frame() => match pt_space(std::sync::Arc::new(l)) {
            Ok(_) => Verdict::Pass,
            Err(e) => Verdict::Fail { witness: e.to_string() },
        },
        _ => Verdict::skipped("Ψ(M) is not a frame here"),
    };
    out.push(Check::new("psi-pt-sober", pt));
    Ok(out)
}

fn regular_core_section(ctx: &ModuleContext) -> Result<Vec<Check>> {
    let q = quantale_of_submodules(ctx)?;
    let trace = regular_core(&q)?;
    let mut out = vec![from_finding(ctx, "regcore-regular", &trace.findings[0])?];
    out.push(match trace.findings.get(1) {
        Some(f) => from_finding(ctx, "regcore-subframes", f)?,
        None => Check::new(
            "regcore-subframes",
            Verdict::skipped(format!("more than {SUBFRAME_SEARCH_LIMIT} elements")),
        ),
    });
    let pt = if trace.core.is_frame() {
        Verdict::from_witness(pt_space(trace.core.clone()).err().map(|e| e.to_string()))
    } else {
        Verdict::skipped("core is not a frame here")
    };
    out.push(Check::new("regcore-pt-sober", pt));
    out.extend(ler_is_r_check(ctx)?);
    out.extend(negpsi_semiber_check(ctx)?.checks);
    Ok(out)
}

fn biregular_section(ctx: &ModuleContext) -> Result<Vec<Check>> {
    let mut out = biregular_iff_psi(ctx)?.checks;
    if out.len() == 1 {
        out.push(Check::new("ring-biregular-forms", Verdict::skipped("not a regular module")));
    }
    Ok(out)
}

fn elapsed_ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e5).round() / 100.0
}

/// Runs every section on one instance. A section that errors marks each of
/// its checks failed with the error, so every id appears exactly once.
pub fn run_instance(spec: &InstanceSpec, opts: &SuiteOptions) -> InstanceReport {
    let mut timings = BTreeMap::new();
    let started = Instant::now();
    let built = spec.build(opts.caps, opts.seed);
    timings.insert("build", elapsed_ms(started));
    let ctx = match built {
        Ok(ctx) => ctx,
        Err(e) => {
            let witness = format!("instance did not build: {e}");
            return InstanceReport {
                id: spec.id().to_string(),
                module_size: None,
                submodules: None,
                fully_invariant: None,
                projectivity_probe: None,
                checks: check_ids()
                    .map(|id| Check::new(id, Verdict::Fail { witness: witness.clone() }))
                    .collect(),
                timings_ms: opts.timings.then_some(timings),
            };
        }
    };
    let probe = ctx.projectivity_probe().ok().map(|p| p.passes);
    let mut checks = Vec::new();
    for section in SECTIONS {
        let t = Instant::now();
        match (section.run)(&ctx) {
            Ok(cs) => {
                debug_assert_eq!(
                    cs.iter().map(|c| c.id.as_str()).collect::<Vec<_>>(),
                    section.ids,
                    "section {}",
                    section.name
                );
                checks.extend(cs);
            }
            Err(e) => checks.extend(
                section
                    .ids
                    .iter()
                    .map(|id| Check::new(*id, Verdict::Fail { witness: e.to_string() })),
            ),
        }
        timings.insert(section.name, elapsed_ms(t));
    }
    InstanceReport {
        id: spec.id().to_string(),
        module_size: Some(ctx.module().size()),
        submodules: Some(ctx.len()),
        fully_invariant: Some(ctx.fi().len()),
        projectivity_probe: probe,
        checks,
        timings_ms: opts.timings.then_some(timings),
    }
}

/// Runs the suite over `specs` in parallel; reports keep the input order.
pub fn run_suite(specs: &[InstanceSpec], opts: &SuiteOptions) -> SuiteReport {
    let instances = parallel::map_slice(specs, |s| run_instance(s, opts));
    let mut totals = Totals::default();
    for c in instances.iter().flat_map(|r| &r.checks) {
        match c.verdict {
            Verdict::Pass => totals.pass += 1,
            Verdict::Fail { .. } => totals.fail += 1,
            Verdict::Skipped { .. } => totals.skipped += 1,
        }
    }
    SuiteReport {
        options: *opts,
        instances,
        totals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<&str> = check_ids().collect();
        let n = ids.len();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn z12_passes_everything_applicable() {
        let spec = InstanceSpec::from_shorthand("zmod:12").unwrap();
        let r = run_instance(&spec, &SuiteOptions::default());
        assert_eq!(r.checks.len(), check_ids().count());
        let fails: Vec<_> = r.failures().collect();
        assert!(fails.is_empty(), "{fails:?}");
        assert_eq!(r.check("negpsi"), Some(&Verdict::skipped("Ler fails to fix some annihilator")));
    }

    #[test]
    fn build_failure_fails_every_check() {
        let spec = InstanceSpec::from_shorthand("cyclic:3@4").unwrap();
        let r = run_instance(&spec, &SuiteOptions::default());
        assert_eq!(r.checks.len(), check_ids().count());
        assert!(r.checks.iter().all(|c| c.verdict.is_fail()));
    }
}
