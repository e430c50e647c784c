use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use modtop::dot::hasse_dot;
use modtop::finmod::{Caps, ModuleContext};
use modtop::instance::{corpus, CapsSpec, InstanceSpec};
use modtop::order::subsets::DEFAULT_SEED;
use modtop::psi::{ler, psi, regular_core};
use modtop::spectra::{max_space, quantale_of_submodules, spec_space, SpectrumSpace};
use modtop::suite::{run_suite, SuiteOptions};
use modtop::topology::{soberification, FiniteSpace};

#[derive(Parser)]
#[command(name = "modtop", version, about = "Frames, spectra and sobriety of finite modules")]
struct Cli {
    /// Overrides as `size=<n>,hom=<n>`.
    #[arg(long, global = true, value_parser = parse_caps)]
    caps: Option<CapsSpec>,
    /// Seed for randomized subset checks on large lattices.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The submodule lattice, or its fully invariant part.
    Lattice {
        instance: String,
        #[arg(long)]
        fi: bool,
        /// Print the Hasse diagram as DOT instead of a listing.
        #[arg(long)]
        dot: bool,
    },
    /// Spec(M), SP(M) and sobriety.
    Spec { instance: String },
    /// mx(M), SPm(M), the nucleus table and the isomorphism onto the opens.
    Max { instance: String },
    /// Ψ(M) and the Ler table.
    Psi { instance: String },
    /// Stages of the regular core of the fully invariant quantale.
    Regcore { instance: String },
    /// Sobriety and soberification of a spectrum.
    Sober {
        instance: String,
        #[arg(long, value_enum)]
        space: SpaceKind,
    },
    /// Runs the theorem suite and prints a JSON report.
    Check {
        #[arg(required_unless_present = "corpus", conflicts_with = "corpus")]
        instance: Option<String>,
        /// Run the built-in corpus.
        #[arg(long)]
        corpus: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include per-section wall-clock timings (the report is then no
        /// longer reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Hasse diagram as DOT.
    ExportDot {
        instance: String,
        #[arg(long, value_enum)]
        what: DotKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceKind {
    Spec,
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum DotKind {
    Lattice,
    Fi,
    Max,
    Spec,
}

fn parse_caps(s: &str) -> std::result::Result<CapsSpec, String> {
    CapsSpec::parse(s).map_err(|e| e.to_string())
}

/// A file path, inline JSON or a shorthand such as `zmod:12`.
fn load(arg: &str) -> Result<InstanceSpec> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        let spec = InstanceSpec::from_json(&text).with_context(|| format!("in {arg}"))?;
        return Ok(match spec.id {
            Some(_) => spec,
            None => spec.with_id(arg),
        });
    }
    Ok(InstanceSpec::parse(arg)?)
}

struct Run {
    caps: Option<CapsSpec>,
    seed: u64,
}

impl Run {
    /// Caps: defaults, then the instance file, then the command line.
    fn caps_for(&self, spec: &InstanceSpec) -> Caps {
        let base = spec.caps.unwrap_or_default().apply(Caps::default());
        self.caps.unwrap_or_default().apply(base)
    }

    fn context(&self, arg: &str) -> Result<ModuleContext> {
        let mut spec = load(arg)?;
        let caps = self.caps_for(&spec);
        spec.caps = None;
        Ok(spec.build(caps, self.seed)?)
    }
}

fn names(ctx: &ModuleContext, xs: &[usize]) -> String {
    let v: Vec<&str> = xs.iter().map(|&x| ctx.label(x)).collect();
    format!("{{{}}}", v.join(", "))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn print_findings(s: &SpectrumSpace) {
    for f in &s.findings {
        let mark = if f.holds { "ok  " } else { "FAIL" };
        if f.detail.is_empty() || f.holds {
            println!("  {mark} {}", f.claim);
        } else {
            println!("  {mark} {} ({})", f.claim, f.detail);
        }
    }
}

fn lattice(ctx: &ModuleContext, fi: bool, dot: bool) -> Result<()> {
    let l = if fi { ctx.fi_lattice() } else { ctx.lattice() };
    let name = if fi { "fi" } else { "lattice" };
    if dot {
        return emit(&hasse_dot(l, name), None);
    }
    let class = l.classify(ctx.seed())?;
    println!("{} elements, {} covers", l.len(), l.covers().len());
    println!(
        "modular {}, distributive {}, idiom {}, frame {}",
        class.modular, class.distributive, class.idiom, class.frame
    );
    for a in l.elements() {
        let up: Vec<&str> = l
            .covers()
            .into_iter()
            .filter(|&(x, _)| x == a)
            .map(|(_, y)| l.label(y))
            .collect();
        println!("  {:<12} < {}", l.label(a), up.join(", "));
    }
    let points: Vec<&str> = l.points().into_iter().map(|p| l.label(p)).collect();
    println!("points: {{{}}}", points.join(", "));
    Ok(())
}

fn spec(ctx: &ModuleContext) -> Result<()> {
    let s = spec_space(ctx)?;
    println!("Spec(M) = {}", names(ctx, &s.points));
    println!("SP(M)   = {}", names(ctx, &s.fixed));
    print_sobriety(&s.space);
    print_findings(&s);
    Ok(())
}

fn print_sobriety(space: &FiniteSpace) {
    let r = modtop::topology::is_sober(space);
    println!("sober: {}", r.sober);
    for d in &r.defects {
        println!("  {d}");
    }
}

fn max(ctx: &ModuleContext) -> Result<()> {
    let s = max_space(ctx)?;
    println!("mx(M)  = {}", names(ctx, &s.points));
    println!("SPm(M) = {}  (|SPm| = {})", names(ctx, &s.fixed), s.fixed.len());
    println!("tau:");
    for (i, &n) in ctx.fi().iter().enumerate() {
        println!("  {:<12} -> {}", ctx.label(n), ctx.label(ctx.fi()[s.nucleus.apply(i)]));
    }
    println!("SPm(M) -> O(mx(M)):");
    for &k in &s.fixed {
        let open = s.open_of(ctx, k).expect("fixed points are fully invariant");
        println!("  {:<12} -> {}", ctx.label(k), s.space.set_label(open));
    }
    print_sobriety(&s.space);
    print_findings(&s);
    Ok(())
}

fn psi_cmd(ctx: &ModuleContext) -> Result<()> {
    println!("Psi(M) = {}", names(ctx, &psi(ctx)));
    println!("Ler:");
    for &n in ctx.fi() {
        let l = ler(ctx, n)?;
        let value = match l.submodule {
            Some(s) => ctx.label(s).to_string(),
            None => format!("{:?} (not a submodule)", l.members.ones().collect::<Vec<_>>()),
        };
        println!("  {:<12} -> {value}", ctx.label(n));
    }
    Ok(())
}

fn regcore(ctx: &ModuleContext) -> Result<()> {
    let q = quantale_of_submodules(ctx)?;
    let t = regular_core(&q)?;
    let l = q.lattice();
    for (i, st) in t.stages.iter().enumerate() {
        let carrier: Vec<&str> = st.carrier.iter().map(|&x| l.label(x)).collect();
        println!("stage {i}: {{{}}}", carrier.join(", "));
        for (j, &a) in st.carrier.iter().enumerate() {
            let (rs, ra) = (st.r_stage[j], st.r_ambient[j]);
            if rs == ra {
                println!("  r({}) = {}", l.label(a), l.label(rs));
            } else {
                println!("  r({}) = {} (ambient joins give {})", l.label(a), l.label(rs), l.label(ra));
            }
        }
    }
    println!("stable after {} step(s)", t.stable_index);
    for f in &t.findings {
        println!("  {} {}", if f.holds { "ok  " } else { "FAIL" }, f.claim);
    }
    Ok(())
}

fn sober(ctx: &ModuleContext, kind: SpaceKind) -> Result<()> {
    let s = match kind {
        SpaceKind::Spec => spec_space(ctx)?,
        SpaceKind::Max => max_space(ctx)?,
    };
    println!("points: {}", names(ctx, &s.points));
    print_sobriety(&s.space);
    let sob = soberification(&s.space)?;
    println!("soberification: {} points", sob.space.len());
    for p in 0..sob.space.len() {
        println!("  {}", sob.space.label(p));
    }
    for (p, &z) in sob.zeta.iter().enumerate() {
        println!("  zeta({}) = {}", s.space.label(p), sob.space.label(z));
    }
    Ok(())
}

fn check(run: &Run, instance: Option<&str>, out: Option<&Path>, timings: bool) -> Result<bool> {
    let specs = match instance {
        Some(arg) => {
            let mut spec = load(arg)?;
            let caps = run.caps_for(&spec);
            spec.caps = Some(CapsSpec {
                max_size: Some(caps.size),
                max_hom_candidates: Some(caps.hom),
            });
            vec![spec]
        }
        None => corpus(),
    };
    let opts = SuiteOptions {
        caps: run.caps.unwrap_or_default().apply(Caps::default()),
        seed: run.seed,
        timings,
    };
    let report = run_suite(&specs, &opts);
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(&text, out)?;
    for r in &report.instances {
        let failures: Vec<_> = r.failures().collect();
        for c in failures.iter().take(5) {
            eprintln!("{}: {} {}", r.id, c.id, c.verdict);
        }
        if failures.len() > 5 {
            eprintln!("{}: ... and {} more failing checks", r.id, failures.len() - 5);
        }
    }
    Ok(report.passed())
}

fn export_dot(ctx: &ModuleContext, what: DotKind, out: Option<&Path>) -> Result<()> {
    let text = match what {
        DotKind::Lattice => hasse_dot(ctx.lattice(), "lattice"),
        DotKind::Fi => hasse_dot(ctx.fi_lattice(), "fi"),
        DotKind::Max => hasse_dot(&max_space(ctx)?.frame, "SPm"),
        DotKind::Spec => hasse_dot(&spec_space(ctx)?.frame, "SP"),
    };
    emit(&text, out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = Run {
        caps: cli.caps,
        seed: cli.seed,
    };
    let outcome = match &cli.command {
        Command::Lattice { instance, fi, dot } => {
            run.context(instance).and_then(|c| lattice(&c, *fi, *dot)).map(|_| true)
        }
        Command::Spec { instance } => run.context(instance).and_then(|c| spec(&c)).map(|_| true),
        Command::Max { instance } => run.context(instance).and_then(|c| max(&c)).map(|_| true),
        Command::Psi { instance } => run.context(instance).and_then(|c| psi_cmd(&c)).map(|_| true),
        Command::Regcore { instance } => run.context(instance).and_then(|c| regcore(&c)).map(|_| true),
        Command::Sober { instance, space } => {
            run.context(instance).and_then(|c| sober(&c, *space)).map(|_| true)
        }
        Command::Check {
            instance,
            corpus: _,
            out,
            timings,
        } => check(&run, instance.as_deref(), out.as_deref(), *timings),
        Command::ExportDot { instance, what, out } => run
            .context(instance)
            .and_then(|c| export_dot(&c, *what, out.as_deref()))
            .map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
