//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use galois_core::closure::close;
use galois_core::cohom::{h2_mod, schur_multiplier};
use galois_core::finalg::{describe, iso_type, join};
use galois_core::galois::{
    centralize, centralize_i1, galois_group, is_b_central, is_f_central, is_normal_ext,
    is_trivial_ext, relative_commutator, Extension,
};
use galois_core::hopf::{hopf_identity_check, hopf_rhs, pi1_fgab, Coeff, HopfInstance};
use galois_core::{CompositeAdjunction, Error, FiniteAlgebra, NormalSubobject, Reflector};
use serde_json::json;

use crate::corpus_io::{self, CorpusSource, GenError};
use crate::format::{self, parse_fgab, parse_subset};
use crate::report::{Report, Witness};
use crate::suites::{self, SuiteError, SuiteOptions, SuiteTarget};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "galois",
    version,
    about = "Closure operators, Galois groups and Hopf formulae on finite algebras"
)]
pub struct Cli {
    /// Seed for every sampled or random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest corpus order to use (each family is also capped at its own limit).
    #[arg(long, global = true)]
    pub max_size: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Worker threads for suites (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ExtensionArgs {
    /// Total object; must be the domain named in the map file.
    #[arg(long)]
    pub total: Option<PathBuf>,
    /// Morphism file for the surjection.
    #[arg(long)]
    pub map: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reflect an algebra: image and unit kernel.
    Reflect {
        #[arg(long)]
        reflector: String,
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Closure of a normal subobject.
    Closure {
        #[arg(long)]
        reflector: String,
        #[arg(long)]
        algebra: PathBuf,
        /// Comma-separated element indices, e.g. "0,2,4,6".
        #[arg(long)]
        subobject: String,
    },
    /// Relative commutator of an extension for a Birkhoff reflector.
    Relcomm {
        #[arg(long)]
        reflector: String,
        #[command(flatten)]
        ext: ExtensionArgs,
    },
    /// Trivial, normal and central flags of an extension.
    ClassifyExt {
        #[arg(long)]
        adjunction: String,
        #[command(flatten)]
        ext: ExtensionArgs,
    },
    /// The centralised extension F₁I₁(f).
    Centralize {
        #[arg(long)]
        adjunction: String,
        #[command(flatten)]
        ext: ExtensionArgs,
    },
    /// Galois group of a normal extension, by both computations.
    GaloisGroup {
        #[arg(long)]
        adjunction: String,
        #[command(flatten)]
        ext: ExtensionArgs,
    },
    /// Right-hand side of the generalised Hopf formula.
    Hopf {
        #[arg(long)]
        adjunction: String,
        /// `P.alg:p.mor`.
        #[arg(long)]
        pres: String,
    },
    /// Compare the Hopf right-hand side with the Galois group of F₁I₁(f).
    HopfIdentity {
        #[arg(long)]
        adjunction: String,
        #[arg(long)]
        pres: String,
    },
    /// Fundamental group of a finitely generated abelian group.
    Pi1 {
        /// Cyclic orders ("2,2", 0 for Z) or a form like "Z^2 x Z/4".
        #[arg(long)]
        fgab: String,
        #[arg(long, default_value = "ab")]
        coeff: String,
    },
    /// Schur multiplier, or H²(B, Z/m) with --mod.
    H2 {
        #[arg(long)]
        group: PathBuf,
        #[arg(long = "mod")]
        modulus: Option<i128>,
    },
    /// Run a suite over the corpus.
    Verify {
        suite: String,
        #[arg(long)]
        reflector: Option<String>,
        #[arg(long)]
        adjunction: Option<String>,
        /// rng, grp or loop: shorthand for the matching adjunction.
        #[arg(long)]
        variety: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Corpus management.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Re-run the checks recorded in a report or witness file.
    Replay { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum CorpusAction {
    /// Write the corpus (default location: $GALOIS_CORPUS_DIR, else ./corpus).
    Gen {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of random presentation matrices to write.
        #[arg(long, default_value_t = suites::DEFAULT_FGAB_SAMPLES)]
        fgab: usize,
    },
}

/// A failure that ends the command with a non-zero status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InternalMismatch(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<SuiteError> for Failure {
    fn from(e: SuiteError) -> Self {
        match e {
            SuiteError::Usage(m) => Failure::Usage(m),
            SuiteError::Internal(m) => Failure::Internal(m),
        }
    }
}

type CResult<T> = Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CResult<T> {
    Err(Failure::Usage(msg.into()))
}

/// Reads files and remembers their hashes for the report.
struct Inputs<'a> {
    report: &'a mut Report,
}

impl Inputs<'_> {
    fn read(&mut self, path: &Path) -> CResult<String> {
        let bytes =
            fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        self.report.input(&path.display().to_string(), &bytes);
        String::from_utf8(bytes)
            .map_err(|_| Failure::Usage(format!("{}: not UTF-8", path.display())))
    }

    fn algebra(&mut self, path: &Path) -> CResult<Arc<FiniteAlgebra>> {
        let text = self.read(path)?;
        format::parse_algebra(&text)
            .map(Arc::new)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }

    fn extension(&mut self, total: Option<&Path>, map: &Path) -> CResult<Extension> {
        let text = self.read(map)?;
        let base = map.parent().unwrap_or(Path::new("."));
        let spec = format::parse_morphism_spec(&text, base)
            .map_err(|e| Failure::Usage(format!("{}: {e}", map.display())))?;
        let dom = self.algebra(&spec.dom)?;
        if let Some(t) = total {
            if *self.algebra(t)? != *dom {
                return usage(format!(
                    "{} is not the domain named in {}",
                    t.display(),
                    map.display()
                ));
            }
        }
        let cod = self.algebra(&spec.cod)?;
        let f = format::morphism_from_spec(&spec, dom, cod)
            .map_err(|e| Failure::Usage(format!("{}: {e}", map.display())))?;
        Ok(Extension::new(f)?)
    }

    fn presentation(&mut self, pres: &str) -> CResult<Extension> {
        let Some((p, m)) = pres.split_once(':') else {
            return usage("--pres expects P.alg:p.mor");
        };
        self.extension(Some(Path::new(p)), Path::new(m))
    }
}

fn parse_reflector(s: &str) -> CResult<Reflector> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn parse_adjunction(s: &str) -> CResult<CompositeAdjunction> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn alg_summary(a: &FiniteAlgebra) -> serde_json::Value {
    json!({"size": a.size(), "description": describe(a), "iso_type": iso_type(a).to_string()})
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let command: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|s| s.to_string_lossy().into_owned())
        .collect();
    let mut report = Report::new(command);
    let start = Instant::now();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let status = pool.install(|| execute(&cli, &mut report));
    let code = match status {
        Ok(headline) => {
            let internal = report
                .violations
                .iter()
                .any(|v| suites::INTERNAL_CHECKS.contains(&v.check.as_str()));
            match cli.format {
                OutputFormat::Json => println!("{}", report.to_json()),
                OutputFormat::Text => {
                    match headline {
                        Some(h) if report.violations.is_empty() => println!("{h}"),
                        _ => print!("{}", report.to_text()),
                    }
                    if matches!(cli.command, Command::Verify { .. } | Command::Corpus { .. }) {
                        eprintln!("elapsed: {:.2?}", start.elapsed());
                    }
                }
            }
            if internal {
                EXIT_INTERNAL
            } else if report.violations.is_empty() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal mismatch: {m}");
            EXIT_INTERNAL
        }
    };
    code
}

/// Fills the report; the returned line, if any, is the whole text output.
fn execute(cli: &Cli, report: &mut Report) -> CResult<Option<String>> {
    match &cli.command {
        Command::Reflect { reflector, algebra } => {
            let r = parse_reflector(reflector)?;
            let a = Inputs { report }.algebra(algebra)?;
            let refl = r.reflect(&a)?;
            report.set("reflector", r.to_string());
            report.set("image", alg_summary(&refl.image));
            report.set("unit", refl.unit.map().to_vec());
            report.set("unit_kernel", r.unit_kernel(&a)?.elements());
            report.set("member", r.is_member(&a)?);
            Ok(None)
        }
        Command::Closure {
            reflector,
            algebra,
            subobject,
        } => {
            let r = parse_reflector(reflector)?;
            let a = Inputs { report }.algebra(algebra)?;
            let elems =
                parse_subset(subobject).map_err(|e| Failure::Usage(format!("--subobject: {e}")))?;
            let k = NormalSubobject::new(a.clone(), &elems)?;
            let kb = close(&r, &a, &k)?;
            report.set("reflector", r.to_string());
            report.set("closure", kb.elements());
            let zero_bar = close(&r, &a, &NormalSubobject::zero(&a))?;
            let joined = join(&k, &zero_bar)?;
            report.set("join_with_closed_zero", joined.elements());
            report.set("join_equals_closure", joined == kb);
            let list: Vec<String> = kb.elements().iter().map(usize::to_string).collect();
            Ok(Some(list.join(",")))
        }
        Command::Relcomm { reflector, ext } => {
            let r = parse_reflector(reflector)?;
            if !r.is_birkhoff() {
                return usage(format!("{r} is not a Birkhoff reflector"));
            }
            let f = Inputs { report }.extension(ext.total.as_deref(), &ext.map)?;
            let c = relative_commutator(&r, &f)?;
            report.set("relative_commutator", c.elements());
            report.set("central", c.is_zero());
            let list: Vec<String> = c.elements().iter().map(usize::to_string).collect();
            Ok(Some(list.join(",")))
        }
        Command::ClassifyExt { adjunction, ext } => {
            let adj = parse_adjunction(adjunction)?;
            let f = Inputs { report }.extension(ext.total.as_deref(), &ext.map)?;
            let r = adj.composite();
            let comm = relative_commutator(&adj.inner(), &f)?;
            report.set("adjunction", adj.to_string());
            report.set("trivial", is_trivial_ext(&r, &f)?);
            report.set("normal", is_normal_ext(&r, &f)?);
            report.set("b_central", is_b_central(&adj.inner(), &f)?);
            report.set("f_central", is_f_central(&adj, &f)?);
            report.set("relative_commutator", comm.elements());
            Ok(None)
        }
        Command::Centralize { adjunction, ext } => {
            let adj = parse_adjunction(adjunction)?;
            let f = Inputs { report }.extension(ext.total.as_deref(), &ext.map)?;
            let i1 = centralize_i1(&adj.inner(), &f)?;
            let c = centralize(&adj, &f)?;
            report.set("adjunction", adj.to_string());
            report.set("i1_total", alg_summary(i1.ext.total()));
            report.set("total", alg_summary(c.ext.total()));
            report.set("divided", c.divided.elements());
            report.set("map", c.ext.map().map().to_vec());
            report.set("normal", is_normal_ext(&adj.composite(), &c.ext)?);
            Ok(None)
        }
        Command::GaloisGroup { adjunction, ext } => {
            let adj = parse_adjunction(adjunction)?;
            let f = Inputs { report }.extension(ext.total.as_deref(), &ext.map)?;
            let g = galois_group(&adj.composite(), &f)?;
            report.set("adjunction", adj.to_string());
            report.set("group", alg_summary(&g.group));
            report.set("witness", g.witness.clone());
            report.set("intersection", g.intersection.elements());
            Ok(Some(format!(
                "{} ({})",
                describe(&g.group),
                iso_type(&g.group)
            )))
        }
        Command::Hopf { adjunction, pres } => {
            let adj = parse_adjunction(adjunction)?;
            let f = Inputs { report }.presentation(pres)?;
            let rhs = hopf_rhs(&HopfInstance::new(adj, f))?;
            report.set("adjunction", adj.to_string());
            report.set("rhs", alg_summary(&rhs.value));
            report.set("numerator", rhs.numerator.elements());
            report.set("denominator", rhs.denominator.elements());
            Ok(None)
        }
        Command::HopfIdentity { adjunction, pres } => {
            let adj = parse_adjunction(adjunction)?;
            let f = Inputs { report }.presentation(pres)?;
            let rep = hopf_identity_check(&HopfInstance::new(adj, f.clone()))?;
            report.set("adjunction", adj.to_string());
            report.set("galois_group", alg_summary(&rep.galois.group));
            report.set("rhs", alg_summary(&rep.rhs.value));
            report.set("holds", rep.holds());
            report.set(
                "denominator_equals_centralisation_kernel",
                rep.kernel_matches,
            );
            if !rep.holds() {
                let mut w = Witness::new("hopf-identity")
                    .param("adjunction", adj)
                    .algebra(f.total())
                    .algebra(f.base());
                w.maps.push((0, 1, f.map().map().to_vec()));
                report.violations_from(vec![crate::report::Violation::new(
                    format!(
                        "Galois group {} but right-hand side {}",
                        rep.galois_type(),
                        rep.rhs_type()
                    ),
                    w,
                )]);
            }
            Ok(None)
        }
        Command::Pi1 { fgab, coeff } => {
            let b = parse_fgab(fgab).map_err(|e| Failure::Usage(format!("--fgab: {e}")))?;
            let c: Coeff = coeff
                .parse()
                .map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let v = pi1_fgab(&b, c);
            report.set("group", b.to_string());
            report.set("coeff", c.to_string());
            report.set("pi1", v.to_string());
            Ok(Some(v.to_string()))
        }
        Command::H2 { group, modulus } => {
            let g = Inputs { report }.algebra(group)?;
            let v = match modulus {
                Some(m) if *m >= 2 => h2_mod(&g, *m)?,
                Some(m) => return usage(format!("--mod must be at least 2, got {m}")),
                None => schur_multiplier(&g)?,
            };
            report.set("h2", v.to_string());
            Ok(Some(v.to_string()))
        }
        Command::Verify {
            suite,
            reflector,
            adjunction,
            variety,
            samples,
        } => {
            let mut target = SuiteTarget::default();
            if let Some(r) = reflector {
                target.reflector = Some(parse_reflector(r)?);
            }
            target.adjunction = match (adjunction, variety) {
                (Some(a), _) => Some(parse_adjunction(a)?),
                (None, Some(v)) => Some(suites::variety_adjunction(v)?),
                (None, None) => None,
            };
            let opts = SuiteOptions {
                seed: cli.seed,
                max_size: cli.max_size,
                samples: *samples,
                corpus: CorpusSource::from_env(),
            };
            if let Some(d) = opts.corpus.location() {
                report.set("corpus", d.display().to_string());
            }
            let out = suites::run_suite(suite, &target, &opts)?;
            report.set("suite", suite.clone());
            report.set("seed", cli.seed);
            for (k, v) in out.results {
                report.results.insert(k, v);
            }
            report.set("passed", out.violations.is_empty());
            report.violations_from(out.violations);
            Ok(None)
        }
        Command::Corpus {
            action: CorpusAction::Gen { out, fgab },
        } => {
            let dir = out
                .clone()
                .or_else(|| std::env::var_os(corpus_io::CORPUS_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("corpus"));
            let m =
                corpus_io::generate(&dir, cli.seed, cli.max_size, *fgab).map_err(|e| match e {
                    GenError::Io(m) => Failure::Usage(m),
                    GenError::Mismatch(m) => Failure::Internal(m),
                })?;
            report.set("directory", dir.display().to_string());
            for (fam, list) in &m.families {
                report.set(fam, list.len());
            }
            report.set("fgab", m.fgab.len());
            Ok(None)
        }
        Command::Replay { file } => {
            let text = Inputs { report }.read(file)?;
            let witnesses = witnesses_in(&text)?;
            let corpus = CorpusSource::from_env();
            let mut reproduced = Vec::new();
            for w in witnesses {
                if let Some(detail) = suites::replay(&w, &corpus)? {
                    reproduced.push(crate::report::Violation::new(detail, w));
                }
            }
            report.set("reproduced", reproduced.len());
            report.violations_from(reproduced);
            Ok(None)
        }
    }
}

/// A report, a single violation, a single witness, or a list of either.
fn witnesses_in(text: &str) -> CResult<Vec<Witness>> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Failure::Usage(format!("replay: {e}")))?;
    fn collect(v: &serde_json::Value, out: &mut Vec<Witness>) -> Result<(), String> {
        match v {
            serde_json::Value::Array(xs) => xs.iter().try_for_each(|x| collect(x, out)),
            serde_json::Value::Object(o) if o.contains_key("violations") => {
                collect(&o["violations"], out)
            }
            serde_json::Value::Object(o) if o.contains_key("witness") => {
                collect(&o["witness"], out)
            }
            serde_json::Value::Object(o) if o.contains_key("check") => {
                out.push(serde_json::from_value(v.clone()).map_err(|e| e.to_string())?);
                Ok(())
            }
            _ => Err("expected a report, violation or witness".into()),
        }
    }
    let mut out = Vec::new();
    collect(&v, &mut out).map_err(|e| Failure::Usage(format!("replay: {e}")))?;
    Ok(out)
}
