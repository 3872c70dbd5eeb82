//! Exhaustive and sampled checks over the corpus, run in parallel with
//! results merged in corpus order.

use std::collections::BTreeMap;
use std::sync::Arc;

use galois_core::closure::{axiom_suite_one, fermeture_checks_one, tf_axioms};
use galois_core::cohom::schur_multiplier;
use galois_core::corpus::{self, groups_by_table_search, quotient_maps, Entry};
use galois_core::fgab::smith_normal_form;
use galois_core::finalg::{
    abelian_structure, all_normal_subobjects, find_section, homomorphisms, kernel, quotient,
};
use galois_core::galois::{galois_group, is_b_central, is_f_central, is_normal_ext, Extension};
use galois_core::hopf::{
    carre_zero_check, cube_lemma_check, hopf_identity_check, pi1_fgab, Coeff, HopfInstance,
};
use galois_core::reflect::{protoadditivity_search, reflected_failure};
use galois_core::{
    CompositeAdjunction, Error, FgAb, FiniteAlgebra, IntMatrix, Morphism, NormalSubobject,
    Reflector,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::corpus_io::{CorpusSource, Family};
use crate::report::{Violation, Witness};

pub const SUITES: [&str; 10] = [
    "closure-axioms",
    "fermeture",
    "characterisation",
    "galois-paths",
    "hopf-identity",
    "pi1",
    "protoadditivity",
    "lemmas",
    "fgab-numerics",
    "corpus-counts",
];

/// Checks whose failure means two computations of the same object
/// disagree, rather than a property failing.
pub const INTERNAL_CHECKS: [&str; 1] = ["galois-paths"];

/// Morphisms for axiom 3 are enumerated exhaustively when both ends have
/// at most this many elements.
pub const EXHAUSTIVE_HOM_SIZE: usize = 8;
const HOM_POOL: usize = 64;
const HOM_SAMPLE: usize = 4;

pub const DEFAULT_TF_INSTANCES: usize = 200;
pub const DEFAULT_LEMMA_SAMPLES: usize = 500;
pub const DEFAULT_SNF_SAMPLES: usize = 1000;
pub const DEFAULT_FGAB_SAMPLES: usize = 200;

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub seed: u64,
    pub max_size: Option<usize>,
    pub samples: Option<usize>,
    pub corpus: CorpusSource,
}

/// Which reflector or adjunction a suite runs for.
#[derive(Clone, Debug, Default)]
pub struct SuiteTarget {
    pub reflector: Option<Reflector>,
    pub adjunction: Option<CompositeAdjunction>,
}

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub results: BTreeMap<String, Value>,
    pub violations: Vec<Violation>,
}

impl Outcome {
    fn set(&mut self, k: &str, v: impl Into<Value>) {
        self.results.insert(k.to_string(), v.into());
    }

    fn finish(mut self) -> Self {
        self.violations.sort();
        self.violations.dedup();
        self
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuiteError {
    Usage(String),
    Internal(String),
}

impl std::fmt::Display for SuiteError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SuiteError::Usage(m) | SuiteError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<Error> for SuiteError {
    fn from(e: Error) -> Self {
        SuiteError::Internal(e.to_string())
    }
}

type SResult<T> = Result<T, SuiteError>;

fn usage<T>(msg: impl Into<String>) -> SResult<T> {
    Err(SuiteError::Usage(msg.into()))
}

fn rng_for(seed: u64, salt: &[u64]) -> ChaCha8Rng {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &s in salt {
        h = (h ^ s).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 31;
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn name_of(r: &Reflector) -> String {
    r.inner().to_string()
}

/// Corpus families a reflector acts on.
pub fn reflector_families(r: &Reflector) -> Vec<Family> {
    match name_of(r).as_str() {
        "ab" | "tf" => vec![Family::Groups],
        "crng" => vec![Family::Rings],
        "red" => vec![Family::CommutativeRings],
        "grp" => vec![Family::Loops],
        _ => vec![Family::Groups, Family::Rings, Family::Loops],
    }
}

/// The corpus for a reflector; `tf` keeps only the abelian groups.
pub fn reflector_corpus(r: &Reflector, opts: &SuiteOptions) -> SResult<Vec<Entry>> {
    let mut out = Vec::new();
    for f in reflector_families(r) {
        out.extend(
            opts.corpus
                .family(f, opts.max_size)
                .map_err(SuiteError::Usage)?,
        );
    }
    if name_of(r) == "tf" {
        out.retain(|e| e.algebra.is_commutative());
    }
    Ok(out)
}

fn adjunction_corpus(adj: &CompositeAdjunction, opts: &SuiteOptions) -> SResult<Vec<Entry>> {
    reflector_corpus(&adj.inner(), opts)
}

/// The adjunction a `--variety` name stands for.
pub fn variety_adjunction(v: &str) -> SResult<CompositeAdjunction> {
    let s = match v {
        "rng" | "ring" | "rings" => "crng+red",
        "grp" | "group" | "groups" => "ab+id",
        "loop" | "loops" => "grp+id",
        _ => return usage(format!("unknown variety `{v}` (expected rng, grp or loop)")),
    };
    Ok(s.parse().expect("shipped adjunction"))
}

pub fn run_suite(name: &str, target: &SuiteTarget, opts: &SuiteOptions) -> SResult<Outcome> {
    let reflector = || {
        target
            .reflector
            .ok_or_else(|| SuiteError::Usage(format!("{name} needs --reflector")))
    };
    let adjunction = || {
        target
            .adjunction
            .ok_or_else(|| SuiteError::Usage(format!("{name} needs --adjunction or --variety")))
    };
    let out = match name {
        "closure-axioms" => closure_axioms(&reflector()?, opts)?,
        "fermeture" => fermeture(&reflector()?, opts)?,
        "characterisation" => characterisation(&adjunction()?, opts)?,
        "galois-paths" => galois_paths(&adjunction()?, opts)?,
        "hopf-identity" => hopf_identity(&adjunction()?, opts)?,
        "pi1" => pi1(opts)?,
        "protoadditivity" => protoadditivity(&reflector()?, opts)?,
        "lemmas" => lemmas(opts)?,
        "fgab-numerics" => fgab_numerics(opts)?,
        "corpus-counts" => corpus_counts(opts)?,
        _ => {
            return usage(format!(
                "unknown suite `{name}`; known: {}",
                SUITES.join(", ")
            ))
        }
    };
    Ok(out.finish())
}

fn axiom3_morphisms(i: usize, corpus: &[Entry], seed: u64) -> Vec<Morphism> {
    let a = &corpus[i].algebra;
    let mut out = Vec::new();
    for (j, e) in corpus.iter().enumerate() {
        let b = &e.algebra;
        if b.signature() != a.signature() {
            continue;
        }
        if a.size() <= EXHAUSTIVE_HOM_SIZE && b.size() <= EXHAUSTIVE_HOM_SIZE {
            out.extend(homomorphisms(a, b, usize::MAX));
        } else {
            let pool = homomorphisms(a, b, HOM_POOL);
            let mut rng = rng_for(seed, &[i as u64, j as u64]);
            out.extend(pool.choose_multiple(&mut rng, HOM_SAMPLE).cloned());
        }
    }
    out
}

fn morphism_witness(mut w: Witness, f: &Morphism) -> Witness {
    w = w.algebra(f.dom()).algebra(f.cod());
    w.maps.push((0, 1, f.map().to_vec()));
    w
}

pub fn closure_axioms(r: &Reflector, opts: &SuiteOptions) -> SResult<Outcome> {
    let corpus = reflector_corpus(r, opts)?;
    let per: Vec<SResult<(galois_core::closure::AxiomReport, Vec<Morphism>)>> = (0..corpus.len())
        .into_par_iter()
        .map(|i| {
            let ms = axiom3_morphisms(i, &corpus, opts.seed);
            let rep = axiom_suite_one(r, i, &corpus[i].algebra, &ms)?;
            Ok((rep, ms))
        })
        .collect();
    let mut out = Outcome::default();
    let mut checked = [0usize; 5];
    for (i, res) in per.into_iter().enumerate() {
        let (rep, ms) = res?;
        for (c, x) in checked.iter_mut().zip(rep.checked) {
            *c += x;
        }
        for v in rep.violations {
            let mut w = Witness::new("closure-axiom")
                .param("reflector", r)
                .param("axiom", v.axiom)
                .param("detail", &v.witness);
            match v.morphism {
                Some(m) => w = morphism_witness(w, &ms[m]),
                None => w = w.algebra(&corpus[i].algebra),
            }
            let detail = format!(
                "{r}: axiom {} fails on {} ({})",
                v.axiom, corpus[i].name, v.witness
            );
            out.violations.push(Violation::new(detail, w));
        }
    }
    out.set("reflector", r.to_string());
    out.set("algebras", corpus.len());
    out.set("checked", json!(checked));
    if name_of(r) == "tf" {
        let count = opts.samples.unwrap_or(DEFAULT_TF_INSTANCES);
        let insts = corpus::random_tf_instances(opts.seed, count);
        let bad: Vec<SResult<Vec<u8>>> = insts.par_iter().map(|x| Ok(tf_axioms(x)?)).collect();
        for (i, b) in bad.into_iter().enumerate() {
            for axiom in b? {
                let w = Witness::new("tf-axiom")
                    .param("seed", opts.seed)
                    .param("index", i)
                    .param("axiom", axiom);
                out.violations.push(Violation::new(
                    format!("tf: axiom {axiom} fails on random instance {i}"),
                    w,
                ));
            }
        }
        out.set("fgab_instances", count);
    }
    Ok(out)
}

/// Replays part of [`closure_axioms`] on the witness data.
fn replay_closure_axiom(w: &Witness) -> SResult<Option<String>> {
    let r: Reflector = parse_param(w, "reflector")?;
    let axiom: u8 = parse_param(w, "axiom")?;
    let detail = w.get("detail").map_err(SuiteError::Usage)?;
    let algs = load_algebras(w)?;
    let ms = load_maps(w, &algs)?;
    let rep = axiom_suite_one(&r, 0, &algs[0], &ms)?;
    Ok(rep
        .violations
        .iter()
        .find(|v| v.axiom == axiom && v.witness == detail)
        .map(|v| format!("{r}: axiom {} fails ({})", v.axiom, v.witness)))
}

pub fn fermeture(r: &Reflector, opts: &SuiteOptions) -> SResult<Outcome> {
    let corpus = reflector_corpus(r, opts)?;
    let per: Vec<SResult<_>> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, e)| Ok(fermeture_checks_one(r, i, &e.algebra)?))
        .collect();
    let mut out = Outcome::default();
    let mut checked = [0usize; 3];
    let mut strict: Option<(usize, Vec<usize>)> = None;
    for (i, res) in per.into_iter().enumerate() {
        let rep = res?;
        for (c, x) in checked.iter_mut().zip(rep.checked) {
            *c += x;
        }
        if strict.is_none() {
            strict = rep.strict_witness;
        }
        for v in rep.violations {
            let w = Witness::new("fermeture")
                .param("reflector", r)
                .param("part", v.axiom)
                .param("detail", &v.witness)
                .algebra(&corpus[i].algebra);
            let detail = format!(
                "{r}: part {} fails on {} ({})",
                v.axiom, corpus[i].name, v.witness
            );
            out.violations.push(Violation::new(detail, w));
        }
    }
    out.set("reflector", r.to_string());
    out.set("algebras", corpus.len());
    out.set("checked", json!(checked));
    out.set("birkhoff", r.is_birkhoff());
    match &strict {
        Some((i, k)) => out.set(
            "strict_witness",
            json!({"algebra": corpus[*i].name, "K": k}),
        ),
        None => out.set("strict_witness", Value::Null),
    }
    if requires_strict_witness(r) && strict.is_none() {
        let w = Witness::new("fermeture-strict-witness")
            .param("reflector", r)
            .param(
                "max-size",
                opts.max_size.map_or("default".into(), |m| m.to_string()),
            );
        let detail = format!(
            "{r}: no K with K ∨ 0̄ strictly inside K̄ among {} algebras",
            corpus.len()
        );
        out.violations.push(Violation::new(detail, w));
    }
    Ok(out)
}

/// The non-Birkhoff reflector whose strict containment must be witnessed.
fn requires_strict_witness(r: &Reflector) -> bool {
    *r == Reflector::RED
}

fn replay_fermeture(w: &Witness) -> SResult<Option<String>> {
    let r: Reflector = parse_param(w, "reflector")?;
    let part: u8 = parse_param(w, "part")?;
    let detail = w.get("detail").map_err(SuiteError::Usage)?;
    let algs = load_algebras(w)?;
    let rep = fermeture_checks_one(&r, 0, &algs[0])?;
    Ok(rep
        .violations
        .iter()
        .find(|v| v.axiom == part && v.witness == detail)
        .map(|v| format!("{r}: part {} fails ({})", v.axiom, v.witness)))
}

/// Every surjection out of every corpus member, as quotient maps.
fn extensions(corpus: &[Entry]) -> Vec<Vec<Extension>> {
    corpus
        .par_iter()
        .map(|e| {
            quotient_maps(&e.algebra)
                .into_iter()
                .map(|q| Extension::new(q).expect("quotient maps are surjective"))
                .collect()
        })
        .collect()
}

fn extension_witness(check: &str, adj: &CompositeAdjunction, f: &Extension) -> Witness {
    morphism_witness(Witness::new(check).param("adjunction", adj), f.map())
}

fn characterisation_mismatch(adj: &CompositeAdjunction, f: &Extension) -> SResult<Option<String>> {
    let normal = is_normal_ext(&adj.composite(), f)?;
    let central = is_f_central(adj, f)?;
    if normal != central {
        return Ok(Some(format!("normal = {normal} but F-central = {central}")));
    }
    if adj.outer().is_identity() {
        let b = is_b_central(&adj.inner(), f)?;
        if normal != b {
            return Ok(Some(format!("normal = {normal} but B-central = {b}")));
        }
    }
    Ok(None)
}

pub fn characterisation(adj: &CompositeAdjunction, opts: &SuiteOptions) -> SResult<Outcome> {
    let corpus = adjunction_corpus(adj, opts)?;
    let exts = extensions(&corpus);
    let per: Vec<SResult<(usize, usize, Vec<Violation>)>> = exts
        .par_iter()
        .enumerate()
        .map(|(i, fs)| {
            let (mut normal, mut bad) = (0, Vec::new());
            for f in fs {
                if is_normal_ext(&adj.composite(), f)? {
                    normal += 1;
                }
                if let Some(msg) = characterisation_mismatch(adj, f)? {
                    let detail = format!("{adj}: {msg} for a quotient of {}", corpus[i].name);
                    bad.push(Violation::new(
                        detail,
                        extension_witness("characterisation", adj, f),
                    ));
                }
            }
            Ok((fs.len(), normal, bad))
        })
        .collect();
    let mut out = Outcome::default();
    let (mut total, mut normal) = (0, 0);
    for r in per {
        let (t, n, mut v) = r?;
        total += t;
        normal += n;
        out.violations.append(&mut v);
    }
    out.set("adjunction", adj.to_string());
    out.set("algebras", corpus.len());
    out.set("extensions", total);
    out.set("normal_extensions", normal);
    Ok(out)
}

pub fn galois_paths(adj: &CompositeAdjunction, opts: &SuiteOptions) -> SResult<Outcome> {
    let corpus = adjunction_corpus(adj, opts)?;
    let exts = extensions(&corpus);
    let r = adj.composite();
    let per: Vec<SResult<(usize, BTreeMap<usize, usize>, Vec<Violation>)>> = exts
        .par_iter()
        .enumerate()
        .map(|(i, fs)| {
            let (mut normal, mut orders, mut bad) = (0, BTreeMap::new(), Vec::new());
            for f in fs {
                if !is_normal_ext(&r, f)? {
                    continue;
                }
                normal += 1;
                match galois_group(&r, f) {
                    Ok(g) => *orders.entry(g.group.size()).or_insert(0) += 1,
                    Err(Error::InternalMismatch(msg)) => {
                        let detail = format!(
                            "{adj}: Galois group paths disagree on a quotient of {}: {msg}",
                            corpus[i].name
                        );
                        bad.push(Violation::new(
                            detail,
                            extension_witness("galois-paths", adj, f),
                        ));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Ok((normal, orders, bad))
        })
        .collect();
    let mut out = Outcome::default();
    let mut normal = 0;
    let mut orders: BTreeMap<usize, usize> = BTreeMap::new();
    for r in per {
        let (n, o, mut v) = r?;
        normal += n;
        for (k, c) in o {
            *orders.entry(k).or_insert(0) += c;
        }
        out.violations.append(&mut v);
    }
    out.set("adjunction", adj.to_string());
    out.set("normal_extensions", normal);
    let orders: serde_json::Map<String, Value> = orders
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.into()))
        .collect();
    out.set("galois_group_orders", Value::Object(orders));
    Ok(out)
}

fn replay_galois_paths(w: &Witness) -> SResult<Option<String>> {
    let adj: CompositeAdjunction = parse_param(w, "adjunction")?;
    let f = load_extension(w)?;
    match galois_group(&adj.composite(), &f) {
        Err(Error::InternalMismatch(msg)) => {
            Ok(Some(format!("{adj}: Galois group paths disagree: {msg}")))
        }
        Err(e) => Err(e.into()),
        Ok(_) => Ok(None),
    }
}

fn hopf_failure(
    adj: &CompositeAdjunction,
    f: &Extension,
) -> SResult<(Option<String>, bool, usize)> {
    let rep = hopf_identity_check(&HopfInstance::new(*adj, f.clone()))?;
    let msg = (!rep.holds()).then(|| {
        format!(
            "Galois group {} ({} elements) but right-hand side {} ({} elements)",
            rep.galois_type(),
            rep.galois.group.size(),
            rep.rhs_type(),
            rep.rhs.value.size()
        )
    });
    Ok((msg, rep.kernel_matches, rep.galois.group.size()))
}

pub fn hopf_identity(adj: &CompositeAdjunction, opts: &SuiteOptions) -> SResult<Outcome> {
    let corpus = adjunction_corpus(adj, opts)?;
    let exts = extensions(&corpus);
    let per: Vec<SResult<(usize, usize, usize, Vec<Violation>)>> = exts
        .par_iter()
        .enumerate()
        .map(|(i, fs)| {
            let (mut matches, mut nontrivial, mut bad) = (0, 0, Vec::new());
            for f in fs {
                let (msg, km, order) = hopf_failure(adj, f)?;
                matches += km as usize;
                nontrivial += (order > 1) as usize;
                if let Some(msg) = msg {
                    let detail = format!("{adj}: {msg} for a quotient of {}", corpus[i].name);
                    bad.push(Violation::new(
                        detail,
                        extension_witness("hopf-identity", adj, f),
                    ));
                }
            }
            Ok((fs.len(), matches, nontrivial, bad))
        })
        .collect();
    let mut out = Outcome::default();
    let (mut total, mut matches, mut nontrivial) = (0, 0, 0);
    for r in per {
        let (t, m, n, mut v) = r?;
        total += t;
        matches += m;
        nontrivial += n;
        out.violations.append(&mut v);
    }
    out.set("adjunction", adj.to_string());
    out.set("algebras", corpus.len());
    out.set("extensions", total);
    out.set("nontrivial_galois_groups", nontrivial);
    out.set("denominator_equals_centralisation_kernel", matches);
    Ok(out)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> IntMatrix {
    let bound = *[3i128, 9].choose(rng).expect("nonempty");
    let data = (0..rows * cols)
        .map(|_| {
            if rng.gen_bool(0.3) {
                0
            } else {
                rng.gen_range(-bound..=bound)
            }
        })
        .collect();
    IntMatrix::new(rows, cols, data).expect("shape")
}

/// A product of random elementary operations on the identity.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            m.set(0, 0, -1);
        }
        return m;
    }
    for _ in 0..2 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b {
            continue;
        }
        let q: i128 = rng.gen_range(-3..=3);
        let mut e = IntMatrix::identity(n);
        e.set(a, b, q);
        m = e.mul(&m).expect("square");
    }
    m
}

/// Relation matrices for random f.g. abelian groups, with at most three
/// generators so the free rank is often positive.
pub fn random_presentations(seed: u64, count: usize) -> Vec<IntMatrix> {
    let mut rng = rng_for(seed, &[0xfab]);
    (0..count)
        .map(|_| {
            let gens = rng.gen_range(1..=3);
            let rows = rng.gen_range(0..=gens + 1);
            random_matrix(&mut rng, rows, gens)
        })
        .collect()
}

fn pi1_invariance_failure(m: &IntMatrix, p: &IntMatrix, q: &IntMatrix) -> SResult<Option<String>> {
    let b = FgAb::from_presentation(m);
    let moved = p.mul(m).and_then(|x| x.mul(q))?;
    let b2 = FgAb::from_presentation(&moved);
    if b != b2 {
        return Ok(Some(format!("presentations give {b} and {b2}")));
    }
    for c in [Coeff::Ab, Coeff::AbTf] {
        let (x, y) = (pi1_fgab(&b, c), pi1_fgab(&b2, c));
        if x != y {
            return Ok(Some(format!(
                "pi1 with {c} is {x} for one presentation and {y} for the other"
            )));
        }
    }
    let (ab, tf) = (pi1_fgab(&b, Coeff::Ab), pi1_fgab(&b, Coeff::AbTf));
    if tf != ab.tf_quotient() {
        return Ok(Some(format!(
            "pi1 of {b}: abtf gives {tf}, tf quotient of {ab} expected"
        )));
    }
    Ok(None)
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<i128>> {
    m.row_vectors()
}

pub fn pi1(opts: &SuiteOptions) -> SResult<Outcome> {
    let groups = opts
        .corpus
        .family(Family::Groups, opts.max_size)
        .map_err(SuiteError::Usage)?;
    let abelian: Vec<&Entry> = groups
        .iter()
        .filter(|e| e.algebra.is_commutative())
        .collect();
    let per: Vec<SResult<(String, String, Option<Violation>)>> = abelian
        .par_iter()
        .map(|e| {
            let b = abelian_structure(&e.algebra);
            let ab = pi1_fgab(&b, Coeff::Ab);
            let tf = pi1_fgab(&b, Coeff::AbTf);
            let schur = schur_multiplier(&e.algebra)?;
            let mut v = None;
            if ab != schur || !tf.is_zero() || tf != ab.tf_quotient() {
                let w = Witness::new("pi1-schur")
                    .param("group", &b)
                    .algebra(&e.algebra);
                let detail = format!("pi1({b}) = {ab} with abtf {tf}, Schur multiplier {schur}");
                v = Some(Violation::new(detail, w));
            }
            Ok((b.to_string(), ab.to_string(), v))
        })
        .collect();
    let mut out = Outcome::default();
    let mut table = serde_json::Map::new();
    for r in per {
        let (b, ab, v) = r?;
        table.insert(b, ab.into());
        out.violations.extend(v);
    }
    let count = opts.samples.unwrap_or(DEFAULT_FGAB_SAMPLES);
    let pres = random_presentations(opts.seed, count);
    let mut rng = rng_for(opts.seed, &[0x91]);
    let transforms: Vec<(IntMatrix, IntMatrix)> = pres
        .iter()
        .map(|m| {
            (
                random_unimodular(&mut rng, m.rows()),
                random_unimodular(&mut rng, m.cols()),
            )
        })
        .collect();
    let per: Vec<SResult<Option<Violation>>> = pres
        .par_iter()
        .zip(transforms.par_iter())
        .map(|(m, (p, q))| {
            Ok(pi1_invariance_failure(m, p, q)?.map(|msg| {
                let mut w = Witness::new("pi1-invariance");
                w.matrices = vec![matrix_rows(m), matrix_rows(p), matrix_rows(q)];
                Violation::new(msg, w)
            }))
        })
        .collect();
    for r in per {
        out.violations.extend(r?);
    }
    out.set("finite_abelian_groups", abelian.len());
    out.set("pi1_ab", Value::Object(table));
    out.set("random_presentations", count);
    Ok(out)
}

fn replay_pi1_schur(w: &Witness) -> SResult<Option<String>> {
    let g = load_algebras(w)?.remove(0);
    let b = abelian_structure(&g);
    let (ab, tf) = (pi1_fgab(&b, Coeff::Ab), pi1_fgab(&b, Coeff::AbTf));
    let schur = schur_multiplier(&g)?;
    Ok((ab != schur || !tf.is_zero() || tf != ab.tf_quotient())
        .then(|| format!("pi1({b}) = {ab} with abtf {tf}, Schur multiplier {schur}")))
}

/// Whether the reflector is expected to be protoadditive on its corpus;
/// `None` when no expectation is recorded.
pub fn expected_protoadditive(r: &Reflector) -> Option<bool> {
    match r.to_string().as_str() {
        "red" | "tf" | "id" => Some(true),
        "ab" => Some(false),
        _ => None,
    }
}

pub fn protoadditivity(r: &Reflector, opts: &SuiteOptions) -> SResult<Outcome> {
    let corpus = reflector_corpus(r, opts)?;
    let per: Vec<SResult<_>> = corpus
        .par_iter()
        .map(|e| Ok(protoadditivity_search(r, std::slice::from_ref(&e.algebra))?))
        .collect();
    let mut found = None;
    for (i, res) in per.into_iter().enumerate() {
        if let (None, Some(f)) = (&found, res?) {
            found = Some((i, f));
        }
    }
    let mut out = Outcome::default();
    out.set("reflector", r.to_string());
    out.set("algebras", corpus.len());
    match &found {
        Some((i, f)) => out.set(
            "counterexample",
            json!({"algebra": corpus[*i].name, "kernel": f.kernel, "reason": f.reason}),
        ),
        None => out.set("counterexample", Value::Null),
    }
    let expected = expected_protoadditive(r);
    out.set("expected_protoadditive", json!(expected));
    match (expected, &found) {
        (Some(true), Some((i, f))) => {
            let mut w = Witness::new("protoadditivity-counterexample")
                .param("reflector", r)
                .algebra(&corpus[*i].algebra);
            w.subsets.push(f.kernel.clone());
            out.violations.push(Violation::new(
                format!(
                    "{r} fails to preserve a split sequence on {}: {}",
                    corpus[*i].name, f.reason
                ),
                w,
            ));
        }
        (Some(false), None) => {
            let w = Witness::new("protoadditivity-search")
                .param("reflector", r)
                .param(
                    "max-size",
                    opts.max_size.map_or("default".into(), |m| m.to_string()),
                );
            out.violations.push(Violation::new(
                format!(
                    "no split sequence that {r} fails to preserve among {} algebras",
                    corpus.len()
                ),
                w,
            ));
        }
        _ => {}
    }
    Ok(out)
}

fn replay_protoadditivity_counterexample(w: &Witness) -> SResult<Option<String>> {
    let r: Reflector = parse_param(w, "reflector")?;
    let a = load_algebras(w)?.remove(0);
    let k = NormalSubobject::new(
        a.clone(),
        w.subsets
            .first()
            .ok_or_else(|| SuiteError::Usage("witness lacks the kernel".into()))?,
    )?;
    let (_, q) = quotient(&a, &k)?;
    let Some(s) = find_section(&q) else {
        return Ok(None);
    };
    let (_, incl) = k.to_algebra();
    Ok(reflected_failure(&r, &incl, &q, &s)?)
}

/// Reflectors and corpus families for the Carre-Zero pool.
fn carre_pairs() -> Vec<(Reflector, Family)> {
    let p = |s: &str| s.parse::<Reflector>().expect("shipped reflector");
    vec![
        (p("ab"), Family::Groups),
        (p("crng"), Family::Rings),
        (p("red"), Family::CommutativeRings),
        (p("grp"), Family::Loops),
        (p("crng+red"), Family::Rings),
    ]
}

pub fn lemmas(opts: &SuiteOptions) -> SResult<Outcome> {
    let samples = opts.samples.unwrap_or(DEFAULT_LEMMA_SAMPLES);
    let mut pool: Vec<Entry> = Vec::new();
    for f in [Family::Groups, Family::Rings, Family::Loops] {
        pool.extend(
            opts.corpus
                .family(f, opts.max_size)
                .map_err(SuiteError::Usage)?,
        );
    }
    let quotients: Vec<Vec<Morphism>> =
        pool.par_iter().map(|e| quotient_maps(&e.algebra)).collect();

    let mut rng = rng_for(opts.seed, &[0xc0be]);
    let mut cube_cases = Vec::with_capacity(samples);
    for _ in 0..samples {
        let i = rng.gen_range(0..pool.len());
        let f = quotients[i]
            .choose(&mut rng)
            .expect("the identity quotient exists")
            .clone();
        let subs = all_normal_subobjects(f.cod());
        let u = subs.choose(&mut rng).expect("zero is normal").clone();
        let v = subs.choose(&mut rng).expect("zero is normal").clone();
        cube_cases.push((i, f, u, v));
    }
    let per: Vec<SResult<Option<Violation>>> = cube_cases
        .par_iter()
        .map(|(i, f, u, v)| {
            let rep = cube_lemma_check(f, u, v)?;
            Ok((!rep.holds()).then(|| {
                let mut w = morphism_witness(Witness::new("cube"), f);
                w.subsets = vec![u.elements(), v.elements()];
                Violation::new(
                    format!("cube lemma fails for a quotient of {}", pool[*i].name),
                    w,
                )
            }))
        })
        .collect();
    let mut out = Outcome::default();
    for r in per {
        out.violations.extend(r?);
    }

    let mut applicable: Vec<(Reflector, Morphism, String)> = Vec::new();
    for (r, fam) in carre_pairs() {
        let entries = opts
            .corpus
            .family(fam, opts.max_size)
            .map_err(SuiteError::Usage)?;
        let found: Vec<SResult<Vec<(Reflector, Morphism, String)>>> = entries
            .par_iter()
            .map(|e| {
                let ka = r.unit_kernel(&e.algebra)?;
                Ok(quotient_maps(&e.algebra)
                    .into_iter()
                    .filter(|f| kernel(f).is_subset(&ka))
                    .map(|f| (r, f, e.name.clone()))
                    .collect())
            })
            .collect();
        for x in found {
            applicable.extend(x?);
        }
    }
    let carre_cases: Vec<&(Reflector, Morphism, String)> = (0..samples)
        .map(|_| &applicable[rng.gen_range(0..applicable.len())])
        .collect();
    let per: Vec<SResult<Option<Violation>>> = carre_cases
        .par_iter()
        .map(|(r, f, name)| {
            let rep = carre_zero_check(r, f)?;
            Ok((!rep.holds()).then(|| {
                let w = morphism_witness(Witness::new("carre-zero").param("reflector", r), f);
                let detail = format!(
                    "{r}: Carre-Zero fails for a quotient of {name} (I(f) iso: {}, pullback: {})",
                    rep.unit_factorisation, rep.pullback
                );
                Violation::new(detail, w)
            }))
        })
        .collect();
    for r in per {
        out.violations.extend(r?);
    }
    out.set("cube_samples", samples);
    out.set("carre_zero_samples", samples);
    out.set("carre_zero_pool", applicable.len());
    Ok(out)
}

fn snf_failure(m: &IntMatrix) -> Option<String> {
    smith_normal_form(m).check(m).err().map(str::to_string)
}

pub fn fgab_numerics(opts: &SuiteOptions) -> SResult<Outcome> {
    let count = opts.samples.unwrap_or(DEFAULT_SNF_SAMPLES);
    let pairs = (count / 5).max(1);
    let mut rng = rng_for(opts.seed, &[0x5af]);
    let mats: Vec<IntMatrix> = (0..count)
        .map(|_| {
            let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
            let mut m = random_matrix(&mut rng, r, c);
            if r > 1 && rng.gen_bool(0.25) {
                // A dependent row, so rank deficiency is exercised.
                let (a, b) = (rng.gen_range(0..r), rng.gen_range(0..r));
                for j in 0..c {
                    m.set(a, j, 2 * m.get(b, j));
                }
            }
            m
        })
        .collect();
    let mut out = Outcome::default();
    let bad: Vec<Option<Violation>> = mats
        .par_iter()
        .map(|m| {
            snf_failure(m).map(|msg| {
                let mut w = Witness::new("snf");
                w.matrices.push(matrix_rows(m));
                Violation::new(format!("Smith normal form check fails: {msg}"), w)
            })
        })
        .collect();
    out.violations.extend(bad.into_iter().flatten());

    let cases: Vec<(IntMatrix, IntMatrix, IntMatrix)> = (0..pairs)
        .map(|_| {
            let (r, c) = (rng.gen_range(0..=5), rng.gen_range(1..=5));
            let m = random_matrix(&mut rng, r, c);
            let p = random_unimodular(&mut rng, r);
            let q = random_unimodular(&mut rng, c);
            (m, p, q)
        })
        .collect();
    let per: Vec<SResult<Option<Violation>>> = cases
        .par_iter()
        .map(|(m, p, q)| {
            Ok(pi1_invariance_failure(m, p, q)?.map(|msg| {
                let mut w = Witness::new("pi1-invariance");
                w.matrices = vec![matrix_rows(m), matrix_rows(p), matrix_rows(q)];
                Violation::new(msg, w)
            }))
        })
        .collect();
    for r in per {
        out.violations.extend(r?);
    }
    out.set("snf_instances", count);
    out.set("presentation_pairs", pairs);
    Ok(out)
}

pub fn corpus_counts(opts: &SuiteOptions) -> SResult<Outcome> {
    let mut out = Outcome::default();
    for f in Family::ALL {
        let entries = opts
            .corpus
            .family(f, opts.max_size)
            .map_err(SuiteError::Usage)?;
        let top = opts.max_size.unwrap_or(usize::MAX).min(f.limit());
        let counts: Vec<usize> = (1..=top)
            .map(|n| entries.iter().filter(|e| e.algebra.size() == n).count())
            .collect();
        for (n, (&got, &want)) in counts.iter().zip(f.expected_counts()).enumerate() {
            if got != want {
                let w = Witness::new("corpus-count")
                    .param("family", f.name())
                    .param("order", n + 1)
                    .param("expected", want);
                out.violations.push(Violation::new(
                    format!(
                        "{}: {got} classes of order {}, expected {want}",
                        f.name(),
                        n + 1
                    ),
                    w,
                ));
            }
        }
        out.set(f.name(), json!(counts));
    }
    let top = opts.max_size.unwrap_or(8).min(8);
    let by_search: Vec<usize> = (1..=top)
        .into_par_iter()
        .map(|n| groups_by_table_search(n).len())
        .collect();
    for (n, (&got, &want)) in by_search.iter().zip(&corpus::GROUP_COUNTS).enumerate() {
        if got != want {
            let w = Witness::new("corpus-count")
                .param("family", "groups-table-search")
                .param("order", n + 1)
                .param("expected", want);
            out.violations.push(Violation::new(
                format!(
                    "table search: {got} groups of order {}, expected {want}",
                    n + 1
                ),
                w,
            ));
        }
    }
    out.set("groups_by_table_search", json!(by_search));
    Ok(out)
}

fn parse_param<T: std::str::FromStr>(w: &Witness, k: &str) -> SResult<T>
where
    T::Err: std::fmt::Display,
{
    let s = w.get(k).map_err(SuiteError::Usage)?;
    s.parse()
        .map_err(|e| SuiteError::Usage(format!("witness `{k}`: {e}")))
}

fn load_algebras(w: &Witness) -> SResult<Vec<Arc<FiniteAlgebra>>> {
    if w.algebras.is_empty() {
        return usage("witness has no algebra");
    }
    w.algebras
        .iter()
        .map(|a| a.load().map_err(SuiteError::Usage))
        .collect()
}

fn load_maps(w: &Witness, algs: &[Arc<FiniteAlgebra>]) -> SResult<Vec<Morphism>> {
    w.maps
        .iter()
        .map(|(d, c, m)| {
            let (Some(d), Some(c)) = (algs.get(*d), algs.get(*c)) else {
                return usage("map refers to a missing algebra");
            };
            Morphism::new(d.clone(), c.clone(), m.clone())
                .map_err(|e| SuiteError::Usage(e.to_string()))
        })
        .collect()
}

fn load_extension(w: &Witness) -> SResult<Extension> {
    let algs = load_algebras(w)?;
    let f = load_maps(w, &algs)?
        .into_iter()
        .next()
        .ok_or_else(|| SuiteError::Usage("witness has no map".into()))?;
    Extension::new(f).map_err(|e| SuiteError::Usage(e.to_string()))
}

fn load_matrix(rows: &[Vec<i128>], cols_hint: Option<usize>) -> SResult<IntMatrix> {
    let cols = rows.first().map(Vec::len).or(cols_hint).unwrap_or(0);
    IntMatrix::from_rows(cols, rows).map_err(|e| SuiteError::Usage(e.to_string()))
}

/// Re-runs the check a witness records. `Some` carries the reproduced
/// violation, `None` means the check now passes.
pub fn replay(w: &Witness, corpus: &CorpusSource) -> SResult<Option<String>> {
    let opts_for = |w: &Witness| -> SResult<SuiteOptions> {
        let max_size = match w.params.get("max-size").map(String::as_str) {
            None | Some("default") => None,
            Some(s) => Some(
                s.parse()
                    .map_err(|_| SuiteError::Usage(format!("bad max-size `{s}`")))?,
            ),
        };
        Ok(SuiteOptions {
            max_size,
            corpus: corpus.clone(),
            ..SuiteOptions::default()
        })
    };
    match w.check.as_str() {
        "closure-axiom" => replay_closure_axiom(w),
        "tf-axiom" => {
            let seed: u64 = parse_param(w, "seed")?;
            let index: usize = parse_param(w, "index")?;
            let axiom: u8 = parse_param(w, "axiom")?;
            let inst = corpus::random_tf_instances(seed, index + 1).remove(index);
            Ok(tf_axioms(&inst)?
                .contains(&axiom)
                .then(|| format!("tf: axiom {axiom} fails on random instance {index}")))
        }
        "fermeture" => replay_fermeture(w),
        "fermeture-strict-witness" => {
            let r: Reflector = parse_param(w, "reflector")?;
            let out = fermeture(&r, &opts_for(w)?)?;
            Ok(out
                .violations
                .into_iter()
                .find(|v| v.check == "fermeture-strict-witness")
                .map(|v| v.detail))
        }
        "characterisation" => {
            let adj: CompositeAdjunction = parse_param(w, "adjunction")?;
            characterisation_mismatch(&adj, &load_extension(w)?)
        }
        "galois-paths" => replay_galois_paths(w),
        "hopf-identity" => {
            let adj: CompositeAdjunction = parse_param(w, "adjunction")?;
            Ok(hopf_failure(&adj, &load_extension(w)?)?.0)
        }
        "pi1-schur" => replay_pi1_schur(w),
        "pi1-invariance" => {
            let [m, p, q] = &w.matrices[..] else {
                return usage("witness needs three matrices");
            };
            let m = load_matrix(m, None)?;
            let p = load_matrix(p, Some(m.rows()))?;
            let q = load_matrix(q, Some(m.cols()))?;
            pi1_invariance_failure(&m, &p, &q)
        }
        "protoadditivity-counterexample" => replay_protoadditivity_counterexample(w),
        "protoadditivity-search" => {
            let r: Reflector = parse_param(w, "reflector")?;
            let out = protoadditivity(&r, &opts_for(w)?)?;
            Ok(out
                .violations
                .into_iter()
                .find(|v| v.check == "protoadditivity-search")
                .map(|v| v.detail))
        }
        "cube" => {
            let f = load_extension(w)?;
            let [u, v] = &w.subsets[..] else {
                return usage("witness needs two subsets");
            };
            let u = NormalSubobject::new(f.base().clone(), u)?;
            let v = NormalSubobject::new(f.base().clone(), v)?;
            let rep = cube_lemma_check(f.map(), &u, &v)?;
            Ok((!rep.holds()).then(|| "cube lemma fails".to_string()))
        }
        "carre-zero" => {
            let r: Reflector = parse_param(w, "reflector")?;
            let f = load_extension(w)?;
            let rep = carre_zero_check(&r, f.map())?;
            Ok((!rep.holds()).then(|| {
                format!(
                    "{r}: Carre-Zero fails (I(f) iso: {}, pullback: {})",
                    rep.unit_factorisation, rep.pullback
                )
            }))
        }
        "snf" => {
            let m = load_matrix(
                w.matrices
                    .first()
                    .ok_or_else(|| SuiteError::Usage("witness has no matrix".into()))?,
                None,
            )?;
            Ok(snf_failure(&m).map(|msg| format!("Smith normal form check fails: {msg}")))
        }
        "corpus-count" => {
            let out = corpus_counts(&opts_for(w)?)?;
            let fam = w.get("family").map_err(SuiteError::Usage)?;
            let order = w.get("order").map_err(SuiteError::Usage)?;
            Ok(out
                .violations
                .into_iter()
                .find(|v| {
                    v.witness.0.params.get("family").map(String::as_str) == Some(fam)
                        && v.witness.0.params.get("order").map(String::as_str) == Some(order)
                })
                .map(|v| v.detail))
        }
        other => usage(format!("unknown check `{other}`")),
    }
}
