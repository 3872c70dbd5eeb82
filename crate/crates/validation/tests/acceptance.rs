//! One line per acceptance criterion, then a single verdict.
//!
//! Every criterion runs the same suite code as `galois verify`, over the
//! built-in corpus, with seed 0 and default sample counts. Pinned values are
//! checked alongside. A criterion passes only with zero violations, every
//! pin matching exactly, and the wall time within its budget.

use std::time::{Duration, Instant};

use galois_cli::corpus_io::{CorpusSource, Family};
use galois_cli::suites::{self, Outcome, SuiteOptions};
use galois_core::cohom::schur_multiplier;
use galois_core::corpus::{named, quotient_maps};
use galois_core::finalg::{abelian_structure, NormalSubobject};
use galois_core::galois::{galois_group, Extension};
use galois_core::hopf::{pi1_fgab, Coeff};
use galois_core::{CompositeAdjunction, FgAb, Reflector};
use serde_json::Value;

struct Criterion {
    id: u8,
    title: &'static str,
    budget: Duration,
    failures: Vec<String>,
    notes: Vec<String>,
    elapsed: Duration,
}

impl Criterion {
    fn passed(&self) -> bool {
        self.failures.is_empty() && self.elapsed <= self.budget
    }

    fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{verdict} {}. {} [{:.1}s of {}s]",
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        );
        if !self.notes.is_empty() {
            s.push_str(&format!(" ({})", self.notes.join("; ")));
        }
        if self.elapsed > self.budget {
            s.push_str("\n      over the time budget");
        }
        for f in self.failures.iter().take(5) {
            s.push_str(&format!("\n      {f}"));
        }
        if self.failures.len() > 5 {
            s.push_str(&format!("\n      … {} more", self.failures.len() - 5));
        }
        s
    }
}

fn run(
    id: u8,
    title: &'static str,
    budget_secs: u64,
    body: impl FnOnce(&mut Vec<String>, &mut Vec<String>),
) -> Criterion {
    let start = Instant::now();
    let (mut failures, mut notes) = (Vec::new(), Vec::new());
    body(&mut failures, &mut notes);
    Criterion {
        id,
        title,
        budget: Duration::from_secs(budget_secs),
        failures,
        notes,
        elapsed: start.elapsed(),
    }
}

fn options() -> SuiteOptions {
    SuiteOptions {
        seed: 0,
        max_size: None,
        samples: None,
        corpus: CorpusSource::generated(),
    }
}

fn reflector(s: &str) -> Reflector {
    s.parse().expect("known reflector")
}

fn adjunction(s: &str) -> CompositeAdjunction {
    s.parse().expect("known adjunction")
}

/// Folds a suite outcome into the failure list.
fn absorb(
    label: &str,
    res: Result<Outcome, suites::SuiteError>,
    failures: &mut Vec<String>,
) -> Option<Outcome> {
    match res {
        Ok(o) => {
            for v in &o.violations {
                failures.push(v.detail.clone());
            }
            Some(o)
        }
        Err(e) => {
            failures.push(format!("{label}: error: {e}"));
            None
        }
    }
}

fn int(o: &Outcome, key: &str) -> u64 {
    o.results.get(key).and_then(Value::as_u64).unwrap_or(0)
}

fn pin(failures: &mut Vec<String>, what: &str, got: impl ToString, want: impl ToString) {
    let (got, want) = (got.to_string(), want.to_string());
    if got != want {
        failures.push(format!("pin {what}: got {got}, expected {want}"));
    }
}

fn closure_axioms() -> Criterion {
    run(
        1,
        "closure axioms for ab, crng, red, grp, tf, id",
        120,
        |fail, notes| {
            let opts = options();
            for r in ["ab", "crng", "red", "grp", "tf", "id"] {
                if let Some(o) = absorb(r, suites::closure_axioms(&reflector(r), &opts), fail) {
                    notes.push(format!("{r}: {} algebras", int(&o, "algebras")));
                    if r == "tf" {
                        pin(
                            fail,
                            "tf random FgAb instances",
                            int(&o, "fgab_instances"),
                            200,
                        );
                    }
                }
            }
        },
    )
}

fn fermeture() -> Criterion {
    run(
        2,
        "closure lemma: parts (1)-(3) and a strict witness for red",
        120,
        |fail, notes| {
            let opts = options();
            for r in ["ab", "crng", "red", "grp", "tf", "id"] {
                if let Some(o) = absorb(r, suites::fermeture(&reflector(r), &opts), fail) {
                    if r == "red" {
                        let w = o
                            .results
                            .get("strict_witness")
                            .cloned()
                            .unwrap_or(Value::Null);
                        notes.push(format!("red strict witness: {w}"));
                    }
                }
            }
        },
    )
}

fn characterisation() -> Criterion {
    run(
        3,
        "normal = central characterisation (crng+red, ab+id)",
        300,
        |fail, notes| {
            let opts = options();
            for a in ["crng+red", "ab+id"] {
                if let Some(o) = absorb(a, suites::characterisation(&adjunction(a), &opts), fail) {
                    notes.push(format!("{a}: {} extensions", int(&o, "extensions")));
                }
            }
        },
    )
}

fn galois_paths() -> Criterion {
    run(
        4,
        "Galois group by two paths, Gal(Q8 -> V) = Z/2",
        60,
        |fail, notes| {
            let opts = options();
            for a in ["crng+red", "ab+id", "grp+id"] {
                if let Some(o) = absorb(a, suites::galois_paths(&adjunction(a), &opts), fail) {
                    notes.push(format!("{a}: {} normal", int(&o, "normal_extensions")));
                }
            }
            let q8 = named::quaternion8();
            let center = NormalSubobject::new(q8.clone(), &[0, 1]).expect("centre is normal");
            match Extension::quotient(&q8, &center).and_then(|p| galois_group(&Reflector::AB, &p)) {
                Ok(g) => pin(fail, "Gal(Q8 -> V, ab)", abelian_structure(&g.group), "Z/2"),
                Err(e) => fail.push(format!("Gal(Q8 -> V, ab): {e}")),
            }
        },
    )
}

fn hopf_identity() -> Criterion {
    run(
        5,
        "Hopf identity on every surjection (crng+red, ab+id, grp+id)",
        600,
        |fail, notes| {
            let opts = options();
            for a in ["crng+red", "ab+id", "grp+id"] {
                if let Some(o) = absorb(a, suites::hopf_identity(&adjunction(a), &opts), fail) {
                    notes.push(format!("{a}: {} surjections", int(&o, "extensions")));
                }
            }
        },
    )
}

fn pi1_engine() -> Criterion {
    run(
        6,
        "pi1 of abelian groups against the Schur multiplier",
        120,
        |fail, notes| {
            if let Some(o) = absorb("pi1", suites::pi1(&options()), fail) {
                notes.push(format!(
                    "{} finite abelian groups",
                    int(&o, "finite_abelian_groups")
                ));
            }
            let v = FgAb::finite(&[2, 2]);
            pin(fail, "pi1(V, ab)", pi1_fgab(&v, Coeff::Ab), "Z/2");
            pin(
                fail,
                "Schur(V)",
                schur_multiplier(&named::klein4())
                    .map(|g| g.to_string())
                    .unwrap_or_default(),
                "Z/2",
            );
            for n in 1..=16 {
                pin(
                    fail,
                    &format!("pi1(Z/{n}, ab)"),
                    pi1_fgab(&FgAb::cyclic(n), Coeff::Ab),
                    "0",
                );
            }
            pin(
                fail,
                "pi1(Z^2, abtf)",
                pi1_fgab(&FgAb::free(2), Coeff::AbTf),
                "Z",
            );
            for b in [
                FgAb::finite(&[2, 2]),
                FgAb::finite(&[4, 4]),
                FgAb::finite(&[2, 2, 2]),
            ] {
                pin(
                    fail,
                    &format!("pi1({b}, abtf)"),
                    pi1_fgab(&b, Coeff::AbTf),
                    "0",
                );
            }
        },
    )
}

fn protoadditivity() -> Criterion {
    run(
        7,
        "protoadditivity: none for red, a counterexample for ab",
        120,
        |fail, notes| {
            let opts = options();
            for r in ["red", "ab"] {
                if let Some(o) = absorb(r, suites::protoadditivity(&reflector(r), &opts), fail) {
                    let found = o
                        .results
                        .get("counterexample")
                        .is_some_and(|v| !v.is_null());
                    notes.push(format!(
                        "{r}: counterexample {}",
                        if found { "found" } else { "none" }
                    ));
                    pin(fail, &format!("{r} counterexample found"), found, r == "ab");
                }
            }
        },
    )
}

fn lemmas() -> Criterion {
    run(
        8,
        "cube lemma and square-zero lemma on 500 samples each",
        120,
        |fail, notes| {
            if let Some(o) = absorb("lemmas", suites::lemmas(&options()), fail) {
                pin(fail, "cube samples", int(&o, "cube_samples"), 500);
                pin(
                    fail,
                    "square-zero samples",
                    int(&o, "carre_zero_samples"),
                    500,
                );
                notes.push(format!("square-zero pool {}", int(&o, "carre_zero_pool")));
            }
        },
    )
}

fn fgab_numerics() -> Criterion {
    run(
        9,
        "Smith forms and presentation invariance",
        60,
        |fail, _| {
            if let Some(o) = absorb("fgab", suites::fgab_numerics(&options()), fail) {
                pin(fail, "SNF instances", int(&o, "snf_instances"), 1000);
                pin(
                    fail,
                    "presentation pairs",
                    int(&o, "presentation_pairs"),
                    200,
                );
            }
        },
    )
}

#[test]
fn acceptance_criteria() {
    let criteria = [
        closure_axioms(),
        fermeture(),
        characterisation(),
        galois_paths(),
        hopf_identity(),
        pi1_engine(),
        protoadditivity(),
        lemmas(),
        fgab_numerics(),
    ];
    println!();
    for c in &criteria {
        println!("{}", c.line());
    }
    let failed: Vec<u8> = criteria
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.id)
        .collect();
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed.len(),
        criteria.len()
    );
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

/// A surjection of commutative rings along which the nilradical does not
/// push forward.
#[test]
fn red_is_not_birkhoff() {
    let corpus = CorpusSource::generated()
        .family(Family::CommutativeRings, None)
        .expect("built-in corpus");
    let witness = corpus.iter().find_map(|e| {
        quotient_maps(&e.algebra)
            .into_iter()
            .find(|q| !Reflector::RED.pushes_forward(q).expect("commutative"))
            .map(|q| (e.name.clone(), q.cod().size()))
    });
    println!(
        "{} red not Birkhoff: push-forward witness {}",
        if witness.is_some() { "PASS" } else { "FAIL" },
        witness
            .as_ref()
            .map_or("none in the corpus".into(), |(n, s)| format!(
                "{n} onto an algebra of size {s}"
            ))
    );
    assert!(
        witness.is_some(),
        "no surjection between finite commutative rings moves the nilradical off the nilradical"
    );
}
