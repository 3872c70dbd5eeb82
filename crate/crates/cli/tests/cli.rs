use std::fs;
use std::path::Path;
use std::process::Command;

use galois_cli::format::{write_algebra, write_morphism};
use galois_core::corpus::named;
use galois_core::finalg::{quotient, NormalSubobject};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn galois(dir: &Path, args: &[&str]) -> Run {
    galois_env(dir, args, None)
}

fn galois_env(dir: &Path, args: &[&str], corpus: Option<&Path>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_galois"));
    cmd.current_dir(dir)
        .args(args)
        .env_remove("GALOIS_CORPUS_DIR");
    if let Some(c) = corpus {
        cmd.env("GALOIS_CORPUS_DIR", c);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Klein four, Z/2, Z/4, Q₈ and Q₈/Z(Q₈), with a few maps between them.
fn fixtures() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let put = |name: &str, text: String| fs::write(dir.path().join(name), text).unwrap();
    put(
        "klein4.alg",
        write_algebra(&named::klein4(), Some("Klein four")),
    );
    put("z2.alg", write_algebra(&named::cyclic(2), None));
    put("z4.alg", write_algebra(&named::cyclic(4), None));
    let q8 = named::quaternion8();
    put("q8.alg", write_algebra(&q8, None));
    let center = NormalSubobject::new(q8.clone(), &[0, 1]).unwrap();
    let (v, p) = quotient(&q8, &center).unwrap();
    put("q8_mod_center.alg", write_algebra(&v, None));
    put(
        "q8_to_v.mor",
        write_morphism("q8.alg", "q8_mod_center.alg", &p),
    );
    put("z2_into_z4.mor", "z2.alg z4.alg\n0 2\n".into());
    put("z4_onto_z2.mor", "z4.alg z2.alg\n0 1 0 1\n".into());
    dir
}

#[test]
fn schur_multiplier_of_the_klein_group() {
    let fx = fixtures();
    let r = galois(fx.path(), &["h2", "--group", "klein4.alg"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.trim(), "Z/2");
}

#[test]
fn h2_with_coefficients() {
    let fx = fixtures();
    let r = galois(fx.path(), &["h2", "--group", "klein4.alg", "--mod", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.trim(), "Z/2 x Z/2 x Z/2");
}

#[test]
fn quaternion_galois_group_over_the_klein_group() {
    let fx = fixtures();
    let r = galois(
        fx.path(),
        &[
            "--format",
            "json",
            "galois-group",
            "--adjunction",
            "ab+id",
            "--map",
            "q8_to_v.mor",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    let text = v["results"].to_string();
    assert!(text.contains("Z/2"), "{text}");
}

#[test]
fn non_surjective_map_is_a_usage_error() {
    let fx = fixtures();
    let r = galois(
        fx.path(),
        &[
            "classify-ext",
            "--adjunction",
            "ab+id",
            "--map",
            "z2_into_z4.mor",
        ],
    );
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("surjective"), "{}", r.stderr);
}

#[test]
fn unknown_subcommand_and_bad_reflector_exit_2() {
    let fx = fixtures();
    assert_eq!(galois(fx.path(), &["frobnicate"]).code, 2);
    let r = galois(
        fx.path(),
        &["reflect", "--reflector", "nope", "--algebra", "klein4.alg"],
    );
    assert_eq!(r.code, 2);
}

#[test]
fn malformed_algebra_file_exit_2() {
    let fx = fixtures();
    fs::write(fx.path().join("bad.alg"), "group 2\n0 1\n1 0\n7\n").unwrap();
    let r = galois(
        fx.path(),
        &["reflect", "--reflector", "ab", "--algebra", "bad.alg"],
    );
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line"), "{}", r.stderr);
}

#[test]
fn pi1_of_free_abelian_groups() {
    let fx = fixtures();
    let r = galois(fx.path(), &["pi1", "--fgab", "0,0", "--coeff", "abtf"]);
    assert_eq!((r.code, r.stdout.trim()), (0, "Z"));
    let r = galois(fx.path(), &["pi1", "--fgab", "2,2"]);
    assert_eq!((r.code, r.stdout.trim()), (0, "Z/2"));
    let r = galois(fx.path(), &["pi1", "--fgab", "6"]);
    assert_eq!((r.code, r.stdout.trim()), (0, "0"));
}

#[test]
fn closure_axioms_for_red_pass() {
    let fx = fixtures();
    let r = galois(
        fx.path(),
        &[
            "verify",
            "closure-axioms",
            "--reflector",
            "red",
            "--max-size",
            "8",
        ],
    );
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
}

#[test]
fn json_reports_are_reproducible() {
    let fx = fixtures();
    let args = [
        "--format",
        "json",
        "--seed",
        "7",
        "verify",
        "lemmas",
        "--samples",
        "40",
    ];
    let a = galois(fx.path(), &args);
    let b = galois(fx.path(), &args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    // The worker count does not leak into results.
    let args = [
        "--format",
        "json",
        "--jobs",
        "1",
        "--seed",
        "7",
        "verify",
        "lemmas",
        "--samples",
        "40",
    ];
    let c: Value = serde_json::from_str(&galois(fx.path(), &args).stdout).unwrap();
    let a: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(a["results"], c["results"]);
    assert_eq!(a["violations"], c["violations"]);
}

#[test]
fn violations_replay() {
    let fx = fixtures();
    let r = galois(
        fx.path(),
        &[
            "--format",
            "json",
            "verify",
            "fermeture",
            "--reflector",
            "red",
            "--max-size",
            "8",
        ],
    );
    assert_eq!(r.code, 1, "{}", r.stderr);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    let violations = report["violations"].as_array().unwrap();
    assert!(!violations.is_empty());
    fs::write(fx.path().join("report.json"), &r.stdout).unwrap();
    fs::write(fx.path().join("one.json"), violations[0].to_string()).unwrap();
    for file in ["report.json", "one.json"] {
        let replay = galois(fx.path(), &["replay", file]);
        assert_eq!(replay.code, 1, "{file}: {}{}", replay.stdout, replay.stderr);
    }
}

#[test]
fn input_files_are_hashed() {
    let fx = fixtures();
    let r = galois(
        fx.path(),
        &["--format", "json", "h2", "--group", "klein4.alg"],
    );
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    let inputs = v["inputs"].as_object().unwrap();
    assert_eq!(inputs.len(), 1);
    let hash = inputs.values().next().unwrap().as_str().unwrap();
    assert_eq!(hash.len(), 64);
}

#[test]
fn generated_corpus_is_loaded_from_the_environment() {
    let fx = fixtures();
    let out = fx.path().join("corpus");
    let r = galois(
        fx.path(),
        &[
            "corpus",
            "gen",
            "--out",
            out.to_str().unwrap(),
            "--fgab",
            "10",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(out.join("manifest.json").exists());

    let args = [
        "--format",
        "json",
        "verify",
        "closure-axioms",
        "--reflector",
        "ab",
        "--max-size",
        "6",
    ];
    let from_disk = galois_env(fx.path(), &args, Some(&out));
    let built = galois(fx.path(), &args);
    assert_eq!(from_disk.code, 0, "{}", from_disk.stderr);
    let mut disk: Value = serde_json::from_str(&from_disk.stdout).unwrap();
    let built: Value = serde_json::from_str(&built.stdout).unwrap();
    let location = disk["results"].as_object_mut().unwrap().remove("corpus");
    assert_eq!(location.as_ref().and_then(Value::as_str), out.to_str());
    assert_eq!(disk, built);

    // A tampered file is refused.
    let groups = out.join("groups");
    let victim = fs::read_dir(&groups)
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    let mut text = fs::read_to_string(&victim).unwrap();
    text.insert_str(0, "# edited\n");
    fs::write(&victim, text).unwrap();
    let tampered = galois_env(fx.path(), &args, Some(&out));
    assert_ne!(tampered.code, 0);
}
