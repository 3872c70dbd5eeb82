use std::path::Path;
use std::sync::Arc;

use galois_cli::format::{
    morphism_from_spec, parse_algebra, parse_fgab, parse_matrix, parse_morphism_spec,
    write_algebra, write_matrix, write_morphism,
};
use galois_core::corpus;
use galois_core::fgab::{FgAb, IntMatrix};
use proptest::prelude::*;

#[test]
fn corpus_algebras_roundtrip() {
    let all = corpus::groups(8)
        .into_iter()
        .chain(corpus::loops(5))
        .chain(corpus::rings(4));
    for e in all {
        let text = write_algebra(&e.algebra, Some(&e.name));
        let back = parse_algebra(&text).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        assert_eq!(back.signature(), e.algebra.signature(), "{}", e.name);
        assert_eq!(back.basic_tables(), e.algebra.basic_tables(), "{}", e.name);
    }
}

#[test]
fn trailing_tokens_are_rejected() {
    let good = "group 2\n0 1\n1 0\n";
    assert!(parse_algebra(good).is_ok());
    assert!(parse_algebra(&format!("{good}1\n")).is_err());
    assert!(parse_algebra("group 2\n0 1 0\n1 0\n").is_err());
    assert!(parse_algebra("ring 2\n0 1\n1 0\n\n0 0\n0 1\n\n0 0\n").is_err());
    assert!(parse_matrix("1 2\n3 4\n").is_ok());
    assert!(parse_matrix("1 2\n3 4 5\n").is_err());
}

#[test]
fn malformed_headers_are_rejected() {
    for text in [
        "",
        "group\n",
        "monoid 2\n0 1\n1 0\n",
        "group two\n",
        "group 2\n0 2\n1 0\n",
    ] {
        assert!(parse_algebra(text).is_err(), "{text:?}");
    }
}

#[test]
fn errors_carry_line_numbers() {
    let e = parse_algebra("# Z/2\ngroup 2\n0 1\n1 x\n").unwrap_err();
    assert_eq!(e.line, 4);
}

#[test]
fn morphisms_roundtrip() {
    let q8 = corpus::named::quaternion8();
    let z = galois_core::NormalSubobject::new(q8.clone(), &[0, 1]).unwrap();
    let (v, p) = galois_core::finalg::quotient(&q8, &z).unwrap();
    let text = write_morphism("q8.alg", "v.alg", &p);
    let spec = parse_morphism_spec(&text, Path::new("/data")).unwrap();
    assert_eq!(spec.dom, Path::new("/data/q8.alg"));
    assert_eq!(spec.cod, Path::new("/data/v.alg"));
    let back = morphism_from_spec(&spec, q8.clone(), v.clone()).unwrap();
    assert_eq!(back.map(), p.map());

    let short = parse_morphism_spec("q8.alg v.alg\n0 1 2\n", Path::new(".")).unwrap();
    assert!(morphism_from_spec(&short, q8, Arc::clone(&v)).is_err());
}

#[test]
fn fgab_forms_agree() {
    assert_eq!(parse_fgab("2,2").unwrap(), parse_fgab("Z/2 x Z/2").unwrap());
    assert_eq!(parse_fgab("0,0,4").unwrap(), FgAb::new(2, vec![4]).unwrap());
    assert!(parse_fgab("-3").is_err());
}

proptest! {
    #[test]
    fn matrices_roundtrip(r in 0usize..5, c in 1usize..5, seed in prop::collection::vec(-1000i128..1000, 25)) {
        let m = IntMatrix::new(r, c, seed[..r * c].to_vec()).unwrap();
        prop_assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn fgab_display_roundtrips(rank in 0usize..3, orders in prop::collection::vec(2i128..30, 0..4)) {
        let mut all = orders.clone();
        all.extend(std::iter::repeat(0).take(rank));
        let g = FgAb::from_cyclic_orders(&all);
        prop_assert_eq!(parse_fgab(&g.to_string()).unwrap(), g);
    }
}
