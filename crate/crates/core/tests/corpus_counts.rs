use std::time::Instant;

use galois_core::corpus::{self, COMMUTATIVE_RING_COUNTS, GROUP_COUNTS, LOOP_COUNTS, RING_COUNTS};

#[test]
fn group_counts_up_to_16() {
    let t = Instant::now();
    let g = corpus::groups(16);
    for n in 1..=16 {
        assert_eq!(
            g.iter().filter(|e| e.algebra.size() == n).count(),
            GROUP_COUNTS[n - 1],
            "order {n}"
        );
    }
    eprintln!("groups: {:?}", t.elapsed());
}

#[test]
fn table_search_agrees_up_to_8() {
    let t = Instant::now();
    for n in 1..=8 {
        assert_eq!(
            corpus::groups_by_table_search(n).len(),
            GROUP_COUNTS[n - 1],
            "order {n}"
        );
    }
    eprintln!("table search: {:?}", t.elapsed());
}

#[test]
fn loop_counts_up_to_6() {
    let t = Instant::now();
    let l = corpus::loops(6);
    for n in 1..=6 {
        assert_eq!(
            l.iter().filter(|e| e.algebra.size() == n).count(),
            LOOP_COUNTS[n - 1],
            "order {n}"
        );
    }
    eprintln!("loops: {:?}", t.elapsed());
}

#[test]
fn ring_counts_up_to_8() {
    let t = Instant::now();
    let r = corpus::rings(8);
    for n in 1..=8 {
        assert_eq!(
            r.iter().filter(|e| e.algebra.size() == n).count(),
            RING_COUNTS[n - 1],
            "order {n}"
        );
    }
    eprintln!("rings: {:?}", t.elapsed());
}

#[test]
fn commutative_rings_up_to_16() {
    let t = Instant::now();
    let r = corpus::commutative_rings(16);
    assert!(r.iter().all(|e| e.algebra.is_commutative()));
    for n in 1..=15 {
        let c = r.iter().filter(|e| e.algebra.size() == n).count();
        assert_eq!(c, COMMUTATIVE_RING_COUNTS[n - 1], "order {n}");
    }
    let c16 = r.iter().filter(|e| e.algebra.size() == 16).count();
    assert!((1..=162).contains(&c16));
    eprintln!("commutative rings: {c16} of order 16, {:?}", t.elapsed());
}
