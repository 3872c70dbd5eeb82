//! Loops by Latin-square backtracking.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::finalg::{canonical_form, FiniteAlgebra, DEFAULT_CANONICAL_BOUND};

/// Calls `visit` on every `n × n` Latin square whose first row and column
/// are `0, 1, …, n−1`, in row-major lexicographic order, until it returns
/// `false`. These are exactly the loop tables on `0..n` with unit `0`.
pub fn latin_loops(n: usize, mut visit: impl FnMut(&[u32]) -> bool) {
    let mut t = vec![u32::MAX; n * n];
    for i in 0..n {
        t[i] = i as u32;
        t[i * n] = i as u32;
    }
    if n <= 1 {
        t.truncate(n * n);
        visit(&t);
        return;
    }
    let mut row_used = vec![0u64; n];
    let mut col_used = vec![0u64; n];
    for i in 0..n {
        row_used[i] |= 1 << i;
        row_used[0] |= 1 << i;
        col_used[i] |= 1 << i;
        col_used[0] |= 1 << i;
    }
    // Cells (r, c) with r, c ≥ 1 in row-major order.
    let cells: Vec<(usize, usize)> = (1..n).flat_map(|r| (1..n).map(move |c| (r, c))).collect();
    fn rec(
        k: usize,
        n: usize,
        cells: &[(usize, usize)],
        t: &mut [u32],
        row_used: &mut [u64],
        col_used: &mut [u64],
        visit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        if k == cells.len() {
            return visit(t);
        }
        let (r, c) = cells[k];
        for v in 0..n {
            let bit = 1u64 << v;
            if row_used[r] & bit != 0 || col_used[c] & bit != 0 {
                continue;
            }
            row_used[r] |= bit;
            col_used[c] |= bit;
            t[r * n + c] = v as u32;
            let go_on = rec(k + 1, n, cells, t, row_used, col_used, visit);
            row_used[r] &= !bit;
            col_used[c] &= !bit;
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(
        0,
        n,
        &cells,
        &mut t,
        &mut row_used,
        &mut col_used,
        &mut visit,
    );
}

/// All loops of order `n` up to isomorphism, in order of first appearance.
pub fn loops_of_order(n: usize) -> Vec<Arc<FiniteAlgebra>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    latin_loops(n, |t| {
        let l = FiniteAlgebra::loop_from(t.to_vec()).expect("normalised Latin square is a loop");
        let key = canonical_form(&l, DEFAULT_CANONICAL_BOUND).expect("small");
        if seen.insert(key) {
            out.push(Arc::new(l));
        }
        true
    });
    out
}
