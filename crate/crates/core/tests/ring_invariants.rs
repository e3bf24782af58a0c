//! Structural invariants of ring digraphs checked through the public API.

use proptest::prelude::*;
use ringspec::rootfind::char_poly_exact;
use ringspec::RingDigraph;

/// Ring whose absent positions are separated by `gaps`, starting at 1.
fn from_gaps(gaps: &[usize]) -> RingDigraph {
    let n: usize = gaps.iter().sum();
    let mut mask = vec![true; n];
    let mut pos = 0;
    for g in gaps {
        mask[pos] = false;
        pos += g;
    }
    RingDigraph::new(mask).unwrap()
}

fn gap_lists() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..6, 1..7).prop_filter("n >= 3", |g| g.iter().sum::<usize>() >= 3)
}

proptest! {
    #[test]
    fn char_poly_ignores_gap_order(gaps in gap_lists(), seed in any::<u64>()) {
        let g = from_gaps(&gaps);
        // all gaps 1 means every reverse arc is absent, reported with no gaps
        let want = if gaps.iter().all(|&x| x == 1) { Vec::new() } else { gaps.clone() };
        prop_assert_eq!(g.decompose().gaps, want);
        let mut shuffled = gaps.clone();
        let len = shuffled.len();
        shuffled.rotate_left((seed as usize) % len);
        shuffled.swap(0, (seed as usize / 7) % len);
        let h = from_gaps(&shuffled);
        prop_assert_eq!(g.char_poly(), h.char_poly());
        prop_assert_eq!(g.classify_exact().case, h.classify_exact().case);
    }

    #[test]
    fn closed_form_matches_determinant(gaps in gap_lists()) {
        let g = from_gaps(&gaps);
        prop_assert_eq!(g.char_poly(), char_poly_exact(&g.laplacian()));
    }

    #[test]
    fn rotation_preserves_everything(gaps in gap_lists(), s in 0usize..40) {
        let g = from_gaps(&gaps);
        let r = g.rotated(s % g.n());
        prop_assert_eq!(r.decompose().sorted_gaps(), g.decompose().sorted_gaps());
        prop_assert_eq!(r.char_poly(), g.char_poly());
        prop_assert_eq!(r.canonical_form(), g.canonical_form());
        prop_assert_eq!(char_poly_exact(&r.laplacian()), char_poly_exact(&g.laplacian()));
    }

    #[test]
    fn laplacian_rows_sum_to_zero(gaps in gap_lists()) {
        let l = from_gaps(&gaps).laplacian();
        prop_assert!(l.row_sums().iter().all(|&s| s == 0));
    }
}
