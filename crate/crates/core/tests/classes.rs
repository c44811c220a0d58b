use copos_core::classes::{classify, is_block_sign, is_mn, is_rn, positive_index};
use copos_core::{fixtures, random, ClassLabel, SymMatrix, Tolerances};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Sign-structured matrix likely to have a block sign pattern: nonpositive
/// leading block, nonpositive coupling nondecreasing along rows, ordered
/// trailing block.
fn block_candidate(rng: &mut random::TestRng, n: usize, k: usize) -> SymMatrix {
    use rand::Rng;
    let tail = random::mn_matrix(rng, n - k);
    let coupling: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            let mut acc: f64 = -rng.gen_range(0.0..4.0);
            (0..n - k)
                .map(|_| {
                    let v = acc;
                    acc = (acc + rng.gen_range(0.0..1.0)).min(0.0);
                    v
                })
                .collect()
        })
        .collect();
    let lead: Vec<f64> = (0..k * k).map(|_| -rng.gen_range(0.0..3.0)).collect();
    SymMatrix::from_fn(n, |i, j| match (i < k, j < k) {
        (true, true) if i == j => 1.0,
        (true, true) => lead[i.min(j) * k + i.max(j)],
        (true, false) => coupling[i][j - k],
        (false, true) => coupling[j][i - k],
        (false, false) => tail.get(i - k, j - k),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn deletion_keeps_ordering(seed in any::<u64>(), n in 2usize..=9) {
        let mut rng = random::rng(seed);
        let a = random::mn_matrix(&mut rng, n);
        prop_assert!(is_mn(&a, &tol()));
        for i in 0..n {
            prop_assert!(is_mn(&a.delete_row_col(i).unwrap(), &tol()));
        }
    }

    #[test]
    fn shift_keeps_ordering_verdict(seed in any::<u64>(), n in 2usize..=8, lam in -50.0f64..50.0) {
        let mut rng = random::rng(seed);
        let a = random::mn_matrix(&mut rng, n);
        prop_assert!(is_mn(&a.shift_all(lam), &tol()));
        let b = random::symmetric(&mut rng, n, 1.0);
        prop_assert_eq!(is_mn(&b, &tol()), is_mn(&b.shift_all(lam), &tol()));
    }

    #[test]
    fn schur_closure_with_index_bound(seed in any::<u64>(), n in 3usize..=8) {
        let mut rng = random::rng(seed);
        let a = random::mn_negative_first_row(&mut rng, n);
        prop_assert!(is_mn(&a.schur_complement(0, tol().eps_ord).unwrap(), &tol()));
        let r = random::rn_negative_first_row(&mut rng, n, &tol());
        let s = r.schur_complement(0, tol().eps_ord).unwrap();
        prop_assert!(is_rn(&s, &tol()));
        prop_assert!(positive_index(&s, &tol()) + 1 >= positive_index(&r, &tol()));
    }

    #[test]
    fn block_sign_implies_relaxed(seed in any::<u64>(), n in 2usize..=8, k in 1usize..8) {
        let k = 1 + (k - 1) % (n - 1);
        let mut rng = random::rng(seed);
        let a = block_candidate(&mut rng, n, k);
        for j in 1..n {
            if is_block_sign(&a, j, &tol()) {
                prop_assert!(is_rn(&a, &tol()), "block {}:\n{}", j, a.to_text());
            }
        }
    }
}

#[test]
fn block_candidates_hit_the_class() {
    // The generator above is only useful if it produces block matrices.
    let mut rng = random::rng(3);
    let hits = (0..200)
        .filter(|c| {
            let n = 2 + c % 7;
            let k = 1 + c % (n - 1);
            is_block_sign(&block_candidate(&mut rng, n, k), k, &tol())
        })
        .count();
    assert!(hits > 150, "{hits}");
}

#[test]
fn fixture_labels() {
    let t = tol();
    let b = classify(&fixtures::sign_pattern_b(), &t).unwrap();
    assert!(b.contains(&ClassLabel::Mn));
    let a = classify(&fixtures::sign_pattern_a(), &t).unwrap();
    assert!(!a.contains(&ClassLabel::Mn));
    let id = classify(&SymMatrix::identity(4), &t).unwrap();
    assert!(id.contains(&ClassLabel::ZMatrix) && id.contains(&ClassLabel::QPlus));
    // Its minimum entry, 0, sits off the diagonal.
    assert!(!id.contains(&ClassLabel::QMin));
    assert!(classify(&fixtures::block_sign_example(), &t)
        .unwrap()
        .contains(&ClassLabel::BlockSign(2)));
}
