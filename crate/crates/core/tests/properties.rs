use agw_core::code::{build_code, null_space};
use agw_core::formulas::{self, dual_hierarchy_from_primal, dual_initial_lookup, dual_terminal_lookup};
use agw_core::hierarchy::{exact_dr, exact_dr_reference, exact_dr_with_witness, exact_hierarchy, EntryStatus};
use agw_core::minors::{index_of_point, point_from_index};
use agw_core::{CodeParams, Execution, Field, LinearCode, Matrix, SearchOptions, WeightHierarchy};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// A random full-rank code over GF(q) with k ≤ 4, n ≤ 9.
fn random_code() -> impl Strategy<Value = LinearCode> {
    (
        prop::sample::select(vec![2u64, 3, 4]),
        1usize..=4,
        0usize..=5,
        any::<u64>(),
    )
        .prop_filter_map("rank deficient", |(q, k, extra, seed)| {
            let n = k + extra;
            let field = Field::new(q).unwrap();
            let mut rng = StdRng::seed_from_u64(seed);
            let rows: Vec<Vec<u16>> = (0..k)
                .map(|_| (0..n).map(|_| rng.random_range(0..q as u16)).collect())
                .collect();
            LinearCode::new(field, Matrix::from_rows(&rows, n).unwrap()).ok()
        })
}

fn small_params() -> impl Strategy<Value = CodeParams> {
    prop::sample::select(vec![
        (2u64, 1usize, 1usize, 1usize),
        (2, 1, 2, 1),
        (2, 1, 3, 1),
        (2, 1, 4, 1),
        (3, 1, 2, 1),
        (4, 1, 2, 1),
        (2, 2, 2, 1),
        (2, 2, 2, 2),
        (3, 1, 3, 1),
    ])
    .prop_map(|(q, l, lp, h)| CodeParams::new(q, l, lp, h).unwrap())
}

fn permute_columns(code: &LinearCode, perm: &[usize]) -> LinearCode {
    let g = code.generator();
    let rows: Vec<Vec<u16>> = (0..g.rows())
        .map(|i| perm.iter().map(|&j| g.get(i, j)).collect())
        .collect();
    LinearCode::new(code.field().clone(), Matrix::from_rows(&rows, g.cols()).unwrap()).unwrap()
}

/// Left-multiplies the generator by a random invertible matrix.
fn change_basis(code: &LinearCode, rng: &mut StdRng) -> LinearCode {
    let f = code.field();
    let k = code.dimension();
    let q = f.order() as u16;
    loop {
        let a: Vec<Vec<u16>> = (0..k)
            .map(|_| (0..k).map(|_| rng.random_range(0..q)).collect())
            .collect();
        let g = code.generator();
        let rows: Vec<Vec<u16>> = a
            .iter()
            .map(|coeffs| {
                (0..g.cols())
                    .map(|j| (0..k).fold(0, |acc, i| f.add(acc, f.mul(coeffs[i], g.get(i, j)))))
                    .collect()
            })
            .collect();
        if let Ok(c) = LinearCode::new(f.clone(), Matrix::from_rows(&rows, g.cols()).unwrap()) {
            return c;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_matches_plain_enumeration(code in random_code()) {
        for r in 0..=code.dimension() {
            let fast = exact_dr(&code, r, SearchOptions::default()).unwrap();
            prop_assert_eq!(fast, exact_dr_reference(&code, r, u128::MAX).unwrap());
        }
    }

    #[test]
    fn witness_attains_the_weight(code in random_code()) {
        for r in 1..=code.dimension() {
            let w = exact_dr_with_witness(&code, r, SearchOptions::default()).unwrap();
            prop_assert_eq!(w.witness.rank(), r);
            prop_assert_eq!(code.support_weight(&w.witness).unwrap() as u64, w.value);
        }
    }

    #[test]
    fn hierarchy_is_strictly_increasing(code in random_code()) {
        let h = exact_hierarchy(&code, SearchOptions::default()).unwrap();
        prop_assert!(h.is_strictly_increasing());
        prop_assert!(h.get(code.dimension()).unwrap() <= code.length() as u128);
    }

    #[test]
    fn hierarchy_meets_griesmer_wei(code in random_code()) {
        let h = exact_hierarchy(&code, SearchOptions::default()).unwrap();
        let q = code.field().order() as u64;
        let d1 = h.get(1).unwrap();
        for r in 1..=code.dimension() {
            prop_assert!(h.get(r).unwrap() >= formulas::griesmer_wei(d1, r, q));
        }
    }

    #[test]
    fn hierarchy_satisfies_tsfasman_vladut(code in random_code()) {
        let h = exact_hierarchy(&code, SearchOptions::default()).unwrap();
        prop_assert!(formulas::tsfasman_vladut_check(&h, code.field().order() as u64).is_empty());
    }

    #[test]
    fn invariant_under_column_permutation(code in random_code(), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..code.length()).collect();
        perm.shuffle(&mut rng);
        let permuted = permute_columns(&code, &perm);
        for r in 1..=code.dimension() {
            prop_assert_eq!(
                exact_dr(&code, r, SearchOptions::default()).unwrap(),
                exact_dr(&permuted, r, SearchOptions::default()).unwrap()
            );
        }
    }

    #[test]
    fn invariant_under_basis_change(code in random_code(), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let other = change_basis(&code, &mut rng);
        prop_assert!(code.same_row_space(&other));
        for r in 1..=code.dimension() {
            prop_assert_eq!(
                exact_dr(&code, r, SearchOptions::default()).unwrap(),
                exact_dr(&other, r, SearchOptions::default()).unwrap()
            );
        }
    }

    #[test]
    fn wei_duality_matches_the_dual_code(code in random_code()) {
        let primal = exact_hierarchy(&code, SearchOptions::default()).unwrap();
        let dual = exact_hierarchy(&code.dual(), SearchOptions::default()).unwrap();
        prop_assert_eq!(dual_hierarchy_from_primal(&primal).unwrap().values().unwrap(), dual.values().unwrap());
    }

    #[test]
    fn sequential_and_parallel_agree(code in random_code()) {
        for r in 1..=code.dimension() {
            let a = exact_dr_with_witness(&code, r, SearchOptions::default()).unwrap();
            let b = exact_dr_with_witness(&code, r, SearchOptions::default().sequential()).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn e_and_f_lookups_reproduce_the_complement(
        n in 2u128..40,
        picks in prop::collection::btree_set(1u128..40, 0..8),
    ) {
        // any strictly increasing sequence ending at n is a nondegenerate hierarchy shape
        let mut d: Vec<u128> = picks.into_iter().filter(|&x| x < n).collect();
        d.push(n);
        let primal = WeightHierarchy::from_values(n, &d, EntryStatus::Exact);
        let dual = dual_hierarchy_from_primal(&primal).unwrap().values().unwrap();
        let nk = n - d.len() as u128;
        prop_assert_eq!(dual.len() as u128, nk);
        for s in 1..=nk {
            prop_assert_eq!(dual_initial_lookup(&primal, s).unwrap(), dual[s as usize - 1]);
        }
        for s in 0..nk {
            prop_assert_eq!(dual_terminal_lookup(&primal, s).unwrap(), dual[(nk - s) as usize - 1]);
        }
        // e and f both run from 0 to n−k
        let k = d.len();
        prop_assert_eq!(primal.e(0), Some(0));
        prop_assert_eq!(primal.f(0), Some(0));
        prop_assert_eq!(primal.e(k), Some(nk as i128));
        prop_assert_eq!(primal.f(k), Some(nk as i128));
        for j in 0..k {
            prop_assert!(primal.e(j) <= primal.e(j + 1));
            prop_assert!(primal.f(j) <= primal.f(j + 1));
        }
    }

    #[test]
    fn point_index_round_trip(p in small_params(), seed in any::<u64>()) {
        let n = p.length() as u64;
        let idx = seed % n;
        let pt = point_from_index(idx, &p).unwrap();
        prop_assert_eq!(index_of_point(pt.entries(), &p).unwrap(), idx);
    }

    #[test]
    fn code_and_dual_are_orthogonal(p in small_params()) {
        let c = build_code(&p, Execution::Parallel).unwrap();
        let d = c.dual();
        prop_assert_eq!(c.dimension() + d.dimension(), c.length());
        let f = c.field();
        for a in c.generator().row_vecs() {
            for b in d.generator().row_vecs() {
                let dot = a.iter().zip(&b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
                prop_assert_eq!(dot, 0);
            }
        }
        prop_assert!(d.dual().same_row_space(&c));
    }

    #[test]
    fn null_space_has_full_complement_rank(code in random_code()) {
        let ns = null_space(code.generator(), code.field());
        prop_assert_eq!(ns.rows() + code.dimension(), code.length());
    }

    #[test]
    fn record_round_trip(p in small_params()) {
        let c = build_code(&p, Execution::Sequential).unwrap();
        let back = LinearCode::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(back.generator(), c.generator());
        prop_assert_eq!(
            exact_dr(&back, 1, SearchOptions::default()).unwrap(),
            exact_dr(&c, 1, SearchOptions::default()).unwrap()
        );
    }
}
