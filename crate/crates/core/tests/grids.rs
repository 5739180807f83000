//! Exhaustive checks over parameter grids.

use agw_core::code::build_code;
use agw_core::formulas::{self, TABLE1_Q};
use agw_core::hierarchy::{exact_dr, exact_hierarchy, gaussian_binomial, EntryStatus};
use agw_core::{CodeParams, Error, Execution, Field, SearchOptions, WeightHierarchy};

fn prime_powers(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&q| Field::new(q).is_ok()).collect()
}

#[test]
fn initial_weights_meet_griesmer_wei() {
    let mut checked = 0;
    for q in prime_powers(17) {
        for l in 1..=6 {
            for lp in l..=6 {
                for h in 1..=l {
                    // lengths past u128 are out of reach
                    let Ok(p) = CodeParams::new(q, l, lp, h) else { continue };
                    let Ok(d1) = formulas::min_distance_formula(&p) else {
                        continue;
                    };
                    let max_r = formulas::initial_domain(&p).unwrap_or(1);
                    for r in 1..=max_r {
                        let Ok(d) = formulas::initial_dr_formula(&p, r) else {
                            continue;
                        };
                        assert_eq!(d, formulas::griesmer_wei(d1, r, q), "{p}, r={r}");
                        // e_j = H_j on the initial domain
                        assert_eq!(formulas::h_seq(&p, r).unwrap(), d as i128 - r as i128);
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn formula_terminal_weights_sit_on_the_lower_bound() {
    for q in [2u64, 3, 5] {
        for l in 1..=3 {
            for lp in l..=3 {
                for h in 1..=l {
                    let p = CodeParams::new(q, l, lp, h).unwrap();
                    for r in 1..=lp + 1 {
                        assert_eq!(
                            formulas::terminal_dr_formula(&p, r).unwrap(),
                            formulas::terminal_lower_bound(&p, r).unwrap()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn recursion_matches_direct_formula() {
    for q in TABLE1_Q {
        for lp in 2..=5usize {
            let limit = formulas::q_seq(q, lp);
            if limit > 5000 {
                continue;
            }
            let p = CodeParams::new(q, 1, lp, 1).unwrap();
            let rec = formulas::dual_recursive(&p, limit - 1).unwrap();
            for (s, v) in rec.iter().enumerate() {
                assert_eq!(
                    *v,
                    formulas::dual_initial_formula(&p, s as u128 + 1).unwrap(),
                    "q={q} l'={lp} s={}",
                    s + 1
                );
            }
        }
        let rec = formulas::dual_recursive_in_regime(q, None, 2000).unwrap();
        for (s, v) in rec.iter().enumerate() {
            assert_eq!(*v, formulas::dual_initial_in_regime(q, None, s as u128 + 1).unwrap());
        }
    }
}

#[test]
fn enumeration_totals_match_gaussian_binomials() {
    for q in [2u64, 3] {
        let f = Field::new(q).unwrap();
        for k in 0..=8usize {
            for r in 0..=k {
                let want = gaussian_binomial(k, r, q).unwrap();
                if want > 200_000 {
                    continue;
                }
                let got = agw_core::hierarchy::enumerate_subspaces(k, r, &f, u128::MAX)
                    .unwrap()
                    .count() as u128;
                assert_eq!(got, want, "q={q} k={k} r={r}");
            }
        }
    }
}

/// Every shape with n ≤ 2^10 and ℓ' > 1.
fn dual_grid() -> Vec<CodeParams> {
    let mut out = Vec::new();
    for q in prime_powers(32) {
        for l in 1..=5 {
            for lp in l.max(2)..=10 {
                let Some(n) = (q as u128).checked_pow((l * lp) as u32) else {
                    continue;
                };
                if n > 1024 {
                    continue;
                }
                for h in 1..=l {
                    out.push(CodeParams::new(q, l, lp, h).unwrap());
                }
            }
        }
    }
    out
}

/// The dual initial formula needs d_{k−ℓ'−1}, …, d_k. Each is computed
/// exactly when the search fits the budget and otherwise taken from the
/// terminal formula, which the acceptance suite checks exactly.
#[test]
fn dual_initial_formula_agrees_with_duality() {
    let opts = SearchOptions::with_budget(200_000).sequential();
    let mut exact_entries = 0;
    let mut formula_entries = 0;
    let mut complete = 0;
    let grid = dual_grid();
    for p in &grid {
        let c = build_code(p, Execution::Parallel).unwrap();
        let k = p.dimension();
        let full = exact_hierarchy(&c, opts);
        let primal = match &full {
            Ok(h) => {
                complete += 1;
                h.clone()
            }
            Err(_) => {
                let mut h = WeightHierarchy::unknown(p.length(), k);
                for r in 0..=(p.cols() + 1).min(k) {
                    match exact_dr(&c, k - r, opts) {
                        Ok(v) => {
                            assert_eq!(v as u128, formulas::terminal_dr_formula(p, r).unwrap(), "{p}, r={r}");
                            h.set(k - r, v as u128, EntryStatus::Exact);
                            exact_entries += 1;
                        }
                        Err(Error::BudgetExceeded { .. }) => {
                            h.set(
                                k - r,
                                formulas::terminal_dr_formula(p, r).unwrap(),
                                EntryStatus::Formula,
                            );
                            formula_entries += 1;
                        }
                        Err(e) => panic!("{p}: {e}"),
                    }
                }
                h
            }
        };
        let limit = formulas::q_seq(p.q(), p.cols()).min(p.length() - k as u128 + 1);
        let dual = full
            .as_ref()
            .ok()
            .map(|h| formulas::dual_hierarchy_from_primal(h).unwrap());
        for s in 1..limit {
            let formula = formulas::dual_initial_formula(p, s).unwrap();
            assert_eq!(
                formula,
                formulas::dual_initial_lookup(&primal, s).unwrap(),
                "{p}, s={s}"
            );
            if let Some(d) = &dual {
                assert_eq!(Some(formula), d.get(s as usize), "{p}, s={s}");
            }
        }
    }
    assert!(complete >= 10, "only {complete} complete hierarchies");
    eprintln!(
        "{} shapes, {complete} complete, {exact_entries} exact and {formula_entries} formula terminal entries",
        grid.len()
    );
}

#[test]
fn exact_hierarchies_match_dual_codes() {
    let opts = SearchOptions::default();
    for (q, l, lp, h) in [(2u64, 1, 2, 1), (2, 1, 3, 1), (3, 1, 2, 1), (2, 2, 2, 1), (2, 1, 4, 1)] {
        let p = CodeParams::new(q, l, lp, h).unwrap();
        let c = build_code(&p, Execution::Parallel).unwrap();
        let primal = exact_hierarchy(&c, opts).unwrap();
        let dual = exact_hierarchy(&c.dual(), opts).unwrap();
        assert_eq!(
            formulas::dual_hierarchy_from_primal(&primal).unwrap().values().unwrap(),
            dual.values().unwrap(),
            "{p}"
        );
    }
}

#[test]
fn exact_hierarchies_respect_the_weight_theorems() {
    let opts = SearchOptions::with_budget(2_000_000);
    for (q, l, lp, h) in [
        (2u64, 1, 2, 1),
        (2, 1, 3, 1),
        (2, 1, 4, 1),
        (3, 1, 2, 1),
        (2, 2, 2, 1),
        (2, 2, 2, 2),
        (3, 1, 3, 1),
    ] {
        let p = CodeParams::new(q, l, lp, h).unwrap();
        let c = build_code(&p, Execution::Parallel).unwrap();
        let hier = exact_hierarchy(&c, opts).unwrap();
        let k = p.dimension();
        let d1 = hier.get(1).unwrap();
        assert!(hier.is_strictly_increasing());
        assert_eq!(d1, formulas::min_distance_formula(&p).unwrap());
        for r in 1..=k {
            assert!(hier.get(r).unwrap() >= formulas::griesmer_wei(d1, r, q));
        }
        for r in 1..=(p.delta() + 1).min(k) {
            assert!(hier.get(k - r).unwrap() >= formulas::terminal_lower_bound(&p, r).unwrap());
        }
        for r in 0..=(lp + 1).min(k) {
            assert_eq!(hier.get(k - r).unwrap(), formulas::terminal_dr_formula(&p, r).unwrap());
        }
        assert!(formulas::tsfasman_vladut_check(&hier, q).is_empty());
    }
}
