mod common;

use common::{ar2, r2, random_mln, rng};
use num_bigint::BigUint;
use projmln_core::mln::oracle::{count_models, distribution, world_mask};
use projmln_core::{
    enumerate_worlds, fomc, normalize, parse_formula, partition_function,
    partition_function_oracle, world_probability, Clause, Mln,
};
use proptest::prelude::*;

#[test]
fn lifted_matches_oracle_on_random_networks() {
    let mut r = rng(11);
    for case in 0..40 {
        let lang = if case % 2 == 0 { r2() } else { ar2() };
        let mln = random_mln(&mut r, &lang, 2);
        let nf = normalize(&mln);
        for n in [1, 2, 3] {
            let lifted = partition_function(&nf, n);
            let oracle = partition_function_oracle(&mln, n, 24).unwrap();
            assert!((lifted - oracle).abs() <= 1e-9, "{lifted} vs {oracle}");
        }
    }
}

#[test]
fn normal_form_symmetries() {
    let mut r = rng(12);
    for _ in 0..30 {
        let lang = ar2();
        let nf = normalize(&random_mln(&mut r, &lang, 3));
        for i in 0..lang.u() {
            for j in 0..lang.u() {
                assert_eq!(nf.log_f(i, j), nf.log_f(j, i));
                for l in 0..lang.b() {
                    assert_eq!(nf.log_t(i, j, l), nf.log_t(j, i, lang.dual(l)));
                }
            }
        }
        for i in 0..lang.u() {
            for l in 0..lang.b() {
                assert!((nf.log_t(i, i, l) - nf.log_t(i, i, lang.dual(l))).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn hard_clauses_agree_with_oracle() {
    let lang = r2();
    let mut r = rng(13);
    for _ in 0..20 {
        let soft = random_mln(&mut r, &lang, 2);
        let mut clauses = soft.clauses().to_vec();
        clauses.push(Clause::hard(common::random_formula(&mut r, &lang, 2)));
        let mln = Mln::new(lang.clone(), clauses).unwrap();
        let nf = normalize(&mln);
        for n in [2, 3] {
            let lifted = partition_function(&nf, n);
            let oracle = partition_function_oracle(&mln, n, 24).unwrap();
            if oracle == f64::NEG_INFINITY {
                assert_eq!(lifted, f64::NEG_INFINITY);
            } else {
                assert!((lifted - oracle).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn fomc_matches_enumeration() {
    let mut r = rng(14);
    for case in 0..30 {
        let lang = if case % 2 == 0 { r2() } else { ar2() };
        let f = common::random_formula(&mut r, &lang, 3);
        for n in 1..=3 {
            let exact = fomc(&lang, &f, n).unwrap();
            let brute = count_models(&lang, &f, n, 24).unwrap();
            assert_eq!(exact, BigUint::from(brute));
        }
    }
    let lang = r2();
    let f = parse_formula("R(x,y) -> R(y,x)", &lang).unwrap();
    assert_eq!(fomc(&lang, &f, 3).unwrap(), BigUint::from(64u32));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Splitting every two-variable clause leaves the distribution unchanged.
    #[test]
    fn split_preserves_distribution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mln = random_mln(&mut r, &ar2(), 2);
        let (_, before) = distribution(&mln, 2, 24).unwrap();
        let (_, after) = distribution(&mln.split(), 2, 24).unwrap();
        for (a, b) in before.iter().zip(&after) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    /// Lifted world probabilities equal the brute-force ones and sum to 1.
    #[test]
    fn world_probabilities(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lang = r2();
        let mln = random_mln(&mut r, &lang, 2);
        let nf = normalize(&mln);
        let (index, brute) = distribution(&mln, 3, 24).unwrap();
        let mut total = 0.0;
        for w in enumerate_worlds(&lang, 3, 24).unwrap() {
            let p = world_probability(&nf, &w).unwrap();
            total += p;
            prop_assert!((p - brute[world_mask(&lang, &index, &w) as usize]).abs() <= 1e-12);
        }
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }
}
