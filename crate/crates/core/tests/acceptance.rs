//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{
    ar2, homophily, is_local_maximum, projective_instances, r2, random_mln, random_rbm,
    random_sigma_determinate, random_world, rng,
};
use num_bigint::BigUint;
use projmln_core::combinatorics::choose2;
use projmln_core::math::{ln, log_sum_exp};
use projmln_core::mln::oracle::count_models;
use projmln_core::projectivity::DEFAULT_TOLERANCE;
use projmln_core::{
    check_projective, compare_with_rbm, fit_projective_mln, fit_rbm, fomc, mln_to_rbm, normalize,
    parse_formula, partition_function, partition_function_oracle, projective_log_likelihood,
    rbm_to_mln, stats, subsample_consistency_experiment, verify_marginal_consistency,
    world_from_atoms, Clause, FitOptions, GroundArgs, GroundAtom, Language, Mln,
};
use rand::Rng;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn c1_oracle_equivalence() -> Outcome {
    let mut r = rng(101);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for lang in [r2(), ar2()] {
        for _ in 0..20 {
            let mln = random_mln(&mut r, &lang, 2);
            let nf = normalize(&mln);
            for n in [2, 3] {
                let lifted = partition_function(&nf, n);
                let brute = partition_function_oracle(&mln, n, 24).unwrap();
                worst = worst.max((lifted - brute).abs());
                cases += 1;
            }
        }
    }
    (
        worst <= 1e-9,
        format!("max |logZ lifted - logZ brute| = {worst:.3e} over {cases} cases"),
    )
}

fn c2_fomc() -> Outcome {
    let lang = r2();
    let f = |s: &str| parse_formula(s, &lang).unwrap();
    let symmetric = f("R(x,y) -> R(y,x)");
    let irreflexive = f("!R(x,x)");
    let tautology = f("R(x,y) | !R(x,y)");
    let mut ok = fomc(&lang, &symmetric, 3).unwrap() == BigUint::from(64u32)
        && fomc(&lang, &irreflexive, 3).unwrap() == BigUint::from(64u32)
        && fomc(&lang, &tautology, 2).unwrap() == BigUint::from(16u32);
    for phi in [&symmetric, &irreflexive, &tautology] {
        for n in 1..=3 {
            ok &= fomc(&lang, phi, n).unwrap()
                == BigUint::from(count_models(&lang, phi, n, 24).unwrap());
        }
    }
    (
        ok,
        "64 / 64 / 16 and exhaustive agreement for n <= 3".into(),
    )
}

fn c3_sufficiency() -> Outcome {
    let mut r = rng(103);
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let lang = if k % 2 == 0 { r2() } else { ar2() };
        let mln = rbm_to_mln(&random_rbm(&mut r, &lang));
        worst = worst.max(verify_marginal_consistency(&mln, 3, 2, 24).unwrap());
    }
    (
        worst <= 1e-9,
        format!("max marginal deviation {worst:.3e} over 20 RBM-derived MLNs"),
    )
}

fn c4_necessity() -> Outcome {
    let mut r = rng(104);
    let mut found = 0;
    let mut smallest = f64::INFINITY;
    let mut attempts = 0;
    while found < 25 && attempts < 1000 {
        attempts += 1;
        let lang = if attempts % 2 == 0 { r2() } else { ar2() };
        let mln = random_mln(&mut r, &lang, 2);
        if check_projective(&normalize(&mln), DEFAULT_TOLERANCE)
            .unwrap()
            .spread
            > 0.01
        {
            found += 1;
            smallest = smallest.min(verify_marginal_consistency(&mln, 3, 2, 24).unwrap());
        }
    }
    (
        found >= 20 && smallest > 1e-6,
        format!("{found} MLNs with spread > 0.01, min deviation {smallest:.3e}"),
    )
}

fn c5_roundtrip() -> Outcome {
    let mut r = rng(105);
    let mut param_err: f64 = 0.0;
    let mut z_err: f64 = 0.0;
    for k in 0..20 {
        let lang = if k % 2 == 0 { r2() } else { ar2() };
        let params = random_rbm(&mut r, &lang);
        let nf = normalize(&rbm_to_mln(&params));
        for n in 2..=4 {
            z_err = z_err.max(partition_function(&nf, n).abs());
        }
        let back = mln_to_rbm(&nf).unwrap();
        for (a, b) in params.entries().iter().zip(back.entries()) {
            if b.2 {
                param_err = param_err.max((a.1 - b.1).abs());
            }
        }
    }
    (
        param_err <= 1e-9 && z_err <= 1e-9,
        format!("max parameter error {param_err:.3e}, max |logZ| {z_err:.3e}"),
    )
}

fn c6_closed_form() -> Outcome {
    let mut instances = projective_instances(106, 10);
    let mut r = rng(206);
    for k in 0..10 {
        let lang = if k % 2 == 0 { r2() } else { ar2() };
        instances.push(random_sigma_determinate(&mut r, &lang, 3));
    }
    let mut worst: f64 = 0.0;
    for mln in &instances {
        let nf = normalize(mln);
        let verdict = check_projective(&nf, DEFAULT_TOLERANCE).unwrap();
        let Some(log_s) = verdict.log_common else {
            return (false, "a generated instance is not projective".into());
        };
        let log_total = log_sum_exp((0..nf.u()).map(|i| nf.log_s(i)));
        for n in 1..=6 {
            let closed = choose2(n) as f64 * log_s + n as f64 * log_total;
            worst = worst.max((partition_function(&nf, n) - closed).abs());
        }
    }
    (
        worst <= 1e-9,
        format!(
            "max |logZ - closed form| = {worst:.3e} over {} instances, n <= 6",
            instances.len()
        ),
    )
}

fn c7_rbm_mle() -> Outcome {
    let lang = r2();
    let r = |c, d| GroundAtom {
        predicate: 0,
        args: GroundArgs::Two(c, d),
    };
    let world = world_from_atoms(&lang, 3, &[r(0, 0), r(0, 1), r(1, 0)]).unwrap();
    let fit = fit_rbm(&lang, &world);
    let exact = fit.p() == [2.0 / 3.0, 1.0 / 3.0] && fit.w(0, 1, 0) == 0.5 && fit.w(0, 1, 3) == 0.5;
    let mut g = rng(107);
    let mut local = is_local_maximum(&lang, &world);
    for k in 0..20 {
        let lang: Language = if k % 2 == 0 { r2() } else { ar2() };
        let w = random_world(&mut g, &lang, 2 + k % 5);
        local &= is_local_maximum(&lang, &w);
    }
    (
        exact && local,
        format!("exact estimates: {exact}; no improving simplex move on 21 worlds: {local}"),
    )
}

fn structure(lang: &Language, formulas: &[&str]) -> Mln {
    let clauses = formulas
        .iter()
        .map(|f| Clause::soft(parse_formula(f, lang).unwrap(), 0.0))
        .collect();
    Mln::new(lang.clone(), clauses).unwrap()
}

fn c8_dominance() -> Outcome {
    let structures = [
        structure(&r2(), &["R(x,y)"]),
        structure(&r2(), &["R(x,y) -> R(y,x)", "R(x,x)"]),
        structure(&ar2(), &["A(x) & R(x,y)", "R(x,y)"]),
        structure(&ar2(), &["A(x) -> R(x,y)", "R(x,x) | A(x)"]),
    ];
    let mut r = rng(108);
    let mut worst = f64::INFINITY;
    for k in 0..10 {
        let s = &structures[k % structures.len()];
        let n = r.random_range(2..7);
        let world = random_world(&mut r, s.language(), n);
        match compare_with_rbm(s, &world, &FitOptions::default()) {
            Ok(d) => worst = worst.min(d.rbm - d.projective),
            Err(e) => return (false, format!("fit failed: {e}")),
        }
    }
    (
        worst >= -1e-6,
        format!("min L_RBM - L_proj = {worst:.6} over 10 pairs"),
    )
}

fn c9_constrained_fit() -> Outcome {
    let opts = FitOptions::default();
    let lang = r2();
    let r = |c, d| GroundAtom {
        predicate: 0,
        args: GroundArgs::Two(c, d),
    };
    let world = world_from_atoms(&lang, 3, &[r(0, 0), r(0, 1), r(1, 0)]).unwrap();
    let bern = fit_projective_mln(&structure(&lang, &["R(x,y)"]), &world, &opts).unwrap();
    let bern_err = (bern.theta[0] - ln(0.5)).abs();

    let lang2 = ar2();
    let mut g = rng(109);
    let forced = structure(&lang2, &["A(x) & R(x,y)"]);
    let mut forced_err: f64 = 0.0;
    for _ in 0..5 {
        let w = random_world(&mut g, &lang2, 4);
        let fit = fit_projective_mln(&forced, &w, &opts).unwrap();
        forced_err = forced_err.max(fit.theta[0].abs());
    }

    let mut grad_err: f64 = 0.0;
    for k in 0..10 {
        let lang = if k % 2 == 0 { r2() } else { ar2() };
        let s = random_mln(&mut g, &lang, 3);
        let theta: Vec<f64> = s
            .soft_weights()
            .iter()
            .map(|_| g.random_range(-2.0..2.0))
            .collect();
        let st = stats(&lang, &random_world(&mut g, &lang, 2 + k % 4));
        let (_, grad) = projective_log_likelihood(&s, &theta, &st).unwrap();
        for q in 0..theta.len() {
            let h = 1e-5;
            let mut up = theta.clone();
            up[q] += h;
            let mut down = theta.clone();
            down[q] -= h;
            let fd = (projective_log_likelihood(&s, &up, &st).unwrap().0
                - projective_log_likelihood(&s, &down, &st).unwrap().0)
                / (2.0 * h);
            grad_err = grad_err.max((fd - grad[q]).abs());
        }
    }
    (
        bern.converged && bern_err <= 1e-4 && forced_err <= 1e-4 && grad_err <= 1e-6,
        format!(
            "|theta - ln(1/2)| = {bern_err:.2e}, max |theta_forced| = {forced_err:.2e}, max gradient error {grad_err:.2e}"
        ),
    )
}

fn c10_consistency() -> Outcome {
    let start = Instant::now();
    let seeds: Vec<u64> = (0..50).collect();
    let report =
        subsample_consistency_experiment(&homophily(), 200, &[20, 50, 100], &seeds).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let tested = report.summaries.iter().filter(|s| s.tested).count();
    let worst = report
        .summaries
        .iter()
        .filter(|s| s.tested && s.std_error > 0.0)
        .map(|s| (s.mean - s.truth).abs() / s.std_error)
        .fold(0.0, f64::max);
    (
        report.pass() && elapsed < 300.0,
        format!("{tested} parameter/m cells tested, max |mean - truth| / SE = {worst:.2}, {elapsed:.1}s"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("partition function vs brute force", c1_oracle_equivalence),
        ("exact first-order model counts", c2_fomc),
        ("projective MLNs have consistent marginals", c3_sufficiency),
        (
            "non-projective MLNs have inconsistent marginals",
            c4_necessity,
        ),
        ("RBM to MLN to RBM roundtrip, Z(n) = 1", c5_roundtrip),
        ("closed-form Z for projective MLNs", c6_closed_form),
        ("RBM maximum-likelihood estimate", c7_rbm_mle),
        ("RBM likelihood dominates projective MLN", c8_dominance),
        ("constrained fit analytic checks", c9_constrained_fit),
        ("subsample consistency of RBM estimates", c10_consistency),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        if !ok {
            failures += 1;
        }
        println!(
            "{} {:>2}. {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            k + 1
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
