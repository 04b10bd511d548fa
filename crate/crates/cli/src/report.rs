//! Deterministic text rendering of results. Reals are printed with 12
//! significant digits.

use std::fmt::Write as _;

use projmln_core::learn::ConsistencyReport;
use projmln_core::{FitResult, Mln, NormalForm, ProjectivityVerdict};

/// `x` with 12 significant digits, trailing zeros removed; scientific
/// notation outside `[1e-5, 1e12)`.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-5..12).contains(&exp) {
        return format!("{}e{exp}", trim(mantissa));
    }
    let decimals = (11 - exp) as usize;
    trim(&format!("{x:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `logZ` with twelve decimals; `-0` prints as `0`.
pub fn log_partition(x: f64) -> String {
    if x.is_finite() {
        let text = format!("{x:.12}");
        // values that round to zero print without a sign
        let text = match text.strip_prefix('-') {
            Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
            _ => text,
        };
        format!("logZ = {text}")
    } else {
        format!("logZ = {}", num(x))
    }
}

pub fn normal_form(nf: &NormalForm) -> String {
    let mut out = String::new();
    let u = nf.u();
    writeln!(out, "# s I VALUE").unwrap();
    for i in 0..u {
        writeln!(out, "s {} {}", i + 1, num(nf.s(i))).unwrap();
    }
    writeln!(out, "# t I J L VALUE").unwrap();
    for (i, j) in nf.layout().pairs() {
        for l in 0..nf.b() {
            writeln!(
                out,
                "t {} {} {} {}",
                i + 1,
                j + 1,
                l + 1,
                num(nf.t(i, j, l))
            )
            .unwrap();
        }
    }
    writeln!(out, "# f I J VALUE").unwrap();
    for i in 0..u {
        for j in 0..u {
            writeln!(out, "f {} {} {}", i + 1, j + 1, num(nf.f(i, j))).unwrap();
        }
    }
    out
}

pub fn verdict(v: &ProjectivityVerdict) -> String {
    match v.common_value() {
        Some(s) if v.projective => format!("PROJECTIVE spread={} S={}\n", num(v.spread), num(s)),
        _ => format!("NOT-PROJECTIVE spread={}\n", num(v.spread)),
    }
}

pub fn fit(structure: &Mln, fit: &FitResult) -> String {
    let lang = structure.language();
    let mut out = String::new();
    let soft = structure.clauses().iter().filter(|c| !c.weight.is_hard());
    for (q, (theta, clause)) in fit.theta.iter().zip(soft).enumerate() {
        writeln!(
            out,
            "theta {} {} :: {}",
            q + 1,
            num(*theta),
            clause.formula.display(lang)
        )
        .unwrap();
    }
    writeln!(out, "logL = {}", num(fit.log_likelihood)).unwrap();
    writeln!(out, "residual = {}", num(fit.constraint_residual)).unwrap();
    writeln!(out, "iterations = {}", fit.iterations).unwrap();
    writeln!(out, "converged = {}", fit.converged).unwrap();
    out
}

/// One row per estimate, sorted by `(m, seed, parameter)`.
pub fn estimates_csv(report: &ConsistencyReport) -> String {
    let mut out = String::from("m,seed,parameter,estimate\n");
    for e in &report.estimates {
        writeln!(out, "{},{},{},{}", e.m, e.seed, e.param, num(e.value)).unwrap();
    }
    out
}

/// One row per parameter and `m`, then an overall verdict.
pub fn consistency_summary(report: &ConsistencyReport) -> String {
    let mut out = String::from("m,parameter,truth,mean,std_error,count,status\n");
    for s in &report.summaries {
        let status = match (s.tested, s.pass) {
            (false, _) => "untested",
            (true, true) => "pass",
            (true, false) => "fail",
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{status}",
            s.m,
            s.param,
            num(s.truth),
            num(s.mean),
            num(s.std_error),
            s.count
        )
        .unwrap();
    }
    writeln!(out, "{}", if report.pass() { "PASS" } else { "FAIL" }).unwrap();
    out
}
