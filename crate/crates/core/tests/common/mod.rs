#![allow(dead_code)]

use projmln_core::world::GroundIndex;
use projmln_core::{
    fit_rbm, parse_language, rbm_log_prob, rbm_to_mln, Atom, Clause, Formula, Language, Mln,
    PairLayout, RbmParams, Var, World,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn lang(decl: &str) -> Language {
    parse_language(decl).unwrap()
}

pub fn r2() -> Language {
    lang("predicate R/2")
}

pub fn ar2() -> Language {
    lang("predicate A/1\npredicate R/2")
}

/// Every atom over `{x, y}` in the language.
pub fn all_atoms(lang: &Language) -> Vec<Atom> {
    let mut out = Vec::new();
    for (p, pred) in lang.predicates().iter().enumerate() {
        if pred.arity.count() == 1 {
            out.push(Atom::unary(p, Var::X));
            out.push(Atom::unary(p, Var::Y));
        } else {
            for a in [Var::X, Var::Y] {
                for b in [Var::X, Var::Y] {
                    out.push(Atom::binary(p, a, b));
                }
            }
        }
    }
    out
}

pub fn random_formula(rng: &mut ChaCha8Rng, lang: &Language, depth: usize) -> Formula {
    let atoms = all_atoms(lang);
    if depth == 0 || rng.random_bool(0.3) {
        if rng.random_bool(0.05) {
            return Formula::Distinct;
        }
        return Formula::atom(atoms[rng.random_range(0..atoms.len())]);
    }
    let a = random_formula(rng, lang, depth - 1);
    match rng.random_range(0..6) {
        0 => Formula::not(a),
        1 => Formula::and(a, random_formula(rng, lang, depth - 1)),
        2 => Formula::or(a, random_formula(rng, lang, depth - 1)),
        3 => Formula::implies(a, random_formula(rng, lang, depth - 1)),
        4 => Formula::iff(a, random_formula(rng, lang, depth - 1)),
        _ => Formula::and(Formula::not(a), random_formula(rng, lang, depth - 1)),
    }
}

/// Up to `max_clauses` soft clauses with weights uniform in `[-2, 2]`.
pub fn random_mln(rng: &mut ChaCha8Rng, lang: &Language, max_clauses: usize) -> Mln {
    let count = rng.random_range(1..=max_clauses);
    let clauses = (0..count)
        .map(|_| Clause::soft(random_formula(rng, lang, 2), rng.random_range(-2.0..=2.0)))
        .collect();
    Mln::new(lang.clone(), clauses).unwrap()
}

/// Clauses whose atoms all share one variable set: either only `x`
/// (unary atoms and loops) or only the cross atoms `R(x,y)`, `R(y,x)`.
pub fn random_sigma_determinate(rng: &mut ChaCha8Rng, lang: &Language, max_clauses: usize) -> Mln {
    let single: Vec<Atom> = all_atoms(lang)
        .into_iter()
        .filter(|a| a.variables() == Atom::unary(0, Var::X).variables())
        .collect();
    let cross: Vec<Atom> = all_atoms(lang)
        .into_iter()
        .filter(|a| a.variables().len() == 2)
        .collect();
    let count = rng.random_range(1..=max_clauses);
    let clauses = (0..count)
        .map(|_| {
            let pool = if cross.is_empty() || rng.random_bool(0.4) {
                &single
            } else {
                &cross
            };
            let f = formula_over(rng, pool, 2);
            Clause::soft(f, rng.random_range(-2.0..=2.0))
        })
        .collect();
    Mln::new(lang.clone(), clauses).unwrap()
}

fn formula_over(rng: &mut ChaCha8Rng, pool: &[Atom], depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.3) {
        return Formula::atom(pool[rng.random_range(0..pool.len())]);
    }
    let a = formula_over(rng, pool, depth - 1);
    let b = formula_over(rng, pool, depth - 1);
    match rng.random_range(0..4) {
        0 => Formula::not(a),
        1 => Formula::and(a, b),
        2 => Formula::or(a, b),
        _ => Formula::iff(a, b),
    }
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let total: f64 = v.iter().sum();
    for x in &mut v {
        *x /= total;
    }
    v
}

/// Valid parameters with entries bounded away from zero.
pub fn random_rbm(rng: &mut ChaCha8Rng, lang: &Language) -> RbmParams {
    let layout = PairLayout::new(lang.u(), lang.b());
    let p = normalized((0..lang.u()).map(|_| rng.random_range(0.05..1.0)).collect());
    let mut w = vec![0.0; layout.len()];
    for (i, j) in layout.pairs() {
        let mut row: Vec<f64> = (0..lang.b()).map(|_| rng.random_range(0.05..1.0)).collect();
        if i == j {
            for l in 0..lang.b() {
                let d = lang.dual(l);
                if d < l {
                    row[l] = row[d];
                }
            }
        }
        let row = normalized(row);
        let start = layout.cell(i, j, 0);
        w[start..start + lang.b()].copy_from_slice(&row);
    }
    RbmParams::new(lang.clone(), p, w).unwrap()
}

/// A world with every ground atom true independently with probability 1/2.
pub fn random_world(rng: &mut ChaCha8Rng, lang: &Language, n: usize) -> World {
    let index = GroundIndex::new(lang, n);
    let atoms: Vec<_> = index
        .atoms()
        .iter()
        .filter(|_| rng.random_bool(0.5))
        .copied()
        .collect();
    projmln_core::world_from_atoms(lang, n, &atoms).unwrap()
}

/// Two colors via `C(x)`, no loops, links in both directions or none:
/// same-colored pairs link with probability 0.9, mixed pairs 0.1.
pub fn homophily() -> RbmParams {
    let lang = lang("predicate C/1\npredicate R/2");
    let layout = PairLayout::new(4, 4);
    let mut w = vec![0.25; layout.len()];
    for (i, j) in [(0, 0), (0, 1), (1, 1)] {
        let edge = if i == j { 0.9 } else { 0.1 };
        let start = layout.cell(i, j, 0);
        w[start..start + 4].copy_from_slice(&[1.0 - edge, 0.0, 0.0, edge]);
    }
    RbmParams::new(lang, vec![0.5, 0.5, 0.0, 0.0], w).unwrap()
}

/// RBM-derived networks, shifted so that `S != 1` and `sum s != 1`.
pub fn projective_instances(seed: u64, count: usize) -> Vec<Mln> {
    let mut r = rng(seed);
    (0..count)
        .map(|k| {
            let lang = if k % 2 == 0 { r2() } else { ar2() };
            let base = rbm_to_mln(&random_rbm(&mut r, &lang));
            let mut clauses = base.clauses().to_vec();
            clauses.push(Clause::soft(Formula::Distinct, 0.3 + k as f64 * 0.1));
            let extra = random_sigma_determinate(&mut r, &lang, 1);
            if extra.clauses()[0].formula.variables().len() == 1 {
                clauses.extend(extra.clauses().iter().cloned());
            }
            Mln::new(lang, clauses).unwrap()
        })
        .collect()
}

/// All ways of moving `delta` of mass (in either direction) between two entries (or, for
/// symmetric rows, between two dual classes) of a probability vector.
pub fn simplex_moves(
    lang: &Language,
    values: &[f64],
    symmetric: bool,
    delta: f64,
) -> Vec<Vec<f64>> {
    let classes: Vec<Vec<usize>> = if symmetric {
        (0..values.len())
            .filter(|&l| l <= lang.dual(l))
            .map(|l| {
                if l == lang.dual(l) {
                    vec![l]
                } else {
                    vec![l, lang.dual(l)]
                }
            })
            .collect()
    } else {
        (0..values.len()).map(|l| vec![l]).collect()
    };
    let mut out = Vec::new();
    for a in &classes {
        for b in &classes {
            if a == b {
                continue;
            }
            let mut v = values.to_vec();
            let per_a = delta / a.len() as f64;
            let per_b = delta / b.len() as f64;
            if a.iter().any(|&l| v[l] < per_a) {
                continue;
            }
            a.iter().for_each(|&l| v[l] -= per_a);
            b.iter().for_each(|&l| v[l] += per_b);
            out.push(v);
        }
    }
    out
}

pub fn with_p(params: &RbmParams, p: Vec<f64>) -> RbmParams {
    RbmParams::new(params.language().clone(), p, params.w_cells().to_vec()).unwrap()
}

pub fn with_row(params: &RbmParams, i: usize, j: usize, row: &[f64]) -> RbmParams {
    let layout = params.layout();
    let mut w = params.w_cells().to_vec();
    let start = layout.cell(i, j, 0);
    w[start..start + layout.b()].copy_from_slice(row);
    RbmParams::new(params.language().clone(), params.p().to_vec(), w).unwrap()
}

/// No `±1e-3` move along the simplex improves on the fitted RBM.
pub fn is_local_maximum(lang: &Language, world: &World) -> bool {
    let fit = fit_rbm(lang, world);
    let best = rbm_log_prob(&fit, world);
    let p_ok = simplex_moves(lang, fit.p(), false, 1e-3)
        .into_iter()
        .all(|p| rbm_log_prob(&with_p(&fit, p), world) <= best + 1e-12);
    let layout = fit.layout();
    p_ok && layout.pairs().all(|(i, j)| {
        let row: Vec<f64> = (0..layout.b()).map(|l| fit.w(i, j, l)).collect();
        simplex_moves(lang, &row, i == j, 1e-3)
            .into_iter()
            .all(|moved| rbm_log_prob(&with_row(&fit, i, j, &moved), world) <= best + 1e-12)
    })
}
