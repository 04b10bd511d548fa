//! Relational block models: each element draws a 1-type from `p`, then each
//! unordered pair draws a 2-table from the row of `w` for its two 1-types.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::layout::PairLayout;
use crate::logic::{one_type_formula, two_table_formula, Formula, Language, Var};
use crate::math::{exp, ln, log_sum_exp};
use crate::mln::{Clause, Mln, NormalForm};
use crate::projectivity::{check_projective, DEFAULT_TOLERANCE};
use crate::world::{stats, PairType, World};

const TOL: f64 = 1e-12;

/// False for NaN.
fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL
}

/// RBM parameters. `w` is stored for `i <= j` in [`PairLayout`] order; the
/// entry for `(j, i, l)` is `w[i, j, dual(l)]`. Rows that carry no
/// information (e.g. fitted from a world without such a pair) are flagged
/// unobserved.
#[derive(Debug, Clone, PartialEq)]
pub struct RbmParams {
    lang: Language,
    layout: PairLayout,
    p: Vec<f64>,
    w: Vec<f64>,
    observed: Vec<bool>,
}

/// A broken invariant of [`RbmParams`]. Indices are zero-based; `Display`
/// prints them one-based as in the file formats.
#[derive(Debug, Clone, PartialEq)]
pub enum RbmViolation {
    POutOfRange {
        i: usize,
        value: f64,
    },
    PSum {
        sum: f64,
    },
    WOutOfRange {
        i: usize,
        j: usize,
        l: usize,
        value: f64,
    },
    WRowSum {
        i: usize,
        j: usize,
        sum: f64,
    },
    WAsymmetric {
        i: usize,
        l: usize,
        value: f64,
        dual_value: f64,
    },
}

impl fmt::Display for RbmViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RbmViolation::POutOfRange { i, value } => {
                write!(f, "p {} = {value} not in [0,1]", i + 1)
            }
            RbmViolation::PSum { sum } => write!(f, "p sums to {sum}, not 1"),
            RbmViolation::WOutOfRange { i, j, l, value } => {
                write!(f, "w {} {} {} = {value} not in [0,1]", i + 1, j + 1, l + 1)
            }
            RbmViolation::WRowSum { i, j, sum } => {
                write!(f, "w {} {} sums to {sum}, not 1", i + 1, j + 1)
            }
            RbmViolation::WAsymmetric {
                i,
                l,
                value,
                dual_value,
            } => write!(
                f,
                "w {0} {0} {1} = {value} differs from its dual entry {dual_value}",
                i + 1,
                l + 1
            ),
        }
    }
}

impl RbmParams {
    /// Validated parameters with every row observed.
    pub fn new(lang: Language, p: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        let observed = vec![true; PairLayout::new(lang.u(), lang.b()).pair_count()];
        Self::with_observed(lang, p, w, observed)
    }

    pub fn with_observed(
        lang: Language,
        p: Vec<f64>,
        w: Vec<f64>,
        observed: Vec<bool>,
    ) -> Result<Self> {
        let layout = PairLayout::new(lang.u(), lang.b());
        if p.len() != layout.u() || w.len() != layout.len() || observed.len() != layout.pair_count()
        {
            return Err(Error::InvalidArgument(alloc::format!(
                "expected {} p entries and {} w entries, got {} and {}",
                layout.u(),
                layout.len(),
                p.len(),
                w.len()
            )));
        }
        let params = Self {
            lang,
            layout,
            p,
            w,
            observed,
        };
        validate(&params).map_err(Error::InvalidRbm)?;
        Ok(params)
    }

    /// `p_i = 1/u`, `w_ijl = 1/b`.
    pub fn uniform(lang: Language) -> Self {
        let layout = PairLayout::new(lang.u(), lang.b());
        Self {
            p: vec![1.0 / layout.u() as f64; layout.u()],
            w: vec![1.0 / layout.b() as f64; layout.len()],
            observed: vec![true; layout.pair_count()],
            lang,
            layout,
        }
    }

    pub fn language(&self) -> &Language {
        &self.lang
    }

    pub fn layout(&self) -> PairLayout {
        self.layout
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// `w_ijl` for either order of `i, j`.
    pub fn w(&self, i: usize, j: usize, l: usize) -> f64 {
        if i <= j {
            self.w[self.layout.cell(i, j, l)]
        } else {
            self.w[self.layout.cell(j, i, self.lang.dual(l))]
        }
    }

    /// Raw `w` tensor in [`PairLayout`] order.
    pub fn w_cells(&self) -> &[f64] {
        &self.w
    }

    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        self.observed[self.layout.pair(i, j)]
    }
}

/// Checks the simplex constraints on `p` and every row of `w`, and
/// `w_iil = w_ii dual(l)`, all to `1e-12`. Never normalizes.
pub fn validate(params: &RbmParams) -> core::result::Result<(), Vec<RbmViolation>> {
    let mut out = Vec::new();
    let in_range = |v: f64| (-TOL..=1.0 + TOL).contains(&v);
    for (i, &value) in params.p.iter().enumerate() {
        if !in_range(value) {
            out.push(RbmViolation::POutOfRange { i, value });
        }
    }
    let sum: f64 = params.p.iter().sum();
    if !close(sum, 1.0) {
        out.push(RbmViolation::PSum { sum });
    }
    let layout = params.layout;
    for (i, j) in layout.pairs() {
        let row = &params.w[layout.cell(i, j, 0)..layout.cell(i, j, 0) + layout.b()];
        for (l, &value) in row.iter().enumerate() {
            if !in_range(value) {
                out.push(RbmViolation::WOutOfRange { i, j, l, value });
            }
        }
        let sum: f64 = row.iter().sum();
        if !close(sum, 1.0) {
            out.push(RbmViolation::WRowSum { i, j, sum });
        }
        if i == j {
            for (l, &value) in row.iter().enumerate() {
                let d = params.lang.dual(l);
                let dual_value = row[d];
                if l < d && !close(value, dual_value) {
                    out.push(RbmViolation::WAsymmetric {
                        i,
                        l,
                        value,
                        dual_value,
                    });
                }
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// `sum_q log p_{x_q} + sum_{q<r} log w_{x_q x_r y_qr}`; `-inf` for
/// impossible worlds.
pub fn rbm_log_prob(params: &RbmParams, world: &World) -> f64 {
    let mut total = 0.0;
    for &t in world.types() {
        total += ln(params.p[t]);
    }
    for e in world.pairs() {
        total += ln(params.w[params.layout.cell(e.i, e.j, e.l)]);
    }
    total
}

fn draw(rng: &mut ChaCha8Rng, probs: &[f64]) -> usize {
    let target: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &q) in probs.iter().enumerate() {
        if q > 0.0 {
            acc += q;
            last = k;
            if target < acc {
                return k;
            }
        }
    }
    last
}

/// Draws a world of size `n`. 1-types are drawn first for elements
/// `0..n`, then tables for the pairs `q < r` in row-major order.
pub fn sample(params: &RbmParams, n: usize, seed: u64) -> World {
    sample_with(params, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sample_with(params: &RbmParams, n: usize, rng: &mut ChaCha8Rng) -> World {
    let types: Vec<usize> = (0..n).map(|_| draw(rng, &params.p)).collect();
    let layout = params.layout;
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for q in 0..n {
        for r in q + 1..n {
            let (i, j) = if types[q] <= types[r] {
                (types[q], types[r])
            } else {
                (types[r], types[q])
            };
            let start = layout.cell(i, j, 0);
            let l = draw(rng, &params.w[start..start + layout.b()]);
            pairs.push(PairType { i, j, l });
        }
    }
    World::from_canonical(n, types, pairs)
}

/// Maximum-likelihood estimate `p_i = k_i / n`, `w_ijl = h^{ij}_l / k(i,j)`.
/// For `i == j` the count of a non-self-dual table is split evenly between
/// it and its dual. Rows with `k(i,j) = 0` are uniform and unobserved.
pub fn fit_rbm(lang: &Language, world: &World) -> RbmParams {
    let st = stats(lang, world);
    let layout = st.layout;
    let n = world.n().max(1) as f64;
    let p = st.k.iter().map(|&k| k as f64 / n).collect();
    let mut w = vec![1.0 / layout.b() as f64; layout.len()];
    let mut observed = vec![false; layout.pair_count()];
    for (i, j) in layout.pairs() {
        let total = st.k_pair(i, j);
        if total == 0 {
            continue;
        }
        observed[layout.pair(i, j)] = true;
        let total = total as f64;
        for l in 0..layout.b() {
            let d = lang.dual(l);
            w[layout.cell(i, j, l)] = if i != j || l == d {
                st.h(i, j, l) as f64 / total
            } else {
                st.h(i, j, l.min(d)) as f64 / (2.0 * total)
            };
        }
    }
    RbmParams {
        lang: lang.clone(),
        layout,
        p,
        w,
        observed,
    }
}

/// `p_i = s_i / sum s`, `w_ijl = t_ijl / f_ij`. Rows with `f_ij = 0` are
/// uniform and unobserved.
pub fn mln_to_rbm(nf: &NormalForm) -> Result<RbmParams> {
    let verdict = check_projective(nf, DEFAULT_TOLERANCE)?;
    if !verdict.projective {
        return Err(Error::NotProjective {
            spread: verdict.spread,
        });
    }
    let layout = nf.layout();
    let log_total = log_sum_exp((0..nf.u()).map(|i| nf.log_s(i)));
    let p = (0..nf.u()).map(|i| exp(nf.log_s(i) - log_total)).collect();
    let mut w = vec![1.0 / layout.b() as f64; layout.len()];
    let mut observed = vec![false; layout.pair_count()];
    for (i, j) in layout.pairs() {
        let log_f = nf.log_f(i, j);
        if log_f == f64::NEG_INFINITY {
            continue;
        }
        observed[layout.pair(i, j)] = true;
        for l in 0..layout.b() {
            w[layout.cell(i, j, l)] = exp(nf.log_t(i, j, l) - log_f);
        }
    }
    Ok(RbmParams {
        lang: nf.language().clone(),
        layout,
        p,
        w,
        observed,
    })
}

fn weighted(formula: Formula, value: f64, scale: f64) -> Clause {
    if value > 0.0 {
        Clause::soft(formula, scale * ln(value))
    } else {
        Clause::hard(Formula::not(formula))
    }
}

/// An MLN with `Z(n) = 1` whose distribution is the RBM's.
///
/// One clause `i(x)` with weight `log p_i` per 1-type, and one clause
/// `i(x) & j(y) & l(x,y) & x != y` per `i <= j` and table `l`, with weight
/// `log w_ijl` for `i < j` and `0.5 log w_iil` for `i == j` (the latter
/// fires once from each orientation). Zero parameters become hard clauses
/// forbidding the configuration.
pub fn rbm_to_mln(params: &RbmParams) -> Mln {
    let lang = &params.lang;
    let mut clauses = Vec::new();
    for (i, &p) in params.p.iter().enumerate() {
        if let Some(f) = one_type_formula(lang, i, Var::X) {
            clauses.push(weighted(f, p, 1.0));
        }
    }
    for (i, j) in params.layout.pairs() {
        for l in 0..params.layout.b() {
            let parts = [
                one_type_formula(lang, i, Var::X),
                one_type_formula(lang, j, Var::Y),
                two_table_formula(lang, l),
                Some(Formula::Distinct),
            ];
            let formula = Formula::conjunction(parts.into_iter().flatten()).unwrap();
            let scale = if i == j { 0.5 } else { 1.0 };
            clauses.push(weighted(formula, params.w(i, j, l), scale));
        }
    }
    Mln::new(lang.clone(), clauses).expect("generated clauses are valid")
}

/// Indices of `p` and `w` entries, used to label estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamId {
    P(usize),
    W(usize, usize, usize),
}

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ParamId::P(i) => write!(f, "p{}", i + 1),
            ParamId::W(i, j, l) => write!(f, "w{}_{}_{}", i + 1, j + 1, l + 1),
        }
    }
}

impl RbmParams {
    /// Every parameter with its value and whether its row is observed
    /// (`p` entries are always observed), `p` first, then `w` in layout order.
    pub fn entries(&self) -> Vec<(ParamId, f64, bool)> {
        let mut out: Vec<_> = self
            .p
            .iter()
            .enumerate()
            .map(|(i, &v)| (ParamId::P(i), v, true))
            .collect();
        for (i, j) in self.layout.pairs() {
            for l in 0..self.layout.b() {
                out.push((
                    ParamId::W(i, j, l),
                    self.w[self.layout.cell(i, j, l)],
                    self.is_observed(i, j),
                ));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, parse_language};
    use crate::mln::{normalize, partition_function, world_probability};
    use crate::world::{enumerate_worlds, world_from_atoms, GroundArgs, GroundAtom};

    /// Two colors `C(x)`; loops `R(x,x)` never occur. Same-colored pairs
    /// are linked in both directions with probability 0.9, others 0.1.
    pub(crate) fn homophily() -> RbmParams {
        let lang = parse_language("predicate C/1\npredicate R/2").unwrap();
        let layout = PairLayout::new(4, 4);
        let mut w = vec![0.25; layout.len()];
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            let edge = if i == j { 0.9 } else { 0.1 };
            let row = [1.0 - edge, 0.0, 0.0, edge];
            w[layout.cell(i, j, 0)..layout.cell(i, j, 0) + 4].copy_from_slice(&row);
        }
        RbmParams::new(lang, vec![0.5, 0.5, 0.0, 0.0], w).unwrap()
    }

    fn atom(p: usize, c: usize, d: usize) -> GroundAtom {
        GroundAtom {
            predicate: p,
            args: GroundArgs::Two(c, d),
        }
    }

    #[test]
    fn validation() {
        assert!(validate(&homophily()).is_ok());
        let lang = parse_language("predicate R/2").unwrap();
        let w = vec![0.25; 12];
        let err = RbmParams::new(lang.clone(), vec![0.6, 0.6], w.clone()).unwrap_err();
        assert!(
            matches!(&err, Error::InvalidRbm(v) if matches!(v[..], [RbmViolation::PSum { .. }]))
        );
        let mut w = w;
        w[..4].copy_from_slice(&[0.5, 0.3, 0.2, 0.0]);
        let err = RbmParams::new(lang, vec![0.5, 0.5], w).unwrap_err();
        assert!(matches!(&err, Error::InvalidRbm(v)
            if matches!(v[..], [RbmViolation::WAsymmetric { i: 0, l: 1, .. }])));
    }

    #[test]
    fn log_prob() {
        let params = homophily();
        let lang = params.language().clone();
        let c = |x| GroundAtom {
            predicate: 0,
            args: GroundArgs::One(x),
        };
        let world =
            world_from_atoms(&lang, 2, &[c(0), c(1), atom(1, 0, 1), atom(1, 1, 0)]).unwrap();
        assert!((rbm_log_prob(&params, &world) - ln(0.225)).abs() < 1e-12);

        let total: f64 = enumerate_worlds(&lang, 2, 24)
            .unwrap()
            .map(|w| exp(rbm_log_prob(&params, &w)))
            .sum();
        assert!((total - 1.0).abs() < 1e-12);

        let empty = RbmParams::uniform(Language::empty());
        let world = World::from_parts(&Language::empty(), vec![0], &[]).unwrap();
        assert_eq!(rbm_log_prob(&empty, &world), 0.0);
    }

    #[test]
    fn sampling_is_deterministic_and_concentrates() {
        let params = homophily();
        let a = sample(&params, 1000, 7);
        assert_eq!(a, sample(&params, 1000, 7));
        let colored = a.types().iter().filter(|&&t| t == 1).count() as f64 / 1000.0;
        assert!((colored - 0.5).abs() <= 0.05);
        let same: Vec<_> = a.pairs().iter().filter(|e| e.i == e.j).collect();
        let edges = same.iter().filter(|e| e.l == 3).count() as f64 / same.len() as f64;
        assert!((edges - 0.9).abs() <= 0.01);
        assert!(a.types().iter().all(|&t| t < 2));
    }

    #[test]
    fn fit_example_world() {
        let lang = parse_language("predicate R/2").unwrap();
        let world =
            world_from_atoms(&lang, 3, &[atom(0, 0, 0), atom(0, 0, 1), atom(0, 1, 0)]).unwrap();
        let fit = fit_rbm(&lang, &world);
        assert_eq!(fit.p(), &[2.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(fit.w(0, 0, 0), 1.0);
        assert_eq!(fit.w(0, 1, 0), 0.5);
        assert_eq!(fit.w(0, 1, 3), 0.5);
        assert!(!fit.is_observed(1, 1));
        assert!(validate(&fit).is_ok());

        let world = world_from_atoms(&lang, 2, &[]).unwrap();
        let fit = fit_rbm(&lang, &world);
        assert_eq!(fit.p(), &[1.0, 0.0]);
        assert_eq!(fit.w(0, 0, 0), 1.0);
    }

    #[test]
    fn mln_conversion() {
        let lang = parse_language("predicate R/2").unwrap();
        let f = parse_formula("R(x,y)", &lang).unwrap();
        let mln = Mln::new(lang.clone(), vec![Clause::soft(f, ln(2.0))]).unwrap();
        let params = mln_to_rbm(&normalize(&mln)).unwrap();
        assert!((params.p()[0] - 1.0 / 3.0).abs() < 1e-12);
        for (i, j) in params.layout().pairs() {
            for (l, want) in [1.0, 2.0, 2.0, 4.0].iter().enumerate() {
                assert!((params.w(i, j, l) - want / 9.0).abs() < 1e-12);
            }
        }

        let lang2 = parse_language("predicate A/1\npredicate R/2").unwrap();
        let f = parse_formula("A(x) & R(x,y)", &lang2).unwrap();
        let mln2 = Mln::new(lang2, vec![Clause::soft(f, ln(2.0))]).unwrap();
        assert!(matches!(
            mln_to_rbm(&normalize(&mln2)),
            Err(Error::NotProjective { .. })
        ));

        let empty = mln_to_rbm(&normalize(&Mln::new(lang, vec![]).unwrap())).unwrap();
        assert!(empty.p().iter().all(|&v| (v - 0.5).abs() < 1e-15));
        assert!(empty.w_cells().iter().all(|&v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn homophily_roundtrip() {
        let params = homophily();
        let mln = rbm_to_mln(&params);
        let nf = normalize(&mln);
        for n in 1..=4 {
            assert!(partition_function(&nf, n).abs() < 1e-12);
        }
        let back = mln_to_rbm(&nf).unwrap();
        for (a, b) in params.entries().iter().zip(back.entries()) {
            if b.2 {
                assert!((a.1 - b.1).abs() < 1e-12, "{} {} {}", a.0, a.1, b.1);
            }
        }
        let lang = params.language();
        for world in enumerate_worlds(lang, 2, 24).unwrap() {
            let p = world_probability(&nf, &world).unwrap();
            assert!((p - exp(rbm_log_prob(&params, &world))).abs() < 1e-12);
        }
    }
}
