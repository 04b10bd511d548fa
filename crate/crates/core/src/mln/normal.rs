use alloc::vec;
use alloc::vec::Vec;

use super::{Mln, Weight};
use crate::layout::PairLayout;
use crate::logic::{Language, LiftedInterpretation, Substitution};
use crate::math::{exp, log_sum_exp};

/// The `(s, t, f)` parameterization of an MLN.
///
/// `s_i` weighs an element of 1-type `i`, `t_ijl` an unordered pair realizing
/// the 2-type `ijl`, and `f_ij = sum_l t_ijl`. Everything is kept in log
/// space; `-inf` is an exact zero coming from a hard clause, and the
/// admissibility vectors record those zeros explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    lang: Language,
    layout: PairLayout,
    log_s: Vec<f64>,
    log_t: Vec<f64>,
    log_f: Vec<f64>,
    admissible1: Vec<bool>,
    admissible2: Vec<bool>,
}

impl NormalForm {
    pub fn language(&self) -> &Language {
        &self.lang
    }

    pub fn layout(&self) -> PairLayout {
        self.layout
    }

    pub fn u(&self) -> usize {
        self.layout.u()
    }

    pub fn b(&self) -> usize {
        self.layout.b()
    }

    pub fn log_s(&self, i: usize) -> f64 {
        self.log_s[i]
    }

    pub fn s(&self, i: usize) -> f64 {
        exp(self.log_s[i])
    }

    /// `log t_ijl` for any ordering of `i, j`; `(j, i, l)` is read as
    /// `(i, j, dual(l))`.
    pub fn log_t(&self, i: usize, j: usize, l: usize) -> f64 {
        if i <= j {
            self.log_t[self.layout.cell(i, j, l)]
        } else {
            self.log_t[self.layout.cell(j, i, self.lang.dual(l))]
        }
    }

    pub fn t(&self, i: usize, j: usize, l: usize) -> f64 {
        exp(self.log_t(i, j, l))
    }

    pub fn log_f(&self, i: usize, j: usize) -> f64 {
        self.log_f[i * self.u() + j]
    }

    pub fn f(&self, i: usize, j: usize) -> f64 {
        exp(self.log_f(i, j))
    }

    /// `s_i > 0`.
    pub fn is_admissible(&self, i: usize) -> bool {
        self.admissible1[i]
    }

    /// `t_ijl > 0` (canonical `i <= j`).
    pub fn is_admissible_pair(&self, i: usize, j: usize, l: usize) -> bool {
        self.admissible2[self.layout.cell(i, j, l)]
    }

    pub fn admissible_types(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.u()).filter(|&i| self.admissible1[i])
    }

    /// Raw `log t` tensor in [`PairLayout`] order.
    pub fn log_t_cells(&self) -> &[f64] {
        &self.log_t
    }
}

/// Builds the normal form. Each two-variable clause contributes its diagonal
/// instance `phi(x,x)` to `s` and both orientations `phi(x,y)`, `phi(y,x)` of
/// a distinct pair to `t`; single-variable clauses contribute to `s` only.
pub fn normalize(mln: &Mln) -> NormalForm {
    let lang = mln.language().clone();
    let layout = PairLayout::new(lang.u(), lang.b());
    let u = layout.u();

    let mut log_s = vec![0.0; u];
    let mut admissible1 = vec![true; u];
    for i in 0..u {
        let tau = LiftedInterpretation::from_one_type(i);
        for c in mln.clauses() {
            let holds = c.formula.eval(&tau, Substitution::DIAGONAL_X);
            match c.weight {
                Weight::Soft(a) if holds => log_s[i] += a,
                Weight::Soft(_) => {}
                Weight::Hard => admissible1[i] &= holds,
            }
        }
        if !admissible1[i] {
            log_s[i] = f64::NEG_INFINITY;
        }
    }

    let mut log_t = vec![0.0; layout.len()];
    let mut admissible2 = vec![true; layout.len()];
    for (i, j) in layout.pairs() {
        for l in 0..layout.b() {
            let cell = layout.cell(i, j, l);
            let tau = LiftedInterpretation::from_types(&lang, i, j, l);
            let mut ok = admissible1[i] && admissible1[j];
            let mut acc = 0.0;
            for c in mln.clauses().iter().filter(|c| c.formula.is_two_variable()) {
                let fwd = c.formula.eval(&tau, Substitution::IDENTITY);
                let back = c.formula.eval(&tau, Substitution::SWAP);
                match c.weight {
                    Weight::Soft(a) => acc += a * (fwd as u8 + back as u8) as f64,
                    Weight::Hard => ok &= fwd && back,
                }
            }
            admissible2[cell] = ok;
            log_t[cell] = if ok { acc } else { f64::NEG_INFINITY };
        }
    }

    let mut log_f = vec![f64::NEG_INFINITY; u * u];
    for (i, j) in layout.pairs() {
        let start = layout.cell(i, j, 0);
        let v = log_sum_exp(log_t[start..start + layout.b()].iter().copied());
        log_f[i * u + j] = v;
        log_f[j * u + i] = v;
    }

    NormalForm {
        lang,
        layout,
        log_s,
        log_t,
        log_f,
        admissible1,
        admissible2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, parse_language};
    use crate::math::ln;
    use crate::mln::Clause;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn single_binary_clause() {
        let lang = parse_language("predicate R/2").unwrap();
        let f = parse_formula("R(x,y)", &lang).unwrap();
        let nf = normalize(&Mln::new(lang, vec![Clause::soft(f, ln(2.0))]).unwrap());
        assert!(close(nf.s(0), 1.0) && close(nf.s(1), 2.0));
        for (i, j) in nf.layout().pairs() {
            let t: Vec<f64> = (0..4).map(|l| nf.t(i, j, l)).collect();
            for (a, b) in t.iter().zip([1.0, 2.0, 2.0, 4.0]) {
                assert!(close(*a, b));
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(nf.f(i, j), 9.0));
            }
        }
    }

    #[test]
    fn unary_binary_clause() {
        let lang = parse_language("predicate A/1\npredicate R/2").unwrap();
        let f = parse_formula("A(x) & R(x,y)", &lang).unwrap();
        let nf = normalize(&Mln::new(lang, vec![Clause::soft(f, ln(2.0))]).unwrap());
        let s: Vec<f64> = (0..4).map(|i| nf.s(i)).collect();
        for (a, b) in s.iter().zip([1.0, 1.0, 1.0, 2.0]) {
            assert!(close(*a, b));
        }
        assert!(close(nf.f(0, 0), 4.0));
        assert!(close(nf.f(1, 1), 9.0));
        assert!(close(nf.f(0, 1), 6.0));
        assert!(close(nf.f(1, 0), 6.0));
    }

    #[test]
    fn empty_network() {
        let lang = parse_language("predicate A/1\npredicate R/2").unwrap();
        let nf = normalize(&Mln::new(lang, vec![]).unwrap());
        for i in 0..4 {
            assert_eq!(nf.s(i), 1.0);
            for j in 0..4 {
                assert!(close(nf.f(i, j), 4.0));
                for l in 0..4 {
                    assert_eq!(nf.t(i, j, l), 1.0);
                }
            }
        }
    }

    #[test]
    fn hard_clauses_zero_out_types() {
        let lang = parse_language("predicate A/1\npredicate R/2").unwrap();
        let no_loop = parse_formula("!R(x,x)", &lang).unwrap();
        let sym = parse_formula("R(x,y) -> R(y,x)", &lang).unwrap();
        let nf =
            normalize(&Mln::new(lang, vec![Clause::hard(no_loop), Clause::hard(sym)]).unwrap());
        assert!(nf.is_admissible(0) && nf.is_admissible(1));
        assert!(!nf.is_admissible(2) && !nf.is_admissible(3));
        assert_eq!(nf.s(2), 0.0);
        // asymmetric tables are excluded, symmetric ones kept
        assert!(nf.is_admissible_pair(0, 1, 0) && nf.is_admissible_pair(0, 1, 3));
        assert!(!nf.is_admissible_pair(0, 1, 1) && !nf.is_admissible_pair(0, 1, 2));
        // anything touching an inadmissible type is zero
        assert!(!nf.is_admissible_pair(0, 2, 0));
        assert!(close(nf.f(0, 1), 2.0));
        assert_eq!(nf.f(2, 2), 0.0);
    }

    #[test]
    fn stored_tensor_respects_duality() {
        let lang = parse_language("predicate A/1\npredicate R/2").unwrap();
        let f = parse_formula("A(x) & !A(y) & R(x,y) | R(y,x) & A(y)", &lang).unwrap();
        let nf = normalize(&Mln::new(lang.clone(), vec![Clause::soft(f, 0.7)]).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                for l in 0..4 {
                    assert_eq!(nf.log_t(i, j, l), nf.log_t(j, i, lang.dual(l)));
                }
                assert_eq!(nf.log_f(i, j), nf.log_f(j, i));
            }
        }
    }
}
