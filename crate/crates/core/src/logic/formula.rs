use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use super::language::Language;
use super::types::LiftedInterpretation;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::Y => "y",
        })
    }
}

/// Subset of `{x, y}`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct VarSet {
    pub x: bool,
    pub y: bool,
}

impl VarSet {
    pub fn insert(&mut self, v: Var) {
        match v {
            Var::X => self.x = true,
            Var::Y => self.y = true,
        }
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet {
            x: self.x || other.x,
            y: self.y || other.y,
        }
    }

    pub fn len(self) -> usize {
        self.x as usize + self.y as usize
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomArgs {
    One(Var),
    Two(Var, Var),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Atom {
    /// Index into [`Language::predicates`].
    pub predicate: usize,
    pub args: AtomArgs,
}

impl Atom {
    pub fn unary(predicate: usize, v: Var) -> Self {
        Self {
            predicate,
            args: AtomArgs::One(v),
        }
    }

    pub fn binary(predicate: usize, a: Var, b: Var) -> Self {
        Self {
            predicate,
            args: AtomArgs::Two(a, b),
        }
    }

    pub fn variables(&self) -> VarSet {
        let mut vs = VarSet::default();
        match self.args {
            AtomArgs::One(v) => vs.insert(v),
            AtomArgs::Two(a, b) => {
                vs.insert(a);
                vs.insert(b);
            }
        }
        vs
    }

    fn substituted(&self, sub: Substitution) -> Atom {
        let args = match self.args {
            AtomArgs::One(v) => AtomArgs::One(sub.apply(v)),
            AtomArgs::Two(a, b) => AtomArgs::Two(sub.apply(a), sub.apply(b)),
        };
        Atom {
            predicate: self.predicate,
            args,
        }
    }

    /// Truth of the atom under `tau` after renaming its variables by `sub`.
    fn eval(&self, tau: &LiftedInterpretation, sub: Substitution) -> bool {
        match self.args {
            AtomArgs::One(v) => tau.single(sub.apply(v), self.predicate),
            AtomArgs::Two(a, b) => {
                let (a, b) = (sub.apply(a), sub.apply(b));
                if a == b {
                    tau.single(a, self.predicate)
                } else {
                    tau.cross(self.predicate, a == Var::X)
                }
            }
        }
    }
}

/// A renaming of the formula variables onto the variables of a lifted
/// interpretation, e.g. `y := x` to form `phi(x, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Substitution {
    pub x: Var,
    pub y: Var,
}

impl Substitution {
    pub const IDENTITY: Self = Self {
        x: Var::X,
        y: Var::Y,
    };
    pub const SWAP: Self = Self {
        x: Var::Y,
        y: Var::X,
    };
    pub const DIAGONAL_X: Self = Self {
        x: Var::X,
        y: Var::X,
    };
    pub const DIAGONAL_Y: Self = Self {
        x: Var::Y,
        y: Var::Y,
    };

    pub fn apply(self, v: Var) -> Var {
        match v {
            Var::X => self.x,
            Var::Y => self.y,
        }
    }
}

/// Quantifier-free FO² formula over `x` and `y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// The marker `x != y`.
    Distinct,
    Const(bool),
}

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `None` for an empty list.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// Variables mentioned by atoms and by the distinctness marker.
    pub fn variables(&self) -> VarSet {
        match self {
            Formula::Atom(a) => a.variables(),
            Formula::Distinct => VarSet { x: true, y: true },
            Formula::Const(_) => VarSet::default(),
            Formula::Not(f) => f.variables(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.variables().union(b.variables()),
        }
    }

    /// True when the formula mentions both `x` and `y`.
    pub fn is_two_variable(&self) -> bool {
        self.variables().len() == 2
    }

    /// Atoms in left-to-right order.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Formula::Atom(a) => out.push(*a),
            Formula::Distinct | Formula::Const(_) => {}
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// `phi(x, x)`: every `y` renamed to `x`; the marker becomes `false`.
    pub fn diagonal(&self) -> Formula {
        match self {
            Formula::Distinct => Formula::Const(false),
            Formula::Const(c) => Formula::Const(*c),
            Formula::Atom(a) => Formula::Atom(a.substituted(Substitution::DIAGONAL_X)),
            Formula::Not(g) => Formula::not(g.diagonal()),
            Formula::And(a, b) => Formula::and(a.diagonal(), b.diagonal()),
            Formula::Or(a, b) => Formula::or(a.diagonal(), b.diagonal()),
            Formula::Implies(a, b) => Formula::implies(a.diagonal(), b.diagonal()),
            Formula::Iff(a, b) => Formula::iff(a.diagonal(), b.diagonal()),
        }
    }

    /// The formula with `x` and `y` exchanged.
    pub fn swapped(&self) -> Formula {
        self.map_atoms(&|a| a.substituted(Substitution::SWAP))
    }

    fn map_atoms(&self, f: &dyn Fn(&Atom) -> Atom) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(f(a)),
            Formula::Distinct => Formula::Distinct,
            Formula::Const(c) => Formula::Const(*c),
            Formula::Not(g) => Formula::not(g.map_atoms(f)),
            Formula::And(a, b) => Formula::and(a.map_atoms(f), b.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
        }
    }

    /// Checks every atom against the language.
    pub fn validate(&self, lang: &Language) -> Result<()> {
        for a in self.atoms() {
            let p = lang
                .predicates()
                .get(a.predicate)
                .ok_or_else(|| Error::UnknownPredicate(alloc::format!("#{}", a.predicate)))?;
            let found = match a.args {
                AtomArgs::One(_) => 1,
                AtomArgs::Two(..) => 2,
            };
            if found != p.arity.count() {
                return Err(Error::ArityMismatch {
                    name: p.name.clone(),
                    expected: p.arity.count(),
                    found,
                });
            }
        }
        Ok(())
    }

    /// Truth value under `tau` with the variables renamed by `sub`. The
    /// marker `x != y` holds exactly when `sub` keeps the variables apart.
    pub fn eval(&self, tau: &LiftedInterpretation, sub: Substitution) -> bool {
        match self {
            Formula::Atom(a) => a.eval(tau, sub),
            Formula::Distinct => sub.x != sub.y,
            Formula::Const(c) => *c,
            Formula::Not(f) => !f.eval(tau, sub),
            Formula::And(a, b) => a.eval(tau, sub) && b.eval(tau, sub),
            Formula::Or(a, b) => a.eval(tau, sub) || b.eval(tau, sub),
            Formula::Implies(a, b) => !a.eval(tau, sub) || b.eval(tau, sub),
            Formula::Iff(a, b) => a.eval(tau, sub) == b.eval(tau, sub),
        }
    }

    /// Generic evaluation against any atom valuation; `distinct` is the
    /// value given to the marker.
    pub fn eval_with(&self, atom: &mut impl FnMut(&Atom) -> bool, distinct: bool) -> bool {
        match self {
            Formula::Atom(a) => atom(a),
            Formula::Distinct => distinct,
            Formula::Const(c) => *c,
            Formula::Not(f) => !f.eval_with(atom, distinct),
            Formula::And(a, b) => a.eval_with(atom, distinct) && b.eval_with(atom, distinct),
            Formula::Or(a, b) => a.eval_with(atom, distinct) || b.eval_with(atom, distinct),
            Formula::Implies(a, b) => !a.eval_with(atom, distinct) || b.eval_with(atom, distinct),
            Formula::Iff(a, b) => a.eval_with(atom, distinct) == b.eval_with(atom, distinct),
        }
    }

    /// Display adapter that resolves predicate names.
    pub fn display<'a>(&'a self, lang: &'a Language) -> FormulaDisplay<'a> {
        FormulaDisplay {
            formula: self,
            lang,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) => 5,
            Formula::Atom(_) | Formula::Distinct | Formula::Const(_) => 6,
        }
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    lang: &'a Language,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula, min_prec: u8) -> fmt::Result {
        let prec = node.precedence();
        let paren = prec < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match node {
            Formula::Atom(a) => {
                let name = &self.lang.predicate(a.predicate).name;
                match a.args {
                    AtomArgs::One(v) => write!(f, "{name}({v})")?,
                    AtomArgs::Two(p, q) => write!(f, "{name}({p},{q})")?,
                }
            }
            Formula::Distinct => f.write_str("x != y")?,
            Formula::Const(c) => f.write_str(if *c { "true" } else { "false" })?,
            Formula::Not(g) => {
                f.write_str("!")?;
                self.write(f, g, 5)?;
            }
            Formula::And(a, b) => self.infix(f, a, " & ", b, prec, false)?,
            Formula::Or(a, b) => self.infix(f, a, " | ", b, prec, false)?,
            Formula::Implies(a, b) => self.infix(f, a, " -> ", b, prec, true)?,
            Formula::Iff(a, b) => self.infix(f, a, " <-> ", b, prec, false)?,
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }

    fn infix(
        &self,
        f: &mut fmt::Formatter<'_>,
        a: &Formula,
        op: &str,
        b: &Formula,
        prec: u8,
        right_assoc: bool,
    ) -> fmt::Result {
        let (left_min, right_min) = if right_assoc {
            (prec + 1, prec)
        } else {
            (prec, prec + 1)
        };
        self.write(f, a, left_min)?;
        f.write_str(op)?;
        self.write(f, b, right_min)
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, 0)
    }
}
