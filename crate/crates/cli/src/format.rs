//! Text formats. Every format is line based, `#` starts a comment, and
//! 1-types, 2-tables and domain constants are numbered from 1.
//!
//! * declarations: `predicate NAME/ARITY`
//! * MLN: declarations, then `WEIGHT :: FORMULA` with `WEIGHT` a decimal,
//!   `HARD`, or (in structure files) `?` for a free weight starting at 0
//! * world: `domain N`, then ground atoms such as `R(1,2)` separated by
//!   whitespace
//! * RBM: declarations, then `p I VALUE` and `w I J L VALUE` (`I <= J`);
//!   rows whose lines carry the comment `# unobserved` are flagged as such
//! * formula: declarations, then formula lines that are conjoined

use std::fmt::Write as _;

use projmln_core::logic::parse_predicate_decl;
use projmln_core::{
    parse_formula, world_from_atoms, Clause, Error as CoreError, Formula, GroundArgs, GroundAtom,
    Language, Mln, PairLayout, RbmParams, Weight, World,
};

/// A problem at a line of an input file.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn split_comment(line: &str) -> (&str, Option<&str>) {
    match line.split_once('#') {
        Some((body, comment)) => (body, Some(comment.trim())),
        None => (line, None),
    }
}

/// Moves a core error reported against a single line onto `line`.
fn at_line(line: usize, err: CoreError) -> FormatError {
    match err {
        CoreError::Syntax {
            column, message, ..
        } => FormatError::new(line, format!("column {column}: {message}")),
        other => FormatError::new(line, other.to_string()),
    }
}

/// Reads the `predicate` lines of `text` and hands the rest, with line
/// numbers, back to the caller.
fn split_declarations(text: &str) -> Result<(Language, Vec<(usize, &str)>)> {
    let mut decls = Vec::new();
    let mut rest = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        match parse_predicate_decl(line, line_no).map_err(|e| at_line(line_no, e))? {
            Some(decl) => {
                if !rest.is_empty() {
                    return Err(FormatError::new(line_no, "declarations must come first"));
                }
                decls.push(decl);
            }
            None => {
                if !split_comment(line).0.trim().is_empty() {
                    rest.push((line_no, line));
                }
            }
        }
    }
    let lang = Language::new(decls).map_err(|e| FormatError::new(1, e.to_string()))?;
    Ok((lang, rest))
}

/// The language declared by the `predicate` lines of any of the formats;
/// other lines are ignored.
pub fn parse_declarations(text: &str) -> Result<Language> {
    let mut decls = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if let Some(decl) = parse_predicate_decl(line, idx + 1).map_err(|e| at_line(idx + 1, e))? {
            decls.push(decl);
        }
    }
    Language::new(decls).map_err(|e| FormatError::new(1, e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeWeights {
    Allowed,
    Forbidden,
}

pub fn parse_mln(text: &str, free: FreeWeights) -> Result<Mln> {
    let (lang, lines) = split_declarations(text)?;
    let mut clauses = Vec::new();
    for (line_no, line) in lines {
        let body = split_comment(line).0;
        let (weight, formula) = body
            .split_once("::")
            .ok_or_else(|| FormatError::new(line_no, "expected `WEIGHT :: FORMULA`"))?;
        let formula = parse_formula(formula, &lang).map_err(|e| at_line(line_no, e))?;
        let clause = match weight.trim() {
            "HARD" => Clause::hard(formula),
            "?" if free == FreeWeights::Allowed => Clause::soft(formula, 0.0),
            w => {
                let value: f64 = w
                    .parse()
                    .map_err(|_| FormatError::new(line_no, format!("invalid weight `{w}`")))?;
                if !value.is_finite() {
                    return Err(FormatError::new(line_no, "weight must be finite"));
                }
                Clause::soft(formula, value)
            }
        };
        clauses.push(clause);
    }
    Mln::new(lang, clauses).map_err(|e| FormatError::new(1, e.to_string()))
}

pub fn write_mln(mln: &Mln) -> String {
    let lang = mln.language();
    let mut out = lang.to_string();
    for c in mln.clauses() {
        let weight = match c.weight {
            Weight::Hard => "HARD".to_string(),
            Weight::Soft(w) => format!("{w:?}"),
        };
        writeln!(out, "{weight} :: {}", c.formula.display(lang)).unwrap();
    }
    out
}

/// Declarations followed by formula lines, read as their conjunction.
pub fn parse_fol(text: &str) -> Result<(Language, Formula)> {
    let (lang, lines) = split_declarations(text)?;
    let mut parts = Vec::new();
    for (line_no, line) in lines {
        parts.push(parse_formula(split_comment(line).0, &lang).map_err(|e| at_line(line_no, e))?);
    }
    let formula = Formula::conjunction(parts).ok_or_else(|| FormatError::new(1, "no formula"))?;
    Ok((lang, formula))
}

struct Scanner<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
}

impl Scanner<'_> {
    fn skip_space(&mut self) {
        while self.chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
    }

    fn name(&mut self) -> Option<&str> {
        self.skip_space();
        let &(start, c) = self.chars.peek()?;
        if !(c.is_ascii_alphabetic() || c == '_') {
            return None;
        }
        let mut end = start;
        while let Some((i, c)) = self
            .chars
            .next_if(|(_, c)| c.is_ascii_alphanumeric() || *c == '_')
        {
            end = i + c.len_utf8();
        }
        Some(&self.text[start..end])
    }

    fn expect(&mut self, want: char) -> bool {
        self.skip_space();
        self.chars.next_if(|&(_, c)| c == want).is_some()
    }

    fn number(&mut self) -> Option<usize> {
        self.skip_space();
        let mut value: Option<usize> = None;
        while let Some((_, c)) = self.chars.next_if(|(_, c)| c.is_ascii_digit()) {
            let d = c.to_digit(10).unwrap() as usize;
            value = Some(value.unwrap_or(0).checked_mul(10)?.checked_add(d)?);
        }
        value
    }

    fn at_end(&mut self) -> bool {
        self.skip_space();
        self.chars.peek().is_none()
    }
}

fn parse_atom(
    scanner: &mut Scanner<'_>,
    lang: &Language,
    n: usize,
    line: usize,
) -> Result<GroundAtom> {
    let err = |m: &str| FormatError::new(line, m.to_string());
    let name = scanner
        .name()
        .ok_or_else(|| err("expected a ground atom"))?
        .to_string();
    let predicate = lang
        .lookup(&name)
        .ok_or_else(|| err(&format!("unknown predicate `{name}`")))?;
    if !scanner.expect('(') {
        return Err(err("expected `(`"));
    }
    let mut args = vec![scanner.number().ok_or_else(|| err("expected a constant"))?];
    while scanner.expect(',') {
        args.push(scanner.number().ok_or_else(|| err("expected a constant"))?);
    }
    if !scanner.expect(')') {
        return Err(err("expected `)`"));
    }
    if let Some(&c) = args.iter().find(|&&c| c == 0 || c > n) {
        return Err(err(&format!("constant {c} outside 1..={n}")));
    }
    let expected = lang.predicate(predicate).arity.count();
    let args = match args[..] {
        [c] if expected == 1 => GroundArgs::One(c - 1),
        [c, d] if expected == 2 => GroundArgs::Two(c - 1, d - 1),
        _ => {
            return Err(err(&format!(
                "`{name}` expects {expected} argument(s), found {}",
                args.len()
            )))
        }
    };
    Ok(GroundAtom { predicate, args })
}

pub fn parse_world(text: &str, lang: &Language) -> Result<World> {
    let mut n = None;
    let mut atoms = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = split_comment(line).0;
        if body.trim().is_empty() {
            continue;
        }
        let Some(n) = n else {
            let value = body
                .trim()
                .strip_prefix("domain")
                .and_then(|v| v.trim().parse::<usize>().ok())
                .filter(|&v| v > 0)
                .ok_or_else(|| FormatError::new(line_no, "expected `domain N` with N >= 1"))?;
            n = Some(value);
            continue;
        };
        let mut scanner = Scanner {
            chars: body.char_indices().peekable(),
            text: body,
        };
        while !scanner.at_end() {
            atoms.push(parse_atom(&mut scanner, lang, n, line_no)?);
        }
    }
    let n = n.ok_or_else(|| FormatError::new(1, "missing `domain N` line"))?;
    world_from_atoms(lang, n, &atoms).map_err(|e| FormatError::new(1, e.to_string()))
}

pub fn write_world(lang: &Language, world: &World) -> String {
    let mut out = format!("domain {}\n", world.n());
    for atom in world.true_atoms(lang) {
        let name = &lang.predicate(atom.predicate).name;
        match atom.args {
            GroundArgs::One(c) => writeln!(out, "{name}({})", c + 1),
            GroundArgs::Two(c, d) => writeln!(out, "{name}({},{})", c + 1, d + 1),
        }
        .unwrap();
    }
    out
}

const UNOBSERVED: &str = "unobserved";

pub fn parse_rbm(text: &str) -> Result<RbmParams> {
    let (lang, lines) = split_declarations(text)?;
    let layout = PairLayout::new(lang.u(), lang.b());
    let mut p: Vec<Option<f64>> = vec![None; layout.u()];
    let mut w: Vec<Option<f64>> = vec![None; layout.len()];
    let mut unobserved = vec![0usize; layout.pair_count()];
    for (line_no, line) in lines {
        let (body, comment) = split_comment(line);
        let err = |m: String| FormatError::new(line_no, m);
        let fields: Vec<&str> = body.split_whitespace().collect();
        let index = |s: &str, bound: usize, what: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(v) if (1..=bound).contains(&v) => Ok(v - 1),
                _ => Err(err(format!("{what} index `{s}` outside 1..={bound}"))),
            }
        };
        let value = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| err(format!("invalid probability `{s}`")))
        };
        match fields[..] {
            ["p", i, v] => {
                let i = index(i, layout.u(), "1-type")?;
                if p[i].replace(value(v)?).is_some() {
                    return Err(err(format!("p {} given twice", i + 1)));
                }
            }
            ["w", i, j, l, v] => {
                let i = index(i, layout.u(), "1-type")?;
                let j = index(j, layout.u(), "1-type")?;
                let l = index(l, layout.b(), "2-table")?;
                if i > j {
                    return Err(err("w lines need I <= J".into()));
                }
                if w[layout.cell(i, j, l)].replace(value(v)?).is_some() {
                    return Err(err(format!("w {} {} {} given twice", i + 1, j + 1, l + 1)));
                }
                if comment == Some(UNOBSERVED) {
                    unobserved[layout.pair(i, j)] += 1;
                }
            }
            _ => return Err(err("expected `p I VALUE` or `w I J L VALUE`".into())),
        }
    }
    let missing =
        |what: String| FormatError::new(text.lines().count().max(1), format!("missing {what}"));
    let p = p
        .iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| missing(format!("p {}", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let mut cells = Vec::with_capacity(layout.len());
    for (i, j) in layout.pairs() {
        for l in 0..layout.b() {
            cells.push(
                w[layout.cell(i, j, l)]
                    .ok_or_else(|| missing(format!("w {} {} {}", i + 1, j + 1, l + 1)))?,
            );
        }
    }
    let observed = unobserved.iter().map(|&k| k < layout.b()).collect();
    RbmParams::with_observed(lang, p, cells, observed)
        .map_err(|e| FormatError::new(1, e.to_string()))
}

pub fn write_rbm(params: &RbmParams) -> String {
    let layout = params.layout();
    let mut out = params.language().to_string();
    for (i, v) in params.p().iter().enumerate() {
        writeln!(out, "p {} {v:?}", i + 1).unwrap();
    }
    for (i, j) in layout.pairs() {
        let tag = if params.is_observed(i, j) {
            String::new()
        } else {
            format!("  # {UNOBSERVED}")
        };
        for l in 0..layout.b() {
            writeln!(
                out,
                "w {} {} {} {:?}{tag}",
                i + 1,
                j + 1,
                l + 1,
                params.w(i, j, l)
            )
            .unwrap();
        }
    }
    out
}
