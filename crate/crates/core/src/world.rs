//! Finite interpretations stored as multi-relational graphs: a 1-type per
//! domain element and a canonical 2-type per unordered pair.

use alloc::vec;
use alloc::vec::Vec;

use crate::combinatorics::choose2;
use crate::error::{Error, Result};
use crate::layout::PairLayout;
use crate::logic::{Arity, Language};

/// Default bound on the number of ground atoms for exhaustive enumeration.
pub const DEFAULT_ATOM_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroundArgs {
    One(usize),
    Two(usize, usize),
}

/// A ground atom over the domain `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: usize,
    pub args: GroundArgs,
}

/// The 2-type of an unordered pair in canonical orientation, `i <= j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairType {
    pub i: usize,
    pub j: usize,
    pub l: usize,
}

/// An interpretation over the domain `0..n`.
///
/// For a pair `q < r` the stored entry is `(x[q], x[r], l)` with `l` the
/// table realized by `(q, r)` when `x[q] <= x[r]`, and
/// `(x[r], x[q], dual(l))` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct World {
    n: usize,
    types: Vec<usize>,
    pairs: Vec<PairType>,
}

#[inline]
fn pair_slot(n: usize, q: usize, r: usize) -> usize {
    debug_assert!(q < r && r < n);
    q * n - q * (q + 1) / 2 + (r - q - 1)
}

fn canonical(lang: &Language, types: &[usize], q: usize, r: usize, l_qr: usize) -> PairType {
    let (tq, tr) = (types[q], types[r]);
    if tq <= tr {
        PairType {
            i: tq,
            j: tr,
            l: l_qr,
        }
    } else {
        PairType {
            i: tr,
            j: tq,
            l: lang.dual(l_qr),
        }
    }
}

impl World {
    /// Builds a world from 1-types and the oriented table of every pair
    /// `q < r` in row-major order.
    pub fn from_parts(lang: &Language, types: Vec<usize>, tables: &[usize]) -> Result<Self> {
        let n = types.len();
        if tables.len() as u64 != choose2(n) {
            return Err(Error::InvalidArgument(alloc::format!(
                "expected {} pair tables, got {}",
                choose2(n),
                tables.len()
            )));
        }
        if let Some(&t) = types.iter().find(|&&t| t >= lang.u()) {
            return Err(Error::InvalidArgument(alloc::format!(
                "1-type {t} out of range"
            )));
        }
        if let Some(&l) = tables.iter().find(|&&l| l >= lang.b()) {
            return Err(Error::InvalidArgument(alloc::format!(
                "2-table {l} out of range"
            )));
        }
        let mut pairs = Vec::with_capacity(tables.len());
        let mut it = tables.iter();
        for q in 0..n {
            for r in q + 1..n {
                pairs.push(canonical(lang, &types, q, r, *it.next().unwrap()));
            }
        }
        Ok(Self { n, types, pairs })
    }

    /// Builds a world directly from canonical pair entries (row-major `q < r`).
    pub(crate) fn from_canonical(n: usize, types: Vec<usize>, pairs: Vec<PairType>) -> Self {
        debug_assert_eq!(pairs.len() as u64, choose2(n));
        Self { n, types, pairs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-type of every element.
    pub fn types(&self) -> &[usize] {
        &self.types
    }

    /// Canonical 2-types of the pairs `q < r`, row-major.
    pub fn pairs(&self) -> &[PairType] {
        &self.pairs
    }

    pub fn pair(&self, q: usize, r: usize) -> PairType {
        let (lo, hi) = if q < r { (q, r) } else { (r, q) };
        self.pairs[pair_slot(self.n, lo, hi)]
    }

    /// The 2-table realized by the ordered pair `(q, r)`, `q != r`.
    pub fn table(&self, lang: &Language, q: usize, r: usize) -> usize {
        let (lo, hi) = if q < r { (q, r) } else { (r, q) };
        let e = self.pairs[pair_slot(self.n, lo, hi)];
        let forward = if self.types[lo] <= self.types[hi] {
            e.l
        } else {
            lang.dual(e.l)
        };
        if q < r {
            forward
        } else {
            lang.dual(forward)
        }
    }

    pub fn holds(&self, lang: &Language, atom: &GroundAtom) -> bool {
        let p = atom.predicate;
        match atom.args {
            GroundArgs::One(c) => (self.types[c] >> p) & 1 == 1,
            GroundArgs::Two(c, d) if c == d => (self.types[c] >> p) & 1 == 1,
            GroundArgs::Two(c, d) => {
                let r = lang.binary_rank(p).expect("binary predicate");
                (self.table(lang, c, d) >> (2 * r)) & 1 == 1
            }
        }
    }

    /// Every true ground atom, ordered by predicate then arguments.
    pub fn true_atoms(&self, lang: &Language) -> Vec<GroundAtom> {
        GroundIndex::new(lang, self.n)
            .atoms()
            .iter()
            .filter(|a| self.holds(lang, a))
            .copied()
            .collect()
    }
}

/// Fixed enumeration order of the ground atoms of a domain: predicates in
/// language order, arguments lexicographically.
#[derive(Debug, Clone)]
pub struct GroundIndex {
    n: usize,
    offsets: Vec<usize>,
    arities: Vec<Arity>,
    atoms: Vec<GroundAtom>,
}

impl GroundIndex {
    pub fn new(lang: &Language, n: usize) -> Self {
        let mut offsets = Vec::with_capacity(lang.predicates().len());
        let mut atoms = Vec::with_capacity(lang.ground_atom_count(n));
        for (p, pred) in lang.predicates().iter().enumerate() {
            offsets.push(atoms.len());
            match pred.arity {
                Arity::Unary => atoms.extend((0..n).map(|c| GroundAtom {
                    predicate: p,
                    args: GroundArgs::One(c),
                })),
                Arity::Binary => {
                    for c in 0..n {
                        atoms.extend((0..n).map(|d| GroundAtom {
                            predicate: p,
                            args: GroundArgs::Two(c, d),
                        }))
                    }
                }
            }
        }
        Self {
            n,
            offsets,
            arities: lang.predicates().iter().map(|p| p.arity).collect(),
            atoms,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    #[inline]
    pub fn unary(&self, predicate: usize, c: usize) -> usize {
        self.offsets[predicate] + c
    }

    #[inline]
    pub fn binary(&self, predicate: usize, c: usize, d: usize) -> usize {
        self.offsets[predicate] + c * self.n + d
    }

    pub fn position(&self, atom: &GroundAtom) -> usize {
        match (self.arities[atom.predicate], atom.args) {
            (Arity::Unary, GroundArgs::One(c)) => self.unary(atom.predicate, c),
            (Arity::Binary, GroundArgs::Two(c, d)) => self.binary(atom.predicate, c, d),
            _ => panic!("ground atom does not match predicate arity"),
        }
    }
}

fn check_atom(lang: &Language, n: usize, atom: &GroundAtom) -> Result<()> {
    let pred = lang
        .predicates()
        .get(atom.predicate)
        .ok_or_else(|| Error::UnknownPredicate(alloc::format!("#{}", atom.predicate)))?;
    let (found, consts): (usize, &[usize]) = match &atom.args {
        GroundArgs::One(c) => (1, core::slice::from_ref(c)),
        GroundArgs::Two(c, d) => {
            for &k in [c, d] {
                if k >= n {
                    return Err(Error::ConstantOutOfRange { constant: k, n });
                }
            }
            (2, &[])
        }
    };
    if found != pred.arity.count() {
        return Err(Error::ArityMismatch {
            name: pred.name.clone(),
            expected: pred.arity.count(),
            found,
        });
    }
    for &k in consts {
        if k >= n {
            return Err(Error::ConstantOutOfRange { constant: k, n });
        }
    }
    Ok(())
}

/// The world over `0..n` in which exactly `true_atoms` hold.
pub fn world_from_atoms<'a>(
    lang: &Language,
    n: usize,
    true_atoms: impl IntoIterator<Item = &'a GroundAtom>,
) -> Result<World> {
    let mut types = vec![0usize; n];
    let mut tables = vec![0usize; choose2(n) as usize];
    for atom in true_atoms {
        check_atom(lang, n, atom)?;
        let p = atom.predicate;
        match atom.args {
            GroundArgs::One(c) => types[c] |= 1 << p,
            GroundArgs::Two(c, d) if c == d => types[c] |= 1 << p,
            GroundArgs::Two(c, d) => {
                let r = lang.binary_rank(p).unwrap();
                let (lo, hi, bit) = if c < d {
                    (c, d, 2 * r)
                } else {
                    (d, c, 2 * r + 1)
                };
                tables[pair_slot(n, lo, hi)] |= 1 << bit;
            }
        }
    }
    World::from_parts(lang, types, &tables)
}

/// Counts of 1-types and canonical 2-types.
///
/// `h` counts every unordered pair once under the world's canonical
/// orientation; for `i == j` the table is further folded to
/// `min(l, dual(l))`, so only that cell of a dual pair is populated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SufficientStats {
    pub n: usize,
    pub k: Vec<u64>,
    pub h: Vec<u64>,
    pub layout: PairLayout,
}

impl SufficientStats {
    pub fn h(&self, i: usize, j: usize, l: usize) -> u64 {
        self.h[self.layout.cell(i, j, l)]
    }

    /// `k(i,j)`: the number of unordered pairs with 1-types `{i, j}`.
    pub fn k_pair(&self, i: usize, j: usize) -> u64 {
        if i == j {
            self.k[i] * self.k[i].saturating_sub(1) / 2
        } else {
            self.k[i] * self.k[j]
        }
    }
}

pub fn stats(lang: &Language, world: &World) -> SufficientStats {
    let layout = PairLayout::new(lang.u(), lang.b());
    let mut k = vec![0u64; lang.u()];
    for &t in &world.types {
        k[t] += 1;
    }
    let mut h = vec![0u64; layout.len()];
    for e in &world.pairs {
        let l = if e.i == e.j {
            e.l.min(lang.dual(e.l))
        } else {
            e.l
        };
        h[layout.cell(e.i, e.j, l)] += 1;
    }
    SufficientStats {
        n: world.n,
        k,
        h,
        layout,
    }
}

/// The sub-world on `subset`, relabelled `0..subset.len()` in the given order.
pub fn restrict(lang: &Language, world: &World, subset: &[usize]) -> Result<World> {
    if subset.is_empty() {
        return Err(Error::InvalidSubset("empty subset".into()));
    }
    let mut seen = vec![false; world.n];
    for &c in subset {
        if c >= world.n {
            return Err(Error::ConstantOutOfRange {
                constant: c,
                n: world.n,
            });
        }
        if seen[c] {
            return Err(Error::InvalidSubset(alloc::format!("element {c} repeated")));
        }
        seen[c] = true;
    }
    let m = subset.len();
    let types: Vec<usize> = subset.iter().map(|&c| world.types[c]).collect();
    let mut pairs = Vec::with_capacity(choose2(m) as usize);
    for a in 0..m {
        for b in a + 1..m {
            let l = world.table(lang, subset[a], subset[b]);
            pairs.push(canonical(lang, &types, a, b, l));
        }
    }
    Ok(World::from_canonical(m, types, pairs))
}

/// Every world of size `n`, one per ground-atom bitmask in increasing order.
pub fn enumerate_worlds(lang: &Language, n: usize, cap: usize) -> Result<WorldIter> {
    let index = GroundIndex::new(lang, n);
    if index.len() > cap || index.len() >= 64 {
        return Err(Error::EnumerationCap {
            atoms: index.len(),
            cap,
        });
    }
    Ok(WorldIter {
        lang: lang.clone(),
        end: 1u64 << index.len(),
        index,
        mask: 0,
    })
}

pub struct WorldIter {
    lang: Language,
    index: GroundIndex,
    mask: u64,
    end: u64,
}

impl WorldIter {
    pub fn ground_index(&self) -> &GroundIndex {
        &self.index
    }
}

impl Iterator for WorldIter {
    type Item = World;

    fn next(&mut self) -> Option<World> {
        if self.mask >= self.end {
            return None;
        }
        let mask = self.mask;
        self.mask += 1;
        let atoms = self.index.atoms();
        let truths = (0..atoms.len())
            .filter(|&b| (mask >> b) & 1 == 1)
            .map(|b| &atoms[b]);
        Some(world_from_atoms(&self.lang, self.index.n(), truths).expect("indexed atoms are valid"))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.mask) as usize;
        (left, Some(left))
    }
}
