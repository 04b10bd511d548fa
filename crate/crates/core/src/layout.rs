/// Storage layout for tensors indexed by an unordered pair of 1-types
/// `i <= j` and a 2-table `l`. Pairs are laid out row-major over the upper
/// triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairLayout {
    u: usize,
    b: usize,
}

impl PairLayout {
    pub fn new(u: usize, b: usize) -> Self {
        Self { u, b }
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn pair_count(&self) -> usize {
        self.u * (self.u + 1) / 2
    }

    pub fn len(&self) -> usize {
        self.pair_count() * self.b
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of the unordered pair `{i, j}`; arguments may come in either order.
    pub fn pair(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        debug_assert!(j < self.u);
        i * (2 * self.u - i + 1) / 2 + (j - i)
    }

    /// Index of the canonical cell `(i, j, l)` with `i <= j`.
    pub fn cell(&self, i: usize, j: usize, l: usize) -> usize {
        debug_assert!(i <= j && l < self.b);
        self.pair(i, j) * self.b + l
    }

    /// All `(i, j)` with `i <= j`, in storage order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.u).flat_map(move |i| (i..self.u).map(move |j| (i, j)))
    }
}
