//! Compositions of `n` into `u` ordered non-negative parts and the
//! multinomial coefficients that go with them.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

/// Iterates the weak compositions of `n` into `parts` parts in
/// colexicographic order, starting at `(n, 0, ..., 0)` and ending at
/// `(0, ..., 0, n)`.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Vec<usize>,
    done: bool,
}

impl Compositions {
    pub fn new(n: usize, parts: usize) -> Self {
        if parts == 0 {
            return Self {
                current: Vec::new(),
                done: n != 0,
            };
        }
        let mut current = vec![0; parts];
        current[0] = n;
        Self {
            current,
            done: false,
        }
    }

    fn has_successor(&self) -> bool {
        match self.current.iter().position(|&k| k > 0) {
            None => false,
            Some(i) => i + 1 < self.current.len(),
        }
    }

    fn step(&mut self) {
        let i = self
            .current
            .iter()
            .position(|&k| k > 0)
            .expect("step called on a final composition");
        let v = self.current[i];
        self.current[i] = 0;
        self.current[0] = v - 1;
        self.current[i + 1] += 1;
    }

    /// Visits every composition in order.
    pub fn for_each(n: usize, parts: usize, mut f: impl FnMut(&[usize])) {
        let mut it = Self::new(n, parts);
        loop {
            if it.done {
                return;
            }
            f(&it.current);
            if it.has_successor() {
                it.step();
            } else {
                it.done = true;
            }
        }
    }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        if self.has_successor() {
            self.step();
        } else {
            self.done = true;
        }
        Some(out)
    }
}

/// Number of unordered pairs between the `i`-th and `j`-th blocks of a
/// composition: `k_i (k_i - 1) / 2` when `i == j`, `k_i k_j` otherwise.
#[inline]
pub fn pair_count(k: &[usize], i: usize, j: usize) -> u64 {
    if i == j {
        let ki = k[i] as u64;
        ki * ki.saturating_sub(1) / 2
    } else {
        k[i] as u64 * k[j] as u64
    }
}

/// `n (n - 1) / 2`.
#[inline]
pub fn choose2(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Exact multinomial coefficient `n! / prod k_i!` with `n = sum k_i`.
pub fn multinomial(k: &[usize]) -> BigUint {
    // Product of binomials C(k_1 + ... + k_i, k_i) keeps intermediates small.
    let mut out = BigUint::one();
    let mut total = 0usize;
    for &ki in k {
        for step in 1..=ki {
            total += 1;
            out *= BigUint::from(total);
            out /= BigUint::from(step);
        }
    }
    out
}

/// `ln(n! / prod k_i!)` from a precomputed `ln k!` table.
pub fn ln_multinomial(k: &[usize], ln_fact: &[f64]) -> f64 {
    let n: usize = k.iter().sum();
    ln_fact[n] - k.iter().map(|&ki| ln_fact[ki]).sum::<f64>()
}
