//! k-subset enumeration and guarded counting.

use crate::error::{Error, Result};

/// Default upper bound on the number of tuples any single enumeration may visit.
pub const DEFAULT_GUARD: u64 = 10_000_000;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn ensure_within(needed: u128, limit: u64) -> Result<()> {
    if needed > limit as u128 {
        Err(Error::GuardExceeded { needed, limit })
    } else {
        Ok(())
    }
}

/// Lexicographic enumeration of the `k`-subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, current: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.n - k + i {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Odometer over the cartesian product `0..sizes[0] × … × 0..sizes[r-1]`,
/// last position varying fastest.
#[derive(Debug, Clone)]
pub struct Product {
    sizes: Vec<usize>,
    current: Vec<usize>,
    done: bool,
}

impl Product {
    pub fn new(sizes: Vec<usize>) -> Self {
        let done = sizes.iter().any(|&s| s == 0);
        let current = vec![0; sizes.len()];
        Self { sizes, current, done }
    }
}

impl Iterator for Product {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = self.sizes.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.current[i] += 1;
            if self.current[i] < self.sizes[i] {
                break;
            }
            self.current[i] = 0;
        }
        Some(out)
    }
}
