//! Permutations of `{0, …, n-1}` as index vectors.

use crate::{Error, Result};

/// A permutation stored as its image vector: `perm.apply(x) == perm.0[x]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    /// Checks that the image vector is a bijection of `{0, …, n-1}`.
    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n {
                return Err(Error::Format(format!("permutation entry {y} out of range for size {n}")));
            }
            if seen[y] {
                return Err(Error::Format(format!("permutation repeats image {y}")));
            }
            seen[y] = true;
        }
        Ok(Perm(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &y)| i == y)
    }

    /// Function composition: `(a.compose(b)).apply(x) == a.apply(b.apply(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Perm(inv)
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        let n = self.0.len();
        (0..n).all(|x| self.0[other.0[x]] == other.0[self.0[x]])
    }

    /// `self` raised to an integer power (negative powers via the inverse).
    pub fn pow(&self, k: i64) -> Perm {
        let base = if k >= 0 { self.clone() } else { self.inverse() };
        let mut out = Perm::identity(self.0.len());
        for _ in 0..k.unsigned_abs() {
            out = base.compose(&out);
        }
        out
    }
}

/// All permutations of `{0, …, n-1}` in lexicographic order of their image
/// vectors (so the identity comes first).
pub fn all_perms(n: usize) -> Vec<Perm> {
    use itertools::Itertools;
    (0..n).permutations(n).map(Perm).collect()
}
